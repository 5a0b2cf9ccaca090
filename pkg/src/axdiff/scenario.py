"""Scenario files: a small line-oriented sectioned text format.

::

    [field]
    generators: t u
    d t = 1
    d u = u

    [ax]
    a: t
    b: u

    [dvariety]
    ambient: x
    ideal:
    section x = x
    sharp: u

    [residue]
    b: t (1/t)
    c: 1 1
    nu: 0

``#`` starts a comment.  List values are separated by whitespace outside
parentheses, so compound expressions must be parenthesized.  Every error
carries the line and column it refers to.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from axdiff.ax import AxScenario
from axdiff.difffield import DiffFieldPresentation
from axdiff.dvariety import AffineDVariety, PointOnX
from axdiff.kernel.parse import ParseError, UnknownSymbolError, parse_expr
from axdiff.kernel.ratfunc import RatFunc

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
_SECTIONS = ("field", "ax", "dvariety", "residue")


class ScenarioError(ValueError):
    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line, self.col, self.reason = line, col, message
        where = ""
        if line is not None:
            where = f"line {line}" + (f", col {col}" if col is not None else "") + ": "
        super().__init__(where + message)


@dataclass(frozen=True)
class Item:
    """A canonicalized expression plus where it came from."""

    text: str
    line: int | None = field(default=None, compare=False)
    col: int | None = field(default=None, compare=False)


@dataclass(frozen=True)
class AxSection:
    a: tuple[Item, ...]
    b: tuple[Item, ...]
    line: int | None = field(default=None, compare=False)


@dataclass(frozen=True)
class DVarietySection:
    ambient: tuple[str, ...]
    ideal: tuple[Item, ...]
    section: tuple[Item, ...]
    sharp: tuple[Item, ...] | None = None
    line: int | None = field(default=None, compare=False)


@dataclass(frozen=True)
class ResidueSection:
    b: tuple[Item, ...]
    c: tuple[Item, ...]
    nu: Item
    line: int | None = field(default=None, compare=False)


@dataclass(frozen=True)
class ScenarioDoc:
    generators: tuple[str, ...]
    derivation: tuple[Item, ...]
    ax: AxSection | None = None
    dvariety: DVarietySection | None = None
    residue: ResidueSection | None = None

    @property
    def has_checks(self) -> bool:
        return any(s is not None for s in (self.ax, self.dvariety, self.residue))


@dataclass(frozen=True)
class Built:
    field: DiffFieldPresentation
    dvariety: AffineDVariety | None = None
    sharp: PointOnX | None = None
    ax: AxScenario | None = None
    residue: tuple[tuple[RatFunc, ...], tuple[Fraction, ...], RatFunc] | None = None


# -- lexing helpers --------------------------------------------------------------

def split_list(text: str, offset: int = 0) -> list[tuple[str, int]]:
    """Split at whitespace outside parentheses; returns (item, column) pairs
    with 1-based columns."""
    items, depth, start = [], 0, None
    for i, ch in enumerate(text + " "):
        if ch.isspace() and depth == 0:
            if start is not None:
                items.append((text[start:i], offset + start + 1))
                start = None
            continue
        if start is None:
            start = i
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ScenarioError("unbalanced ')'", None, offset + i + 1)
    if depth > 0:
        raise ScenarioError("unbalanced '('", None, offset + len(text))
    return items


def _strip_comment(line: str) -> str:
    i = line.find("#")
    return line if i < 0 else line[:i]


def _expr(text: str, variables: Sequence[str], line: int, col: int) -> RatFunc:
    try:
        return parse_expr(text, variables)
    except UnknownSymbolError as exc:
        c = col + exc.pos if exc.pos is not None else col
        raise ScenarioError(f"undeclared symbol {exc.name}", line, c) from None
    except ParseError as exc:
        raise ScenarioError(exc.reason, line, col + exc.pos) from None
    except ZeroDivisionError:
        raise ScenarioError(f"division by zero in {text!r}", line, col) from None


def _canonical(text: str, variables, line: int, col: int) -> Item:
    return Item(str(_expr(text, variables, line, col)), line, col)


def _number(text: str, line: int, col: int) -> Item:
    value = _expr(text, (), line, col)
    return Item(str(value), line, col)


# -- loading ---------------------------------------------------------------------

class _Raw:
    def __init__(self, name: str, line: int):
        self.name = name
        self.line = line
        self.keys: dict[str, tuple[str, int, int]] = {}
        self.defs: list[tuple[str, str, int, int, int]] = []  # (kind, lhs, rhs, line, cols)


def _read_sections(text: str) -> list[_Raw]:
    sections: list[_Raw] = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw).rstrip()
        if not line.strip():
            continue
        stripped = line.lstrip()
        indent = len(line) - len(stripped)
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                raise ScenarioError("malformed section header", lineno, indent + 1)
            name = stripped[1:-1].strip()
            if name not in _SECTIONS:
                raise ScenarioError(f"unknown section [{name}]", lineno, indent + 1)
            if name in seen:
                raise ScenarioError(f"duplicate section [{name}]", lineno, indent + 1)
            seen.add(name)
            sections.append(_Raw(name, lineno))
            continue
        if not sections:
            raise ScenarioError("content before the first section header", lineno, indent + 1)
        sec = sections[-1]
        m = re.match(r"(d|section)\s+([A-Za-z][A-Za-z0-9_]*)\s*=(.*)\Z", stripped)
        if m:
            rhs = m.group(3)
            col = indent + m.start(3) + 1 + (len(rhs) - len(rhs.lstrip()))
            sec.defs.append((m.group(1), m.group(2), rhs.strip(), lineno, col))
            continue
        m = re.match(r"([A-Za-z]+)\s*:(.*)\Z", stripped)
        if not m:
            raise ScenarioError(f"cannot parse line {stripped!r}", lineno, indent + 1)
        key = m.group(1)
        if key in sec.keys:
            raise ScenarioError(f"duplicate key {key!r}", lineno, indent + 1)
        sec.keys[key] = (m.group(2), lineno, indent + m.start(2))
    return sections


def _allowed(sec: _Raw, keys: set[str], defs: set[str]):
    for key, (_, line, col) in sec.keys.items():
        if key not in keys:
            raise ScenarioError(f"unknown key {key!r} in [{sec.name}]", line, 1)
    for kind, _, _, line, _ in sec.defs:
        if kind not in defs:
            raise ScenarioError(f"'{kind} ...' lines are not allowed in [{sec.name}]", line, 1)


def _need(sec: _Raw, key: str):
    if key not in sec.keys:
        raise ScenarioError(f"[{sec.name}] needs a '{key}:' line", sec.line, 1)
    return sec.keys[key]


def _items(sec: _Raw, key: str, variables) -> tuple[Item, ...]:
    value, line, offset = _need(sec, key)
    return tuple(_canonical(t, variables, line, c) for t, c in _split(value, line, offset))


def _split(value: str, line: int, offset: int):
    try:
        return split_list(value, offset)
    except ScenarioError as exc:
        raise ScenarioError(exc.reason, line, exc.col) from None


def load_scenario(text: str, *, require_checks: bool = True) -> ScenarioDoc:
    """Parse and validate a scenario; expressions come back canonicalized.

    With ``require_checks=False`` a file holding only a [field] section is
    accepted (the lie/trdeg/prolong commands need nothing more).
    """
    sections = _read_sections(text)
    if not sections:
        raise ScenarioError("empty scenario")
    by_name = {s.name: s for s in sections}
    if "field" not in by_name:
        raise ScenarioError("missing [field] section", 1, 1)

    fs = by_name["field"]
    _allowed(fs, {"generators"}, {"d"})
    gvalue, gline, goff = _need(fs, "generators")
    gens = []
    for name, col in _split(gvalue, gline, goff):
        if not _IDENT.match(name):
            raise ScenarioError(f"invalid generator name {name!r}", gline, col)
        if name in gens:
            raise ScenarioError(f"duplicate generator {name}", gline, col)
        gens.append(name)
    gens = tuple(gens)
    table: dict[str, Item] = {}
    for _, lhs, rhs, line, col in fs.defs:
        if lhs not in gens:
            raise ScenarioError(f"undeclared symbol {lhs}", line, 3)
        if lhs in table:
            raise ScenarioError(f"derivative of {lhs} given twice", line, 1)
        if not rhs:
            raise ScenarioError(f"missing value for d {lhs}", line, col)
        table[lhs] = _canonical(rhs, gens, line, col)
    for g in gens:
        if g not in table:
            raise ScenarioError(f"no derivative given for generator {g}", fs.line, 1)
    derivation = tuple(table[g] for g in gens)

    ax = dv = res = None
    if "ax" in by_name:
        s = by_name["ax"]
        _allowed(s, {"a", "b"}, set())
        a, b = _items(s, "a", gens), _items(s, "b", gens)
        if not a:
            raise ScenarioError("[ax] needs at least one a", s.keys["a"][1], 1)
        if len(a) != len(b):
            raise ScenarioError(f"a has {len(a)} entries, b has {len(b)}", s.keys["b"][1], 1)
        ax = AxSection(a, b, s.line)
    if "dvariety" in by_name:
        s = by_name["dvariety"]
        _allowed(s, {"ambient", "ideal", "sharp"}, {"section"})
        avalue, aline, aoff = _need(s, "ambient")
        coords = []
        for name, col in _split(avalue, aline, aoff):
            if not _IDENT.match(name):
                raise ScenarioError(f"invalid coordinate name {name!r}", aline, col)
            if name in gens or name in coords:
                raise ScenarioError(f"coordinate {name} clashes with an existing symbol",
                                    aline, col)
            coords.append(name)
        if not coords:
            raise ScenarioError("ambient dimension must be at least 1", aline, 1)
        allvars = tuple(coords) + gens
        ideal = _items(s, "ideal", allvars) if "ideal" in s.keys else ()
        sec = {}
        for _, lhs, rhs, line, col in s.defs:
            if lhs not in coords:
                raise ScenarioError(f"undeclared symbol {lhs}", line, 9)
            if lhs in sec:
                raise ScenarioError(f"section component {lhs} given twice", line, 1)
            sec[lhs] = _canonical(rhs, allvars, line, col)
        for x in coords:
            if x not in sec:
                raise ScenarioError(f"no section component for {x}", s.line, 1)
        sharp = None
        if "sharp" in s.keys:
            sharp = _items(s, "sharp", gens)
            if len(sharp) != len(coords):
                raise ScenarioError(f"sharp point needs {len(coords)} coordinates",
                                    s.keys["sharp"][1], 1)
        dv = DVarietySection(tuple(coords), ideal, tuple(sec[x] for x in coords), sharp, s.line)
    if "residue" in by_name:
        s = by_name["residue"]
        _allowed(s, {"b", "c", "nu"}, set())
        b = _items(s, "b", gens)
        cvalue, cline, coff = _need(s, "c")
        c = tuple(_number(t, cline, col) for t, col in _split(cvalue, cline, coff))
        if len(c) != len(b):
            raise ScenarioError(f"b has {len(b)} entries, c has {len(c)}", cline, 1)
        nitems = _items(s, "nu", gens)
        if len(nitems) != 1:
            raise ScenarioError("nu must be a single expression", s.keys["nu"][1], 1)
        res = ResidueSection(b, c, nitems[0], s.line)

    doc = ScenarioDoc(gens, derivation, ax, dv, res)
    if require_checks and not doc.has_checks:
        raise ScenarioError("no [ax], [dvariety] or [residue] section", fs.line, 1)
    return doc


# -- rendering -------------------------------------------------------------------

def _item_text(item: Item) -> str:
    return f"({item.text})" if " " in item.text else item.text


def _list(items) -> str:
    return " ".join(_item_text(i) for i in items)


def render_scenario(doc: ScenarioDoc) -> str:
    lines = ["[field]", f"generators: {' '.join(doc.generators)}"]
    lines += [f"d {g} = {it.text}" for g, it in zip(doc.generators, doc.derivation)]
    if doc.ax:
        lines += ["", "[ax]", f"a: {_list(doc.ax.a)}", f"b: {_list(doc.ax.b)}"]
    if doc.dvariety:
        dv = doc.dvariety
        lines += ["", "[dvariety]", f"ambient: {' '.join(dv.ambient)}",
                  f"ideal: {_list(dv.ideal)}".rstrip()]
        lines += [f"section {x} = {it.text}" for x, it in zip(dv.ambient, dv.section)]
        if dv.sharp is not None:
            lines.append(f"sharp: {_list(dv.sharp)}")
    if doc.residue:
        r = doc.residue
        lines += ["", "[residue]", f"b: {_list(r.b)}".rstrip(),
                  f"c: {_list(r.c)}".rstrip(), f"nu: {_item_text(r.nu)}"]
    return "\n".join(lines) + "\n"


# -- building kernel objects -----------------------------------------------------

def build_objects(doc: ScenarioDoc, *, check_section: bool = True) -> Built:
    F = DiffFieldPresentation(doc.generators, tuple(parse_expr(i.text, doc.generators)
                                                    for i in doc.derivation))
    dv = sharp = ax = res = None
    if doc.dvariety:
        s = doc.dvariety
        try:
            dv = AffineDVariety(F, s.ambient, [i.text for i in s.ideal],
                                [i.text for i in s.section], check=check_section)
        except ValueError as exc:
            raise ScenarioError(f"[dvariety]: {exc}", s.line) from None
        if s.sharp is not None:
            try:
                sharp = dv.point([i.text for i in s.sharp])
            except ValueError as exc:
                line = s.sharp[0].line if s.sharp else s.line
                raise ScenarioError(f"sharp: {exc}", line) from None
    if doc.ax:
        ax = AxScenario(F, tuple(F(i.text) for i in doc.ax.a), tuple(F(i.text) for i in doc.ax.b))
    if doc.residue:
        r = doc.residue
        bs = tuple(F(i.text) for i in r.b)
        cs = tuple(parse_expr(i.text, ()).as_fraction() for i in r.c)
        res = (bs, cs, F(r.nu.text))
    return Built(F, dv, sharp, ax, res)


def read_scenario(path, *, require_checks: bool = True) -> ScenarioDoc:
    with open(path, encoding="utf-8") as fh:
        return load_scenario(fh.read(), require_checks=require_checks)
