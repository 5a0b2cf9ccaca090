"""Command-line front end.

Exit codes: 0 every check passed, 1 some check failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction

from axdiff.ax import TheoremViolation, check_hypotheses, verify_claims
from axdiff.difffield import derive, prolong
from axdiff.dvariety import (UndefinedError, cotangent_class, cotangent_dimension,
                             cotangent_flow, format_poly_k, generic_sharp_point_check,
                             induced_derivation, is_sharp_point, validate_section)
from axdiff.forms import flat_check, lie_D1, pair_partial, parse_form, trdeg
from axdiff.kernel.parse import format_poly
from axdiff.kernel.partfrac import UnsupportedPlaceError
from axdiff.places import ResidueIdentityError, claim5_local_check
from axdiff.scenario import ScenarioError, build_objects, read_scenario, split_list

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
BAD = {"FAIL", "ERROR", "UNSUPPORTED"}


@dataclass
class Entry:
    key: str
    label: str
    anchor: str
    status: str
    data: list[tuple[str, str]] = field(default_factory=list)
    gating: bool = True


@dataclass
class Report:
    scenario: str
    entries: list[Entry] = field(default_factory=list)

    def add(self, *args, **kw) -> Entry:
        e = Entry(*args, **kw)
        self.entries.append(e)
        return e

    @property
    def passed(self) -> bool:
        return not any(e.gating and e.status in BAD for e in self.entries)

    def render(self, *, stamp: bool = False) -> str:
        lines = [f"scenario: {self.scenario}"]
        if stamp:
            lines.append("generated: " + datetime.now(timezone.utc).isoformat(timespec="seconds"))
        for e in self.entries:
            note = "" if e.gating or e.status not in BAD else " (informative)"
            lines.append(f"{e.label}: {e.status}{note} ({e.anchor})")
            for k, v in e.data:
                lines.append(f"    {k}: {v}")
        lines.append(f"verdict: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"

    def render_machine(self) -> str:
        lines = [f"scenario\t{self.scenario}"]
        for e in self.entries:
            lines.append(f"{e.key}\t{e.status.lower()}")
            for k, v in e.data:
                lines.append(f"{e.key}.{k}\t{v}")
        lines.append(f"verdict\t{'pass' if self.passed else 'fail'}")
        return "\n".join(lines) + "\n"


def _vec(values, sep=" ") -> str:
    return sep.join(str(Fraction(v)) for v in values)


def _lincomb(coeffs, name: str) -> str:
    out = ""
    for i, k in enumerate(coeffs, 1):
        if not k:
            continue
        sign = "-" if k < 0 else "+"
        mag = "" if abs(k) == 1 else f"{abs(k)}*"
        out += f" {sign} {mag}{name}{i}" if out else f"{'-' if k < 0 else ''}{mag}{name}{i}"
    return out or "0"


def _status(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


# -- check -------------------------------------------------------------------

def _check_dvariety(report: Report, built):
    X, alpha = built.dvariety, built.sharp
    sec = validate_section(X)
    e = report.add("dvariety.section", "section of the shifted tangent bundle",
                   "rational D-variety", _status(sec.ok))
    if not sec.ok:
        e.data += [("generator", format_poly_k(sec.failing_generator)),
                   ("residue", format_poly(sec.remainder))]
        return
    report.add("dvariety.generic", "coordinates satisfy x' = s(x)",
               "generic point", _status(generic_sharp_point_check(X)))
    if alpha is None:
        return
    e = report.add("dvariety.sharp", f"sharp point {alpha}", "sharp points", "PASS")
    try:
        sharp = is_sharp_point(X, alpha)
    except UndefinedError as exc:
        e.status, e.data = "ERROR", [("reason", str(exc))]
        return
    e.status = _status(sharp)
    if not sharp:
        return
    dim = cotangent_dimension(X, alpha)
    report.add("dvariety.cotangent_dim", f"cotangent dimension {dim}", "cotangent space",
               "INFO", [("value", str(dim))], gating=False)
    flow = cotangent_flow(X, alpha)
    samples = [X.coordinate(i) for i in range(X.n)]
    samples += [X.coordinate(i) * X.coordinate(j) for i in range(X.n) for j in range(i, X.n)]
    tested = 0
    ok = True
    for f in samples:
        lhs = flow.apply(cotangent_class(X, alpha, f))
        rhs = cotangent_class(X, alpha, induced_derivation(X, f))
        ok &= lhs == rhs
        tested += 1
    for P in X.ideal_gens:
        zero = cotangent_class(X, alpha, X.function(P))
        ok &= flow.apply(zero).is_zero()
        tested += 1
    report.add("dvariety.flow", "D_V agrees with the induced derivation", "cotangent flow",
               _status(ok), [("samples", str(tested))])


def _check_ax(report: Report, sc, strict: bool):
    hyp = check_hypotheses(sc)
    report.add("ax.hypothesis.b_nonzero", "b_i nonzero", "Ax-Schanuel hypotheses",
               _status(all(hyp.b_nonzero)), gating=strict)
    report.add("ax.hypothesis.logderiv", "d(a_i) = d(b_i)/b_i", "Ax-Schanuel hypotheses",
               _status(all(hyp.logderiv_ok)),
               [("failing", " ".join(f"a{i}" for i, ok in enumerate(hyp.logderiv_ok, 1) if not ok))]
               if not all(hyp.logderiv_ok) else [], gating=strict)
    e = report.add("ax.hypothesis.q_independent", "a_i QQ-independent modulo constants",
                   "Ax-Schanuel hypotheses", _status(hyp.q_indep_mod_C), gating=strict)
    for r in hyp.q_relations:
        e.data.append(("relation", _vec(r)))
    if not all(hyp.b_nonzero):
        report.add("ax.claims", "logarithmic forms undefined (some b_i = 0)",
                   "Ax-Schanuel argument", "SKIP", gating=False)
        return
    try:
        v = verify_claims(sc, hyp)
    except TheoremViolation as exc:
        report.add("ax.claims", "argument consistency", "Ax-Schanuel argument", "ERROR",
                   [("reason", str(exc))])
        return
    logderiv = all(hyp.logderiv_ok)
    e = report.add("ax.pairing", "forms vanish on the derivation", "pairing with the derivation",
                   _status(v.pairing_zero), gating=logderiv)
    if v.onto_witness is not None:
        e.data.append(("onto_witness", f"a{v.onto_witness + 1}"))
    report.add("ax.flat", "forms are flat", "Lie derivative", _status(v.forms_flat),
               gating=logderiv)
    bound = "≥" if v.satisfied else "<"
    status = "PASS" if v.satisfied else ("FAIL" if hyp.all_hold else "NOT MET")
    report.add("ax.bound", f"trdeg {v.trdeg_value} {bound} {v.bound}", "Ax-Schanuel bound",
               status, [("trdeg", str(v.trdeg_value)), ("bound", str(v.bound))])
    if v.forms_rank is not None:
        report.add("ax.forms_rank", f"forms have rank {v.forms_rank} < {sc.n}",
                   "F-linear dependence", _status(v.forms_rank < sc.n),
                   [("rank", str(v.forms_rank))], gating=logderiv)
    if v.dependency is not None:
        report.add("ax.dependency", f"constant dependency ({_vec(v.dependency, ', ')})",
                   "flat forms", "INFO",
                   [("c", _vec(v.dependency)), ("nu", str(v.nu))], gating=False)
    if v.monomial_relation is not None:
        prod = " * ".join(f"b{i}^{k}" for i, k in enumerate(v.monomial_relation, 1) if k)
        report.add("ax.monomial", f"monomial relation {prod} constant", "residue argument",
                   "INFO", [("d", _vec(v.monomial_relation))], gating=False)
    if v.a_relation is not None:
        report.add("ax.a_relation", f"{_lincomb(v.a_relation, 'a')} is constant", "residue argument", "INFO",
                   [("q", _vec(v.a_relation))], gating=False)


def _residue_entries(report: Report, bs, cs, nu):
    try:
        result = claim5_local_check(bs, cs, nu, strict=False)
    except ResidueIdentityError as exc:
        report.add("residue.identity", "sum c_i db_i/b_i = d(nu)", "residue argument",
                   "FAIL", [("reason", str(exc))])
        return
    except UnsupportedPlaceError as exc:
        report.add("residue.identity", "sum c_i db_i/b_i = d(nu)", "residue argument",
                   "UNSUPPORTED", [("reason", str(exc))])
        return
    report.add("residue.identity", "sum c_i db_i/b_i = d(nu)", "residue argument", "PASS")
    for i, entry in enumerate(result.entries, 1):
        if entry.place is None:
            report.add(f"residue.entry{i}", "unsupported place", "orders and residues",
                       "UNSUPPORTED", [("reason", entry.detail)])
            continue
        name = str(entry.place)
        e = report.add(f"residue.{name}", f"{name}: sum c_i*ord = {entry.weighted_order}",
                       "orders and residues",
                       "UNSUPPORTED" if entry.status == "unsupported" else _status(entry.ok))
        e.data += [("orders", _vec(entry.orders)), ("residues", _vec(entry.residues))]


def build_report(path: str, *, strict: bool = False) -> Report:
    doc = read_scenario(path)
    built = build_objects(doc, check_section=False)
    report = Report(os.path.splitext(os.path.basename(path))[0])
    F = built.field
    report.add("field", "QQ(" + ", ".join(F.generators) + ")", "differential field", "INFO",
               [(f"d.{g}", str(dg)) for g, dg in zip(F.generators, F.derivation)],
               gating=False)
    if built.dvariety is not None:
        _check_dvariety(report, built)
    if built.ax is not None:
        _check_ax(report, built.ax, strict)
    if built.residue is not None:
        _residue_entries(report, *built.residue)
    return report


def cmd_check(args, out) -> int:
    report = build_report(args.file, strict=args.strict)
    out.write(report.render_machine() if args.machine else report.render(stamp=args.stamp))
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_lie(args, out) -> int:
    built = build_objects(read_scenario(args.file, require_checks=False))
    F = built.field
    try:
        omega = parse_form(F, args.form)
    except ValueError as exc:
        raise ScenarioError(f"--form: {exc}") from None
    flat = flat_check(F, omega)
    out.write(f"D1 = {lie_D1(F, omega)}, pairing = {pair_partial(F, omega)}, "
              f"{'FLAT' if flat else 'NOT FLAT'}\n")
    return EXIT_OK


def cmd_residue(args, out) -> int:
    doc = read_scenario(args.file)
    built = build_objects(doc, check_section=False)
    if built.residue is None:
        raise ScenarioError("no [residue] section")
    report = Report(os.path.splitext(os.path.basename(args.file))[0])
    _residue_entries(report, *built.residue)
    bs = built.residue[0]
    out.write("place\t" + "\t".join(f"ord(b{i})" for i in range(1, len(bs) + 1))
              + "\tsum c*ord\tstatus\n")
    for e in report.entries:
        if e.key == "residue.identity":
            out.write(f"# sum c_i db_i/b_i = d(nu): {e.status}\n")
            continue
        data = dict(e.data)
        if "orders" in data:
            place = e.key.split(".", 1)[1]
            weighted = e.label.rsplit("= ", 1)[1]
            out.write(f"{place}\t" + "\t".join(data["orders"].split()) + f"\t{weighted}\t{e.status}\n")
        else:
            out.write(f"?\t{data.get('reason', '')}\t{e.status}\n")
    out.write(f"verdict: {'PASS' if report.passed else 'FAIL'}\n")
    return EXIT_OK if report.passed else EXIT_FAIL


def _top_level_commas(text: str) -> list[str]:
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        depth += (ch == "(") - (ch == ")")
        if ch == "," and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    return parts + [text[start:]]


def _elements(F, text: str):
    """Elements separated by top-level commas, or by whitespace as in scenario files."""
    try:
        if "," in text:
            return [F(t.strip()) for t in _top_level_commas(text)]
        return [F(t) for t, _ in split_list(text)]
    except ValueError as exc:
        raise ScenarioError(f"--elems: {exc}") from None


def cmd_trdeg(args, out) -> int:
    F = build_objects(read_scenario(args.file, require_checks=False)).field
    elems = _elements(F, args.elems)
    out.write(f"trdeg = {trdeg(F, elems)}\n")
    return EXIT_OK


def cmd_prolong(args, out) -> int:
    F = build_objects(read_scenario(args.file, require_checks=False)).field
    elems = _elements(F, args.elems)
    if args.order < 0:
        raise ScenarioError("--order must be nonnegative")
    row = elems
    for k in range(args.order + 1):
        out.write(f"order {k}: " + ", ".join(str(e) for e in row) + "\n")
        row = [derive(F, e) for e in row]
    out.write(f"trdeg = {trdeg(F, prolong(F, elems, args.order))}\n")
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="axdiff", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    c = sub.add_parser("check", help="run every check the scenario supports")
    c.add_argument("file")
    c.add_argument("--strict", action="store_true", help="hypothesis failures fail the run")
    c.add_argument("--machine", action="store_true", help="key<TAB>value output")
    c.add_argument("--stamp", action="store_true", help="add a timestamp (human output only)")
    c.set_defaults(func=cmd_check)
    c = sub.add_parser("lie", help="Lie derivative and pairing of a form")
    c.add_argument("file")
    c.add_argument("--form", required=True)
    c.set_defaults(func=cmd_lie)
    c = sub.add_parser("residue", help="orders and residues for the [residue] section")
    c.add_argument("file")
    c.set_defaults(func=cmd_residue)
    c = sub.add_parser("trdeg", help="transcendence degree of a list of elements")
    c.add_argument("file")
    c.add_argument("--elems", required=True)
    c.set_defaults(func=cmd_trdeg)
    c = sub.add_parser("prolong", help="iterated derivatives of a list of elements")
    c.add_argument("file")
    c.add_argument("--elems", required=True)
    c.add_argument("--order", type=int, required=True)
    c.set_defaults(func=cmd_prolong)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.func(args, out)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ScenarioError as exc:
        print(f"error: {args.file}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
