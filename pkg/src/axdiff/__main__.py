import sys

from axdiff.cli import main

sys.exit(main())
