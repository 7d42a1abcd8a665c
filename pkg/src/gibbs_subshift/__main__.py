"""Run the command line interface with ``python -m gibbs_subshift``."""

import sys

from .cli import main

sys.exit(main())
