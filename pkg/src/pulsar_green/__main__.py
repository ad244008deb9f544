"""``python -m pulsar_green`` entry point."""

import sys

from .cli import main

sys.exit(main())
