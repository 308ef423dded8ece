"""Root conftest.py: makes the ``app`` package importable from a checkout."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.resolve()))
