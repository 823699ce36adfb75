"""
Compare solvers: scripts/bench.py --suite demo --out bench/report.csv
"""

import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.cli.commands import cmd_bench


if __name__ == '__main__':
    sys.exit(cmd_bench())
