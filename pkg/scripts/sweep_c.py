"""
Sweep C over 2^0..2^12 on a validation split: scripts/sweep_c.py --data data/tri_train.libsvm
"""

import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.cli.commands import cmd_sweep_c


if __name__ == '__main__':
    sys.exit(cmd_sweep_c())
