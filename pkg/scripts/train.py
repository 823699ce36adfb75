"""
Train a model: scripts/train.py --data data/xor.libsvm --model xor.model --C 100
"""

import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.cli.commands import cmd_train


if __name__ == '__main__':
    sys.exit(cmd_train())
