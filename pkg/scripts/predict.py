"""
Predict with a saved model: scripts/predict.py --model xor.model --data data/xor.libsvm
"""

import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.cli.commands import cmd_predict


if __name__ == '__main__':
    sys.exit(cmd_predict())
