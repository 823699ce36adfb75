"""
Write seeded synthetic corpora in LIBSVM format.

    scripts/make_synthetic.py blobs --m 200 --classes 3 --out data/blobs.libsvm
    scripts/make_synthetic.py xor --out data/xor.libsvm
"""

import argparse
import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.data.libsvm import serialize_libsvm
from src.data.synthetic import make_blobs, make_uniform_cube, make_xor
from src.utils.errors import CoreballError
from src.utils.file_operations import write_text
from src.utils.logger import get_logger, setup_logging

logger = get_logger(__name__)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description='Generate a synthetic LIBSVM file')
    parser.add_argument('kind', choices=['blobs', 'xor', 'cube'])
    parser.add_argument('--m', type=int, default=200, help='Number of rows')
    parser.add_argument('--classes', type=int, default=2)
    parser.add_argument('--dim', type=int, default=2)
    parser.add_argument('--spread', type=float, default=1.0)
    parser.add_argument('--seed', type=int, default=0)
    parser.add_argument('--out', required=True)
    args = parser.parse_args(argv)
    setup_logging()

    try:
        if args.kind == 'blobs':
            dataset = make_blobs(args.m, args.classes, args.dim, args.spread, seed=args.seed)
        elif args.kind == 'cube':
            dataset = make_uniform_cube(args.m, args.dim, seed=args.seed)
        else:
            dataset = make_xor()
        write_text(args.out, serialize_libsvm(dataset))
    except CoreballError as e:
        logger.error(str(e))
        return e.exit_code
    logger.info(f"{len(dataset)} rows, {len(dataset.classes)} classes")
    return 0


if __name__ == '__main__':
    sys.exit(main())
