"""
File system operations utilities.
"""

from pathlib import Path
from typing import Iterable, Union
from src.utils.errors import DataError
from src.utils.logger import get_logger

logger = get_logger(__name__)

PathLike = Union[str, Path]


def write_text(file_path: PathLike, content: str) -> Path:
    """
    Write a text file, creating parent directories as needed.

    The content goes to a sibling temporary file first and is then moved
    into place, so readers never observe a half-written model or report.

    Args:
        file_path: Destination path
        content: Text to write (UTF-8)

    Returns:
        The destination path
    """
    path = Path(file_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp_path = path.with_name(path.name + '.tmp')
    with open(tmp_path, 'w', encoding='utf-8') as f:
        f.write(content)
    tmp_path.replace(path)
    logger.info(f"Written file: {path}")
    return path


def write_lines(file_path: PathLike, lines: Iterable[str]) -> Path:
    """Write one item per line"""
    return write_text(file_path, ''.join(f"{line}\n" for line in lines))


def read_file(file_path: PathLike) -> str:
    """
    Read file content.

    Args:
        file_path: Path to file

    Returns:
        File content as string

    Raises:
        DataError: if the file is missing or unreadable
    """
    path = Path(file_path)
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return f.read()
    except OSError as e:
        raise DataError(f"Cannot read {path}: {e.strerror or e}") from e


def ensure_directory(directory: PathLike) -> Path:
    """
    Ensure directory exists, create if it doesn't.

    Args:
        directory: Directory path
    """
    path = Path(directory)
    path.mkdir(parents=True, exist_ok=True)
    return path
