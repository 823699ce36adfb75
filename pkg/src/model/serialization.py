"""
Line-oriented model files:

    coreball-svm v1
    kernel <KernelSpec.describe()>
    C <v>
    classes <k> <id ...>
    machine <pos_id> <neg_id> nsv=<n>
    <coef> <idx>:<val> ...        (n lines)
    ...

Reals use shortest round-trip decimals, so a loaded model reproduces
the saved decision values exactly.
"""

from pathlib import Path
from typing import Iterator, List, Tuple, Union

from src.data.libsvm import parse_features
from src.kernels.base import KernelSpec
from src.model.binary import BinaryModel
from src.model.ovo import OvoModel
from src.utils.errors import CoreballError, DataError, ParseError
from src.utils.file_operations import read_file, write_text
from src.utils.logger import get_logger

logger = get_logger(__name__)

MAGIC = 'coreball-svm'
VERSION = 'v1'


def serialize_model(model: OvoModel) -> str:
    lines = [
        f"{MAGIC} {VERSION}",
        f"kernel {model.kernel.describe()}",
        f"C {model.C!r}",
        f"classes {len(model.classes)} " + ' '.join(str(c) for c in model.classes),
    ]
    for machine in model.machines:
        if not machine.support:
            raise DataError(f"machine {machine.pair} has an empty support")
        lines.append(f"machine {machine.positive_class} {machine.negative_class} nsv={len(machine.support)}")
        for vector, coef in machine.support:
            lines.append(f"{coef!r} {vector.to_libsvm()}".rstrip())
    return ''.join(f"{line}\n" for line in lines)


def _numbered(text: str) -> Iterator[Tuple[int, str]]:
    for number, line in enumerate(text.splitlines(), start=1):
        if line.strip():
            yield number, line.strip()


def _expect(lines: Iterator[Tuple[int, str]], keyword: str) -> Tuple[int, List[str]]:
    try:
        number, line = next(lines)
    except StopIteration:
        raise DataError(f"model file ends before '{keyword}'") from None
    tokens = line.split()
    if tokens[0] != keyword:
        raise ParseError(f"expected '{keyword}' section, found '{tokens[0]}'", number)
    return number, tokens[1:]


def _float(text: str, number: int) -> float:
    try:
        return float(text)
    except ValueError:
        raise ParseError(f"non-numeric value '{text}'", number) from None


def _int(text: str, number: int) -> int:
    try:
        return int(text)
    except ValueError:
        raise ParseError(f"expected an integer, got '{text}'", number) from None


def deserialize_model(text: str) -> OvoModel:
    """Inverse of serialize_model; raises DataError on any malformed content"""
    lines = _numbered(text)
    try:
        number, header = next(lines)
    except StopIteration:
        raise DataError("empty model file") from None
    if header.split()[:1] != [MAGIC]:
        raise ParseError(f"not a {MAGIC} model file", number)
    if header != f"{MAGIC} {VERSION}":
        raise DataError(f"unsupported model version '{header}', expected '{MAGIC} {VERSION}'")

    number, kernel_tokens = _expect(lines, 'kernel')
    try:
        kernel = KernelSpec.parse(' '.join(kernel_tokens))
    except CoreballError as e:
        raise ParseError(str(e), number) from None
    number, c_tokens = _expect(lines, 'C')
    if len(c_tokens) != 1:
        raise ParseError("expected 'C <value>'", number)
    C = _float(c_tokens[0], number)
    number, class_tokens = _expect(lines, 'classes')
    if not class_tokens:
        raise ParseError("missing class count", number)
    count = _int(class_tokens[0], number)
    classes = tuple(_int(token, number) for token in class_tokens[1:])
    if len(classes) != count:
        raise ParseError(f"declared {count} classes, listed {len(classes)}", number)

    machines = []
    for _ in range(count * (count - 1) // 2):
        number, machine_tokens = _expect(lines, 'machine')
        if len(machine_tokens) != 3 or not machine_tokens[2].startswith('nsv='):
            raise ParseError("expected 'machine <pos> <neg> nsv=<n>'", number)
        positive = _int(machine_tokens[0], number)
        negative = _int(machine_tokens[1], number)
        nsv = _int(machine_tokens[2][len('nsv='):], number)
        if nsv < 1:
            raise ParseError("machine without support vectors", number)
        support = []
        for _ in range(nsv):
            try:
                number, line = next(lines)
            except StopIteration:
                raise DataError(f"model file ends inside machine {positive}/{negative}") from None
            tokens = line.split()
            coef = _float(tokens[0], number)
            features, _ = parse_features(tokens[1:], number)
            support.append((features, coef))
        try:
            machines.append(BinaryModel(kernel, C, tuple(support), positive, negative))
        except CoreballError as e:
            raise ParseError(str(e), number) from None

    leftover = next(lines, None)
    if leftover is not None:
        raise ParseError("unexpected content after the last machine", leftover[0])
    try:
        return OvoModel(classes, tuple(machines))
    except CoreballError as e:
        raise DataError(f"inconsistent model: {e}") from None


def save_model(model: OvoModel, path: Union[str, Path]) -> Path:
    written = write_text(path, serialize_model(model))
    logger.info(f"Saved model with {len(model.machines)} machines to {written}")
    return written


def load_model(path: Union[str, Path]) -> OvoModel:
    return deserialize_model(read_file(path))
