"""
Row-Fishburn matrices and their bijection with FDAGs.

A FDAG with vertices v_0..v_n is drawn as an n x n matrix whose row r holds
vertex v_{n-r} and whose column c holds vertex v_{n-1-c}; entry (r, c) is
the multiplicity of the arc from the row vertex to the column vertex. Rows
are therefore read from the highest vertex index to the lowest, which makes
the lexicographic order on rows agree with the order on child words.

The matrix attached to a FDAG is the incremental one: the row of v_1 is
kept, and the row of v_{i+1} is replaced by its difference with the row of
v_i. Its total sum is the number of expansion steps of the FDAG.
"""
import logging
import math
from typing import Iterator, List, Sequence, Tuple

import numpy as np

from fdagenum.dag import Fdag, InvalidFdagError

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1

BETA = 1.29706861206


class RowFishburnError(ValueError):
    def __init__(self, message, filename=None, line=None):
        self.filename = filename
        self.line = line
        where = ""
        if filename is not None or line is not None:
            where = f"{filename if filename is not None else '<stream>'}"
            if line is not None:
                where += f":{line}"
            where += ": "
        super().__init__(f"{where}{message}")


class UndefinedDifferenceError(ValueError):
    pass


class RowFishburnMatrix:
    """Square upper-triangular nonnegative integer matrix without zero rows."""

    def __init__(self, entries, check: bool = True):
        m = np.array(entries, dtype=np.int64)
        if m.size == 0:
            m = np.zeros((0, 0), dtype=np.int64)
        if check:
            validate_matrix(m)
        self.m = m
        self.m.flags.writeable = False

    @property
    def dim(self) -> int:
        return self.m.shape[0]

    @property
    def size(self) -> int:
        return int(self.m.sum())

    @property
    def rows(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(tuple(int(x) for x in row) for row in self.m)

    def __eq__(self, other):
        if not isinstance(other, RowFishburnMatrix):
            return NotImplemented
        return self.m.shape == other.m.shape and bool(np.array_equal(self.m, other.m))

    def __hash__(self):
        return hash((self.dim, self.m.tobytes()))

    def __repr__(self):
        return f"RowFishburnMatrix({[list(r) for r in self.rows]})"


def validate_matrix(m: np.ndarray):
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise RowFishburnError(f"Matrix must be square, got shape {m.shape}")
    if (m < 0).any():
        raise RowFishburnError("Matrix entries must be nonnegative")
    if np.tril(m, k=-1).any():
        raise RowFishburnError("Matrix must be upper triangular")
    zero_rows = np.flatnonzero(~m.any(axis=1))
    if len(zero_rows):
        raise RowFishburnError(f"Row {int(zero_rows[0])} has no nonzero entry")


def ominus(a: Sequence[int], b: Sequence[int]) -> np.ndarray:
    """Row difference: zeros before the first differing index j, a_j - b_j at j, then a."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    diff = np.flatnonzero(a != b)
    if len(diff) == 0:
        raise UndefinedDifferenceError("The difference of two equal rows is undefined")
    j = diff[0]
    if a[j] < b[j]:
        raise UndefinedDifferenceError("The first row must be lexicographically larger")
    out = a.copy()
    out[:j] = 0
    out[j] = a[j] - b[j]
    return out


def oplus(a: Sequence[int], b: Sequence[int]) -> np.ndarray:
    """Row sum: a before the first nonzero index j of b, a_j + b_j at j, then b."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    nonzero = np.flatnonzero(b)
    if len(nonzero) == 0:
        raise UndefinedDifferenceError("The added row has no nonzero entry")
    j = nonzero[0]
    out = b.copy()
    out[:j] = a[:j]
    out[j] = a[j] + b[j]
    return out


def adjacency_rows(d: Fdag) -> np.ndarray:
    """Reduced adjacency matrix: row i-1 holds v_i, columns run from v_{n-1} down to v_0."""
    n = d.n
    rows = np.zeros((n, n), dtype=np.int64)
    for i in range(1, n + 1):
        for a in d.words[i]:
            rows[i - 1, n - 1 - a] += 1
    return rows


def to_matrix(d: Fdag) -> RowFishburnMatrix:
    n = d.n
    adjacency = adjacency_rows(d)
    m = np.zeros((n, n), dtype=np.int64)
    for i in range(1, n + 1):
        if i == 1:
            row = adjacency[0]
        else:
            row = ominus(adjacency[i - 1], adjacency[i - 2])
        m[n - i] = row
    return RowFishburnMatrix(m, check=False)


def from_matrix(m: RowFishburnMatrix) -> Fdag:
    if not isinstance(m, RowFishburnMatrix):
        m = RowFishburnMatrix(m)
    n = m.dim
    words = [()]
    row = None
    for i in range(1, n + 1):
        increment = m.m[n - i]
        row = increment.copy() if row is None else oplus(row, increment)
        word = []
        for c in range(n):
            word.extend([n - 1 - c] * int(row[c]))
        words.append(tuple(word))
    try:
        return Fdag(words)
    except InvalidFdagError as e:
        raise RowFishburnError(f"Matrix does not encode a FDAG: {e}")


def matrix_successors(m: RowFishburnMatrix) -> List[RowFishburnMatrix]:
    """Children of `m` in the matrix enumeration tree.

    R1 increments a top-row entry at or right of its rightmost nonzero entry,
    R2 adds a zero top row and left column and puts a single 1 in the new row.
    """
    d = m.dim
    result = []
    if d > 0:
        last = int(np.flatnonzero(m.m[0])[-1])
        for c in range(last, d):
            grown = m.m.copy()
            grown[0, c] += 1
            result.append(RowFishburnMatrix(grown, check=False))
    for c in range(d + 1):
        grown = np.zeros((d + 1, d + 1), dtype=np.int64)
        grown[1:, 1:] = m.m
        grown[0, c] = 1
        result.append(RowFishburnMatrix(grown, check=False))
    return result


def enumerate_matrices(max_size: int) -> Iterator[RowFishburnMatrix]:
    """Every row-Fishburn matrix of size at most `max_size`, the empty one included."""
    if max_size < 0:
        raise ValueError("max_size must be nonnegative")
    stack = [RowFishburnMatrix(np.zeros((0, 0), dtype=np.int64), check=False)]
    while stack:
        m = stack.pop()
        yield m
        if m.size < max_size:
            stack.extend(reversed(matrix_successors(m)))


def is_general_fishburn(m: RowFishburnMatrix) -> bool:
    return bool(m.m.any(axis=1).all() and m.m.any(axis=0).all())


def single_tree_check(d: Fdag) -> bool:
    return len(d.sources) == 1


def asymptotic_estimate(k: int) -> float:
    if k < 1:
        raise ValueError("k must be positive")
    return math.factorial(k) * (12 / math.pi ** 2) ** k * BETA


def growth_ratio(k: int, count: int) -> float:
    """count / (k! (12/pi^2)^k), which tends to BETA."""
    return count / (math.factorial(k) * (12 / math.pi ** 2) ** k)


def format_matrix(m: RowFishburnMatrix) -> str:
    lines = [f"rfm {FORMAT_VERSION}", f"dim {m.dim}"]
    lines.extend(" ".join(str(x) for x in row) for row in m.rows)
    return "\n".join(lines) + "\n"


def write_matrix(m: RowFishburnMatrix, stream) -> None:
    stream.write(format_matrix(m))


def _parse_matrix(lines, filename) -> RowFishburnMatrix:
    lineno, header = lines[0]
    if header.split() != ["rfm", str(FORMAT_VERSION)]:
        raise RowFishburnError(f"expected 'rfm {FORMAT_VERSION}' header", filename, lineno)
    if len(lines) < 2:
        raise RowFishburnError("missing dimension", filename, lineno)
    lineno, dimline = lines[1]
    parts = dimline.split()
    if len(parts) != 2 or parts[0] != "dim" or not parts[1].isdigit():
        raise RowFishburnError("expected 'dim <d>'", filename, lineno)
    dim = int(parts[1])
    body = lines[2:]
    if len(body) != dim:
        raise RowFishburnError(f"expected {dim} rows, found {len(body)}", filename, lineno)
    rows = []
    for lineno, text in body:
        try:
            row = [int(x) for x in text.split()]
        except ValueError:
            raise RowFishburnError("entries must be integers", filename, lineno)
        if len(row) != dim:
            raise RowFishburnError(f"expected {dim} entries", filename, lineno)
        rows.append(row)
    m = np.array(rows, dtype=np.int64).reshape(dim, dim)
    try:
        validate_matrix(m)
    except RowFishburnError as e:
        raise RowFishburnError(str(e), filename, lines[0][0])
    return RowFishburnMatrix(m, check=False)


def read_matrices(source) -> Iterator[RowFishburnMatrix]:
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        with open(source) as f:
            yield from read_matrices(f)
        return
    filename = getattr(source, "name", None)
    record = []
    for lineno, line in enumerate(source, start=1):
        text = line.strip()
        if text.startswith("#"):
            continue
        if not text:
            if record:
                yield _parse_matrix(record, filename)
                record = []
            continue
        record.append((lineno, text))
    if record:
        yield _parse_matrix(record, filename)


def read_matrix(source) -> RowFishburnMatrix:
    matrices = list(read_matrices(source))
    if len(matrices) != 1:
        raise RowFishburnError(f"expected one matrix, found {len(matrices)}")
    return matrices[0]
