"""GF(2) matrices and the dual-containing classical codes used for CSS ancillas.

Two codes are built in: the cyclic [23,12,7] Golay code and the primitive
narrow-sense [127,78] BCH code of designed distance 15.  Further codes can be
read from a plain-text check-matrix file (see :func:`load_code`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class CodeError(ValueError):
    """Base class for problems with a supplied code."""


class MatrixFormatError(CodeError):
    """The check-matrix file could not be parsed."""


class RankError(CodeError):
    """The check matrix does not have full row rank."""


class DualContainingError(CodeError):
    """H @ H.T != 0, so the code does not contain its dual."""


class BitMatrix:
    """Dense immutable matrix over GF(2).

    Entries are stored as a read-only ``uint8`` array.  Arithmetic operators
    (``+``, ``@``) and :meth:`rank` work mod 2.
    """

    __slots__ = ("_a",)

    def __init__(self, entries):
        a = np.array(entries, dtype=np.int64, copy=True)
        if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
            raise ValueError(f"BitMatrix needs a 2-D array, got shape {a.shape}")
        if np.any((a != 0) & (a != 1)):
            raise ValueError("BitMatrix entries must be 0 or 1")
        a = a.astype(np.uint8)
        a.flags.writeable = False
        self._a = a

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(np.zeros((rows, cols), dtype=np.uint8))

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(np.eye(n, dtype=np.uint8))

    @property
    def array(self) -> np.ndarray:
        return self._a

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._a.shape

    @property
    def T(self) -> "BitMatrix":
        return BitMatrix(self._a.T)

    def __getitem__(self, idx):
        return self._a[idx]

    def __add__(self, other: "BitMatrix") -> "BitMatrix":
        return BitMatrix(self._a ^ other._a)

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        prod = self._a.astype(np.int64) @ other._a.astype(np.int64)
        return BitMatrix(prod & 1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._a, other._a))

    def __hash__(self) -> int:
        return hash((self.shape, self._a.tobytes()))

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols}, ones={int(self._a.sum())})"

    def is_zero(self) -> bool:
        return not self._a.any()

    def rank(self) -> int:
        return gf2_rank(self)

    def row_space_equal(self, other: "BitMatrix") -> bool:
        """True when both matrices span the same subspace of GF(2)^cols."""
        if self.cols != other.cols:
            return False
        r = gf2_rank(self)
        if r != gf2_rank(other):
            return False
        return gf2_rank(np.vstack([self._a, other._a])) == r

    def to_text(self) -> str:
        """Render in the check-matrix file format."""
        lines = [f"{self.rows} {self.cols}"]
        lines += ["".join(str(int(b)) for b in row) for row in self._a]
        return "\n".join(lines) + "\n"


def _as_array(m) -> np.ndarray:
    return m.array if isinstance(m, BitMatrix) else np.asarray(m, dtype=np.uint8)


def row_reduce(m) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form over GF(2), pivots taken leftmost first.

    Returns the reduced matrix (rank rows first, zero rows after) and the
    list of pivot columns.
    """
    r = (_as_array(m).astype(np.uint8) & 1).copy()
    nrows, ncols = r.shape
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        if row == nrows:
            break
        hits = np.nonzero(r[row:, col])[0]
        if hits.size == 0:
            continue
        p = row + int(hits[0])
        if p != row:
            r[[row, p]] = r[[p, row]]
        mask = r[:, col].astype(bool)
        mask[row] = False
        r[mask] ^= r[row]
        pivots.append(col)
        row += 1
    return r, pivots


def gf2_rank(m) -> int:
    """Rank of a binary matrix over GF(2)."""
    a = _as_array(m)
    if a.size == 0:
        return 0
    return len(row_reduce(a)[1])


@dataclass(frozen=True)
class StandardForm:
    """``H[:, column_permutation] == (I | A)`` up to row operations.

    ``column_permutation[k]`` is the original column placed at position k.
    """

    column_permutation: tuple[int, ...]
    A: np.ndarray

    @property
    def r(self) -> int:
        return self.A.shape[0]

    def reassemble(self) -> BitMatrix:
        """Rebuild (I | A) and undo the column permutation."""
        r = self.A.shape[0]
        std = np.hstack([np.eye(r, dtype=np.uint8), self.A])
        out = np.zeros_like(std)
        out[:, list(self.column_permutation)] = std
        return BitMatrix(out)


def standard_form(h) -> StandardForm:
    """Bring a full-row-rank matrix to the form (I | A).

    Pivot columns come first in increasing order, the remaining columns keep
    their relative order.  The result is fully deterministic.
    """
    a = _as_array(h)
    nrows, ncols = a.shape
    red, pivots = row_reduce(a)
    if len(pivots) != nrows:
        raise RankError(f"standard_form needs full row rank {nrows}, got rank {len(pivots)}")
    rest = [c for c in range(ncols) if c not in set(pivots)]
    perm = tuple(pivots + rest)
    A = red[:, rest].copy()
    A.flags.writeable = False
    return StandardForm(column_permutation=perm, A=A)


def nullspace(m) -> np.ndarray:
    """Basis (as rows) of {x : m @ x = 0} over GF(2)."""
    a = _as_array(m)
    ncols = a.shape[1]
    red, pivots = row_reduce(a)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = np.zeros((len(free), ncols), dtype=np.uint8)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for k, p in enumerate(pivots):
            basis[i, p] = red[k, f]
    return basis


# ---------------------------------------------------------------------------
# polynomials over GF(2), stored as int bitmasks (bit i = coefficient of x^i)


def poly_mul(a: int, b: int) -> int:
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def poly_divmod(a: int, b: int) -> tuple[int, int]:
    if b == 0:
        raise ZeroDivisionError("polynomial division by zero")
    q = 0
    db = b.bit_length()
    while a.bit_length() >= db:
        shift = a.bit_length() - db
        q ^= 1 << shift
        a ^= b << shift
    return q, a


def cyclic_check_matrix(n: int, g: int) -> np.ndarray:
    """Check matrix of the length-n cyclic code with generator polynomial g.

    Rows are cyclic shifts of the reciprocal check polynomial
    h(x) = (x^n - 1) / g(x).
    """
    h, rem = poly_divmod((1 << n) | 1, g)
    if rem:
        raise CodeError("generator polynomial does not divide x^n - 1")
    k = h.bit_length() - 1
    r = n - k
    hbits = [(h >> i) & 1 for i in range(k + 1)]
    H = np.zeros((r, n), dtype=np.uint8)
    for i in range(r):
        for j in range(k + 1):
            H[i, i + j] = hbits[k - j]
    return H


class GF2m:
    """Exp/log tables for GF(2^m) built from a primitive polynomial."""

    def __init__(self, m: int, primitive: int):
        self.m = m
        self.order = (1 << m) - 1
        self.exp = [0] * (2 * self.order)
        self.log = [0] * (1 << m)
        x = 1
        for i in range(self.order):
            self.exp[i] = x
            self.log[x] = i
            x <<= 1
            if x >> m:
                x ^= primitive
        if x != 1:
            raise ValueError("polynomial is not primitive")
        for i in range(self.order, 2 * self.order):
            self.exp[i] = self.exp[i - self.order]

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    def alpha_pow(self, i: int) -> int:
        return self.exp[i % self.order]

    def eval_binary_poly(self, p: int, x: int) -> int:
        """Evaluate a GF(2)-coefficient polynomial at a field element (Horner)."""
        acc = 0
        for i in range(p.bit_length() - 1, -1, -1):
            acc = self.mul(acc, x) ^ ((p >> i) & 1)
        return acc

    def cyclotomic_coset(self, i: int) -> list[int]:
        coset = []
        j = i % self.order
        while j not in coset:
            coset.append(j)
            j = (2 * j) % self.order
        return coset

    def minimal_polynomial(self, i: int) -> int:
        """Minimal polynomial of alpha^i over GF(2), as a bitmask."""
        # coefficients live in GF(2^m) while multiplying out the linear factors
        coeffs = [1]
        for j in self.cyclotomic_coset(i):
            root = self.alpha_pow(j)
            nxt = [0] * (len(coeffs) + 1)
            for d, c in enumerate(coeffs):
                nxt[d + 1] ^= c
                nxt[d] ^= self.mul(c, root)
            coeffs = nxt
        if any(c not in (0, 1) for c in coeffs):
            raise ArithmeticError("minimal polynomial has non-binary coefficients")
        return sum(c << d for d, c in enumerate(coeffs))


GOLAY_GENERATOR = 0b110001110101  # x^11 + x^10 + x^6 + x^5 + x^4 + x^2 + 1
GF128_PRIMITIVE = 0b10001001  # x^7 + x^3 + 1
BCH_DESIGNED_DISTANCE = 15


@dataclass(frozen=True)
class CssCode:
    """A dual-containing classical code, used as a CSS code [[n, 2k - n, d]]."""

    name: str
    H: BitMatrix
    d: int | None = None
    d_verified: bool = False
    source: str = "built-in"
    generator_poly: int | None = field(default=None, compare=False)

    def __post_init__(self):
        validate_css(self.H)

    @property
    def n(self) -> int:
        return self.H.cols

    @property
    def r(self) -> int:
        """Number of classical parity checks (rows of H)."""
        return self.H.rows

    @property
    def k_classical(self) -> int:
        return self.n - self.H.rows

    @property
    def k_quantum(self) -> int:
        return 2 * self.k_classical - self.n

    @property
    def label(self) -> str:
        d = "?" if self.d is None else str(self.d)
        return f"[[{self.n},{self.k_quantum},{d}]]"

    def generator_matrix(self) -> BitMatrix:
        """Rows spanning the classical code, i.e. the null space of H."""
        return BitMatrix(nullspace(self.H))

    def codewords(self) -> np.ndarray:
        """All 2^k codewords; only sensible for small k."""
        G = self.generator_matrix().array.astype(np.int64)
        k = G.shape[0]
        if k > 24:
            raise CodeError(f"refusing to enumerate 2^{k} codewords")
        msgs = (np.arange(1 << k)[:, None] >> np.arange(k)[None, :]) & 1
        return (msgs @ G) & 1


def validate_css(H: BitMatrix) -> None:
    """Raise unless H has full row rank, contains its dual and encodes >= 1 qubit."""
    rank = gf2_rank(H)
    if rank != H.rows:
        raise RankError(f"check matrix has {H.rows} rows but GF(2) rank {rank}")
    if not (H @ H.T).is_zero():
        raise DualContainingError("H @ H.T != 0 over GF(2): code is not dual-containing")
    if 2 * (H.cols - H.rows) - H.cols < 1:
        raise CodeError(f"code encodes {2 * (H.cols - H.rows) - H.cols} logical qubits, need >= 1")


def minimum_distance(code: CssCode) -> int:
    """Exhaustive minimum nonzero weight over all codewords."""
    words = code.codewords()
    w = words.sum(axis=1)
    return int(w[w > 0].min())


def build_golay() -> CssCode:
    """The [[23,1,7]] code from the cyclic binary Golay code."""
    H = cyclic_check_matrix(23, GOLAY_GENERATOR)
    return CssCode("golay", BitMatrix(H), d=7, d_verified=True, generator_poly=GOLAY_GENERATOR)


def bch_generator_polynomial(field_: GF2m | None = None, designed_distance: int = BCH_DESIGNED_DISTANCE) -> int:
    """Product of the distinct minimal polynomials of alpha^1 .. alpha^(delta-1)."""
    f = field_ or GF2m(7, GF128_PRIMITIVE)
    g = 1
    seen: set[int] = set()
    for i in range(1, designed_distance):
        if i in seen:
            continue
        seen.update(f.cyclotomic_coset(i))
        g = poly_mul(g, f.minimal_polynomial(i))
    return g


def build_bch127() -> CssCode:
    """The [[127,29,15]] code from the narrow-sense [127,78,15] BCH code.

    The distance is the designed distance; it is not checked by enumeration.
    """
    g = bch_generator_polynomial()
    H = cyclic_check_matrix(127, g)
    return CssCode("bch127", BitMatrix(H), d=BCH_DESIGNED_DISTANCE, d_verified=False, generator_poly=g)


def parse_matrix(text: str) -> BitMatrix:
    """Parse the check-matrix text format into a BitMatrix."""
    lines = [ln.rstrip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise MatrixFormatError("empty matrix file")
    head = lines[0].split()
    if len(head) != 2 or not all(t.isdigit() for t in head):
        raise MatrixFormatError(f"bad header {lines[0]!r}, expected '<rows> <cols>'")
    rows, cols = int(head[0]), int(head[1])
    if rows < 1 or cols < 1:
        raise MatrixFormatError(f"matrix dimensions must be positive, got {rows}x{cols}")
    body = lines[1:]
    if len(body) != rows:
        raise MatrixFormatError(f"header declares {rows} rows, file has {len(body)}")
    data = np.zeros((rows, cols), dtype=np.uint8)
    for i, ln in enumerate(body):
        ln = ln.strip()
        if len(ln) != cols or set(ln) - {"0", "1"}:
            raise MatrixFormatError(f"row {i + 1}: expected {cols} characters from {{0,1}}, got {ln!r}")
        data[i] = [c == "1" for c in ln]
    return BitMatrix(data)


def load_code(path, d: int | None = None) -> CssCode:
    """Read a check matrix from disk and validate it as a CSS code."""
    p = Path(path)
    H = parse_matrix(p.read_text())
    return CssCode(p.stem, H, d=d, source=str(p))


def get_code(selector: str) -> CssCode:
    """Resolve ``golay``, ``bch127`` or ``file:<path>``."""
    if selector == "golay":
        return build_golay()
    if selector == "bch127":
        return build_bch127()
    if selector.startswith("file:"):
        return load_code(selector[5:])
    raise CodeError(f"unknown code selector {selector!r} (use golay, bch127 or file:<path>)")
