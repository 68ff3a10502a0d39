"""Dense linear algebra over prime fields GF(p).

Matrices are plain ``numpy`` integer arrays with entries in ``[0, p)``; the
modulus travels alongside as an argument.  Everything here is exact.
"""

from __future__ import annotations

import numpy as np

MAX_MODULUS = 2**31

# int64 accumulation is safe while terms * (p - 1)**2 stays below this
_INT64_BUDGET = 2**62


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def check_modulus(p: int) -> int:
    """Validate a field modulus and return it as a plain ``int``."""
    p = int(p)
    if not 2 <= p <= MAX_MODULUS:
        raise ValueError(f"field modulus {p} outside [2, 2^31]")
    if not is_prime(p):
        raise ValueError(f"field modulus {p} is not prime")
    return p


class FieldElement:
    """A residue class modulo a prime.

    Only used at API boundaries; bulk arithmetic goes through arrays.
    """

    __slots__ = ("value", "modulus")

    def __init__(self, value: int, modulus: int):
        object.__setattr__(self, "modulus", check_modulus(modulus))
        object.__setattr__(self, "value", int(value) % self.modulus)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.modulus != self.modulus:
                raise ValueError("field elements over different primes")
            return other.value
        return int(other)

    def __add__(self, other):
        return FieldElement(self.value + self._coerce(other), self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.value - self._coerce(other), self.modulus)

    def __rsub__(self, other):
        return FieldElement(self._coerce(other) - self.value, self.modulus)

    def __mul__(self, other):
        return FieldElement(self.value * self._coerce(other), self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.value, self.modulus)

    def inverse(self) -> FieldElement:
        if self.value == 0:
            raise ZeroDivisionError("zero has no inverse")
        return FieldElement(pow(self.value, -1, self.modulus), self.modulus)

    def __truediv__(self, other):
        return self * FieldElement(self._coerce(other), self.modulus).inverse()

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return (self.value, self.modulus) == (other.value, other.modulus)
        if isinstance(other, int):
            return self.value == other % self.modulus
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.modulus))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"FieldElement({self.value}, {self.modulus})"


def asmatrix(m, p: int) -> np.ndarray:
    """Return ``m`` as a fresh 2-D int64 array reduced mod ``p``."""
    a = np.array(m, dtype=object if p > 2**40 else np.int64)
    if a.ndim == 1:
        a = a.reshape(1, -1) if a.size else a.reshape(0, 0)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {a.shape}")
    return (a % p).astype(np.int64)


def _accumulation_dtype(terms: int, p: int):
    return np.int64 if max(terms, 1) * (p - 1) ** 2 < _INT64_BUDGET else object


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Exact product ``a @ b`` mod ``p``."""
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"cannot multiply {a.shape} by {b.shape}")
    dt = _accumulation_dtype(a.shape[1], p)
    if dt is np.int64:
        return (a.astype(np.int64) @ b.astype(np.int64)) % p
    return ((a.astype(object) @ b.astype(object)) % p).astype(np.int64)


def rref(m, p: int) -> tuple[np.ndarray, list[int], int]:
    """Reduced row echelon form over GF(p).

    Returns ``(R, pivots, rank)`` where ``pivots`` lists the pivot column of
    each nonzero row of ``R``.
    """
    a = asmatrix(m, p).copy()
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        lead = int(a[r, c])
        if lead != 1:
            a[r] = (a[r] * pow(lead, -1, p)) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots, len(pivots)


def rank(m, p: int) -> int:
    return rref(m, p)[2]


def solve(a, b, p: int) -> np.ndarray | None:
    """Some ``X`` with ``a @ X == b`` over GF(p), or ``None`` if inconsistent."""
    a = asmatrix(a, p)
    b = asmatrix(b, p)
    if b.ndim == 2 and b.shape[0] != a.shape[0]:
        raise ValueError(f"row mismatch: a has {a.shape[0]} rows, b has {b.shape[0]}")
    n = a.shape[1]
    aug = np.concatenate([a, b], axis=1) if a.shape[0] else np.zeros((0, n + b.shape[1]), np.int64)
    r, pivots, _ = rref(aug, p)
    if pivots and pivots[-1] >= n:
        return None
    x = np.zeros((n, b.shape[1]), dtype=np.int64)
    for row, c in enumerate(pivots):
        x[c] = r[row, n:]
    return x


def kernel_basis(a, p: int) -> np.ndarray:
    """Columns spanning the right kernel of ``a`` (linearly independent)."""
    a = asmatrix(a, p)
    n = a.shape[1]
    r, pivots, rk = rref(a, p)
    return _kernel_from_rref(r, pivots, n, p)


def _kernel_from_rref(r: np.ndarray, pivots: list[int], n: int, p: int) -> np.ndarray:
    pcols = [c for c in pivots if c < n]
    free = np.setdiff1d(np.arange(n), pcols)
    k = np.zeros((n, free.size), dtype=np.int64)
    k[free, np.arange(free.size)] = 1
    if pcols and free.size:
        k[np.ix_(pcols, np.arange(free.size))] = (-r[:len(pcols)][:, free]) % p
    return k


def solve_affine(a, b, p: int) -> tuple[np.ndarray | None, np.ndarray]:
    """Solve ``a x = b`` for a single right-hand side vector.

    Returns a particular solution (or ``None``) together with a kernel basis
    of ``a`` as columns, so every solution is ``x0 + K c``.
    """
    a = asmatrix(a, p)
    b = np.asarray(b, dtype=np.int64).reshape(-1) % p
    n = a.shape[1]
    if a.shape[0] == 0:
        return np.zeros(n, dtype=np.int64), np.eye(n, dtype=np.int64)
    aug = np.concatenate([a, b.reshape(-1, 1)], axis=1)
    r, pivots, _ = rref(aug, p)
    consistent = not (pivots and pivots[-1] == n)
    k = _kernel_from_rref(r, pivots, n, p)
    if not consistent:
        return None, k
    x = np.zeros(n, dtype=np.int64)
    pcols = [c for c in pivots if c < n]
    x[pcols] = r[:len(pcols), n]
    return x, k


def complement_basis(span: np.ndarray, sub: np.ndarray, p: int) -> np.ndarray:
    """Columns of ``span`` extending a basis of ``col(sub)`` to one of ``col(span) + col(sub)``.

    Used to pick representatives of a quotient space ``col(span) / col(sub)``.
    """
    n = span.shape[0]
    if sub.shape[1] == 0:
        stacked = span
        offset = 0
    else:
        stacked = np.concatenate([sub, span], axis=1)
        offset = sub.shape[1]
    if stacked.shape[1] == 0:
        return np.zeros((n, 0), dtype=np.int64)
    _, pivots, _ = rref(stacked, p)
    keep = [c - offset for c in pivots if c >= offset]
    return span[:, keep] % p
