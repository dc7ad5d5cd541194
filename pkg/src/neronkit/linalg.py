"""Exact integer and rational linear algebra.

Everything here works on Python integers and :class:`fractions.Fraction`, so
results are bit-exact regardless of entry size.  The main entry points are

* :func:`smith_normal_form` -- ``U @ A @ V == D`` with unimodular ``U, V``;
* :func:`hermite_basis` -- canonical column Hermite basis of a subgroup of Z^n;
* :func:`kernel_lattice`, :func:`saturate`, :func:`cokernel_structure`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import NotSquare


class _Matrix:
    """Shared dense row-major storage for :class:`IntMatrix` and :class:`RatMatrix`."""

    __slots__ = ()
    rows: int
    cols: int
    entries: tuple

    @staticmethod
    def _coerce(x):
        raise NotImplementedError

    def _check(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None):
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(cls._coerce(x) for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int | None = None):
        columns = [list(c) for c in columns]
        if rows is None:
            if not columns:
                raise ValueError("row count needed for an empty column list")
            rows = len(columns[0])
        for c in columns:
            if len(c) != rows:
                raise ValueError("ragged columns")
        return cls(
            rows,
            len(columns),
            tuple(cls._coerce(columns[j][i]) for i in range(rows) for j in range(len(columns))),
        )

    @classmethod
    def zeros(cls, rows: int, cols: int):
        return cls(rows, cols, tuple(cls._coerce(0) for _ in range(rows * cols)))

    @classmethod
    def identity(cls, n: int):
        return cls(n, n, tuple(cls._coerce(1 if i == j else 0) for i in range(n) for j in range(n)))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def column(self, j: int) -> list:
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def to_rows(self) -> list[list]:
        return [self.row(i) for i in range(self.rows)]

    def columns(self) -> list[list]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self):
        return type(self).from_columns(self.to_rows(), rows=self.cols)

    @property
    def T(self):
        return self.transpose()

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.entries)

    def _result_type(self, other):
        if isinstance(self, RatMatrix) or isinstance(other, RatMatrix):
            return RatMatrix
        return IntMatrix

    def __matmul__(self, other):
        if not isinstance(other, _Matrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        A = self.to_rows()
        Bc = other.columns()
        out = [sum(a * b for a, b in zip(r, c)) for r in A for c in Bc]
        cls = self._result_type(other)
        return cls(self.rows, other.cols, tuple(cls._coerce(x) for x in out))

    def __add__(self, other):
        if not isinstance(other, _Matrix):
            return NotImplemented
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        cls = self._result_type(other)
        return cls(self.rows, self.cols, tuple(cls._coerce(a + b) for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other):
        if not isinstance(other, _Matrix):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return type(self)(self.rows, self.cols, tuple(-x for x in self.entries))

    def scale(self, c):
        cls = RatMatrix if isinstance(c, Fraction) or isinstance(self, RatMatrix) else IntMatrix
        return cls(self.rows, self.cols, tuple(cls._coerce(c * x) for x in self.entries))

    def __pow__(self, k: int):
        if not self.is_square:
            raise NotSquare("power of a non-square matrix")
        if k < 0:
            raise ValueError("negative powers are not supported")
        result = type(self).identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def hstack(self, other):
        if self.rows != other.rows:
            raise ValueError("row mismatch")
        cls = self._result_type(other)
        return cls.from_rows([a + b for a, b in zip(self.to_rows(), other.to_rows())], cols=self.cols + other.cols) \
            if self.rows else cls.zeros(0, self.cols + other.cols)

    def vstack(self, other):
        if self.cols != other.cols:
            raise ValueError("column mismatch")
        cls = self._result_type(other)
        return cls(self.rows + other.rows, self.cols, tuple(cls._coerce(x) for x in self.entries + other.entries))

    def select_columns(self, idx: Iterable[int]):
        idx = list(idx)
        return type(self).from_columns([self.column(j) for j in idx], rows=self.rows)

    def select_rows(self, idx: Iterable[int]):
        idx = list(idx)
        return type(self).from_rows([self.row(i) for i in idx], cols=self.cols)

    def det(self):
        """Exact determinant by rational Gaussian elimination."""
        if not self.is_square:
            raise NotSquare("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return self._coerce(1)
        M = [[Fraction(x) for x in r] for r in self.to_rows()]
        sign = 1
        for k in range(n):
            p = next((i for i in range(k, n) if M[i][k] != 0), None)
            if p is None:
                return self._coerce(0)
            if p != k:
                M[k], M[p] = M[p], M[k]
                sign = -sign
            for i in range(k + 1, n):
                f = M[i][k] / M[k][k]
                if f:
                    M[i] = [a - f * b for a, b in zip(M[i], M[k])]
        d = Fraction(sign)
        for k in range(n):
            d *= M[k][k]
        return self._coerce(d)

    def to_numpy(self, dtype=complex) -> np.ndarray:
        return np.array([[float(x) for x in r] for r in self.to_rows()], dtype=float).reshape(
            self.rows, self.cols
        ).astype(dtype)

    def __repr__(self):
        return f"{type(self).__name__}({self.to_rows()!r})"


@dataclass(frozen=True, repr=False)
class IntMatrix(_Matrix):
    """Integral matrix with arbitrary-precision entries, row-major."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    @staticmethod
    def _coerce(x) -> int:
        if isinstance(x, bool):
            return int(x)
        if isinstance(x, int):
            return x
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ValueError(f"non-integral entry {x}")
            return x.numerator
        if isinstance(x, (np.integer,)):
            return int(x)
        raise TypeError(f"cannot use {x!r} as an integer entry")

    def __post_init__(self):
        self._check()

    def to_rational(self) -> "RatMatrix":
        return RatMatrix(self.rows, self.cols, tuple(Fraction(x) for x in self.entries))


@dataclass(frozen=True, repr=False)
class RatMatrix(_Matrix):
    """Rational matrix; entries are reduced :class:`~fractions.Fraction` values."""

    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    @staticmethod
    def _coerce(x) -> Fraction:
        if isinstance(x, float):
            raise TypeError("floats are not exact; pass a Fraction or a string 'a/b'")
        if isinstance(x, (np.integer,)):
            x = int(x)
        return Fraction(x)

    def __post_init__(self):
        self._check()

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for x in self.entries)

    def to_int(self) -> IntMatrix:
        return IntMatrix(self.rows, self.cols, tuple(IntMatrix._coerce(x) for x in self.entries))

    def clear_denominators(self) -> tuple[IntMatrix, int]:
        """Return ``(M, c)`` with ``M == c * self`` integral and ``c >= 1`` minimal."""
        c = 1
        for x in self.entries:
            c = c * x.denominator // math.gcd(c, x.denominator)
        return IntMatrix(self.rows, self.cols, tuple(int(x * c) for x in self.entries)), c


def as_int_matrix(A) -> IntMatrix:
    if isinstance(A, IntMatrix):
        return A
    if isinstance(A, RatMatrix):
        return A.to_int()
    return IntMatrix.from_rows(A)


def as_rat_matrix(A) -> RatMatrix:
    if isinstance(A, RatMatrix):
        return A
    if isinstance(A, IntMatrix):
        return A.to_rational()
    return RatMatrix.from_rows(A)


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ A @ V == D`` with ``U, V`` unimodular and ``D`` in Smith form.

    The inverses of ``U`` and ``V`` are carried along because they come for
    free during the elimination and are needed for saturation and kernels.
    """

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix = field(repr=False, compare=False)
    V_inv: IntMatrix = field(repr=False, compare=False)

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i, i] for i in range(min(self.D.rows, self.D.cols))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def smith_normal_form(A: IntMatrix) -> SmithDecomposition:
    """Smith normal form with transforms.

    Pivoting picks the smallest nonzero ``|entry|`` of the active block, ties
    broken by row-major position, so ``U`` and ``V`` are deterministic.

    >>> smith_normal_form(IntMatrix.from_rows([[2, 4], [6, 8]])).diagonal
    [2, 4]
    """
    A = as_int_matrix(A)
    m, n = A.rows, A.cols
    D = A.to_rows()
    U = IntMatrix.identity(m).to_rows()
    Ui = IntMatrix.identity(m).to_rows()
    V = IntMatrix.identity(n).to_rows()
    Vi = IntMatrix.identity(n).to_rows()

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]
        for r in Ui:
            r[i], r[j] = r[j], r[i]

    def add_row(i, j, q):  # row_i += q * row_j
        D[i] = [a + q * b for a, b in zip(D[i], D[j])]
        U[i] = [a + q * b for a, b in zip(U[i], U[j])]
        for r in Ui:
            r[j] -= q * r[i]

    def negate_row(i):
        D[i] = [-a for a in D[i]]
        U[i] = [-a for a in U[i]]
        for r in Ui:
            r[i] = -r[i]

    def swap_cols(i, j):
        for r in D:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_col(j, i, q):  # col_j += q * col_i
        for r in D:
            r[j] += q * r[i]
        for r in V:
            r[j] += q * r[i]
        Vi[i] = [a - q * b for a, b in zip(Vi[i], Vi[j])]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    x = D[i][j]
                    if x != 0 and (best is None or abs(x) < abs(D[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            if best[0] != t:
                swap_rows(t, best[0])
            if best[1] != t:
                swap_cols(t, best[1])
            p = D[t][t]
            clean = True
            for i in range(t + 1, m):
                q = D[i][t] // p
                if q:
                    add_row(i, t, -q)
                if D[i][t]:
                    clean = False
            for j in range(t + 1, n):
                q = D[t][j] // p
                if q:
                    add_col(j, t, -q)
                if D[t][j]:
                    clean = False
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p),
                None,
            )
            if bad is not None:
                add_row(t, bad, 1)
                continue
            break
        if D[t][t] < 0:
            negate_row(t)

    return SmithDecomposition(
        U=IntMatrix.from_rows(U, cols=m),
        D=IntMatrix.from_rows(D, cols=n),
        V=IntMatrix.from_rows(V, cols=n),
        U_inv=IntMatrix.from_rows(Ui, cols=m),
        V_inv=IntMatrix.from_rows(Vi, cols=n),
    )


# ---------------------------------------------------------------------------
# Lattices
# ---------------------------------------------------------------------------


def _hermite_columns(columns: list[list[int]], n: int) -> list[list[int]]:
    work = [list(c) for c in columns if any(c)]
    result: list[list[int]] = []
    for r in range(n):
        while True:
            nz = [i for i, c in enumerate(work) if c[r] != 0]
            if len(nz) <= 1:
                break
            piv = min(nz, key=lambda i: (abs(work[i][r]), i))
            pc = work[piv]
            for i in nz:
                if i != piv:
                    q = work[i][r] // pc[r]
                    work[i] = [a - q * b for a, b in zip(work[i], pc)]
        if nz:
            c = work.pop(nz[0])
            if c[r] < 0:
                c = [-a for a in c]
            for k, b in enumerate(result):
                q = b[r] // c[r]
                if q:
                    result[k] = [a - q * x for a, x in zip(b, c)]
            result.append(c)
        work = [c for c in work if any(c)]
        if not work:
            break
    return result


@dataclass(frozen=True)
class LatticeSubgroup:
    """Subgroup of Z^n stored by its column Hermite basis.

    The basis is lower-triangular in the echelon sense: column ``k`` has its
    first nonzero entry (the pivot, positive) in row ``pivots[k]``, pivot rows
    increase, and entries of earlier columns in a pivot row lie in
    ``[0, pivot)``.  This makes equality of subgroups equality of bases.
    """

    ambient_rank: int
    basis: IntMatrix

    def __post_init__(self):
        if self.basis.rows != self.ambient_rank:
            raise ValueError("basis rows must equal the ambient rank")

    @property
    def rank(self) -> int:
        return self.basis.cols

    @property
    def pivots(self) -> list[int]:
        return [next(i for i, x in enumerate(c) if x) for c in self.basis.columns()]

    @classmethod
    def zero(cls, n: int) -> "LatticeSubgroup":
        return cls(n, IntMatrix.zeros(n, 0))

    @classmethod
    def full(cls, n: int) -> "LatticeSubgroup":
        return cls(n, IntMatrix.identity(n))

    def columns(self) -> list[list[int]]:
        return self.basis.columns()

    def coordinates(self, v: Sequence[int]) -> list[int] | None:
        """Integer coordinates of ``v`` in the basis, or ``None`` if ``v`` is not in the subgroup."""
        c = self._solve([Fraction(x) for x in v])
        if c is None or any(x.denominator != 1 for x in c):
            return None
        return [int(x) for x in c]

    def rational_coordinates(self, v: Sequence) -> list[Fraction] | None:
        """Coordinates over Q, or ``None`` if ``v`` is outside the rational span."""
        return self._solve([Fraction(x) for x in v])

    def _solve(self, v: list[Fraction]) -> list[Fraction] | None:
        if len(v) != self.ambient_rank:
            raise ValueError("vector length does not match the ambient rank")
        v = list(v)
        coords = []
        for col, p in zip(self.columns(), self.pivots):
            if any(v[i] for i in range(p)):
                return None
            c = v[p] / col[p]
            coords.append(c)
            if c:
                v = [a - c * b for a, b in zip(v, col)]
        if any(v):
            return None
        return coords

    def contains(self, v: Sequence[int]) -> bool:
        return self.coordinates(v) is not None

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def issubset(self, other: "LatticeSubgroup") -> bool:
        return all(other.contains(c) for c in self.columns())

    def __repr__(self):
        return f"LatticeSubgroup(n={self.ambient_rank}, basis={self.columns()!r})"


def hermite_basis(gens: IntMatrix) -> LatticeSubgroup:
    """Canonical basis of the subgroup generated by the columns of ``gens``.

    >>> hermite_basis(IntMatrix.from_columns([[2, 6], [4, 8]])).columns()
    [[2, 2], [0, 4]]
    """
    gens = as_int_matrix(gens)
    cols = _hermite_columns(gens.columns(), gens.rows)
    if cols:
        basis = IntMatrix.from_columns(cols, rows=gens.rows)
    else:
        basis = IntMatrix.zeros(gens.rows, 0)
    return LatticeSubgroup(gens.rows, basis)


def lattice_from_vectors(vectors: Sequence[Sequence[int]], n: int) -> LatticeSubgroup:
    vectors = list(vectors)
    if not vectors:
        return LatticeSubgroup.zero(n)
    return hermite_basis(IntMatrix.from_columns(vectors, rows=n))


def kernel_lattice(A: IntMatrix) -> LatticeSubgroup:
    """Saturated integral kernel ``{v in Z^cols : A v = 0}``."""
    A = as_int_matrix(A)
    snf = smith_normal_form(A)
    r = snf.rank
    vecs = [snf.V.column(j) for j in range(r, A.cols)]
    return lattice_from_vectors(vecs, A.cols)


def image_lattice(A: IntMatrix) -> LatticeSubgroup:
    """Subgroup of Z^rows generated by the columns of ``A``."""
    return hermite_basis(as_int_matrix(A))


def saturate(L: LatticeSubgroup) -> LatticeSubgroup:
    """``(Q-span of L) ∩ Z^n``."""
    if L.rank == 0:
        return L
    snf = smith_normal_form(L.basis)
    r = snf.rank
    return lattice_from_vectors([snf.U_inv.column(j) for j in range(r)], L.ambient_rank)


def lattice_sum(*lattices: LatticeSubgroup) -> LatticeSubgroup:
    n = lattices[0].ambient_rank
    return lattice_from_vectors([c for L in lattices for c in L.columns()], n)


def lattice_intersection(A: LatticeSubgroup, B: LatticeSubgroup) -> LatticeSubgroup:
    """Intersection of two subgroups of the same Z^n."""
    n = A.ambient_rank
    if A.rank == 0 or B.rank == 0:
        return LatticeSubgroup.zero(n)
    stacked = A.basis.hstack(-B.basis)
    K = kernel_lattice(stacked)
    vecs = []
    for c in K.columns():
        a = c[:A.rank]
        vecs.append([sum(A.basis[i, j] * a[j] for j in range(A.rank)) for i in range(n)])
    return lattice_from_vectors(vecs, n)


def quotient_structure(big: LatticeSubgroup, small: LatticeSubgroup) -> "FiniteAbelianGroup":
    """Abstract structure of ``big / small``; ``small`` must be contained in ``big``."""
    coords = []
    for c in small.columns():
        x = big.coordinates(c)
        if x is None:
            raise ValueError("quotient_structure: subgroup is not contained in the ambient group")
        coords.append(x)
    if not coords:
        return FiniteAbelianGroup(big.rank, ())
    return cokernel_structure(IntMatrix.from_columns(coords, rows=big.rank))


# ---------------------------------------------------------------------------
# Finite abelian groups
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """``Z^free_rank ⊕ Z/d_1 ⊕ ... ⊕ Z/d_k`` with ``d_i >= 2`` and ``d_i | d_{i+1}``.

    Despite the name the free rank may be positive; cokernels are reported
    with their free part.
    """

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        for d in self.torsion:
            if d < 2:
                raise ValueError(f"torsion divisors must be >= 2, got {d}")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"divisibility chain broken: {a} does not divide {b}")

    @classmethod
    def from_cyclic_orders(cls, orders: Iterable[int], free_rank: int = 0) -> "FiniteAbelianGroup":
        """Normalize an arbitrary direct sum of cyclic groups ``Z/m_i`` (``m_i = 0`` means ``Z``)."""
        orders = list(orders)
        free_rank += sum(1 for m in orders if m == 0)
        orders = [abs(m) for m in orders if m not in (0, 1, -1)]
        if not orders:
            return cls(free_rank, ())
        return cls(free_rank, tuple(d for d in cokernel_structure(
            IntMatrix.from_rows([[m if i == j else 0 for j in range(len(orders))] for i, m in enumerate(orders)])
        ).torsion))

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> int | None:
        """Group order, ``None`` when infinite."""
        if self.free_rank:
            return None
        return math.prod(self.torsion)

    @property
    def exponent(self) -> int | None:
        if self.free_rank:
            return None
        return self.torsion[-1] if self.torsion else 1

    def torsion_subgroup(self) -> "FiniteAbelianGroup":
        return FiniteAbelianGroup(0, self.torsion)

    def elements(self) -> list[tuple[int, ...]]:
        """All elements of the torsion part, as coordinate tuples."""
        return list(itertools.product(*(range(d) for d in self.torsion)))

    def __str__(self):
        parts = ["Z"] * self.free_rank + [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


def cokernel_structure(A: IntMatrix) -> FiniteAbelianGroup:
    """Structure of ``Z^rows / (column span of A)``."""
    A = as_int_matrix(A)
    snf = smith_normal_form(A)
    diag = snf.diagonal
    r = snf.rank
    return FiniteAbelianGroup(A.rows - r, tuple(d for d in diag[:r] if d > 1))


# ---------------------------------------------------------------------------
# Rational helpers
# ---------------------------------------------------------------------------


def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    M = [list(r) for r in rows]
    pivots = []
    if not M:
        return M, pivots
    ncols = len(M[0])
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M, pivots


def rank_q(A) -> int:
    """Rank over Q."""
    A = as_rat_matrix(A)
    if A.rows == 0 or A.cols == 0:
        return 0
    return len(_rref(A.to_rows())[1])


def solve_rational(A, b: Sequence) -> list[Fraction] | None:
    """One solution ``x`` of ``A x = b`` over Q (free variables set to 0), or ``None``."""
    A = as_rat_matrix(A)
    b = [Fraction(x) for x in b]
    if A.rows != len(b):
        raise ValueError("right-hand side has the wrong length")
    aug = [r + [bi] for r, bi in zip(A.to_rows(), b)]
    M, piv = _rref(aug)
    if A.cols in piv:
        return None
    x = [Fraction(0)] * A.cols
    for row, c in zip(M, piv):
        x[c] = row[-1]
    return x


def in_rational_column_span(A, v: Sequence) -> bool:
    A = as_rat_matrix(A)
    if A.cols == 0:
        return all(Fraction(x) == 0 for x in v)
    return solve_rational(A, v) is not None


def solve_integral(A: IntMatrix, b: Sequence[int]) -> list[int] | None:
    """Integral solution of ``A x = b`` via Smith form (free coordinates 0), or ``None``."""
    A = as_int_matrix(A)
    snf = smith_normal_form(A)
    Ub = [sum(snf.U[i, k] * b[k] for k in range(A.rows)) for i in range(A.rows)]
    diag = snf.diagonal
    y = [0] * A.cols
    for i in range(A.rows):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if Ub[i] != 0:
                return None
        else:
            if Ub[i] % d:
                return None
            y[i] = Ub[i] // d
    return [sum(snf.V[i, k] * y[k] for k in range(A.cols)) for i in range(A.cols)]


def matvec(A: _Matrix, v: Sequence):
    return [sum(A[i, j] * v[j] for j in range(A.cols)) for i in range(A.rows)]
