"""Quotients ``Λ \\ C^n / F^0`` realized in a fixed chart.

``V = C^n / F^0`` is coordinatized by a set of standard basis vectors that
complete a basis of ``F^0`` (chosen by column pivoting).  A vector
of ``C^n`` is projected to ``V`` along ``F^0`` by solving in that basis.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import NonDiscreteFiber, ProjectionDegenerate
from .hodge import HodgeFiltrationStep
from .linalg import LatticeSubgroup, lattice_from_vectors, saturate, smith_normal_form
from .numeric import DEFAULT_TOL, null_space, numeric_rank

RATIONAL_DENOMINATOR = 10**5
# accepted residual of an integer relation, in units of eps * (|R| |k|)
RELATION_SLACK = 1e4
SHIFT_RADIUS = 3


@dataclass(frozen=True, eq=False)
class FiberPoint:
    coords: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coords, dtype=complex))
        if not np.all(np.isfinite(c)):
            raise ValueError("fiber point has non-finite coordinates")
        object.__setattr__(self, "coords", c)

    @property
    def dim(self) -> int:
        return self.coords.shape[0]

    def __sub__(self, other: "FiberPoint") -> "FiberPoint":
        return FiberPoint(self.coords - other.coords)

    def __add__(self, other: "FiberPoint") -> "FiberPoint":
        return FiberPoint(self.coords + other.coords)


@dataclass(frozen=True, eq=False)
class SemiTorusFiber:
    """Quotient of ``V ≅ C^d`` by the subgroup generated by ``lattice_images``.

    When ``discrete`` is true, ``gamma`` is a d x r basis of the image group
    (r = torus rank) and ``real_type == (r, 2d - r)``, i.e. the real Lie group
    ``T^r x R^(2d-r)``.
    """

    dim: int
    lattice_images: np.ndarray
    discrete: bool
    real_type: tuple[int, int] | None
    gamma: np.ndarray | None = None
    F0: np.ndarray | None = None
    complement: tuple[int, ...] = ()

    @property
    def n(self) -> int:
        return self.F0.shape[0] if self.F0 is not None else self.dim

    @property
    def is_point(self) -> bool:
        return self.dim == 0

    @property
    def is_compact(self) -> bool:
        return bool(self.discrete and self.real_type[1] == 0)

    def project(self, v) -> FiberPoint:
        """Image in ``V`` of a vector of ``C^n``."""
        v = np.asarray(v, dtype=complex).reshape(-1)
        if self.F0 is None:
            return FiberPoint(v)
        return FiberPoint(_project(self.F0, self.complement, v.reshape(-1, 1))[:, 0])

    def lift(self, p: FiberPoint) -> np.ndarray:
        """A vector of ``C^n`` projecting to ``p`` (supported on the chart coordinates)."""
        out = np.zeros(self.n, dtype=complex)
        for c, idx in zip(p.coords, self.complement):
            out[idx] = c
        return out

    def origin(self) -> FiberPoint:
        return FiberPoint(np.zeros(self.dim, dtype=complex))

    def describe(self) -> str:
        if self.is_point:
            return "pt"
        if not self.discrete:
            return "non-discrete quotient"
        r, v = self.real_type
        parts = ([f"T^{r}"] if r else []) + ([f"R^{v}"] if v else [])
        return " x ".join(parts)


def _complement_indices(F: np.ndarray, tol: float) -> tuple[int, ...]:
    """Standard basis vectors completing ``F`` by column pivoting.

    Each step takes the basis vector with the largest component orthogonal
    to the current span (lowest index among near-ties), which keeps the
    chart well conditioned.
    """
    n, k = F.shape
    if k and numeric_rank(F, tol) != k:
        raise ProjectionDegenerate("F0 is rank deficient")
    Q = np.linalg.qr(F)[0] if k else np.zeros((n, 0), dtype=complex)
    chosen: list[int] = []
    for _ in range(n - k):
        resid = np.eye(n, dtype=complex) - Q @ Q.conj().T
        norms = np.linalg.norm(resid, axis=0)
        norms[chosen] = -1.0
        best = norms.max()
        if best <= tol:
            raise ProjectionDegenerate("could not complete F0 to a basis")
        j = int(np.flatnonzero(norms >= best * (1 - 1e-12))[0])
        chosen.append(j)
        q = resid[:, j] / norms[j]
        Q = np.hstack([Q, q[:, None]])
    return tuple(sorted(chosen))


def _project(F: np.ndarray, complement: tuple[int, ...], vectors: np.ndarray) -> np.ndarray:
    n, k = F.shape
    E = np.zeros((n, len(complement)), dtype=complex)
    for col, idx in enumerate(complement):
        E[idx, col] = 1
    basis = np.hstack([F, E])
    coeffs = np.linalg.solve(basis, vectors) if n else np.zeros((0, vectors.shape[1]), dtype=complex)
    return coeffs[k:]


def _rational_null_basis(R: np.ndarray, tol: float) -> list[list[Fraction]] | None:
    """Rational basis of the real kernel of ``R``, or None if the kernel is irrational."""
    K = null_space(R.astype(complex), tol).real.T  # rows span the kernel
    K = K.copy()
    rows, cols = K.shape
    # row-reduce numerically so pivots are 1 and the remaining entries are candidate rationals
    r = 0
    pivots = []
    for c in range(cols):
        if r == rows:
            break
        p = r + int(np.argmax(np.abs(K[r:, c])))
        if abs(K[p, c]) < 1e-8:
            continue
        K[[r, p]] = K[[p, r]]
        K[r] /= K[r, c]
        for i in range(rows):
            if i != r:
                K[i] -= K[i, c] * K[r]
        pivots.append(c)
        r += 1
    out = []
    eps = np.finfo(float).eps
    for i in range(r):
        q = [Fraction(float(x)).limit_denominator(RATIONAL_DENOMINATOR) for x in K[i]]
        den = math.lcm(*(x.denominator for x in q))
        k = np.array([float(x * den) for x in q])
        # an exact relation only leaves rounding error; a rational approximation
        # of an irrational ratio leaves a residual of order 1/den
        bound = RELATION_SLACK * eps * (np.abs(R) @ np.abs(k)).max(initial=0.0)
        if np.abs(R @ k).max(initial=0.0) > bound:
            return None
        out.append(q)
    return out


def classify_generators(images, tol: float = DEFAULT_TOL) -> tuple[bool, tuple[int, int] | None, np.ndarray | None]:
    """Decide whether the additive group generated by the columns is discrete.

    Returns ``(discrete, real_type, gamma)`` where ``gamma`` is a basis of the
    generated group when it is discrete.
    """
    G = np.asarray(images, dtype=complex)
    if G.ndim == 1:
        G = G.reshape(-1, 1)
    d, rho = G.shape
    if rho == 0:
        return True, (0, 2 * d), np.zeros((d, 0), dtype=complex)
    R = np.vstack([G.real, G.imag])
    r = numeric_rank(R.astype(complex), tol)
    if r == rho:
        return True, (r, 2 * d - r), G
    null = _rational_null_basis(R, tol)
    if null is None:
        return False, None, None
    # integer kernel vectors, then a unimodular completion picks a basis of the image
    ints = []
    for q in null:
        den = math.lcm(*(x.denominator for x in q))
        ints.append([int(x * den) for x in q])
    K = saturate(lattice_from_vectors(ints, rho))
    snf = smith_normal_form(K.basis)
    # U K V = D with unit diagonal, so the last rho - k columns of U^{-1} complete K
    k = K.rank
    completion = np.array(
        [[float(snf.U_inv[i, j]) for j in range(k, rho)] for i in range(rho)]
    ).reshape(rho, rho - k)
    gamma = G @ completion
    if numeric_rank(np.vstack([gamma.real, gamma.imag]).astype(complex), tol) != r:
        return False, None, None
    return True, (r, 2 * d - r), gamma


def quotient_fiber(generators, F0: HodgeFiltrationStep | np.ndarray | None = None, tol: float = DEFAULT_TOL) -> SemiTorusFiber:
    """Quotient of ``C^n / F^0`` by the group generated by the given columns.

    ``generators`` is n x rho complex.  With ``F0=None`` the generators are
    taken to live in ``V`` already.
    """
    G = np.asarray(generators, dtype=complex)
    if G.ndim == 1:
        G = G.reshape(-1, 1)
    if F0 is None:
        d = G.shape[0]
        discrete, real_type, gamma = classify_generators(G, tol)
        return SemiTorusFiber(d, G, discrete, real_type, gamma)
    F = F0.F0 if isinstance(F0, HodgeFiltrationStep) else np.asarray(F0, dtype=complex)
    n, k = F.shape
    if numeric_rank(F, tol) != k:
        raise ProjectionDegenerate("F0 is rank deficient")
    complement = _complement_indices(F, tol)
    d = n - k
    images = _project(F, complement, G) if G.shape[1] else np.zeros((d, 0), dtype=complex)
    discrete, real_type, gamma = classify_generators(images, tol)
    return SemiTorusFiber(d, images, discrete, real_type, gamma, F, complement)


def jacobian_fiber(lattice: LatticeSubgroup, F0, n: int | None = None, tol: float = DEFAULT_TOL) -> SemiTorusFiber:
    """``lattice \\ C^n / F^0``."""
    if not isinstance(F0, HodgeFiltrationStep):
        F0 = HodgeFiltrationStep(F0, n)
    n = lattice.ambient_rank if n is None else n
    if lattice.ambient_rank != n or F0.n != n:
        raise ValueError("lattice, F0 and n disagree on the ambient rank")
    return quotient_fiber(lattice.basis.to_numpy(complex).reshape(n, lattice.rank), F0, tol)


def point_fiber() -> SemiTorusFiber:
    return SemiTorusFiber(0, np.zeros((0, 0), dtype=complex), True, (0, 0), np.zeros((0, 0), dtype=complex))


def _real_frame(fiber: SemiTorusFiber) -> np.ndarray:
    """2d x 2d real basis: lattice directions first, then an orthonormal basis of their orthogonal complement.

    Orthogonality makes the Euclidean norm split into a lattice-span part and a
    part no lattice shift can change, which is what ``fiber_distance`` relies on.
    """
    if not fiber.discrete:
        raise NonDiscreteFiber("point reduction needs a discrete lattice image")
    d = fiber.dim
    G = fiber.gamma
    B = np.vstack([G.real, G.imag]).reshape(2 * d, -1)
    r = B.shape[1]
    if r == 2 * d:
        return B
    if r == 0:
        return np.eye(2 * d)
    U, _, _ = np.linalg.svd(B, full_matrices=True)
    return np.hstack([B, U[:, r:]])


def _frac(x: np.ndarray) -> np.ndarray:
    f = x - np.floor(x)
    f[np.isclose(f, 1.0, rtol=0, atol=1e-12)] = 0.0
    return f


def reduce_point(fiber: SemiTorusFiber, v: FiberPoint) -> FiberPoint:
    """Canonical representative: fractional parts along the lattice directions."""
    if not fiber.discrete:
        raise NonDiscreteFiber("point reduction needs a discrete lattice image")
    if fiber.dim == 0:
        return FiberPoint(np.zeros(0, dtype=complex))
    d = fiber.dim
    r = fiber.real_type[0]
    B = _real_frame(fiber)
    x = np.concatenate([v.coords.real, v.coords.imag])
    c = np.linalg.solve(B, x)
    c[:r] = _frac(c[:r])
    y = B @ c
    return FiberPoint(y[:d] + 1j * y[d:])


@lru_cache(maxsize=None)
def _shifts(r: int) -> np.ndarray:
    rng = range(-SHIFT_RADIUS, SHIFT_RADIUS + 1)
    return np.array(list(itertools.product(rng, repeat=r)), dtype=float).reshape(-1, r)


def fiber_distance(fiber: SemiTorusFiber, a: FiberPoint, b: FiberPoint) -> float:
    """Smallest ``|a - b - λ|`` over lattice shifts near the reduced difference."""
    if not fiber.discrete:
        raise NonDiscreteFiber("distance needs a discrete lattice image")
    if fiber.dim == 0:
        return 0.0
    diff = reduce_point(fiber, a - b).coords
    r = fiber.real_type[0]
    if r == 0:
        return float(np.linalg.norm(diff))
    shifts = _shifts(r) @ fiber.gamma.T
    return float(np.min(np.linalg.norm(diff[None, :] - shifts, axis=1)))
