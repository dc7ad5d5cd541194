"""Monodromy weight filtrations, nilpotent orbits and limit Hodge data.

The weight side is exact (saturated sublattices of ``Z^n``); the Hodge side
is a complex subspace ``F^0`` handled with SVD rank decisions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import InvalidOrbit, NotNilpotent
from .linalg import (
    IntMatrix,
    LatticeSubgroup,
    RatMatrix,
    as_rat_matrix,
    kernel_lattice,
    image_lattice,
    lattice_from_vectors,
    matvec,
    rank_q,
    saturate,
)
from .monodromy import MonodromyOperator, as_monodromy, is_nilpotent
from .numeric import DEFAULT_TOL, exp_nilpotent_numeric, intersect_spans, numeric_rank

CALIBRATION_Y = 10.0
PURITY_TOL = 1e-6


@dataclass(frozen=True)
class WeightFiltration:
    """Increasing filtration by saturated sublattices.

    ``steps`` holds ``W_k`` for ``k`` in a window; below the window the step
    is zero and above it the step is the full lattice.
    """

    center: int
    steps: Mapping[int, LatticeSubgroup]
    n: int

    def W(self, k: int) -> LatticeSubgroup:
        if k in self.steps:
            return self.steps[k]
        if not self.steps or k > max(self.steps):
            return LatticeSubgroup.full(self.n)
        return LatticeSubgroup.zero(self.n)

    def gr_dim(self, k: int) -> int:
        return self.W(k).rank - self.W(k - 1).rank

    @property
    def support(self) -> list[int]:
        """Weights ``k`` with nonzero ``Gr_k``."""
        lo = min(self.steps, default=self.center) - 1
        hi = max(self.steps, default=self.center) + 1
        return [k for k in range(lo, hi + 1) if self.gr_dim(k)]

    def graded_dims(self) -> dict[int, int]:
        return {k: self.gr_dim(k) for k in self.support}


def _cleared(N) -> IntMatrix:
    N = as_rat_matrix(N)
    M, _ = N.clear_denominators()
    return M


def _span_intersection_q(A: LatticeSubgroup, M: IntMatrix) -> list[list[int]]:
    """Integral vectors spanning ``span_Q(A) ∩ Ker M``."""
    if A.rank == 0:
        return []
    K = kernel_lattice(M @ A.basis)
    return [matvec(A.basis, c) for c in K.columns()]


def weight_monodromy_filtration(N, w: int) -> WeightFiltration:
    """Weight filtration of nilpotent ``N`` centered at ``w``.

    Uses ``W_{w+k} = sum_{j >= max(0, -k)} Im N^j ∩ Ker N^{k+j+1}``, saturated.

    >>> W = weight_monodromy_filtration(RatMatrix.from_rows([[0, 0], [1, 0]]), -1)
    >>> W.W(-2).columns(), W.W(-1).columns(), W.W(0).rank
    ([[0, 1]], [[0, 1]], 2)
    """
    N = as_rat_matrix(N)
    if not N.is_square:
        raise NotNilpotent("N must be square")
    if not is_nilpotent(N):
        raise NotNilpotent("N is not nilpotent")
    n = N.rows
    M = _cleared(N)
    if M.is_zero():
        return WeightFiltration(w, {w - 1: LatticeSubgroup.zero(n), w: LatticeSubgroup.full(n)}, n)
    ell = 0
    while not (M ** (ell + 1)).is_zero():
        ell += 1
    powers = [IntMatrix.identity(n)]
    for _ in range(2 * ell + 2):
        powers.append(powers[-1] @ M)
    images = [image_lattice(P) for P in powers]
    steps = {}
    for k in range(-(ell + 1), ell + 1):
        vecs = []
        for j in range(max(0, -k), ell + 1):
            vecs += _span_intersection_q(images[j], powers[k + j + 1])
        steps[w + k] = saturate(lattice_from_vectors(vecs, n))
    return WeightFiltration(w, steps, n)


def _in_span_q(L: LatticeSubgroup, v) -> bool:
    if L.rank == 0:
        return all(x == 0 for x in v)
    return L.rational_coordinates(v) is not None


def weight_axioms_hold(W: WeightFiltration, N) -> bool:
    """Exact check of ``N W_k ⊆ W_{k-2}`` and ``N^k: Gr_{w+k} ≅ Gr_{w-k}``."""
    N = as_rat_matrix(N)
    n = N.rows
    lo = min(W.steps, default=W.center) - 2
    hi = max(W.steps, default=W.center) + 2
    for k in range(lo, hi + 1):
        if not W.W(k - 1).issubset(W.W(k)):
            return False
        if W.W(k) != saturate(W.W(k)):
            return False
        for v in W.W(k).columns():
            if not _in_span_q(W.W(k - 2), [sum(N[i, j] * v[j] for j in range(n)) for i in range(n)]):
                return False
    if W.W(lo).rank != 0 or W.W(hi).rank != n:
        return False
    w = W.center
    M = _cleared(N)
    for k in range(0, hi - w + 1):
        if W.gr_dim(w + k) != W.gr_dim(w - k):
            return False
        top, below = W.W(w + k), W.W(w - k - 1)
        if top.rank == 0:
            continue
        img = (M ** k) @ top.basis
        cols = img.columns() + below.columns()
        mapped = rank_q(IntMatrix.from_columns(cols, rows=n)) - below.rank if cols else 0
        if mapped != W.gr_dim(w + k) or W.W(w + k - 1).rank + mapped != top.rank:
            return False
    return True


class HodgeFiltrationStep:
    """Complex subspace ``F^0 ⊂ C^n`` given by independent columns."""

    def __init__(self, F0, n: int | None = None, tol: float = DEFAULT_TOL):
        F = np.asarray(F0, dtype=complex)
        if F.ndim == 1:
            F = F.reshape(-1, 1)
        if F.size == 0:
            F = np.zeros((n if n is not None else F.shape[0], 0), dtype=complex)
        if n is not None and F.shape[0] != n:
            raise InvalidOrbit(f"F0 has {F.shape[0]} rows, expected {n}")
        if not np.all(np.isfinite(F)):
            raise InvalidOrbit("F0 has non-finite entries")
        if numeric_rank(F, tol) != F.shape[1]:
            raise InvalidOrbit("F0 columns are not linearly independent")
        self.F0 = F
        self.F0.setflags(write=False)

    @classmethod
    def from_columns(cls, columns, n: int | None = None) -> "HodgeFiltrationStep":
        cols = [np.asarray(c, dtype=complex) for c in columns]
        if not cols:
            return cls(np.zeros((n or 0, 0)), n)
        return cls(np.column_stack(cols), n)

    @property
    def n(self) -> int:
        return self.F0.shape[0]

    @property
    def dim(self) -> int:
        return self.F0.shape[1]

    def __repr__(self):
        return f"HodgeFiltrationStep(n={self.n}, dim={self.dim})"


def purity_check(F0, n: int, tol: float = DEFAULT_TOL) -> bool:
    """True iff ``F^0 ⊕ conj(F^0) = C^n``."""
    F = F0.F0 if isinstance(F0, HodgeFiltrationStep) else np.asarray(F0, dtype=complex).reshape(n, -1)
    if F.shape[0] != n or 2 * F.shape[1] != n:
        return False
    if n == 0:
        return True
    return numeric_rank(np.hstack([F, F.conj()]), tol) == n


@dataclass(frozen=True, eq=False)
class NilpotentOrbit:
    """Weight -1 nilpotent orbit ``z -> exp(zN) F^0``."""

    N: RatMatrix
    F0: HodgeFiltrationStep
    weight: int = field(default=-1)

    def __post_init__(self):
        N = as_rat_matrix(self.N)
        object.__setattr__(self, "N", N)
        if not N.is_square or not is_nilpotent(N):
            raise InvalidOrbit("N must be square and nilpotent")
        if self.F0.n != N.rows:
            raise InvalidOrbit("F0 and N have different sizes")
        if not purity_check(self.twisted_F0(1j * CALIBRATION_Y), N.rows, PURITY_TOL):
            raise InvalidOrbit(f"exp(i y N) F0 is not pure of weight -1 at y = {CALIBRATION_Y}")

    @property
    def n(self) -> int:
        return self.N.rows

    @classmethod
    def from_monodromy(cls, T, F0) -> "NilpotentOrbit":
        mono = as_monodromy(T)
        if not isinstance(F0, HodgeFiltrationStep):
            F0 = HodgeFiltrationStep(F0, mono.rank)
        return cls(mono.N, F0)

    def N_numeric(self) -> np.ndarray:
        return self.N.to_numpy(complex)

    def twisted_F0(self, z: complex) -> np.ndarray:
        return exp_nilpotent_numeric(self.N_numeric(), z) @ self.F0.F0


@dataclass(frozen=True, eq=False)
class LimitMHS:
    W: WeightFiltration
    F0: HodgeFiltrationStep
    graded_hodge_numbers: dict

    def total_dim(self) -> int:
        return sum(self.graded_hodge_numbers.values())


def _intersection_dim(F: np.ndarray, L: LatticeSubgroup, tol: float) -> int:
    if L.rank == 0 or F.shape[1] == 0:
        return 0
    B = L.basis.to_numpy(complex)
    return F.shape[1] + L.rank - numeric_rank(np.hstack([F, B]), tol, strict=True)


def graded_f0_dims(W: WeightFiltration, F0: HodgeFiltrationStep, tol: float = DEFAULT_TOL) -> dict[int, int]:
    """``dim F^0 Gr_k`` for each ``k`` in the support of ``W``."""
    F = F0.F0
    return {
        k: _intersection_dim(F, W.W(k), tol) - _intersection_dim(F, W.W(k - 1), tol)
        for k in W.support
    }


def limit_mhs(orbit: NilpotentOrbit, tol: float = DEFAULT_TOL) -> LimitMHS:
    """Weight filtration centered at -1 plus Hodge numbers of each ``Gr_k``.

    ``Gr_k`` carries types ``(0, k)`` and ``(-1, k + 1)``; the first count is
    ``dim F^0 Gr_k``.
    """
    W = weight_monodromy_filtration(orbit.N, orbit.weight)
    f0 = graded_f0_dims(W, orbit.F0, tol)
    numbers = {}
    for k, d in W.graded_dims().items():
        h0 = f0[k]
        if h0:
            numbers[(0, k)] = h0
        if d - h0:
            numbers[(-1, k + 1)] = d - h0
    return LimitMHS(W, orbit.F0, numbers)


def check_hypothesis_C(orbit: NilpotentOrbit, tol: float = DEFAULT_TOL) -> bool:
    """``N^2 = 0`` and ``Gr_0`` is of type ``(0, 0)`` (vacuous when ``Gr_0 = 0``)."""
    if not (orbit.N @ orbit.N).is_zero():
        return False
    W = weight_monodromy_filtration(orbit.N, orbit.weight)
    d = W.gr_dim(0)
    if d == 0:
        return True
    return graded_f0_dims(W, orbit.F0, tol).get(0, 0) == d


def ggk_invariant_part(orbit: NilpotentOrbit, tol: float = DEFAULT_TOL) -> tuple[LatticeSubgroup, HodgeFiltrationStep]:
    """Saturated ``Ker N`` over Z and ``F^0 ∩ Ker N`` over C."""
    L = kernel_lattice(_cleared(orbit.N))
    if L.rank == 0:
        return L, HodgeFiltrationStep(np.zeros((orbit.n, 0)), orbit.n)
    inter = intersect_spans(orbit.F0.F0, L.basis.to_numpy(complex), tol)
    return L, HodgeFiltrationStep(inter, orbit.n)


def orbit_from_data(N, F0_columns) -> NilpotentOrbit:
    N = as_rat_matrix(N)
    return NilpotentOrbit(N, HodgeFiltrationStep.from_columns(F0_columns, N.rows))
