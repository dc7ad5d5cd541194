"""Fibers over the puncture of the four Neron-type models and the blow-down map."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import NotAdmissible, UnsupportedN
from .fibers import FiberPoint, SemiTorusFiber, jacobian_fiber, point_fiber, reduce_point
from .hodge import HodgeFiltrationStep, NilpotentOrbit, ggk_invariant_part
from .linalg import FiniteAbelianGroup, LatticeSubgroup
from .monodromy import NonUnipotentWarning, as_monodromy, component_group, invariant_lattice
from .normal_functions import (
    CokernelChart,
    NormalFunctionExpr,
    check_admissible,
    cohomology_class_curve,
    torsion_nf_from_class,
    zucker_fiber,
    zucker_limit,
)
from .numeric import DEFAULT_TOL, intersect_spans

KINDS = ("Zucker", "Clemens", "GGK", "BPS")


@dataclass(frozen=True, eq=False)
class ModelFiber:
    kind: str
    identity_component: SemiTorusFiber
    components: FiniteAbelianGroup = field(default_factory=lambda: FiniteAbelianGroup(0))
    component_basepoints: Mapping[tuple[int, ...], NormalFunctionExpr] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}")

    @property
    def component_count(self) -> int:
        return self.components.order


@dataclass(frozen=True, eq=False)
class ClemensPoint:
    """Extended value at the puncture: a component of ``G_0`` and a point of ``J^Z_0``."""

    component: tuple[int, ...]
    coordinate: FiberPoint

    @property
    def index(self) -> int:
        if len(self.component) > 1:
            raise ValueError("component group is not cyclic")
        return self.component[0] if self.component else 0


def zucker_fiber0(orbit: NilpotentOrbit, T) -> SemiTorusFiber:
    """``H^inv_Z \\ C^n / F^0``."""
    return zucker_fiber(orbit, T)


def _unipotent_part(T):
    mono = as_monodromy(T)
    return mono.Tm


def clemens_fiber(orbit: NilpotentOrbit, T) -> ModelFiber:
    """Identity component ``J^Z_0`` glued with one translate per element of ``G_0``.

    Non-unipotent ``T`` is replaced by its unipotent power.
    """
    Tu = _unipotent_part(T)
    G = component_group(Tu)
    chart = CokernelChart(Tu)
    basepoints = {}
    try:
        for elem in G.elements():
            value = elem + (0,) * chart.group.free_rank
            g = chart.class_of(chart.lift(value))
            basepoints[elem] = torsion_nf_from_class(Tu, g)
    except UnsupportedN:
        basepoints = {}
    return ModelFiber("Clemens", zucker_fiber(orbit, Tu), G, basepoints)


def clemens_extend(nf: NormalFunctionExpr, T, orbit: NilpotentOrbit, basepoint: NormalFunctionExpr | None = None) -> ClemensPoint:
    """Extend an admissible normal function into the Clemens fiber.

    The component is the class of ``nf``; the coordinate is the Zucker limit of
    ``nf - nu_g`` where ``nu_g`` is ``basepoint`` or the torsion section of
    that class.
    """
    a, b = check_admissible(nf, T)
    if not (a and b):
        raise NotAdmissible(f"admissibility conditions failed (growth={a}, defect={b})")
    g = cohomology_class_curve(nf, T)
    if g.is_zero and basepoint is None:
        return ClemensPoint(g.torsion_value, zucker_limit(nf, T, orbit))
    nu_g = basepoint if basepoint is not None else torsion_nf_from_class(T, g)
    if cohomology_class_curve(nu_g, T) != g:
        raise ValueError("basepoint lies in a different component")
    return ClemensPoint(g.torsion_value, zucker_limit(nf - nu_g, T, orbit))


def _coordinates_in(basis: LatticeSubgroup, vectors: np.ndarray) -> np.ndarray:
    B = basis.basis.to_numpy(complex).reshape(basis.ambient_rank, basis.rank)
    coeffs, *_ = np.linalg.lstsq(B, vectors, rcond=None)
    return coeffs


def _sub_jacobian(L: LatticeSubgroup, F0inv: HodgeFiltrationStep) -> SemiTorusFiber:
    """``L \\ (L ⊗ C) / F0inv`` in the coordinates of the basis of ``L``."""
    if L.rank == 0:
        return point_fiber()
    F = _coordinates_in(L, F0inv.F0) if F0inv.dim else np.zeros((L.rank, 0), dtype=complex)
    return jacobian_fiber(LatticeSubgroup.full(L.rank), HodgeFiltrationStep(F, L.rank), L.rank)


def ggk_fiber0(orbit: NilpotentOrbit, T=None) -> SemiTorusFiber:
    """``Ker N_Z \\ Ker N_C / (F^0 ∩ Ker N_C)``."""
    if T is not None and not as_monodromy(T).unipotent:
        raise UnsupportedN("GGK fiber expects unipotent monodromy")
    L, F0inv = ggk_invariant_part(orbit)
    return _sub_jacobian(L, F0inv)


def _invariant_hodge(T, F0, tol: float):
    L = invariant_lattice(as_monodromy(T).T)
    if L.rank == 0:
        return L, None
    F = F0.F0 if isinstance(F0, HodgeFiltrationStep) else np.asarray(F0, dtype=complex)
    inter = intersect_spans(F, L.basis.to_numpy(complex).reshape(L.ambient_rank, L.rank), tol)
    return L, HodgeFiltrationStep(inter, L.ambient_rank)


def bps_fiber_curve(T, F0=None, tol: float = DEFAULT_TOL) -> SemiTorusFiber:
    """Jacobian of the invariant part ``H^inv_Z \\ H^inv_C / (F^0 ∩ H^inv_C)``.

    Any quasi-unipotent ``T`` is accepted; trivial invariants give a point.
    """
    mono = as_monodromy(T)
    L = invariant_lattice(mono.T)
    if L.rank == 0:
        return point_fiber()
    if F0 is None:
        raise ValueError("F0 is needed when the invariant lattice is nonzero")
    _, F0inv = _invariant_hodge(mono.T, F0, tol)
    return _sub_jacobian(L, F0inv)


def blow_down(point, T, orbit: NilpotentOrbit, tol: float = DEFAULT_TOL) -> FiberPoint:
    """Map a Clemens-side value to the BPS fiber over the puncture.

    The identity component ``H^inv_Z \\ C^n / F^0`` is identified with the
    invariant Jacobian through ``C^n = H^inv_C + F^0``; when the invariants
    are trivial every value goes to the point.
    """
    mono = as_monodromy(T)
    L = invariant_lattice(mono.T)
    if L.rank == 0:
        return FiberPoint(np.zeros(0, dtype=complex))
    coord = point.coordinate if isinstance(point, ClemensPoint) else point
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NonUnipotentWarning)
        zf = jacobian_fiber(L, orbit.F0, mono.rank)
    h = zf.lift(coord)
    B = L.basis.to_numpy(complex).reshape(L.ambient_rank, L.rank)
    F = orbit.F0.F0
    stacked = np.hstack([B, F])
    coeffs, *_ = np.linalg.lstsq(stacked, h, rcond=None)
    if np.linalg.norm(stacked @ coeffs - h) > 1e-8 * max(1.0, np.linalg.norm(h)):
        raise ValueError("invariants and F0 do not span C^n; blow-down is not defined here")
    inv_part = coeffs[: L.rank]
    target = bps_fiber_curve(mono.T, orbit.F0, tol)
    return reduce_point(target, target.project(inv_part))
