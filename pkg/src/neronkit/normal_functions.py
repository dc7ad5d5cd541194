"""One-variable normal functions with closed-form liftings.

A :class:`NormalFunctionExpr` encodes the multivalued lifting

    nu(z) = exp(z N) sigma(t) + z * ell,    z = log t / (2 pi i),

with ``sigma`` a Laurent polynomial in ``t`` and ``N ell = 0``.  Going once
around the puncture sends ``z`` to ``z + 1`` and ``nu`` to ``T nu + ell``, so
the monodromy defect is ``ell``.

Values are computed in the untwisted chart ``exp(-z N) nu``, where the Hodge
filtration is the fixed ``F^0`` and the lattice is ``exp(-z N) Z^n``.  The
chart value does not depend on the branch of ``log t``.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    AtOrigin,
    NonIntegralDefect,
    NotAdmissible,
    NotExtendable,
    NotTorsion,
    NotUnipotent,
    UnsupportedN,
)
from .fibers import FiberPoint, SemiTorusFiber, jacobian_fiber, quotient_fiber, reduce_point
from .hodge import NilpotentOrbit
from .linalg import (
    FiniteAbelianGroup,
    IntMatrix,
    as_rat_matrix,
    in_rational_column_span,
    matvec,
    smith_normal_form,
    solve_integral,
)
from .monodromy import MonodromyOperator, as_monodromy, invariant_lattice
from .numeric import exp_nilpotent_numeric

TWO_PI_I = 2j * np.pi


def _as_complex_vec(v, n: int) -> tuple[complex, ...]:
    out = tuple(complex(x) for x in v)
    if len(out) != n:
        raise ValueError(f"coefficient vector has length {len(out)}, expected {n}")
    return out


@dataclass(frozen=True)
class NormalFunctionExpr:
    n: int
    sigma: Mapping[int, tuple[complex, ...]] = field(default_factory=dict)
    ell: tuple[Fraction, ...] = ()

    def __post_init__(self):
        sigma = {int(k): _as_complex_vec(v, self.n) for k, v in dict(self.sigma).items()}
        sigma = {k: v for k, v in sorted(sigma.items()) if any(v)}
        ell = tuple(Fraction(x) for x in self.ell) if self.ell else (Fraction(0),) * self.n
        if len(ell) != self.n:
            raise ValueError(f"ell has length {len(ell)}, expected {self.n}")
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "ell", ell)

    @classmethod
    def constant(cls, c, ell=None) -> "NormalFunctionExpr":
        c = list(c)
        return cls(len(c), {0: c}, tuple(ell) if ell is not None else ())

    @classmethod
    def zero(cls, n: int) -> "NormalFunctionExpr":
        return cls(n)

    def __add__(self, other: "NormalFunctionExpr") -> "NormalFunctionExpr":
        if other.n != self.n:
            raise ValueError("rank mismatch")
        sigma = dict(self.sigma)
        for k, v in other.sigma.items():
            base = sigma.get(k, (0j,) * self.n)
            sigma[k] = tuple(a + b for a, b in zip(base, v))
        return NormalFunctionExpr(self.n, sigma, tuple(a + b for a, b in zip(self.ell, other.ell)))

    def __neg__(self) -> "NormalFunctionExpr":
        return NormalFunctionExpr(
            self.n, {k: tuple(-x for x in v) for k, v in self.sigma.items()}, tuple(-x for x in self.ell)
        )

    def __sub__(self, other: "NormalFunctionExpr") -> "NormalFunctionExpr":
        return self + (-other)

    def sigma_at(self, t: complex) -> np.ndarray:
        out = np.zeros(self.n, dtype=complex)
        for k, v in self.sigma.items():
            out += np.asarray(v) * t ** k
        return out

    def constant_term(self) -> np.ndarray:
        return np.asarray(self.sigma.get(0, (0j,) * self.n), dtype=complex)


@dataclass(frozen=True)
class CurveCohomologyClass:
    """Element of ``Coker(T_Z - id)`` in Smith coordinates.

    ``value`` lists torsion coordinates (mod each divisor of ``group.torsion``)
    followed by free coordinates.  ``torsion`` is true iff all free coordinates
    vanish, i.e. the class dies in ``Coker(T_Q - id)``.
    """

    value: tuple[int, ...]
    group: FiniteAbelianGroup
    torsion: bool

    @property
    def torsion_value(self) -> tuple[int, ...]:
        return self.value[: len(self.group.torsion)]

    @property
    def is_zero(self) -> bool:
        return not any(self.value)

    @property
    def index(self) -> int:
        """Integer label when the torsion part is cyclic (0 when trivial)."""
        t = self.torsion_value
        if len(t) > 1:
            raise ValueError("torsion part is not cyclic")
        return t[0] if t else 0


class CokernelChart:
    """Smith coordinates on ``Coker(T - id)``."""

    def __init__(self, T: IntMatrix):
        n = T.rows
        M = T - IntMatrix.identity(n)
        self.M = M
        self.snf = smith_normal_form(M)
        diag = self.snf.diagonal + [0] * (n - len(self.snf.diagonal))
        self.diag = diag
        self.torsion_idx = tuple(i for i in range(n) if diag[i] > 1)
        self.free_idx = tuple(i for i in range(n) if diag[i] == 0)
        self.group = FiniteAbelianGroup(len(self.free_idx), tuple(diag[i] for i in self.torsion_idx))

    def class_of(self, lam: Sequence[int]) -> CurveCohomologyClass:
        u = matvec(self.snf.U, list(lam))
        tors = tuple(u[i] % self.diag[i] for i in self.torsion_idx)
        free = tuple(u[i] for i in self.free_idx)
        return CurveCohomologyClass(tors + free, self.group, not any(free))

    def lift(self, value: Sequence[int]) -> list[int]:
        """Integral vector whose class has the given coordinates."""
        u = [0] * self.M.rows
        idx = self.torsion_idx + self.free_idx
        if len(value) != len(idx):
            raise ValueError("class coordinates do not match the cokernel")
        for i, x in zip(idx, value):
            u[i] = x
        return matvec(self.snf.U_inv, u)

    def rational_preimage(self, lam: Sequence[int]) -> list[Fraction]:
        """Rational ``mu`` with ``(T - id) mu = lam`` for ``lam`` in ``Im(T_Q - id)``."""
        u = matvec(self.snf.U, list(lam))
        y = []
        for i, x in enumerate(u):
            d = self.diag[i]
            if d == 0:
                if x:
                    raise NotTorsion("vector is not in the rational image of T - id")
                y.append(Fraction(0))
            else:
                y.append(Fraction(x, d))
        return [sum(self.snf.V[i, j] * y[j] for j in range(len(y))) for i in range(len(y))]


def _unipotent(T) -> MonodromyOperator:
    mono = as_monodromy(T)
    if not mono.unipotent:
        raise NotUnipotent("normal functions on a curve need unipotent monodromy; reduce first")
    return mono


def monodromy_defect(nf: NormalFunctionExpr, T) -> list[int]:
    """Integral defect ``nu(z + 1) - T nu(z)``, which equals ``ell``."""
    mono = _unipotent(T)
    if nf.n != mono.rank:
        raise ValueError("rank mismatch between normal function and monodromy")
    N = mono.N
    if any(x != 0 for x in matvec(N, list(nf.ell))):
        raise UnsupportedN("defect must lie in Ker N")
    if any(x.denominator != 1 for x in nf.ell):
        raise NonIntegralDefect(f"defect {[str(x) for x in nf.ell]} is not integral")
    return [int(x) for x in nf.ell]


def check_admissible(nf: NormalFunctionExpr, T) -> tuple[bool, bool]:
    """``(a, b)``: no negative powers of ``t``; defect in ``Im(T_Q - id)``."""
    mono = _unipotent(T)
    if any(x.denominator != 1 for x in nf.ell):
        raise NonIntegralDefect(f"defect {[str(x) for x in nf.ell]} is not integral")
    lam = [int(x) for x in nf.ell]
    a = all(k >= 0 for k in nf.sigma)
    b = in_rational_column_span(mono.T - IntMatrix.identity(mono.rank), lam)
    return a, b


def cohomology_class_curve(nf: NormalFunctionExpr, T) -> CurveCohomologyClass:
    lam = monodromy_defect(nf, T)
    return CokernelChart(as_monodromy(T).T).class_of(lam)


def _z(t: complex, branch: int) -> complex:
    if t == 0:
        raise AtOrigin("normal functions are evaluated on the punctured disk")
    if not abs(t) < 1:
        raise ValueError("t must lie in the unit disk")
    return (cmath.log(t) + TWO_PI_I * branch) / TWO_PI_I


def lifting_value(nf: NormalFunctionExpr, T, t: complex, branch: int = 0) -> np.ndarray:
    """``nu(z)`` in the flat frame on the given branch of ``log t``."""
    N = as_monodromy(T).N.to_numpy(complex)
    z = _z(t, branch)
    return exp_nilpotent_numeric(N, z) @ nf.sigma_at(t) + z * np.asarray([float(x) for x in nf.ell])


def untwisted_value(nf: NormalFunctionExpr, T, t: complex, branch: int = 0) -> np.ndarray:
    N = as_monodromy(T).N.to_numpy(complex)
    z = _z(t, branch)
    return exp_nilpotent_numeric(N, -z) @ lifting_value(nf, T, t, branch)


def fiber_at(T, orbit: NilpotentOrbit, t: complex, branch: int = 0) -> SemiTorusFiber:
    """``exp(-zN) Z^n \\ C^n / F^0``, the fiber over ``t`` in the untwisted chart."""
    N = as_monodromy(T).N.to_numpy(complex)
    z = _z(t, branch)
    return quotient_fiber(exp_nilpotent_numeric(N, -z), orbit.F0)


def evaluate(nf: NormalFunctionExpr, T, orbit: NilpotentOrbit, t: complex, branch: int = 0, reduce: bool = True) -> FiberPoint:
    """Value of the normal function at ``t`` as a point of the fiber over ``t``.

    With ``reduce=False`` the unreduced chart value is returned.
    """
    fib = fiber_at(T, orbit, t, branch)
    p = fib.project(untwisted_value(nf, T, t, branch))
    return reduce_point(fib, p) if reduce else p


def _require_admissible(nf: NormalFunctionExpr, T) -> None:
    a, b = check_admissible(nf, T)
    if not (a and b):
        raise NotAdmissible(f"admissibility conditions failed (growth={a}, defect={b})")


def zucker_fiber(orbit: NilpotentOrbit, T) -> SemiTorusFiber:
    mono = _unipotent(T)
    return jacobian_fiber(invariant_lattice(mono.T), orbit.F0, mono.rank)


def extension_shift(nf: NormalFunctionExpr, T) -> list[int]:
    """Integral ``mu`` with ``(T - id) mu = ell``; raises if the class is nonzero."""
    _require_admissible(nf, T)
    cls = cohomology_class_curve(nf, T)
    if not cls.is_zero:
        raise NotExtendable(f"nonzero class {cls.value} in {cls.group}", cls)
    mono = as_monodromy(T)
    mu = solve_integral(mono.T - IntMatrix.identity(mono.rank), [int(x) for x in nf.ell])
    if mu is None:
        raise AssertionError("zero class but no integral preimage")
    return mu


def extension_path_value(nf: NormalFunctionExpr, T, orbit: NilpotentOrbit, t: complex, mu=None) -> FiberPoint:
    """``exp(-zN)(nu + mu)`` projected to ``V``: single-valued, tends to the limit as ``t -> 0``.

    Differs from ``evaluate(..., reduce=False)`` by the lattice vector ``exp(-zN) mu``.
    """
    if mu is None:
        mu = extension_shift(nf, T)
    N = as_monodromy(T).N.to_numpy(complex)
    z = _z(t, 0)
    v = exp_nilpotent_numeric(N, -z) @ (lifting_value(nf, T, t) + np.asarray(mu, dtype=complex))
    return zucker_fiber(orbit, T).project(v)


def zucker_limit(nf: NormalFunctionExpr, T, orbit: NilpotentOrbit) -> FiberPoint:
    """Value at ``t = 0`` in ``H^inv_Z \\ C^n / F^0`` when the class vanishes."""
    mu = extension_shift(nf, T)
    fib = zucker_fiber(orbit, T)
    return reduce_point(fib, fib.project(nf.constant_term() + np.asarray(mu, dtype=complex)))


def torsion_nf_from_class(T, g: CurveCohomologyClass) -> NormalFunctionExpr:
    """A torsion section realizing the torsion class ``g`` (needs ``N^2 = 0``).

    Picks integral ``lam`` representing ``g`` and rational ``mu`` with
    ``(T - id) mu = lam``; returns ``sigma = -mu``, ``ell = lam``, whose untwisted
    value ``exp(-zN)(nu + mu)`` vanishes identically.
    """
    mono = _unipotent(T)
    if not g.torsion:
        raise NotTorsion("class has a nonzero free part")
    if not (mono.N @ mono.N).is_zero():
        raise UnsupportedN("torsion sections are constructed only when N^2 = 0")
    chart = CokernelChart(mono.T)
    if g.group != chart.group:
        raise ValueError("class belongs to a different cokernel")
    lam = chart.lift(g.value)
    mu = chart.rational_preimage(lam)
    return NormalFunctionExpr(mono.rank, {0: [-complex(x) for x in mu]}, tuple(lam))
