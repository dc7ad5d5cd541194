"""The bidisk family pulled back from a one-variable orbit by ``(t1, t2) -> t1 t2``.

Basis ``e0, e1`` with ``N e0 = e1`` and ``F^0 = C e0``.  Over ``(t1, t2)`` the
identity component of the fiber is ``C^* / (t1 t2)^Z`` in the exponential
coordinate ``x``.  The section ``nu_{p, alpha}`` is ``x = alpha * t1^p``; its
defect cocycle is ``(p e1, 0)`` because it only winds in ``t1``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

from .errors import BadCurve, BadParameters, NonCommuting
from .hodge import NilpotentOrbit, orbit_from_data
from .linalg import IntMatrix, matvec
from .monodromy import (
    AdmissibleClasses,
    LinkCohomology,
    admissible_class_subgroup,
    link_cohomology_bidisk,
)
from .normal_functions import CokernelChart, CurveCohomologyClass, NormalFunctionExpr

E1 = (0, 1)
CONVERGENCE_TOL = 1e-10
WITNESS = "TwoLimitWitness"
NO_ACCUMULATION = "NoChart0Accumulation"


@dataclass(frozen=True, eq=False)
class BidiskFamilyConfig:
    orbit: NilpotentOrbit = field(default_factory=lambda: orbit_from_data([[0, 0], [1, 0]], [[1, 0]]))
    T1: IntMatrix = IntMatrix.from_rows([[1, 0], [1, 1]])
    T2: IntMatrix = IntMatrix.from_rows([[1, 0], [1, 1]])

    def __post_init__(self):
        if self.T1 @ self.T2 != self.T2 @ self.T1:
            raise NonCommuting("bidisk monodromies must commute")

    def link_cohomology(self) -> LinkCohomology:
        return link_cohomology_bidisk(self.T1, self.T2)

    def admissible_classes(self) -> AdmissibleClasses:
        return admissible_class_subgroup(self.link_cohomology(), self.T1, self.T2)


@dataclass(frozen=True)
class NuPAlpha:
    p: int
    alpha: complex = 1

    def __post_init__(self):
        if self.alpha == 0:
            raise BadParameters("alpha must be nonzero")
        if int(self.p) != self.p:
            raise BadParameters("p must be an integer")

    def value(self, t1, t2=None):
        """Exponential coordinate ``x = alpha * t1^p``."""
        return self.alpha * t1 ** self.p

    @property
    def cocycle(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return (tuple(self.p * e for e in E1), (0, 0))


@dataclass(frozen=True)
class ChartValue:
    representative: object
    k: int
    boundary: bool = False


def _abs(x):
    if isinstance(x, Rational):
        return abs(Fraction(x))
    return abs(complex(x))


def identity_component_chart(cfg: BidiskFamilyConfig | None, t1, t2, x) -> ChartValue:
    """Representative ``x (t1 t2)^k`` of ``x`` in ``C^* / (t1 t2)^Z``.

    ``k`` minimizes ``|log|x| + k log|t1 t2||`` (ties go to the smaller ``k``),
    so the representative lies in the annulus ``|q|^{1/2} <= |.| <= |q|^{-1/2}``.
    Exact rational inputs give exact outputs.  Over ``t1 t2 = 0`` there is no
    identification and ``x`` comes back with ``boundary=True``.
    """
    if x == 0:
        raise BadParameters("x must be nonzero")
    q = t1 * t2
    if q == 0:
        return ChartValue(x, 0, True)
    aq, ax = _abs(q), _abs(x)
    if not aq < 1:
        raise BadParameters("t1 t2 must lie in the punctured unit disk")
    guess = -math.log(ax) / math.log(aq)
    candidates = range(math.floor(guess) - 1, math.floor(guess) + 3)

    def badness(k):
        a = ax * aq ** k
        return max(a, 1 / a)

    k = min(candidates, key=lambda k: (badness(k), k))
    return ChartValue(x * q ** k, k)


@dataclass(frozen=True)
class NuClass:
    index: int
    cocycle: tuple
    h1_coordinates: tuple[int, ...]


def nu_class(cfg: BidiskFamilyConfig, nf: NuPAlpha) -> NuClass:
    """Class of ``nu_{p, alpha}`` as a multiple of the generator ``(e1, 0)``.

    With this generator the index is ``+p``.
    """
    lc = cfg.link_cohomology()
    gen = lc.class_of(((0, 1), (0, 0)))
    c = lc.class_of(nf.cocycle)
    # solve c = index * gen in the free coordinates (the group is free here)
    pivot = next(i for i, g in enumerate(gen) if g)
    if c[pivot] % gen[pivot]:
        raise AssertionError("class is not a multiple of the generator")
    index = c[pivot] // gen[pivot]
    if tuple(index * g for g in gen) != c:
        raise AssertionError("class is not a multiple of the generator")
    return NuClass(index, nf.cocycle, c)


@dataclass(frozen=True)
class ProbeSample:
    j: int
    t1: complex
    t2: complex
    representative: complex
    k: int


@dataclass(frozen=True)
class ProbeReport:
    p: int
    alpha: complex
    beta: complex
    samples: tuple[ProbeSample, ...]
    limit_chart0: complex | None
    extended_component: int
    verdict: str


def _converged(values: list[complex]) -> complex | None:
    if len(values) < 3:
        return None
    tail = values[-3:]
    scale = max(1.0, abs(tail[-1]))
    if all(abs(v - tail[-1]) <= CONVERGENCE_TOL * scale for v in tail):
        return tail[-1]
    return None


def hausdorff_probe(cfg: BidiskFamilyConfig, nf: NuPAlpha, beta: complex = 1, samples: int = 16) -> ProbeReport:
    """Follow ``nu_{p, alpha}`` to the origin along a curve and watch its chart-0 value.

    For ``|p| >= 2`` the curve is ``t2 = beta t1^{|p|-1}`` with ``t1 = 2^{-j}``;
    there ``x (t1 t2)^{-sign p} = alpha beta^{-sign p}`` identically, so the section
    approaches the identity component while its extension sits in component
    ``p``.  For ``|p| <= 1`` the diagonal ``t1 = t2 = 2^{-j}`` is used.
    Samples with ``|t2| >= 1`` are skipped.
    """
    if samples < 8:
        raise BadParameters("at least 8 samples are needed")
    if beta == 0:
        raise BadParameters("beta must be nonzero")
    p = nf.p
    rows = []
    for j in range(1, samples + 1):
        t1 = 2.0 ** -j
        t2 = beta * t1 ** (abs(p) - 1) if abs(p) >= 2 else t1
        if not abs(t2) < 1:
            continue
        ch = identity_component_chart(cfg, t1, t2, nf.value(t1))
        rows.append(ProbeSample(j, complex(t1), complex(t2), complex(ch.representative), ch.k))
    limit = _converged([s.representative for s in rows])
    component = nu_class(cfg, nf).index
    verdict = WITNESS if (limit is not None and component != 0 and abs(p) >= 2) else NO_ACCUMULATION
    return ProbeReport(p, complex(nf.alpha), complex(beta), tuple(rows), limit, component, verdict)


@dataclass(frozen=True)
class HorizontalCurve:
    """``{t2 = c}`` parametrized by ``t1``."""

    c: complex


@dataclass(frozen=True)
class DiagonalCurve:
    """``{t1 = t2 = s}``."""


@dataclass(frozen=True, eq=False)
class Restriction:
    nf: NormalFunctionExpr
    T: IntMatrix
    cohomology_class: CurveCohomologyClass
    pulled_back_class: CurveCohomologyClass


def _check_curve(curve):
    if isinstance(curve, HorizontalCurve):
        if curve.c == 0 or not abs(curve.c) < 1:
            raise BadCurve("t2 = c needs 0 < |c| < 1")
    elif not isinstance(curve, DiagonalCurve):
        raise BadCurve(f"unsupported curve {curve!r}")


def restriction_monodromy(cfg: BidiskFamilyConfig, curve) -> IntMatrix:
    _check_curve(curve)
    if isinstance(curve, HorizontalCurve):
        return cfg.T1
    return cfg.T1 @ cfg.T2


def restriction_map(cfg: BidiskFamilyConfig, curve, cocycle) -> list[int]:
    """Pull a bidisk cocycle back to the curve: ``l1`` for ``t2 = c``, ``l1 + T1 l2`` on the diagonal."""
    _check_curve(curve)
    l1, l2 = (list(v) for v in cocycle)
    if isinstance(curve, HorizontalCurve):
        return l1
    return [a + b for a, b in zip(l1, matvec(cfg.T1, l2))]


def _winding_number(f, radius: float = 0.5, steps: int = 720) -> int:
    """Winding number of ``s -> f(s)`` around 0 on the circle ``|s| = radius``."""
    total = 0.0
    prev = complex(f(radius))
    for i in range(1, steps + 1):
        cur = complex(f(radius * cmath.exp(2j * math.pi * i / steps)))
        total += cmath.phase(cur / prev)
        prev = cur
    return round(total / (2 * math.pi))


def restrict_to_curve(cfg: BidiskFamilyConfig, nf: NuPAlpha, curve) -> Restriction:
    """Restrict ``nu_{p, alpha}`` to a curve through the origin.

    On either curve ``x = alpha s^p`` in the curve parameter ``s``, i.e. the
    one-variable lifting ``(log alpha / 2 pi i) e1 + z p e1``.
    """
    T = restriction_monodromy(cfg, curve)
    if isinstance(curve, HorizontalCurve):
        along = lambda s: nf.value(s, curve.c)
    else:
        along = lambda s: nf.value(s, s)
    winding = _winding_number(along)
    log_alpha = cmath.log(complex(nf.alpha)) / (2j * math.pi)
    one_var = NormalFunctionExpr(2, {0: [0, log_alpha]}, tuple(winding * e for e in E1))
    chart = CokernelChart(T)
    own = chart.class_of([int(x) for x in one_var.ell])
    pulled = chart.class_of(restriction_map(cfg, curve, nf.cocycle))
    return Restriction(one_var, T, own, pulled)
