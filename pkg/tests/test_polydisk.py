import cmath
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from neronkit.errors import BadCurve, BadParameters, NonCommuting
from neronkit.linalg import FiniteAbelianGroup, IntMatrix
from neronkit.normal_functions import CokernelChart, check_admissible, cohomology_class_curve, evaluate, zucker_limit
from neronkit.polydisk import (
    NO_ACCUMULATION,
    WITNESS,
    BidiskFamilyConfig,
    DiagonalCurve,
    HorizontalCurve,
    NuPAlpha,
    hausdorff_probe,
    identity_component_chart,
    nu_class,
    restrict_to_curve,
    restriction_map,
)

CFG = BidiskFamilyConfig()
F = Fraction


def test_config_defaults():
    assert CFG.T1 == CFG.T2 == IntMatrix.from_rows([[1, 0], [1, 1]])
    assert CFG.orbit.N.to_rows() == [[0, 0], [1, 0]]
    with pytest.raises(NonCommuting):
        BidiskFamilyConfig(T2=IntMatrix.from_rows([[1, 1], [0, 1]]))


def test_chart_examples():
    ch = identity_component_chart(CFG, F(1, 2), F(1, 2), F(4))
    assert ch.representative == 1 and isinstance(ch.representative, Fraction) and ch.k == 1
    ch = identity_component_chart(CFG, 0.01, 0.02, 1)
    assert ch.representative == 1 and ch.k == 0 and not ch.boundary
    ch = identity_component_chart(CFG, 0, 0.5, 3 + 1j)
    assert ch.boundary and ch.representative == 3 + 1j and ch.k == 0
    with pytest.raises(BadParameters):
        identity_component_chart(CFG, 0.5, 0.5, 0)


def test_chart_ties_go_to_smaller_shift():
    # |x| = |q|^(1/2): both k = 0 and k = -1 land on the annulus boundary
    ch = identity_component_chart(CFG, F(1, 2), F(1, 2), F(1, 2))
    assert ch.k == -1 and ch.representative == 2


@settings(max_examples=200, deadline=None)
@given(
    st.fractions(min_value=F(1, 50), max_value=F(49, 50)).filter(bool),
    st.fractions(min_value=F(1, 50), max_value=F(49, 50)).filter(bool),
    st.fractions(min_value=F(1, 1000), max_value=F(1000)).filter(bool),
    st.booleans(),
)
def test_chart_gauge_invariance(t1, t2, x, negate):
    x = -x if negate else x
    q = t1 * t2
    base = identity_component_chart(CFG, t1, t2, x)
    assert abs(base.representative) ** 2 >= q and abs(base.representative) ** 2 <= 1 / q
    for m in range(-3, 4):
        moved = identity_component_chart(CFG, t1, t2, x * q ** m)
        assert moved.representative == base.representative
        assert moved.k == base.k - m


def test_admissible_classes_form_a_line():
    adm = CFG.admissible_classes()
    assert adm.group == FiniteAbelianGroup(1)


@pytest.mark.parametrize("p", range(-3, 4))
def test_nu_class_is_p(p):
    c = nu_class(CFG, NuPAlpha(p, 1.5 - 0.5j))
    assert c.index == p
    assert (c.index != 0) == (p != 0)


def test_nu_parameters_are_validated():
    with pytest.raises(BadParameters):
        NuPAlpha(2, 0)
    with pytest.raises(BadParameters):
        NuPAlpha(1.5, 1)


def test_probe_witness_examples():
    limits = {}
    for beta in (0.5, 1.0, 2.0):
        rep = hausdorff_probe(CFG, NuPAlpha(2, 1), beta, 16)
        assert rep.verdict == WITNESS
        assert rep.extended_component == 2
        limits[beta] = rep.limit_chart0
        for s in rep.samples:
            assert abs(s.representative - 1 / beta) < 1e-10
            assert s.k == -1
    assert limits == {0.5: 2.0, 1.0: 1.0, 2.0: 0.5}
    # with beta = 1/2 every representative is exactly 2
    rep = hausdorff_probe(CFG, NuPAlpha(2, 1), 0.5, 16)
    assert all(s.representative == 2.0 for s in rep.samples) and len(rep.samples) == 16


def test_probe_without_accumulation():
    rep = hausdorff_probe(CFG, NuPAlpha(1, 1), 1, 16)
    assert rep.verdict == NO_ACCUMULATION
    reps = [abs(s.representative) for s in rep.samples]
    assert max(reps[-3:]) - min(reps[-3:]) > 1e-3
    assert hausdorff_probe(CFG, NuPAlpha(0, 2), 1, 8).verdict == NO_ACCUMULATION
    assert hausdorff_probe(CFG, NuPAlpha(-1, 1), 1, 12).verdict == NO_ACCUMULATION


def test_probe_parameter_errors():
    with pytest.raises(BadParameters):
        hausdorff_probe(CFG, NuPAlpha(2, 1), 1, 7)
    with pytest.raises(BadParameters):
        hausdorff_probe(CFG, NuPAlpha(2, 1), 0, 16)


@settings(max_examples=100, deadline=None)
@given(
    st.sampled_from([-4, -3, -2, 2, 3, 4]),
    st.complex_numbers(min_magnitude=0.25, max_magnitude=4, allow_nan=False, allow_infinity=False),
    st.complex_numbers(min_magnitude=0.25, max_magnitude=4, allow_nan=False, allow_infinity=False),
)
def test_probe_matches_closed_form(p, alpha, beta):
    rep = hausdorff_probe(CFG, NuPAlpha(p, alpha), beta, 24)
    sign = 1 if p > 0 else -1
    exact = alpha * beta ** (-sign)
    for s in rep.samples:
        if s.j >= 8:
            assert s.k == -sign
            assert abs(s.representative - exact) <= 1e-12 * abs(exact)
    assert rep.verdict == WITNESS
    assert rep.extended_component == p
    assert abs(rep.limit_chart0 - exact) <= 1e-12 * abs(exact)


def test_restriction_examples():
    r = restrict_to_curve(CFG, NuPAlpha(2, 1), HorizontalCurve(0.5))
    assert r.T == CFG.T1
    assert list(r.nf.ell) == [0, 2]
    assert r.cohomology_class.is_zero and r.cohomology_class == r.pulled_back_class
    zucker_limit(r.nf, r.T, CFG.orbit)

    r = restrict_to_curve(CFG, NuPAlpha(0, 3j), HorizontalCurve(-0.25j))
    assert not any(r.nf.ell) and r.cohomology_class.is_zero

    r = restrict_to_curve(CFG, NuPAlpha(1, 1), DiagonalCurve())
    assert r.T == CFG.T1 @ CFG.T2
    assert list(r.nf.ell) == [0, 1]
    assert r.cohomology_class.group == FiniteAbelianGroup(1, (2,))
    assert r.cohomology_class.torsion_value == (1,)
    assert r.cohomology_class == r.pulled_back_class


def test_restricted_value_matches_section():
    # the one-variable lifting reproduces x = alpha s^p in the exponential coordinate
    alpha = 0.8 - 0.3j
    r = restrict_to_curve(CFG, NuPAlpha(3, alpha), HorizontalCurve(0.5))
    s = 0.3 * cmath.exp(1j)
    raw = evaluate(r.nf, r.T, CFG.orbit, s, reduce=False)
    assert cmath.isclose(cmath.exp(2j * cmath.pi * raw.coords[0]), alpha * s ** 3, rel_tol=1e-12)


@pytest.mark.parametrize("p", range(-3, 4))
@pytest.mark.parametrize("curve", [HorizontalCurve(0.5), HorizontalCurve(-0.3j), DiagonalCurve()], ids=str)
def test_restriction_commutes_with_pullback(p, curve):
    r = restrict_to_curve(CFG, NuPAlpha(p, 2 + 1j), curve)
    assert r.cohomology_class == r.pulled_back_class
    assert check_admissible(r.nf, r.T) == (True, True)
    assert cohomology_class_curve(r.nf, r.T) == r.cohomology_class


def test_restriction_map_on_coboundaries_gives_coboundaries():
    lc = CFG.link_cohomology()
    for mu in ([1, 0], [0, 1], [2, -3]):
        cob = lc.coboundary(mu)
        for curve in (HorizontalCurve(0.5), DiagonalCurve()):
            r = restrict_to_curve(CFG, NuPAlpha(0, 1), curve)
            assert CokernelChart(r.T).class_of(restriction_map(CFG, curve, cob)).is_zero


def test_bad_curves():
    with pytest.raises(BadCurve):
        restrict_to_curve(CFG, NuPAlpha(1, 1), HorizontalCurve(0))
    with pytest.raises(BadCurve):
        restrict_to_curve(CFG, NuPAlpha(1, 1), HorizontalCurve(1.5))
    with pytest.raises(BadCurve):
        restrict_to_curve(CFG, NuPAlpha(1, 1), "t1 = 0")
