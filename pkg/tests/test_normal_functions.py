import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from neronkit.errors import (
    AtOrigin,
    NonIntegralDefect,
    NotAdmissible,
    NotExtendable,
    NotTorsion,
    UnsupportedN,
)
from neronkit.fibers import fiber_distance, reduce_point
from neronkit.hodge import NilpotentOrbit, orbit_from_data
from neronkit.linalg import FiniteAbelianGroup, IntMatrix, kernel_lattice, matvec
from neronkit.monodromy import MonodromyOperator, component_group
from neronkit.normal_functions import (
    CokernelChart,
    NormalFunctionExpr,
    check_admissible,
    cohomology_class_curve,
    evaluate,
    extension_path_value,
    extension_shift,
    fiber_at,
    lifting_value,
    monodromy_defect,
    torsion_nf_from_class,
    zucker_fiber,
    zucker_limit,
)

from strategies import square_zero_orbits, square_zero_unipotents

M = IntMatrix.from_rows
T5 = M([[1, 5], [0, 1]])
SHIFT = M([[1, 0], [1, 1]])  # T e0 = e0 + e1
ORBIT5 = NilpotentOrbit.from_monodromy(T5, np.array([1j, 1]))
SHIFT_ORBIT = orbit_from_data([[0, 0], [1, 0]], [[1, 0]])


def nf(sigma=None, ell=(0, 0)):
    return NormalFunctionExpr(len(ell), sigma or {}, tuple(Fraction(x) for x in ell))


def test_expression_arithmetic():
    a = nf({0: [1, 2], 1: [0, 1j]}, (1, 0))
    b = nf({0: [-1, -2], 2: [3, 0]}, (4, 0))
    s = a + b
    assert set(s.sigma) == {1, 2}
    assert s.ell == (5, 0)
    assert (s - b).sigma == a.sigma and (s - b).ell == a.ell
    assert np.allclose(a.sigma_at(0.5), [1, 2 + 0.5j])
    assert NormalFunctionExpr.zero(3).sigma == {}


def test_defect_examples():
    for p in (-2, 0, 3):
        assert monodromy_defect(nf(ell=(0, p)), SHIFT) == [0, p]
    with pytest.raises(NonIntegralDefect):
        monodromy_defect(nf(ell=(0, "1/2")), SHIFT)
    with pytest.raises(UnsupportedN):
        monodromy_defect(nf(ell=(1, 0)), SHIFT)


def test_defect_is_continuation_difference():
    # going around t = 0 once changes the lifting by T nu - nu + ell
    f = nf({0: [0.3, 1j], 1: [1, 2]}, (0, 3))
    t = 0.3 * cmath.exp(0.4j)
    before = lifting_value(f, SHIFT, t, 0)
    after = lifting_value(f, SHIFT, t, 1)
    assert np.allclose(after, SHIFT.to_numpy(complex) @ before + np.array([0, 3]), atol=1e-12)


def test_admissibility_examples():
    c = {0: [1, 0.5j], 1: [2, 1]}
    assert check_admissible(nf(c, (0, 2)), SHIFT) == (True, True)
    assert check_admissible(nf({-1: [1, 0], 0: [0, 1]}, (0, 2)), SHIFT) == (False, True)
    assert check_admissible(nf(c, (1, 0)), SHIFT) == (True, False)


def test_class_examples():
    g = cohomology_class_curve(nf(ell=(1, 0)), T5)
    assert g.torsion_value == (1,) and g.torsion and not g.is_zero
    assert g.group == FiniteAbelianGroup(1, (5,))
    assert cohomology_class_curve(nf(ell=(5, 0)), T5).is_zero
    assert cohomology_class_curve(nf(ell=(0, 0)), T5).is_zero
    # a free class for the trivial monodromy
    free = cohomology_class_curve(nf(ell=(1, 0)), IntMatrix.identity(2))
    assert not free.torsion


def test_evaluation_in_exponential_coordinate():
    # x = alpha t^p with alpha = 1, p = 1: the e1 coordinate of the untwisted value is log t / 2 pi i
    f = nf(ell=(0, 1))
    raw = evaluate(f, SHIFT, SHIFT_ORBIT, 0.5, reduce=False)
    assert cmath.isclose(cmath.exp(2j * math.pi * raw.coords[0]), 0.5, abs_tol=1e-14)
    # over t the fiber is C^*/t^Z, so x = t is the identity
    fib = fiber_at(SHIFT, SHIFT_ORBIT, 0.5)
    assert fib.real_type == (2, 0)
    assert fiber_distance(fib, evaluate(f, SHIFT, SHIFT_ORBIT, 0.5), fib.origin()) < 1e-12
    alpha = 0.7 + 0.2j
    g = nf({0: [0, cmath.log(alpha) / (2j * math.pi)]}, (0, 2))
    raw = evaluate(g, SHIFT, SHIFT_ORBIT, 0.4, reduce=False)
    assert cmath.isclose(cmath.exp(2j * math.pi * raw.coords[0]), alpha * 0.4 ** 2, rel_tol=1e-12)


def test_evaluate_rejects_origin():
    with pytest.raises(AtOrigin):
        evaluate(nf(ell=(0, 1)), SHIFT, SHIFT_ORBIT, 0)


def _admissible_nf(T, data):
    n = T.rows
    chart = CokernelChart(T)
    tors = tuple(data.draw(st.integers(0, d - 1)) for d in chart.group.torsion)
    lam = chart.lift(tors + (0,) * chart.group.free_rank)
    v = data.draw(st.lists(st.integers(-3, 3), min_size=n, max_size=n))
    lam = [a + b for a, b in zip(lam, matvec(T - IntMatrix.identity(n), v))]
    coeff = st.floats(-1, 1, allow_nan=False)
    sigma = {}
    for k in range(data.draw(st.integers(0, 3))):
        sigma[k] = [complex(data.draw(coeff), data.draw(coeff)) for _ in range(n)]
    return NormalFunctionExpr(n, sigma, tuple(lam))


def _random_t(data):
    r = data.draw(st.floats(0.05, 0.9))
    theta = data.draw(st.floats(-math.pi, math.pi))
    return cmath.rect(r, theta)


@settings(max_examples=100, deadline=None)
@given(square_zero_orbits(), st.data())
def test_evaluation_is_branch_invariant(orbit_data, data):
    T, F = orbit_data
    orbit = NilpotentOrbit.from_monodromy(T, F)
    f = _admissible_nf(T, data)
    assert check_admissible(f, T) == (True, True)
    t = _random_t(data)
    branch = data.draw(st.sampled_from([-2, -1, 1, 2]))
    fib = fiber_at(T, orbit, t)
    a = evaluate(f, T, orbit, t, 0, reduce=False)
    b = evaluate(f, T, orbit, t, branch, reduce=False)
    assert fiber_distance(fib, a, b) < 1e-10
    # the reduced values agree as points too
    assert fiber_distance(fib, evaluate(f, T, orbit, t), evaluate(f, T, orbit, t, branch)) < 1e-10


@settings(max_examples=50, deadline=None)
@given(square_zero_unipotents())
def test_torsion_section_round_trip(T):
    chart = CokernelChart(T)
    G = component_group(T)
    assert G == chart.group.torsion_subgroup()
    for elem in G.elements()[:200]:
        g = chart.class_of(chart.lift(elem + (0,) * chart.group.free_rank))
        assert g.torsion_value == elem
        section = torsion_nf_from_class(T, g)
        assert cohomology_class_curve(section, T) == g
        assert check_admissible(section, T) == (True, True)


def test_torsion_section_examples():
    chart = CokernelChart(T5)
    g = chart.class_of([1, 0])
    s = torsion_nf_from_class(T5, g)
    assert s.ell == (1, 0)
    assert np.allclose(s.constant_term(), [0, -0.2])
    # (T - id) applied to the constant -sigma gives back the defect
    assert matvec(T5 - IntMatrix.identity(2), [0, Fraction(1, 5)]) == [1, 0]
    zero = torsion_nf_from_class(T5, chart.class_of([0, 0]))
    assert zero.sigma == {} and not any(zero.ell)
    with pytest.raises(NotTorsion):
        torsion_nf_from_class(T5, chart.class_of([0, 1]))
    J3 = M([[1, 1, 0], [0, 1, 1], [0, 0, 1]])
    with pytest.raises(UnsupportedN):
        torsion_nf_from_class(J3, CokernelChart(J3).class_of([0, 0, 0]))


def test_torsion_section_is_zero_in_untwisted_chart():
    s = torsion_nf_from_class(T5, CokernelChart(T5).class_of([3, 0]))
    mu = -s.constant_term()
    for t in (0.5, 0.1j, -0.01):
        v = extension_path_value(s, T5, ORBIT5, t, mu=mu)
        assert np.allclose(v.coords, 0, atol=1e-12)


def test_zucker_limit_examples():
    c0, c1 = [0.2 + 0.1j, 0.4], [1.0, -0.5j]
    plain = nf({0: c0, 1: c1})
    fib = zucker_fiber(ORBIT5, T5)
    expected = reduce_point(fib, fib.project(c0))
    assert fiber_distance(fib, zucker_limit(plain, T5, ORBIT5), expected) < 1e-12

    with pytest.raises(NotExtendable) as info:
        zucker_limit(nf({0: c0}, (1, 0)), T5, ORBIT5)
    assert info.value.cohomology_class.torsion_value == (1,)

    five = nf({0: c0, 1: c1}, (5, 0))
    assert extension_shift(five, T5) == [0, 1]
    target = reduce_point(fib, fib.project(np.array(c0) + np.array([0, 1])))
    assert fiber_distance(fib, zucker_limit(five, T5, ORBIT5), target) < 1e-12


def test_zucker_limit_independent_of_preimage():
    five = nf({0: [0.3j, 0.1]}, (5, 0))
    fib = zucker_fiber(ORBIT5, T5)
    limit = zucker_limit(five, T5, ORBIT5)
    for extra in ([1, 0], [-3, 0]):
        mu = np.array([0, 1]) + np.array(extra)
        other = reduce_point(fib, fib.project(five.constant_term() + mu))
        assert fiber_distance(fib, limit, other) < 1e-12


def test_zucker_limit_needs_admissible_input():
    with pytest.raises(NotAdmissible):
        zucker_limit(nf({-1: [1, 0]}, (5, 0)), T5, ORBIT5)


def test_path_values_approach_the_limit():
    f = nf({0: [0.2 + 0.1j, 0.4], 1: [1.0, -0.5j], 2: [0.3, 0.3]}, (5, 0))
    fib = zucker_fiber(ORBIT5, T5)
    limit = zucker_limit(f, T5, ORBIT5)
    dists = [fiber_distance(fib, extension_path_value(f, T5, ORBIT5, 10.0 ** -j), limit) for j in range(1, 9)]
    assert all(b <= a + 1e-15 for a, b in zip(dists, dists[1:]))
    assert dists[-1] < 1e-7


@settings(max_examples=80, deadline=None)
@given(square_zero_unipotents(), st.data())
def test_defect_condition_means_torsion_class(T, data):
    n = T.rows
    N = MonodromyOperator.from_matrix(T).N
    # random integral defects inside Ker N, in or out of the rational image
    K = kernel_lattice(N.clear_denominators()[0])
    coeffs = data.draw(st.lists(st.integers(-4, 4), min_size=K.rank, max_size=K.rank))
    lam = matvec(K.basis, coeffs) if K.rank else [0] * n
    f = NormalFunctionExpr(n, {0: [1] * n}, tuple(lam))
    a, b = check_admissible(f, T)
    g = cohomology_class_curve(f, T)
    assert b == g.torsion
    if b:
        assert g.torsion_value == CokernelChart(T).class_of(lam).torsion_value
