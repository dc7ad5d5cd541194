import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from neronkit.errors import NonDiscreteFiber, ProjectionDegenerate
from neronkit.fibers import (
    FiberPoint,
    classify_generators,
    fiber_distance,
    jacobian_fiber,
    point_fiber,
    quotient_fiber,
    reduce_point,
)
from neronkit.hodge import HodgeFiltrationStep
from neronkit.linalg import IntMatrix, LatticeSubgroup, lattice_from_vectors, rank_q

SQRT2 = math.sqrt(2)


def P(*z):
    return FiberPoint(np.array(z, dtype=complex))


def test_exponential_quotient_is_circle_times_line():
    f = jacobian_fiber(lattice_from_vectors([[0, 1]], 2), HodgeFiltrationStep([1, 0], 2), 2)
    assert f.dim == 1 and f.discrete
    assert f.real_type == (1, 1)
    assert f.describe() == "T^1 x R^1"
    assert not f.is_compact


def test_full_lattice_gives_compact_torus():
    f = jacobian_fiber(LatticeSubgroup.full(2), HodgeFiltrationStep([1j, 1], 2), 2)
    assert f.real_type == (2, 0) and f.is_compact
    assert f.describe() == "T^2"


def test_irrational_generators_are_not_discrete():
    f = quotient_fiber(np.array([[1, SQRT2]]))
    assert not f.discrete and f.real_type is None
    assert f.describe() == "non-discrete quotient"
    with pytest.raises(NonDiscreteFiber):
        reduce_point(f, P(0.3))
    with pytest.raises(NonDiscreteFiber):
        fiber_distance(f, P(0.3), P(0.1))


def test_independent_irrational_directions_are_discrete():
    f = quotient_fiber(np.array([[1, 1j * SQRT2]]))
    assert f.discrete and f.real_type == (2, 0)


def test_rational_dependence_is_resolved():
    f = quotient_fiber(np.array([[1, 2, 0.5]]))
    assert f.discrete and f.real_type == (1, 1)
    assert np.isclose(abs(f.gamma[0, 0]), 0.5)
    assert np.isclose(reduce_point(f, P(0.75)).coords[0], 0.25)


def test_no_generators_and_point_fiber():
    f = quotient_fiber(np.zeros((2, 0)))
    assert f.discrete and f.real_type == (0, 4)
    pt = point_fiber()
    assert pt.is_point and pt.describe() == "pt"
    assert fiber_distance(pt, FiberPoint(np.zeros(0)), FiberPoint(np.zeros(0))) == 0.0


def test_projection_needs_independent_F0():
    with pytest.raises(ProjectionDegenerate):
        quotient_fiber(np.eye(2), np.array([[1, 2], [2, 4]], dtype=complex))


def test_projection_is_along_F0():
    F0 = HodgeFiltrationStep([1j, 1], 2)
    f = jacobian_fiber(LatticeSubgroup.full(2), F0, 2)
    assert np.allclose(f.project([1j, 1]).coords, 0)
    v = np.array([0.3 + 2j, -1.5])
    assert np.allclose(f.project(f.lift(f.project(v))).coords, f.project(v).coords)


def test_reduce_examples():
    circle = quotient_fiber(np.array([[1]]))
    assert np.isclose(reduce_point(circle, P(2.7)).coords[0], 0.7)
    torus = quotient_fiber(np.array([[1, 1j]]))
    assert np.allclose(reduce_point(torus, P(1.25 + 3.5j)).coords, [0.25 + 0.5j])
    already = P(0.25 + 0.5j)
    assert np.allclose(reduce_point(torus, already).coords, already.coords)


def test_distance_examples():
    circle = quotient_fiber(np.array([[1]]))
    assert math.isclose(fiber_distance(circle, P(0.1), P(0.9)), 0.2, abs_tol=1e-12)
    assert fiber_distance(circle, P(0.4 + 2j), P(0.4 + 2j)) == 0.0
    torus = quotient_fiber(np.array([[1, 1j]]))
    assert math.isclose(fiber_distance(torus, P(0), P(0.5 + 0.5j)), math.sqrt(2) / 2, abs_tol=1e-12)
    # wraparound in the compact direction only
    assert math.isclose(fiber_distance(circle, P(0.1j), P(0.9 + 0.1j)), 0.1, abs_tol=1e-12)


def _random_fiber(rng, d=None, r=None):
    d = d or int(rng.integers(1, 4))
    r = int(rng.integers(0, 2 * d + 1)) if r is None else r
    B = np.eye(2 * d) + 0.2 * rng.standard_normal((2 * d, 2 * d))
    B = B[:, :r]
    return quotient_fiber(B[:d] + 1j * B[d:])


def _random_point(rng, d):
    return FiberPoint(rng.uniform(-3, 3, d) + 1j * rng.uniform(-3, 3, d))


def test_distance_symmetry_and_triangle_inequality():
    rng = np.random.default_rng(20240611)
    checked = 0
    while checked < 1000:
        f = _random_fiber(rng)
        for _ in range(20):
            a, b, c = (_random_point(rng, f.dim) for _ in range(3))
            ab, ba = fiber_distance(f, a, b), fiber_distance(f, b, a)
            assert abs(ab - ba) < 1e-12
            assert fiber_distance(f, a, c) <= ab + fiber_distance(f, b, c) + 1e-9
            checked += 1


def test_reduce_idempotent_and_zero_distance():
    rng = np.random.default_rng(7)
    for _ in range(200):
        f = _random_fiber(rng)
        v = _random_point(rng, f.dim)
        red = reduce_point(f, v)
        assert np.allclose(reduce_point(f, red).coords, red.coords, atol=1e-12)
        assert fiber_distance(f, v, red) < 1e-12


def test_distance_invariant_under_lattice_shifts():
    rng = np.random.default_rng(11)
    for _ in range(100):
        f = _random_fiber(rng)
        a, b = _random_point(rng, f.dim), _random_point(rng, f.dim)
        if f.real_type[0]:
            shift = f.gamma @ rng.integers(-4, 5, f.real_type[0])
            a2 = FiberPoint(a.coords + shift)
        else:
            a2 = a
        assert abs(fiber_distance(f, a, b) - fiber_distance(f, a2, b)) < 1e-9


@st.composite
def rational_generators(draw):
    d = draw(st.integers(1, 3))
    rho = draw(st.integers(0, 5))
    den = draw(st.integers(1, 6))
    vals = [[Fraction(draw(st.integers(-6, 6)), den) for _ in range(rho)] for _ in range(2 * d)]
    return d, rho, vals


@settings(max_examples=200, deadline=None)
@given(rational_generators())
def test_rational_generators_match_exact_rank(data):
    d, rho, vals = data
    real = np.array([[float(x) for x in row] for row in vals]).reshape(2 * d, rho)
    G = real[:d] + 1j * real[d:]
    discrete, real_type, gamma = classify_generators(G)
    # finitely generated subgroups of Q^(2d) are discrete, with torus rank = rank over Q
    den = math.lcm(*(x.denominator for row in vals for x in row)) if rho else 1
    exact = rank_q(IntMatrix.from_rows([[int(x * den) for x in row] for row in vals], cols=rho))
    assert discrete
    assert real_type == (exact, 2 * d - exact)
    assert sum(real_type) == 2 * d


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.data())
def test_irrational_relation_is_flagged(d, r, data):
    r = min(r, 2 * d)
    ints = [[data.draw(st.integers(-4, 4)) for _ in range(r)] for _ in range(2 * d)]
    real = np.array(ints, dtype=float).reshape(2 * d, r)
    if np.linalg.matrix_rank(real) < r:
        return
    c = np.zeros(r)
    c[data.draw(st.integers(0, r - 1))] = SQRT2
    extra = real @ c
    G = np.hstack([real, extra[:, None]])
    discrete, _, _ = classify_generators(G[:d] + 1j * G[d:])
    assert not discrete
