import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nbdirichlet.errors import BadWeight, EmptySpace, SpaceMismatch
from nbdirichlet.measure import (
    Field,
    l2_norm,
    leq,
    linf_norm,
    make_field,
    make_space,
)

finite = st.floats(min_value=-50, max_value=50, allow_nan=False)
small_n = st.integers(min_value=1, max_value=12)


@st.composite
def space_and_fields(draw, n_fields=1):
    n = draw(small_n)
    weights = draw(
        st.lists(
            st.floats(min_value=0.01, max_value=10), min_size=n, max_size=n
        )
    )
    space = make_space(weights)
    fields = [
        make_field(space, draw(st.lists(finite, min_size=n, max_size=n)))
        for _ in range(n_fields)
    ]
    return (space, *fields)


def test_make_space_examples():
    s = make_space([1.0])
    assert s.n == 1 and s.weights[0] == 1.0
    s = make_space([1, 1, 1])
    assert s.n == 3 and np.array_equal(s.weights, [1, 1, 1])
    s = make_space([0.5, 2.0])
    assert np.array_equal(s.weights, [0.5, 2.0])


def test_make_space_errors():
    with pytest.raises(EmptySpace):
        make_space([])
    with pytest.raises(BadWeight):
        make_space([1.0, 0.0])
    with pytest.raises(BadWeight):
        make_space([1.0, -2.0])
    with pytest.raises(BadWeight):
        make_space([1.0, np.inf])


def test_l2_norm_examples():
    s = make_space([1.0, 1.0])
    assert l2_norm(make_field(s, [0.0, 0.0])) == 0.0
    assert l2_norm(make_field(s, [3.0, 4.0])) == 5.0
    assert l2_norm(make_field(make_space([4.0]), [1.0])) == 2.0


def test_linf_norm_examples():
    s = make_space([1.0, 1.0])
    assert linf_norm(make_field(s, [0.0, 0.0])) == 0.0
    assert linf_norm(make_field(s, [-3.0, 2.0])) == 3.0
    assert linf_norm(make_field(make_space([1, 1, 1]), [1, 1, 1])) == 1.0


def test_leq_examples():
    s = make_space([1.0, 1.0])
    f = make_field(s, [0.0, 0.0])
    assert leq(f, f)
    assert not leq(f, make_field(s, [1.0, -1.0]))
    assert leq(make_field(s, [-1.0, 0.0]), f)


def test_space_mismatch():
    f = make_field(make_space([1.0, 1.0]), [0.0, 0.0])
    g = make_field(make_space([1.0, 2.0]), [0.0, 0.0])
    with pytest.raises(SpaceMismatch):
        leq(f, g)
    with pytest.raises(SpaceMismatch):
        f + g


def test_fields_are_immutable():
    f = make_field(make_space([1.0]), [2.0])
    with pytest.raises(ValueError):
        f.values[0] = 1.0
    with pytest.raises(AttributeError):
        f.values = np.zeros(1)


@given(space_and_fields(n_fields=2))
@settings(max_examples=200)
def test_l2_triangle_inequality(sf):
    _, f, g = sf
    lhs = l2_norm(f + g)
    rhs = l2_norm(f) + l2_norm(g)
    assert lhs <= rhs * (1 + 1e-12) + 1e-12


@given(space_and_fields(), st.floats(min_value=-20, max_value=20, allow_nan=False))
@settings(max_examples=200)
def test_l2_absolute_homogeneity(sf, c):
    _, f = sf
    assert l2_norm(c * f) == pytest.approx(abs(c) * l2_norm(f), rel=1e-12, abs=1e-12)


@given(space_and_fields(n_fields=3))
@settings(max_examples=200)
def test_leq_partial_order(sf):
    _, f, g, h = sf
    assert leq(f, f)
    if leq(f, g) and leq(g, f):
        assert np.array_equal(f.values, g.values)
    if leq(f, g) and leq(g, h):
        assert leq(f, h)


@given(space_and_fields(n_fields=2))
@settings(max_examples=200)
def test_linf_separates_points(sf):
    _, f, g = sf
    assert (linf_norm(f - g) == 0.0) == np.array_equal(f.values, g.values)
