import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from blockfd.grid import GridFunction, build_grid, exact_solution, norms, sample


def test_nodes_n4():
    g = build_grid(4, 1.0)
    assert np.allclose(g.nodes, [1 / 16, 3 / 16, 5 / 16, 7 / 16, 9 / 16, 11 / 16, 13 / 16, 15 / 16])
    assert g.h == 0.25 and g.dx == 0.125 and g.size == 8


@given(st.integers(3, 200), st.floats(0.1, 50))
@settings(max_examples=50, deadline=None)
def test_nodes_uniform_and_inside(N, L):
    g = build_grid(N, L)
    assert np.allclose(np.diff(g.nodes), L / (2 * N))
    assert 0 < g.nodes[0] < g.nodes[-1] < L
    assert np.isclose(g.nodes[0], L / (4 * N))


@pytest.mark.parametrize("N,L", [(2, 1.0), (0, 1.0), (3.5, 1.0), (8, 0.0), (8, -1.0)])
def test_build_grid_rejects(N, L):
    with pytest.raises(ValueError):
        build_grid(N, L)


def test_family_views():
    g = build_grid(5, 1.0)
    u = sample(g, lambda x: x)
    assert np.allclose(u.minus, g.nodes[0::2])
    assert np.allclose(u.plus, g.nodes[1::2])
    assert np.allclose(u.plus - u.minus, g.h / 2)


def test_grid_function_checks_length_and_is_readonly():
    g = build_grid(4)
    with pytest.raises(ValueError):
        GridFunction(g, np.zeros(7))
    u = sample(g, np.sin)
    with pytest.raises(ValueError):
        u.values[0] = 1.0


def test_sample_constant_broadcasts():
    u = sample(build_grid(6), lambda x: 3.0)
    assert u.values.shape == (12,) and np.all(u.values == 3.0)


def test_norms():
    g = build_grid(8, 2.0)
    u = sample(g, lambda x: np.ones_like(x))
    l2, linf = norms(u)
    assert np.isclose(l2, np.sqrt(2.0)) and linf == 1.0
    assert norms(u.with_values(np.zeros(16))) == (0.0, 0.0)


def test_exact_solution_periodic_and_shift():
    g = build_grid(16, 1.0)
    f = lambda x: np.sin(2 * np.pi * x)
    assert np.allclose(exact_solution(g, f, 3.0).values, sample(g, f).values, atol=1e-14)
    assert np.allclose(exact_solution(g, f, 0.25).values, np.sin(2 * np.pi * (g.nodes - 0.25)))


def test_exact_solution_huge_time():
    # t = 1e10 + 0.25 is not representable exactly; reduce against the same float
    g = build_grid(16, 1.0)
    f = lambda x: np.cos(2 * np.pi * x)
    t = 1e10 + 0.25
    ref = np.cos(2 * np.pi * (g.nodes - np.mod(t, 1.0)))
    assert np.allclose(exact_solution(g, f, t).values, ref, atol=1e-12)
