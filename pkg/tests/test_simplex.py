import numpy as np
import pytest

from extpovm.errors import NumericalError
from extpovm.simplex import basic_feasible_solution

from helpers import enumerate_vertices


def test_one_constraint():
    x = basic_feasible_solution(np.array([[1.0, 1.0]]), np.array([1.0]))
    assert x.min() >= 0
    assert abs(x.sum() - 1.0) <= 1e-12
    assert (x > 1e-9).sum() <= 1


def test_redundant_rows():
    a = np.array([[1.0, 2.0, 0.0], [2.0, 4.0, 0.0], [0.0, 0.0, 1.0]])
    b = np.array([2.0, 4.0, 3.0])
    x = basic_feasible_solution(a, b)
    assert np.abs(a @ x - b).max() <= 1e-9
    assert x.min() >= 0


def test_negative_rhs_handled():
    a = np.array([[-1.0, 0.0], [0.0, 1.0]])
    b = np.array([-2.0, 1.0])
    x = basic_feasible_solution(a, b)
    assert np.abs(a @ x - b).max() <= 1e-9


def test_infeasible_raises():
    with pytest.raises(NumericalError):
        basic_feasible_solution(np.array([[1.0, 1.0]]), np.array([-1.0]))


@pytest.mark.parametrize("seed", range(30))
def test_random_feasible_systems(seed):
    rng = np.random.default_rng(seed)
    m = rng.integers(2, 5)
    n = rng.integers(m, 8)
    a = rng.standard_normal((m, n))
    x0 = rng.uniform(0.1, 2.0, size=n)
    b = a @ x0
    x = basic_feasible_solution(a, b)
    assert x.min() >= 0
    assert np.abs(a @ x - b).max() <= 1e-8
    rank = np.linalg.matrix_rank(a)
    assert (x > 1e-9).sum() <= rank


@pytest.mark.parametrize("seed", range(10))
def test_solution_is_a_true_vertex(seed):
    rng = np.random.default_rng(100 + seed)
    a = rng.standard_normal((3, 6))
    x0 = rng.uniform(0.1, 1.0, size=6)
    b = a @ x0
    x = basic_feasible_solution(a, b)
    vertices = enumerate_vertices(a, b)
    assert vertices, "oracle found no vertices"
    assert any(np.abs(x - v).max() < 1e-7 for v in vertices)


def test_deterministic():
    rng = np.random.default_rng(5)
    a = rng.standard_normal((4, 9))
    b = a @ rng.uniform(0.1, 1.0, size=9)
    x1 = basic_feasible_solution(a, b)
    x2 = basic_feasible_solution(a.copy(), b.copy())
    assert np.array_equal(x1, x2)
