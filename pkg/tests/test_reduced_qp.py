import numpy as np
import pytest

from src.kernels.tilde import TildeKernel
from src.solvers.reduced_qp import reduced_qp_solve
from src.utils.errors import NonConvergenceError, UsageError
from tests.oracles import dense_g, oracle_optimum


def test_single_row(rbf_tk):
    assert reduced_qp_solve(rbf_tk, [3], [1.0], 1e-8, 100).tolist() == [1.0]


def test_symmetric_pair(linear_pair_tk):
    alpha = reduced_qp_solve(linear_pair_tk, [0, 1], [1.0, 0.0], 1e-12, 1000)
    assert alpha == pytest.approx([0.5, 0.5], abs=1e-9)


@pytest.mark.parametrize("seed", range(5))
def test_matches_dense_oracle(rbf_tk, seed):
    rng = np.random.default_rng(seed)
    rows = np.sort(rng.choice(rbf_tk.m, size=int(rng.integers(2, 11)), replace=False))
    sub = TildeKernel.build(rbf_tk.base, rbf_tk.matrix[rows], rbf_tk.y[rows], rbf_tk.C)
    _, best = oracle_optimum(sub)

    warm = np.zeros(len(rows))
    warm[0] = 1.0
    alpha = reduced_qp_solve(rbf_tk, rows, warm, 1e-12, 10 ** 6)
    assert alpha.min() >= 0.0
    assert alpha.sum() == pytest.approx(1.0, abs=1e-10)
    assert dense_g(sub, alpha) == pytest.approx(best, rel=1e-8)


def test_linear_kernel_against_oracle(linear_tk):
    rows = np.arange(10)
    sub = TildeKernel.build(linear_tk.base, linear_tk.matrix[rows], linear_tk.y[rows], linear_tk.C)
    _, best = oracle_optimum(sub)
    alpha = reduced_qp_solve(linear_tk, rows, np.full(10, 0.1), 1e-12, 10 ** 6)
    assert dense_g(sub, alpha) == pytest.approx(best, rel=1e-8)


def test_counter_reports_steps(rbf_tk):
    counter = []
    reduced_qp_solve(rbf_tk, np.arange(8), np.full(8, 0.125), 1e-10, 10 ** 6, counter=counter)
    assert len(counter) == 1 and counter[0] > 0


def test_cap_raises_with_last_iterate(rbf_tk):
    with pytest.raises(NonConvergenceError) as info:
        reduced_qp_solve(rbf_tk, np.arange(20), np.full(20, 0.05), 1e-14, 3)
    assert info.value.iterations == 3
    assert info.value.alpha.sum() == pytest.approx(1.0, abs=1e-10)
    assert info.value.exit_code == 3


@pytest.mark.parametrize("warm", [[0.5, 0.6], [1.5, -0.5], [1.0]])
def test_infeasible_warm_start(rbf_tk, warm):
    with pytest.raises(UsageError):
        reduced_qp_solve(rbf_tk, [0, 1], warm, 1e-8, 100)


def test_empty_index_set(rbf_tk):
    with pytest.raises(UsageError):
        reduced_qp_solve(rbf_tk, [], [], 1e-8, 100)
