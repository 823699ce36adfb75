import numpy as np
import pytest

from src.config import InitPolicy, SolverConfig
from src.data.libsvm import Dataset, SparseVector
from src.data.ovo import split_ovo
from src.data.synthetic import from_arrays, make_blobs
from src.kernels.base import KernelSpec
from src.kernels.tilde import TildeKernel
from src.model.binary import BinaryModel, build_binary, dataset_matrix, decision_value, predict_binary
from src.solvers import train_mfw
from src.solvers.state import state_from_weights
from src.utils.errors import ConsistencyError, DataError


def vec(*values):
    return SparseVector.from_dense(values)


@pytest.fixture
def pair_dataset():
    return from_arrays(np.array([[1.0, 0.0], [0.0, 1.0]]), [0, 1])


def test_single_support_vector(pair_dataset):
    subproblem = split_ovo(pair_dataset)[0]
    tk = TildeKernel.from_subproblem(KernelSpec.rbf(1.0), pair_dataset, subproblem, 10.0)
    model = build_binary(tk, state_from_weights(tk, [0], [1.0]), subproblem, pair_dataset)
    assert len(model) == 1
    assert model.support[0] == (pair_dataset.samples[0].features, 1.0)
    assert model.pair == (0, 1)


def test_symmetric_pair_coefficients(pair_dataset):
    subproblem = split_ovo(pair_dataset)[0]
    tk = TildeKernel.from_subproblem(KernelSpec.linear(), pair_dataset, subproblem, 1.0)
    model = build_binary(tk, state_from_weights(tk, [1, 0], [0.5, 0.5]), subproblem, pair_dataset)
    assert model.coefs.tolist() == [0.5, -0.5]


def test_rejects_weights_off_the_simplex(pair_dataset):
    subproblem = split_ovo(pair_dataset)[0]
    tk = TildeKernel.from_subproblem(KernelSpec.linear(), pair_dataset, subproblem, 1.0)
    with pytest.raises(ConsistencyError):
        build_binary(tk, state_from_weights(tk, [0, 1], [0.5, 0.4]), subproblem, pair_dataset)


def test_empty_or_zero_support_rejected():
    with pytest.raises(ConsistencyError):
        BinaryModel(KernelSpec.linear(), 1.0, (), 0, 1)
    with pytest.raises(ConsistencyError):
        BinaryModel(KernelSpec.linear(), 1.0, ((vec(1.0), 0.0),), 0, 1)


def test_decision_at_the_support_vector():
    model = BinaryModel(KernelSpec.rbf(0.3), 1.0, ((vec(0.5, -1.0), 1.0),), 1, 2)
    assert decision_value(model, vec(0.5, -1.0)) == 2.0


def test_equidistant_point_scores_zero_and_votes_positive():
    model = BinaryModel(KernelSpec.rbf(1.0), 1.0, ((vec(1.0, 0.0), 0.5), (vec(-1.0, 0.0), -0.5)), 4, 9)
    assert decision_value(model, vec(0.0, 1.0)) == 0.0
    assert predict_binary(model, vec(0.0, 1.0)) == 4
    assert predict_binary(model, vec(-2.0, 0.0)) == 9


def test_wider_query_than_support():
    model = BinaryModel(KernelSpec.linear(), 1.0, ((vec(1.0), 1.0),), 0, 1)
    assert decision_value(model, vec(2.0, 0.0, 5.0)) == 3.0


@pytest.fixture
def trained(blobs30):
    subproblem = split_ovo(blobs30)[0]
    tk = TildeKernel.from_subproblem(KernelSpec.rbf(2.0), blobs30, subproblem, 10.0)
    config = SolverConfig(epsilon=1e-6, init=InitPolicy('two-point'), log_every=0)
    state, _ = train_mfw(tk, config)
    return tk, state, build_binary(tk, state, subproblem, blobs30), subproblem


def test_decision_values_match_dual_state(trained, blobs30):
    tk, state, model, subproblem = trained
    assert np.abs(model.coefs).sum() == pytest.approx(1.0, abs=1e-8)
    alpha = state.dense_alpha(tk.m)
    kalpha = tk.gram() @ alpha
    expected = tk.y * (kalpha - alpha / tk.C)
    matrix = dataset_matrix(blobs30)[subproblem.indices]
    assert np.allclose(model.decision_values(matrix), expected, rtol=1e-10, atol=1e-12)


def test_support_order_does_not_matter(trained, blobs30):
    _, _, model, _ = trained
    shuffled = BinaryModel(model.kernel, model.C, tuple(reversed(model.support)),
                           model.positive_class, model.negative_class)
    matrix = dataset_matrix(blobs30)
    assert np.allclose(shuffled.decision_values(matrix), model.decision_values(matrix), rtol=1e-12, atol=1e-14)


def test_relabeling_negates_decisions(trained, blobs30):
    _, _, model, _ = trained
    flipped = BinaryModel(model.kernel, model.C, tuple((v, -c) for v, c in model.support),
                          model.negative_class, model.positive_class)
    matrix = dataset_matrix(blobs30)
    original = model.decision_values(matrix)
    assert np.array_equal(flipped.decision_values(matrix), -original)
    for value, other in zip(original, -original):
        if value != 0.0:
            assert model.label_for(value) == flipped.label_for(other)


def test_separable_training_set_is_fit():
    dataset = make_blobs(60, dim=2, spread=0.4, separation=6.0, seed=2)
    subproblem = split_ovo(dataset)[0]
    tk = TildeKernel.from_subproblem(KernelSpec.rbf(4.0), dataset, subproblem, 1000.0)
    state, _ = train_mfw(tk, SolverConfig(epsilon=1e-4, log_every=0))
    model = build_binary(tk, state, subproblem, dataset)
    predicted = [model.label_for(v) for v in model.decision_values(dataset.matrix)]
    assert np.mean(np.array(predicted) == dataset.labels) >= 0.99


def test_empty_dataset_matrix():
    with pytest.raises(DataError):
        dataset_matrix(Dataset((), 2, (0, 1)))
