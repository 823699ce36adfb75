import numpy as np
import pytest

from src.data.libsvm import SparseVector
from src.data.synthetic import from_arrays, make_blobs
from src.kernels.base import KernelSpec, kernel_block, kernel_eval
from src.kernels.tilde import TildeKernel, tilde_diag, tilde_eval
from src.utils.errors import ConsistencyError, UsageError


def vec(*values):
    return SparseVector.from_dense(values)


def test_rbf_of_identical_rows_is_one():
    assert kernel_eval(KernelSpec.rbf(0.7), vec(0.3, -1.2), vec(0.3, -1.2)) == 1.0


def test_homogeneous_poly_orthogonal():
    assert kernel_eval(KernelSpec.polyh(1.0, 2), vec(1, 0), vec(0, 1)) == 0.0


def test_inhomogeneous_poly():
    assert kernel_eval(KernelSpec.poly(2), vec(1, 1), vec(1, 1)) == 9.0


def test_rbf_value():
    value = kernel_eval(KernelSpec.rbf(2.0), vec(0, 0), vec(1, 1))
    assert value == pytest.approx(np.exp(-2.0 / 4.0))


@pytest.mark.parametrize("text", ["rbf sigma2=0.25", "linear", "poly degree=3", "polyh gamma=0.5 degree=2"])
def test_describe_parse_round_trip(text):
    spec = KernelSpec.parse(text)
    assert spec.describe() == text
    assert KernelSpec.parse(spec.describe()) == spec


@pytest.mark.parametrize("kind, kwargs", [
    ('rbf', {'sigma2': 0.0}), ('poly', {'degree': 0}), ('polyh', {'gamma': -1.0, 'degree': 2}), ('cubic', {}),
])
def test_invalid_specs(kind, kwargs):
    with pytest.raises(UsageError):
        KernelSpec(kind, **kwargs)


def test_only_rbf_is_normalized():
    assert KernelSpec.rbf(1.0).normalized
    assert not KernelSpec.linear().normalized
    assert not KernelSpec.poly(2).normalized
    assert not KernelSpec.polyh(1.0, 2).normalized


def test_block_matches_scalar_kernel():
    dataset = make_blobs(8, dim=3, seed=0)
    spec = KernelSpec.rbf(1.3)
    norms = np.array([s.features.squared_norm() for s in dataset.samples])
    block = kernel_block(spec, dataset.matrix, dataset.matrix, norms, norms)
    for i, a in enumerate(dataset.samples):
        for j, b in enumerate(dataset.samples):
            assert block[i, j] == pytest.approx(kernel_eval(spec, a.features, b.features), rel=1e-12)


def test_tilde_linear_example(linear_pair_tk):
    assert tilde_eval(linear_pair_tk, 0, 1) == -1.0
    assert tilde_eval(linear_pair_tk, 0, 0) == 3.0


def test_tilde_rbf_diagonal():
    dataset = make_blobs(5, seed=1)
    tk = TildeKernel.from_binary_dataset(KernelSpec.rbf(0.5), dataset, C=10.0)
    assert tilde_eval(tk, 3, 3) == pytest.approx(2.1)
    tk = TildeKernel.from_binary_dataset(KernelSpec.rbf(0.5), dataset, C=100.0)
    diag, delta2 = tilde_diag(tk)
    assert np.allclose(diag, 2.01, rtol=0, atol=1e-15)
    assert delta2 == pytest.approx(2.01)


def test_tilde_diag_max_rule():
    dataset = from_arrays(np.array([[1.0, 0.0], [2.0, 0.0]]), [0, 1])
    tk = TildeKernel.from_binary_dataset(KernelSpec.linear(), dataset, C=1.0)
    diag, delta2 = tilde_diag(tk)
    assert diag.tolist() == [3.0, 6.0]
    assert delta2 == 6.0


def test_tilde_diag_homogeneous_poly():
    dataset = from_arrays(np.array([[1.0, 1.0], [0.5, 0.0]]), [0, 1])
    tk = TildeKernel.from_binary_dataset(KernelSpec.polyh(1.0, 2), dataset, C=1.0)
    assert tilde_diag(tk)[0][0] == 6.0


def test_tilde_out_of_range(linear_pair_tk):
    with pytest.raises(IndexError):
        tilde_eval(linear_pair_tk, 0, 2)


def test_tilde_symmetry_is_exact(rbf_tk, linear_tk):
    for tk in (rbf_tk, linear_tk):
        gram = tk.gram()
        assert np.array_equal(gram, gram.T)
        for i, j in [(0, 5), (3, 17), (29, 1)]:
            assert tilde_eval(tk, i, j) == tilde_eval(tk, j, i)


def test_tilde_gram_is_positive_definite(rbf_tk, linear_tk):
    rng = np.random.default_rng(0)
    for tk in (rbf_tk, linear_tk):
        for _ in range(5):
            rows = rng.choice(tk.m, size=20, replace=False)
            smallest = np.linalg.eigvalsh(tk.gram(rows)).min()
            assert smallest >= 1.0 / tk.C - 1e-8


def test_tilde_matches_definition(linear_tk, blobs30):
    x = blobs30.matrix.toarray()
    y = linear_tk.y
    expected = np.outer(y, y) * (x @ x.T + 1.0) + np.eye(len(y)) / linear_tk.C
    assert np.allclose(linear_tk.gram(), expected, rtol=1e-12, atol=1e-12)


def test_forced_general_path_keeps_values(blobs30):
    spec = KernelSpec.rbf(1.0)
    normalized = TildeKernel.from_binary_dataset(spec, blobs30, C=4.0)
    general = TildeKernel.build(spec, blobs30.matrix, normalized.y, 4.0, normalized=False)
    assert normalized.normalized and not general.normalized
    assert general.delta2 == normalized.delta2
    assert np.array_equal(general.gram(), normalized.gram())


def test_bad_labels_and_C(blobs30):
    with pytest.raises(UsageError):
        TildeKernel.build(KernelSpec.linear(), blobs30.matrix, np.zeros(len(blobs30)), 1.0)
    with pytest.raises(UsageError):
        TildeKernel.from_binary_dataset(KernelSpec.linear(), blobs30, C=0.0)


def test_nonconstant_diagonal_flagged(blobs30):
    tk = TildeKernel.from_binary_dataset(KernelSpec.rbf(1.0), blobs30, C=1.0)
    broken = np.array(tk.diag)
    broken[0] += 1e-9
    object.__setattr__(tk, 'diag', broken)
    with pytest.raises(ConsistencyError):
        tilde_diag(tk)
