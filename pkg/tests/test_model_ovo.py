import numpy as np
import pytest

from src.config import InitPolicy, SolverConfig
from src.data.libsvm import Dataset, SparseVector, load_dataset
from src.data.ovo import split_ovo
from src.data.synthetic import make_blobs
from src.kernels.base import KernelSpec
from src.model.binary import BinaryModel
from src.model.ovo import OvoModel, accuracy, pair_trace_path, predict_ovo, train_ovo
from src.model.serialization import serialize_model
from src.utils.errors import ConsistencyError, DataError

CONFIG = SolverConfig(epsilon=1e-4, init=InitPolicy('two-point'), log_every=0)


def constant_machine(positive, negative, sign):
    """Linear machine whose decision value is ``sign`` everywhere"""
    return BinaryModel(KernelSpec.linear(), 1.0, ((SparseVector(), float(sign)),), positive, negative)


def test_majority_vote():
    model = OvoModel((3, 5, 7), (
        constant_machine(3, 5, 1), constant_machine(3, 7, 1), constant_machine(5, 7, 1),
    ))
    assert predict_ovo(model, SparseVector.from_dense([1.0])) == 3


def test_full_tie_goes_to_smallest_class():
    model = OvoModel((3, 5, 7), (
        constant_machine(3, 5, -1), constant_machine(3, 7, 1), constant_machine(5, 7, -1),
    ))
    assert predict_ovo(model, SparseVector.from_dense([1.0])) == 3
    model = OvoModel((3, 5, 7), (
        constant_machine(3, 5, 1), constant_machine(3, 7, -1), constant_machine(5, 7, 1),
    ))
    assert predict_ovo(model, SparseVector()) == 3


def test_machine_order_does_not_matter():
    machines = (constant_machine(0, 1, -1), constant_machine(0, 2, -1), constant_machine(1, 2, 1))
    forward = OvoModel((0, 1, 2), machines)
    backward = OvoModel((0, 1, 2), tuple(reversed(machines)))
    x = SparseVector.from_dense([0.3])
    assert predict_ovo(forward, x) == predict_ovo(backward, x) == 1


def test_missing_pair_rejected():
    with pytest.raises(ConsistencyError):
        OvoModel((0, 1, 2), (constant_machine(0, 1, 1), constant_machine(0, 2, 1)))
    with pytest.raises(ConsistencyError):
        OvoModel((0,), ())


def test_binary_model_follows_decision_sign(blobs30):
    model, stats = train_ovo(blobs30, KernelSpec.rbf(2.0), 10.0, 'mfw', CONFIG)
    assert len(model.machines) == 1 and len(stats) == 1
    machine = model.machines[0]
    values = machine.decision_values(blobs30.matrix)
    expected = np.where(values >= 0, machine.positive_class, machine.negative_class)
    assert np.array_equal(model.predict(blobs30), expected)


def test_three_class_training(data_dir):
    train = load_dataset(data_dir / 'tri_train.libsvm')
    test = load_dataset(data_dir / 'tri_test.libsvm')
    model, stats = train_ovo(train, KernelSpec.rbf(1.0), 16.0, 'mfw', CONFIG)
    assert model.classes == (0, 1, 2)
    assert [m.pair for m in model.machines] == [(0, 1), (0, 2), (1, 2)]
    assert all(s.converged for s in stats)
    assert accuracy(model, train) >= 90.0
    assert accuracy(model, test) >= 75.0


def test_workers_do_not_change_the_model(data_dir):
    train = load_dataset(data_dir / 'tri_train.libsvm')
    sequential, _ = train_ovo(train, KernelSpec.rbf(1.0), 16.0, 'mfw', CONFIG, workers=1)
    parallel, _ = train_ovo(train, KernelSpec.rbf(1.0), 16.0, 'mfw', CONFIG, workers=3)
    assert serialize_model(sequential) == serialize_model(parallel)


def test_per_pair_traces(tmp_path, data_dir):
    train = load_dataset(data_dir / 'tri_train.libsvm')
    train_ovo(train, KernelSpec.rbf(1.0), 16.0, 'fw', CONFIG, trace_path=tmp_path / 'trace.csv')
    assert sorted(p.name for p in tmp_path.iterdir()) == ['trace_0_1.csv', 'trace_0_2.csv', 'trace_1_2.csv']


def test_trace_path_for_binary_corpus(tmp_path):
    subproblem = split_ovo(make_blobs(4))[0]
    assert pair_trace_path(tmp_path / 'run.csv', subproblem, single=True) == tmp_path / 'run.csv'
    assert pair_trace_path(None, subproblem, single=True) is None


def test_accuracy_of_empty_dataset():
    model = OvoModel((0, 1), (constant_machine(0, 1, 1),))
    with pytest.raises(DataError):
        accuracy(model, Dataset((), 1, (0, 1)))
