"""
Shared fixtures: small corpora and the kernels built on them.
"""

import os
from pathlib import Path

import numpy as np
import pytest

from src.config import InitPolicy, SolverConfig
from src.data.statistics import avg_sq_distance
from src.data.synthetic import from_arrays, make_blobs
from src.kernels.base import KernelSpec
from src.kernels.tilde import TildeKernel

PROJECT_ROOT = Path(__file__).parent.parent


@pytest.fixture(autouse=True)
def _isolated_environment(monkeypatch):
    for name in list(os.environ):
        if name.startswith('COREBALL_'):
            monkeypatch.delenv(name)


@pytest.fixture
def data_dir() -> Path:
    return PROJECT_ROOT / 'data'


@pytest.fixture
def blobs30():
    """Two overlapping classes, so the optimum has a sizeable support"""
    return make_blobs(30, num_classes=2, dim=2, spread=1.5, separation=1.5, seed=7)


@pytest.fixture
def rbf_tk(blobs30) -> TildeKernel:
    return TildeKernel.from_binary_dataset(KernelSpec.rbf(avg_sq_distance(blobs30)), blobs30, C=10.0)


@pytest.fixture
def linear_tk(blobs30) -> TildeKernel:
    return TildeKernel.from_binary_dataset(KernelSpec.linear(), blobs30, C=1.0)


@pytest.fixture
def linear_pair_tk() -> TildeKernel:
    """x1=(1,0) with y=+1, x2=(0,1) with y=-1, linear kernel, C=1"""
    dataset = from_arrays(np.array([[1.0, 0.0], [0.0, 1.0]]), [0, 1])
    return TildeKernel.from_binary_dataset(KernelSpec.linear(), dataset, C=1.0)


@pytest.fixture
def exact_config() -> SolverConfig:
    return SolverConfig(epsilon=1e-6, seed=0, init=InitPolicy('two-point'), log_every=0)
