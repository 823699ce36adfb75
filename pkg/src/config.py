"""
Central configuration management for the training toolkit.
Loads from dataclass defaults, config/solver.yaml, environment variables
(optionally read from a .env file) and finally explicit overrides.
"""

from dataclasses import dataclass, field, fields, replace
from typing import Any, Dict, Optional, Union
import os
from pathlib import Path
import yaml
from dotenv import load_dotenv
from src.data.libsvm import Dataset
from src.data.statistics import avg_sq_distance
from src.kernels.base import KernelSpec
from src.utils.errors import UsageError
from src.utils.logger import get_logger

logger = get_logger(__name__)

MB = 1024 * 1024


@dataclass(frozen=True)
class InitPolicy:
    """How the first coreset is chosen"""
    kind: str = 'random-meb'  # 'two-point' or 'random-meb'
    p: int = 20

    def __post_init__(self):
        if self.kind not in ('two-point', 'random-meb'):
            raise UsageError(f"Unknown init policy: {self.kind}")
        if self.kind == 'random-meb' and self.p < 2:
            raise UsageError(f"random-meb needs at least 2 points, got p={self.p}")

    @classmethod
    def parse(cls, text: str) -> 'InitPolicy':
        """Parse 'two-point' or 'random-meb[:p]'"""
        text = text.strip()
        if text == 'two-point':
            return cls(kind='two-point')
        name, _, size = text.partition(':')
        if name != 'random-meb':
            raise UsageError(f"Unknown init policy: {text}")
        if not size:
            return cls()
        try:
            return cls(kind='random-meb', p=int(size))
        except ValueError:
            raise UsageError(f"Bad random-meb size: {size}") from None

    def describe(self) -> str:
        return 'two-point' if self.kind == 'two-point' else f"random-meb:{self.p}"


@dataclass(frozen=True)
class SolverConfig:
    """Tolerances, sampling and bookkeeping for one solver run"""
    epsilon: float = 1e-6
    sample_size: int = 59
    max_iterations: int = 10_000_000
    seed: int = 0
    init: InitPolicy = field(default_factory=InitPolicy)
    zero_tolerance: float = 1e-12
    cache_bytes: int = 200 * MB
    exact_final_check: bool = True
    inner_iter_cap: int = 1_000_000
    debug: bool = False
    check_dense_every: int = 100
    log_every: int = 1000

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise UsageError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.sample_size < 1:
            raise UsageError(f"sample_size must be >= 1, got {self.sample_size}")
        if self.max_iterations < 1:
            raise UsageError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if self.zero_tolerance < 0:
            raise UsageError(f"zero_tolerance must be >= 0, got {self.zero_tolerance}")
        if self.cache_bytes < 0:
            raise UsageError(f"cache_bytes must be >= 0, got {self.cache_bytes}")
        if self.check_dense_every < 1:
            raise UsageError(f"check_dense_every must be >= 1, got {self.check_dense_every}")

    @property
    def inner_epsilon(self) -> float:
        """Tolerance of the reduced QP solved inside the core vector loop"""
        return self.epsilon / 10.0

    @property
    def dense_check_period(self) -> int:
        return 1 if self.debug else self.check_dense_every

    def with_seed(self, seed: int) -> 'SolverConfig':
        return replace(self, seed=seed)


@dataclass
class RuntimeConfig:
    """Process-level settings"""
    log_level: str = 'INFO'
    log_file: Optional[str] = None
    data_dir: Optional[Path] = None
    workers: int = 1


class Config:
    """Main configuration class"""

    ENV_PREFIX = 'COREBALL_'

    def __init__(self, config_file: Optional[Path] = None):
        load_dotenv()
        self.project_root = Path(__file__).parent.parent
        self.config_file = config_file or self.project_root / 'config' / 'solver.yaml'
        self.file_settings = self._load_file_settings()
        self.solver = self._load_solver_config()
        self.runtime = self._load_runtime_config()

    def _load_file_settings(self) -> Dict[str, Any]:
        if self.config_file.exists():
            with open(self.config_file) as f:
                loaded = yaml.safe_load(f) or {}
            if not isinstance(loaded, dict):
                raise UsageError(f"{self.config_file} must hold a mapping")
            return loaded
        return {}

    def _env(self, name: str) -> Optional[str]:
        value = os.getenv(self.ENV_PREFIX + name)
        return value if value not in (None, '') else None

    def _load_solver_config(self) -> SolverConfig:
        settings = dict(self.file_settings.get('solver', {}) or {})
        env_overrides = {
            'epsilon': (self._env('EPSILON'), float),
            'sample_size': (self._env('SAMPLE_SIZE'), int),
            'seed': (self._env('SEED'), int),
            'max_iterations': (self._env('MAX_ITER'), int),
        }
        for key, (raw, cast) in env_overrides.items():
            if raw is not None:
                settings[key] = cast(raw)
        cache_mb = self._env('CACHE_MB')
        if cache_mb is not None:
            settings['cache_mb'] = float(cache_mb)
        return build_solver_config(settings)

    def _load_runtime_config(self) -> RuntimeConfig:
        settings = dict(self.file_settings.get('runtime', {}) or {})
        data_dir = self._env('DATA_DIR') or settings.get('data_dir')
        return RuntimeConfig(
            log_level=self._env('LOG_LEVEL') or settings.get('log_level', 'INFO'),
            log_file=self._env('LOG_FILE') or settings.get('log_file'),
            data_dir=Path(data_dir) if data_dir else self.project_root / 'data',
            workers=int(self._env('WORKERS') or settings.get('workers', 1))
        )


def build_solver_config(settings: Dict[str, Any], base: Optional[SolverConfig] = None) -> SolverConfig:
    """
    Apply a flat mapping of settings onto a SolverConfig.

    Accepts the dataclass field names plus two conveniences: ``init`` as
    text ('two-point', 'random-meb:20') and ``cache_mb`` in megabytes.
    Unknown keys are rejected so typos in YAML files surface early.
    """
    base = base or SolverConfig()
    known = {f.name for f in fields(SolverConfig)}
    updates: Dict[str, Any] = {}
    for key, value in settings.items():
        if value is None:
            continue
        if key == 'cache_mb':
            updates['cache_bytes'] = int(float(value) * MB)
        elif key == 'init':
            updates['init'] = value if isinstance(value, InitPolicy) else InitPolicy.parse(str(value))
        elif key in known:
            updates[key] = value
        else:
            raise UsageError(f"Unknown solver setting: {key}")
    return replace(base, **updates)


AUTO = 'auto'


@dataclass(frozen=True)
class KernelConfig:
    """
    Kernel choice as given on the command line or in a benchmark suite.

    ``sigma2`` (rbf) and ``gamma`` (polyh) may be 'auto', resolved against
    the training rows: sigma2 becomes the average squared distance between
    rows and gamma its inverse.
    """
    kind: str = 'rbf'
    sigma2: Union[float, str] = AUTO
    gamma: Union[float, str] = AUTO
    degree: int = 2

    def __post_init__(self):
        for name in ('sigma2', 'gamma'):
            value = getattr(self, name)
            if value != AUTO and not (isinstance(value, (int, float)) and value > 0):
                raise UsageError(f"{name} must be a positive number or 'auto', got {value!r}")

    @property
    def normalized(self) -> bool:
        """Only rbf has a constant k(x, x)"""
        return self.kind == 'rbf'

    @staticmethod
    def parse_value(text: Union[str, float]) -> Union[float, str]:
        if isinstance(text, str) and text.strip().lower() == AUTO:
            return AUTO
        try:
            return float(text)
        except ValueError:
            raise UsageError(f"expected a number or 'auto', got {text!r}") from None

    def resolve(self, dataset: Dataset, seed: int = 0) -> KernelSpec:
        if self.kind == 'rbf':
            sigma2 = self.sigma2
            if sigma2 == AUTO:
                sigma2 = avg_sq_distance(dataset, seed=seed)
                logger.info(f"sigma2=auto resolved to {sigma2:.6g}")
            return KernelSpec.rbf(sigma2)
        if self.kind == 'polyh':
            gamma = self.gamma
            if gamma == AUTO:
                distance = avg_sq_distance(dataset, seed=seed)
                if distance <= 0:
                    raise UsageError("gamma=auto needs rows that are not all identical")
                gamma = 1.0 / distance
                logger.info(f"gamma=auto resolved to {gamma:.6g}")
            return KernelSpec.polyh(gamma, self.degree)
        if self.kind == 'poly':
            return KernelSpec.poly(self.degree)
        if self.kind == 'linear':
            return KernelSpec.linear()
        raise UsageError(f"Unknown kernel: {self.kind}")
