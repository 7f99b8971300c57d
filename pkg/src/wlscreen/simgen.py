"""Synthetic designs and response models for the screening benchmarks.

Two design families are available: a spiked factor model ``x = V diag(ups) u``
with standard Gaussian ``u``, and a Gaussian AR(1) design with
``corr(x_i, x_j) = rho**|i - j|``. Responses follow a linear model, a
two-index ratio model, or a heteroscedastic model, each driven by six
true predictors.

Randomness comes from numpy's counter-based ``Philox`` bit generator. The
stream for replicate ``r`` of a scenario with seed ``s`` is keyed by
``SeedSequence(s, spawn_key=(1, r))``, so replicates are independent of each
other and of the order in which they run. The orthonormal loading matrix of
a Haar spiked design is a property of the scenario, not of a replicate: it
is drawn once from ``SeedSequence(s, spawn_key=(0,))`` and shared by all
replicates.
"""

from __future__ import annotations

import dataclasses
import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput, InvalidProfile, UsageError

RNG_NAME = "numpy.random.Philox"
RNG_VERSION = 1
DEFAULT_SEED = 7

SPIKED_TRUE_SET = (0, 9, 14, 19, 24, 29)
AR1_TRUE_SET = (0, 9, 19, 29, 39, 49)


def _philox(seed: int, spawn_key: tuple) -> np.random.Generator:
    seq = np.random.SeedSequence(int(seed) & (2**64 - 1), spawn_key=spawn_key)
    return np.random.Generator(np.random.Philox(seq))


def replicate_rng(seed: int, replicate: int = 0) -> np.random.Generator:
    return _philox(seed, (1, int(replicate)))


def design_rng(seed: int) -> np.random.Generator:
    return _philox(seed, (0,))


@dataclass(frozen=True)
class ScenarioConfig:
    """One simulation scenario.

    ``true_set`` holds 0-based column indices; predictor ``j`` is written out
    as column ``x{j+1}``. ``spike_profile`` and ``v_mode`` only matter for
    the spiked setting, ``rho`` only for AR(1).
    """

    id: str
    setting: str  # "spiked" | "ar1"
    n: int
    p: int
    sigma: float
    model: str  # "linear" | "index_ratio" | "hetero"
    true_set: tuple[int, ...]
    rho: float = 0.0
    spike_profile: str | None = None
    v_mode: str = "identity"
    replicates: int = 100
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.setting not in ("spiked", "ar1"):
            raise InvalidInput(f"unknown setting {self.setting!r}")
        if self.model not in MODELS:
            raise InvalidInput(f"unknown model {self.model!r}")
        ts = self.true_set
        if any(b <= a for a, b in zip(ts, ts[1:])) or ts[0] < 0 or ts[-1] >= self.p:
            raise InvalidInput("true_set must be strictly increasing inside [0, p)")
        if self.sigma <= 0:
            raise InvalidInput("sigma must be positive")
        if not 0 <= self.rho < 1:
            raise InvalidInput("rho must lie in [0, 1)")

    def with_(self, **changes) -> "ScenarioConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["true_set"] = list(self.true_set)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ScenarioConfig":
        d = dict(d)
        d["true_set"] = tuple(int(t) for t in d["true_set"])
        return cls(**d)


def spike_values(profile, n: int, p: int) -> np.ndarray:
    """Diagonal of the loading matrix: the spikes followed by ones.

    ``profile`` is ``"example1"`` (81 spikes from ``80 + c`` down to ``c``),
    ``"example2"``/``"example3"`` (51 spikes from ``50 + c`` down to ``c``),
    ``None`` for no spikes, or an explicit sequence of spike values. Here
    ``c = ceil(p / sqrt(n))``.
    """
    if profile is None:
        spikes = np.empty(0)
    elif isinstance(profile, str):
        top = {"example1": 80, "example2": 50, "example3": 50}.get(profile)
        if top is None:
            raise InvalidProfile(f"unknown spike profile {profile!r}")
        c = math.ceil(p / math.sqrt(n))
        spikes = np.arange(top, -1, -1, dtype=float) + c
    else:
        spikes = np.asarray(profile, dtype=float)
    if spikes.size > p:
        raise InvalidProfile(f"{spikes.size} spikes do not fit in p = {p}")
    return np.concatenate([spikes, np.ones(p - spikes.size)])


def haar_orthogonal(p: int, rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((p, p)))
    return q * np.sign(np.diag(r))


def make_spiked_design(n, p, spike_profile, v_mode, rng, loadings=None) -> np.ndarray:
    """Rows ``x_i = V @ diag(ups) @ u_i`` with i.i.d. standard normal ``u_i``.

    For ``v_mode="haar"`` a fresh Haar matrix is drawn from ``rng`` unless
    ``loadings`` supplies a fixed one.
    """
    ups = spike_values(spike_profile, n, p)
    Z = rng.standard_normal((n, p)) * ups
    if v_mode == "identity":
        return Z
    if v_mode == "haar":
        if loadings is None:
            loadings = haar_orthogonal(p, rng)
        return Z @ loadings.T
    raise InvalidInput(f"unknown v_mode {v_mode!r}")


def make_ar1_design(n, p, rho, rng) -> np.ndarray:
    if not 0 <= rho < 1:
        raise InvalidInput(f"rho must lie in [0, 1), got {rho}")
    Z = rng.standard_normal((n, p))
    X = np.empty((n, p))
    X[:, 0] = Z[:, 0]
    scale = math.sqrt(1.0 - rho * rho)
    for j in range(1, p):
        X[:, j] = rho * X[:, j - 1] + scale * Z[:, j]
    return X


def _linear(T):
    return T.sum(axis=1)


def _index_ratio(T):
    num = T[:, 0] + T[:, 1] + 1.5 * T[:, 2] + 1.2 * T[:, 3]
    return num / (0.5 + (T[:, 4] + 1.2 * T[:, 5] + 1.0) ** 2)


def _hetero_scale(T):
    # near-zero denominators are kept on purpose
    return 1.0 / (1.0 + 1.2 * T[:, 0] + T[:, 1] + T[:, 2] + 1.5 * T[:, 3] + T[:, 4] + T[:, 5])


MODELS = ("linear", "index_ratio", "hetero")


def apply_model(X, model, true_set, sigma, rng) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if len(true_set) != 6:
        raise InvalidInput("response models need exactly 6 true predictors")
    T = X[:, list(true_set)]
    eps = rng.standard_normal(X.shape[0])
    if model == "linear":
        return _linear(T) + sigma * eps
    if model == "index_ratio":
        return _index_ratio(T) + sigma * eps
    if model == "hetero":
        return sigma * eps * _hetero_scale(T)
    raise InvalidInput(f"unknown model {model!r}")


@functools.lru_cache(maxsize=4)
def scenario_loadings(seed: int, p: int) -> np.ndarray:
    """The Haar loading matrix shared by every replicate of a scenario."""
    V = haar_orthogonal(p, design_rng(seed))
    V.flags.writeable = False
    return V


def generate(config: ScenarioConfig, replicate: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Raw (uncentered) design and response for one replicate."""
    rng = replicate_rng(config.seed, replicate)
    if config.setting == "spiked":
        loadings = scenario_loadings(config.seed, config.p) if config.v_mode == "haar" else None
        X = make_spiked_design(
            config.n, config.p, config.spike_profile, config.v_mode, rng, loadings
        )
    else:
        X = make_ar1_design(config.n, config.p, config.rho, rng)
    y = apply_model(X, config.model, config.true_set, config.sigma, rng)
    return X, y


def _spiked(id, n, p, sigma, model, profile, v_mode):
    return ScenarioConfig(
        id, "spiked", n, p, sigma, model, SPIKED_TRUE_SET,
        spike_profile=profile, v_mode=v_mode,
    )


def _ar1(id, n, p, rho, sigma, model):
    return ScenarioConfig(id, "ar1", n, p, sigma, model, AR1_TRUE_SET, rho=rho)


def scenario_catalog() -> list[ScenarioConfig]:
    lin, ratio, het = MODELS
    return [
        _spiked("1.1", 500, 700, 1.0, lin, "example1", "haar"),
        _spiked("1.2", 500, 1500, 1.0, lin, "example1", "haar"),
        _spiked("1.3", 500, 1500, 1.5, lin, "example1", "haar"),
        _spiked("1.4", 500, 2000, 1.0, lin, "example1", "haar"),
        _spiked("1.5", 300, 1000, 1.0, lin, "example1", "haar"),
        _ar1("1.6", 500, 100, 0.5, 1.0, lin),
        _ar1("1.7", 500, 1000, 0.5, 1.0, lin),
        _ar1("1.8", 500, 1000, 0.5, 1.5, lin),
        _ar1("1.9", 500, 1500, 0.5, 1.0, lin),
        _ar1("1.10", 300, 1000, 0.3, 1.0, lin),
        _spiked("2.1", 1000, 1200, 1.0, ratio, "example2", "identity"),
        _spiked("2.2", 1000, 1500, 1.0, ratio, "example2", "identity"),
        _spiked("2.3", 1000, 1500, 1.5, ratio, "example2", "identity"),
        _spiked("2.4", 1000, 2000, 1.0, ratio, "example2", "identity"),
        _spiked("2.5", 300, 2000, 1.0, ratio, "example2", "identity"),
        _ar1("2.6", 1000, 200, 0.5, 1.0, ratio),
        _ar1("2.7", 1000, 2000, 0.5, 1.0, ratio),
        _ar1("2.8", 1000, 2000, 0.5, 1.5, ratio),
        _ar1("2.9", 1000, 2500, 0.5, 1.0, ratio),
        _ar1("2.10", 500, 2000, 0.3, 1.0, ratio),
        _spiked("3.1", 1000, 1200, 1.0, het, "example3", "identity"),
        _spiked("3.2", 1000, 1500, 1.0, het, "example3", "identity"),
        _spiked("3.3", 1000, 2000, 1.0, het, "example3", "identity"),
        _spiked("3.4", 300, 2000, 1.0, het, "example3", "identity"),
        _ar1("3.5", 1000, 200, 0.3, 1.0, het),
        _ar1("3.6", 1000, 2000, 0.1, 1.0, het),
        _ar1("3.7", 1000, 2500, 0.1, 1.0, het),
        _ar1("3.8", 500, 2000, 0.1, 1.0, het),
    ]


def get_scenario(scenario_id: str) -> ScenarioConfig:
    for cfg in scenario_catalog():
        if cfg.id == scenario_id:
            return cfg
    ids = ", ".join(c.id for c in scenario_catalog())
    raise UsageError(f"unknown scenario {scenario_id!r}; valid ids: {ids}")
