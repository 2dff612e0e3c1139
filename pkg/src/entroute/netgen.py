"""Random network ensembles with sampled link and node parameters."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .netmodel import LinkParams, Network, NetworkError, NodeParams, TerminalSet, gamma_from_fidelity

MODELS = ("erdos_renyi", "random_geometric")
_ALIASES = {"er": "erdos_renyi", "rgg": "random_geometric"}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class GeneratorConfig:
    model: str = "erdos_renyi"
    N: int = 100
    avg_degree: float = 3.0
    p_min: float = 0.5
    t_min: float = 1.0
    t_max: float = 100.0
    sigma_min: float = 1e4
    sigma_max: float = 1e5
    f_trunc: float = 0.9
    alpha: float = 2.0
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "model", _ALIASES.get(self.model, self.model))
        if self.model not in MODELS:
            raise ConfigError(f"unknown model {self.model!r}; expected one of {MODELS}")
        if self.N < 3:
            raise ConfigError(f"N={self.N} must be at least 3")
        if not 0 < self.avg_degree < self.N:
            raise ConfigError(f"avg_degree={self.avg_degree} must lie in (0, N)")
        if self.model == "erdos_renyi" and self.avg_degree <= 1:
            raise ConfigError("erdos_renyi needs avg_degree > 1 for a finite d_max")
        if not 0 < self.p_min < 1:
            raise ConfigError(f"p_min={self.p_min} must lie in (0, 1)")
        if not 0 < self.t_min <= self.t_max:
            raise ConfigError(f"need 0 < t_min <= t_max, got {self.t_min}, {self.t_max}")
        if not 0 < self.sigma_min <= self.sigma_max:
            raise ConfigError(f"need 0 < sigma_min <= sigma_max, got {self.sigma_min}, {self.sigma_max}")
        if not 0.5 < self.f_trunc < 1:
            raise ConfigError(f"f_trunc={self.f_trunc} must lie in (1/2, 1)")
        if self.alpha <= 0:
            raise ConfigError(f"alpha={self.alpha} must be positive")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")

    def to_dict(self) -> dict:
        return asdict(self)


def d_max(model: str, N: int, avg_degree: float) -> float:
    """Typical path length used to scale the link-fidelity floor."""
    model = _ALIASES.get(model, model)
    if model == "erdos_renyi":
        return math.log(N) / math.log(avg_degree)
    if model == "random_geometric":
        return math.sqrt(N / math.log(N))
    raise ConfigError(f"unknown model {model!r}")


def f_min(cfg: GeneratorConfig) -> float:
    return cfg.f_trunc ** (cfg.alpha / d_max(cfg.model, cfg.N, cfg.avg_degree))


def rgg_radius(N: int, avg_degree: float) -> float:
    return math.sqrt(avg_degree / (math.pi * N))


def node_names(N: int) -> list[str]:
    width = len(str(N - 1))
    return [f"n{i:0{width}d}" for i in range(N)]


def derive_seed(master: int, index: int) -> int:
    """Independent 64-bit seed for instance ``index`` of a run seeded with ``master``."""
    return int(np.random.SeedSequence([master, index]).generate_state(1, np.uint64)[0])


def _edges(cfg: GeneratorConfig, rng: np.random.Generator) -> list[tuple[int, int]]:
    N = cfg.N
    iu, ju = np.triu_indices(N, k=1)
    if cfg.model == "erdos_renyi":
        mask = rng.random(iu.size) < cfg.avg_degree / (N - 1)
    else:
        pos = rng.random((N, 2))
        dist = np.linalg.norm(pos[iu] - pos[ju], axis=1)
        mask = dist <= rgg_radius(N, cfg.avg_degree)
    return list(zip(iu[mask].tolist(), ju[mask].tolist()))


def generate(cfg: GeneratorConfig) -> Network:
    """Sample a network; identical configs give identical networks."""
    rng = np.random.default_rng(cfg.seed)
    names = node_names(cfg.N)
    edges = _edges(cfg, rng)
    k = rng.uniform(cfg.p_min, 1.0, cfg.N)
    sigma = rng.uniform(cfg.sigma_min, cfg.sigma_max, cfg.N)
    m = len(edges)
    F = rng.uniform(f_min(cfg), 1.0, m)
    p = rng.uniform(cfg.p_min, 1.0, m)
    t = rng.uniform(cfg.t_min, cfg.t_max, m)
    nodes = tuple(NodeParams(names[i], float(k[i]), float(sigma[i])) for i in range(cfg.N))
    links = tuple(
        LinkParams(names[i], names[j], float(p[e]), float(t[e]), float(gamma_from_fidelity(F[e])))
        for e, (i, j) in enumerate(edges)
    )
    return Network(nodes, links)


def sample_terminals(net: Network, T: int, seed: int) -> TerminalSet:
    """``T`` distinct nodes drawn uniformly without replacement."""
    if T > len(net):
        raise NetworkError(f"cannot pick {T} terminals from {len(net)} nodes")
    if T < 1:
        raise NetworkError("terminal count must be positive")
    rng = np.random.default_rng(seed)
    picks = rng.choice(len(net), size=T, replace=False)
    return TerminalSet(tuple(net.nodes[i].id for i in sorted(picks.tolist())))


def small_connected(N: int, extra: int, seed: int, *, gamma_low: float = 0.6) -> Network:
    """Random spanning tree plus ``extra`` chords; for oracle cross-checks on tiny graphs.

    A low ``gamma_low`` makes long paths hit the entanglement threshold.
    """
    rng = np.random.default_rng(seed)
    names = node_names(N)
    edges = set()
    order = rng.permutation(N)
    for i in range(1, N):
        a, b = int(order[i]), int(order[rng.integers(0, i)])
        edges.add((min(a, b), max(a, b)))
    candidates = [(i, j) for i in range(N) for j in range(i + 1, N) if (i, j) not in edges]
    extra = min(extra, len(candidates))
    for idx in rng.choice(len(candidates), size=extra, replace=False):
        edges.add(candidates[int(idx)])
    nodes = tuple(
        NodeParams(n, float(rng.uniform(0.5, 1.0)), float(rng.uniform(50.0, 2000.0))) for n in names
    )
    links = tuple(
        LinkParams(
            names[i],
            names[j],
            float(rng.uniform(0.5, 1.0)),
            float(rng.uniform(1.0, 10.0)),
            float(rng.uniform(gamma_low, 1.0)),
        )
        for i, j in sorted(edges)
    )
    return Network(nodes, links)
