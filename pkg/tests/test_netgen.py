import math

import numpy as np
import pytest

from entroute.netgen import (
    ConfigError,
    GeneratorConfig,
    d_max,
    derive_seed,
    f_min,
    generate,
    rgg_radius,
    sample_terminals,
)
from entroute.netmodel import NetworkError


def mean_degree(net):
    return 2 * len(net.links) / len(net.nodes)


def test_er_mean_degree():
    degs = [mean_degree(generate(GeneratorConfig("er", 100, 3.0, seed=derive_seed(1, i)))) for i in range(100)]
    assert 2.4 <= np.mean(degs) <= 3.6


def test_rgg_fidelity_floor_and_degree():
    cfg = GeneratorConfig("rgg", 100, 8.0, seed=4)
    floor = 0.9 ** (2 / math.sqrt(100 / math.log(100)))
    assert f_min(cfg) == pytest.approx(floor, rel=1e-15)
    degs = []
    for i in range(20):
        net = generate(GeneratorConfig("rgg", 100, 8.0, seed=derive_seed(4, i)))
        assert all(floor <= l.F < 1 + 1e-15 for l in net.links)
        degs.append(mean_degree(net))
    # Boundary effects pull the mean a little below the bulk target.
    assert 0.8 * 8 <= np.mean(degs) <= 1.2 * 8


def test_parameter_ranges():
    cfg = GeneratorConfig("er", 60, 4.0, seed=9)
    net = generate(cfg)
    lo = f_min(cfg)
    for n in net.nodes:
        assert cfg.p_min <= n.k < 1 and cfg.sigma_min <= n.sigma <= cfg.sigma_max
    for l in net.links:
        assert cfg.p_min <= l.p < 1 and cfg.t_min <= l.t <= cfg.t_max
        assert lo <= l.F and l.gamma > 1 / 3


def test_deterministic():
    cfg = GeneratorConfig("rgg", 50, 6.0, seed=123)
    assert generate(cfg) == generate(cfg)
    assert generate(cfg) != generate(GeneratorConfig("rgg", 50, 6.0, seed=124))


def test_d_max_and_radius():
    assert d_max("er", 100, 3.0) == pytest.approx(math.log(100) / math.log(3))
    assert d_max("random_geometric", 100, 8.0) == pytest.approx(math.sqrt(100 / math.log(100)))
    assert rgg_radius(100, 8.0) == pytest.approx(math.sqrt(8 / (100 * math.pi)))


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(model="ba"),
        dict(N=2),
        dict(avg_degree=200),
        dict(model="er", avg_degree=1.0),
        dict(t_min=5, t_max=1),
        dict(sigma_min=0),
        dict(p_min=1.0),
        dict(f_trunc=0.4),
        dict(alpha=0),
        dict(seed=-1),
    ],
)
def test_invalid_config(kwargs):
    with pytest.raises(ConfigError):
        GeneratorConfig(**kwargs)


def test_sample_terminals():
    net = generate(GeneratorConfig("er", 30, 3.0, seed=2))
    assert tuple(sample_terminals(net, 30, 5)) == net.node_ids
    assert sample_terminals(net, 3, 5) == sample_terminals(net, 3, 5)
    with pytest.raises(NetworkError):
        sample_terminals(net, 31, 5)


def test_sample_terminals_vary_with_seed():
    net = generate(GeneratorConfig("er", 20, 3.0, seed=2))
    draws = {tuple(sample_terminals(net, 3, derive_seed(77, i))) for i in range(100)}
    assert len(draws) > 50
    counts = np.zeros(20)
    for i in range(2000):
        for t in sample_terminals(net, 3, derive_seed(78, i)):
            counts[int(t[1:])] += 1
    assert counts.min() > 0.6 * 300 and counts.max() < 1.4 * 300


def test_derive_seed_is_stable():
    assert derive_seed(0, 0) == derive_seed(0, 0)
    assert derive_seed(0, 0) != derive_seed(0, 1)
    assert 0 <= derive_seed(2**63, 5) < 2**64
