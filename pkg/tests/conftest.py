import pytest

# Filled by the acceptance tests, printed at the end of the run.
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)

from entroute.netmodel import LinkParams, Network, NodeParams


def make_net(nodes, links, *, k=1.0, sigma=1e4):
    """Nodes given as ids (defaults for k, sigma) or full tuples; links as (u, v, p, t, gamma)."""
    ns = tuple(NodeParams(n, k, sigma) if isinstance(n, str) else NodeParams(*n) for n in nodes)
    return Network(ns, tuple(LinkParams(*l) for l in links))


@pytest.fixture
def triangle():
    return make_net("abc", [("a", "b", 1.0, 1.0, 1.0), ("b", "c", 1.0, 1.0, 1.0), ("a", "c", 1.0, 1.0, 1.0)])


@pytest.fixture
def claw():
    return make_net("cxyz", [("c", "x", 0.9, 3.0, 0.95), ("c", "y", 0.8, 5.0, 0.9), ("c", "z", 0.7, 2.0, 0.97)])


@pytest.fixture
def witness_net():
    # Frozen counterexample: contracted fidelity ranks s-a-u above s-u, and the
    # order flips once both are extended to v.
    return make_net(
        [("s", 0.96, 1700.0), ("a", 0.76, 1975.0), ("u", 0.98, 1000.0), ("v", 0.88, 950.0)],
        [
            ("s", "a", 0.93, 7.3, 0.98),
            ("a", "u", 0.76, 5.25, 0.99),
            ("s", "u", 0.53, 9.4, 0.92),
            ("u", "v", 0.81, 4.05, 0.91),
        ],
    )
