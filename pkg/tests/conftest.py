import numpy as np
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from cliquedensity.graph import WeightedGraph

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

densities = st.floats(min_value=0.0, max_value=0.4999, allow_nan=False)


@st.composite
def weighted_graphs(draw, min_n=2, max_n=6, zero_one=False, min_edge=0.0):
    n = draw(st.integers(min_n, max_n))
    raw = draw(st.lists(st.floats(0.0, 1.0), min_size=n, max_size=n))
    raw = np.asarray(raw) + 1e-3
    x = raw / raw.sum()
    k = n * (n - 1) // 2
    if zero_one:
        w = draw(st.lists(st.sampled_from([0.0, 1.0]), min_size=k, max_size=k))
    else:
        w = draw(st.lists(st.floats(min_edge, 1.0), min_size=k, max_size=k))
    a = np.zeros((n, n))
    a[np.triu_indices(n, 1)] = w
    return WeightedGraph(x, a + a.T)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "ACCEPTANCE_LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for k in sorted(lines):
            terminalreporter.write_line(lines[k])
