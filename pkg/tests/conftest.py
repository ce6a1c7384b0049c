import hypothesis.strategies as st
from hypothesis import HealthCheck, settings

from lightspan.graph import build_graph

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@st.composite
def connected_edges(draw, min_n=2, max_n=10, weights=(1, 2, 3, 5, 8), integral=True):
    """Random spanning tree plus extra edges; returns (n, edges)."""
    n = draw(st.integers(min_n, max_n))
    w = st.sampled_from(weights) if integral else st.floats(0.1, 10.0, allow_nan=False)
    edges = []
    for v in range(1, n):
        edges.append((draw(st.integers(0, v - 1)), v, float(draw(w))))
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    extra = draw(st.lists(st.sampled_from(pairs), max_size=2 * n, unique=True)) if pairs else []
    edges += [(a, b, float(draw(w))) for a, b in extra]
    return n, edges


@st.composite
def graphs(draw, **kw):
    n, edges = draw(connected_edges(**kw))
    return build_graph(n, edges)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for num in sorted(results):
            terminalreporter.write_line(results[num])
