import itertools

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def words(alphabet="ab", min_size=0, max_size=6):
    return st.lists(st.sampled_from(list(alphabet)), min_size=min_size, max_size=max_size).map(tuple)


def all_words(alphabet, n):
    return [tuple(p) for p in itertools.product(alphabet, repeat=n)]


def brute_subsequence(u, w):
    """Independent oracle: try every index subset of w."""
    return any(tuple(w[i] for i in idx) == tuple(u) for idx in itertools.combinations(range(len(w)), len(u)))


def brute_subwords(w, k):
    return {tuple(w[i] for i in idx) for j in range(k + 1) for idx in itertools.combinations(range(len(w)), j)}


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
