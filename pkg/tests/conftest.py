from fractions import Fraction

import pytest
from hypothesis import strategies as st

from cmseq.seqcore import DiscreteMeasure


@st.composite
def discrete_measures(draw, max_atoms=4, denom=12):
    n = draw(st.integers(1, max_atoms))
    locs = draw(st.lists(st.integers(0, denom), min_size=n, max_size=n))
    weights = draw(st.lists(st.integers(1, 9), min_size=n, max_size=n))
    total = sum(weights)
    return DiscreteMeasure(tuple((Fraction(l, denom), Fraction(w, total))
                                 for l, w in zip(locs, weights)))


exact_prefixes = st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=20),
                          min_size=1, max_size=26)


@pytest.fixture
def catalan():
    return [1, 1, 2, 5, 14, 42, 132, 429]


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
