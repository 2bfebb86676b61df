import numpy as np
import pytest
from hypothesis import strategies as st

from symtrace.norms import NormSpec


def symmetric_specs(dim):
    specs = [
        NormSpec.euclidean(dim),
        NormSpec.lp(1.5, dim),
        NormSpec.lp(3, dim),
        NormSpec.l1(dim),
        NormSpec.linf(dim),
    ]
    if dim >= 2:
        specs.append(NormSpec.top_k(2, dim))
    return specs


def all_specs(dim):
    specs = symmetric_specs(dim)
    if dim >= 2:
        specs.append(NormSpec.weighted_l2(np.linspace(1.0, 0.5, dim)))
    return specs


@st.composite
def spec_strategy(draw, min_dim=1, max_dim=6):
    dim = draw(st.integers(min_dim, max_dim))
    family = draw(st.sampled_from(["euclidean", "lp", "l1", "linf", "top_k", "weighted_l2"]))
    if family == "lp":
        return NormSpec.lp(draw(st.floats(1.1, 8.0)), dim)
    if family == "top_k":
        return NormSpec.top_k(draw(st.integers(1, dim)), dim)
    if family == "weighted_l2":
        return NormSpec.weighted_l2(draw(st.lists(st.floats(0.2, 5.0), min_size=dim, max_size=dim)))
    return NormSpec(dim, family)


def vectors(dim, lo=-10.0, hi=10.0):
    return st.lists(st.floats(lo, hi), min_size=dim, max_size=dim).map(np.array)


@pytest.fixture
def rng():
    return np.random.default_rng(20261019)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
