from fractions import Fraction

import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from binteam.team_core import BinaryCostPair, JointPrior, ProblemInstance

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@st.composite
def exact_priors(draw):
    counts = draw(st.lists(st.integers(0, 20), min_size=8, max_size=8).filter(lambda c: sum(c) > 0))
    total = sum(counts)
    return JointPrior([Fraction(c, total) for c in counts])


pair_codes = st.integers(0, 255)
chis = st.fractions(min_value=Fraction(1, 20), max_value=8, max_denominator=40)


@st.composite
def exact_instances(draw, codes=pair_codes):
    return ProblemInstance(BinaryCostPair.from_code(draw(codes)), draw(exact_priors()), draw(chis))


def random_exact_instance(rng: np.random.Generator, pair: BinaryCostPair) -> ProblemInstance:
    counts = rng.integers(0, 30, size=8)
    counts[rng.integers(8)] += 1
    chi = Fraction(int(rng.integers(1, 41)), int(rng.integers(1, 11)))
    return ProblemInstance(pair, JointPrior([Fraction(int(c), int(counts.sum())) for c in counts]), chi)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS, key=lambda l: int(l[2:4])):
            terminalreporter.write_line(line)
