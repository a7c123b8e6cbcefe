import random

import pytest
from hypothesis import strategies as st

from cgd.sampling import random_line, random_port_graph
from cgd.rules import XOR_TABLE


def ca_oracle(cells, h=XOR_TABLE, q="0"):
    """Flat-array step of the growing automaton: one output cell per input
    cell, plus one extra cell on the right."""
    left = [q] + list(cells)
    right = list(cells) + [q]
    return [h[(a, b)] for a, b in zip(left, right)]


@st.composite
def port_graphs(draw, max_n=6, pi=2, sigma=("0", "1"), wiring="all"):
    seed = draw(st.integers(0, 2**32 - 1))
    n = draw(st.integers(0, max_n))
    rng = random.Random(seed)
    return random_port_graph(rng, n, sigma, pi, rng.random(), wiring=wiring)


@st.composite
def line_graphs(draw, max_n=12):
    cells = draw(st.lists(st.sampled_from("01"), min_size=1, max_size=max_n))
    from cgd.generators import line

    return line(cells)


@pytest.fixture
def rng():
    return random.Random(1234)
