import pytest

from kairos.cli.generators import chain, chains, generate, grid, outstar, random_dag
from kairos.errors import BadParams


def test_chains():
    f = chains(3, 3)
    assert (f.n, len(f.arcs)) == (9, 6)
    assert f.build().graph.height() == 3


def test_chain_and_outstar():
    assert chain(4).arcs == ((0, 1), (1, 2), (2, 3))
    star = outstar(5, m=2)
    assert (star.n, star.m) == (6, 2)
    assert star.build().graph.sinks.bit_count() == 5


def test_grid():
    f = grid(2, 2)
    assert f.arcs == ((0, 1), (0, 2), (1, 3), (2, 3))
    assert f.build().graph.height() == 3
    assert len(grid(3, 4).arcs) == 3 * 3 + 2 * 4


def test_random_is_reproducible():
    assert random_dag(12, 0.3, seed=5) == random_dag(12, 0.3, seed=5)
    assert random_dag(12, 0.0).arcs == ()
    assert len(random_dag(6, 1.0).arcs) == 15


def test_generate_parses_parameters():
    f = generate("chains", ["2", "4"], m=2)
    assert (f.n, f.m) == (8, 2)
    r = generate("random", ["8", "0.5"], m=3, seed=9)
    assert r == random_dag(8, 0.5, m=3, seed=9)


@pytest.mark.parametrize("family,params,m", [
    ("zigzag", ["3"], 2),
    ("chains", ["3"], 2),
    ("chains", ["3", "x"], 2),
    ("random", ["5", "1.5"], 2),
    ("chain", ["-1"], 2),
    ("antichain", ["4"], 0),
])
def test_bad_parameters(family, params, m):
    with pytest.raises(BadParams):
        generate(family, params, m=m)
