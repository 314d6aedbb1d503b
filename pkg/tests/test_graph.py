import math

import numpy as np
import pytest

from boyd_maxwell.errors import CoxSyntaxError, InputError, LabelRangeError
from boyd_maxwell.graph import (
    INF,
    CoxeterGraph,
    GraphType,
    classify_type,
    corank,
    gram_matrix,
    graph_level,
    is_dotted,
    parse,
    serialize,
)


def test_gram_entries():
    G = CoxeterGraph(2, {(0, 1): 4})
    assert np.allclose(gram_matrix(G), [[1, -math.sqrt(2) / 2], [-math.sqrt(2) / 2, 1]])
    assert np.array_equal(gram_matrix(CoxeterGraph(3)), np.eye(3))
    D = CoxeterGraph(2, {(0, 1): -1.5})
    assert gram_matrix(D)[0, 1] == -1.5
    assert is_dotted(-1.5) and not is_dotted(INF)
    assert gram_matrix(CoxeterGraph(2, {(0, 1): INF}))[0, 1] == -1.0


def test_classify_type():
    assert classify_type(CoxeterGraph(3, {(0, 1): 3, (1, 2): 3})) is GraphType.FINITE
    assert classify_type(CoxeterGraph(3, {(0, 1): 3, (1, 2): 3, (0, 2): 3})) is GraphType.AFFINE
    assert classify_type(CoxeterGraph(3, {(0, 1): 3, (1, 2): 3, (0, 2): 7})) is GraphType.INDEFINITE


def test_classic_finite_and_affine_diagrams():
    e8 = CoxeterGraph(8, {(0, 1): 3, (1, 2): 3, (2, 3): 3, (3, 4): 3, (4, 5): 3, (5, 6): 3, (2, 7): 3})
    assert classify_type(e8) is GraphType.FINITE
    e8_affine = e8.extend({6: 3})
    assert classify_type(e8_affine) is GraphType.AFFINE
    assert corank(e8_affine) == 1
    h4 = CoxeterGraph(4, {(0, 1): 5, (1, 2): 3, (2, 3): 3})
    assert classify_type(h4) is GraphType.FINITE


def test_graph_level_examples():
    assert graph_level(CoxeterGraph(3, {(0, 1): 3, (1, 2): 3}))[0] == 0
    assert graph_level(CoxeterGraph(3, {(0, 1): 3, (1, 2): 3, (0, 2): 7})) == (1, True)
    assert graph_level(CoxeterGraph(4, {(0, 1): 3, (1, 2): 3, (2, 3): INF}))[0] == 2


def test_parse_roundtrip_and_errors():
    G = parse("n 2\nedge 0 1 inf\n")
    assert G.label(0, 1) == INF
    D = parse("n 2\ndedge 0 1 1.5\n")
    assert D.label(0, 1) == -1.5
    H = CoxeterGraph(4, {(0, 1): 3, (1, 2): 5, (2, 3): INF, (0, 3): -1.25})
    assert parse(serialize(H)) == H
    with pytest.raises(LabelRangeError):
        parse("n 2\nedge 0 1 2\n")
    with pytest.raises(LabelRangeError):
        parse("n 2\ndedge 0 1 0.5\n")
    with pytest.raises(CoxSyntaxError):
        parse("edge 0 1 3\n")
    with pytest.raises(CoxSyntaxError):
        parse("n 2\nedge 0 1 3\nedge 1 0 4\n")
    with pytest.raises(InputError):
        parse("n 2\nedge 0 5 3\n")


def test_graph_operations():
    G = CoxeterGraph(3, {(0, 1): 3, (1, 2): 4})
    assert G.neighbors(1) == [0, 2]
    assert G.delete(1).edges == {}
    assert G.subgraph([1, 2]).edges == {(0, 1): 4}
    assert not CoxeterGraph(3, {(0, 1): 3}).is_connected()
    assert CoxeterGraph(3, {(0, 1): 3}).components() == [[0, 1], [2]]
    E = G.extend({2: 5})
    assert E.n == 4 and E.label(2, 3) == 5
    U = G.union(CoxeterGraph(2, {(0, 1): INF}))
    assert U.n == 5 and U.label(3, 4) == INF
