from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import minimax_ultrametric
from phylotrop.complex import enumerate_maximal_nested_sets
from phylotrop.errors import ParseError, ValidationError
from phylotrop.newick import emit_newick, format_length, parse_newick
from phylotrop.sampler import nni_move, sample_pair, sample_tree
from phylotrop.treespace import (
    EquidistantTree,
    PairMap,
    Ultrametric,
    bhv_geodesic,
    compose,
    decompose,
    from_orthant_point,
    is_ultrametric,
    normalize_u1,
    pair_index,
    pairs,
    subdominant_ultrametric,
    taxa_count,
    to_orthant_point,
    tree_from_point,
)


def test_pair_order():
    assert pairs(4) == [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]
    assert [pair_index(i, j, 5) for i, j in pairs(5)] == list(range(10))
    assert pair_index(3, 1, 4) == 1
    assert taxa_count(10) == 5
    with pytest.raises(ValidationError):
        taxa_count(7)


def test_two_clade_decomposition():
    T = decompose([1, 1, 1, F(2, 3), F(2, 3), F(1, 3)])
    assert T.as_dict() == {frozenset({3, 4}): F(1, 3), frozenset({2, 3, 4}): F(1, 3)}


def test_decompose_is_modulo_ones():
    D = [1, 1, 1, F(2, 3), F(2, 3), F(1, 3)]
    assert decompose([x + 5 for x in D]) == decompose(D)


def test_ultrametric_check():
    assert is_ultrametric([1, 1, 1, F(2, 3), F(2, 3), F(1, 3)]) == (True, None)
    ok, triple = is_ultrametric([1, 2, 3])
    assert not ok and triple == (1, 2, 3)
    with pytest.raises(ValidationError):
        Ultrametric(3, [1, 2, 3])


def test_star_tree():
    T = decompose([1, 1, 1, 1, 1, 1])
    assert T.clades == () and T.max_chain_sum() == 0


def test_compact_space():
    T = EquidistantTree.from_mapping(4, {frozenset({1, 2}): F(1, 2), frozenset({1, 2, 3}): F(1, 2)})
    assert T.in_compact_space()
    assert not EquidistantTree.from_mapping(4, {frozenset({1, 2}): F(3, 4), frozenset({1, 2, 3}): F(1, 2)}).in_compact_space()


def test_u1_representative():
    T = EquidistantTree.from_mapping(4, {frozenset({1, 2}): F(1, 2), frozenset({3, 4}): F(1, 2)})
    assert T.u1_representative().entries == (F(1, 2), 1, 1, 1, 1, F(1, 2))


def test_incompatible_clades_rejected():
    with pytest.raises(ValidationError):
        EquidistantTree(4, ({1, 2}, {2, 3}), (1, 1))
    with pytest.raises(ValidationError):
        EquidistantTree(4, ({1, 2},), (0,))


def test_normalize_u1():
    U = normalize_u1([2, 4, 4])
    assert U.entries == (F(1, 2), 1, 1)
    with pytest.raises(ValidationError):
        normalize_u1([3, 3, 3])
    with pytest.raises(ValidationError):
        normalize_u1([-1, 1, 1])


def test_subdominant_small():
    assert subdominant_ultrametric([3, 2, 1]).entries == (2, 2, 1)


@settings(max_examples=200, deadline=None)
@given(st.integers(3, 6), st.data())
def test_subdominant_matches_minimax(m, data):
    u = data.draw(st.lists(st.integers(0, 9), min_size=m * (m - 1) // 2, max_size=m * (m - 1) // 2))
    got = subdominant_ultrametric(u, m)
    assert list(got.entries) == minimax_ultrametric([F(x) for x in u], m)
    assert all(a <= b for a, b in zip(got.entries, u))
    assert is_ultrametric(got)[0]


# -- Newick ----------------------------------------------------------------------------


def test_parse_balanced():
    T = parse_newick("((1:0.25,2:0.25):0.25,(3:0.25,4:0.25):0.25);")
    assert T.as_dict() == {frozenset({1, 2}): F(1, 2), frozenset({3, 4}): F(1, 2)}


def test_parse_error_offset():
    with pytest.raises(ParseError) as err:
        parse_newick("((1,2;")
    assert err.value.offset == 5


def test_not_equidistant():
    with pytest.raises(ValidationError, match="not equidistant"):
        parse_newick("((1:0.25,2:0.5):0.25,(3:0.25,4:0.25):0.25);")


def test_named_taxa():
    T = parse_newick("((a:1,b:1):1,(c:1,d:1):1);", taxa=["a", "b", "c", "d"])
    assert T.topology == {frozenset({1, 2}), frozenset({3, 4})}


def test_rational_lengths():
    T = parse_newick("((1:1/3,2:1/3):1/6,3:1/2);")
    assert T.as_dict() == {frozenset({1, 2}): F(1, 3)}


def test_format_length():
    assert format_length(F(1, 4)) == "0.25"
    assert format_length(F(1, 3)) == "1/3"
    assert format_length(2) == "2"


def test_emit_canonical():
    text = "((1:0.25,2:0.25):0.25,(3:0.25,4:0.25):0.25);"
    assert emit_newick(parse_newick(text)) == text


@pytest.mark.parametrize("seed", range(100))
def test_round_trips(seed):
    T = sample_tree(int(4 + seed % 7), seed)
    assert parse_newick(emit_newick(T)) == T
    assert decompose(compose(T)) == T
    p, fan = to_orthant_point(T)
    assert tree_from_point(p, fan) == T
    assert from_orthant_point(p, fan) == compose(T)


# -- sampler ---------------------------------------------------------------------------


def test_sampler_deterministic():
    assert sample_tree(8, 5) == sample_tree(8, 5)
    assert sample_pair(6, 1, 3) == sample_pair(6, 1, 3)
    assert sample_pair(6, 1, 3) != sample_pair(6, 1, 4)


@pytest.mark.parametrize("m", [4, 6, 9])
def test_sampler_output_shape(m):
    for seed in range(20):
        T = sample_tree(m, seed)
        assert T.is_binary() and T.in_compact_space()


def test_sampler_covers_all_topologies():
    seen = {sample_tree(4, np.random.default_rng(s)).topology for s in range(10000)}
    assert seen == {frozenset(ns) for ns in enumerate_maximal_nested_sets(4)}


def test_sampler_rejects_small_m():
    with pytest.raises(ValidationError):
        sample_tree(3, 0)


def test_nni_move():
    T = parse_newick("(((1:1,2:1):1,3:2):1,4:3);")
    U = nni_move(T, {1, 2}, 0)
    assert U.is_binary()
    assert len(U.topology & T.topology) == 1
    assert U.topology != nni_move(T, {1, 2}, 1).topology
    with pytest.raises(ValidationError):
        nni_move(T, {3, 4}, 0)


# -- geodesics between trees ----------------------------------------------------------


def test_geodesic_through_star():
    t1 = parse_newick("((1:0.25,2:0.25):0.25,(3:0.25,4:0.25):0.25);")
    t2 = parse_newick("((1:0.25,3:0.25):0.25,(2:0.25,4:0.25):0.25);")
    g, fan = bhv_geodesic(t1, t2)
    assert g.length == pytest.approx(2 * (0.5**2 * 2) ** 0.5)
    assert [tree_from_point(p, fan).clades for p in g.breakpoints] == [()]


@pytest.mark.parametrize("m", [4, 5])
def test_compact_space_is_geodesically_convex(m):
    for k in range(100):
        t1, t2 = sample_pair(m, 11, k)
        g, fan = bhv_geodesic(t1, t2)
        pts = list(g.breakpoints) + [g.point_at(F(j, 7)) for j in range(1, 7)]
        for p in pts:
            coords = dict(p.coords)
            for leaf in range(1, m + 1):
                total = sum(float(x) for r, x in coords.items() if leaf in fan.clade(r))
                assert total <= 1 + 1e-9


def test_pairmap_shift():
    D = PairMap(3, [1, 2, 3])
    assert D.shifted(1) == PairMap(3, [2, 3, 4])
