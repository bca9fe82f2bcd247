import random

import pytest

from weldinv.algebra import make_gl_module, make_sign_module
from weldinv.colouring import invariant
from weldinv.diagram import (
    BACKWARD,
    FORWARD,
    GRAPH_MOVES,
    MoveError,
    MoveKind,
    add_handle,
    apply_move,
    braid_diagram,
    catalog,
    enumerate_sites,
    move_kinds_for,
    random_equivalent,
    validate,
)
from weldinv.diagram.moves import _FAMILIES

A = make_sign_module(3)
CMS = [A, make_gl_module(2, 2), make_gl_module(2, 3)]


def values(d, cms=CMS):
    return [invariant(d, cm).value for cm in cms]


def test_forbidden_moves_are_not_kinds():
    for name in ("F2", "F_2", "forbidden"):
        with pytest.raises(MoveError):
            MoveKind.parse(name)
    assert "F2" not in {k.value for k in MoveKind}


def test_parse_kind_names():
    assert MoveKind.parse("R3") is MoveKind.R3
    assert MoveKind.parse("GraphMove4") is MoveKind.GRAPH_MOVE_4
    assert len(GRAPH_MOVES) == 7


def test_r2_insert_on_unknot():
    d = catalog("O")
    sites = enumerate_sites(d, MoveKind.R2)
    assert sites
    e = apply_move(d, MoveKind.R2, sites[0])
    assert sum(1 for ev in e.events if ev.classical) == 2
    assert e.n_components == 1
    assert validate(e) == []


def test_r3_sites():
    assert enumerate_sites(catalog("O"), MoveKind.R3) == []
    assert enumerate_sites(catalog("O"), MoveKind.R3, BACKWARD) == []
    # a 3-braid closure carrying the braid relation
    d = braid_diagram(3, [1, 2, 1, 1, 2, 2])
    sites = enumerate_sites(d, MoveKind.R3)
    assert sites
    e = apply_move(d, MoveKind.R3, sites[0])
    assert values(e) == values(d)
    assert apply_move(e, MoveKind.R3, sites[0], BACKWARD) == d


def test_r3_reachable_on_trefoil_after_r2():
    # the trefoil braid has no triangle, an R2 insertion on a third strand creates one
    d = catalog("T31")
    found = False
    for kind in (MoveKind.R2,):
        for site in enumerate_sites(d, kind):
            e = apply_move(d, kind, site)
            for k2 in (MoveKind.YETTER_EXCHANGE, MoveKind.YETTER_CROSS_SLIDE):
                for s2 in enumerate_sites(e, k2)[:3]:
                    f = apply_move(e, k2, s2)
                    if enumerate_sites(f, MoveKind.R3) or enumerate_sites(f, MoveKind.R3, BACKWARD):
                        found = True
                        break
            if found or enumerate_sites(e, MoveKind.R3) or enumerate_sites(e, MoveKind.R3, BACKWARD):
                found = True
                break
    assert found


@pytest.mark.parametrize("word", [
    [1, 2, "v1", 2, 2, -1],
    [-1, "v2", 1, 1, 2, 2],
    ["v1", -2, -1, 1, 1, 2],
])
def test_f1_redex_preserves_counts(word):
    d = braid_diagram(3, word)
    sites = enumerate_sites(d, MoveKind.F1)
    assert sites
    e = apply_move(d, MoveKind.F1, sites[0])
    assert e != d
    assert values(e) == values(d)
    assert apply_move(e, MoveKind.F1, sites[0], BACKWARD) == d


def test_f1_needs_the_outside_strand_over():
    for word in ([-1, -2, "v1"], ["v1", 2, 1]):
        assert enumerate_sites(braid_diagram(3, word), MoveKind.F1) == []


@pytest.mark.parametrize("word", [[1, "v2", "v1", 1, 2], ["v1", 2, "v1", 2, 2]])
def test_mixed_redex(word):
    d = braid_diagram(3, word)
    sites = enumerate_sites(d, MoveKind.MIXED)
    assert sites
    e = apply_move(d, MoveKind.MIXED, sites[0])
    assert values(e) == values(d)


def test_virtual_moves_and_kinks():
    d = catalog("H")
    for kind in (MoveKind.VR1, MoveKind.VR2, MoveKind.R1):
        sites = enumerate_sites(d, kind)
        e = apply_move(d, kind, sites[len(sites) // 2])
        back = enumerate_sites(e, kind, BACKWARD)
        assert back
        assert values(e) == values(d)


def test_reverse_returns_original():
    d = catalog("T31")
    for kind in (MoveKind.R1, MoveKind.R2, MoveKind.VR2, MoveKind.YETTER_CANCEL):
        site = enumerate_sites(d, kind)[0]
        e = apply_move(d, kind, site)
        i, p, par = site
        assert apply_move(e, kind, (i, p, par), BACKWARD) == d


def test_inapplicable_site_raises():
    d = catalog("T31")
    with pytest.raises(MoveError):
        apply_move(d, MoveKind.R3, (0, 0, ("L", "L", "L")))
    with pytest.raises(MoveError):
        apply_move(d, MoveKind.ARC_END_SLIDE, (0, 0, ()))
    with pytest.raises(MoveError):
        apply_move(d, MoveKind.R2, "junk")


def _all_candidate_sites(d, kind):
    params = [()] if kind is MoveKind.YETTER_EXCHANGE else [tuple(x) for x in _FAMILIES[kind].params(d)]
    width = max(len(lev) for lev in d.trace.levels)
    for i in range(len(d.events) + 1):
        for p in range(width + 1):
            for par in params:
                yield (i, p, par)


@pytest.mark.parametrize("name", ["HA", "L", "T31arc"])
def test_enumerate_sites_is_success_set(name):
    d = catalog(name)
    for kind in move_kinds_for(d):
        for direction in (FORWARD, BACKWARD):
            ok = []
            for site in _all_candidate_sites(d, kind):
                try:
                    apply_move(d, kind, site, direction)
                except MoveError:
                    continue
                ok.append(site)
            assert sorted(ok, key=repr) == sorted(enumerate_sites(d, kind, direction), key=repr), (kind, direction)


def test_enumerate_sites_success_set_on_graph():
    d = add_handle(catalog("HA"), simplify=False)
    for kind in GRAPH_MOVES:
        for direction in (FORWARD, BACKWARD):
            ok = []
            for site in _all_candidate_sites(d, kind):
                try:
                    apply_move(d, kind, site, direction)
                except MoveError:
                    continue
                ok.append(site)
            assert sorted(ok, key=repr) == sorted(enumerate_sites(d, kind, direction), key=repr)


def test_enumerate_sites_deterministic():
    d = catalog("K52")
    assert enumerate_sites(d, MoveKind.R2) == enumerate_sites(d, MoveKind.R2)


def test_thousand_random_moves_keep_validity():
    rng = random.Random(7)
    names = ["O", "L", "H", "HA", "T31", "T31arc", "F41", "Q2", "VA"]
    graphs = [add_handle(catalog("HA"), simplify=False), add_handle(catalog("T31"), simplify=False)]
    pool = [catalog(n) for n in names] + graphs
    applied = 0
    while applied < 1000:
        d = rng.choice(pool)
        d = random_equivalent(d, rng.randrange(4), seed=rng.randrange(10 ** 6))
        kinds = move_kinds_for(d)
        kind = rng.choice(kinds)
        direction = rng.choice((FORWARD, BACKWARD))
        sites = enumerate_sites(d, kind, direction)
        if not sites:
            continue
        e = apply_move(d, kind, rng.choice(sites), direction)
        assert validate(e) == [], (kind, direction)
        assert e.n_components == d.n_components
        assert e.kind == d.kind
        applied += 1


def test_random_equivalent_zero_steps():
    d = catalog("K51")
    assert random_equivalent(d, 0, seed=5) == d


def test_random_equivalent_reproducible():
    d = catalog("T31arc")
    assert random_equivalent(d, 50, seed=3) == random_equivalent(d, 50, seed=3)


def test_random_equivalent_hopf_link():
    d = random_equivalent(catalog("H"), 200, seed=1)
    assert invariant(d, A).value == 18


def test_random_equivalent_trefoil_arc():
    d = random_equivalent(catalog("T31arc"), 200, seed=2)
    assert d.kind == "Arc"
    assert invariant(d, A).value == 12


def test_graph_moves_preserve_invariant_on_handle():
    # walks restricted to graph moves and exchanges starting from the bubble
    d0 = add_handle(catalog("HA"), simplify=False)
    kinds = list(GRAPH_MOVES) + [MoveKind.YETTER_EXCHANGE]
    base = values(d0)
    assert base[0] == 24
    for seed in range(4):
        d = random_equivalent(d0, 30, seed=seed, kinds=kinds)
        assert d.kind == "Graph"
        assert values(d) == base


def test_each_graph_move_kind_occurs_and_preserves():
    d = add_handle(catalog("HA"), simplify=False)
    base = values(d)
    seen = set()
    rng = random.Random(11)
    for _ in range(150):
        d = random_equivalent(d, 1, seed=rng.randrange(10 ** 6))
        for kind in GRAPH_MOVES:
            for direction in (FORWARD, BACKWARD):
                sites = enumerate_sites(d, kind, direction)
                if sites and (kind, direction) not in seen:
                    e = apply_move(d, kind, sites[0], direction)
                    assert values(e) == base, (kind, direction)
                    seen.add((kind, direction))
    assert {k for k, _ in seen} == set(GRAPH_MOVES)
