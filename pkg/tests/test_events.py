import pytest

from weldinv.diagram import (
    CROSS,
    NEG,
    POS,
    VIRT,
    Birth,
    Cross,
    Death,
    EndDown,
    EndUp,
    MorseDiagram,
    ParseError,
    Vertex,
    canonicalize,
    catalog,
    mirror,
    parse_morse,
    serialize,
    validate,
)
from weldinv.algebra import make_sign_module
from weldinv.colouring import invariant

A = make_sign_module(3)


def test_parse_unknot():
    d = parse_morse("birth 0\ndeath 0")
    assert d.kind == "Knot"
    assert d.n_components == 1


def test_parse_unbalanced_sweep():
    with pytest.raises(ParseError, match="sweep ends"):
        parse_morse("birth 0\nbirth 0\ndeath 1")


def test_parse_reports_line_and_column():
    with pytest.raises(ParseError) as err:
        parse_morse("birth 0\n  frob 1\ndeath 0")
    assert err.value.line == 2
    assert err.value.column == 3


def test_parse_comments_and_blank_lines():
    d = parse_morse("# unknot\n\nbirth 0   # cup\ndeath 0\n")
    assert d.events == (Birth(0), Death(0))


def test_braid_shorthand_matches_catalog():
    assert parse_morse("braid 2: 1 1 1") == catalog("T31")
    assert parse_morse("braid 3: 1 -2 1 -2") == catalog("F41")


def test_braid_arc_and_virtual_letters():
    d = parse_morse("braid 2 arc: 1 1 v1")
    assert d == catalog("VA")
    assert d.kind == "Arc"


def test_birth_orientation_token():
    d = parse_morse("birth 0 ru\ndeath 0")
    assert d.birth_orientations == ("right",)
    assert parse_morse("birth 0 lu\ndeath 0").birth_orientations == ("left",)


def test_valence_one_vertex_rejected():
    with pytest.raises(ParseError, match="valence-1"):
        parse_morse("vertex 0 0 1\nendu 0")


@pytest.mark.parametrize("name", ["O", "L", "H", "HA", "T31", "S", "K52arc", "Q3", "VA"])
def test_serialize_round_trip(name):
    d = catalog(name)
    assert parse_morse(serialize(d)) == d


def test_serialize_graph_round_trip():
    from weldinv.diagram import add_handle

    d = add_handle(catalog("HA"), simplify=False)
    text = serialize(d)
    assert "vertex" in text
    assert parse_morse(text) == d


def test_serialize_format_is_exact():
    text = serialize(catalog("L"))
    assert text == "birth 0\nbirth 1\nx+ 0\nxv 0\ndeath 1\ndeath 0\n"


def test_component_labels_round_trip():
    d = parse_morse("birth 0\nbirth 2\ndeath 2\ndeath 0\ncomponent 0 2\ncomponent 1 1")
    assert d.component_labels == (2, 1)
    assert parse_morse(serialize(d)) == d


def test_validate_reports_all_violations():
    d = MorseDiagram((Birth(0), Cross(0, POS), Death(0), Death(0)))
    problems = validate(d)
    assert any("downward" in p for p in problems)
    assert any("underflow" in p for p in problems)


def test_validate_death_of_two_upward_strands():
    d = MorseDiagram((Birth(0), Birth(2), Cross(1, VIRT), Death(0), Death(0)))
    assert any("two upward" in p or "two downward" in p for p in validate(d))


def test_validate_catalog_is_clean():
    assert validate(catalog("S")) == []


def test_canonicalize_idempotent():
    c = catalog("T31")
    assert canonicalize(c) == c
    assert canonicalize(canonicalize(c)) == canonicalize(c)


def test_canonicalize_trefoil_on_downward_strands():
    # the closing strands of the 2-braid carry the crossings, so both
    # strands at every crossing run downward
    raw = MorseDiagram((Birth(0), Birth(1), Cross(2, POS), Cross(2, POS), Cross(2, POS),
                        Death(1), Death(0)))
    assert validate(raw)
    c = canonicalize(raw)
    assert validate(c) == []
    assert c.count("birth") > raw.count("birth")
    assert c.n_components == 1
    assert invariant(c, A).value == invariant(catalog("T31"), A).value == 12


def test_canonicalize_rotates_downward_crossing():
    # a positive kink drawn on an upward/downward pair
    raw = MorseDiagram((Birth(0), Cross(0, POS), Death(0)))
    assert validate(raw)
    c = canonicalize(raw)
    assert validate(c) == []
    assert c.count("birth") > raw.count("birth")
    assert all(e.sign in (POS, NEG) for e in c.events if e.kind == CROSS)
    assert invariant(c, A).value == invariant(catalog("O"), A).value


def test_canonicalize_leaves_virtual_crossings():
    raw = MorseDiagram((Birth(0), Cross(0, VIRT), Death(0)))
    assert canonicalize(raw) == raw


def test_mirror():
    t = catalog("T31")
    m = mirror(t)
    assert [e.sign for e in m.events if e.kind == CROSS] == [NEG] * 3
    assert mirror(m) == t
    lm = mirror(catalog("L"))
    assert [e.sign for e in lm.events if e.kind == CROSS] == [NEG, VIRT]


def test_ends_and_kinds():
    d = MorseDiagram((EndDown(0), EndUp(0)))
    assert validate(d) == []
    assert d.kind == "Arc"
    g = MorseDiagram((Vertex(0, 0, 2), Vertex(0, 2, 0, ())))
    assert g.kind == "Graph"
