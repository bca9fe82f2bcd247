import json

import pytest

from weldinv.cli import FAMILY_TABLE, PAIR_TABLES, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_invariant_trefoil_gl23(capsys):
    code, out, _ = run(capsys, "invariant", "--catalog", "T31", "--cm", "gl(2,3)")
    assert code == 0
    assert out.splitlines()[0] == "4320"
    assert "raw_count: 4320" in out


def test_invariant_q1_matches_formula(capsys):
    from oracles import q_formula
    from weldinv.algebra import make_sign_module

    code, out, _ = run(capsys, "invariant", "--catalog", "Q1", "--cm", "sign(3)")
    assert code == 0
    assert int(out.splitlines()[0]) == q_formula(make_sign_module(3), 1)


def test_json_and_text_payloads_agree(capsys):
    _, text, _ = run(capsys, "invariant", "--catalog", "HA", "--cm", "sign(3)")
    _, js, _ = run(capsys, "invariant", "--catalog", "HA", "--cm", "sign(3)", "--json")
    rec = json.loads(js)
    assert str(rec["value"]) == text.splitlines()[0] == "24"
    assert f"raw_count: {rec['raw_count']}" in text


def test_output_is_deterministic(capsys):
    a = run(capsys, "invariant", "--catalog", "K52", "--cm", "gl(2,2)", "--json")
    b = run(capsys, "invariant", "--catalog", "K52", "--cm", "gl(2,2)", "--json")
    assert a == b


def test_invariant_from_file(tmp_path, capsys):
    f = tmp_path / "k.morse"
    f.write_text("braid 2: 1 1\n")
    code, out, _ = run(capsys, "invariant", "--diagram", str(f), "--cm", "sign(3)")
    assert code == 0 and out.splitlines()[0] == "18"


def test_table5_p3(capsys):
    code, out, _ = run(capsys, "table", "5", "--p", "3")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 16
    assert all(line.startswith("PASS") for line in lines)
    got = [int(line.split("got ")[1].split(",")[0]) for line in lines[:8]]
    assert got == [4320, 432, 432, 4320, 432, 432, 4320, 432]


def test_table_mismatch_exit_code(capsys, monkeypatch):
    import weldinv.cli as cli

    bad = dict(cli.PAIR_TABLES)
    knot, arc, cells = bad[1]
    bad[1] = (knot, arc, {**cells, 2: (97, 96)})
    monkeypatch.setattr(cli, "PAIR_TABLES", bad)
    code, out, _ = run(capsys, "table", "1", "--p", "2")
    assert code == 1
    assert out.startswith("FAIL")


def test_table_long_cells_need_flag(capsys):
    code, _, err = run(capsys, "table", "1", "--p", "7")
    assert code == 2
    assert "--long" in err


def test_embedded_tables_cover_all_columns():
    for n, (_, _, cells) in PAIR_TABLES.items():
        assert sorted(cells) == [2, 3, 4, 5, 7]
    assert sorted(FAMILY_TABLE) == [3, 5]


def test_usage_errors(capsys):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "invariant", "--catalog", "T31")[0] == 2
    assert run(capsys, "invariant", "--catalog", "nope", "--cm", "sign(3)")[0] == 2
    assert run(capsys, "invariant", "--catalog", "T31", "--cm", "sign(3)", "--bogus")[0] == 2
    assert run(capsys, "invariant", "--cm", "sign(3)")[0] == 2


def test_resource_cap_exit(capsys):
    code, _, err = run(capsys, "invariant", "--catalog", "T31", "--cm", "gl(3,5)")
    assert code == 3
    assert "cap" in err


def test_naive_cap_exit(capsys, monkeypatch):
    monkeypatch.setenv("WELDINV_ORACLE_CAP", "10")
    code, _, _ = run(capsys, "invariant", "--catalog", "T31", "--cm", "gl(2,3)", "--backend", "naive")
    assert code == 3


def test_fuzz_command(capsys):
    code, out, _ = run(capsys, "fuzz", "--catalog", "H", "--cm", "sign(3)", "--steps", "30", "--seeds", "2")
    assert code == 0
    assert out.count("PASS") == 2


def test_presentation_command(capsys):
    code, out, _ = run(capsys, "presentation", "cm", "--catalog", "L")
    assert code == 0
    assert out.startswith("generators 2")
    code, out, _ = run(capsys, "presentation", "alexp", "--catalog", "T31", "--json")
    assert json.loads(out)["which"] == "alexp"
    assert run(capsys, "presentation", "alexp", "--catalog", "S")[0] == 2


def test_catalog_list(capsys):
    code, out, _ = run(capsys, "catalog-list")
    assert code == 0
    assert "T31" in out.split() and "Q3" in out.split()


def test_group_homs(capsys):
    code, out, _ = run(capsys, "group-homs", "--catalog", "L", "--group", "S3")
    assert code == 0
    assert out.splitlines()[0] == "18"
    assert run(capsys, "group-homs", "--catalog", "L", "--group", "weird")[0] == 2
