import random

import numpy as np
import pytest
import sympy
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from oracles import count_solutions_by_enumeration, gl_order_by_scan
from weldinv.algebra import (
    AbelianGroup,
    CrossedModule,
    FiniteGroup,
    GroupTooLarge,
    count_solutions_mod,
    cyclic_group,
    invariant_factors,
    make_gl_module,
    make_sign_module,
    make_trivial_E,
    matrix_inverse_mod,
    parse_cm_spec,
    parse_table_file,
    smith_normal_form,
    symmetric_group,
)


@pytest.mark.parametrize("n,p,order", [(2, 2, 6), (2, 3, 48), (2, 4, 96)])
def test_gl_orders(n, p, order):
    assert gl_order_by_scan(n, p) == order
    assert make_gl_module(n, p).G.order == order


def test_gl_order_five():
    assert make_gl_module(2, 5).G.order == 480 == gl_order_by_scan(2, 5)


def test_gl_conjugacy_classes_partition():
    G = make_gl_module(2, 3).G
    classes = G.conjugacy_classes
    assert sum(size for _, size in classes) == G.order
    assert len(classes) == 8


def test_gl_action_is_matrix():
    cm = make_gl_module(2, 3)
    assert cm.validate() == []
    assert cm.action.shape == (48, 2, 2)


def test_group_cap():
    with pytest.raises(GroupTooLarge):
        make_gl_module(3, 5)


def test_sign_modules():
    A = make_sign_module(3)
    assert A.G.order == 2 and A.E.order == 3
    assert A.act(1, (1,)) == (2,)
    assert make_sign_module(2).act(1, (1,)) == (1,)
    assert make_sign_module(1).E.order == 1


def test_trivial_E():
    cm = make_trivial_E(symmetric_group(3))
    assert cm.E.order == 1
    assert cm.validate() == []


def test_group_axioms():
    for G in (symmetric_group(3), symmetric_group(4), cyclic_group(6)):
        assert G.check_axioms()
    assert not symmetric_group(3).is_abelian()
    assert cyclic_group(5).is_abelian()


def test_bad_crossed_module_rejected():
    G = cyclic_group(2)
    with pytest.raises(ValueError):
        # multiplication by 2 on Z_4 is not invertible
        CrossedModule(G, AbelianGroup(4, 1), [[[1]], [[2]]])
    with pytest.raises(ValueError):
        # not a homomorphism: the generator squares to the identity but 2*2 = 4 = -1 mod 5
        CrossedModule(G, AbelianGroup(5, 1), [[[1]], [[2]]])


def test_parse_cm_spec():
    assert parse_cm_spec("gl(2,3)").G.order == 48
    assert parse_cm_spec(" sign( 5 ) ").E.order == 5
    with pytest.raises(ValueError):
        parse_cm_spec("foo(1)")


def test_parse_table_file_round_trip():
    text = ("group 3\nrow 0: 0 1 2\nrow 1: 1 2 0\nrow 2: 2 0 1\n"
            "modulus 7\nrank 1\nact 0: 1\nact 1: 2\nact 2: 4\n")
    G, cm = parse_table_file(text)
    assert G.order == 3
    assert cm.act(1, (1,)) == (2,)
    cm2 = parse_cm_spec("table(x)", read_file=lambda _: text)
    assert cm2.E.order == 7


def test_snf_examples():
    assert invariant_factors([[2, 0], [0, 3]]) == (1, 6)
    assert invariant_factors([[0, 0], [0, 0]]) == (0, 0)
    assert invariant_factors([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == (1, 1, 1)


def test_snf_against_sympy():
    rng = random.Random(3)
    for _ in range(40):
        r, c = rng.randint(1, 4), rng.randint(1, 4)
        A = [[rng.randint(-9, 9) for _ in range(c)] for _ in range(r)]
        res = smith_normal_form(A)
        U, V = np.array(res.U, dtype=object), np.array(res.V, dtype=object)
        D = U.dot(np.array(A, dtype=object)).dot(V)
        k = min(r, c)
        for i in range(r):
            for j in range(c):
                assert D[i, j] == (res.factors[i] if i == j and i < len(res.factors) else 0)
        assert abs(sympy.Matrix(res.U).det()) == 1 and abs(sympy.Matrix(res.V).det()) == 1
        ref = sympy_snf(sympy.Matrix(A), domain=sympy.ZZ)
        ref_diag = sorted(abs(int(ref[i, i])) for i in range(k))
        assert sorted(res.factors[:k]) == ref_diag
        for a, b in zip(res.factors, res.factors[1:]):
            assert b == 0 or (a != 0 and b % a == 0)


def test_count_solutions_examples():
    assert count_solutions_mod([[2]], [0], 4, 1) == 2
    assert count_solutions_mod([], None, 5, 3) == 125
    assert count_solutions_mod([[2]], [1], 4, 1) == 0


def test_count_solutions_against_enumeration():
    rng = random.Random(5)
    for _ in range(60):
        m = rng.choice([2, 3, 4, 6, 8, 9])
        nv = rng.randint(1, 3)
        rows = rng.randint(0, 3)
        A = [[rng.randrange(m) for _ in range(nv)] for _ in range(rows)]
        b = [rng.randrange(m) for _ in range(rows)]
        assert count_solutions_mod(A, b, m, nv) == count_solutions_by_enumeration(A, b, m, nv)
        assert count_solutions_mod(A, None, m, nv) == count_solutions_by_enumeration(A, [0] * rows, m, nv)


def test_matrix_inverse_mod():
    M = [[1, 2], [3, 5]]
    inv = matrix_inverse_mod(M, 4)
    prod = (np.array(M) @ np.array(inv)) % 4
    assert prod.tolist() == [[1, 0], [0, 1]]


def test_finite_group_from_table():
    G = FiniteGroup([[0, 1], [1, 0]])
    assert G.order == 2 and G.identity == 0
