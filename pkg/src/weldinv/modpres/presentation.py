"""Module presentations CM(K), Alex(K), Alex'(K) over Laurent rings, their
specialisations into crossed modules with abelian G, and Alexander
polynomials."""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from ..algebra.linalg import count_solutions_mod
from ..diagram.events import BIRTH, CROSS, DEATH, ENDD, ENDU, POS, VERTEX, VIRT, validate
from ..diagram.transform import mirror
from .laurent import LaurentPoly, determinant_bareiss, format_poly


@dataclass(frozen=True)
class LaurentPresentation:
    """Generators 0..n_generators-1 and relations sum_j c_j * g_j = 0.

    ``relations`` is a tuple of rows; a row is a tuple of (generator,
    LaurentPoly) pairs with distinct generators and nonzero entries.
    ``var_component[i]`` is the diagram component carried by variable i.
    """

    n_generators: int
    relations: tuple
    nvars: int
    var_component: tuple = ()

    def __post_init__(self):
        rows = []
        for row in self.relations:
            merged = {}
            for g, c in (row.items() if isinstance(row, dict) else row):
                if not 0 <= g < self.n_generators:
                    raise ValueError(f"relation mentions generator {g} of {self.n_generators}")
                if c.nvars != self.nvars:
                    raise ValueError("coefficient has the wrong number of variables")
                merged[g] = merged.get(g, LaurentPoly.zero(self.nvars)) + c
            rows.append(tuple(sorted((g, c) for g, c in merged.items() if not c.is_zero())))
        object.__setattr__(self, "relations", tuple(rows))
        object.__setattr__(self, "var_component", tuple(self.var_component))

    def matrix(self):
        """Dense relation matrix (rows = relations, columns = generators)."""
        z = LaurentPoly.zero(self.nvars)
        M = [[z] * self.n_generators for _ in self.relations]
        for i, row in enumerate(self.relations):
            for g, c in row:
                M[i][g] = c
        return M

    def eliminate(self):
        """Tietze elimination: repeatedly solve a relation for a generator
        whose coefficient is a unit and substitute it everywhere."""
        rows = [dict(r) for r in self.relations]
        alive = set(range(self.n_generators))
        while True:
            rows = [r for r in rows if r]
            best = None
            for idx, r in enumerate(rows):
                for g, c in r.items():
                    if c.is_unit():
                        key = (len(r), sum(len(x.terms) for x in r.values()), g)
                        if best is None or key < best[0]:
                            best = (key, idx, g)
            if best is None:
                break
            _, idx, g = best
            pivot = rows[idx]
            inv = pivot[g].unit_inverse()
            new_rows = []
            for j, r in enumerate(rows):
                if j == idx:
                    continue
                if g in r:
                    f = r[g] * inv
                    r = dict(r)
                    for h, c in pivot.items():
                        v = r.get(h, LaurentPoly.zero(self.nvars)) - f * c
                        if v.is_zero():
                            r.pop(h, None)
                        else:
                            r[h] = v
                    r.pop(g, None)
                new_rows.append(r)
            rows = new_rows
            alive.discard(g)
        index = {g: i for i, g in enumerate(sorted(alive))}
        rels, seen = [], set()
        for r in rows:
            row = tuple(sorted((index[g], c) for g, c in r.items()))
            neg = tuple((g, -c) for g, c in row)
            if row in seen or neg in seen:
                continue
            seen.add(row)
            rels.append(row)
        rels = tuple(rels)
        return LaurentPresentation(len(index), rels, self.nvars, self.var_component)

    def to_text(self):
        """Plain-text dump, one relation per line, stable ordering."""
        lines = [f"generators {self.n_generators}", f"variables {self.nvars}"]
        if self.var_component:
            lines.append("components " + " ".join(str(c) for c in self.var_component))
        for i, row in enumerate(self.relations):
            terms = [f"({format_poly(c)})*g{g}" for g, c in row]
            lines.append(f"rel {i}: " + (" + ".join(terms) if terms else "0"))
        return "\n".join(lines) + "\n"

    def __str__(self):
        return self.to_text()


# ------------------------------------------------------------ construction

def _component_vars(d, ordering):
    n = d.trace.n_components
    if ordering is None:
        ordering = list(range(n))
    ordering = list(ordering)
    if sorted(ordering) != list(range(n)):
        raise ValueError(f"ordering must be a permutation of the {n} components")
    # variable i carries component ordering[i]
    var_of = {c: i for i, c in enumerate(ordering)}
    return var_of, tuple(ordering)


def _check_input(d, allow_graph=False):
    problems = validate(d)
    if problems:
        raise ValueError("invalid diagram: " + "; ".join(problems))
    if d.count(VERTEX) and not allow_graph:
        raise ValueError("module presentations are defined for knots, links and arcs only")


def _build(d, ordering, crossing_rows, birth_sign, eliminate):
    """Shared sweep: one generator per segment.

    ``crossing_rows(ev, seg ids, vars)`` returns the rows of a classical or
    virtual crossing; births contribute l + birth_sign * r = 0 and deaths
    a + birth_sign * b = 0; free ends are zero.
    """
    _check_input(d)
    var_of, order = _component_vars(d, ordering)
    nv = len(order)
    tr = d.trace
    one = LaurentPoly.const(nv, 1)
    rows = []

    def X(seg):
        return LaurentPoly.var(nv, var_of[tr.seg_component[seg]])

    for i, ev in enumerate(d.events):
        ins, outs = tr.seg_in[i], tr.seg_out[i]
        if ev.kind == BIRTH:
            rows.append({outs[0]: one, outs[1]: one * birth_sign})
        elif ev.kind == DEATH:
            rows.append({ins[0]: one, ins[1]: one * birth_sign})
        elif ev.kind == ENDD:
            rows.append({outs[0]: one})
        elif ev.kind == ENDU:
            rows.append({ins[0]: one})
        elif ev.kind == CROSS:
            rows.extend(crossing_rows(ev, ins, outs, X, one))
    pres = LaurentPresentation(len(tr.seg_up), tuple(rows), nv, order)
    return pres.eliminate() if eliminate else pres


def _merge_rows(*pairs):
    out = {}
    for g, c in pairs:
        out[g] = out.get(g, 0 * c) + c
    return out


def _cm_crossing(ev, ins, outs, X, one):
    l, r = ins
    lo, ro = outs
    if ev.sign == VIRT:
        return [{lo: one, r: -one}, {ro: one, l: -one}]
    if ev.sign == POS:
        # over = left input, W = O^-1
        over, under, over_out, under_out = l, r, ro, lo
        W = X(l).unit_inverse()
    else:
        over, under, over_out, under_out = r, l, lo, ro
        W = X(r)
    return [
        _merge_rows((under_out, one), (under, -W)),
        _merge_rows((over_out, one), (over, -one), (under, -one), (under, W)),
    ]


def _alex_crossing(ev, ins, outs, X, one):
    # Fox derivatives of the right handed Wirtinger relation
    l, r = ins
    lo, ro = outs
    if ev.sign == VIRT:
        return [{lo: one, r: -one}, {ro: one, l: -one}]
    if ev.sign == POS:
        over, under, over_out, under_out = l, r, ro, lo
        O, U = X(l), X(r)
        # under_out = O under + (1 - U) over
        row = _merge_rows((under_out, one), (under, -O), (over, U - one))
    else:
        over, under, over_out, under_out = r, l, lo, ro
        O, U = X(r), X(l)
        Oi = O.unit_inverse()
        # under_out = O^-1 under + O^-1 (U - 1) over
        row = _merge_rows((under_out, one), (under, -Oi), (over, -(Oi * (U - one))))
    return [row, {over_out: one, over: -one}]


def cm_presentation(d, ordering=None, eliminate=True):
    """CM(d): the colouring relations with G abelian, written over the
    Laurent ring in one variable per component."""
    return _build(d, ordering, _cm_crossing, 1, eliminate)


def alex_presentation(d, ordering=None, eliminate=True):
    """Alex(d): one generator per segment, Fox-derivative relations at
    classical crossings, labels pass unchanged through virtual crossings."""
    return _build(d, ordering, _alex_crossing, -1, eliminate)


def braid_shape(d):
    """(n, arc) if ``d`` is laid out as a braid closure: n births (or an end
    plus births), crossings on the first n strands, then the matching deaths.
    Returns None otherwise."""
    ev = d.events
    n = 0
    arc = False
    while n < len(ev):
        e = ev[n]
        if e.kind == BIRTH and e.pos == n and e.orient == (True, False):
            n += 1
        elif n == 0 and e.kind == ENDD and e.pos == 0 and e.orient in ((True,), ()):
            n += 1
            arc = True
        else:
            break
    if n == 0:
        return None
    m = len(ev) - n
    closing = ev[m:]
    if len(closing) != n:
        return None
    for k, e in enumerate(closing):
        pos = n - 1 - k
        if arc and pos == 0:
            if not (e.kind == ENDU and e.pos == 0):
                return None
        elif not (e.kind == DEATH and e.pos == pos):
            return None
    for e in ev[n:m]:
        if e.kind != CROSS or e.pos + 1 >= n:
            return None
    return n, arc


def alex_prime_presentation(d, ordering=None, eliminate=True):
    """Alex'(d) for a diagram laid out as a braid closure.

    Inputs (A, a) on the left and (B, b) on the right.  Positive crossing:
    outputs (B, A b + (1 - B) a) and (A, a).  Negative crossing: outputs
    (B, b) and (A, B^-1 (a + (A - 1) b)).  Virtual crossing: outputs
    (B, A b) and (A, B^-1 a).  Closing strands identify top and bottom.
    """
    _check_input(d)
    shape = braid_shape(d)
    if shape is None:
        raise ValueError("Alex' presentations need a diagram laid out as a braid closure")
    n, arc = shape
    var_of, order = _component_vars(d, ordering)
    nv = len(order)
    tr = d.trace
    one = LaurentPoly.const(nv, 1)

    def X(seg):
        return LaurentPoly.var(nv, var_of[tr.seg_component[seg]])

    rows = []
    events = d.events
    for i, ev in enumerate(events):
        ins, outs = tr.seg_in[i], tr.seg_out[i]
        if ev.kind == BIRTH:
            # the braid strand and its closing strand carry the same label
            rows.append({outs[0]: one, outs[1]: -one})
        elif ev.kind == DEATH:
            rows.append({ins[0]: one, ins[1]: -one})
        elif ev.kind == ENDD:
            rows.append({outs[0]: one})
        elif ev.kind == ENDU:
            rows.append({ins[0]: one})
        elif ev.kind == CROSS:
            a, b = ins
            lo, ro = outs
            A, B = X(a), X(b)
            Bi = B.unit_inverse()
            if ev.sign == POS:
                rows.append(_merge_rows((lo, one), (b, -A), (a, B - one)))
                rows.append({ro: one, a: -one})
            elif ev.sign == VIRT:
                rows.append(_merge_rows((lo, one), (b, -A)))
                rows.append(_merge_rows((ro, one), (a, -Bi)))
            else:
                rows.append({lo: one, b: -one})
                rows.append(_merge_rows((ro, one), (a, -Bi), (b, -(Bi * (A - one)))))
    pres = LaurentPresentation(len(tr.seg_up), tuple(rows), nv, order)
    return pres.eliminate() if eliminate else pres


# ------------------------------------------------------------ specialisation

def _mat_pow(M, k, m, inv):
    base = inv if k < 0 else M
    k = abs(k)
    out = np.eye(M.shape[0], dtype=object)
    for _ in range(k):
        out = (out @ base) % m
    return out


def _specialise_count(args):
    pres, act, act_inv, m, k, assignments = args
    total = 0
    rows_n = len(pres.relations)
    cols = pres.n_generators * k
    for assign in assignments:
        cache = {}

        def mono(exp):
            if exp not in cache:
                M = np.eye(k, dtype=object)
                for i, e in enumerate(exp):
                    if e:
                        M = (M @ _mat_pow(act[assign[i]], e, m, act_inv[assign[i]])) % m
                cache[exp] = M
            return cache[exp]

        A = [[0] * cols for _ in range(rows_n * k)]
        for r, row in enumerate(pres.relations):
            for g, c in row:
                block = np.zeros((k, k), dtype=object)
                for exp, coef in c.terms.items():
                    block = (block + coef * mono(exp)) % m
                for i in range(k):
                    for j in range(k):
                        A[r * k + i][g * k + j] = int(block[i, j])
        total += count_solutions_mod(A, None, m, cols)
    return total


def hom_count(pres, cm, workers=1):
    """Number of crossed-module morphisms from the presented module to cm:
    sum over assignments of the variables to G of the number of E-solutions
    of the specialised relations."""
    G = cm.G
    if not G.is_abelian():
        raise ValueError("hom_count needs a crossed module with abelian G")
    m, k = cm.E.m, cm.E.k
    if k == 0 or m == 1:
        return G.order ** pres.nvars
    from ..algebra.groups import matrix_inverse_mod

    act = [np.array(a.tolist(), dtype=object) for a in cm.action]
    act_inv = [np.array(matrix_inverse_mod(a.tolist(), m), dtype=object) for a in cm.action]
    assignments = list(product(range(G.order), repeat=pres.nvars))
    if workers <= 1 or len(assignments) < 2:
        return _specialise_count((pres, act, act_inv, m, k, assignments))
    chunks = [assignments[i::workers] for i in range(workers)]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        parts = ex.map(_specialise_count, [(pres, act, act_inv, m, k, c) for c in chunks])
        return sum(parts)


def default_family():
    from ..algebra.groups import make_sign_module

    return [make_sign_module(m) for m in range(1, 13)]


def mirror_relation_check(d, family=None):
    """hom counts of CM(d) and Alex'(mirror d) agree on every crossed module
    of the family (sign(m) for m <= 12 by default)."""
    family = default_family() if family is None else family
    cm_p = cm_presentation(d)
    ap = alex_prime_presentation(mirror(d))
    return all(hom_count(cm_p, cm) == hom_count(ap, cm) for cm in family)


# ------------------------------------------------------------ Alexander polynomial

def alexander_polynomial(d):
    """Alexander polynomial of a classical one-component knot diagram,
    normalised to lowest exponent 0 and positive leading coefficient.
    Returned as a one-variable LaurentPoly."""
    _check_input(d)
    if d.kind != "Knot":
        raise ValueError("alexander_polynomial needs a closed knot diagram")
    if any(e.kind == CROSS and e.sign == VIRT for e in d.events):
        raise ValueError("alexander_polynomial needs a classical diagram (no virtual crossings)")
    if d.trace.n_components != 1:
        raise ValueError("alexander_polynomial needs a one-component knot")
    full = alex_presentation(d, eliminate=False)
    # kill one generator, then reduce
    rows = [dict(r) for r in full.relations]
    rows.append({0: LaurentPoly.const(1, 1)})
    pres = LaurentPresentation(full.n_generators, tuple(rows), 1, full.var_component).eliminate()
    M = pres.matrix()
    c = pres.n_generators
    if c == 0:
        return LaurentPoly.const(1, 1)
    r = len(M)
    if r < c:
        return LaurentPoly.zero(1)
    minors = []
    # gcd of the maximal minors; rows beyond c are dependent up to a unit
    from itertools import combinations

    for pick in combinations(range(r), c):
        det = determinant_bareiss([M[i] for i in pick], 1)
        if not det.is_zero():
            minors.append(det)
    if not minors:
        return LaurentPoly.zero(1)
    g = _to_upoly(minors[0])
    for mnr in minors[1:]:
        g = _upoly_gcd(g, _to_upoly(mnr))
    return normalise_alexander(_from_upoly(g))


def normalise_alexander(p):
    """Shift to lowest exponent 0 and make the leading coefficient positive."""
    if p.is_zero():
        return p
    low = min(e[0] for e in p.terms)
    q = p.shift_exponents((-low,))
    if q.leading()[1] < 0:
        q = -q
    return q


def _to_upoly(p):
    low = min(e[0] for e in p.terms)
    high = max(e[0] for e in p.terms)
    coeffs = [0] * (high - low + 1)
    for (e,), c in p.terms.items():
        coeffs[e - low] = c
    return coeffs


def _from_upoly(coeffs):
    return LaurentPoly(1, {(i,): c for i, c in enumerate(coeffs) if c})


def _content(a):
    from math import gcd

    g = 0
    for x in a:
        g = gcd(g, x)
    return g


def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    while a and a[0] == 0:
        a.pop(0)
    return a


def _upoly_gcd(a, b):
    """gcd in Z[X] up to sign and powers of X (primitive Euclid over Q)."""
    from math import gcd

    a, b = _trim(a), _trim(b)
    if not a:
        return b
    if not b:
        return a
    cont = gcd(_content(a), _content(b))
    fa = [Fraction(x) for x in a]
    fb = [Fraction(x) for x in b]
    while any(fb):
        fa, fb = fb, _urem(fa, fb)
        fb = _trim(fb) if any(fb) else []
        if not fb:
            break
    # scale to a primitive integer polynomial
    den = 1
    for x in fa:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fa]
    c = _content(ints)
    ints = [x // c for x in ints]
    return _trim([x * cont for x in ints])


def _urem(a, b):
    a = list(a)
    db = len(b) - 1
    while len(a) - 1 >= db and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        f = a[-1] / b[-1]
        shift = len(a) - 1 - db
        for i, c in enumerate(b):
            a[shift + i] -= f * c
        a.pop()
    return a
