"""Finite groups given by tables, (Z_m)^k coefficient groups and automorphic
crossed modules built from them."""

import itertools
import random

import numpy as np

GROUP_SIZE_CAP = 2 ** 16


class GroupTooLarge(ValueError):
    pass


class FiniteGroup:
    """A finite group stored as a dense multiplication table.

    Elements are the indices 0..order-1.  ``labels`` optionally holds a
    human readable object per element (for GL_n these are matrix tuples).
    """

    def __init__(self, table, identity=None, labels=None, name=None):
        table = np.asarray(table, dtype=np.int32)
        n = table.shape[0]
        if table.shape != (n, n):
            raise ValueError("multiplication table must be square")
        if n > GROUP_SIZE_CAP:
            raise GroupTooLarge(f"group of order {n} exceeds cap {GROUP_SIZE_CAP}")
        self.table = table
        self.order = n
        if identity is None:
            rows = [i for i in range(n) if np.array_equal(table[i], np.arange(n))]
            if not rows:
                raise ValueError("table has no identity element")
            identity = rows[0]
        self.identity = int(identity)
        inv = np.full(n, -1, dtype=np.int32)
        hits = np.argwhere(table == self.identity)
        for a, b in hits:
            inv[a] = b
        if (inv < 0).any():
            raise ValueError("table has elements without inverses")
        self.inverse = inv
        self.labels = labels
        self.name = name or f"G{n}"
        self._classes = None

    def mul(self, a, b):
        return int(self.table[a, b])

    def inv(self, a):
        return int(self.inverse[a])

    def conj(self, w, x):
        """w x w^-1"""
        return int(self.table[self.table[w, x], self.inverse[w]])

    def is_abelian(self):
        return bool(np.array_equal(self.table, self.table.T))

    def check_axioms(self, samples=2000, seed=0):
        n = self.order
        rng = random.Random(seed)
        if n ** 3 <= samples:
            triples = itertools.product(range(n), repeat=3)
        else:
            triples = ((rng.randrange(n), rng.randrange(n), rng.randrange(n))
                       for _ in range(samples))
        t = self.table
        for a, b, c in triples:
            if t[t[a, b], c] != t[a, t[b, c]]:
                return False
        for a in range(n):
            if t[a, self.identity] != a or t[self.identity, a] != a:
                return False
            if t[a, self.inverse[a]] != self.identity:
                return False
        return True

    @property
    def conjugacy_classes(self):
        """List of (representative, class size), representatives smallest first."""
        if self._classes is None:
            n = self.order
            seen = np.zeros(n, dtype=bool)
            t, inv = self.table, self.inverse
            classes = []
            for x in range(n):
                if seen[x]:
                    continue
                # orbit of x: g x g^-1 for all g at once
                orbit = np.unique(t[t[np.arange(n), x], inv])
                seen[orbit] = True
                classes.append((x, int(orbit.size)))
            self._classes = classes
        return self._classes

    def transversal(self):
        """(class index per element, a[x], centralizer of each representative).

        a[x] conjugates the representative r of x's class onto x, so the
        elements g with g x g^-1 = t are exactly a[t] C(r) a[x]^-1.
        """
        if getattr(self, "_transversal", None) is None:
            n = self.order
            t, inv = self.table, self.inverse
            cls = np.empty(n, dtype=np.int32)
            a = np.empty(n, dtype=np.int32)
            cents = []
            g = np.arange(n)
            for ci, (rep, _) in enumerate(self.conjugacy_classes):
                images = t[t[g, rep], inv]
                uniq, first = np.unique(images, return_index=True)
                cls[uniq] = ci
                a[uniq] = first
                cents.append(np.flatnonzero(images == rep).astype(np.int32))
            self._transversal = (cls, a, cents)
        return self._transversal

    def class_of(self):
        """Array mapping each element to the index of its class."""
        n = self.order
        out = np.empty(n, dtype=np.int32)
        t, inv = self.table, self.inverse
        for ci, (rep, _) in enumerate(self.conjugacy_classes):
            orbit = np.unique(t[t[np.arange(n), rep], inv])
            out[orbit] = ci
        return out

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"


def symmetric_group(n):
    perms = list(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    # (p*q)(i) = p(q(i))
    table = [[index[tuple(p[q[i]] for i in range(n))] for q in perms] for p in perms]
    return FiniteGroup(table, labels=perms, name=f"S{n}")


def cyclic_group(n):
    table = [[(a + b) % n for b in range(n)] for a in range(n)]
    return FiniteGroup(table, identity=0, labels=list(range(n)), name=f"Z{n}")


class AbelianGroup:
    """E = (Z_m)^k.  Elements are tuples; ``encode`` packs them into ints."""

    def __init__(self, m, k):
        if m < 1 or k < 0:
            raise ValueError("need m >= 1 and k >= 0")
        self.m = int(m)
        self.k = int(k)

    @property
    def order(self):
        return self.m ** self.k

    def elements(self):
        return itertools.product(range(self.m), repeat=self.k)

    def add(self, a, b):
        return tuple((x + y) % self.m for x, y in zip(a, b))

    def neg(self, a):
        return tuple((-x) % self.m for x in a)

    def zero(self):
        return (0,) * self.k

    def encode(self, v):
        c = 0
        for x in v:
            c = c * self.m + int(x) % self.m
        return c

    def decode(self, c):
        out = []
        for _ in range(self.k):
            out.append(c % self.m)
            c //= self.m
        return tuple(reversed(out))

    def __repr__(self):
        return f"AbelianGroup(Z_{self.m}^{self.k})"


def _det_mod(M, m):
    # integer determinant by Bareiss on python ints, then reduce
    M = [[int(x) for x in row] for row in M]
    n = len(M)
    if n == 0:
        return 1 % m
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return (sign * M[n - 1][n - 1]) % m


def matrix_inverse_mod(M, m):
    """Inverse of a square integer matrix modulo m (Gauss-Jordan on units)."""
    n = len(M)
    A = [[int(x) % m for x in row] + [int(i == j) for j in range(n)] for i, row in enumerate(M)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if _unit_inverse(A[r][col], m) is not None:
                piv = r
                break
        if piv is None:
            # fall back to the adjugate: M^-1 = det^-1 adj(M)
            return _inverse_by_adjugate(M, m)
        A[col], A[piv] = A[piv], A[col]
        u = _unit_inverse(A[col][col], m)
        A[col] = [(x * u) % m for x in A[col]]
        for r in range(n):
            if r != col and A[r][col]:
                f = A[r][col]
                A[r] = [(x - f * y) % m for x, y in zip(A[r], A[col])]
    return [row[n:] for row in A]


def _inverse_by_adjugate(M, m):
    n = len(M)
    det = _det_mod(M, m)
    dinv = _unit_inverse(det, m)
    if dinv is None:
        raise ValueError("matrix is not invertible mod m")
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(M) if k != i]
            adj[j][i] = ((-1) ** (i + j)) * _det_mod(minor, m)
    return [[(x * dinv) % m for x in row] for row in adj]


def _unit_inverse(a, m):
    try:
        return pow(int(a), -1, m)
    except ValueError:
        return None


class CrossedModule:
    """Automorphic crossed module: G acting on E=(Z_m)^k by matrices.

    ``action`` is an int64 array of shape (|G|, k, k) with entries mod m.
    """

    def __init__(self, G, E, action, name=None, validate=True):
        self.G = G
        self.E = E
        act = np.asarray(action, dtype=np.int64).reshape(G.order, E.k, E.k) % max(E.m, 1)
        self.action = act
        self.name = name or f"cm({G.name},{E!r})"
        self._enc = None
        if validate:
            problems = self.validate()
            if problems:
                raise ValueError("invalid crossed module: " + "; ".join(problems))

    def validate(self, samples=10000, seed=0):
        G, m, k = self.G, self.E.m, self.E.k
        act = self.action
        problems = []
        if k and not np.array_equal(act[G.identity] % m, np.eye(k, dtype=np.int64) % m):
            problems.append("identity does not act trivially")
        if G.order <= 48:
            pairs = itertools.product(range(G.order), repeat=2)
        else:
            rng = random.Random(seed)
            pairs = ((rng.randrange(G.order), rng.randrange(G.order)) for _ in range(samples))
        for a, b in pairs:
            if not np.array_equal((act[a] @ act[b]) % m, act[G.mul(a, b)]):
                problems.append(f"action is not a homomorphism at ({a},{b})")
                break
        for g in range(G.order):
            if k and _unit_inverse(_det_mod(act[g].tolist(), m), m) is None and m > 1:
                problems.append(f"action of element {g} is not invertible")
                break
        return problems

    @property
    def E_order(self):
        return self.E.order

    def act(self, g, e):
        """g acting on the tuple e."""
        if self.E.k == 0:
            return ()
        v = self.action[g] @ np.asarray(e, dtype=np.int64)
        return tuple(int(x) for x in v % self.E.m)

    def element_tables(self):
        """Integer-coded tables for E: (add[e,f], neg[e], act[g,e]).

        Used by the enumerating oracle; sizes are |E|^2 and |G||E|.
        """
        if self._enc is None:
            E = self.E
            elems = list(E.elements())
            n = len(elems)
            vecs = np.array(elems, dtype=np.int64).reshape(n, E.k)
            weights = np.array([E.m ** (E.k - 1 - i) for i in range(E.k)], dtype=np.int64)
            add = ((vecs[:, None, :] + vecs[None, :, :]) % E.m) @ weights
            neg = ((-vecs) % E.m) @ weights
            # act[g, e] = code of action[g] @ vec[e]
            acted = np.einsum("gij,ej->gei", self.action, vecs) % E.m
            act = acted @ weights
            self._enc = (add.astype(np.int64), neg.astype(np.int64), act.astype(np.int64))
        return self._enc

    def __repr__(self):
        return f"CrossedModule({self.name}, |G|={self.G.order}, |E|={self.E.order})"


def make_gl_module(n, p, cap=GROUP_SIZE_CAP):
    """G = GL_n(Z_p) acting on (Z_p)^n by matrix multiplication.

    p may be composite: invertible means the determinant is a unit mod p.
    """
    if n < 1 or p < 2:
        raise ValueError("need n >= 1 and p >= 2")
    total = p ** (n * n)
    if total > 64 * cap:
        raise GroupTooLarge(f"GL({n},{p}) is too large to tabulate")
    # all matrices, row-major digits base p
    codes = np.arange(total, dtype=np.int64)
    digits = np.empty((total, n * n), dtype=np.int64)
    c = codes.copy()
    for i in range(n * n - 1, -1, -1):
        digits[:, i] = c % p
        c //= p
    mats = digits.reshape(total, n, n)
    dets = np.array([_det_mod(M.tolist(), p) for M in mats]) if n > 2 else \
        (mats[:, 0, 0] * mats[:, 1, 1] - mats[:, 0, 1] * mats[:, 1, 0]) % p if n == 2 else mats[:, 0, 0] % p
    units = np.array([_unit_inverse(int(d), p) is not None for d in range(p)])
    keep = units[dets]
    mats = mats[keep]
    order = mats.shape[0]
    if order > cap:
        raise GroupTooLarge(f"GL({n},{p}) has {order} elements, above cap {cap}")
    lookup = np.full(total, -1, dtype=np.int64)
    weights = p ** np.arange(n * n - 1, -1, -1, dtype=np.int64)
    own_codes = mats.reshape(order, n * n) @ weights
    lookup[own_codes] = np.arange(order)
    table = np.empty((order, order), dtype=np.int32)
    chunk = max(1, 2 ** 22 // max(order, 1))
    for start in range(0, order, chunk):
        block = np.einsum("aij,bjk->abik", mats[start:start + chunk], mats) % p
        table[start:start + chunk] = lookup[block.reshape(-1, n * n) @ weights].reshape(-1, order)
    ident = int(lookup[int(np.eye(n, dtype=np.int64).reshape(-1) @ weights)])
    labels = [tuple(map(tuple, M.tolist())) for M in mats]
    G = FiniteGroup(table, identity=ident, labels=labels, name=f"GL({n},{p})")
    E = AbelianGroup(p, n)
    return CrossedModule(G, E, mats, name=f"gl({n},{p})", validate=order <= 48)


def make_sign_module(m):
    """Z_2 = {1, -1} acting on Z_m by sign."""
    G = FiniteGroup([[0, 1], [1, 0]], identity=0, labels=[1, -1], name="Z2")
    E = AbelianGroup(m, 1)
    action = [[[1 % m]], [[(-1) % m]]]
    return CrossedModule(G, E, action, name=f"sign({m})")


def make_trivial_E(G):
    E = AbelianGroup(1, 0)
    return CrossedModule(G, E, np.zeros((G.order, 0, 0), dtype=np.int64), name=f"trivial({G.name})")


def parse_table_file(text):
    """Read a group (and optionally an action) from the plain table format.

    Grammar, one item per line, ``#`` starts a comment::

        group <n>                      # element count; element 0 is the identity
        row <i>: <n indices>           # products i*j for j = 0..n-1
        modulus <m>                    # optional E part
        rank <k>
        act <i>: <k*k entries>         # row-major matrix of element i
    """
    n = None
    rows = {}
    m, k = None, None
    acts = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        try:
            if head == "group":
                n = int(rest)
            elif head == "modulus":
                m = int(rest)
            elif head == "rank":
                k = int(rest)
            elif head in ("row", "act"):
                idx, _, vals = rest.partition(":")
                entries = [int(x) for x in vals.split()]
                (rows if head == "row" else acts)[int(idx)] = entries
            else:
                raise ValueError(f"unknown keyword {head!r}")
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    if n is None or sorted(rows) != list(range(n)):
        raise ValueError("table file must declare `group n` and rows 0..n-1")
    table = [rows[i] for i in range(n)]
    if any(len(r) != n for r in table):
        raise ValueError("every row needs exactly n entries")
    G = FiniteGroup(table, identity=0, name=f"table{n}")
    if not G.check_axioms():
        raise ValueError("table does not define a group")
    if m is None:
        return G, None
    k = 1 if k is None else k
    if sorted(acts) != list(range(n)) or any(len(a) != k * k for a in acts.values()):
        raise ValueError("need `act i:` lines with k*k entries for every element")
    action = np.array([acts[i] for i in range(n)], dtype=np.int64).reshape(n, k, k)
    return G, CrossedModule(G, AbelianGroup(m, k), action, name=f"table{n}")


def parse_cm_spec(spec, read_file=None):
    """`gl(n,p)`, `sign(m)`, `trivial(file)` or `table(file)`."""
    import re

    spec = spec.strip()
    mt = re.fullmatch(r"gl\(\s*(\d+)\s*,\s*(\d+)\s*\)", spec)
    if mt:
        return make_gl_module(int(mt.group(1)), int(mt.group(2)))
    mt = re.fullmatch(r"sign\(\s*(\d+)\s*\)", spec)
    if mt:
        return make_sign_module(int(mt.group(1)))
    mt = re.fullmatch(r"(trivial|table)\((.+)\)", spec)
    if mt:
        reader = read_file or (lambda path: open(path, encoding="utf-8").read())
        G, cm = parse_table_file(reader(mt.group(2).strip()))
        if mt.group(1) == "trivial":
            return make_trivial_E(G)
        if cm is None:
            raise ValueError("table(file) needs modulus/rank/act lines")
        return cm
    raise ValueError(f"unrecognised crossed module spec {spec!r}")
