"""Propagation + linear algebra backend.

G-labels: the unknowns are bound in birth order.  A level whose unknown is
pinned down by a constraint (typical for the extra extrema of rotated
crossings) is solved instead of enumerated.  Enumeration is vectorised: a
batch of partial assignments is expanded by every candidate value at once and
filtered with numpy.

E-labels: for each surviving G-assignment the E-relations are linear.  They
are swept bottom to top with dense coefficient rows; any relation that has an
invertible coefficient block is used immediately to eliminate an unknown, and
the few remaining relations are counted with the Smith normal form.
"""

import numpy as np

from ..algebra.groups import matrix_inverse_mod
from ..algebra.linalg import count_solutions_mod
from ..diagram.events import BIRTH, CROSS, DEATH, ENDD, ENDU, VERTEX

BATCH_ELEMENTS = 1 << 23


class _Step:
    """One unknown of the schedule.

    mode 'enum': try every group element; 'solve': the unknown is the
    unwrapped value of ``other`` through ``chain``; 'transport': some node
    w (a chain ``wchain`` applied to the unknown) satisfies
    w^eps z w^-eps = (``other`` unwrapped through ``chain``).
    """

    __slots__ = ("mode", "unknown", "var_node", "chain", "other", "eps", "z", "wchain",
                 "pre", "checks", "post")

    def __init__(self, mode, unknown, var_node, chain=None, other=None, eps=0, z=None, wchain=None):
        self.mode = mode
        self.unknown = unknown
        self.var_node = var_node
        self.chain = chain
        self.other = other
        self.eps = eps
        self.z = z
        self.wchain = wchain
        self.pre = []  # nodes needed by the checks
        self.checks = []
        self.post = []  # remaining newly computable nodes


class _Plan:
    """Greedy schedule for the G-search.

    Preference order at every step: an unknown that some constraint
    determines outright (one side is a chain of known conjugations applied to
    the unknown, the other side known); then an unknown whose chain appears
    as a conjugator between known elements, which confines it to a coset of a
    centralizer; then the unknown that completes the most constraints,
    earliest birth first.  Constraints are checked as soon as both sides can
    be evaluated.
    """

    def __init__(self, problem):
        self.problem = problem
        nodes = problem.g_nodes
        U = problem.n_g_unknowns
        self.U = U
        self.n_nodes = len(nodes)
        var_node = [None] * U
        varset = []
        for i, node in enumerate(nodes):
            if node[0] == "var":
                var_node[node[1]] = i
                varset.append(1 << node[1])
            else:
                varset.append(varset[node[1]] | varset[node[3]])
        known = [False] * len(nodes)
        bound_mask = 0
        pending = [(a, b) for a, b, _ in problem.g_constraints if a != b]
        steps = []
        for _ in range(U):
            step = self._find(pending, known, var_node, "solve")
            if step is None and steps:
                step = self._find(pending, known, var_node, "transport")
            if step is None:
                score = {}
                for a, b in pending:
                    rem = (varset[a] | varset[b]) & ~bound_mask
                    if rem and rem & (rem - 1) == 0:
                        u = rem.bit_length() - 1
                        score[u] = score.get(u, 0) + 1
                if score:
                    u = min(score, key=lambda v: (-score[v], v))
                else:
                    free = ~bound_mask
                    u = (free & -free).bit_length() - 1
                step = _Step("enum", u, var_node[u])
            bound_mask |= 1 << step.unknown
            known[step.var_node] = True
            new = []
            for i, node in enumerate(nodes):
                if not known[i] and node[0] == "conj" and known[node[1]] and known[node[3]]:
                    known[i] = True
                    new.append(i)
            still = []
            for a, b in pending:
                if known[a] and known[b]:
                    step.checks.append((a, b))
                else:
                    still.append((a, b))
            pending = still
            need = set()
            stack = [x for ab in step.checks for x in ab]
            newset = set(new)
            while stack:
                n = stack.pop()
                if n in newset and n not in need:
                    need.add(n)
                    stack.extend((nodes[n][1], nodes[n][3]))
            step.pre = [n for n in new if n in need]
            step.post = [n for n in new if n not in need]
            steps.append(step)
        self.steps = steps
        self.w_nodes = [(c.w_node, c.eps) for c in problem.crossings if not c.virtual]

    def _find(self, pending, known, var_node, mode):
        for a, b in pending:
            for x, y in ((a, b), (b, a)):
                if not known[y]:
                    continue
                if mode == "solve":
                    found = self._chain(x, known)
                    if found is not None:
                        u, chain = found
                        return _Step("solve", u, var_node[u], chain, y)
                else:
                    found = self._transport(x, known)
                    if found is not None:
                        u, chain, eps, z, wchain = found
                        return _Step("transport", u, var_node[u], chain, y, eps, z, wchain)
        return None

    def _transport(self, n, known):
        nodes = self.problem.g_nodes
        chain = []
        while True:
            if known[n]:
                return None
            node = nodes[n]
            if node[0] == "var":
                return None
            _, w, eps, x = node
            if known[w] and not known[x]:
                chain.append((w, eps))
                n = x
            elif not known[w] and known[x]:
                inner = self._chain(w, known)
                if inner is None:
                    return None
                return inner[0], chain, eps, x, inner[1]
            else:
                return None

    def _chain(self, n, known):
        """(unknown, chain) if node n is w1^e1 (... var(u) ...) w1^-e1 with
        every conjugator known and u unbound."""
        nodes = self.problem.g_nodes
        chain = []
        while True:
            if known[n]:
                return None
            node = nodes[n]
            if node[0] == "var":
                return node[1], chain
            _, w, eps, x = node
            if not known[w]:
                return None
            chain.append((w, eps))
            n = x


class _Search:
    def __init__(self, plan, cm, candidates0, weights0):
        self.plan = plan
        self.cm = cm
        self.G = cm.G
        self.mul = cm.G.table
        self.inv = cm.G.inverse
        self.candidates0 = candidates0
        self.weights0 = weights0
        self.total = 0
        self.branches = 0
        self.e_cache = {}
        self.e_trivial = cm.E.order == 1

    def run(self):
        plan = self.plan
        vals = np.zeros((1, plan.n_nodes), dtype=np.int32)
        weight = np.ones(1, dtype=np.int64)
        self._level(0, vals, weight)
        return self.total

    def _conj(self, w, eps, x):
        if eps == 1:
            return self.mul[self.mul[w, x], self.inv[w]]
        return self.mul[self.mul[self.inv[w], x], w]

    def _complete(self, step, vals, weight):
        nodes = self.plan.problem.g_nodes
        for n in step.pre:
            _, w, eps, x = nodes[n]
            vals[:, n] = self._conj(vals[:, w], eps, vals[:, x])
        if step.checks:
            mask = np.ones(vals.shape[0], dtype=bool)
            for a, b in step.checks:
                mask &= vals[:, a] == vals[:, b]
            if not mask.all():
                vals = vals[mask]
                weight = weight[mask]
        for n in step.post:
            _, w, eps, x = nodes[n]
            vals[:, n] = self._conj(vals[:, w], eps, vals[:, x])
        return vals, weight

    def _level(self, s, vals, weight):
        plan = self.plan
        if vals.shape[0] == 0:
            return
        if s == len(plan.steps):
            self._finish(vals, weight)
            return
        step = plan.steps[s]
        if step.mode == "solve":
            vals[:, step.var_node] = self._unwrap(step, vals)
            vals, weight = self._complete(step, vals, weight)
            self._level(s + 1, vals, weight)
            return
        if step.mode == "transport":
            self._transport(s, step, vals, weight)
            return
        if s == 0:
            cands, cw = self.candidates0, self.weights0
        else:
            cands = np.arange(self.G.order, dtype=np.int32)
            cw = None
        nc = len(cands)
        B = vals.shape[0]
        chunk = max(1, BATCH_ELEMENTS // max(1, nc * plan.n_nodes))
        for start in range(0, B, chunk):
            sub = vals[start:start + chunk]
            sw = weight[start:start + chunk]
            b = sub.shape[0]
            ex = np.repeat(sub, nc, axis=0)
            ex[:, step.var_node] = np.tile(cands, b)
            ew = np.repeat(sw, nc)
            if cw is not None:
                ew = ew * np.tile(cw, b)
            ex, ew = self._complete(step, ex, ew)
            self._level(s + 1, ex, ew)

    def _unwrap(self, step, vals):
        t = vals[:, step.other]
        for w, eps in step.chain:
            # undo w^eps (.) w^-eps
            t = self._conj(vals[:, w], -eps, t)
        return t

    def _transport(self, s, step, vals, weight):
        cls, a, cents = self.G.transversal()
        mul, inv = self.mul, self.inv
        target = self._unwrap(step, vals)
        z = vals[:, step.z]
        # u^eps z u^-eps = target; solve for h = u^eps first
        same = cls[z] == cls[target]
        vals, weight, z, target = vals[same], weight[same], z[same], target[same]
        if vals.shape[0] == 0:
            return
        zc = cls[z]
        for c in np.unique(zc):
            rows = np.flatnonzero(zc == c)
            C = cents[c]
            nc = len(C)
            chunk = max(1, BATCH_ELEMENTS // max(1, nc * self.plan.n_nodes))
            for start in range(0, rows.size, chunk):
                r = rows[start:start + chunk]
                h = mul[mul[a[target[r]][:, None], C[None, :]], inv[a[z[r]]][:, None]].ravel()
                u = h if step.eps == 1 else inv[h]
                ex = np.repeat(vals[r], nc, axis=0)
                for w2, e2 in step.wchain:
                    u = self._conj(ex[:, w2], -e2, u)
                ex[:, step.var_node] = u
                ew = np.repeat(weight[r], nc)
                ex, ew = self._complete(step, ex, ew)
                self._level(s + 1, ex, ew)

    def _finish(self, vals, weight):
        self.branches += vals.shape[0]
        if self.e_trivial:
            self.total += int(weight.sum())
            return
        if self.plan.w_nodes:
            cols = []
            for n, eps in self.plan.w_nodes:
                w = vals[:, n]
                cols.append(w if eps == 1 else self.inv[w])
            Wmat = np.stack(cols, axis=1).astype(np.int32)
        else:
            Wmat = np.zeros((vals.shape[0], 0), dtype=np.int32)
        cache = self.e_cache
        total = 0
        for row, wt in zip(Wmat, weight.tolist()):
            key = row.tobytes()
            c = cache.get(key)
            if c is None:
                c = e_solution_count(self.plan.problem, row, self.cm)
                cache[key] = c
            total += wt * c
        self.total += total


def _block_inverse(B, m):
    k = B.shape[0]
    if k == 1:
        return np.array([[pow(int(B[0, 0]), -1, m)]], dtype=np.int64)
    if k == 2:
        a, b, c, d = (int(x) for x in B.ravel())
        dinv = pow((a * d - b * c) % m, -1, m)
        return (np.array([[d, -b], [-c, a]], dtype=np.int64) * dinv) % m
    return np.array(matrix_inverse_mod(B.tolist(), m), dtype=np.int64)


def _pivot(eq, k, m, alive):
    """Index of the last unknown whose coefficient block is invertible."""
    K = eq.shape[1] // k
    if k == 1:
        row = eq[0]
        units = np.gcd(row, m) == 1
        units &= row != 0
    else:
        blocks = eq.reshape(k, K, k).transpose(1, 0, 2)
        if k == 2:
            det = (blocks[:, 0, 0] * blocks[:, 1, 1] - blocks[:, 0, 1] * blocks[:, 1, 0]) % m
        else:
            det = np.array([int(round(np.linalg.det(b))) % m for b in blocks])
        units = (np.gcd(det, m) == 1) & blocks.reshape(K, -1).any(axis=1)
    units &= alive
    idx = np.flatnonzero(units)
    return int(idx[-1]) if idx.size else None


def e_solution_count(problem, Wrow, cm):
    """Number of E-labellings for a fixed G-labelling.

    ``Wrow`` holds the group element W of every classical crossing in sweep
    order.
    """
    d = problem.diagram
    tr = d.trace
    m, k = cm.E.m, cm.E.k
    act = cm.action
    K = problem.e_unknown_count
    cols = k * K
    ident = np.eye(k, dtype=np.int64)
    alive = np.ones(K, dtype=bool)
    labels = {}
    hard = []
    next_unknown = [0]

    def fresh():
        j = next_unknown[0]
        next_unknown[0] += 1
        L = np.zeros((k, cols), dtype=np.int64)
        L[:, j * k:(j + 1) * k] = ident
        return L

    def relation(eq):
        eq %= m
        if not eq.any():
            return
        j = _pivot(eq, k, m, alive)
        if j is None:
            hard.append(eq)
            return
        B = eq[:, j * k:(j + 1) * k]
        S = (_block_inverse(B, m) @ eq) % m
        sl = slice(j * k, (j + 1) * k)
        for s, L in labels.items():
            blk = L[:, sl]
            if blk.any():
                labels[s] = (L - blk @ S) % m
        for idx, H in enumerate(hard):
            blk = H[:, sl]
            if blk.any():
                hard[idx] = (H - blk @ S) % m
        alive[j] = False

    ci = 0
    for i, ev in enumerate(d.events):
        ins, outs = tr.seg_in[i], tr.seg_out[i]
        kind = ev.kind
        if kind == BIRTH:
            L = fresh()
            labels[outs[0]] = L
            labels[outs[1]] = (-L) % m
        elif kind == DEATH:
            eq = labels.pop(ins[0]) + labels.pop(ins[1])
            relation(eq)
        elif kind == ENDD:
            labels[outs[0]] = np.zeros((k, cols), dtype=np.int64)
        elif kind == ENDU:
            relation(labels.pop(ins[0]))
        elif kind == VERTEX:
            flux = np.zeros((k, cols), dtype=np.int64)
            for s in ins:
                flux = flux + labels.pop(s)
            if outs:
                for s in outs[:-1]:
                    L = fresh()
                    labels[s] = L
                    flux = flux - L
                labels[outs[-1]] = flux % m
            else:
                relation(flux)
        elif kind == CROSS:
            a, b = labels.pop(ins[0]), labels.pop(ins[1])
            if ev.sign == "v":
                labels[outs[0]], labels[outs[1]] = b, a
            else:
                W = act[int(Wrow[ci])]
                ci += 1
                if ev.sign == "+":
                    o, u, o_out, u_out = a, b, outs[1], outs[0]
                else:
                    o, u, o_out, u_out = b, a, outs[0], outs[1]
                Wu = (W @ u) % m
                labels[u_out] = Wu
                labels[o_out] = (o + u - Wu) % m
    n_alive = int(alive.sum())
    if not hard:
        return m ** (k * n_alive)
    keep = np.repeat(alive, k)
    A = np.concatenate(hard, axis=0)[:, keep]
    return count_solutions_mod(A.tolist(), None, m, k * n_alive)


def _worker(args):
    plan, cm, cands, weights = args
    s = _Search(plan, cm, cands, weights)
    s.run()
    return s.total, s.branches


def count_fast(problem, conjugacy_reduction=True, workers=1, stats=None):
    plan = _Plan(problem)
    cm = problem.cm
    G = cm.G
    if conjugacy_reduction and plan.U:
        reps = G.conjugacy_classes
        cands = np.array([r for r, _ in reps], dtype=np.int32)
        weights = np.array([s for _, s in reps], dtype=np.int64)
    else:
        cands = np.arange(G.order, dtype=np.int32)
        weights = None
    if workers and workers > 1 and plan.U and len(cands) > 1:
        from concurrent.futures import ProcessPoolExecutor

        parts = np.array_split(np.arange(len(cands)), min(workers, len(cands)))
        jobs = [(plan, cm, cands[p], None if weights is None else weights[p]) for p in parts if p.size]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_worker, jobs))
        total = sum(r[0] for r in results)
        branches = sum(r[1] for r in results)
    else:
        s = _Search(plan, cm, cands, weights)
        total = s.run()
        branches = s.branches
    if stats is not None:
        stats["branches"] = branches
    return total
