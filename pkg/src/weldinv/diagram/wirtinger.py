"""Knot groups of diagrams and homomorphism counts into finite groups."""

from dataclasses import dataclass

from .events import BIRTH, CROSS, DEATH, POS, VERTEX, VIRT


@dataclass(frozen=True)
class FinitePresentation:
    """Generators 0..n-1; each relation is a word of (generator, +1/-1)
    letters that must evaluate to the identity."""

    n_generators: int
    relations: tuple

    def __post_init__(self):
        rels = tuple(tuple((int(g), int(e)) for g, e in r) for r in self.relations)
        for r in rels:
            for g, e in r:
                if not 0 <= g < self.n_generators or e not in (1, -1):
                    raise ValueError(f"bad letter {(g, e)} for {self.n_generators} generators")
        object.__setattr__(self, "relations", rels)

    def __str__(self):
        names = [_name(i) for i in range(self.n_generators)]

        def word(r):
            if not r:
                return "1"
            return "".join(names[g] + ("" if e == 1 else "^-1") for g, e in r)

        return f"< {', '.join(names)} | {', '.join(word(r) for r in self.relations)} >"

    def simplify(self):
        """Tietze moves: drop trivial relations and eliminate any generator
        that occurs exactly once in some relation."""
        n = self.n_generators
        rels = [_cyclic_reduce(_free_reduce(r)) for r in self.relations]
        alive = list(range(n))
        changed = True
        while changed:
            changed = False
            rels = [r for r in rels if r]
            for idx, r in enumerate(rels):
                counts = {}
                for g, _ in r:
                    counts[g] = counts.get(g, 0) + 1
                solo = [g for g in alive if counts.get(g) == 1]
                if not solo:
                    continue
                g = solo[-1]
                k = next(j for j, (h, _) in enumerate(r) if h == g)
                rotated = r[k:] + r[:k]
                # rotated = g^e w = 1  =>  g = w^-e
                e = rotated[0][1]
                w = rotated[1:]
                value = _inverse(w) if e == 1 else list(w)
                new = []
                for j, s in enumerate(rels):
                    if j == idx:
                        continue
                    out = []
                    for h, f in s:
                        if h == g:
                            out.extend(value if f == 1 else _inverse(value))
                        else:
                            out.append((h, f))
                    new.append(_cyclic_reduce(_free_reduce(out)))
                rels = new
                alive.remove(g)
                changed = True
                break
        # drop duplicate relations (up to cyclic rotation and inversion)
        seen = set()
        uniq = []
        for r in rels:
            key = min(_rotations(r) + _rotations(_inverse(r)))
            if key not in seen:
                seen.add(key)
                uniq.append(r)
        index = {g: i for i, g in enumerate(alive)}
        return FinitePresentation(len(alive), tuple(tuple((index[g], e) for g, e in r) for r in uniq))

    def hom_count(self, G):
        """Number of homomorphisms into the finite group G (backtracking with
        propagation through relations that pin down one generator)."""
        mul, inv = G.table.tolist(), G.inverse.tolist()
        ident = G.identity
        n = self.n_generators
        rels = [list(r) for r in self.relations]
        gens_of = [sorted({g for g, _ in r}) for r in rels]

        def evaluate(word, val):
            x = ident
            for g, e in word:
                y = val[g] if e == 1 else inv[val[g]]
                x = mul[x][y]
            return x

        def solve(val):
            # propagate: any relation with one unknown occurring once
            forced = []
            progress = True
            while progress:
                progress = False
                for r, gs in zip(rels, gens_of):
                    unknown = [g for g in gs if val[g] is None]
                    if not unknown:
                        if evaluate(r, val) != ident:
                            for g in forced:
                                val[g] = None
                            return None
                        continue
                    if len(unknown) != 1:
                        continue
                    g = unknown[0]
                    pos = [j for j, (h, _) in enumerate(r) if h == g]
                    if len(pos) != 1:
                        continue
                    j = pos[0]
                    # a g^e b = 1  =>  g^e = a^-1 b^-1
                    a = evaluate(r[:j], val)
                    b = evaluate(r[j + 1:], val)
                    ge = mul[inv[a]][inv[b]]
                    val[g] = ge if r[j][1] == 1 else inv[ge]
                    forced.append(g)
                    progress = True
            return forced

        def rec(val):
            forced = solve(val)
            if forced is None:
                return 0
            try:
                free = next((g for g in range(n) if val[g] is None), None)
                if free is None:
                    return 1
                total = 0
                for x in range(G.order):
                    val[free] = x
                    total += rec(val)
                val[free] = None
                return total
            finally:
                for g in forced:
                    val[g] = None

        return rec([None] * n)


def _name(i):
    letters = "XYZWVUTS"
    return letters[i] if i < len(letters) else f"x{i}"


def _free_reduce(word):
    out = []
    for g, e in word:
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return out


def _cyclic_reduce(word):
    w = list(word)
    while len(w) >= 2 and w[0][0] == w[-1][0] and w[0][1] == -w[-1][1]:
        w = w[1:-1]
    return tuple(w)


def _inverse(word):
    return [(g, -e) for g, e in reversed(word)]


def _rotations(word):
    w = tuple(word)
    return [w[k:] + w[:k] for k in range(len(w))] or [()]


def arcs(d):
    """Merge segments into Wirtinger arcs.  Returns (arc of each segment,
    number of arcs).  Segments join across extrema, virtual crossings and
    along the over strand of classical crossings."""
    tr = d.trace
    n = len(tr.seg_up)
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for i, ev in enumerate(d.events):
        ins, outs = tr.seg_in[i], tr.seg_out[i]
        if ev.kind == BIRTH:
            union(*outs)
        elif ev.kind == DEATH:
            union(*ins)
        elif ev.kind == CROSS:
            if ev.sign == VIRT:
                union(ins[0], outs[1])
                union(ins[1], outs[0])
            elif ev.sign == POS:
                union(ins[0], outs[1])
            else:
                union(ins[1], outs[0])
    roots = {}
    arc = []
    for s in range(n):
        r = find(s)
        if r not in roots:
            roots[r] = len(roots)
        arc.append(roots[r])
    return arc, len(roots)


def wirtinger_presentation(d):
    """One generator per arc; at a classical crossing with over arc O the
    under arc leaves as O^-1 U O (positive) or O U O^-1 (negative); all edges
    at a vertex are equal; free ends impose nothing."""
    tr = d.trace
    arc, n = arcs(d)
    rels = []
    for i, ev in enumerate(d.events):
        ins, outs = tr.seg_in[i], tr.seg_out[i]
        if ev.classical:
            if ev.sign == POS:
                o, u_in, u_out = arc[ins[0]], arc[ins[1]], arc[outs[0]]
                # u_out = o^-1 u_in o
                rels.append(((u_out, -1), (o, -1), (u_in, 1), (o, 1)))
            else:
                o, u_in, u_out = arc[ins[1]], arc[ins[0]], arc[outs[1]]
                rels.append(((u_out, -1), (o, 1), (u_in, 1), (o, -1)))
        elif ev.kind == VERTEX:
            edges = [arc[s] for s in ins + outs]
            for a in edges[1:]:
                if a != edges[0]:
                    rels.append(((edges[0], 1), (a, -1)))
    return FinitePresentation(n, tuple(rels))
