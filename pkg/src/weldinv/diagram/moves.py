"""Local rewriting of Morse words by welded-equivalence moves.

Every move is stored as a pair of local event patterns acting on a few
adjacent strands.  The patterns are written for arbitrary strand
orientations and then made canonical against the orientations actually
present at the site (classical crossings on downward strands become the
usual rotation gadget), so both sides are always valid canonical words and
a move followed by its reverse at the same site restores the word exactly.

A site is ``(i, p, params)``: the pattern starts at event ``i`` and its
leftmost strand is ``p``.  For insertions ``i`` is the level the pattern is
inserted below (0..len(events)).
"""

import enum
import random
from functools import lru_cache

from .events import (
    BIRTH,
    CROSS,
    DEATH,
    ENDD,
    ENDU,
    NEG,
    POS,
    VERTEX,
    VIRT,
    Birth,
    Cross,
    Death,
    EndDown,
    EndUp,
    MorseDiagram,
    Vertex,
)
from .transform import crossing_sign, rotate_crossing


class MoveKind(enum.Enum):
    R1 = "R1"
    R2 = "R2"
    R3 = "R3"
    VR1 = "VR1"
    VR2 = "VR2"
    VR3 = "VR3"
    MIXED = "Mixed"
    F1 = "F1"
    ARC_END_SLIDE = "ArcEndSlide"
    GRAPH_MOVE_1 = "GraphMove1"
    GRAPH_MOVE_2 = "GraphMove2"
    GRAPH_MOVE_3 = "GraphMove3"
    GRAPH_MOVE_4 = "GraphMove4"
    GRAPH_MOVE_5 = "GraphMove5"
    GRAPH_MOVE_6 = "GraphMove6"
    GRAPH_MOVE_7 = "GraphMove7"
    YETTER_EXCHANGE = "YetterExchange"
    YETTER_CANCEL = "YetterCancel"
    YETTER_CROSS_SLIDE = "YetterCrossSlide"

    @classmethod
    def parse(cls, name):
        for k in cls:
            if name in (k.name, k.value):
                return k
        raise MoveError(f"{name!r} is not a move kind")


FORWARD, BACKWARD = "forward", "backward"

GRAPH_MOVES = tuple(MoveKind(f"GraphMove{i}") for i in range(1, 8))


class MoveError(ValueError):
    pass


# ------------------------------------------------------------ local helpers

def _advance(ups, ev):
    p = ev.pos
    if ev.kind == CROSS:
        ups[p:p + 2] = [ups[p + 1], ups[p]]
    elif ev.kind == BIRTH:
        ups[p:p] = list(ev.orient)
    elif ev.kind == DEATH:
        del ups[p:p + 2]
    elif ev.kind == ENDU:
        del ups[p]
    elif ev.kind == ENDD:
        ups[p:p] = [ev.orient[0] if ev.orient else True]
    else:
        ups[p:p + ev.below] = list(ev.orient)


def _canon(events, orient):
    """Rotate classical crossings of a local pattern onto upward strands."""
    ups = list(orient)
    out = []
    for ev in events:
        if ev.classical and not (ups[ev.pos] and ups[ev.pos + 1]):
            rep = rotate_crossing(ev.pos, ev.sign, ups[ev.pos], ups[ev.pos + 1])
        else:
            rep = [ev]
        for r in rep:
            _advance(ups, r)
        out.extend(rep)
    return tuple(out)


def _x(pos, kind, lu, ru):
    """Crossing at ``pos`` whose over strand is given by kind L/R, or V."""
    if kind == "V":
        return Cross(pos, VIRT)
    return Cross(pos, crossing_sign(kind == "L", lu, ru))


def _flip(kind):
    return {"L": "R", "R": "L", "V": "V"}[kind]


# ------------------------------------------------------------ move families
#
# A family knows how many strands its patterns touch (``width``), the
# parameter values it ranges over, and the raw (source, target) pair of its
# forward direction for a given orientation slice.  ``None`` means the
# parameters do not fit the orientations.


class _Family:
    kind = None
    insertion = False  # forward source is empty
    graph_only = False
    arc_only = False

    def width(self, params):
        raise NotImplementedError

    def params(self, d):
        raise NotImplementedError

    def forms(self, sl, params):
        raise NotImplementedError


class _Kink(_Family):
    insertion = True

    def __init__(self, kind, signs):
        self.kind = kind
        self.signs = signs

    def width(self, params):
        return 1

    def params(self, d):
        return [(side, s) for side in ("R", "L") for s in self.signs]

    def forms(self, sl, params):
        side, s = params
        u = sl[0]
        if side == "R":
            return (), (Birth(1, u), Cross(0, s), Death(1))
        return (), (Birth(0, not u), Cross(1, s), Death(0))


class _Pass(_Family):
    insertion = True

    def __init__(self, kind, virtual):
        self.kind = kind
        self.virtual = virtual

    def width(self, params):
        return 2

    def params(self, d):
        return [("V",)] if self.virtual else [("L",), ("R",)]

    def forms(self, sl, params):
        (k,) = params
        a, b = sl
        return (), (_x(0, k, a, b), _x(0, _flip(k), b, a))


def _acyclic(ab, ac, bc):
    above = set()
    above.add(("A", "B") if ab == "L" else ("B", "A"))
    above.add(("A", "C") if ac == "L" else ("C", "A"))
    above.add(("B", "C") if bc == "L" else ("C", "B"))
    cyc1 = {("A", "B"), ("B", "C"), ("C", "A")}
    cyc2 = {("B", "A"), ("C", "B"), ("A", "C")}
    return above != cyc1 and above != cyc2


def _triangle_kinds(kind):
    out = []
    for ab in "LRV":
        for ac in "LRV":
            for bc in "LRV":
                t = (ab, ac, bc)
                nv = t.count("V")
                if kind is MoveKind.VR3 and nv == 3:
                    out.append(t)
                elif kind is MoveKind.R3 and nv == 0 and _acyclic(*t):
                    out.append(t)
                elif kind is MoveKind.MIXED and nv == 2:
                    out.append(t)
                elif kind is MoveKind.F1 and nv == 1:
                    # the strand outside the virtual pair passes over both others
                    if (ab == "V" and ac == "R" and bc == "R") or \
                       (ac == "V" and ab == "R" and bc == "L") or \
                       (bc == "V" and ab == "L" and ac == "L"):
                        out.append(t)
    return out


class _Triangle(_Family):
    """sigma_1 sigma_2 sigma_1 -> sigma_2 sigma_1 sigma_2 with the over/under
    information of each strand pair preserved."""

    def __init__(self, kind):
        self.kind = kind
        self._params = _triangle_kinds(kind)

    def width(self, params):
        return 3

    def params(self, d):
        return self._params

    def forms(self, sl, params):
        ab, ac, bc = params
        a, b, c = sl
        lhs = (_x(0, ab, a, b), _x(1, ac, a, c), _x(0, bc, b, c))
        rhs = (_x(1, bc, b, c), _x(0, ac, a, c), _x(1, ab, a, b))
        return lhs, rhs


class _Zigzag(_Family):
    kind = MoveKind.YETTER_CANCEL
    insertion = True

    def width(self, params):
        return 1

    def params(self, d):
        return [("S",), ("Z",)]

    def forms(self, sl, params):
        u = sl[0]
        if params[0] == "S":
            return (), (Birth(1, not u), Death(0))
        return (), (Birth(0, u), Death(1))


class _CrossSlide(_Family):
    """A strand moves its crossing from one branch of a cup (cap) to the
    other branch.  Over-strand identity is kept."""

    kind = MoveKind.YETTER_CROSS_SLIDE

    def width(self, params):
        return 1 if params[0] == "cup" else 3

    def params(self, d):
        out = [("cup", lu, k) for lu in (True, False) for k in ("t", "c", "V")]
        out += [("cap", k) for k in ("t", "c", "V")]
        return out

    def forms(self, sl, params):
        if params[0] == "cup":
            _, lu, k = params
            t, x, y = sl[0], lu, not lu
            # t crosses the left branch x, or the right branch y
            k1 = {"t": "L", "c": "R", "V": "V"}[k]
            lhs = (Birth(1, lu), _x(0, k1, t, x))
            rhs = (Birth(0, lu), _x(1, _flip(k1), y, t))
            return lhs, rhs
        _, k = params
        a, b, c = sl
        if a == c:
            return None
        # b crosses the left leg a of the cap, or the right leg c
        k1 = {"t": "R", "c": "L", "V": "V"}[k]
        lhs = (_x(0, k1, a, b), Death(1))
        rhs = (_x(1, _flip(k1), b, c), Death(0))
        return lhs, rhs


class _EndSlide(_Family):
    """A free end passes under a neighbouring strand or through a virtual
    crossing.  Forward removes the crossing."""

    kind = MoveKind.ARC_END_SLIDE
    arc_only = True

    def width(self, params):
        return 2 if params[0] == "top" else 1

    def params(self, d):
        out = [("top", side, k) for side in ("R", "L") for k in ("t", "V")]
        out += [("bottom", side, o, k) for side in ("R", "L") for o in (True, False) for k in ("t", "V")]
        return out

    def forms(self, sl, params):
        if params[0] == "top":
            _, side, k = params
            if side == "R":
                # t at 0, end strand at 1
                cross = _x(0, {"t": "L", "V": "V"}[k], sl[0], sl[1])
                return (cross, EndUp(0)), (EndUp(1),)
            cross = _x(0, {"t": "R", "V": "V"}[k], sl[0], sl[1])
            return (cross, EndUp(1)), (EndUp(0),)
        _, side, o, k = params
        t = sl[0]
        if side == "L":
            # end created left of t, then crosses it
            cross = _x(0, {"t": "R", "V": "V"}[k], o, t)
            return (EndDown(0, o), cross), (EndDown(1, o),)
        cross = _x(0, {"t": "L", "V": "V"}[k], t, o)
        return (EndDown(1, o), cross), (EndDown(0, o),)


def _vertex_signatures(d):
    seen = []
    for e in d.events:
        if e.kind == VERTEX:
            sig = (e.below, e.above, e.orient)
            if sig not in seen:
                seen.append(sig)
    return seen


class _Bivalent(_Family):
    kind = MoveKind.GRAPH_MOVE_1
    insertion = True
    graph_only = True

    def width(self, params):
        return 1

    def params(self, d):
        return [()]

    def forms(self, sl, params):
        return (), (Vertex(0, 1, 1, (sl[0],)),)


class _VertexExtremum(_Family):
    kind = MoveKind.GRAPH_MOVE_2
    graph_only = True

    def width(self, params):
        return 0 if params[0] == "cup" else 2

    def params(self, d):
        return [("cup", True), ("cup", False), ("cap",)]

    def forms(self, sl, params):
        if params[0] == "cup":
            lu = params[1]
            return (Birth(0, lu),), (Vertex(0, 0, 2, (lu, not lu)),)
        if sl[0] == sl[1]:
            return None
        return (Death(0),), (Vertex(0, 2, 0, ()),)


class _Leaf(_Family):
    """A vertex with a free edge is a bivalent vertex (forward adds the leaf)."""

    kind = MoveKind.GRAPH_MOVE_3
    graph_only = True

    def width(self, params):
        return 1

    def params(self, d):
        return [(where, u, b) for where in ("top-right", "top-left", "bottom-right", "bottom-left")
                for u in (True, False) for b in (True, False)]

    def forms(self, sl, params):
        # u: orientation of the edge leaving the vertex upward, b: the leaf
        where, u, b = params
        simple = (Vertex(0, 1, 1, (u,)),)
        if where == "top-right":
            return simple, (Vertex(0, 1, 2, (u, b)), EndUp(1))
        if where == "top-left":
            return simple, (Vertex(0, 1, 2, (b, u)), EndUp(0))
        if where == "bottom-right":
            return simple, (EndDown(1, b), Vertex(0, 2, 1, (u,)))
        return simple, (EndDown(0, b), Vertex(0, 2, 1, (u,)))


class _VertexPass(_Family):
    """A strand passes across a whole vertex, over it or virtually.
    Forward moves the crossings from above the vertex to below it."""

    graph_only = True

    def __init__(self, kind, virtual):
        self.kind = kind
        self.virtual = virtual

    def width(self, params):
        return params[1] + 1

    def params(self, d):
        return [(side, b, a, o) for (b, a, o) in _vertex_signatures(d) for side in ("L", "R")]

    def forms(self, sl, params):
        side, b, a, orient = params
        virtual = self.virtual
        if side == "L":
            t, below = sl[0], sl[1:]
            kt = "V" if virtual else "L"
            above_x = tuple(_x(j, kt, t, orient[j]) for j in range(a))
            below_x = tuple(_x(j, kt, t, below[j]) for j in range(b))
            return (Vertex(1, b, a, orient),) + above_x, below_x + (Vertex(0, b, a, orient),)
        t, below = sl[-1], sl[:-1]
        kt = "V" if virtual else "R"
        above_x = tuple(_x(j, kt, orient[j], t) for j in range(a - 1, -1, -1))
        below_x = tuple(_x(j, kt, below[j], t) for j in range(b - 1, -1, -1))
        return (Vertex(0, b, a, orient),) + above_x, below_x + (Vertex(1, b, a, orient),)


class _EdgeRotate(_Family):
    """An outer top edge of a vertex is bent down around a cup."""

    kind = MoveKind.GRAPH_MOVE_6
    graph_only = True

    def width(self, params):
        return params[1]

    def params(self, d):
        out = {}
        for (b, a, o) in _vertex_signatures(d):
            if a >= 1:
                for side in ("R", "L"):
                    out[(side, b, a, o)] = None
            # the vertex as it was before a forward rotation
            if b >= 1:
                for x in (True, False):
                    out[("R", b - 1, a + 1, o + (x,))] = None
                    out[("L", b - 1, a + 1, (x,) + o)] = None
        return list(out)

    def forms(self, sl, params):
        side, b, a, orient = params
        simple = (Vertex(0, b, a, orient),)
        if side == "R":
            return simple, (Birth(b, not orient[-1]), Vertex(0, b + 1, a - 1, orient[:-1]))
        return simple, (Birth(0, orient[0]), Vertex(1, b + 1, a - 1, orient[1:]))


class _EdgeTwist(_Family):
    """Two neighbouring top edges of a vertex cross each other."""

    kind = MoveKind.GRAPH_MOVE_7
    graph_only = True

    def width(self, params):
        return params[0]

    def params(self, d):
        out = {}
        for (b, a, o) in _vertex_signatures(d):
            for j in range(a - 1):
                swapped = list(o)
                swapped[j], swapped[j + 1] = o[j + 1], o[j]
                for orient in (o, tuple(swapped)):
                    for k in "LRV":
                        out[(b, a, orient, j, k)] = None
        return list(out)

    def forms(self, sl, params):
        b, a, orient, j, k = params
        twisted = list(orient)
        twisted[j], twisted[j + 1] = orient[j + 1], orient[j]
        simple = (Vertex(0, b, a, orient),)
        cross = _x(j, k, twisted[j], twisted[j + 1])
        return simple, (Vertex(0, b, a, tuple(twisted)), cross)


_FAMILIES = {
    MoveKind.R1: _Kink(MoveKind.R1, (POS, NEG)),
    MoveKind.VR1: _Kink(MoveKind.VR1, (VIRT,)),
    MoveKind.R2: _Pass(MoveKind.R2, False),
    MoveKind.VR2: _Pass(MoveKind.VR2, True),
    MoveKind.R3: _Triangle(MoveKind.R3),
    MoveKind.VR3: _Triangle(MoveKind.VR3),
    MoveKind.MIXED: _Triangle(MoveKind.MIXED),
    MoveKind.F1: _Triangle(MoveKind.F1),
    MoveKind.ARC_END_SLIDE: _EndSlide(),
    MoveKind.GRAPH_MOVE_1: _Bivalent(),
    MoveKind.GRAPH_MOVE_2: _VertexExtremum(),
    MoveKind.GRAPH_MOVE_3: _Leaf(),
    MoveKind.GRAPH_MOVE_4: _VertexPass(MoveKind.GRAPH_MOVE_4, False),
    MoveKind.GRAPH_MOVE_5: _VertexPass(MoveKind.GRAPH_MOVE_5, True),
    MoveKind.GRAPH_MOVE_6: _EdgeRotate(),
    MoveKind.GRAPH_MOVE_7: _EdgeTwist(),
    MoveKind.YETTER_CANCEL: _Zigzag(),
    MoveKind.YETTER_CROSS_SLIDE: _CrossSlide(),
}


@lru_cache(maxsize=None)
def _patterns(kind, params, sl):
    """Canonical (forward source, forward target) relative to p = 0."""
    fam = _FAMILIES[kind]
    raw = fam.forms(sl, params)
    if raw is None:
        return None
    lhs, rhs = raw
    return _canon(lhs, sl), _canon(rhs, sl)


def _shift(events, p):
    return [e.moved(e.pos + p) for e in events]


def _matches(events, i, pat, p):
    if i + len(pat) > len(events):
        return False
    for j, q in enumerate(pat):
        e = events[i + j]
        if e.kind != q.kind or e.pos != q.pos + p or e != q.moved(e.pos):
            return False
    return True


# ------------------------------------------------------------ exchanges

def _exchange(events, i):
    """Swap events i and i+1 if they touch disjoint strands.  Returns the
    new pair and the direction it counts as, or None."""
    if not 0 <= i < len(events) - 1:
        return None
    a, b = events[i], events[i + 1]
    # a's outputs vs b's inputs on the middle level
    if a.pos + a.n_out <= b.pos:
        da = a.n_out - a.n_in
        return (b.moved(b.pos - da), a), FORWARD
    if b.pos + b.n_in <= a.pos:
        db = b.n_out - b.n_in
        return (b, a.moved(a.pos + db)), BACKWARD
    return None


# ------------------------------------------------------------ public API

def _check_kind(kind):
    if isinstance(kind, str):
        kind = MoveKind.parse(kind)
    if not isinstance(kind, MoveKind):
        raise MoveError(f"{kind!r} is not a move kind")
    return kind


def _allowed(d, kind):
    if kind is MoveKind.YETTER_EXCHANGE:
        return True
    fam = _FAMILIES[kind]
    if fam.graph_only and d.kind != "Graph":
        return False
    if fam.arc_only and d.kind != "Arc":
        return False
    return True


def _sites_at(d, kind, direction, i, levels):
    events = d.events
    if kind is MoveKind.YETTER_EXCHANGE:
        res = _exchange(events, i)
        if res is not None and res[1] == direction:
            return [(i, events[i].pos, ())]
        return []
    fam = _FAMILIES[kind]
    lev = levels[i]
    w = len(lev)
    out = []
    if fam.insertion and direction == FORWARD:
        params = fam.params(d)
        for p in range(w):
            for par in params:
                if p + fam.width(par) <= w and _patterns(kind, par, tuple(lev[p:p + fam.width(par)])):
                    out.append((i, p, par))
        return out
    if i >= len(events):
        return out
    ev = events[i]
    seen = set()
    for par in fam.params(d):
        k = fam.width(par)
        for delta in range(0, k + 4):
            p = ev.pos - delta
            if p < 0 or p + k > w or (p, par) in seen:
                continue
            pats = _patterns(kind, par, tuple(lev[p:p + k]))
            if pats is None:
                continue
            src = pats[0] if direction == FORWARD else pats[1]
            if src and _matches(events, i, src, p):
                seen.add((p, par))
                out.append((i, p, par))
    out.sort(key=lambda s: (s[1], repr(s[2])))
    return out


def enumerate_sites(d, kind, direction=FORWARD):
    """Every site where ``apply_move(d, kind, site, direction)`` succeeds,
    in a fixed order."""
    kind = _check_kind(kind)
    if direction not in (FORWARD, BACKWARD):
        raise MoveError(f"direction must be {FORWARD!r} or {BACKWARD!r}")
    if not _allowed(d, kind):
        return []
    levels = d.trace.levels
    out = []
    n = len(d.events) + 1
    for i in range(n):
        out.extend(_sites_at(d, kind, direction, i, levels))
    return out


def apply_move(d, kind, site, direction=FORWARD):
    """Rewrite ``d`` by one move; raises MoveError if it does not apply."""
    kind = _check_kind(kind)
    if direction not in (FORWARD, BACKWARD):
        raise MoveError(f"direction must be {FORWARD!r} or {BACKWARD!r}")
    if not _allowed(d, kind):
        raise MoveError(f"{kind.value} does not apply to a {d.kind} diagram")
    try:
        i, p, par = site
        par = tuple(par)
    except (TypeError, ValueError):
        raise MoveError(f"malformed site {site!r}") from None
    events = d.events
    if not 0 <= i <= len(events):
        raise MoveError(f"site {site!r} is outside the diagram")
    if kind is MoveKind.YETTER_EXCHANGE:
        res = _exchange(events, i)
        if res is None or res[1] != direction or p != events[i].pos:
            raise MoveError(f"{kind.value} {direction} does not apply at {site!r}")
        new = events[:i] + res[0] + events[i + 2:]
        return MorseDiagram(new, d.component_labels)
    fam = _FAMILIES[kind]
    lev = d.trace.levels[i]
    try:
        k = fam.width(par)
        ok_params = par in [tuple(x) for x in fam.params(d)]
    except (IndexError, TypeError, ValueError):
        ok_params = False
    if not ok_params or p < 0 or p + k > len(lev):
        raise MoveError(f"{kind.value} {direction} does not apply at {site!r}")
    pats = _patterns(kind, par, tuple(lev[p:p + k]))
    if pats is None:
        raise MoveError(f"{kind.value} {direction} does not apply at {site!r}")
    src, dst = pats if direction == FORWARD else (pats[1], pats[0])
    if fam.insertion and direction == FORWARD:
        if p >= len(lev):
            raise MoveError(f"{kind.value} needs a strand at {p}")
    elif not src or not _matches(events, i, src, p):
        raise MoveError(f"{kind.value} {direction} does not apply at {site!r}")
    new = events[:i] + tuple(_shift(dst, p)) + events[i + len(src):]
    return MorseDiagram(new, d.component_labels)


def move_kinds_for(d):
    """Move kinds that make sense for the kind of ``d``."""
    return [k for k in MoveKind if _allowed(d, k)]


def random_equivalent(d, steps, seed=0, kinds=None):
    """Apply ``steps`` random moves.  At each step a (kind, direction) pair is
    chosen uniformly among those with at least one site, then a site is
    chosen uniformly.  Steps with nothing applicable are skipped.  ``kinds``
    restricts the walk to a subset of the applicable move kinds."""
    rng = random.Random(seed)
    allowed = move_kinds_for(d)
    if kinds is not None:
        allowed = [k for k in allowed if k in set(kinds)]
    choices = [(k, dr) for k in allowed for dr in (FORWARD, BACKWARD)]
    for _ in range(steps):
        levels = d.trace.levels
        order = choices[:]
        rng.shuffle(order)
        # uniform over applicable pairs: scan a random permutation and take
        # the first pair that has a site
        for kind, direction in order:
            if kind is not MoveKind.YETTER_EXCHANGE and _FAMILIES[kind].insertion and direction == FORWARD:
                site = _sample_insertion(d, kind, levels, rng)
                if site is None:
                    continue
            else:
                sites = []
                for i in range(len(d.events)):
                    sites.extend(_sites_at(d, kind, direction, i, levels))
                if not sites:
                    continue
                site = rng.choice(sites)
            d = apply_move(d, kind, site, direction)
            break
    return d


def _sample_insertion(d, kind, levels, rng):
    """Uniform site of an insertion move without listing all of them."""
    fam = _FAMILIES[kind]
    params = fam.params(d)
    weights = []
    for lev in levels:
        w = len(lev)
        weights.append(sum(max(0, w - fam.width(par) + 1) for par in params) if w else 0)
    total = sum(weights)
    if total == 0:
        return None
    r = rng.randrange(total)
    for i, wt in enumerate(weights):
        if r < wt:
            break
        r -= wt
    w = len(levels[i])
    for par in params:
        n = max(0, w - fam.width(par) + 1)
        if r < n:
            return (i, r, par)
        r -= n
    raise AssertionError("unreachable")
