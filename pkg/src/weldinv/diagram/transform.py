"""Whole-diagram transforms: canonical crossing orientation, mirror image and
the trivial 1-handle operation c_1."""

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
    MorseDiagram,
    Vertex,
    sweep,
)


def crossing_sign(over_left, left_up, right_up):
    """Sign of a classical crossing given which input is over.

    The left input runs from bottom-left to top-right.  For two upward
    strands a positive crossing has the left input on top.
    """
    s = 1 if left_up == right_up else -1
    if not over_left:
        s = -s
    return POS if s > 0 else NEG


def over_is_left(sign, left_up, right_up):
    return crossing_sign(True, left_up, right_up) == sign


def rotate_crossing(pos, sign, left_up, right_up):
    """Replacement events for a classical crossing so that it sits on two
    upward strands.  The width before and after is unchanged."""
    p = pos
    if left_up and right_up:
        return [Cross(p, sign)]
    if left_up and not right_up:
        return [Birth(p, left_up=False), Cross(p + 1, sign), Death(p + 2)]
    if not left_up and right_up:
        return [Birth(p + 2, left_up=True), Cross(p + 1, sign), Death(p)]
    return [Birth(p + 2, True), Birth(p + 3, True), Cross(p + 2, sign), Death(p + 1), Death(p)]


def canonicalize(d):
    """Rotate every classical crossing onto upward strands."""
    events = d.events
    levels = sweep(events).levels
    out = []
    changed = False
    for i, ev in enumerate(events):
        if ev.classical:
            lu, ru = levels[i][ev.pos], levels[i][ev.pos + 1]
            if not (lu and ru):
                changed = True
                out.extend(rotate_crossing(ev.pos, ev.sign, lu, ru))
                continue
        out.append(ev)
    if not changed:
        return d
    return MorseDiagram(tuple(out), d.component_labels)


def mirror(d):
    flip = {POS: NEG, NEG: POS, VIRT: VIRT}
    evs = tuple(Cross(e.pos, flip[e.sign]) if e.kind == CROSS else e for e in d.events)
    return MorseDiagram(evs, d.component_labels)


def is_open_component(d, component):
    tr = d.trace
    ends = 0
    for i, ev in enumerate(d.events):
        segs = tr.seg_in[i] + tr.seg_out[i]
        if not any(tr.seg_component[s] == component for s in segs):
            continue
        if ev.kind == VERTEX:
            return False
        if ev.kind in (ENDU, ENDD):
            ends += 1
    return ends == 2


def add_handle(d, component=None, simplify=True):
    """c_1: add a trivial 1-handle to the tube of one component.

    Without simplification a bubble (two trivalent vertices enclosing a loop)
    is inserted on the first segment of the component.  When the component
    is an open interval and ``simplify`` is set, the graph moves collapse the
    result to the doubled-strand knot diagram built by ``double_interval``.
    """
    tr = d.trace
    if component is None:
        opens = [c for c in range(tr.n_components) if is_open_component(d, c)]
        component = opens[0] if opens else 0
    if not 0 <= component < tr.n_components:
        raise IndexError(f"component {component} out of range (diagram has {tr.n_components})")
    if simplify and is_open_component(d, component):
        return double_interval(d, component)
    return insert_bubble(d, component)


def insert_bubble(d, component):
    tr = d.trace
    for i, ev in enumerate(d.events):
        for j, s in enumerate(tr.seg_out[i]):
            if tr.seg_component[s] == component:
                q = ev.pos + j
                up = tr.seg_up[s]
                bubble = [Vertex(q, 1, 2, (up, up)), Vertex(q, 2, 1, (up,))]
                evs = list(d.events[:i + 1]) + bubble + list(d.events[i + 1:])
                return MorseDiagram(tuple(evs), d.component_labels)
    raise IndexError(f"component {component} has no segments")


def double_interval(d, component):
    """Replace an open component by the boundary of a thin band around it.

    The two parallel copies carry opposite orientations (left copy upward).
    The copy ``a`` follows the original orientation; at a crossing where the
    original strand is over, only ``a`` stays over and the other copy passes
    virtually.  Strands crossing over the original cross over both copies.
    """
    tr = d.trace
    doubled = []  # per current original strand: True if doubled
    out = []

    def npos(j):
        return sum(2 if x else 1 for x in doubled[:j])

    for i, ev in enumerate(d.events):
        p = ev.pos
        q = npos(p)
        ins = tr.seg_in[i]
        outs = tr.seg_out[i]
        tgt_in = [tr.seg_component[s] == component for s in ins]
        tgt_out = [tr.seg_component[s] == component for s in outs]
        kind = ev.kind
        if kind == ENDD and tgt_out[0]:
            out.append(Birth(q, True))
        elif kind == ENDU and tgt_in[0]:
            out.append(Death(q))
        elif kind == BIRTH and tgt_out[0]:
            out.append(Birth(q, True))
            out.append(Birth(q + 1, False))
        elif kind == DEATH and tgt_in[0]:
            out.append(Death(q + 1))
            out.append(Death(q))
        elif kind == CROSS and (tgt_in[0] or tgt_in[1]):
            lev = tr.levels[i]
            out.extend(_doubled_crossing(ev, q, tgt_in, lev[p], lev[p + 1]))
        else:
            out.append(ev.moved(q))
        if kind == CROSS:
            doubled[p:p + 2] = [tgt_in[1], tgt_in[0]]
        else:
            doubled[p:p + ev.n_in] = tgt_out
    raw = MorseDiagram(tuple(out))
    return canonicalize(raw)


def _doubled_crossing(ev, q, tgt, left_up, right_up):
    """Crossings replacing one crossing that involves the doubled component."""
    virtual = ev.sign == VIRT
    over_left = None if virtual else over_is_left(ev.sign, left_up, right_up)
    res = []

    def emit(pos, lu, ru, kind):
        # kind: 'L' left input over, 'R' right input over, 'V' virtual
        if kind == "V":
            res.append(Cross(pos, VIRT))
        else:
            res.append(Cross(pos, crossing_sign(kind == "L", lu, ru)))

    if tgt[0] and tgt[1]:
        # [c1L, c1R, c2L, c2R] -> [c2L, c2R, c1L, c1R]
        order = [(q + 1, "1R", "2L"), (q, "1L", "2L"), (q + 2, "1R", "2R"), (q + 1, "1L", "2R")]
        for pos, a, b in order:
            ori = {"L": True, "R": False}
            if virtual:
                kind = "V"
            else:
                o, u = ("1", "2") if over_left else ("2", "1")
                over_copy = a if a[0] == o else b
                if over_copy[1] == "L":
                    kind = "L" if over_copy is a else "R"
                else:
                    kind = "V"
            emit(pos, ori[a[1]], ori[b[1]], kind)
        return res
    if tgt[0]:
        # [cL, cR, t]: t moves left across cR then cL
        t_up = right_up
        c_over = (not virtual) and over_left
        for pos, copy in ((q + 1, "R"), (q, "L")):
            if virtual:
                kind = "V"
            elif c_over:
                kind = "L" if copy == "L" else "V"
            else:
                kind = "R"
            emit(pos, copy == "L", t_up, kind)
        return res
    # [t, cL, cR]: t moves right across cL then cR
    t_up = left_up
    c_over = (not virtual) and not over_left
    for pos, copy in ((q, "L"), (q + 1, "R")):
        if virtual:
            kind = "V"
        elif c_over:
            kind = "R" if copy == "L" else "V"
        else:
            kind = "L"
        emit(pos, t_up, copy == "L", kind)
    return res
