"""Reduced colourings as a constraint problem.

Conventions (fixed once, used by every backend):

* all classical crossings sit on two upward strands; a positive crossing
  has the bottom-left strand on top;
* at a crossing with over label (O, o) and under label (U, u), the under
  strand leaves with (W U W^-1, W.u) and the over strand with
  (O, o + u - W.u), where W = O^-1 at positive and W = O at negative
  crossings;
* a birth creates (X, e) on the left and (X, -e) on the right; a death
  demands equal G-labels and E-labels summing to zero;
* a free end carries E-label zero; at a vertex all edges share one G-label
  and the E-labels below sum to the E-labels above.
"""

from dataclasses import dataclass

from ..diagram.events import BIRTH, CROSS, DEATH, ENDD, ENDU, POS, VERTEX, VIRT


@dataclass(frozen=True)
class CrossingData:
    event: int
    left_in: int
    right_in: int
    left_out: int
    right_out: int
    virtual: bool
    over_left: bool  # meaningless for virtual crossings
    w_node: int  # node of the over label (classical only)
    eps: int  # W = over^eps


@dataclass
class ColouringProblem:
    """Everything the counting backends need, built in one sweep.

    g_nodes[i] is ('var', u) or ('conj', w, eps, x) meaning w^eps x w^-eps.
    g_constraints are pairs of node ids that must evaluate equal; they are
    tagged with the event index that produced them.
    """

    diagram: object
    cm: object
    n_segments: int
    seg_node: tuple
    g_nodes: list
    g_unknown_events: list
    g_constraints: list
    crossings: list
    e_unknown_count: int
    cups: int
    caps: int
    up_ends: int
    vertex_above: tuple  # above-count of every vertex and end, sweep order

    @property
    def n_g_unknowns(self):
        return len(self.g_unknown_events)

    def node_depth(self):
        depth = []
        for node in self.g_nodes:
            if node[0] == "var":
                depth.append(node[1])
            else:
                depth.append(max(depth[node[1]], depth[node[3]]))
        return depth


def build_problem(d, cm):
    from ..diagram.events import validate

    problems = validate(d)
    if problems:
        raise ValueError("diagram is not valid/canonical: " + "; ".join(problems))
    tr = d.trace
    nodes = []
    node_of = {}
    seg_node = [None] * len(tr.seg_up)
    unknown_events = []
    constraints = []
    crossings = []
    e_unknowns = 0
    cups = caps = up_ends = 0
    vertex_above = []

    def var(event):
        nodes.append(("var", len(unknown_events)))
        unknown_events.append(event)
        return len(nodes) - 1

    def conj(w, eps, x):
        key = ("conj", w, eps, x)
        if key not in node_of:
            nodes.append(key)
            node_of[key] = len(nodes) - 1
        return node_of[key]

    for i, ev in enumerate(d.events):
        ins, outs = tr.seg_in[i], tr.seg_out[i]
        k = ev.kind
        if k == BIRTH:
            n = var(i)
            seg_node[outs[0]] = seg_node[outs[1]] = n
            e_unknowns += 1
            cups += 1
        elif k == ENDD:
            seg_node[outs[0]] = var(i)
            vertex_above.append(1)
        elif k == DEATH:
            constraints.append((seg_node[ins[0]], seg_node[ins[1]], i))
            caps += 1
        elif k == ENDU:
            up_ends += 1
            vertex_above.append(0)
        elif k == VERTEX:
            if ev.below == 0:
                n = var(i)
            else:
                n = seg_node[ins[0]]
                for s in ins[1:]:
                    constraints.append((seg_node[s], n, i))
            for s in outs:
                seg_node[s] = n
            e_unknowns += max(ev.above - 1, 0)
            vertex_above.append(ev.above)
        elif k == CROSS:
            a, b = seg_node[ins[0]], seg_node[ins[1]]
            if ev.sign == VIRT:
                seg_node[outs[0]], seg_node[outs[1]] = b, a
                crossings.append(CrossingData(i, ins[0], ins[1], outs[0], outs[1], True, False, -1, 0))
            else:
                over_left = ev.sign == POS
                eps = -1 if over_left else 1
                if over_left:
                    seg_node[outs[1]] = a
                    seg_node[outs[0]] = conj(a, eps, b)
                    w = a
                else:
                    seg_node[outs[0]] = b
                    seg_node[outs[1]] = conj(b, eps, a)
                    w = b
                crossings.append(CrossingData(i, ins[0], ins[1], outs[0], outs[1], False, over_left, w, eps))
    return ColouringProblem(
        diagram=d,
        cm=cm,
        n_segments=len(seg_node),
        seg_node=tuple(seg_node),
        g_nodes=nodes,
        g_unknown_events=unknown_events,
        g_constraints=constraints,
        crossings=crossings,
        e_unknown_count=e_unknowns,
        cups=cups,
        caps=caps,
        up_ends=up_ends,
        vertex_above=tuple(vertex_above),
    )
