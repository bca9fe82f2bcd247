"""Enumerating oracle: walks the diagram bottom to top, tries every colour on
each free segment and checks each relation literally as an equation between
group elements.  No linear algebra, no symmetry reduction."""

import os
import sys

from ..diagram.events import BIRTH, CROSS, DEATH, ENDD, ENDU, POS, VERTEX, VIRT

DEFAULT_ORACLE_CAP = 10 ** 8


class OracleCapExceeded(RuntimeError):
    pass


def oracle_cap():
    raw = os.environ.get("WELDINV_ORACLE_CAP")
    return int(raw) if raw else DEFAULT_ORACLE_CAP


def count_naive(problem, cap=None):
    d, cm = problem.diagram, problem.cm
    cap = oracle_cap() if cap is None else cap
    G = cm.G
    mul, inv = G.table.tolist(), G.inverse.tolist()
    add, neg, act = (t.tolist() for t in cm.element_tables())
    nG, nE = G.order, cm.E.order
    zero = 0
    tr = d.trace
    events = d.events
    nseg = len(tr.seg_up)
    col_g = [None] * nseg
    col_e = [None] * nseg
    visited = [0]

    def tick():
        visited[0] += 1
        if visited[0] > cap:
            raise OracleCapExceeded(f"enumeration exceeded the oracle cap of {cap} nodes")

    def rec(i):
        tick()
        if i == len(events):
            return 1
        ev = events[i]
        ins, outs = tr.seg_in[i], tr.seg_out[i]
        k = ev.kind
        if k == BIRTH:
            total = 0
            a, b = outs
            for g in range(nG):
                for e in range(nE):
                    col_g[a], col_e[a] = g, e
                    col_g[b], col_e[b] = g, neg[e]
                    total += rec(i + 1)
            return total
        if k == DEATH:
            a, b = ins
            if col_g[a] != col_g[b] or add[col_e[a]][col_e[b]] != zero:
                return 0
            return rec(i + 1)
        if k == ENDD:
            s = outs[0]
            total = 0
            for g in range(nG):
                col_g[s], col_e[s] = g, zero
                total += rec(i + 1)
            return total
        if k == ENDU:
            if col_e[ins[0]] != zero:
                return 0
            return rec(i + 1)
        if k == CROSS:
            l, r = ins
            lo, ro = outs
            if ev.sign == VIRT:
                col_g[lo], col_e[lo] = col_g[r], col_e[r]
                col_g[ro], col_e[ro] = col_g[l], col_e[l]
                return rec(i + 1)
            if ev.sign == POS:
                over, under, over_out, under_out = l, r, ro, lo
                W = inv[col_g[over]]
            else:
                over, under, over_out, under_out = r, l, lo, ro
                W = col_g[over]
            U, u = col_g[under], col_e[under]
            Wu = act[W][u]
            col_g[under_out] = mul[mul[W][U]][inv[W]]
            col_e[under_out] = Wu
            col_g[over_out] = col_g[over]
            col_e[over_out] = add[add[col_e[over]][u]][neg[Wu]]
            return rec(i + 1)
        if k == VERTEX:
            if ins:
                g0 = col_g[ins[0]]
                if any(col_g[s] != g0 for s in ins[1:]):
                    return 0
                flux = zero
                for s in ins:
                    flux = add[flux][col_e[s]]
                choices = [g0]
            else:
                flux = zero
                choices = range(nG)
            total = 0
            for g in choices:
                for s in outs:
                    col_g[s] = g
                total += _spread(outs, flux, g, i)
            return total
        raise ValueError(f"unknown event kind {k}")

    def _spread(outs, flux, g, i):
        # all ways to write the incoming flux as a sum of outgoing labels
        if not outs:
            return rec(i + 1) if flux == zero else 0
        if len(outs) == 1:
            col_e[outs[0]] = flux
            return rec(i + 1)
        total = 0
        for e in range(nE):
            col_e[outs[0]] = e
            total += _spread(outs[1:], add[flux][neg[e]], g, i)
        return total

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 4 * len(events) + 1000))
    try:
        return rec(0)
    finally:
        sys.setrecursionlimit(old)
