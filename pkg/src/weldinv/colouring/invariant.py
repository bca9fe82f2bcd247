import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction

from ..algebra.groups import make_trivial_E
from .fast import count_fast
from .naive import count_naive
from .problem import build_problem

log = logging.getLogger(__name__)

# exact rational value of the invariant; denominators are powers of |E|
InvariantValue = Fraction


@dataclass
class CountReport:
    raw_count: int
    kind: str
    cups: int
    caps: int
    up_ends: int
    vertex_above: tuple
    E_order: int
    value: Fraction
    backend: str
    elapsed: float
    branches: int = 0
    extra: dict = field(default_factory=dict)

    @property
    def integral(self):
        return self.value.denominator == 1

    def recompute(self, formula=None):
        return normalise(self.raw_count, formula or self.kind, self.cups, self.caps,
                         self.up_ends, self.vertex_above, self.E_order)

    def as_dict(self):
        v = self.value
        return {
            "value": str(v) if v.denominator != 1 else int(v),
            "raw_count": self.raw_count,
            "kind": self.kind,
            "cups": self.cups,
            "caps": self.caps,
            "upward_ends": self.up_ends,
            "vertex_edges_from_above": list(self.vertex_above),
            "E_order": self.E_order,
            "backend": self.backend,
            "elapsed": round(self.elapsed, 6),
            "g_branches": self.branches,
        }


def normalise(raw, kind, cups, caps, up_ends, vertex_above, E_order):
    e = Fraction(E_order)
    if kind == "Knot":
        return Fraction(raw)
    if kind == "Arc":
        return Fraction(raw) / e ** (cups - caps - up_ends)
    value = Fraction(raw) * e ** (caps - cups)
    for above in vertex_above:
        value *= e ** (1 - above)
    return value


def invariant(d, cm, backend="fast", conjugacy_reduction=True, workers=1, cap=None):
    """The normalised invariant of ``d`` for the crossed module ``cm``."""
    problem = build_problem(d, cm)
    t0 = time.perf_counter()
    stats = {}
    if backend == "naive":
        raw = count_naive(problem, cap=cap)
    elif backend == "fast":
        raw = count_fast(problem, conjugacy_reduction=conjugacy_reduction, workers=workers, stats=stats)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    elapsed = time.perf_counter() - t0
    kind = d.kind
    value = normalise(raw, kind, problem.cups, problem.caps, problem.up_ends,
                      problem.vertex_above, cm.E.order)
    if value.denominator != 1:
        log.warning("non-integral invariant value %s for a %s diagram", value, kind)
    return CountReport(
        raw_count=raw,
        kind=kind,
        cups=problem.cups,
        caps=problem.caps,
        up_ends=problem.up_ends,
        vertex_above=problem.vertex_above,
        E_order=cm.E.order,
        value=value,
        backend=backend,
        elapsed=elapsed,
        branches=stats.get("branches", 0),
    )


def counting_invariant(d, G, backend="fast"):
    """Number of G-labellings, i.e. homomorphisms from the knot group to G."""
    return invariant(d, make_trivial_E(G), backend=backend).raw_count
