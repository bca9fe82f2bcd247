"""Morse-event words for welded virtual knots, arcs and graphs.

A diagram is read bottom to top.  Each event acts on a contiguous block of
strands starting at ``pos``; strands carry an orientation (up or down).
"""

from dataclasses import dataclass, field
from functools import cached_property

BIRTH, DEATH, CROSS, VERTEX, ENDU, ENDD = "birth", "death", "cross", "vertex", "endu", "endd"
POS, NEG, VIRT = "+", "-", "v"


@dataclass(frozen=True)
class MorseEvent:
    kind: str
    pos: int
    sign: str = ""
    below: int = 0
    above: int = 0
    # orientation of the strands the event creates, True meaning upward
    orient: tuple = ()

    @property
    def n_in(self):
        return {BIRTH: 0, DEATH: 2, CROSS: 2, ENDU: 1, ENDD: 0}.get(self.kind, self.below)

    @property
    def n_out(self):
        return {BIRTH: 2, DEATH: 0, CROSS: 2, ENDU: 0, ENDD: 1}.get(self.kind, self.above)

    @property
    def classical(self):
        return self.kind == CROSS and self.sign in (POS, NEG)

    def moved(self, pos):
        return MorseEvent(self.kind, pos, self.sign, self.below, self.above, self.orient)

    def __str__(self):
        return format_event(self)


def Birth(pos, left_up=True):
    return MorseEvent(BIRTH, pos, orient=(left_up, not left_up))


def Death(pos):
    return MorseEvent(DEATH, pos)


def Cross(pos, sign):
    if sign not in (POS, NEG, VIRT):
        raise ValueError(f"bad crossing sign {sign!r}")
    return MorseEvent(CROSS, pos, sign=sign)


def Vertex(pos, below, above, orient=None):
    if orient is None:
        orient = (True,) * above
    return MorseEvent(VERTEX, pos, below=below, above=above, orient=tuple(orient))


def EndUp(pos):
    return MorseEvent(ENDU, pos)


def EndDown(pos, up=True):
    return MorseEvent(ENDD, pos, orient=(up,))


@dataclass(frozen=True)
class Trace:
    """Segment bookkeeping produced by one sweep.

    ``seg_in[i]`` / ``seg_out[i]`` are the segment ids consumed / created by
    event i, left to right.  Segments are numbered in creation order.
    """

    seg_in: tuple
    seg_out: tuple
    seg_up: tuple
    seg_component: tuple
    n_components: int
    levels: tuple  # orientation tuple of the strands below each event (+ final)


class SweepError(ValueError):
    pass


@dataclass(frozen=True)
class MorseDiagram:
    events: tuple
    component_labels: tuple = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))
        if self.component_labels is not None:
            object.__setattr__(self, "component_labels", tuple(self.component_labels))

    def __len__(self):
        return len(self.events)

    @property
    def birth_orientations(self):
        return tuple("left" if e.orient[0] else "right" for e in self.events if e.kind == BIRTH)

    @property
    def kind(self):
        kinds = {e.kind for e in self.events}
        if VERTEX in kinds:
            return "Graph"
        if ENDU in kinds or ENDD in kinds:
            return "Arc"
        return "Knot"

    @cached_property
    def trace(self):
        return sweep(self.events)

    @property
    def n_components(self):
        return self.trace.n_components

    def count(self, kind):
        return sum(1 for e in self.events if e.kind == kind)

    def with_events(self, events):
        return MorseDiagram(tuple(events), self.component_labels)

    def __str__(self):
        return serialize(self)


def sweep(events):
    """Run the strand bookkeeping.  Raises SweepError on bad widths."""
    strands = []  # segment ids currently present
    ups = []  # orientation of each segment id
    seg_in, seg_out, levels = [], [], []
    parent = []

    def new(up):
        ups.append(bool(up))
        parent.append(len(parent))
        return len(ups) - 1

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for i, ev in enumerate(events):
        levels.append(tuple(ups[s] for s in strands))
        p, k = ev.pos, ev.n_in
        if p < 0 or p + k > len(strands) or (k == 0 and p > len(strands)):
            raise SweepError(f"event {i} ({format_event(ev)}) needs strands {p}..{p + k - 1} "
                             f"but only {len(strands)} present")
        ins = tuple(strands[p:p + k])
        kind = ev.kind
        if kind == CROSS:
            a = new(ups[ins[1]])
            b = new(ups[ins[0]])
            outs = (a, b)
            union(ins[1], a)
            union(ins[0], b)
        elif kind == BIRTH:
            outs = (new(ev.orient[0]), new(ev.orient[1]))
            union(*outs)
        elif kind == DEATH:
            outs = ()
            union(*ins)
        elif kind == ENDU:
            outs = ()
        elif kind == ENDD:
            outs = (new(ev.orient[0] if ev.orient else True),)
        else:
            orient = ev.orient or (True,) * ev.above
            outs = tuple(new(u) for u in orient)
            group = ins + outs
            for s in group[1:]:
                union(group[0], s)
        strands[p:p + k] = outs
        seg_in.append(ins)
        seg_out.append(outs)
    levels.append(tuple(ups[s] for s in strands))
    if strands:
        raise SweepError(f"sweep ends with {len(strands)} strand(s)")
    roots = {}
    comp = []
    for s in range(len(ups)):
        r = find(s)
        if r not in roots:
            roots[r] = len(roots)
        comp.append(roots[r])
    return Trace(tuple(seg_in), tuple(seg_out), tuple(ups), tuple(comp), len(roots), tuple(levels))


def validate(d):
    """All violations of the diagram invariants, as strings (empty when ok)."""
    problems = []
    width = 0
    ups = []
    for i, ev in enumerate(d.events):
        tag = f"event {i} ({format_event(ev)})"
        if ev.kind not in (BIRTH, DEATH, CROSS, VERTEX, ENDU, ENDD):
            problems.append(f"{tag}: unknown kind")
            continue
        k = ev.n_in
        if ev.pos < 0 or ev.pos + k > width or ev.pos > width:
            problems.append(f"{tag}: strand underflow (width {width})")
            # keep going with a clipped view so later events are still checked
            lo = max(0, min(ev.pos, width))
            hi = min(width, lo + k)
            ins = ups[lo:hi]
            ups[lo:hi] = list(_created(ev))
            width = len(ups)
            continue
        ins = ups[ev.pos:ev.pos + k]
        if ev.kind == VERTEX:
            if ev.below + ev.above < 2:
                problems.append(f"{tag}: valence-1 vertex must be written endu/endd")
            if len(ev.orient) != ev.above:
                problems.append(f"{tag}: orientation string has wrong length")
        if ev.kind == BIRTH and (len(ev.orient) != 2 or ev.orient[0] == ev.orient[1]):
            problems.append(f"{tag}: orientation violation, birth strands must be opposite")
        if ev.kind == DEATH and ins[0] == ins[1]:
            problems.append(f"{tag}: orientation violation, death joins two "
                            f"{'upward' if ins[0] else 'downward'} strands")
        if ev.classical and not (ins[0] and ins[1]):
            problems.append(f"{tag}: orientation violation, classical crossing on a downward strand")
        if ev.kind == CROSS:
            outs = [ins[1], ins[0]]
        else:
            outs = list(_created(ev))
        ups[ev.pos:ev.pos + k] = outs
        width = len(ups)
    if width:
        problems.append(f"sweep ends with {width} strand(s)")
    if not problems and d.component_labels is not None:
        n = d.trace.n_components
        if sorted(d.component_labels) != list(range(1, n + 1)):
            problems.append(f"component labels must be a permutation of 1..{n}")
    return problems


def _created(ev):
    if ev.kind == BIRTH:
        return ev.orient
    if ev.kind == ENDD:
        return ev.orient or (True,)
    if ev.kind == VERTEX:
        return ev.orient
    return ()


# ---------------------------------------------------------------- text format

class ParseError(ValueError):
    def __init__(self, msg, line=None, column=None):
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + msg)
        self.line = line
        self.column = column


def format_event(ev):
    if ev.kind == BIRTH:
        return f"birth {ev.pos}" + ("" if ev.orient[0] else " ru")
    if ev.kind == DEATH:
        return f"death {ev.pos}"
    if ev.kind == CROSS:
        return f"x{ev.sign} {ev.pos}"
    if ev.kind == ENDU:
        return f"endu {ev.pos}"
    if ev.kind == ENDD:
        return f"endd {ev.pos}" + ("" if (not ev.orient or ev.orient[0]) else " d")
    s = f"vertex {ev.pos} {ev.below} {ev.above}"
    if ev.orient and not all(ev.orient):
        s += " " + "".join("u" if u else "d" for u in ev.orient)
    return s


def serialize(d):
    lines = [format_event(e) for e in d.events]
    if d.component_labels is not None:
        lines += [f"component {i} {lab}" for i, lab in enumerate(d.component_labels)]
    return "\n".join(lines) + "\n"


def braid_events(n, word, arc=False):
    """Events of the trace closure of an n-strand braid word.

    ``word`` holds nonzero ints (``i`` positive, ``-i`` negative generator on
    strands i-1, i) or strings ``"v<i>"`` for virtual generators.  With
    ``arc`` the outermost loop is cut open at the bottom and top.
    """
    evs = []
    for k in range(n):
        evs.append(EndDown(0) if (arc and k == 0) else Birth(k))
    for g in word:
        if isinstance(g, str):
            if not g.startswith("v"):
                raise ValueError(f"bad braid letter {g!r}")
            i = int(g[1:])
            sign = VIRT
        else:
            i = abs(int(g))
            sign = POS if g > 0 else NEG
        if not 1 <= i < n:
            raise ValueError(f"generator {g} out of range for {n} strands")
        evs.append(Cross(i - 1, sign))
    for k in range(n - 1, -1, -1):
        evs.append(EndUp(0) if (arc and k == 0) else Death(k))
    return evs


def _parse_braid_letter(tok):
    if tok.startswith("v"):
        int(tok[1:])
        return tok
    v = int(tok)
    if v == 0:
        raise ValueError("braid generator 0")
    return v


def parse_events(text):
    """Parse without validating or canonicalising.  Returns (events, labels)."""
    events = []
    labels = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        line = body.strip()
        if not line:
            continue
        col = len(body) - len(body.lstrip()) + 1
        toks = line.split()
        head = toks[0]
        try:
            if head == "braid":
                header, sep, rest = line.partition(":")
                if not sep:
                    raise ValueError("braid header needs ':'")
                hs = header.split()
                if len(hs) < 2 or len(hs) > 3 or (len(hs) == 3 and hs[2] != "arc"):
                    raise ValueError("expected `braid <n>[ arc]: <letters>`")
                n = int(hs[1])
                word = [_parse_braid_letter(t) for t in rest.split()]
                events.extend(braid_events(n, word, arc=len(hs) == 3))
                continue
            args = toks[1:]
            if head == "birth":
                _arity(args, 1, 2)
                left_up = True
                if len(args) == 2:
                    if args[1] not in ("lu", "ru"):
                        raise ValueError(f"birth orientation must be lu or ru, got {args[1]!r}")
                    left_up = args[1] == "lu"
                events.append(Birth(_nat(args[0]), left_up))
            elif head == "death":
                _arity(args, 1, 1)
                events.append(Death(_nat(args[0])))
            elif head in ("x+", "x-", "xv"):
                _arity(args, 1, 1)
                events.append(Cross(_nat(args[0]), head[1]))
            elif head == "vertex":
                _arity(args, 3, 4)
                b, a = _nat(args[1]), _nat(args[2])
                orient = None
                if len(args) == 4:
                    if len(args[3]) != a or set(args[3]) - {"u", "d"}:
                        raise ValueError("vertex orientation must be a u/d string of length <above>")
                    orient = tuple(c == "u" for c in args[3])
                events.append(Vertex(_nat(args[0]), b, a, orient))
            elif head == "endu":
                _arity(args, 1, 1)
                events.append(EndUp(_nat(args[0])))
            elif head == "endd":
                _arity(args, 1, 2)
                up = True
                if len(args) == 2:
                    if args[1] not in ("u", "d"):
                        raise ValueError("endd orientation must be u or d")
                    up = args[1] == "u"
                events.append(EndDown(_nat(args[0]), up))
            elif head == "component":
                _arity(args, 2, 2)
                labels[_nat(args[0])] = _nat(args[1])
            else:
                raise ValueError(f"unknown keyword {head!r}")
        except ValueError as exc:
            raise ParseError(str(exc), lineno, col) from None
    if labels:
        if sorted(labels) != list(range(len(labels))):
            raise ParseError("component lines must cover ids 0..n-1")
        labels = tuple(labels[i] for i in range(len(labels)))
    else:
        labels = None
    return events, labels


def _arity(args, lo, hi):
    if not lo <= len(args) <= hi:
        raise ValueError(f"expected {lo}{'' if lo == hi else '-' + str(hi)} argument(s), got {len(args)}")


def _nat(tok):
    v = int(tok)
    if v < 0:
        raise ValueError(f"negative value {v}")
    return v


def parse_morse(text):
    """Parse, canonicalise and validate a diagram in the line format."""
    from .transform import canonicalize

    events, labels = parse_events(text)
    raw = MorseDiagram(tuple(events), labels)
    problems = [p for p in validate(raw) if "classical crossing on a downward" not in p]
    if problems:
        raise ParseError("; ".join(problems))
    d = canonicalize(raw)
    problems = validate(d)
    if problems:
        raise ParseError("; ".join(problems))
    return d
