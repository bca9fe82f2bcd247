"""Multivariate Laurent polynomials with integer coefficients."""

from itertools import permutations


class LaurentPoly:
    """Element of Z[X1^{+-1}, ..., Xn^{+-1}].

    Stored as a dict from exponent tuples (length n, entries may be
    negative) to nonzero integer coefficients.
    """

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(x) for x in exp)
            if len(exp) != nvars:
                raise ValueError(f"exponent {exp} does not have {nvars} entries")
            c = int(c)
            if c:
                clean[exp] = clean.get(exp, 0) + c
                if not clean[exp]:
                    del clean[exp]
        self.terms = clean
        self._hash = None

    # construction
    @classmethod
    def zero(cls, nvars):
        return cls(nvars)

    @classmethod
    def const(cls, nvars, c):
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def monomial(cls, nvars, exp, c=1):
        return cls(nvars, {tuple(exp): c})

    @classmethod
    def var(cls, nvars, i, power=1):
        exp = [0] * nvars
        exp[i] = power
        return cls(nvars, {tuple(exp): 1})

    # basic queries
    def is_zero(self):
        return not self.terms

    def is_unit(self):
        """Units of the Laurent ring are +-monomials."""
        return len(self.terms) == 1 and abs(next(iter(self.terms.values()))) == 1

    def unit_inverse(self):
        if not self.is_unit():
            raise ValueError(f"{self} is not a unit")
        (exp, c), = self.terms.items()
        return LaurentPoly(self.nvars, {tuple(-x for x in exp): c})

    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            if other.nvars != self.nvars:
                raise ValueError("variable counts differ")
            return other
        if isinstance(other, int):
            return LaurentPoly.const(self.nvars, other)
        return NotImplemented

    # ring operations
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, 0) + c
        return LaurentPoly(self.nvars, t)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return LaurentPoly(self.nvars, t)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            return self.unit_inverse() ** (-k)
        out = LaurentPoly.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(self.nvars, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    # ordering helpers (lex on exponent tuples)
    def leading(self):
        e = max(self.terms)
        return e, self.terms[e]

    def trailing(self):
        e = min(self.terms)
        return e, self.terms[e]

    def exact_div(self, other):
        """Quotient q with q * other == self; raises ValueError if none."""
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return LaurentPoly.zero(self.nvars)
        le, lc = other.leading()
        floor = tuple(a - b for a, b in zip(self.trailing()[0], other.trailing()[0]))
        q = {}
        r = self
        while not r.is_zero():
            e, c = r.leading()
            qe = tuple(a - b for a, b in zip(e, le))
            if c % lc or qe < floor:
                raise ValueError(f"{other} does not divide {self}")
            term = LaurentPoly(self.nvars, {qe: c // lc})
            q[qe] = q.get(qe, 0) + c // lc
            r = r - term * other
        return LaurentPoly(self.nvars, q)

    def shift_exponents(self, exp):
        return LaurentPoly(self.nvars, {tuple(a + b for a, b in zip(e, exp)): c for e, c in self.terms.items()})

    def evaluate(self, values, one, add, mul, scale, power):
        """Generic evaluation: ``power(i, k)`` gives variable i to power k."""
        acc = None
        for e, c in sorted(self.terms.items()):
            term = one
            for i, k in enumerate(e):
                if k:
                    term = mul(term, power(i, k))
            term = scale(term, c)
            acc = term if acc is None else add(acc, term)
        return acc

    def __repr__(self):
        return f"LaurentPoly({self})"

    def __str__(self):
        return format_poly(self)


def format_poly(p, names=None):
    """Stable text form: ``c*X1^a*X2^b`` terms joined by `` + ``."""
    if p.is_zero():
        return "0"
    names = names or [f"X{i + 1}" for i in range(p.nvars)]
    parts = []
    for e in sorted(p.terms, reverse=True):
        c = p.terms[e]
        factors = [str(c)] + [f"{names[i]}^{k}" for i, k in enumerate(e) if k]
        parts.append("*".join(factors))
    return " + ".join(parts)


def determinant_expansion(M, nvars):
    """Leibniz expansion; only for small matrices."""
    n = len(M)
    total = LaurentPoly.zero(nvars)
    for perm in permutations(range(n)):
        sign = _perm_sign(perm)
        term = LaurentPoly.const(nvars, sign)
        for i, j in enumerate(perm):
            term = term * M[i][j]
            if term.is_zero():
                break
        total = total + term
    return total


def determinant_bareiss(M, nvars):
    """Fraction-free elimination with exact Laurent division."""
    n = len(M)
    if n == 0:
        return LaurentPoly.const(nvars, 1)
    A = [list(row) for row in M]
    sign = 1
    prev = LaurentPoly.const(nvars, 1)
    for k in range(n - 1):
        if A[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not A[i][k].is_zero()), None)
            if swap is None:
                return LaurentPoly.zero(nvars)
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]).exact_div(prev)
            A[i][k] = LaurentPoly.zero(nvars)
        prev = A[k][k]
    return A[n - 1][n - 1] * sign


def _perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign
