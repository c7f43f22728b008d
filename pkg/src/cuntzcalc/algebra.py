"""Exact arithmetic for the word algebra of the Cuntz algebra O_n.

O_n is generated by n isometries S_1, ..., S_n with sum_i S_i S_i* = I.
Every product of generators and adjoints collapses to a single word
S_alpha S_beta* for two multi-indices alpha, beta (finite tuples over
{1..n}; the empty tuple is the identity).  This module implements the
dense *-subalgebra spanned by such words, with coefficients in the
Laurent ring Q[g, g^-1].  The formal variable g stands for the gauge
phase e^{it}: an element with g-coefficients is a family parameterized
by t, and polynomial identities in g are equivalent to "for all t"
statements because the characters e^{itm} are linearly independent.

Representation:
    multi-index    tuple of ints in 1..n, () = empty index
    word term      pair (alpha, beta) meaning S_alpha S_beta*
    coefficient    dict {gpow: Fraction}, no zero values stored
    Element        dict {(alpha, beta): coefficient} in canonical form

Canonical form: terms are grouped by degree |alpha| - |beta|; inside a
degree group every beta is expanded to a common length via the Cuntz
relation S_alpha S_beta* = sum_i S_{alpha i} S_{beta i}*, like terms are
collected, zero coefficients dropped, and then whole-group contraction
is applied while possible (all last letters matching and all n-term
families complete with equal coefficients).  The result is the unique
minimal uniform-level presentation per degree, so two Elements are equal
in O_n exactly when their term dicts coincide.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product


class ContextMismatch(ValueError):
    """Raised when two Elements over different n are combined."""


@dataclass(frozen=True)
class AlgebraContext:
    """Number of generators; letters are single digits, so 2 <= n <= 9."""

    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or not 2 <= self.n <= 9:
            raise ValueError(f"number of generators must be an int in 2..9, got {self.n!r}")


def _ctx_n(ctx):
    if isinstance(ctx, AlgebraContext):
        return ctx.n
    return AlgebraContext(ctx).n


# ---------------------------------------------------------------------------
# Laurent coefficients: dict {gpow: Fraction}, zero values never stored.

ONE = Fraction(1)


def _coeff(q=1, gpow=0):
    q = Fraction(q)
    return {gpow: q} if q else {}


def _cadd(a, b):
    out = dict(a)
    for m, q in b.items():
        s = out.get(m, 0) + q
        if s:
            out[m] = s
        else:
            out.pop(m, None)
    return out


def _cmul(a, b):
    out = {}
    for ma, qa in a.items():
        for mb, qb in b.items():
            m = ma + mb
            s = out.get(m, 0) + qa * qb
            if s:
                out[m] = s
            else:
                out.pop(m, None)
    return out


def _cconj(a):
    # adjoint on coefficients: g^m -> g^-m, rationals are real
    return {-m: q for m, q in a.items()}


def _cneg(a):
    return {m: -q for m, q in a.items()}


def _cshift(a, dm):
    # multiply by g^dm
    return {m + dm: q for m, q in a.items()}


def _is_unit_coeff(a):
    return a == {0: ONE}


# ---------------------------------------------------------------------------
# Words

def word_mul(a, b):
    """Product of two words; a word or None (= zero).

    (S_p S_q*)(S_r S_s*) survives iff q is a prefix of r or r a prefix
    of q; the leftover letters move to the surviving side.
    """
    (pa, qa), (rb, sb) = a, b
    lq, lr = len(qa), len(rb)
    if lq <= lr:
        if rb[:lq] == qa:
            return (pa + rb[lq:], sb)
    else:
        if qa[:lr] == rb:
            return (pa, sb + qa[lr:])
    return None


def word_degree(t):
    return len(t[0]) - len(t[1])


def _check_letters(n, idx):
    for letter in idx:
        if not 1 <= letter <= n:
            raise ValueError(f"letter {letter} out of range for n={n}")


def _normal_form(n, raw):
    """Canonical term dict from an iterable of ((alpha, beta), coeffdict)."""
    groups = {}
    for t, c in raw:
        if not c:
            continue
        groups.setdefault(word_degree(t), []).append((t, c))
    out = {}
    for items in groups.values():
        target = max(len(t[1]) for t, _ in items)
        acc = {}
        for (a, b), c in items:
            grow = target - len(b)
            if grow == 0:
                tails = ((),)
            else:
                tails = product(range(1, n + 1), repeat=grow)
            for suf in tails:
                key = (a + suf, b + suf)
                prev = acc.get(key)
                acc[key] = _cadd(prev, c) if prev else dict(c)
        acc = {t: c for t, c in acc.items() if c}
        while acc:
            contracted = _contract_group(n, acc)
            if contracted is None:
                break
            acc = contracted
        out.update(acc)
    return out


def _contract_group(n, acc):
    """One whole-group contraction step, or None if not applicable."""
    fams = {}
    for (a, b), c in acc.items():
        if not a or not b or a[-1] != b[-1]:
            return None
        fams.setdefault((a[:-1], b[:-1]), {})[a[-1]] = c
    out = {}
    for parent, fam in fams.items():
        if len(fam) != n:
            return None
        ref = fam[1] if 1 in fam else None
        if ref is None or any(fam[i] != ref for i in range(2, n + 1)):
            return None
        out[parent] = ref
    return out


# ---------------------------------------------------------------------------
# Elements

class Element:
    """A finite Q[g,g^-1]-linear combination of words, kept canonical."""

    __slots__ = ("n", "terms")

    def __init__(self, ctx, raw=(), _normal=False):
        n = _ctx_n(ctx)
        if _normal:
            terms = raw if isinstance(raw, dict) else dict(raw)
        else:
            pairs = raw.items() if isinstance(raw, dict) else raw
            checked = []
            for t, c in pairs:
                a, b = tuple(t[0]), tuple(t[1])
                _check_letters(n, a)
                _check_letters(n, b)
                checked.append(((a, b), c if isinstance(c, dict) else _coeff(c)))
            terms = _normal_form(n, checked)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "terms", terms)

    def __setattr__(self, *_):
        raise AttributeError("Element is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(ctx):
        return Element(ctx, {}, _normal=True)

    @staticmethod
    def identity(ctx):
        return Element(ctx, {((), ()): _coeff(1)}, _normal=True)

    @staticmethod
    def word(ctx, alpha, beta=(), coeff=1, gpow=0):
        return Element(ctx, [((tuple(alpha), tuple(beta)), _coeff(coeff, gpow))])

    @staticmethod
    def gen(ctx, i):
        """The generator S_i."""
        return Element.word(ctx, (i,))

    # -- basic predicates ---------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_identity(self):
        return self.terms == {((), ()): {0: ONE}}

    def degrees(self):
        return sorted({word_degree(t) for t in self.terms})

    def max_level(self):
        """Largest word length occurring (0 for scalars and zero)."""
        if not self.terms:
            return 0
        return max(max(len(a), len(b)) for a, b in self.terms)

    def sorted_terms(self):
        """Terms in the deterministic order (degree, beta, alpha)."""
        return sorted(self.terms.items(), key=lambda tc: (word_degree(tc[0]), tc[0][1], tc[0][0]))

    # -- arithmetic ---------------------------------------------------------

    def _require_same(self, other):
        if not isinstance(other, Element):
            raise TypeError(f"expected Element, got {type(other).__name__}")
        if self.n != other.n:
            raise ContextMismatch(f"mixed contexts n={self.n} and n={other.n}")

    def __add__(self, other):
        self._require_same(other)
        raw = list(self.terms.items()) + list(other.terms.items())
        return Element(self.n, raw)

    def __sub__(self, other):
        self._require_same(other)
        raw = list(self.terms.items()) + [(t, _cneg(c)) for t, c in other.terms.items()]
        return Element(self.n, raw)

    def __neg__(self):
        return Element(self.n, {t: _cneg(c) for t, c in self.terms.items()}, _normal=True)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._require_same(other)
        raw = []
        for ta, ca in self.terms.items():
            for tb, cb in other.terms.items():
                t = word_mul(ta, tb)
                if t is not None:
                    raw.append((t, _cmul(ca, cb)))
        return Element(self.n, raw)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def scale(self, q, gpow=0):
        """Multiply by the scalar q * g^gpow."""
        q = Fraction(q)
        if not q:
            return Element.zero(self.n)
        terms = {t: _cshift({m: p * q for m, p in c.items()}, gpow) for t, c in self.terms.items()}
        return Element(self.n, terms, _normal=True)

    def adjoint(self):
        """Swap alpha and beta, conjugate coefficients (g^m -> g^-m)."""
        raw = {(b, a): _cconj(c) for (a, b), c in self.terms.items()}
        # canonical form is symmetric under the swap, so raw is already normal
        return Element(self.n, raw, _normal=True)

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset((t, frozenset(c.items())) for t, c in self.terms.items())))

    def __repr__(self):
        from .exprio import render
        return f"<Element n={self.n} {render(self)}>"


def normalize(x):
    """Rebuild the canonical form (a no-op on stored Elements)."""
    return Element(x.n, list(x.terms.items()))


def equals(x, y):
    x._require_same(y)
    return x == y


def add(x, y):
    return x + y


def mul(x, y):
    return x * y


def adjoint(x):
    return x.adjoint()


def scalar_mul(q, x, gpow=0):
    return x.scale(q, gpow)


# ---------------------------------------------------------------------------
# Internal shift and its left inverse; the public API lives in endo.py but
# membership tests below need both.

def _shift(x):
    raw = {}
    for (a, b), c in x.terms.items():
        for i in range(1, x.n + 1):
            raw[((i,) + a, (i,) + b)] = dict(c)
    return Element(x.n, raw)


def _unshift(x):
    inv = Fraction(1, x.n)
    raw = []
    for t, c in x.terms.items():
        for i in range(1, x.n + 1):
            t1 = word_mul(((), (i,)), t)
            if t1 is None:
                continue
            t2 = word_mul(t1, ((i,), ()))
            if t2 is None:
                continue
            raw.append((t2, {m: q * inv for m, q in c.items()}))
    return Element(x.n, raw)


# ---------------------------------------------------------------------------
# Subalgebra membership

def phi_preimage(x, k):
    """Preimage under the k-fold shift if x lies in its range, else None."""
    if k < 0:
        raise ValueError("k must be >= 0")
    y = x
    for _ in range(k):
        y = _unshift(y)
    z = y
    for _ in range(k):
        z = _shift(z)
    return y if z == x else None


def membership(x, target, k=None):
    """Membership of x in a named subalgebra.

    target "F"     gauge-invariant core: every term has degree 0
    target "Fk"    matrix subalgebra of level k: degree 0, word length <= k
    target "D"     diagonal: every term has alpha == beta
    target "phik"  range of the k-fold shift
    """
    if target == "F":
        return all(word_degree(t) == 0 for t in x.terms)
    if target == "Fk":
        if k is None or k < 0:
            raise ValueError("target Fk needs a level k >= 0")
        return membership(x, "F") and x.max_level() <= k
    if target == "D":
        return all(a == b for a, b in x.terms)
    if target == "phik":
        if k is None or k < 0:
            raise ValueError("target phik needs a level k >= 0")
        return phi_preimage(x, k) is not None
    raise ValueError(f"unknown membership target {target!r}")


def gauge_expectation(x):
    """Keep the degree-0 terms, coefficients restricted to the g^0 part."""
    raw = {}
    for t, c in x.terms.items():
        if word_degree(t) == 0 and 0 in c:
            raw[t] = {0: c[0]}
    return Element(x.n, raw)
