"""Shift, gauge action, and the endomorphisms attached to unitaries.

Every unitary u determines a unital *-endomorphism mapping S_i to u S_i.
On a word S_alpha S_beta* with |alpha| = k, |beta| = m it acts as
u_k S_alpha S_beta* u_m* where u_k = u phi(u) ... phi^{k-1}(u) is the
tower of shifted copies of u (u_0 = I).
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import (
    Element,
    _is_unit_coeff,
    _shift,
    _unshift,
    word_degree,
)


class NotSumOfWords(ValueError):
    """Element is not a coefficient-free double-partition sum of words."""


def shift(x):
    """The canonical inner shift: x -> sum_i S_i x S_i*."""
    return _shift(x)


def left_inverse(x):
    """x -> (1/n) sum_i S_i* x S_i; undoes shift."""
    return _unshift(x)


def gauge(x, power=1):
    """Gauge action: scale each term by g^(power * degree)."""
    raw = {}
    for t, c in x.terms.items():
        d = word_degree(t) * power
        raw[t] = {m + d: q for m, q in c.items()} if d else c
    return Element(x.n, raw, _normal=True)


def is_unitary(x):
    """Exact check of x x* = x* x = I.

    Fast path: a sum of words with all coefficients 1 is unitary iff its
    alphas and betas each form a partition of unity (complete prefix-free
    families), which avoids the symbolic squaring.
    """
    pairs = _unit_coeff_pairs(x)
    if pairs is not None:
        alphas = [a for a, _ in pairs]
        betas = [b for _, b in pairs]
        if _is_partition_of_unity(x.n, alphas) and _is_partition_of_unity(x.n, betas):
            return True
    ident = Element.identity(x.n)
    xs = x.adjoint()
    return x * xs == ident and xs * x == ident


def _unit_coeff_pairs(x):
    """The word pairs of the minimal presentation if all coefficients are 1."""
    pres = minimal_presentation(x)
    if all(_is_unit_coeff(c) for c in pres.values()):
        return sorted(pres.keys())
    return None


def _is_partition_of_unity(n, idxs):
    """True iff {P_idx} sums to I: prefix-free and covering."""
    if len(set(idxs)) != len(idxs):
        return False
    for i, a in enumerate(idxs):
        for b in idxs[i + 1:]:
            m = min(len(a), len(b))
            if a[:m] == b[:m]:
                return False
    top = max((len(a) for a in idxs), default=0)
    return sum(n ** (top - len(a)) for a in idxs) == n ** top


def minimal_presentation(x):
    """Term dict of x with greedy family contraction applied termwise.

    The stored canonical form expands each degree group to a uniform
    level; here single complete n-term families (matching last letters,
    equal coefficients) are re-contracted independently until none is
    left.  Each term has at most one parent family, so the greedy order
    does not matter.  This is the minimal word presentation used for
    sum-of-words recognition.
    """
    terms = dict(x.terms)
    while True:
        fams = {}
        for (a, b) in terms:
            if a and b and a[-1] == b[-1]:
                fams.setdefault((a[:-1], b[:-1]), []).append((a, b))
        changed = False
        for parent, children in fams.items():
            if len(children) != x.n:
                continue
            ref = terms.get(children[0])
            if ref is None or any(terms.get(ch) != ref for ch in children[1:]):
                continue
            if parent in terms:
                # a parent already present would collide; leave this family
                continue
            for ch in children:
                del terms[ch]
            terms[parent] = ref
            changed = True
        if not changed:
            return terms


@dataclass(frozen=True)
class IndexPairSet:
    """Validated index-pair family J of a sum-of-words unitary.

    pairs is the family J; betas is J_2 = {beta}, in bijection with J;
    tails maps each beta to the index with its first letter removed.
    """

    n: int
    pairs: tuple
    betas: tuple = field(init=False)
    tails: dict = field(init=False)

    def __post_init__(self):
        betas = tuple(b for _, b in self.pairs)
        object.__setattr__(self, "betas", betas)
        object.__setattr__(self, "tails", {b: b[1:] for b in betas})

    def degrees(self):
        return sorted({len(a) - len(b) for a, b in self.pairs})

    def n_covering_holds(self):
        """sum_beta P_{beta-tilde} == n * I as an exact Element identity."""
        total = Element.zero(self.n)
        for b in self.betas:
            t = self.tails[b]
            total = total + Element.word(self.n, t, t)
        return total == Element.identity(self.n).scale(self.n)


def sum_of_words_profile(x):
    """Validate x as a sum of words and return its IndexPairSet.

    Requires every coefficient in the minimal presentation to be exactly
    1 (at gauge power 0) and both the alphas and the betas to form
    partitions of unity.
    """
    pairs = _unit_coeff_pairs(x)
    if pairs is None:
        raise NotSumOfWords("coefficients other than 1 remain in the minimal presentation")
    alphas = [a for a, _ in pairs]
    betas = [b for _, b in pairs]
    if not _is_partition_of_unity(x.n, alphas):
        raise NotSumOfWords("the alpha projections do not form a partition of unity")
    if not _is_partition_of_unity(x.n, betas):
        raise NotSumOfWords("the beta projections do not form a partition of unity")
    if pairs == [((), ())]:
        # identity: expand one level so every beta has a nonempty tail
        pairs = [((i,), (i,)) for i in range(1, x.n + 1)]
    profile = IndexPairSet(x.n, tuple(pairs))
    assert profile.n_covering_holds()
    return profile


# ---------------------------------------------------------------------------
# Towers and the endomorphism action

def u_tower(u, k, _cache=None):
    """u_k = u phi(u) ... phi^{k-1}(u), computed as u * shift(u_{k-1})."""
    if k < 0:
        raise ValueError("tower index must be >= 0")
    if _cache is None:
        if not is_unitary(u):
            raise ValueError("tower base must be unitary")
        _cache = [Element.identity(u.n), u]
    while len(_cache) <= k:
        _cache.append(u * shift(_cache[-1]))
    return _cache[k]


def lambda_apply(u, x, check_unitary=True):
    """Apply the endomorphism of u to x, term by term."""
    if check_unitary and not is_unitary(u):
        raise ValueError("endomorphisms are attached to unitaries only")
    towers = [Element.identity(u.n), u]
    out = Element.zero(u.n)
    for (a, b), c in x.terms.items():
        uk = u_tower(u, len(a), towers)
        um = u_tower(u, len(b), towers)
        piece = uk * Element(u.n, {(a, b): dict(c)}, _normal=True) * um.adjoint()
        out = out + piece
    return out


def compose(u, v):
    """The unitary whose endomorphism is (endomorphism of u) o (of v)."""
    for name, y in (("u", u), ("v", v)):
        if not is_unitary(y):
            raise ValueError(f"compose needs unitary inputs; {name} is not")
    return lambda_apply(u, v, check_unitary=False) * u
