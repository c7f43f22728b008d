"""Self-intertwiners, bounded-level intertwiner spaces, perturbations
of an endomorphism that fix its action on the core, and coboundary
witnesses for gauge cocycles.

A self-intertwiner of the endomorphism of u is an x with
x = u shift(x) u*.  Perturbing u by such an x (on the left, or through
the shift on the right) changes the endomorphism away from the core but
not on it, which is the mechanism behind the main counterexample.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .algebra import Element, membership
from .decide import NOT_PRESERVES, direct_check
from .endo import (
    NotSumOfWords,
    gauge,
    is_unitary,
    left_inverse,
    shift,
    sum_of_words_profile,
)


class PreconditionFailed(ValueError):
    pass


class ConstructionNotSupported(ValueError):
    """The witness construction needs a partial isometry with no exact
    representation over the rationals."""


def is_self_intertwiner(u, v):
    """Whether v = u shift(v) u*, i.e. v intertwines the endomorphism
    of u with itself."""
    if not is_unitary(u):
        raise ValueError("self-intertwiner test needs a unitary u")
    return u * shift(v) * u.adjoint() == v


def agree_on_F(v, w, K):
    """Whether the endomorphisms of v and w agree on the core up to level K.

    Runs z_1 = phihat(w* v), z_{k+1} = phihat(w* z_k v); step k passes iff
    the argument lies in the shift's range, which is equivalent to the
    endomorphisms agreeing on all level-k matrix units.  Returns
    (True, 0) or (False, first failing level).
    """
    if not is_unitary(v) or not is_unitary(w):
        raise ValueError("agreement check needs unitary inputs")
    ws = w.adjoint()
    z = Element.identity(w.n)
    for k in range(1, K + 1):
        y = ws * z * v
        z = left_inverse(y)
        if shift(z) != y:
            return False, k
    return True, 0


def perturb(u, v, order="left"):
    """v·u or u·shift(v) for a self-intertwiner v of the endomorphism of u.

    Either product has the same restriction to the core as u itself; the
    construction re-verifies that to level 3 before returning.
    """
    if order not in ("left", "shift_right"):
        raise ValueError(f"unknown order {order!r}")
    if not is_unitary(u):
        raise ValueError("perturb needs a unitary u")
    if not is_self_intertwiner(u, v):
        raise PreconditionFailed("v is not a self-intertwiner of u")
    w = v * u if order == "left" else u * shift(v)
    ok, level = agree_on_F(u, w, 3)
    if not ok:
        raise RuntimeError(f"internal: perturbation broke core agreement at level {level}")
    return w


def normalizer_cocycle_check(w):
    """Whether w* gauge(w) is diagonal; holds for every sum of words."""
    sum_of_words_profile(w)
    return membership(w.adjoint() * gauge(w), "D")


# ---------------------------------------------------------------------------
# bounded-level intertwiner spaces

def _span_words(n, L):
    """Independent spanning words of Span_L = span{S_a S_b* : |a|,|b| <= L},
    stratified by degree: each degree-d stratum uses the maximal length
    profile, so the listed words form a linear basis."""
    words = []
    for d in range(-L, L + 1):
        la, lb = (L, L - d) if d >= 0 else (L + d, L)
        for a in product(range(1, n + 1), repeat=la):
            for b in product(range(1, n + 1), repeat=lb):
                words.append((a, b))
    return words


def _coords(x, lam):
    """Sparse coordinates of x at the common refinement levels lam[d].

    Rows are keyed (degree, beta, alpha) after padding every canonical
    term of degree d out to beta-length lam[d].  Coefficients must be
    plain rationals (gauge degree zero).
    """
    n = x.n
    vec = {}
    for (a, b), c in x.terms.items():
        if set(c) != {0}:
            raise ValueError("intertwiner spaces are computed over plain rationals")
        q = c[0]
        d = len(a) - len(b)
        pad = lam[d] - len(b)
        for rho in product(range(1, n + 1), repeat=pad):
            vec[(d, b + rho, a + rho)] = q
    return vec


def _axpy(dst, factor, src):
    for k, q in src.items():
        s = dst.get(k, 0) - factor * q
        if s:
            dst[k] = s
        else:
            dst.pop(k, None)


@dataclass(frozen=True)
class SpanBasisReport:
    """Exact basis of {x in Span_L : x = u shift(x) u*}."""

    level: int
    dimension: int
    basis: tuple
    _words: tuple
    _leads: dict  # leading column -> kernel combination over _words

    def coefficients_of(self, x):
        """Expansion coefficients of x over the basis, or None when x is
        not in the space."""
        L = self.level
        col = {w: j for j, w in enumerate(self._words)}
        vec = {}
        for (a, b), c in x.terms.items():
            if set(c) != {0}:
                return None
            d = len(a) - len(b)
            if not -L <= d <= L:
                return None
            la, lb = (L, L - d) if d >= 0 else (L + d, L)
            pad = lb - len(b)
            if pad < 0:
                return None
            for rho in product(range(1, x.n + 1), repeat=pad):
                vec[col[(a + rho, b + rho)]] = c[0]
        coeffs = {}
        while vec:
            j = max(vec)
            comb = self._leads.get(j)
            if comb is None:
                return None
            f = vec.pop(j)
            coeffs[j] = f
            _axpy(vec, f, comb)
        out = [Fraction(0)] * self.dimension
        order = sorted(self._leads)
        for pos, j in enumerate(order):
            out[pos] = coeffs.get(j, Fraction(0))
        return out

    def contains(self, x):
        """Whether x lies in the space; reconstruction is checked exactly."""
        coeffs = self.coefficients_of(x)
        if coeffs is None:
            return False
        total = Element.zero(x.n)
        for q, b in zip(coeffs, self.basis):
            total = total + b.scale(q)
        return total == x


def intertwiner_space(u, L):
    """SpanBasisReport for the fixed points of x -> u shift(x) u* in Span_L.

    Exact rational null-space computation: every basis word is mapped
    through the fixed-point defect T(x) - x, coordinates are taken at a
    common refinement per degree, and sparse Gaussian elimination with
    combination tracking extracts the kernel.
    """
    if not is_unitary(u):
        raise ValueError("intertwiner spaces need a unitary u")
    if L < 0:
        raise ValueError("level must be nonnegative")
    n = u.n
    words = _span_words(n, L)
    us = u.adjoint()
    defects = []
    for a, b in words:
        e = Element(n, {(a, b): {0: 1}})
        defects.append(u * shift(e) * us - e)

    lam = {}
    for x in defects:
        for (a, b) in x.terms:
            d = len(a) - len(b)
            lam[d] = max(lam.get(d, 0), len(b))

    pivots = {}
    kernel = []  # combinations over column indices, leading (max) column coeff 1
    for j, x in enumerate(defects):
        vec = _coords(x, lam)
        comb = {j: Fraction(1)}
        placed = False
        while vec:
            k = min(vec)
            if k not in pivots:
                f = vec[k]
                pivots[k] = ({kk: q / f for kk, q in vec.items()},
                             {kk: q / f for kk, q in comb.items()})
                placed = True
                break
            pv, pc = pivots[k]
            f = vec.pop(k)
            _axpy(vec, f, {kk: q for kk, q in pv.items() if kk != k})
            _axpy(comb, f, pc)
        if not placed:
            kernel.append(comb)

    basis = []
    leads = {}
    for comb in kernel:
        lead = max(comb)
        f = comb[lead]
        comb = {kk: q / f for kk, q in comb.items()}
        leads[lead] = {kk: q for kk, q in comb.items() if kk != lead}
        raw = [(words[kk], {0: q}) for kk, q in comb.items()]
        basis.append(Element(n, raw))
    order = sorted(range(len(kernel)), key=lambda i: max(kernel[i]))
    basis = tuple(basis[i] for i in order)

    for b in basis:
        if u * shift(b) * us != b:
            raise RuntimeError("internal: kernel vector fails the fixed-point identity")
    return SpanBasisReport(L, len(basis), basis, tuple(words), leads)


# ---------------------------------------------------------------------------
# coboundary witnesses

def coboundary_witness(w):
    """(U, z) with U a core unitary matching the endomorphism of w on
    level-1 matrix units and w* U = shift(z).

    It follows that phihat(w* gauge(w)) = z gauge(z*), exhibiting the
    level-1 gauge cocycle as a coboundary; the identity is re-verified
    symbolically before returning.

    Needs level-1 preservation.  The matrix-unit matching is done over
    the rationals, which requires the corner projection to be a 0/1
    diagonal (always the case for sums of words); otherwise the partial
    isometry may need irrational entries and ConstructionNotSupported
    is raised.
    """
    if not is_unitary(w):
        raise ValueError("coboundary witnesses need a unitary w")
    probe = direct_check(w, 1)
    if probe.verdict == NOT_PRESERVES:
        raise PreconditionFailed("the endomorphism already leaves the core at level 1")
    n = w.n
    ident = Element.identity(n)
    if membership(w, "F"):
        U = w
    else:
        U = _matched_core_unitary(w)
    y = w.adjoint() * U
    z = left_inverse(y)
    if shift(z) != y:
        raise RuntimeError("internal: w* U is not in the shift's range")
    lhs = left_inverse(w.adjoint() * gauge(w))
    if lhs != z * gauge(z.adjoint()):
        raise RuntimeError("internal: coboundary identity failed")
    return U, z


def _matched_core_unitary(w):
    """Core unitary U with U S_i S_j* U* = w S_i S_j* w* for all i, j.

    Standard matrix-unit matching U = sum_i e_{i1} V f_{1i} with
    f_{ij} = S_i S_j*, e_{ij} their images, and V the lexicographically
    least partial isometry carrying f_11 onto e_11.
    """
    n = w.n
    ws = w.adjoint()
    e = {(i, j): w * Element(n, {((i,), (j,)): {0: 1}}) * ws
         for i in range(1, n + 1) for j in range(1, n + 1)}
    e11 = e[(1, 1)]
    if not membership(e11, "D") or any(c != {0: 1} for c in e11.terms.values()):
        raise ConstructionNotSupported(
            "corner projection is not a 0/1 diagonal; a rational partial "
            "isometry onto it need not exist")
    gammas = sorted(a for a, _ in e11.terms)
    m = len(gammas[0])
    targets = sorted((1,) + rho for rho in product(range(1, n + 1), repeat=m - 1))
    if len(gammas) != len(targets):
        raise ConstructionNotSupported(
            f"corner projection has rank {len(gammas)} at level {m}, expected {len(targets)}")
    V = Element(n, [((g, t), {0: 1}) for g, t in zip(gammas, targets)])
    U = Element.zero(n)
    for i in range(1, n + 1):
        U = U + e[(i, 1)] * V * Element(n, {((1,), (i,)): {0: 1}})
    if not membership(U, "F") or not is_unitary(U):
        raise RuntimeError("internal: matched unitary is not a core unitary")
    return U
