"""Decide whether the endomorphism of a unitary w maps the core into itself.

Three routes:

  direct   apply the endomorphism to every matrix unit up to a depth and
           test degree purity; refutes but never certifies.

  cocycle  run the gauge-cocycle recursion
               zt_1 = phihat(w* gauge(w)),  zt_{k+1} = phihat(w* zt_k gauge(w)),
           where phihat is the left inverse of the shift.  Step k is valid
           iff the argument lies in the shift's range (equivalently the
           extracted element is unitary), which happens iff the endomorphism
           preserves all matrix units of level k.  A repeated state proves
           validity forever (the states live in a fixed finite-dimensional
           diagonal algebra), so this route can certify as well as refute.

  graph    for sums of words with degrees in {-1, 0, +1}: build the labeled
           overlap digraph of beta-tails and decide the path condition
           exactly by a synchronized pair search.  Always conclusive.
"""

from dataclasses import dataclass

from .algebra import Element, membership, word_degree
from .endo import (
    NotSumOfWords,
    gauge,
    is_unitary,
    left_inverse,
    shift,
    sum_of_words_profile,
    u_tower,
)

PRESERVES = "PRESERVES"
NOT_PRESERVES = "NOT_PRESERVES"
UNDECIDED = "UNDECIDED"


class DegreeOutOfRange(ValueError):
    """Some pair has |alpha| - |beta| outside {-1, 0, +1}."""


class IncompleteEdgeRule(ValueError):
    """Some pair admits no successor; the edge rule cannot close."""


class Psi1NotConstant(Exception):
    """A single overlap class carries two different degrees."""

    def __init__(self, name, classes, values):
        super().__init__(
            f"class {{{name}}} mixes degrees {values}; the level-1 cocycle is not unitary")
        self.class_name = name
        self.classes = classes
        self.values = values


def _fmt_tail(t):
    return "".join(str(i) for i in t) if t else "0"


def _fmt_label(v):
    return f"{v:+d}" if v else "0"


@dataclass(frozen=True)
class OverlapGraph:
    """Labeled digraph on overlap classes of beta-tails.

    classes maps a vertex name (the sorted distinct tails of the class,
    comma-joined, empty tail written "0") to the tuple of betas in the
    class; label holds the common degree |alpha| - |beta| per vertex.
    """

    n: int
    classes: dict
    label: dict
    edges: tuple

    @property
    def vertices(self):
        return tuple(sorted(self.classes))

    def successors(self):
        succ = {v: [] for v in self.vertices}
        for a, b in self.edges:
            succ[a].append(b)
        return {v: tuple(sorted(set(s))) for v, s in succ.items()}


def overlap_classes(profile):
    """Partition of the betas by chains of prefix-comparable tails."""
    betas = sorted(profile.betas)
    parent = list(range(len(betas)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(betas)):
        ti = profile.tails[betas[i]]
        for j in range(i + 1, len(betas)):
            tj = profile.tails[betas[j]]
            m = min(len(ti), len(tj))
            if ti[:m] == tj[:m]:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri
    groups = {}
    for i, b in enumerate(betas):
        groups.setdefault(find(i), []).append(b)
    classes = {}
    for members in groups.values():
        tails = sorted({profile.tails[b] for b in members})
        name = ",".join(_fmt_tail(t) for t in tails)
        classes[name] = tuple(sorted(members))
    return classes


def build_overlap_graph(profile):
    """OverlapGraph of a validated index-pair family.

    Raises DegreeOutOfRange unless all degrees lie in {-1, 0, +1},
    Psi1NotConstant when a class mixes degrees (which already refutes
    preservation at level 1), and IncompleteEdgeRule when some pair has
    no successor so the label recursion cannot be formed.
    """
    degs = profile.degrees()
    if any(d not in (-1, 0, 1) for d in degs):
        raise DegreeOutOfRange(f"degrees {degs} outside {{-1, 0, +1}}")
    classes = overlap_classes(profile)
    class_of = {b: name for name, members in classes.items() for b in members}
    deg_of = {b: len(a) - len(b) for a, b in profile.pairs}

    label = {}
    for name, members in classes.items():
        values = sorted({deg_of[b] for b in members})
        if len(values) != 1:
            raise Psi1NotConstant(name, classes, values)
        label[name] = values[0]

    edges = set()
    for a, b in profile.pairs:
        found = False
        for b2 in profile.betas:
            t2 = profile.tails[b2]
            if a[:len(t2)] == t2:
                edges.add((class_of[b], class_of[b2]))
                found = True
        if not found:
            raise IncompleteEdgeRule(
                f"pair ({_fmt_tail(a)}, {_fmt_tail(b)}) has no successor tail")
    return OverlapGraph(profile.n, classes, label, tuple(sorted(edges)))


def path_condition(graph, max_depth=None):
    """Whether all same-length paths from any vertex end at equal labels.

    Decided by breadth-first search on unordered vertex pairs stepping
    both sides simultaneously from the diagonal; the condition fails iff
    a pair with distinct labels is reachable.  Returns (ok, certificate).
    """
    succ = graph.successors()
    frontier = {(v, v) for v in graph.vertices}
    seen = set(frontier)
    depth = 0
    origin = {(v, v): v for v in graph.vertices}
    while frontier:
        if max_depth is not None and depth >= max_depth:
            break
        depth += 1
        nxt = set()
        # sorted scan keeps the reported certificate hash-seed independent
        for b, c in sorted(frontier):
            for b2 in succ[b]:
                for c2 in succ[c]:
                    pair = (b2, c2) if b2 <= c2 else (c2, b2)
                    if pair in seen:
                        continue
                    seen.add(pair)
                    origin[pair] = origin[(b, c)]
                    nxt.add(pair)
                    if graph.label[pair[0]] != graph.label[pair[1]]:
                        cert = {
                            "start": origin[pair],
                            "bfs_depth": depth,
                            "pair": list(pair),
                            "labels": [graph.label[pair[0]], graph.label[pair[1]]],
                        }
                        return False, cert
        frontier = nxt
    return True, {"pairs_explored": len(seen), "bound": depth + 1}


@dataclass
class DecisionReport:
    """Outcome of a preservation decision with its certificate."""

    verdict: str
    method: str
    depth: int = 0
    failing_level: int = 0
    witness: Element = None
    certificate: dict = None

    def to_json_obj(self):
        from .exprio import render
        return {
            "verdict": self.verdict,
            "method": self.method,
            "depth": self.depth,
            "failing_level": self.failing_level or None,
            "witness": render(self.witness) if self.witness is not None else None,
            "certificate": self.certificate or {},
        }


def _level_units(n, k):
    from itertools import product
    idx = sorted(product(range(1, n + 1), repeat=k))
    for a in idx:
        for b in idx:
            yield a, b


def direct_check(w, depth):
    """Refutation by matrix-unit enumeration; UNDECIDED when clean."""
    if not is_unitary(w):
        raise ValueError("preservation decisions need a unitary input")
    towers = [Element.identity(w.n), w]
    for k in range(1, depth + 1):
        wk = u_tower(w, k, towers)
        wks = wk.adjoint()
        for a, b in _level_units(w.n, k):
            x = Element(w.n, {(a, b): {0: 1}})
            image = wk * x * wks
            if not membership(image, "F"):
                from .exprio import render
                return DecisionReport(
                    NOT_PRESERVES, "direct", depth=k, failing_level=k, witness=x,
                    certificate={"image": render(image)})
    return DecisionReport(UNDECIDED, "direct", depth=depth,
                          certificate={"note": f"no violation up to level {depth}"})


def monomial_defect(z):
    """First diagonal block of z whose coefficient c fails c(g)c(1/g) = 1.

    None when z is not diagonal or no block fails.  Blocks of the stored
    canonical form are already mutually orthogonal at a common level.
    """
    if not membership(z, "D"):
        return None
    for (a, _), c in sorted(z.terms.items()):
        prod = {}
        for m1, q1 in c.items():
            for m2, q2 in c.items():
                m = m1 - m2
                s = prod.get(m, 0) + q1 * q2
                if s:
                    prod[m] = s
                else:
                    prod.pop(m, None)
        if prod != {0: 1}:
            return a, c
    return None


def cocycle_run(w, depth):
    """Gauge-cocycle recursion; (cocycles, report).

    Tracks both the accumulated states zt_k of the defining recursion and
    the single-step quotients z_k = zt_k zt_{k-1}*; a repetition in either
    stream certifies PRESERVES (the recursions are deterministic and every
    revisited state has already been validated).
    """
    if not is_unitary(w):
        raise ValueError("preservation decisions need a unitary input")
    from .exprio import render, to_json
    ws = w.adjoint()
    gw = gauge(w)
    ident = Element.identity(w.n)
    zt_prev = ident
    cocycles = []
    seen_tilde = {to_json(ident): 0}
    seen_plain = {}
    for k in range(1, depth + 1):
        y = ws * zt_prev * gw
        z = left_inverse(y)
        if shift(z) != y:
            defect = monomial_defect(z)
            cert = {"cocycle": render(z)}
            if defect is not None:
                block, coeff = defect
                cert["defect_block"] = _fmt_tail(block)
                cert["defect_coefficient"] = render(
                    Element(w.n, {((), ()): dict(coeff)}, _normal=True))
            witness = matrix_unit_witness(w, k)
            return cocycles, DecisionReport(
                NOT_PRESERVES, "cocycle", depth=k, failing_level=k,
                witness=witness, certificate=cert)
        cocycles.append(z)
        z_plain = z * zt_prev.adjoint() if k > 1 else z
        zt_prev = z
        key_t = to_json(z)
        key_p = to_json(z_plain)
        if key_t in seen_tilde:
            cert = {"cycle_stream": "accumulated", "cycle_start": seen_tilde[key_t],
                    "period": k - seen_tilde[key_t]}
            return cocycles, DecisionReport(PRESERVES, "cocycle", depth=k, certificate=cert)
        if key_p in seen_plain:
            cert = {"cycle_stream": "stepwise", "cycle_start": seen_plain[key_p],
                    "period": k - seen_plain[key_p]}
            return cocycles, DecisionReport(PRESERVES, "cocycle", depth=k, certificate=cert)
        seen_tilde[key_t] = k
        seen_plain[key_p] = k
    return cocycles, DecisionReport(
        UNDECIDED, "cocycle", depth=depth,
        certificate={"note": f"no failure and no state repetition within depth {depth}"})


def matrix_unit_witness(w, k, cap=14):
    """A level-k matrix unit whose image leaves the core, or None.

    Uses q = w_k* gauge(w_k): the image of S_a S_b* stays in the core iff
    q commutes with it, so two diagonal blocks of q with a common tail
    after position k but different Laurent coefficients name a witness.
    """
    if k > cap:
        return None
    towers = [Element.identity(w.n), w]
    wk = u_tower(w, k, towers)
    q = wk.adjoint() * gauge(wk)
    if not membership(q, "D"):
        if w.n ** (2 * k) <= 4096:
            report = direct_check(w, k)
            return report.witness
        return None
    by_suffix = {}
    for (a, _), c in sorted(q.terms.items()):
        suffix = a[k:]
        prefix = a[:k] if len(a) >= k else a + (1,) * (k - len(a))
        by_suffix.setdefault(suffix, []).append((prefix, c))
    for _, entries in sorted(by_suffix.items()):
        p0, c0 = entries[0]
        for p, c in entries[1:]:
            if c != c0:
                return Element(w.n, {(p0, p): {0: 1}})
    return None


def decide_preserves(w, method="auto", depth=16):
    """DecisionReport for whether the endomorphism of w preserves the core."""
    if method not in ("auto", "graph", "cocycle", "direct"):
        raise ValueError(f"unknown method {method!r}")
    if not is_unitary(w):
        raise ValueError("preservation decisions need a unitary input")

    if method == "direct":
        return direct_check(w, depth)
    if method == "cocycle":
        return cocycle_run(w, depth)[1]
    if method == "graph":
        return _graph_decision(w)

    # auto: graph when applicable, else cocycle cross-checked by direct
    try:
        return _graph_decision(w)
    except (NotSumOfWords, DegreeOutOfRange, IncompleteEdgeRule):
        pass
    report = cocycle_run(w, depth)[1]
    probe = direct_check(w, min(depth, 3))
    if probe.verdict == NOT_PRESERVES:
        if report.verdict == PRESERVES:
            raise RuntimeError(
                "internal disagreement: cocycle certified PRESERVES but a "
                f"level-{probe.failing_level} matrix unit leaves the core")
        if report.verdict == UNDECIDED:
            return probe
        assert report.failing_level <= probe.failing_level
    report.certificate = dict(report.certificate or {})
    report.certificate["cross_check"] = f"direct to level {min(depth, 3)}: {probe.verdict}"
    return report


def _graph_decision(w):
    profile = sum_of_words_profile(w)
    try:
        graph = build_overlap_graph(profile)
    except Psi1NotConstant as bad:
        z1 = left_inverse(w.adjoint() * gauge(w))
        cert = {"class": bad.class_name, "mixed_degrees": bad.values}
        defect = monomial_defect(z1)
        if defect is not None:
            from .exprio import render
            block, coeff = defect
            cert["defect_block"] = _fmt_tail(block)
            cert["defect_coefficient"] = render(
                Element(w.n, {((), ()): dict(coeff)}, _normal=True))
        return DecisionReport(
            NOT_PRESERVES, "graph", depth=1, failing_level=1,
            witness=matrix_unit_witness(w, 1), certificate=cert)
    ok, cert = path_condition(graph)
    cert = dict(cert)
    cert["classes"] = {name: [_fmt_tail(b) for b in members]
                       for name, members in sorted(graph.classes.items())}
    cert["labels"] = {name: graph.label[name] for name in graph.vertices}
    cert["edges"] = [list(e) for e in graph.edges]
    if ok:
        return DecisionReport(PRESERVES, "graph", certificate=cert)
    level = cert["bfs_depth"] + 1
    return DecisionReport(
        NOT_PRESERVES, "graph", depth=level, failing_level=level,
        witness=matrix_unit_witness(w, level), certificate=cert)


def export_dot(graph):
    """Deterministic DOT text for an OverlapGraph."""
    lines = ["digraph overlap {"]
    for v in graph.vertices:
        lines.append(f'    "{v}" [label="{v} : {_fmt_label(graph.label[v])}"];')
    for a, b in sorted(graph.edges):
        lines.append(f'    "{a}" -> "{b}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
