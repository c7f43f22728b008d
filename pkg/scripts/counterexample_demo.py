"""Walk through the core-preservation counterexample end to end.

Builds the pair (u_cp, v_cp), perturbs u_cp into w_cp = v_cp u_cp, and
shows that w_cp acts like a core unitary on the core UHF subalgebra even
though it has off-degree terms itself: overlap graph, path condition,
cocycle stream, and the coboundary witness.  A negative control (w0)
shows what failure looks like.

Run as:  python scripts/counterexample_demo.py [--depth K]
"""

import argparse

from cuntzcalc.algebra import membership
from cuntzcalc.decide import (
    build_overlap_graph,
    cocycle_run,
    decide_preserves,
    export_dot,
    path_condition,
)
from cuntzcalc.endo import gauge, is_unitary, lambda_apply, left_inverse, shift, sum_of_words_profile
from cuntzcalc.exprio import render, resolve
from cuntzcalc.intertwine import (
    agree_on_F,
    coboundary_witness,
    intertwiner_space,
    is_self_intertwiner,
    perturb,
)


def banner(title):
    print()
    print(title)
    print("-" * len(title))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--depth", type=int, default=4,
                    help="level for the core-agreement check (default 4)")
    ap.add_argument("--dot", help="also write the overlap graph as DOT")
    args = ap.parse_args()

    u = resolve("@u_cp")
    v = resolve("@v_cp")

    banner("the pair (u, v)")
    print(f"u = {render(u)}")
    print(f"v = {render(v)}")
    print(f"u unitary: {is_unitary(u)}, in the core: {membership(u, 'F')}")
    print(f"v unitary: {is_unitary(v)}, in the core: {membership(v, 'F')}")
    print(f"v is a self-intertwiner of u: {is_self_intertwiner(u, v)}")

    banner("the perturbed unitary w = v u")
    w = perturb(u, v)
    print(f"w = {render(w)}")
    print(f"w in the core: {membership(w, 'F')}")
    ok, level = agree_on_F(u, w, args.depth)
    print(f"endomorphisms of u and w agree on the core to level {args.depth}: {ok}")

    banner("overlap graph of w")
    graph = build_overlap_graph(sum_of_words_profile(w))
    for name in graph.vertices:
        value = graph.label[name]
        print(f"  class {name}: label {value:+d}" if value
              else f"  class {name}: label 0")
    for a, b in graph.edges:
        print(f"  {a} -> {b}")
    holds, cert = path_condition(graph)
    print(f"path condition: {holds} {cert}")
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(export_dot(graph))
        print(f"wrote {args.dot}")

    banner("diagonal gauge cocycles of w")
    cocycles, report = cocycle_run(w, 12)
    for i, z in enumerate(cocycles, 1):
        print(f"  z~({i}) = {render(z)}")
    print(f"verdict: {report.verdict} ({report.certificate})")

    banner("coboundary witness")
    U, z = coboundary_witness(w)
    print(f"U = {render(U)}")
    print(f"z = {render(z)}")
    lhs = left_inverse(w.adjoint() * gauge(w))
    print(f"identity phihat(w* gauge(w)) = z gauge(z*): {lhs == z * gauge(z.adjoint())}")

    banner("intertwiner space of u at level 3")
    space = intertwiner_space(u, 3)
    non_core = sum(1 for b in space.basis if not membership(b, "F"))
    print(f"dimension {space.dimension}, {non_core} basis elements outside the core")
    print(f"contains v: {space.contains(v)}")

    banner("negative control w0")
    w0 = resolve("S1 S11* + S21 S12* + S22 S2*")
    print(f"w0 = {render(w0)}")
    report = decide_preserves(w0)
    print(f"verdict: {report.verdict} at level {report.failing_level}")
    print(f"witness: {render(report.witness)}")
    image = lambda_apply(w0, report.witness)
    print(f"its image {render(image)} stays in the core: {membership(image, 'F')}")


if __name__ == "__main__":
    main()
