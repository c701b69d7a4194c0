"""Royal nodes, targets and classification across the example catalogue.

Also shows what the solver reports for data drawn from a caddywhompus map:
it neither claims a solution nor refutes solvability.
"""

from gammainterp import InterpProblem, solve_3pt
from gammainterp.corpus import CATALOGUE, build
from gammainterp.errors import GammaInterpError
from gammainterp.gamma import royal_nodes
from gammainterp.pipeline import classify

for name in CATALOGUE:
    h = build(name)
    try:
        cls = classify(h)
    except GammaInterpError as exc:
        print(f"{name:9s} {exc}")
        continue
    nodes = [n for n in royal_nodes(h) if n.on_circle] if cls.kind != "royal_map" else []
    mult = ", ".join(f"{n.value:.3f} (x{n.multiplicity})" for n in nodes) or "-"
    print(f"{name:9s} degree {cls.degree}  {cls.kind:13s} circle nodes: {mult}")

print("\nsolving three-point data sampled from each map:")
nodes = [0.3, -0.2, 0.4j]
for name in ("ex52_1", "ex52_2", "ex52_3", "excaddy2", "excaddy3", "excaddy4"):
    rep = solve_3pt(InterpProblem.from_map(build(name), nodes))
    lmin = rep.pencil.min_eigenvalue if rep.pencil is not None else float("nan")
    print(f"  {name:9s} {rep.status:20s} class={rep.classification!s:22s} pencil min {lmin:.2e}")
