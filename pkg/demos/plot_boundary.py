"""Plot |s| on the circle and the royal nodes for a solved problem.

Needs matplotlib (``pip install .[plot]``). Writes ``boundary.png`` in the
current directory.
"""
import sys

import numpy as np

from gammainterp import InterpProblem, solve_3pt
from gammainterp.corpus import DEFAULT_NODES, build

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    sys.exit("matplotlib is not installed; try: pip install '.[plot]'")

name = sys.argv[1] if len(sys.argv) > 1 else "ex52_2"
rep = solve_3pt(InterpProblem.from_map(build(name), DEFAULT_NODES))
if rep.h is None:
    sys.exit(f"{name}: no map constructed ({rep.status})")

theta = np.linspace(0, 2 * np.pi, 2000)
abs_s = np.abs(rep.h.s(np.exp(1j * theta)))
fig, ax = plt.subplots(figsize=(7, 3.5))
ax.plot(theta, abs_s, lw=1.2)
ax.axhline(2, color="grey", ls="--", lw=0.8)
for node in rep.royal_nodes:
    if node.on_circle:
        ax.axvline(np.angle(node.value) % (2 * np.pi), color="crimson", lw=0.8)
ax.set_xlabel("theta")
ax.set_ylabel("|s(e^{i theta})|")
ax.set_title(f"{name}: {rep.status}, {rep.classification}")
fig.tight_layout()
fig.savefig("boundary.png", dpi=120)
print("wrote boundary.png")
