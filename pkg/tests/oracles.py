"""Reference computations that share no code with the package.

They are slow and simple on purpose: plain complex arithmetic, no
polynomial objects, no eigenvalue thresholds borrowed from the library.
"""
import cmath

import numpy as np


def schur_oracle(nodes, values, eps=1e-9):
    """Classical solvability by nested reduction down to one point.

    Returns ``solvable``, ``extremally_solvable`` or ``unsolvable``.
    """
    lam = [complex(z) for z in nodes]
    w = [complex(v) for v in values]
    if any(abs(v) > 1 + eps for v in w):
        return "unsolvable"
    boundary = [abs(v) >= 1 - eps for v in w]
    if any(boundary):
        # maximum principle: only a unimodular constant can take a unimodular value inside
        if all(abs(v - w[0]) <= 1e-7 for v in w):
            return "extremally_solvable"
        return "unsolvable"
    if len(lam) == 1:
        return "solvable"
    l0, w0 = lam[0], w[0]
    new_lam, new_w = [], []
    for li, wi in zip(lam[1:], w[1:]):
        num = (wi - w0) / (1 - w0.conjugate() * wi)
        den = (li - l0) / (1 - l0.conjugate() * li)
        new_lam.append(li)
        new_w.append(num / den)
    return schur_oracle(new_lam, new_w, eps)


def gamma_region(s, p, eps=1e-12):
    """``open``, ``closed`` (boundary) or ``outside`` from the roots of ``t^2 - s t + p``."""
    s, p = complex(s), complex(p)
    disc = cmath.sqrt(s * s - 4 * p)
    r1, r2 = abs((s + disc) / 2), abs((s - disc) / 2)
    top = max(r1, r2)
    if top < 1 - eps:
        return "open"
    if top <= 1 + eps:
        return "closed"
    return "outside"


def blaschke_direct(c, zeros, z):
    out = complex(c)
    for a in zeros:
        out *= (z - a) / (1 - complex(a).conjugate() * z)
    return out


def phasar_fd(f, theta, h=1e-6):
    """Central difference of ``arg f(e^{it})`` in ``t``."""
    a = cmath.phase(f(cmath.exp(1j * (theta + h))) / f(cmath.exp(1j * (theta - h))))
    return a / (2 * h)


def pencil_entry_direct(lam_i, lam_j, u_i, u_j, zi, zj):
    """One entry of the pencil from the defining Pick kernel of the phi-data."""
    def phi(u, z):
        s, p = z
        return (2 * u * p - s) / (2 - u * s)
    di = 1 - u_i * zi[0] / 2
    dj = 1 - u_j * zj[0] / 2
    kernel = (1 - phi(u_i, zi) * phi(u_j, zj).conjugate()) / (1 - lam_i * lam_j.conjugate())
    return di * kernel * dj.conjugate()


def random_blaschke(rng, degree, radius=0.85):
    zeros = radius * np.sqrt(rng.uniform(size=degree)) * np.exp(2j * np.pi * rng.uniform(size=degree))
    return complex(np.exp(2j * np.pi * rng.uniform())), tuple(complex(a) for a in zeros)


def random_nodes(rng, n=3, radius=0.8, sep=0.05):
    while True:
        z = radius * np.sqrt(rng.uniform(size=n)) * np.exp(2j * np.pi * rng.uniform(size=n))
        d = np.abs(z[:, None] - z[None, :]) + np.eye(n)
        if d.min() > sep:
            return z


def random_np_instance(rng):
    """Three nodes with values drawn to cover all three solvability outcomes."""
    nodes = random_nodes(rng)
    kind = rng.integers(3)
    if kind == 0:
        c, zeros = random_blaschke(rng, int(rng.integers(1, 3)))
        values = np.array([blaschke_direct(c, zeros, z) for z in nodes])
    elif kind == 1:
        c, zeros = random_blaschke(rng, 3)
        values = 0.95 * np.array([blaschke_direct(c, zeros, z) for z in nodes])
    else:
        values = 0.95 * np.sqrt(rng.uniform(size=3)) * np.exp(2j * np.pi * rng.uniform(size=3))
    return nodes, values
