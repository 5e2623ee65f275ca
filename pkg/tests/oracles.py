"""Independent cross-checks used by the test-suite.

Everything in here is done the dumb way on purpose: full enumeration over
integer boxes, closed-form flows, central differences.  Agreement with the
package is only meaningful if these paths share no code with it.
"""

from fractions import Fraction
from functools import lru_cache

import numpy as np

from hkquot import AmbientPoint, WeightSystem

BOX = 10


@lru_cache(maxsize=None)
def _box_lattice(k: int, box: int) -> np.ndarray:
    """All integer vectors in [-box, box]^k except 0, as an (M, k) array."""
    axes = np.meshgrid(*[np.arange(-box, box + 1)] * k, indexing="ij")
    pts = np.stack([a.ravel() for a in axes], axis=1).astype(np.int64)
    return pts[np.any(pts != 0, axis=1)]


def box_classify_support(ws: WeightSystem, support, box: int = BOX):
    """Brute-force Hilbert-Mumford search over the integer box.

    Returns (status, xi) with xi an integer tuple witnessing the verdict
    (None when stable).  The pairing signs are computed in exact integer
    arithmetic: theta is cleared to a common denominator first.
    """
    idx = sorted(support)
    lattice = _box_lattice(ws.rank, box)
    if idx:
        bmat = np.array([ws.weights[i] for i in idx], dtype=np.int64)
        cone = np.all(lattice @ bmat.T >= 0, axis=1)
    else:
        cone = np.ones(len(lattice), dtype=bool)
    den = np.lcm.reduce([t.denominator for t in ws.theta])
    tnum = np.array([int(t * den) for t in ws.theta], dtype=np.int64)
    tvals = lattice @ tnum
    hits = cone & (tvals <= 0)
    if not np.any(hits):
        return "stable", None
    at = int(np.argmin(np.where(hits, tvals, np.iinfo(np.int64).max)))
    xi = tuple(int(v) for v in lattice[at])
    if tvals[at] < 0:
        return "unstable", xi
    return "strictly-semistable", xi


def j_flow_value(ws: WeightSystem, p, xi, t: float) -> float:
    """<Re M(flow_t(p)), xi> along the J-direction flow, in closed form.

    Writing y = conj(z) and lam_i = beta^i(xi), the flow solves
    (x', y') = (-i lam y, i lam x), i.e. hyperbolic rotation of each
    coordinate pair.  The value is Sum_i lam_i Re(i x_i conj(y_i)).
    """
    q = p.to_numeric()
    lam = np.array([float(ws.weight_pairing(i, xi)) for i in range(ws.n)])
    x = np.asarray(q.x, dtype=complex)
    y = np.conj(np.asarray(q.z, dtype=complex))
    ch = np.cosh(lam * t)
    sh = np.sinh(lam * t)
    xt = ch * x - 1j * sh * y
    yt = 1j * sh * x + ch * y
    return float(np.sum(lam * np.real(1j * xt * np.conj(yt))))


def central_gradient(f, x0: np.ndarray, h: float = 1e-5) -> np.ndarray:
    x0 = np.asarray(x0, dtype=float)
    g = np.zeros_like(x0)
    for i in range(len(x0)):
        e = np.zeros_like(x0)
        e[i] = h
        g[i] = (f(x0 + e) - f(x0 - e)) / (2.0 * h)
    return g


def random_weight_system(rng, nmax: int = 6, kmax: int = 3, wmax: int = 3) -> WeightSystem:
    k = int(rng.integers(1, kmax + 1))
    n = int(rng.integers(1, nmax + 1))
    weights = tuple(
        tuple(int(v) for v in rng.integers(-wmax, wmax + 1, size=k)) for _ in range(n)
    )
    theta = tuple(
        Fraction(int(rng.integers(-4, 5)), int(rng.integers(1, 5))) for _ in range(k)
    )
    return WeightSystem(rank=k, weights=weights, theta=theta)


def random_ambient(rng, n: int, zero_prob: float = 0.35) -> AmbientPoint:
    coords = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    coords[rng.random(n) < zero_prob] = 0.0
    return AmbientPoint.numeric(coords)


def random_cocharacter(rng, k: int, bound: int = 3) -> tuple:
    return tuple(int(v) for v in rng.integers(-bound, bound + 1, size=k))
