"""Moment maps for the torus action on V and T*V, J-weights, flow traces.

Conventions (fixed once here, inherited everywhere):

    <mu(v), e_a>      = -1/2 sum_i beta^i_a |v_i|^2 + theta_a
    <M(x, z), e_a>    = sqrt(-1) sum_i beta^i_a x_i z_i
    <mu_I(x, z), e_a> = -1/2 sum_i beta^i_a (|x_i|^2 - |z_i|^2) + theta_a
    mu_hk             = (mu_I, Re M, Im M)
    psi(x, z)         = -1/2 sum_i |z_i|^2

All evaluations are exact on exact points (Fractions / Gaussian
rationals) and float on numeric ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DimensionMismatchError
from .rep_core import (
    SUPPORT_TOL,
    AmbientPoint,
    Cocharacter,
    CotangentPoint,
    WeightSystem,
    exact_abs2,
)
from .scalars import QC

KAHLER = "kahler"
HOLOMORPHIC = "holomorphic"
HYPERKAHLER = "hyperkahler"
CIRCLE = "circle"

FLOW_HORIZON = 30.0
FLOW_CAP = 1e6


@dataclass(frozen=True)
class MomentValue:
    """A tagged moment-map value; the vector is exact or float per input."""

    kind: str
    value: tuple

    def as_floats(self) -> np.ndarray:
        out = []
        for v in self.value:
            if isinstance(v, QC):
                out.extend([float(v.re), float(v.im)])
            elif isinstance(v, complex):
                out.extend([v.real, v.imag])
            else:
                out.append(float(v))
        return np.array(out)

    def norm(self) -> float:
        return float(np.linalg.norm(self.as_floats()))

    def to_json(self) -> dict:
        def enc(v):
            if isinstance(v, QC):
                return [_enc_frac(v.re), _enc_frac(v.im)]
            if isinstance(v, Fraction):
                return _enc_frac(v)
            if isinstance(v, complex):
                return [v.real, v.imag]
            return float(v)

        return {"kind": self.kind, "value": [enc(v) for v in self.value]}


def _enc_frac(q: Fraction):
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def mu(ws: WeightSystem, v: AmbientPoint) -> MomentValue:
    """Kahler moment map of the V-action, shifted by theta."""
    if v.n != ws.n:
        raise DimensionMismatchError("point length != weight count")
    mods = v.moduli_squared()
    if v.is_exact:
        vals = []
        for a in range(ws.rank):
            s = sum((Fraction(ws.weights[i][a]) * mods[i] for i in range(ws.n)), Fraction(0))
            vals.append(ws.theta[a] - s / 2)
        return MomentValue(KAHLER, tuple(vals))
    arr = ws.theta_array() - 0.5 * (ws.beta_array().T @ np.array(mods, dtype=float))
    return MomentValue(KAHLER, tuple(float(x) for x in arr))


def hol_moment(ws: WeightSystem, p: CotangentPoint) -> MomentValue:
    """Holomorphic symplectic moment map M(x, z) = sqrt(-1) sum beta^i x_i z_i."""
    if p.n != ws.n:
        raise DimensionMismatchError("point length != weight count")
    if p.is_exact and all(isinstance(c, QC) for c in p.x) and all(
        isinstance(c, QC) for c in p.z
    ):
        vals = []
        for a in range(ws.rank):
            s = QC(Fraction(0), Fraction(0))
            for i in range(ws.n):
                s = s + (p.x[i] * p.z[i]) * Fraction(ws.weights[i][a])
            vals.append(s.times_i())
        return MomentValue(HOLOMORPHIC, tuple(vals))
    q = p.to_numeric()
    prod = q.x * q.z
    vals = 1j * (prod @ ws.beta_array().astype(float))
    return MomentValue(HOLOMORPHIC, tuple(complex(v) for v in vals))


def mu_hyperkahler(ws: WeightSystem, p: CotangentPoint) -> MomentValue:
    """The triple (mu_I, Re M, Im M) as a real 3k-vector."""
    if p.n != ws.n:
        raise DimensionMismatchError("point length != weight count")
    hol = hol_moment(ws, p)
    if p.is_exact and all(isinstance(c, QC) for c in tuple(p.x) + tuple(p.z)):
        mods_x = [c.abs2() for c in p.x]
        mods_z = [c.abs2() for c in p.z]
        mu_i = []
        for a in range(ws.rank):
            s = sum(
                (Fraction(ws.weights[i][a]) * (mods_x[i] - mods_z[i]) for i in range(ws.n)),
                Fraction(0),
            )
            mu_i.append(ws.theta[a] - s / 2)
        re_m = [v.re for v in hol.value]
        im_m = [v.im for v in hol.value]
        return MomentValue(HYPERKAHLER, tuple(mu_i + re_m + im_m))
    q = p.to_numeric()
    mods = np.abs(q.x) ** 2 - np.abs(q.z) ** 2
    mu_i = ws.theta_array() - 0.5 * (ws.beta_array().T.astype(float) @ mods)
    hv = np.array(hol.value, dtype=complex)
    vals = list(map(float, mu_i)) + list(map(float, hv.real)) + list(map(float, hv.imag))
    return MomentValue(HYPERKAHLER, tuple(vals))


def psi(p: CotangentPoint) -> Fraction | float:
    """The U(1) moment map -1/2 ||z||^2 (nonpositive; 0 on the zero section)."""
    if p.is_exact:
        return -sum((exact_abs2(c) for c in p.z), Fraction(0)) / 2
    return float(-0.5 * np.sum(np.abs(p.z) ** 2))


def _sgn(x) -> int:
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0


def j_mu_weight(ws: WeightSystem, p: CotangentPoint, xi, tol: float = 1e-10):
    """J-weight of (p, xi): always 0 or +inf.

    Zero iff for every coordinate either beta^i(xi) = 0 or
    x_i = sgn(beta^i(xi)) * i * conj(z_i); the coordinate then contracts
    along the J-flow instead of blowing up.
    """
    exact_xi = (
        tuple(Fraction(v) for v in (xi.xi if isinstance(xi, Cocharacter) else xi))
    )
    if len(exact_xi) != ws.rank:
        raise DimensionMismatchError("cocharacter length != rank")
    if p.n != ws.n:
        raise DimensionMismatchError("point length != weight count")
    exact = p.is_exact and all(isinstance(c, QC) for c in tuple(p.x) + tuple(p.z))
    q = None if exact else p.to_numeric()
    for i in range(ws.n):
        lam = ws.weight_pairing(i, exact_xi)
        if lam == 0:
            continue
        s = _sgn(lam)
        if exact:
            rhs = p.z[i].conj().times_i() * Fraction(s)
            if not (p.x[i] - rhs).is_zero():
                return math.inf
        else:
            rhs = s * 1j * np.conj(q.z[i])
            if abs(q.x[i] - rhs) > tol:
                return math.inf
    return 0


def flow_value(ws: WeightSystem, v: AmbientPoint, xi, t: float) -> float:
    """<mu(exp(sqrt(-1) t xi) v), xi> in closed form, capped at FLOW_CAP."""
    xi_arr = xi.as_floats() if isinstance(xi, Cocharacter) else np.array([float(u) for u in xi])
    lam = ws.beta_array().astype(float) @ xi_arr
    mods = np.array(v.to_numeric().moduli_squared(), dtype=float)
    # only the support contributes; a dead coordinate with a growing
    # exponent would otherwise poison the sum with 0 * inf
    live = mods > SUPPORT_TOL**2
    theta_term = float(ws.theta_array() @ xi_arr)
    with np.errstate(over="ignore"):
        scaled = mods[live] * np.exp(-2.0 * lam[live] * t)
    val = -0.5 * float(np.dot(scaled, lam[live])) + theta_term
    if not math.isfinite(val) or val > FLOW_CAP:
        return math.inf
    return val


def flow_trace(ws: WeightSystem, v: AmbientPoint, xi, t_grid: Sequence[float]) -> list[float]:
    """Sample t -> <mu(exp(sqrt(-1) t xi) v), xi> on an increasing grid.

    The sequence is non-decreasing (up to roundoff); values past the cap,
    or float overflow, are flagged as +inf.
    """
    ts = list(t_grid)
    if any(b < a for a, b in zip(ts, ts[1:])):
        raise ValueError("t_grid must be non-decreasing")
    if v.n != ws.n:
        raise DimensionMismatchError("point length != weight count")
    return [flow_value(ws, v, xi, t) for t in ts]


def flow_tail(
    ws: WeightSystem,
    v: AmbientPoint,
    xi,
    horizon: float = FLOW_HORIZON,
    cap: float = FLOW_CAP,
) -> float:
    """Tail estimate of the mu-weight: the flow value at the horizon.

    Returns +inf when the value exceeds the cap (the divergent case);
    otherwise the finite limit estimate.
    """
    val = flow_value(ws, v, xi, horizon)
    if val is math.inf or val > cap:
        return math.inf
    return val
