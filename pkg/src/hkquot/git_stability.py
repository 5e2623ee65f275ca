"""Exact GIT stability for torus weight systems.

Everything is decided by rational linear programming on the combinatorial
data (weights, character, coordinate supports):

* a point v is semistable iff theta lies in Cone{beta^i : i in supp(v)}
  (Farkas dual of the Hilbert-Mumford inequality);
* it is stable iff additionally no nonzero xi satisfies beta^i(xi) >= 0 on
  the support with <theta, xi> <= 0;
* it is polystable iff theta lies in the relative interior of that cone,
  equivalently iff the Kempf-Ness functional attains its minimum on the
  orbit (Stiemke duality); the verdict records this as an extra flag;
* destabilizing certificates are integral cocharacters extracted from LP
  vertices, so they can be re-checked by exact mu-weight evaluation.

Unstable-locus enumeration walks sign chambers of the hyperplane
arrangement {beta^i(xi) = 0} inside the open half-space <theta, xi> < 0;
each chamber contributes the maximal support it destabilizes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import inf
from typing import Iterable, Optional, Sequence

from .errors import BoundExceededError, DimensionMismatchError
from .exactlin import integer_primitive, lp_feasible, lp_maximize, smith_invariant_factors
from .rep_core import AmbientPoint, Cocharacter, CotangentPoint, WeightSystem, support

STABLE = "stable"
STRICTLY_SEMISTABLE = "strictly-semistable"
UNSTABLE = "unstable"

_Z = Fraction(0)
_I = Fraction(1)

DEFAULT_BOUND = 20


@dataclass(frozen=True)
class StabilityVerdict:
    status: str
    certificate: Optional[Cocharacter]
    polystable: bool

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "certificate": None if self.certificate is None else self.certificate.to_json(),
            "polystable": self.polystable,
        }


@dataclass(frozen=True)
class StabilizerInfo:
    """Structure of the stabilizer of any point with a given support.

    The stabilizer of {v : supp(v) = S} is the kernel of the torus map
    given by the weight rows on S; its shape is read off the Smith normal
    form: a subtorus of dimension k - rank(B_S) times a product of cyclic
    groups of the invariant-factor orders > 1.
    """

    subtorus_rank: int
    finite_invariants: tuple[int, ...]

    @property
    def order(self) -> Optional[int]:
        if self.subtorus_rank:
            return None
        out = 1
        for d in self.finite_invariants:
            out *= d
        return out

    @property
    def is_trivial(self) -> bool:
        return self.subtorus_rank == 0 and not self.finite_invariants

    @property
    def signature(self) -> tuple:
        return (self.subtorus_rank, self.finite_invariants)

    def to_json(self) -> dict:
        return {
            "subtorus_rank": self.subtorus_rank,
            "finite_invariants": list(self.finite_invariants),
            "order": self.order,
        }


@dataclass(frozen=True)
class StratumRecord:
    stabilizer: StabilizerInfo
    supports: tuple[frozenset, ...]
    is_open: bool

    def to_json(self) -> dict:
        return {
            "stabilizer": self.stabilizer.to_json(),
            "supports": [sorted(s) for s in self.supports],
            "open": self.is_open,
        }


def _as_xi(xi) -> tuple[Fraction, ...]:
    if isinstance(xi, Cocharacter):
        return tuple(Fraction(v) for v in xi.xi)
    return tuple(Fraction(v) for v in xi)


def mu_weight(ws: WeightSystem, v: AmbientPoint, xi) -> Fraction | float:
    """The mu-weight of (v, xi): +inf if the flow blows up, else <theta, xi>.

    Coordinate i scales like e^{-beta^i(xi) t} along the imaginary flow, so
    any supported index with beta^i(xi) < 0 forces the weight to +infinity;
    otherwise the limit is <theta, xi> exactly.
    """
    exact_xi = _as_xi(xi)
    if len(exact_xi) != ws.rank:
        raise DimensionMismatchError("cocharacter length != rank")
    if v.n != ws.n:
        raise DimensionMismatchError("point length != weight count")
    for i in support(v):
        if ws.weight_pairing(i, exact_xi) < 0:
            return inf
    return Fraction(ws.theta_pairing(exact_xi))


def semistable_support(ws: WeightSystem, S: Iterable[int]) -> bool:
    """True iff theta lies in Cone{beta^i : i in S} (exact LP feasibility)."""
    idx = sorted(set(S))
    feasible, _ = lp_feasible(
        A_ub=[[-_I if j == i else _Z for j in range(len(idx))] for i in range(len(idx))],
        b_ub=[_Z] * len(idx),
        A_eq=[[Fraction(ws.weights[i][a]) for i in idx] for a in range(ws.rank)],
        b_eq=list(ws.theta),
        nvars=len(idx),
    )
    return feasible


def polystable_support(ws: WeightSystem, S: Iterable[int]) -> bool:
    """True iff theta is in the relative interior of the support cone."""
    _, _, topt = _cone_membership_lp(ws, sorted(set(S)))
    return topt is not None and topt > 0


def _cone_membership_lp(ws: WeightSystem, idx: list[int]):
    """max t s.t. sum s_i beta^i = theta, s_i >= max(t, 0), t <= 1.

    Feasible iff semistable; optimum > 0 iff polystable.
    Returns (status, s, t_opt).
    """
    m = len(idx)
    nv = m + 1  # s_0..s_{m-1}, t
    A_ub = []
    b_ub = []
    for i in range(m):
        row = [_Z] * nv
        row[i] = -_I
        A_ub.append(row)
        b_ub.append(_Z)  # -s_i <= 0
        row = [_Z] * nv
        row[i] = -_I
        row[m] = _I
        A_ub.append(row)
        b_ub.append(_Z)  # t - s_i <= 0
    row = [_Z] * nv
    row[m] = _I
    A_ub.append(row)
    b_ub.append(_I)  # t <= 1
    A_eq = [[Fraction(ws.weights[i][a]) for i in idx] + [_Z] for a in range(ws.rank)]
    c = [_Z] * m + [_I]
    status, x, value = lp_maximize(c, A_ub, b_ub, A_eq, list(ws.theta))
    if status != "optimal":
        return status, None, None
    return status, x[:m], value


def _unstable_certificate_lp(ws: WeightSystem, idx: list[int]) -> Cocharacter:
    """Vertex minimizing <theta, xi> over {B_S xi >= 0} cap the unit box."""
    k = ws.rank
    A_ub = []
    b_ub = []
    for i in idx:
        A_ub.append([-Fraction(ws.weights[i][a]) for a in range(k)])
        b_ub.append(_Z)
    for j in range(k):
        for sgn in (1, -1):
            row = [_Z] * k
            row[j] = Fraction(sgn)
            A_ub.append(row)
            b_ub.append(_I)
    status, x, value = lp_maximize([-t for t in ws.theta], A_ub, b_ub)
    if status != "optimal" or value <= 0:
        raise AssertionError("certificate LP must have negative theta optimum")
    return Cocharacter.exact_from(integer_primitive(x))


def _stable_witness_lp(ws: WeightSystem, idx: list[int]) -> Optional[Cocharacter]:
    """A nonzero xi with B_S xi >= 0 and <theta, xi> <= 0, or None.

    Maximizes each +-xi_j over the cone cut with the unit sup-norm box;
    the polytope is {0} exactly when the point is stable.
    """
    k = ws.rank
    A_ub = []
    b_ub = []
    for i in idx:
        A_ub.append([-Fraction(ws.weights[i][a]) for a in range(k)])
        b_ub.append(_Z)
    A_ub.append(list(ws.theta))
    b_ub.append(_Z)
    for j in range(k):
        for sgn in (1, -1):
            row = [_Z] * k
            row[j] = Fraction(sgn)
            A_ub.append(row)
            b_ub.append(_I)
    for j in range(k):
        for sgn in (1, -1):
            c = [_Z] * k
            c[j] = Fraction(sgn)
            status, x, value = lp_maximize(c, A_ub, b_ub)
            if status == "optimal" and value > 0:
                return Cocharacter.exact_from(integer_primitive(x))
    return None


def classify_support(ws: WeightSystem, S: Iterable[int]) -> StabilityVerdict:
    """Stability of any point whose support is exactly S."""
    idx = sorted(set(S))
    for i in idx:
        if not 0 <= i < ws.n:
            raise DimensionMismatchError(f"support index {i} out of range")
    return _classify_support_cached(ws, frozenset(idx))


@lru_cache(maxsize=1 << 16)
def _classify_support_cached(ws: WeightSystem, S: frozenset) -> StabilityVerdict:
    # the verdict is immutable and depends only on (ws, S), so sharing a
    # cached instance across callers is sound
    idx = sorted(S)
    status, _, topt = _cone_membership_lp(ws, idx)
    if status != "optimal":
        return StabilityVerdict(UNSTABLE, _unstable_certificate_lp(ws, idx), polystable=False)
    witness = _stable_witness_lp(ws, idx)
    if witness is None:
        return StabilityVerdict(STABLE, None, polystable=True)
    return StabilityVerdict(STRICTLY_SEMISTABLE, witness, polystable=topt > 0)


def classify_point(ws: WeightSystem, v: AmbientPoint) -> StabilityVerdict:
    """Hilbert-Mumford classification of v with an exact certificate."""
    if v.n != ws.n:
        raise DimensionMismatchError("point length != weight count")
    return classify_support(ws, support(v))


def inclusion_maximal(sets: Iterable[frozenset]) -> list[frozenset]:
    """Filter a family of index sets down to its inclusion-maximal members."""
    family = sorted(set(frozenset(s) for s in sets), key=lambda s: (-len(s), sorted(s)))
    out: list[frozenset] = []
    for s in family:
        if not any(s < t for t in out):
            out.append(s)
    return sorted(out, key=sorted)


def unstable_maximal_supports(
    ws: WeightSystem, bound: int = DEFAULT_BOUND
) -> list[frozenset]:
    """Maximal destabilized supports, one per destabilizing sign chamber.

    Enumerates the sign vectors of the arrangement {beta^i(xi) = 0} that
    are realized inside {<theta, xi> < 0} and collects, for each, the set
    S(xi) = {i : beta^i(xi) >= 0}.  Every point whose support lies inside
    some S(xi) is unstable, and every unstable point's support is inside
    one of them.  The empty set is reported only when it is the only
    destabilized support (then only the origin is unstable).  Output is
    sorted lexicographically.
    """
    if ws.n > bound:
        raise BoundExceededError(f"n={ws.n} exceeds enumeration bound {bound}")
    k = ws.rank
    zero_idx = [i for i in range(ws.n) if all(v == 0 for v in ws.weights[i])]

    # Group coordinates by the line R beta^i: canonical primitive direction
    # plus an orientation per index.
    lines: dict[tuple[int, ...], list[tuple[int, int]]] = {}
    for i in range(ws.n):
        w = ws.weights[i]
        if all(v == 0 for v in w):
            continue
        prim = integer_primitive([Fraction(v) for v in w])
        lead = next(v for v in prim if v != 0)
        orient = 1
        if lead < 0:
            prim = [-v for v in prim]
            orient = -1
        lines.setdefault(tuple(prim), []).append((i, orient))
    dirs = sorted(lines)

    def realized(assign: list[int]) -> bool:
        # max t s.t. sign constraints, <theta, xi> <= -t, |xi| <= 1, t <= 1
        nv = k + 1
        A_ub: list[list[Fraction]] = []
        b_ub: list[Fraction] = []
        A_eq: list[list[Fraction]] = []
        b_eq: list[Fraction] = []
        for q, sgn in zip(dirs, assign):
            if sgn == 0:
                A_eq.append([Fraction(v) for v in q] + [_Z])
                b_eq.append(_Z)
            else:
                A_ub.append([-Fraction(sgn * v) for v in q] + [_I])
                b_ub.append(_Z)
        A_ub.append([Fraction(t) for t in ws.theta] + [_I])
        b_ub.append(_Z)
        for j in range(k):
            for sgn in (1, -1):
                row = [_Z] * nv
                row[j] = Fraction(sgn)
                A_ub.append(row)
                b_ub.append(_I)
        trow = [_Z] * k + [_I]
        A_ub.append(trow)
        b_ub.append(_I)
        status, _, value = lp_maximize(trow, A_ub, b_ub, A_eq, b_eq)
        return status == "optimal" and value > 0

    found: set[frozenset] = set()

    def walk(assign: list[int]) -> None:
        if not realized(assign):
            return
        if len(assign) == len(dirs):
            S = set(zero_idx)
            for q, sgn in zip(dirs, assign):
                for i, orient in lines[q]:
                    if orient * sgn >= 0:
                        S.add(i)
            found.add(frozenset(S))
            return
        for sgn in (1, 0, -1):
            walk(assign + [sgn])

    walk([])
    nonempty = sorted((s for s in found if s), key=sorted)
    if nonempty:
        return nonempty
    return sorted(found, key=sorted)


def stabilizer(ws: WeightSystem, S: Iterable[int]) -> StabilizerInfo:
    """Stabilizer shape of a point with support S, via Smith normal form."""
    idx = sorted(set(S))
    rows = [list(ws.weights[i]) for i in idx]
    factors = smith_invariant_factors(rows) if rows else []
    return StabilizerInfo(
        subtorus_rank=ws.rank - len(factors),
        finite_invariants=tuple(d for d in factors if d > 1),
    )


def semistable_supports(ws: WeightSystem, bound: int = DEFAULT_BOUND) -> list[frozenset]:
    """All semistable supports, by downward DFS from the full support.

    Semistability is monotone (up-closed) in the support, so any
    non-semistable set prunes its whole subset tree.  Cone membership
    depends only on the set of distinct weight vectors, which caches most
    of the LP calls for repeated weights.
    """
    if ws.n > bound:
        raise BoundExceededError(f"n={ws.n} exceeds enumeration bound {bound}")
    cone_cache: dict[frozenset, bool] = {}

    def ok(S: frozenset) -> bool:
        key = frozenset(ws.weights[i] for i in S)
        if key not in cone_cache:
            cone_cache[key] = semistable_support(ws, S)
        return cone_cache[key]

    full = frozenset(range(ws.n))
    out: list[frozenset] = []
    seen: set[frozenset] = set()
    stack = [full]
    while stack:
        S = stack.pop()
        if S in seen:
            continue
        seen.add(S)
        if not ok(S):
            continue
        out.append(S)
        for i in S:
            stack.append(S - {i})
    return sorted(out, key=lambda s: (sorted(s), len(s)))


def quotient_smooth(
    ws: WeightSystem, bound: int = DEFAULT_BOUND
) -> tuple[bool, Optional[frozenset]]:
    """(True, None) iff every semistable support has trivial stabilizer.

    Otherwise returns (False, S) for the first offending semistable
    support in lexicographic order.
    """
    for S in semistable_supports(ws, bound):
        if not stabilizer(ws, S).is_trivial:
            return False, S
    return True, None


def quotient_compact(ws: WeightSystem) -> bool:
    """True iff the recession cone {s >= 0, sum s_i beta^i = 0} is trivial."""
    n = ws.n
    A_ub = [[-_I if j == i else _Z for j in range(n)] for i in range(n)]
    b_ub = [_Z] * n
    A_eq = [[Fraction(ws.weights[i][a]) for i in range(n)] for a in range(ws.rank)]
    b_eq = [_Z] * ws.rank
    A_eq.append([_I] * n)
    b_eq.append(_I)
    feasible, _ = lp_feasible(A_ub, b_ub, A_eq, b_eq, nvars=n)
    return not feasible


def kahler_strata(ws: WeightSystem, bound: int = DEFAULT_BOUND) -> list[StratumRecord]:
    """Semistable supports grouped by stabilizer signature.

    The trivial-stabilizer group (when present) is the open stratum and
    sorts first; remaining groups follow by signature.
    """
    groups: dict[tuple, list[frozenset]] = {}
    infos: dict[tuple, StabilizerInfo] = {}
    for S in semistable_supports(ws, bound):
        info = stabilizer(ws, S)
        groups.setdefault(info.signature, []).append(S)
        infos[info.signature] = info
    records = []
    for sig in sorted(groups, key=lambda s: (s[0] != 0 or bool(s[1]), s)):
        info = infos[sig]
        records.append(
            StratumRecord(
                stabilizer=info,
                supports=tuple(sorted(groups[sig], key=sorted)),
                is_open=info.is_trivial,
            )
        )
    return records
