"""Exact rational linear algebra: simplex LP, RREF kernels, Smith normal form.

Everything here runs over ``fractions.Fraction`` (or plain ints for the
Smith form) so the stability certificates and stabilizer invariants built
on top are exact.  The LP is a textbook two-phase simplex with Bland's
rule, which both terminates and makes vertex choices deterministic; the
problem sizes in this package are tiny (tens of variables), so no effort
is spent on performance.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

Status = str  # "optimal" | "infeasible" | "unbounded"

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _frac_rows(rows) -> list[list[Fraction]]:
    return [[Fraction(v) for v in row] for row in rows]


def lp_maximize(
    c: Sequence,
    A_ub: Optional[Sequence[Sequence]] = None,
    b_ub: Optional[Sequence] = None,
    A_eq: Optional[Sequence[Sequence]] = None,
    b_eq: Optional[Sequence] = None,
) -> tuple[Status, Optional[list[Fraction]], Optional[Fraction]]:
    """Maximize c.x subject to A_ub x <= b_ub and A_eq x = b_eq.

    Variables are free (internally split into nonnegative pairs).  Returns
    (status, x, value); x and value are None unless status == "optimal".
    All arithmetic is exact.
    """
    c = [Fraction(v) for v in c]
    n = len(c)
    A_ub = _frac_rows(A_ub or [])
    b_ub = [Fraction(v) for v in (b_ub or [])]
    A_eq = _frac_rows(A_eq or [])
    b_eq = [Fraction(v) for v in (b_eq or [])]
    if len(A_ub) != len(b_ub) or len(A_eq) != len(b_eq):
        raise ValueError("constraint matrix/rhs length mismatch")
    for row in A_ub + A_eq:
        if len(row) != n:
            raise ValueError("constraint row length mismatch")

    n_ub = len(A_ub)
    nv = 2 * n + n_ub  # x+ block, x- block, slack block
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for i, row in enumerate(A_ub):
        r = [_ZERO] * nv
        for j, v in enumerate(row):
            r[j] = v
            r[n + j] = -v
        r[2 * n + i] = _ONE
        rows.append(r)
        rhs.append(b_ub[i])
    for row, b in zip(A_eq, b_eq):
        r = [_ZERO] * nv
        for j, v in enumerate(row):
            r[j] = v
            r[n + j] = -v
        rows.append(r)
        rhs.append(b)
    m = len(rows)
    for i in range(m):
        if rhs[i] < 0:
            rows[i] = [-v for v in rows[i]]
            rhs[i] = -rhs[i]

    # Phase 1: artificial variable per row, minimize their sum.
    total = nv + m
    tab = [rows[i] + [_ONE if j == i else _ZERO for j in range(m)] + [rhs[i]] for i in range(m)]
    basis = [nv + i for i in range(m)]
    cost = [_ZERO] * nv + [_ONE] * m + [_ZERO]
    for row in tab:
        cost = [cv - rv for cv, rv in zip(cost, row)]
    _pivot_to_optimum(tab, basis, cost, allowed=total)
    if -cost[-1] != 0:  # leftover artificial mass
        return "infeasible", None, None

    # Drive artificials out of the basis; drop redundant rows.
    keep: list[int] = []
    for i in range(m):
        if basis[i] < nv:
            keep.append(i)
            continue
        piv = next((j for j in range(nv) if tab[i][j] != 0), None)
        if piv is None:
            continue  # redundant constraint row
        _pivot(tab, basis, i, piv)
        keep.append(i)
    tab = [tab[i][:nv] + [tab[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]

    # Phase 2: minimize -c.x.
    obj = [-v for v in c] + [v for v in c] + [_ZERO] * n_ub
    cost = obj + [_ZERO]
    for i, b in enumerate(basis):
        if obj[b] != 0:
            cost = [cv - obj[b] * rv for cv, rv in zip(cost, tab[i])]
    unbounded = not _pivot_to_optimum(tab, basis, cost, allowed=nv)
    if unbounded:
        return "unbounded", None, None

    xsplit = [_ZERO] * nv
    for i, b in enumerate(basis):
        xsplit[b] = tab[i][-1]
    x = [xsplit[j] - xsplit[n + j] for j in range(n)]
    value = sum((cj * xj for cj, xj in zip(c, x)), _ZERO)
    return "optimal", x, value


def _pivot(tab: list[list[Fraction]], basis: list[int], i: int, j: int) -> None:
    piv = tab[i][j]
    tab[i] = [v / piv for v in tab[i]]
    for r in range(len(tab)):
        if r != i and tab[r][j] != 0:
            f = tab[r][j]
            tab[r] = [a - f * b for a, b in zip(tab[r], tab[i])]
    basis[i] = j


def _pivot_to_optimum(tab, basis, cost, allowed: int) -> bool:
    """Run Bland-rule simplex until optimal.  False means unbounded."""
    while True:
        enter = next((j for j in range(allowed) if cost[j] < 0), None)
        if enter is None:
            return True
        leave = None
        best = None
        for i in range(len(tab)):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave is None:
            return False
        _pivot(tab, basis, leave, enter)
        f = cost[enter]
        if f != 0:
            for j in range(len(cost)):
                cost[j] -= f * tab[leave][j]


def lp_feasible(
    A_ub: Optional[Sequence[Sequence]] = None,
    b_ub: Optional[Sequence] = None,
    A_eq: Optional[Sequence[Sequence]] = None,
    b_eq: Optional[Sequence] = None,
    nvars: Optional[int] = None,
) -> tuple[bool, Optional[list[Fraction]]]:
    """Exact feasibility check for the same constraint format as lp_maximize."""
    if nvars is None:
        source = (A_ub or []) or (A_eq or [])
        if not source:
            return True, []
        nvars = len(source[0])
    status, x, _ = lp_maximize([_ZERO] * nvars, A_ub, b_ub, A_eq, b_eq)
    return status == "optimal", x


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the rationals; returns (R, pivot columns)."""
    mat = _frac_rows(rows)
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        sel = next((i for i in range(r, len(mat)) if mat[i][col] != 0), None)
        if sel is None:
            continue
        mat[r], mat[sel] = mat[sel], mat[r]
        inv = 1 / mat[r][col]
        mat[r] = [v * inv for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(col)
        r += 1
        if r == len(mat):
            break
    return mat, pivots


def matrix_rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def kernel_basis(rows: Sequence[Sequence], ncols: Optional[int] = None) -> list[list[Fraction]]:
    """Rational basis of the right kernel {v : rows @ v = 0}."""
    mat = _frac_rows(rows)
    if ncols is None:
        ncols = len(mat[0]) if mat else 0
    if not mat:
        return [[_ONE if i == j else _ZERO for j in range(ncols)] for i in range(ncols)]
    red, pivots = rref(mat)
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        v = [_ZERO] * ncols
        v[f] = _ONE
        for r, p in enumerate(pivots):
            v[p] = -red[r][f]
        basis.append(v)
    return basis


def integer_primitive(vec: Sequence[Fraction]) -> list[int]:
    """Scale a nonzero rational vector to a primitive integer vector."""
    fracs = [Fraction(v) for v in vec]
    if all(v == 0 for v in fracs):
        raise ValueError("zero vector has no primitive form")
    denom = 1
    for v in fracs:
        denom = denom * v.denominator // gcd(denom, v.denominator)
    ints = [int(v * denom) for v in fracs]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    return [v // g for v in ints]


def smith_invariant_factors(rows: Sequence[Sequence[int]]) -> list[int]:
    """Invariant factors d_1 | d_2 | ... | d_r of an integer matrix.

    Only the diagonal of the Smith normal form is produced (no transform
    matrices); zeros are dropped, so the length of the result is the rank.
    """
    a = [[int(v) for v in row] for row in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    for row in a:
        if len(row) != n:
            raise ValueError("ragged matrix")
    factors: list[int] = []
    t = 0
    while t < min(m, n):
        pi, pj = -1, -1
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = abs(a[i][j])
                if v and (best is None or v < best):
                    best, pi, pj = v, i, j
        if best is None:
            break
        a[t], a[pi] = a[pi], a[t]
        for row in a:
            row[t], row[pj] = row[pj], row[t]
        while True:
            changed = False
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    if a[i][t]:
                        a[t], a[i] = a[i], a[t]
                        changed = True
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    for row in a:
                        row[j] -= q * row[t]
                    if a[t][j]:
                        for row in a:
                            row[t], row[j] = row[j], row[t]
                        changed = True
            if not changed:
                break
        stray = next(
            ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % a[t][t]),
            None,
        )
        if stray is not None:
            a[t] = [x + y for x, y in zip(a[t], a[stray[0]])]
            continue
        factors.append(abs(a[t][t]))
        t += 1
    return factors
