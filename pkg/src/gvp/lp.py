"""Exact rational linear programming.

A small dense two-phase simplex over exact rationals with Bland's pivoting
rule, which guarantees termination.  Every optimal solve also extracts the
dual vector from the final tableau and verifies strong duality from scratch
(sign conditions, dual feasibility, primal value == dual value), so a
returned optimum is a certified optimum.

gmpy2.mpq is used inside the tableau for speed; the public API speaks
`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from gmpy2 import mpq

from gvp.instances import GvpError, Instance, to_fraction

LE, EQ, GE = "<=", "=", ">="
_RELATIONS = (LE, EQ, GE)


@dataclass(frozen=True)
class LPProgram:
    """max objective . x  subject to rows (coeffs, relation, rhs) and bounds.

    Bounds default to [0, +inf) per variable; upper bounds are optional.
    """

    objective: tuple[Fraction, ...]
    constraints: tuple[tuple[tuple[Fraction, ...], str, Fraction], ...]
    lower: tuple[Fraction, ...]
    upper: tuple[Optional[Fraction], ...]

    def __init__(self, objective: Sequence, constraints: Iterable, lower=None, upper=None):
        obj = tuple(to_fraction(c) for c in objective)
        nv = len(obj)
        rows = []
        for coeffs, rel, rhs in constraints:
            coeffs = tuple(to_fraction(c) for c in coeffs)
            if len(coeffs) != nv:
                raise GvpError(f"constraint has {len(coeffs)} coefficients, expected {nv}")
            if rel not in _RELATIONS:
                raise GvpError(f"unknown relation {rel!r}")
            rows.append((coeffs, rel, to_fraction(rhs)))
        lo = tuple(to_fraction(x) for x in (lower if lower is not None else [0] * nv))
        hi = tuple(None if x is None else to_fraction(x) for x in (upper if upper is not None else [None] * nv))
        if len(lo) != nv or len(hi) != nv:
            raise GvpError("bounds must match the number of variables")
        if any(x < 0 for x in lo):
            raise GvpError("lower bounds must be nonnegative")
        if any(h is not None and h < l for l, h in zip(lo, hi)):
            raise GvpError("upper bound below lower bound")
        object.__setattr__(self, "objective", obj)
        object.__setattr__(self, "constraints", tuple(rows))
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @property
    def num_vars(self) -> int:
        return len(self.objective)


@dataclass(frozen=True)
class LPSolution:
    """status is "optimal", "infeasible" or "unbounded".

    For optimal solves, `dual` holds one multiplier per materialized row
    (program constraints first, then upper-bound rows) and dual_value equals
    value exactly; both are re-verified before the solution is returned.
    """

    status: str
    value: Optional[Fraction] = None
    assignment: Optional[tuple[Fraction, ...]] = None
    dual: Optional[tuple[Fraction, ...]] = None
    dual_value: Optional[Fraction] = None


def _to_mpq(x: Fraction):
    return mpq(x.numerator, x.denominator)


def _to_fraction(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


class _Tableau:
    """Dense simplex tableau over mpq with Bland's rule.

    The reduced-cost row is carried through pivots rather than rebuilt each
    iteration, and row updates touch only the pivot row's nonzero columns.
    """

    def __init__(self, rows, rhs, ncols):
        self.rows = rows          # list of lists of mpq, one per constraint
        self.rhs = rhs            # list of mpq, nonnegative
        self.ncols = ncols
        self.basis: list[int] = []
        self.blocked: set[int] = set()   # columns banned from entering

    def pivot(self, r: int, c: int, rc=None) -> None:
        row = self.rows[r]
        piv = row[c]
        if piv != 1:
            inv = 1 / piv
            self.rows[r] = row = [x * inv for x in row]
            self.rhs[r] *= inv
        nonzero = [j for j, x in enumerate(row) if x]
        for i, other in enumerate(self.rows):
            if i != r and (f := other[c]) != 0:
                for j in nonzero:
                    other[j] -= f * row[j]
                self.rhs[i] -= f * self.rhs[r]
        if rc is not None and (f := rc[c]) != 0:
            for j in nonzero:
                rc[j] -= f * row[j]
        self.basis[r] = c

    def reduced_costs(self, cost):
        rc = list(cost)
        for r, b in enumerate(self.basis):
            cb = cost[b]
            if cb == 0:
                continue
            row = self.rows[r]
            for j in range(self.ncols):
                if row[j] != 0:
                    rc[j] -= cb * row[j]
        return rc

    def objective_value(self, cost):
        return sum((cost[b] * self.rhs[r] for r, b in enumerate(self.basis)), mpq(0))

    def optimize(self, cost) -> str:
        """Maximize cost.x with Bland's rule; returns "optimal" or "unbounded"."""
        rc = self.reduced_costs(cost)
        while True:
            enter = -1
            for j in range(self.ncols):
                if rc[j] > 0 and j not in self.blocked:
                    enter = j
                    break
            if enter < 0:
                return "optimal"
            leave = -1
            best = None
            for r in range(len(self.rows)):
                a = self.rows[r][enter]
                if a > 0:
                    ratio = self.rhs[r] / a
                    if best is None or ratio < best or (ratio == best and self.basis[r] < self.basis[leave]):
                        best = ratio
                        leave = r
            if leave < 0:
                return "unbounded"
            self.pivot(leave, enter, rc)


def solve_lp(program: LPProgram) -> LPSolution:
    """Exact optimum of the program, with a verified dual certificate.

    Deterministic given the variable order.  Equality rows are handled by
    phase-1 artificials; upper bounds are materialized as extra rows so that
    the dual certificate covers them uniformly.
    """
    nv = program.num_vars
    lo = [_to_mpq(x) for x in program.lower]
    cost = [_to_mpq(c) for c in program.objective]
    const_shift = sum((c * l for c, l in zip(cost, lo)), mpq(0))

    # Shift x = lo + x' and materialize upper bounds as rows; everything below
    # works on x' >= 0.
    rows = []  # (coeffs dict j->mpq, relation, rhs mpq)
    for coeffs, rel, rhs in program.constraints:
        a = [_to_mpq(c) for c in coeffs]
        b = _to_mpq(rhs) - sum((ai * li for ai, li in zip(a, lo)), mpq(0))
        rows.append((a, rel, b))
    for j, h in enumerate(program.upper):
        if h is not None:
            a = [mpq(0)] * nv
            a[j] = mpq(1)
            rows.append((a, LE, _to_mpq(h) - lo[j]))

    nrows = len(rows)
    # Column layout: structural vars, then one slack/surplus per inequality
    # row, then one artificial per row that needs it.
    slack_col = {}
    col = nv
    for i, (_, rel, _) in enumerate(rows):
        if rel in (LE, GE):
            slack_col[i] = col
            col += 1
    art_col = {}
    sign = []  # +1 if the row kept its orientation after making rhs >= 0
    tab_rows = []
    rhs_vec = []
    for i, (a, rel, b) in enumerate(rows):
        flip = b < 0
        sign.append(-1 if flip else 1)
        if flip:
            a = [-x for x in a]
            b = -b
            rel = {LE: GE, GE: LE, EQ: EQ}[rel]
        needs_art = rel in (GE, EQ)
        row = list(a)
        tab_rows.append((row, rel, needs_art))
        rhs_vec.append(b)
    for i, (_, rel, needs_art) in enumerate(tab_rows):
        if needs_art:
            art_col[i] = col
            col += 1
    ncols = col

    full_rows = []
    basis = []
    identity_col = [None] * nrows  # column holding e_i at the start
    for i, ((row, rel, needs_art), b) in enumerate(zip(tab_rows, rhs_vec)):
        r = row + [mpq(0)] * (ncols - nv)
        if i in slack_col:
            r[slack_col[i]] = mpq(1) if rel == LE else mpq(-1)
        if needs_art:
            r[art_col[i]] = mpq(1)
            basis.append(art_col[i])
            identity_col[i] = art_col[i]
        else:
            basis.append(slack_col[i])
            identity_col[i] = slack_col[i]
        full_rows.append(r)

    tab = _Tableau(full_rows, list(rhs_vec), ncols)
    tab.basis = basis

    artificials = set(art_col.values())
    if artificials:
        phase1 = [mpq(0)] * ncols
        for j in artificials:
            phase1[j] = mpq(-1)
        status = tab.optimize(phase1)
        assert status == "optimal"  # phase 1 is bounded by 0
        if tab.objective_value(phase1) != 0:
            return LPSolution(status="infeasible")
        # Drive leftover artificials out of the basis; a row where that is
        # impossible is redundant and gets dropped.
        drop = []
        for r in range(nrows):
            if tab.basis[r] in artificials:
                entering = next(
                    (j for j in range(ncols) if j not in artificials and tab.rows[r][j] != 0),
                    None,
                )
                if entering is None:
                    drop.append(r)
                else:
                    tab.pivot(r, entering)
        for r in sorted(drop, reverse=True):
            del tab.rows[r]
            del tab.rhs[r]
            del tab.basis[r]
        tab.blocked = artificials

    phase2 = cost + [mpq(0)] * (ncols - nv)
    status = tab.optimize(phase2)
    if status == "unbounded":
        return LPSolution(status="unbounded")

    xprime = [mpq(0)] * ncols
    for r, b in enumerate(tab.basis):
        xprime[b] = tab.rhs[r]
    assignment = tuple(_to_fraction(xprime[j] + lo[j]) for j in range(nv))
    value = _to_fraction(tab.objective_value(phase2) + const_shift)

    dual = _extract_dual(tab, phase2, identity_col, sign, nrows)
    _verify_certificate(program, rows, dual, value, assignment)
    dual_value = sum(
        (yi * _to_fraction(b) for yi, (_, _, b) in zip(dual, rows)), Fraction(0)
    ) + _to_fraction(const_shift)
    assert dual_value == value
    return LPSolution(
        status="optimal",
        value=value,
        assignment=assignment,
        dual=tuple(dual),
        dual_value=dual_value,
    )


def _extract_dual(tab, cost, identity_col, sign, nrows):
    """y = c_B B^-1, read through the columns that initially held the identity."""
    y = []
    for i in range(nrows):
        col = identity_col[i]
        yi = mpq(0)
        for r, b in enumerate(tab.basis):
            coeff = tab.rows[r][col]
            if coeff != 0 and cost[b] != 0:
                yi += cost[b] * coeff
        y.append(_to_fraction(yi) * sign[i])
    return y


def _verify_certificate(program, shifted_rows, dual, value, assignment):
    """Re-check optimality from scratch: weak duality must be tight.

    shifted_rows are the materialized rows (constraints then upper bounds) in
    the lo-shifted space; the certificate is checked there, where all
    variables are >= 0.
    """
    nv = program.num_vars
    lo = program.lower
    cost = program.objective
    # Sign conditions and dual feasibility A^T y >= c.
    acc = [Fraction(0)] * nv
    dual_rhs = Fraction(0)
    for (a, rel, b), yi in zip(shifted_rows, dual):
        if rel == LE and yi < 0:
            raise AssertionError("dual sign violated on a <= row")
        if rel == GE and yi > 0:
            raise AssertionError("dual sign violated on a >= row")
        if yi != 0:
            for j in range(nv):
                if a[j] != 0:
                    acc[j] += yi * Fraction(int(a[j].numerator), int(a[j].denominator))
            dual_rhs += yi * Fraction(int(b.numerator), int(b.denominator))
    for j in range(nv):
        if acc[j] < cost[j]:
            raise AssertionError("dual infeasible at variable %d" % j)
    shift = sum((c * l for c, l in zip(cost, lo)), Fraction(0))
    if dual_rhs + shift != value:
        raise AssertionError("dual value does not match primal value")
    # Primal feasibility of the reported assignment.
    for (coeffs, rel, rhs) in program.constraints:
        lhs = sum((c * x for c, x in zip(coeffs, assignment)), Fraction(0))
        ok = lhs <= rhs if rel == LE else lhs >= rhs if rel == GE else lhs == rhs
        if not ok:
            raise AssertionError("reported assignment violates a constraint")
    for x, l, h in zip(assignment, program.lower, program.upper):
        if x < l or (h is not None and x > h):
            raise AssertionError("reported assignment violates a bound")
    obj = sum((c * x for c, x in zip(cost, assignment)), Fraction(0))
    if obj != value:
        raise AssertionError("objective mismatch")


def lp_opt_program(instance: Instance) -> LPProgram:
    """The all-consumers-pay LP: max sum of edge payments, every edge in budget."""
    n = instance.n
    obj = [Fraction(0)] * n
    rows = []
    for u, v, budget in instance.edges:
        obj[u] += 1
        obj[v] += 1
        coeffs = [Fraction(0)] * n
        coeffs[u] += 1
        coeffs[v] += 1
        rows.append((coeffs, LE, budget))
    return LPProgram(obj, rows)


def lp_opt(instance: Instance) -> LPSolution:
    """Optimal value/prices when every consumer is required to stay affordable.

    The optimum upper-bounds any assignment under which all edges pay, and the
    returned prices keep every edge within budget, so the value is itself
    achievable revenue.
    """
    return solve_lp(lp_opt_program(instance))
