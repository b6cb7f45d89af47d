"""Exact rational linear programming.

Dense two-phase tableau simplex with Bland's rule over ``Fraction``.  Every
answer carries a certificate that :func:`verify_outcome` checks by direct
substitution:

* ``optimal``    -- a primal point and a dual vector with equal objective values;
* ``unbounded``  -- a feasible point and an improving recession ray;
* ``infeasible`` -- a Farkas vector ``y >= 0`` with ``R^T y = 0`` and ``b.y = -1``.

Dual and Farkas vectors are indexed by the *canonical rows* of the program
(see :meth:`LinearProgram.canonical_rows`): every constraint and every finite
variable bound rewritten as ``a.x <= b``, with equalities split in two.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .prob import Rational, as_fraction

log = logging.getLogger(__name__)

LE, EQ, GE = "<=", "==", ">="
_RELATIONS = {LE: LE, "<": LE, "le": LE, EQ: EQ, "=": EQ, "eq": EQ, GE: GE, ">": GE, "ge": GE}

OPTIMAL, UNBOUNDED, INFEASIBLE = "optimal", "unbounded", "infeasible"

Vector = tuple[Fraction, ...]
Bound = tuple[Optional[Fraction], Optional[Fraction]]


class DimensionError(ValueError):
    pass


class CertificateError(AssertionError):
    """The solver produced an outcome whose certificate does not check out."""


@dataclass(frozen=True)
class Constraint:
    coeffs: Vector
    relation: str
    rhs: Fraction


def _opt(v) -> Optional[Fraction]:
    return None if v is None else as_fraction(v)


@dataclass(frozen=True)
class LinearProgram:
    """maximize ``objective . x`` subject to ``constraints`` and ``bounds``.

    ``constraints`` is a sequence of ``(row, relation, rhs)`` with relation in
    ``{"<=", "==", ">="}``.  ``bounds`` gives ``(lower, upper)`` per variable,
    ``None`` meaning unbounded on that side; when omitted every variable is
    nonnegative.
    """

    objective: Vector
    constraints: tuple[Constraint, ...] = ()
    bounds: tuple[Bound, ...] = ()

    def __init__(self, objective: Sequence[Rational], constraints=(), bounds=None):
        obj = tuple(as_fraction(c) for c in objective)
        n = len(obj)
        rows = []
        for k, con in enumerate(constraints):
            if isinstance(con, Constraint):
                coeffs, rel, rhs = con.coeffs, con.relation, con.rhs
            else:
                coeffs, rel, rhs = con
            coeffs = tuple(as_fraction(c) for c in coeffs)
            if len(coeffs) != n:
                raise DimensionError(f"constraint {k} has {len(coeffs)} coefficients, expected {n}")
            if rel not in _RELATIONS:
                raise ValueError(f"constraint {k}: unknown relation {rel!r}")
            rows.append(Constraint(coeffs, _RELATIONS[rel], as_fraction(rhs)))
        if bounds is None:
            bnds = tuple((Fraction(0), None) for _ in range(n))
        else:
            bnds = tuple((_opt(lo), _opt(hi)) for lo, hi in bounds)
            if len(bnds) != n:
                raise DimensionError(f"{len(bnds)} bounds given for {n} variables")
            for j, (lo, hi) in enumerate(bnds):
                if lo is not None and hi is not None and lo > hi:
                    # still a well-formed program, just an infeasible one
                    log.debug("variable %d has empty bound interval [%s, %s]", j, lo, hi)
        object.__setattr__(self, "objective", obj)
        object.__setattr__(self, "constraints", tuple(rows))
        object.__setattr__(self, "bounds", bnds)

    @property
    def n_vars(self) -> int:
        return len(self.objective)

    def canonical_rows(self) -> list[tuple[Vector, Fraction]]:
        """All constraints as ``a.x <= b`` rows, in a fixed order.

        Constraints come first (``>=`` negated, ``==`` as the pair
        ``a.x <= b``, ``-a.x <= -b``), then for each variable its lower bound
        ``-x_j <= -lo`` and its upper bound ``x_j <= hi`` when finite.
        """
        out: list[tuple[Vector, Fraction]] = []
        for c in self.constraints:
            neg = tuple(-a for a in c.coeffs)
            if c.relation == LE:
                out.append((c.coeffs, c.rhs))
            elif c.relation == GE:
                out.append((neg, -c.rhs))
            else:
                out.append((c.coeffs, c.rhs))
                out.append((neg, -c.rhs))
        n = self.n_vars
        for j, (lo, hi) in enumerate(self.bounds):
            if lo is not None:
                out.append((_unit(n, j, -1), -lo))
            if hi is not None:
                out.append((_unit(n, j, 1), hi))
        return out

    def is_feasible_point(self, x: Sequence[Fraction]) -> bool:
        return len(x) == self.n_vars and all(_dot(a, x) <= b for a, b in self.canonical_rows())


@dataclass(frozen=True)
class LpOutcome:
    status: str
    primal: Optional[Vector] = None
    objective_value: Optional[Fraction] = None
    ray: Optional[Vector] = None
    farkas: Optional[Vector] = None
    dual: Optional[Vector] = None
    pivots: int = field(default=0, compare=False)

    @property
    def is_optimal(self) -> bool:
        return self.status == OPTIMAL

    @property
    def is_feasible(self) -> bool:
        return self.status != INFEASIBLE


def _unit(n: int, j: int, s: int) -> Vector:
    return tuple(Fraction(s) if k == j else Fraction(0) for k in range(n))


def _dot(a: Sequence[Fraction], x: Sequence[Fraction]) -> Fraction:
    return sum((ai * xi for ai, xi in zip(a, x) if ai), Fraction(0))


def verify_outcome(lp: LinearProgram, out: LpOutcome) -> bool:
    """Re-check every certificate identity of ``out`` exactly."""
    rows = lp.canonical_rows()
    n = lp.n_vars
    c = lp.objective

    def transpose_combo(y: Sequence[Fraction]) -> list[Fraction]:
        acc = [Fraction(0)] * n
        for yi, (a, _) in zip(y, rows):
            if yi:
                for j, aj in enumerate(a):
                    if aj:
                        acc[j] += yi * aj
        return acc

    if out.status == OPTIMAL:
        if out.primal is None or out.objective_value is None:
            return False
        if not lp.is_feasible_point(out.primal):
            return False
        if _dot(c, out.primal) != out.objective_value:
            return False
        if out.dual is not None:
            y = out.dual
            if len(y) != len(rows) or any(v < 0 for v in y):
                return False
            if transpose_combo(y) != list(c):
                return False
            if sum((yi * b for yi, (_, b) in zip(y, rows)), Fraction(0)) != out.objective_value:
                return False
        return True
    if out.status == UNBOUNDED:
        if out.primal is None or out.ray is None or len(out.ray) != n:
            return False
        if not lp.is_feasible_point(out.primal):
            return False
        if any(_dot(a, out.ray) > 0 for a, _ in rows):
            return False
        return _dot(c, out.ray) > 0
    if out.status == INFEASIBLE:
        y = out.farkas
        if y is None or len(y) != len(rows) or any(v < 0 for v in y):
            return False
        if any(v != 0 for v in transpose_combo(y)):
            return False
        return sum((yi * b for yi, (_, b) in zip(y, rows)), Fraction(0)) == -1
    return False


class _Tableau:
    """Standard-form tableau ``A z = b, z >= 0, b >= 0`` with explicit basis."""

    def __init__(self, rows: list[list[Fraction]], rhs: list[Fraction], basis: list[int]):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.pivots = 0

    def reduced_costs(self, cost: list[Fraction]) -> list[Fraction]:
        ncol = len(cost)
        d = [-cj for cj in cost]
        for i, bi in enumerate(self.basis):
            cb = cost[bi]
            if cb:
                row = self.rows[i]
                for j in range(ncol):
                    if row[j]:
                        d[j] += cb * row[j]
        return d

    def pivot(self, r: int, e: int) -> None:
        prow = self.rows[r]
        piv = prow[e]
        if piv != 1:
            prow[:] = [v / piv if v else v for v in prow]
            self.rhs[r] /= piv
        nz = [j for j, v in enumerate(prow) if v]
        for i, row in enumerate(self.rows):
            if i == r:
                continue
            m = row[e]
            if m:
                for j in nz:
                    row[j] -= m * prow[j]
                self.rhs[i] -= m * self.rhs[r]
        self.basis[r] = e
        self.pivots += 1

    def dump(self, label: str) -> str:
        lines = [f"-- tableau ({label}), basis={self.basis}"]
        for row, b in zip(self.rows, self.rhs):
            lines.append(" ".join(f"{str(v):>7}" for v in row) + f" | {b}")
        return "\n".join(lines)


def _run_simplex(tab: _Tableau, cost: list[Fraction], eligible: list[bool], label: str):
    """Maximize ``cost . z``.  Returns ("optimal", d) or ("unbounded", entering column)."""
    debug = log.isEnabledFor(logging.DEBUG)
    while True:
        d = tab.reduced_costs(cost)
        if debug:
            log.debug("%s\nreduced costs: %s", tab.dump(label), [str(v) for v in d])
        entering = next((j for j, dj in enumerate(d) if dj < 0 and eligible[j]), None)
        if entering is None:
            return OPTIMAL, d
        best = None
        for i, row in enumerate(tab.rows):
            a = row[entering]
            if a > 0:
                ratio = tab.rhs[i] / a
                key = (ratio, tab.basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return UNBOUNDED, entering
        tab.pivot(best[1], entering)


def solve(lp: LinearProgram) -> LpOutcome:
    """Solve ``lp`` exactly and return a certified outcome.

    Raises :class:`CertificateError` if the produced certificate fails
    :func:`verify_outcome`; that would be a solver bug, never an input issue.
    """
    out = _solve(lp)
    if not verify_outcome(lp, out):
        raise CertificateError(f"certificate check failed for status {out.status}")
    return out


def _solve(lp: LinearProgram) -> LpOutcome:
    n = lp.n_vars
    zero = Fraction(0)

    # Substitute x_j = shift_j + sum(sign * z_k) so that every z_k >= 0.
    shift = [zero] * n
    zcols: list[tuple[int, int]] = []  # (variable, sign)
    var_kind: list[str] = []
    var_cols: list[list[int]] = []
    extra_rows: list[tuple[int, Fraction, int]] = []  # (z column, bound, canonical row slot)
    for j, (lo, hi) in enumerate(lp.bounds):
        if lo is not None:
            shift[j] = lo
            var_cols.append([len(zcols)])
            zcols.append((j, 1))
            var_kind.append("lo")
            if hi is not None:
                extra_rows.append((len(zcols) - 1, hi - lo, j))
        elif hi is not None:
            shift[j] = hi
            var_cols.append([len(zcols)])
            zcols.append((j, -1))
            var_kind.append("hi")
        else:
            var_cols.append([len(zcols), len(zcols) + 1])
            zcols.append((j, 1))
            zcols.append((j, -1))
            var_kind.append("free")
    nz = len(zcols)

    # z-space rows: (coeffs over z, relation LE/EQ, rhs, origin)
    zrows: list[tuple[list[Fraction], str, Fraction, tuple]] = []
    for k, con in enumerate(lp.constraints):
        a = con.coeffs
        sgn = -1 if con.relation == GE else 1
        coeffs = [sgn * s * a[j] for j, s in zcols]
        rhs = sgn * (con.rhs - _dot(a, shift))
        zrows.append((coeffs, EQ if con.relation == EQ else LE, rhs, ("con", k)))
    for col, width, j in extra_rows:
        coeffs = [zero] * nz
        coeffs[col] = Fraction(1)
        zrows.append((coeffs, LE, width, ("ub", j)))
    m = len(zrows)

    # Standard form columns: z | slacks | artificials.
    slack_col: dict[int, int] = {}
    ncol = nz
    for i, (_, rel, _, _) in enumerate(zrows):
        if rel == LE:
            slack_col[i] = ncol
            ncol += 1
    art_col: dict[int, int] = {}
    flips = []
    for i, (_, rel, rhs, _) in enumerate(zrows):
        s = -1 if rhs < 0 else 1
        flips.append(s)
        if rel == EQ or s < 0:
            art_col[i] = ncol
            ncol += 1
    rows: list[list[Fraction]] = []
    rhs_v: list[Fraction] = []
    basis: list[int] = []
    init_col: list[int] = []
    for i, (coeffs, rel, rhs, _) in enumerate(zrows):
        s = flips[i]
        row = [s * v for v in coeffs] + [zero] * (ncol - nz)
        if i in slack_col:
            row[slack_col[i]] = Fraction(s)
        if i in art_col:
            row[art_col[i]] = Fraction(1)
            basis.append(art_col[i])
        else:
            basis.append(slack_col[i])
        init_col.append(basis[-1])
        rows.append(row)
        rhs_v.append(s * rhs)
    tab = _Tableau(rows, rhs_v, basis)
    is_art = [False] * ncol
    for c in art_col.values():
        is_art[c] = True

    def canonical_multipliers(u: list[Fraction], d: list[Fraction]) -> list[Fraction]:
        """Map standard-form duals ``u`` and reduced costs ``d`` to canonical rows."""
        w = [flips[i] * u[i] for i in range(m)]
        y: list[Fraction] = []
        for i, (_, _, _, origin) in enumerate(zrows):
            if origin[0] != "con":
                continue
            rel = lp.constraints[origin[1]].relation
            if rel == EQ:
                y.append(max(w[i], zero))
                y.append(max(-w[i], zero))
            else:
                y.append(w[i])
        ub_row = {origin[1]: i for i, (_, _, _, origin) in enumerate(zrows) if origin[0] == "ub"}
        for j, (lo, hi) in enumerate(lp.bounds):
            kind = var_kind[j]
            if lo is not None:
                y.append(d[var_cols[j][0]])
            if hi is not None:
                y.append(w[ub_row[j]] if kind == "lo" else d[var_cols[j][0]])
        return y

    def duals(cost: list[Fraction], d: list[Fraction]) -> list[Fraction]:
        return [d[init_col[i]] + cost[init_col[i]] for i in range(m)]

    # Phase 1
    if art_col:
        cost1 = [Fraction(-1) if is_art[j] else zero for j in range(ncol)]
        _, d1 = _run_simplex(tab, cost1, [True] * ncol, "phase 1")
        value1 = sum((cost1[b] * tab.rhs[i] for i, b in enumerate(tab.basis)), zero)
        if value1 < 0:
            y = canonical_multipliers(duals(cost1, d1), d1)
            rows_c = lp.canonical_rows()
            by = sum((yi * b for yi, (_, b) in zip(y, rows_c)), zero)
            if by >= 0:
                raise CertificateError("phase 1 dual does not separate")
            scale = -1 / by
            return LpOutcome(INFEASIBLE, farkas=tuple(v * scale for v in y), pivots=tab.pivots)
        # drive zero-level artificials out of the basis where possible
        for i in range(m):
            if is_art[tab.basis[i]]:
                row = tab.rows[i]
                e = next((j for j in range(ncol) if not is_art[j] and row[j] != 0), None)
                if e is not None:
                    tab.pivot(i, e)

    # Phase 2
    cost2 = [zero] * ncol
    for k, (j, s) in enumerate(zcols):
        cost2[k] = s * lp.objective[j]
    eligible = [not a for a in is_art]
    status, info = _run_simplex(tab, cost2, eligible, "phase 2")

    zval = [zero] * ncol
    for i, b in enumerate(tab.basis):
        zval[b] = tab.rhs[i]
    x = list(shift)
    for k, (j, s) in enumerate(zcols):
        if zval[k]:
            x[j] += s * zval[k]
    x = tuple(x)
    if status == UNBOUNDED:
        e = info
        dz = [zero] * ncol
        dz[e] = Fraction(1)
        for i, b in enumerate(tab.basis):
            dz[b] = -tab.rows[i][e]
        ray = [zero] * n
        for k, (j, s) in enumerate(zcols):
            if dz[k]:
                ray[j] += s * dz[k]
        return LpOutcome(UNBOUNDED, primal=x, ray=tuple(ray), pivots=tab.pivots)
    d2 = info
    y = canonical_multipliers(duals(cost2, d2), d2)
    return LpOutcome(
        OPTIMAL,
        primal=x,
        objective_value=_dot(lp.objective, x),
        dual=tuple(y),
        pivots=tab.pivots,
    )
