"""Dominating martingale densities: does some g >= f lie in the polar of C?

Two LPs answer the question from opposite sides:

* the *sup side* maximizes <x, f> over the truncation C_1 = {x in C : x >= -1};
* the *density side* looks for g >= f with <x_j, g> <= 0 for every
  generator (= 0 for a subspace, plus g >= 0 when positives are subtracted).

In finite dimension the sup is finite exactly when such a g exists, and the
sup equals min E[g - f] over the admissible g.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from typing import Iterable, Optional, Sequence

from . import lp
from .cone import MarketCone, Mode, TruncationKind, TruncationSpec, contains, membership_in_truncation
from .examples import DensityRule, build_example1, build_example2, build_example3, ones_odd
from .prob import (
    RandomVariable,
    Rational,
    SpaceMismatchError,
    as_fraction,
    negative_part,
    pairing,
    tail_probability,
)


@dataclass(frozen=True)
class SupResult:
    """sup <x, f> over a truncation of C.  ``value is None`` means +infinity."""

    value: Optional[Fraction]
    argmax: Optional[RandomVariable] = None
    ray: Optional[RandomVariable] = None
    outcome: Optional[lp.LpOutcome] = field(default=None, repr=False, compare=False)

    @property
    def bounded(self) -> bool:
        return self.value is not None


@dataclass(frozen=True)
class DominationReport:
    sup_c1: Optional[Fraction]  # None: unbounded
    dominating_g: Optional[RandomVariable]
    min_l1_norm: Optional[Fraction]
    certificate: Optional[RandomVariable]
    certificate_pairing: Optional[Fraction] = None

    @property
    def feasible(self) -> bool:
        return self.dominating_g is not None


def _check(cone: MarketCone, f: RandomVariable) -> None:
    if f.space != cone.space:
        raise SpaceMismatchError("density floor does not live on the cone's space")


def in_polar(cone: MarketCone, g: RandomVariable) -> bool:
    """Exact test of g in C°."""
    for gen in cone.generators:
        v = pairing(gen, g)
        if v > 0 or (cone.mode is Mode.SUBSPACE and v != 0):
            return False
    if cone.mode is Mode.CONE_MINUS_POSITIVES and not g.is_nonnegative():
        return False
    return True


def _sup_unit_ball(cone: MarketCone, f: RandomVariable) -> SupResult:
    cols, bounds = cone.lp_columns()
    if not cols:
        return SupResult(Fraction(0), cone.space.constant(0))
    n = len(cone.space)
    fx = [RandomVariable(cone.space, col) for col in cols]
    obj = [pairing(c, f) for c in fx]
    rows = [([col[i] for col in cols], lp.GE, -1) for i in range(n)]
    out = lp.solve(lp.LinearProgram(obj, rows, bounds))
    if out.status == lp.UNBOUNDED:
        return SupResult(None, cone.element(out.primal), cone.element(out.ray), out)
    return SupResult(out.objective_value, cone.element(out.primal), None, out)


def sup_over_truncation(
    cone: MarketCone,
    f: RandomVariable,
    trunc: TruncationSpec,
    candidates: Iterable[RandomVariable] = (),
    auto_witnesses: bool = True,
) -> SupResult:
    """sup of <x, f> over {x in C : x⁻ in V}.

    For the unit ball this is an exact LP.  The eps-sequence and Orlicz sets
    are not polyhedral.  Their sup is +infinity exactly when the unit-ball
    sup is: the recession ray is then a nonnegative element of C, and all
    its multiples lie in every truncation.  Otherwise the sup is taken over
    0, the unit-ball maximizer, the admissible ``candidates`` and (eps only,
    unless ``auto_witnesses`` is off) the sums-of-assets witnesses of
    :func:`eps_witnesses`.  That is a lower bound on the true sup.
    """
    _check(cone, f)
    base = _sup_unit_ball(cone, f)
    if trunc.kind is TruncationKind.UNIT_BALL or not base.bounded:
        return base
    pool = [base.argmax, *candidates]
    if trunc.kind is TruncationKind.EPS_SEQUENCE and auto_witnesses:
        pool += eps_witnesses(cone, trunc.eps)
    best = Fraction(0)
    arg = cone.space.constant(0)
    for x in pool:
        if x.space != cone.space:
            raise SpaceMismatchError("candidate does not live on the cone's space")
        if not membership_in_truncation(cone, trunc, x) or not contains(cone, x):
            continue
        v = pairing(x, f)
        if v > best:
            best, arg = v, x
    return SupResult(best, arg)


def _density_program(cone: MarketCone, f: RandomVariable, objective: str) -> tuple[lp.LinearProgram, list[Fraction]]:
    """LP over g (and |g| auxiliaries when ``objective == 'abs'``)."""
    n = len(cone.space)
    p = cone.space.probs
    if cone.mode is Mode.CONE_MINUS_POSITIVES:
        lower = [max(v, Fraction(0)) for v in f.values]
    else:
        lower = list(f.values)
    rel = lp.EQ if cone.mode is Mode.SUBSPACE else lp.LE
    rows = [([p[i] * gen[i] for i in range(n)], rel, 0) for gen in cone.generators]
    bounds = [(lo, None) for lo in lower]
    if objective == "zero":
        return lp.LinearProgram([0] * n, rows, bounds), lower
    if objective == "mass":
        return lp.LinearProgram([-pi for pi in p], rows, bounds), lower
    # minimize sum p_i t_i with t_i >= |g_i|
    zeros = [Fraction(0)] * n
    rows = [(r + zeros, rel_, b) for r, rel_, b in rows]
    for i in range(n):
        e = [Fraction(0)] * (2 * n)
        e[i] = Fraction(-1)
        e[n + i] = Fraction(1)
        rows.append((e, lp.GE, 0))
        e2 = list(e)
        e2[i] = Fraction(1)
        rows.append((e2, lp.GE, 0))
    obj = [Fraction(0)] * n + [-pi for pi in p]
    return lp.LinearProgram(obj, rows, bounds + [(None, None)] * n), lower


def _certificate_from_farkas(cone: MarketCone, f: RandomVariable, farkas: Sequence[Fraction]) -> RandomVariable:
    """Turn the Farkas vector of the density LP into x in C, x >= 0, <x, f> = 1."""
    coeffs = []
    k = 0
    for _ in cone.generators:
        if cone.mode is Mode.SUBSPACE:
            coeffs.append(farkas[k] - farkas[k + 1])
            k += 2
        else:
            coeffs.append(farkas[k])
            k += 1
    x = RandomVariable(cone.space, [Fraction(0)] * len(cone.space))
    for c, gen in zip(coeffs, cone.generators):
        if c:
            x = x + gen * c
    if cone.mode is Mode.CONE_MINUS_POSITIVES:
        # drop mass where f < 0 by subtracting a positive part (allowed in this mode)
        x = RandomVariable(cone.space, [v if fv >= 0 else Fraction(0) for v, fv in zip(x.values, f.values)])
    return x


def find_dominating_density(cone: MarketCone, f: RandomVariable, with_sup: bool = True) -> DominationReport:
    """Cheapest g >= f in the polar of C, or a certificate that none exists.

    ``min_l1_norm`` is E|g| minimized over admissible g.  When no g exists
    the certificate is an x in C with x >= 0 and <x, f> = 1: every multiple
    of it lies in C_1, so the sup over C_1 is infinite.
    """
    _check(cone, f)
    sup_value = _sup_unit_ball(cone, f).value if with_sup else None
    nonneg = cone.mode is Mode.CONE_MINUS_POSITIVES or f.is_nonnegative()
    prog, _ = _density_program(cone, f, "mass" if nonneg else "zero")
    out = lp.solve(prog)
    if out.status == lp.INFEASIBLE:
        cert = _certificate_from_farkas(cone, f, out.farkas)
        return DominationReport(sup_value, None, None, cert, pairing(cert, f))
    if not nonneg:
        prog, _ = _density_program(cone, f, "abs")
        out = lp.solve(prog)
    n = len(cone.space)
    g = RandomVariable(cone.space, out.primal[:n])
    return DominationReport(sup_value, g, -out.objective_value, None)


def duality_check(cone: MarketCone, f: RandomVariable) -> bool:
    """sup over C_1 finite <=> a dominating density exists (two separate LPs)."""
    sup = _sup_unit_ball(cone, f)
    report = find_dominating_density(cone, f, with_sup=False)
    return sup.bounded == report.feasible


# -- eps-sequence witnesses --------------------------------------------------

def _loss_probability(x: RandomVariable) -> Fraction:
    """P(x⁻ >= 1)."""
    return tail_probability(negative_part(x), 1)


def _select_indices(costs: Sequence[Fraction], m: int, budget: Fraction) -> Optional[list[int]]:
    """Lexicographically smallest m indices whose costs sum to at most ``budget``."""
    chosen: list[int] = []
    spent = Fraction(0)
    start = 0
    for slot in range(m):
        need = m - slot - 1
        pick = None
        for i in range(start, len(costs) - need):
            rest = sorted(costs[i + 1 :])[:need]
            if spent + costs[i] + sum(rest, Fraction(0)) <= budget:
                pick = i
                break
        if pick is None:
            return None
        chosen.append(pick)
        spent += costs[pick]
        start = pick + 1
    return chosen


def _witness(cone: MarketCone, eps: Sequence[Fraction], m: int) -> Optional[RandomVariable]:
    if m < 1 or m > len(cone.generators):
        return None
    costs = [_loss_probability(g) for g in cone.generators]
    budget = min(eps[: min(m, len(eps))])
    picked = _select_indices(costs, m, budget)
    if picked is None:
        return None
    x = cone.generators[picked[0]]
    for j in picked[1:]:
        x = x + cone.generators[j]
    return x


def eps_witnesses(cone: MarketCone, eps: Sequence[Rational]) -> list[RandomVariable]:
    """Sums of the m assets with the smallest loss probabilities, m = 1, 2, ...

    Only sums inside every C^{eps_k} are kept.  The choice of assets does
    not depend on ``eps``, so enlarging ``eps`` never drops a witness.
    """
    trunc = TruncationSpec.eps_sequence(eps)
    costs = [_loss_probability(g) for g in cone.generators]
    order = sorted(range(len(costs)), key=lambda j: (costs[j], j))
    out = []
    x = None
    for j in order:
        x = cone.generators[j] if x is None else x + cone.generators[j]
        if membership_in_truncation(cone, trunc, x):
            out.append(x)
    return out


def divergence_witness_eps(
    cone: MarketCone, f: RandomVariable, eps: Sequence[Rational], beta: Rational
) -> Optional[RandomVariable]:
    """A sum of m = floor(beta) + 2 assets inside every C^{eps_k} with <x, f> > beta.

    Assets are picked with the smallest indices whose loss probabilities
    P(x_n <= -1) fit in min(eps_1, ..., eps_m).  Returns None when the cone
    has too few assets or the result fails membership or the pairing bound.
    """
    _check(cone, f)
    eps = [as_fraction(e) for e in eps]
    beta = as_fraction(beta)
    m = floor(beta) + 2
    x = _witness(cone, eps, m)
    if x is None:
        return None
    trunc = TruncationSpec.eps_sequence(eps)
    if not membership_in_truncation(cone, trunc, x) or pairing(x, f) <= beta:
        return None
    return x


# -- truncation sweeps -------------------------------------------------------

@dataclass(frozen=True)
class SweepRow:
    level: int
    sup: Optional[Fraction]
    min_l1_norm: Optional[Fraction]


@dataclass(frozen=True)
class SweepResult:
    kind: str
    quantity: str
    rows: tuple[SweepRow, ...]
    diverging: bool


def _market_for(kind: str, level: int, f_rule: Optional[DensityRule]):
    """(cone, f, candidate pool) of the truncated family at ``level``."""
    if kind == "example2":
        market = build_example2(level)
        return market.cone, market.density(f_rule or ones_odd), []
    if kind == "example3":
        market = build_example3(level)
        return market.cone, market.f, []
    if kind == "example1":
        data = build_example1(level)
        return data.standin_cone(), data.space.constant(1), list(data.witnesses)
    raise ValueError(f"unknown example family {kind!r}")


def truncation_sweep(
    kind: str,
    levels: Sequence[int],
    f_rule: Optional[DensityRule] = None,
    trunc: Optional[TruncationSpec] = None,
    threshold: Optional[Rational] = None,
    quantity: str = "min_l1_norm",
) -> SweepResult:
    """Evaluate sup and min E|g| along increasing truncation levels.

    ``diverging`` is a heuristic verdict: the chosen quantity increases
    strictly from level to level and ends above ``threshold`` (when given).
    """
    if list(levels) != sorted(set(levels)):
        raise ValueError("levels must be strictly increasing")
    if quantity not in ("min_l1_norm", "sup"):
        raise ValueError("quantity must be 'min_l1_norm' or 'sup'")
    trunc = trunc or TruncationSpec.unit_ball()
    rows = []
    for level in levels:
        cone, f, pool = _market_for(kind, level, f_rule)
        # Example 1's witnesses are its own x_n, not sums of generators
        sup = sup_over_truncation(cone, f, trunc, pool, auto_witnesses=kind != "example1").value
        report = find_dominating_density(cone, f, with_sup=False)
        rows.append(SweepRow(level, sup, report.min_l1_norm))
    values = [getattr(r, quantity) for r in rows]
    diverging = all(v is not None for v in values) and all(b > a for a, b in zip(values, values[1:]))
    if diverging and threshold is not None:
        diverging = values[-1] > as_fraction(threshold)
    return SweepResult(kind, quantity, tuple(rows), diverging)
