"""Finitely generated trading cones and their truncations by the negative part."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Sequence

from . import lp
from .orlicz import NFunction, in_unit_ball
from .prob import (
    FiniteProbSpace,
    RandomVariable,
    Rational,
    SpaceMismatchError,
    as_fraction,
    negative_part,
    pos_neg_parts,
    tail_probability,
)


class Mode(str, Enum):
    CONE = "cone"
    SUBSPACE = "subspace"
    CONE_MINUS_POSITIVES = "cone_minus_positives"


@dataclass(frozen=True)
class MarketCone:
    """C = {sum_j lambda_j g_j (- h)} with the sign rules of ``mode``.

    cone: lambda >= 0; subspace: lambda free; cone_minus_positives:
    lambda >= 0 and any h >= 0 subtracted.
    """

    space: FiniteProbSpace
    generators: tuple[RandomVariable, ...]
    mode: Mode

    def __init__(self, space: FiniteProbSpace, generators: Iterable[RandomVariable], mode: Mode | str = Mode.CONE):
        gens = tuple(generators)
        for g in gens:
            if g.space != space:
                raise SpaceMismatchError("generator lives on a different space")
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "mode", Mode(mode))

    def _check(self, x: RandomVariable) -> None:
        if x.space != self.space:
            raise SpaceMismatchError("random variable does not live on the cone's space")

    # LP plumbing: x = G @ (lambda, h)
    def lp_columns(self) -> tuple[list[list[Fraction]], list[tuple[Optional[Fraction], Optional[Fraction]]]]:
        """Columns producing x from the cone's coefficient vector, and their bounds."""
        n = len(self.space)
        cols = [list(g.values) for g in self.generators]
        lam_bound = (None, None) if self.mode is Mode.SUBSPACE else (Fraction(0), None)
        bounds = [lam_bound] * len(cols)
        if self.mode is Mode.CONE_MINUS_POSITIVES:
            for i in range(n):
                cols.append([Fraction(-1) if k == i else Fraction(0) for k in range(n)])
                bounds.append((Fraction(0), None))
        return cols, bounds

    def element(self, coeffs: Sequence[Fraction]) -> RandomVariable:
        cols, _ = self.lp_columns()
        n = len(self.space)
        vals = [Fraction(0)] * n
        for c, col in zip(coeffs, cols):
            if c:
                for i in range(n):
                    vals[i] += c * col[i]
        return RandomVariable(self.space, vals)

    def scaled(self, factors: Sequence[Rational]) -> MarketCone:
        return MarketCone(self.space, [g * a for g, a in zip(self.generators, factors)], self.mode)


class TruncationKind(str, Enum):
    UNIT_BALL = "unit_ball"
    EPS_SEQUENCE = "eps_sequence"
    ORLICZ = "orlicz"


@dataclass(frozen=True)
class TruncationSpec:
    kind: TruncationKind
    eps: Optional[tuple[Fraction, ...]] = None
    phi: Optional[NFunction] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", TruncationKind(self.kind))
        if self.kind is TruncationKind.UNIT_BALL:
            if self.eps is not None or self.phi is not None:
                raise ValueError("unit_ball truncation carries no payload")
        elif self.kind is TruncationKind.EPS_SEQUENCE:
            if self.eps is None or self.phi is not None:
                raise ValueError("eps_sequence truncation needs eps and no phi")
            eps = tuple(as_fraction(e) for e in self.eps)
            if not eps or any(e <= 0 for e in eps):
                raise ValueError("eps entries must be strictly positive")
            object.__setattr__(self, "eps", eps)
        else:
            if self.phi is None or self.eps is not None:
                raise ValueError("orlicz truncation needs phi and no eps")

    @classmethod
    def unit_ball(cls) -> TruncationSpec:
        return cls(TruncationKind.UNIT_BALL)

    @classmethod
    def eps_sequence(cls, eps: Iterable[Rational]) -> TruncationSpec:
        return cls(TruncationKind.EPS_SEQUENCE, eps=tuple(eps))

    @classmethod
    def orlicz(cls, phi: NFunction) -> TruncationSpec:
        return cls(TruncationKind.ORLICZ, phi=phi)

    def contains_solid(self, v: RandomVariable) -> bool:
        """Is ``v`` in the solid set V itself (judged on |v|)?"""
        a = v.abs()
        if self.kind is TruncationKind.UNIT_BALL:
            return all(t <= 1 for t in a.values)
        if self.kind is TruncationKind.EPS_SEQUENCE:
            return all(tail_probability(a, k) <= e for k, e in enumerate(self.eps, start=1))
        return in_unit_ball(a, self.phi)


class ArbitrageCheck(NamedTuple):
    no_arbitrage: bool
    witness: Optional[RandomVariable]


def contains(cone: MarketCone, x: RandomVariable) -> bool:
    cone._check(x)
    if x.is_zero():
        return True
    cols, bounds = cone.lp_columns()
    n = len(cone.space)
    rows = [([col[i] for col in cols], lp.EQ, x[i]) for i in range(n)]
    prog = lp.LinearProgram([0] * len(cols), rows, bounds)
    return lp.solve(prog).is_feasible


def no_arbitrage_check(cone: MarketCone) -> ArbitrageCheck:
    """Decide C ∩ R^n_+ = {0}: maximize sum(x) over x in C with 0 <= x <= 1."""
    cols, bounds = cone.lp_columns()
    n = len(cone.space)
    if not cols:
        return ArbitrageCheck(True, None)
    rows = []
    for i in range(n):
        r = [col[i] for col in cols]
        rows.append((r, lp.GE, 0))
        rows.append((r, lp.LE, 1))
    obj = [sum(col) for col in cols]
    out = lp.solve(lp.LinearProgram(obj, rows, bounds))
    if out.objective_value == 0:
        return ArbitrageCheck(True, None)
    return ArbitrageCheck(False, cone.element(out.primal))


def membership_in_truncation(cone: MarketCone, trunc: TruncationSpec, x: RandomVariable) -> bool:
    """Is x⁻ in V?  Membership of x in C itself is the caller's business."""
    cone._check(x)
    neg = negative_part(x)
    if trunc.kind is TruncationKind.UNIT_BALL:
        return all(v <= 1 for v in neg.values)
    if trunc.kind is TruncationKind.EPS_SEQUENCE:
        return all(tail_probability(neg, k) <= e for k, e in enumerate(trunc.eps, start=1))
    return in_unit_ball(neg, trunc.phi)


def decomposes(trunc: TruncationSpec, x: RandomVariable, max_enum: int = 12) -> bool:
    """Does x = v + h with v in V and h >= 0?

    Unit ball: exact LP over h.  The other kinds are not linear; there the
    search runs over the vertices h_i in {0, x_i⁺}, testing |v| directly
    against the definition of V.  Past ``max_enum`` positive atoms only the
    two extreme vertices are tried.
    """
    n = len(x)
    if trunc.kind is TruncationKind.UNIT_BALL:
        # variables h >= 0; -1 <= x - h <= 1
        rows = []
        for i in range(n):
            e = [Fraction(1) if k == i else Fraction(0) for k in range(n)]
            rows.append((e, lp.LE, x[i] + 1))
            rows.append((e, lp.GE, x[i] - 1))
        return lp.solve(lp.LinearProgram([0] * n, rows)).is_feasible
    pos, _ = pos_neg_parts(x)
    support = [i for i in range(n) if pos[i] > 0]
    if len(support) > max_enum:
        choices = [(False,) * len(support), (True,) * len(support)]
    else:
        choices = itertools.product((False, True), repeat=len(support))
    for choice in choices:
        h = [Fraction(0)] * n
        for i, take in zip(support, choice):
            if take:
                h[i] = pos[i]
        v = x - RandomVariable(x.space, h)
        if trunc.contains_solid(v):
            return True
    return False


def verify_cv_identity(cone: MarketCone, trunc: TruncationSpec, samples: Iterable[RandomVariable]) -> bool:
    """Check {x in C: x⁻ in V} = C ∩ (V + R^n_+) on the samples that lie in C."""
    for x in samples:
        if not contains(cone, x):
            continue
        if membership_in_truncation(cone, trunc, x) != decomposes(trunc, x):
            return False
    return True
