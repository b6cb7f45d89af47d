"""N-functions, Luxemburg norms, and the passage between eps-sequences and N-functions.

An :class:`NFunction` is stored as a convex piecewise-linear body through
rational knots, flat (zero) on an initial interval ``[0, t0]``, continued past
the last knot by a quadratic tail.  The flat start forces ``phi(t)/t -> 0`` at
zero and the quadratic tail forces ``phi(t)/t -> infinity``, so both limit
conditions hold by construction.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .prob import Rational, RandomVariable, as_fraction


@dataclass(frozen=True)
class NFunction:
    knots: tuple[tuple[Fraction, Fraction], ...]
    tail_slope: Fraction
    tail_quad: Fraction

    def __init__(self, knots: Iterable[tuple[Rational, Rational]], tail_slope: Rational, tail_quad: Rational):
        knots = tuple((as_fraction(t), as_fraction(v)) for t, v in knots)
        tail_slope = as_fraction(tail_slope)
        tail_quad = as_fraction(tail_quad)
        if len(knots) < 2:
            raise ValueError("need at least the knots (0, 0) and (t0, 0)")
        if knots[0] != (0, 0):
            raise ValueError("first knot must be (0, 0)")
        if knots[1][0] <= 0 or knots[1][1] != 0:
            raise ValueError("second knot must be (t0, 0) with t0 > 0")
        for (t0, _), (t1, _) in zip(knots, knots[1:]):
            if t1 <= t0:
                raise ValueError("knot abscissae must strictly increase")
        slopes = [(v1 - v0) / (t1 - t0) for (t0, v0), (t1, v1) in zip(knots, knots[1:])]
        for s0, s1 in zip(slopes, slopes[1:]):
            if s1 <= s0:
                raise ValueError("slopes must strictly increase across knots")
        if tail_slope < slopes[-1]:
            raise ValueError(f"tail slope {tail_slope} below last slope {slopes[-1]}")
        if tail_quad <= 0:
            raise ValueError("tail quadratic coefficient must be positive")
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "tail_slope", tail_slope)
        object.__setattr__(self, "tail_quad", tail_quad)

    @property
    def initial_flat(self) -> Fraction:
        return self.knots[1][0]

    @property
    def slopes(self) -> list[Fraction]:
        k = self.knots
        return [(v1 - v0) / (t1 - t0) for (t0, v0), (t1, v1) in zip(k, k[1:])]

    def __call__(self, t: Rational) -> Fraction:
        return evaluate(self, t)


@dataclass(frozen=True)
class EpsSequence:
    eps: tuple[Fraction, ...]

    def __init__(self, eps: Iterable[Rational]):
        eps = tuple(as_fraction(e) for e in eps)
        if not eps:
            raise ValueError("eps-sequence must be nonempty")
        if any(e <= 0 for e in eps):
            raise ValueError("eps entries must be strictly positive")
        object.__setattr__(self, "eps", eps)

    def __len__(self) -> int:
        return len(self.eps)

    def __getitem__(self, k: int) -> Fraction:
        """1-based access: ``seq[k]`` is eps_k."""
        if not 1 <= k <= len(self.eps):
            raise IndexError(k)
        return self.eps[k - 1]


class NormBracket(NamedTuple):
    lo: Fraction
    hi: Fraction


def evaluate(phi: NFunction, t: Rational) -> Fraction:
    t = as_fraction(t)
    if t < 0:
        raise ValueError("N-functions are defined on [0, inf)")
    ts = [k[0] for k in phi.knots]
    t_last, v_last = phi.knots[-1]
    if t >= t_last:
        u = t - t_last
        return v_last + phi.tail_slope * u + phi.tail_quad * u * u
    i = bisect.bisect_right(ts, t) - 1
    (t0, v0), (t1, v1) = phi.knots[i], phi.knots[i + 1]
    return v0 + (v1 - v0) * (t - t0) / (t1 - t0)


def modular(x: RandomVariable, phi: NFunction, lam: Rational = 1) -> Fraction:
    """sum_i p_i * phi(|x_i| / lam)."""
    lam = as_fraction(lam)
    if lam <= 0:
        raise ValueError("lambda must be positive")
    return sum(
        (p * evaluate(phi, abs(v) / lam) for p, v in zip(x.space.probs, x.values) if v),
        Fraction(0),
    )


def in_unit_ball(x: RandomVariable, phi: NFunction) -> bool:
    """Exact test of ||x||_phi <= 1.

    The modular is continuous and nonincreasing in lambda, so the set of
    admissible lambdas is closed and the test reduces to the modular at 1.
    """
    return modular(x, phi, 1) <= 1


def luxemburg_norm(x: RandomVariable, phi: NFunction, tol: Rational = Fraction(1, 10**6)) -> NormBracket:
    """Bracket ``[lo, hi]`` around ||x||_phi with ``hi - lo <= tol``.

    ``modular(x, phi, hi) <= 1 < modular(x, phi, lo)`` holds for the
    returned bracket.  The search is scale-equivariant: scaling ``x`` and
    ``tol`` by the same positive rational scales the bracket exactly.
    """
    tol = as_fraction(tol)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    top = max(abs(v) for v in x.values)
    if top == 0:
        return NormBracket(Fraction(0), Fraction(0))
    # at hi the largest |x_i|/hi sits on the flat part, so the modular is 0
    hi = top / phi.initial_flat
    lo = hi / 2
    while modular(x, phi, lo) <= 1:
        hi, lo = lo, lo / 2
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if modular(x, phi, mid) <= 1:
            hi = mid
        else:
            lo = mid
    return NormBracket(lo, hi)


def eps_to_nfunction(eps: EpsSequence | Sequence[Rational]) -> NFunction:
    """An N-function with phi(t) >= max(1/eps_1, ..., 1/eps_k) for all t >= k.

    Flat on [0, 1/2], knots at the integers 1..K chosen left to right as
    the smallest values keeping the slopes nondecreasing, collinear knots
    dropped.  Past K the last slope continues with a unit quadratic term.
    """
    if not isinstance(eps, EpsSequence):
        eps = EpsSequence(eps)
    targets = []
    running = Fraction(0)
    for e in eps.eps:
        running = max(running, 1 / e)
        targets.append(running)
    half = Fraction(1, 2)
    pts = [(Fraction(0), Fraction(0)), (half, Fraction(0))]
    slope = Fraction(0)
    prev_t, prev_v = half, Fraction(0)
    for k, target in enumerate(targets, start=1):
        v = max(target, prev_v + slope * (k - prev_t))
        slope = (v - prev_v) / (k - prev_t)
        pts.append((Fraction(k), v))
        prev_t, prev_v = Fraction(k), v
    knots = [pts[0], pts[1]]
    for p in pts[2:]:
        if len(knots) >= 3:
            (ta, va), (tb, vb) = knots[-2], knots[-1]
            if (vb - va) * (p[0] - tb) == (p[1] - vb) * (tb - ta):
                knots[-1] = p
                continue
        knots.append(p)
    return NFunction(knots, tail_slope=slope, tail_quad=1)


def nfunction_to_eps(phi: NFunction, K: int) -> EpsSequence:
    """eps_k = k^-2 / phi(k + 1) for k = 1..K."""
    if K < 1:
        raise ValueError("K must be at least 1")
    out = []
    for k in range(1, K + 1):
        v = evaluate(phi, k + 1)
        if v == 0:
            raise ValueError(
                f"phi({k + 1}) = 0: the flat part [0, {phi.initial_flat}] is too wide for this index"
            )
        out.append(Fraction(1, k * k) / v)
    return EpsSequence(out)


def tail_bound(phi: NFunction, K: int) -> Fraction:
    """phi(1) + sum_{k<=K} k^-2, the modular bound on the intersection of the U_{eps_k}."""
    return evaluate(phi, 1) + sum((Fraction(1, k * k) for k in range(1, K + 1)), Fraction(0))
