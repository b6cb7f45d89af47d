"""Finite truncations of the three counterexample markets.

Atom numbering follows the original constructions: Example 2 atoms are
``1..2N`` (pairs ``2n-1, 2n``) plus a residual atom; Example 3 atoms are the
joint outcomes of the events A_n inside [0, 1/2], the intervals B_n, and the
two remaining pieces of (1/2, 1]; Example 1 atoms are the 2M+1 pieces of
[0, 1] cut by the nested windows around 1/2.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .cone import MarketCone, Mode
from .prob import AtomPartition, FiniteProbSpace, RandomVariable, Rational, as_fraction

DensityRule = Callable[[int], Rational]

EXAMPLE_KINDS = ("example1", "example2", "example3")


@dataclass(frozen=True)
class TruncatedFamily:
    kind: str
    level: int

    def __post_init__(self):
        if self.kind not in EXAMPLE_KINDS:
            raise ValueError(f"unknown example family {self.kind!r}")
        if self.level < 1:
            raise ValueError("truncation level must be >= 1")


def _half_pow(n: int) -> Fraction:
    return Fraction(1, 2**n)


# -- density rules on Example 2 atoms 1..2N ---------------------------------

def ones(k: int) -> Fraction:
    return Fraction(1)


def ones_odd(k: int) -> Fraction:
    """f(2n-1) = 1, f(2n) = 0."""
    return Fraction(k % 2)


def dyadic_odd(k: int) -> Fraction:
    """f(2n-1) = 2^-n, f(2n) = 0."""
    return _half_pow((k + 1) // 2) if k % 2 else Fraction(0)


DENSITY_RULES: dict[str, DensityRule] = {
    "ones": ones,
    "ones-odd": ones_odd,
    "dyadic-odd": dyadic_odd,
}


# -- Example 2 ---------------------------------------------------------------

@dataclass(frozen=True)
class Example2Market:
    level: int
    space: FiniteProbSpace
    partition: AtomPartition
    cone: MarketCone
    price_increment: RandomVariable  # S_1 - S_0

    @property
    def residual_index(self) -> int:
        return 2 * self.level

    def density(self, rule: DensityRule, residual: Rational = 0) -> RandomVariable:
        vals = [as_fraction(rule(k)) for k in range(1, 2 * self.level + 1)]
        return RandomVariable(self.space, vals + [as_fraction(residual)])


def build_example2(N: int) -> Example2Market:
    """Pairs (2n-1, 2n), n <= N, of mass 2^-(n+1) each, plus a residual atom of mass 2^-N.

    S_1(2n-1) = 1, S_1(2n) = -2^-n, S_1 = 0 on the residual atom; one
    generator per pair (portfolios constant on F_0 blocks), subspace mode.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    labels, probs, s1 = [], [], []
    for n in range(1, N + 1):
        labels += [str(2 * n - 1), str(2 * n)]
        probs += [_half_pow(n + 1)] * 2
        s1 += [Fraction(1), -_half_pow(n)]
    labels.append("residual")
    probs.append(_half_pow(N))
    s1.append(Fraction(0))
    space = FiniteProbSpace(labels, probs)
    blocks = [[2 * n - 2, 2 * n - 1] for n in range(1, N + 1)] + [[2 * N]]
    partition = AtomPartition(blocks, len(space))
    gens = []
    for n in range(1, N + 1):
        v = [Fraction(0)] * len(space)
        v[2 * n - 2] = s1[2 * n - 2]
        v[2 * n - 1] = s1[2 * n - 1]
        gens.append(RandomVariable(space, v))
    cone = MarketCone(space, gens, Mode.SUBSPACE)
    return Example2Market(N, space, partition, cone, RandomVariable(space, s1))


def example2_g(f: DensityRule, N: int, residual: Rational = 0) -> RandomVariable:
    """g(2n-1) = max(f(2n-1), 2^-n f(2n)), g(2n) = 2^n g(2n-1); g = f on the residual atom."""
    market = build_example2(N)
    vals = []
    for n in range(1, N + 1):
        odd = max(as_fraction(f(2 * n - 1)), _half_pow(n) * as_fraction(f(2 * n)))
        vals += [odd, 2**n * odd]
    vals.append(as_fraction(residual))
    return RandomVariable(market.space, vals)


def example2_portfolio(N: int) -> RandomVariable:
    """gamma * S_1 with gamma = 2^n on pair n: a member of C_1."""
    market = build_example2(N)
    gamma = []
    for n in range(1, N + 1):
        gamma += [Fraction(2**n)] * 2
    gamma.append(Fraction(0))
    return market.price_increment.times(RandomVariable(market.space, gamma))


# -- Example 3 ---------------------------------------------------------------

@dataclass(frozen=True)
class Example3Market:
    level: int
    space: FiniteProbSpace
    cone: MarketCone
    f: RandomVariable
    events_a: tuple[frozenset[int], ...]  # atom indices of A_1..A_N
    atoms_b: tuple[int, ...]  # atom index of B_1..B_N

    def asset(self, n: int) -> RandomVariable:
        """x_n = 2^n 1_{B_n} - 1_{A_n} (1-based n)."""
        return self.cone.generators[n - 1]


def build_example3(N: int) -> Example3Market:
    """Independent-event market truncated to the first N assets.

    The events A_n come from xi_n with P(xi_n = 1) = 2^-(n-1), squeezed into
    [0, 1/2].  xi_1 = 1 almost surely, so only the 2^(N-1) outcomes with
    xi_1 = 1 carry mass and become atoms.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    labels: list[str] = []
    probs: list[Fraction] = []
    a_members: list[set[int]] = [set() for _ in range(N)]
    for bits in itertools.product((1, 0), repeat=N - 1):
        xi = (1,) + bits
        p = Fraction(1, 2)
        for n, b in enumerate(xi, start=1):
            q = _half_pow(n - 1)
            p *= q if b else 1 - q
        idx = len(labels)
        labels.append("a:" + "".join(map(str, xi)))
        probs.append(p)
        for n, b in enumerate(xi, start=1):
            if b:
                a_members[n - 1].add(idx)
    b_idx = []
    b_right = Fraction(1, 2)
    for n in range(1, N + 1):
        b_idx.append(len(labels))
        labels.append(f"B{n}")
        probs.append(Fraction(1, 4**n))
        b_right += Fraction(1, 4**n)
    gap_idx = len(labels)
    labels.append("gap")  # (b_N, 5/6]
    probs.append(Fraction(5, 6) - b_right)
    top_idx = len(labels)
    labels.append("top")  # (5/6, 1]
    probs.append(Fraction(1, 6))
    space = FiniteProbSpace(labels, probs)

    gens = []
    for n in range(1, N + 1):
        v = [Fraction(0)] * len(space)
        v[b_idx[n - 1]] = Fraction(2**n)
        for i in a_members[n - 1]:
            v[i] = Fraction(-1)
        gens.append(RandomVariable(space, v))
    cone = MarketCone(space, gens, Mode.SUBSPACE)

    fv = [Fraction(0)] * len(space)
    for i in range(len(space)):
        if labels[i].startswith("a:"):
            fv[i] = Fraction(1)
    for n in range(1, N + 1):
        fv[b_idx[n - 1]] = Fraction(2**n)
    fv[top_idx] = Fraction(1)
    fv[gap_idx] = Fraction(0)
    f = RandomVariable(space, fv)
    return Example3Market(N, space, cone, f, tuple(frozenset(s) for s in a_members), tuple(b_idx))


# -- Example 1 ---------------------------------------------------------------

@dataclass(frozen=True)
class Example1Data:
    space: FiniteProbSpace
    eps: tuple[Fraction, ...]
    witnesses: tuple[RandomVariable, ...]  # x_1..x_M
    center: int  # atom index of the innermost window

    def standin_cone(self) -> MarketCone:
        """Half-space {x : E[x] + x(center) <= 0}.

        A unit point mass on the central atom stands in for the finitely
        additive measure concentrated at 1/2; the half-space is generated as
        the orthogonal complement of the positive weight w, minus positives.
        """
        n = len(self.space)
        p = self.space.probs
        w = [p[i] + (1 if i == self.center else 0) for i in range(n)]
        gens = []
        # e_i - (w_i / w_c) e_c spans w-perp as i ranges over non-center atoms
        for i in range(n):
            if i == self.center:
                continue
            v = [Fraction(0)] * n
            v[i] = Fraction(1)
            v[self.center] = -w[i] / w[self.center]
            gens.append(RandomVariable(self.space, v))
            gens.append(-RandomVariable(self.space, v))
        return MarketCone(self.space, gens, Mode.CONE_MINUS_POSITIVES)


def default_example1_eps(M: int) -> list[Fraction]:
    return [_half_pow(n) for n in range(1, M + 1)]


def build_example1(M: int, eps: Optional[Sequence[Rational]] = None) -> Example1Data:
    """Discretize [0, 1] by the windows |t - 1/2| < eps_n / 2 and build x_1..x_M.

    x_n = -n inside window n and n outside it.  Defaults to eps_n = 2^-n.
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    eps = tuple(as_fraction(e) for e in (default_example1_eps(M) if eps is None else eps))
    if len(eps) != M:
        raise ValueError(f"expected {M} eps values, got {len(eps)}")
    if eps[0] > 1 or any(e <= 0 for e in eps) or any(b >= a for a, b in zip(eps, eps[1:])):
        raise ValueError("eps must be strictly decreasing in (0, 1]")

    # pieces left to right, each tagged with its depth: the number of
    # windows containing it (0 = outside window 1, M = the center piece)
    pieces: list[tuple[str, Fraction, int]] = []
    if eps[0] < 1:
        pieces.append(("outer-left", (1 - eps[0]) / 2, 0))
    for n in range(1, M):
        pieces.append((f"ring{n}-left", (eps[n - 1] - eps[n]) / 2, n))
    pieces.append(("center", eps[M - 1], M))
    for n in range(M - 1, 0, -1):
        pieces.append((f"ring{n}-right", (eps[n - 1] - eps[n]) / 2, n))
    if eps[0] < 1:
        pieces.append(("outer-right", (1 - eps[0]) / 2, 0))
    space = FiniteProbSpace([p[0] for p in pieces], [p[1] for p in pieces])
    center = space.index("center")
    xs = []
    for n in range(1, M + 1):
        xs.append(RandomVariable(space, [-n if depth >= n else n for _, _, depth in pieces]))
    return Example1Data(space, eps, tuple(xs), center)
