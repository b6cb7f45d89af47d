"""Independent oracles and random instance generators shared by the tests."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Optional, Sequence

from polarfloor.cone import MarketCone, Mode
from polarfloor.orlicz import modular
from polarfloor.prob import FiniteProbSpace, RandomVariable, tail_probability

F = Fraction


def solve_square(A: list[list[Fraction]], b: list[Fraction]) -> Optional[list[Fraction]]:
    """Gauss-Jordan over Fractions; None if singular."""
    n = len(A)
    M = [list(row) + [bi] for row, bi in zip(A, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        pv = M[col][col]
        M[col] = [v / pv for v in M[col]]
        for r in range(n):
            if r != col and M[r][col]:
                m = M[r][col]
                M[r] = [a - m * c for a, c in zip(M[r], M[col])]
    return [M[r][n] for r in range(n)]


def vertex_max(c, A_ub, b_ub, A_eq=(), b_eq=()):
    """max c.x over {A_ub x <= b_ub, A_eq x = b_eq} by enumerating vertices.

    Assumes the optimum is attained at a vertex (pointed, bounded program).
    Returns (value, x) or None when no vertex is feasible.
    """
    n = len(c)
    k = n - len(A_eq)
    best = None
    for subset in itertools.combinations(range(len(A_ub)), k):
        A = [list(A_eq[i]) for i in range(len(A_eq))] + [list(A_ub[i]) for i in subset]
        b = list(b_eq) + [b_ub[i] for i in subset]
        x = solve_square(A, b)
        if x is None:
            continue
        if any(sum(a * xi for a, xi in zip(row, x)) > bi for row, bi in zip(A_ub, b_ub)):
            continue
        val = sum(ci * xi for ci, xi in zip(c, x))
        if best is None or val > best[0]:
            best = (val, x)
    return best


def dyadic_space(rng: random.Random, n: int) -> FiniteProbSpace:
    """n atoms whose probabilities are multiples of 1/16 (or 1/32 for n > 16)."""
    total = 16 if n <= 16 else 32
    cuts = sorted(rng.sample(range(1, total), n - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [total])]
    return FiniteProbSpace([f"w{i}" for i in range(n)], [F(p, total) for p in parts])


def random_dyadic(rng: random.Random, lo: int, hi: int, denom: int = 4) -> Fraction:
    return F(rng.randint(lo, hi), denom)


def random_instance(rng: random.Random, mode: Optional[Mode] = None, max_atoms: int = 6, max_gens: int = 3):
    n = rng.randint(2, max_atoms)
    space = dyadic_space(rng, n)
    m = rng.randint(0, max_gens)
    gens = [RandomVariable(space, [random_dyadic(rng, -8, 8) for _ in range(n)]) for _ in range(m)]
    mode = mode or rng.choice(list(Mode))
    f = RandomVariable(space, [random_dyadic(rng, -4, 8) for _ in range(n)])
    return MarketCone(space, gens, mode), f


def martingale_instance(rng: random.Random, mode: Mode = Mode.SUBSPACE):
    """Generators orthogonal to a strictly positive density, so no arbitrage holds."""
    n = rng.randint(2, 6)
    space = dyadic_space(rng, n)
    q = [F(rng.randint(1, 4)) for _ in range(n)]  # density of the martingale measure
    gens = []
    for _ in range(rng.randint(1, 3)):
        v = [random_dyadic(rng, -8, 8) for _ in range(n)]
        # fix the last coordinate so that E[q v] = 0
        s = sum(p * qi * vi for p, qi, vi in zip(space.probs[:-1], q[:-1], v[:-1]))
        v[-1] = -s / (space.probs[-1] * q[-1])
        gens.append(RandomVariable(space, v))
    f = RandomVariable(space, [random_dyadic(rng, 0, 8) for _ in range(n)])
    return MarketCone(space, gens, mode), f


def random_space(rng, n):
    w = [rng.randint(1, 8) for _ in range(n)]
    return FiniteProbSpace([f"w{i}" for i in range(n)], [F(x, sum(w)) for x in w])


def sample_modular_ball(rng, phi, K):
    """Random step function with modular(x, phi, 1) <= 1 (shrunk by halving)."""
    space = random_space(rng, rng.randint(1, 8))
    x = RandomVariable(space, [F(rng.randint(-4 * (K + 1), 4 * (K + 1)), 4) for _ in range(len(space))])
    while modular(x, phi, 1) > 1:
        x = x * F(1, 2)
    return x


def sample_eps_intersection(rng, eps):
    """Random step function with P(|x| >= k) <= eps_k for k <= K and |x| < K + 1."""
    K = len(eps)
    space = random_space(rng, rng.randint(1, 8))
    vals = [F(rng.randint(0, 4 * K + 3), 4) * rng.choice((1, -1)) for _ in range(len(space))]
    for k in range(K, 0, -1):
        while tail_probability(RandomVariable(space, vals).abs(), k) > eps[k - 1]:
            i = max((i for i in range(len(vals)) if abs(vals[i]) >= k), key=lambda i: abs(vals[i]))
            vals[i] = F(rng.randint(0, 4 * k - 1), 4)
    return RandomVariable(space, vals)
