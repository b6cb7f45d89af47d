"""Run configurations for sweeps and randomized duality trials."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .cone import MarketCone, Mode, TruncationSpec
from .domination import SweepResult, duality_check, find_dominating_density, truncation_sweep
from .examples import DENSITY_RULES, EXAMPLE_KINDS
from .prob import FiniteProbSpace, RandomVariable


@dataclass(frozen=True)
class SweepConfig:
    kind: str = "example2"
    levels: tuple[int, ...] = tuple(range(1, 11))
    f_rule: str = "ones-odd"
    truncation: Optional[TruncationSpec] = None
    threshold: Optional[Fraction] = None
    quantity: str = "min_l1_norm"

    def __post_init__(self):
        if self.kind not in EXAMPLE_KINDS:
            raise ValueError(f"unknown example family {self.kind!r}")
        if self.f_rule not in DENSITY_RULES:
            raise ValueError(f"unknown density rule {self.f_rule!r}")

    def run(self) -> SweepResult:
        return truncation_sweep(
            self.kind,
            list(self.levels),
            f_rule=DENSITY_RULES[self.f_rule],
            trunc=self.truncation,
            threshold=self.threshold,
            quantity=self.quantity,
        )


@dataclass(frozen=True)
class DualityTrialConfig:
    """Random markets with dyadic data: probabilities in 1/16ths, payoffs in 1/4ths."""

    trials: int = 200
    seed: int = 0
    max_atoms: int = 6
    max_generators: int = 3
    modes: tuple[Mode, ...] = tuple(Mode)


@dataclass
class DualityTrialSummary:
    trials: int = 0
    agreed: int = 0
    with_density: int = 0
    by_mode: dict = field(default_factory=dict)


def random_market(rng: random.Random, mode: Mode, max_atoms: int, max_generators: int):
    n = rng.randint(2, max_atoms)
    cuts = sorted(rng.sample(range(1, 16), n - 1))
    probs = [Fraction(b - a, 16) for a, b in zip([0] + cuts, cuts + [16])]
    space = FiniteProbSpace([f"w{i}" for i in range(n)], probs)
    gens = [
        RandomVariable(space, [Fraction(rng.randint(-8, 8), 4) for _ in range(n)])
        for _ in range(rng.randint(0, max_generators))
    ]
    f = RandomVariable(space, [Fraction(rng.randint(-4, 8), 4) for _ in range(n)])
    return MarketCone(space, gens, mode), f


def run_duality_trials(cfg: DualityTrialConfig) -> DualityTrialSummary:
    rng = random.Random(cfg.seed)
    out = DualityTrialSummary()
    for i in range(cfg.trials):
        mode = cfg.modes[i % len(cfg.modes)]
        cone, f = random_market(rng, mode, cfg.max_atoms, cfg.max_generators)
        ok = duality_check(cone, f)
        out.trials += 1
        out.agreed += ok
        out.with_density += find_dominating_density(cone, f, with_sup=False).feasible
        agreed, total = out.by_mode.get(mode.value, (0, 0))
        out.by_mode[mode.value] = (agreed + ok, total + 1)
    return out
