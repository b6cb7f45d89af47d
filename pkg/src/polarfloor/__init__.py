"""Exact decision procedures for martingale densities bounded below by a prescribed floor."""

from .cone import (
    MarketCone,
    Mode,
    TruncationKind,
    TruncationSpec,
    contains,
    membership_in_truncation,
    no_arbitrage_check,
    verify_cv_identity,
)
from .config import DualityTrialConfig, SweepConfig, run_duality_trials
from .domination import (
    DominationReport,
    SupResult,
    divergence_witness_eps,
    duality_check,
    find_dominating_density,
    sup_over_truncation,
    truncation_sweep,
)
from .lp import LinearProgram, LpOutcome, solve, verify_outcome
from .orlicz import (
    EpsSequence,
    NFunction,
    eps_to_nfunction,
    evaluate,
    luxemburg_norm,
    modular,
    nfunction_to_eps,
)
from .prob import (
    AtomPartition,
    FiniteProbSpace,
    RandomVariable,
    conditional_expectation,
    expectation,
    pairing,
    pos_neg_parts,
    tail_probability,
)

__version__ = "0.1.0"
