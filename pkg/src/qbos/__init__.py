"""Two-player quantum game engine for the Battle of the Sexes.

Simulates the entangling-gate protocol (J^dag (U_A x U_B) J |OO> followed by
a computational-basis measurement), evaluates payoffs, verifies and searches
Nash equilibria over nested strategy spaces, and certifies numerically that
full-SU(2) play admits no equilibrium at maximal entanglement.
"""
from . import cli, equilibrium, fullspace, game, kernels, qlinalg, scheme
from .equilibrium import (
    AcceptedProfile,
    EquilibriumCertificate,
    EquilibriumCluster,
    Player,
    Profile,
    SearchConfig,
    SearchReport,
    Verdict,
    best_response,
    profile_payoffs,
    search_ne,
    verify_ne,
)
from .errors import (
    InvalidMass,
    InvalidOrdering,
    NonUnitaryInput,
    QbosError,
    TrivialGame,
    WrongSpace,
)
from .fullspace import (
    MaxPayoffs,
    NoNeReport,
    counter_strategy,
    forcing_deviation,
    max_payoff_entries,
    no_ne_certificate,
    nontriviality_check,
)
from .game import (
    BosParams,
    PayoffMatrix,
    PayoffPair,
    bos_matrix,
    classical_mixed_payoff,
    expected_payoffs,
    reduced_payoffs_max_entangled,
)
from .kernels import BACKEND as KERNEL_BACKEND
from .scheme import (
    OutcomeDistribution,
    StrategyParams,
    StrategySpace,
    closed_form_max_entangled,
    closed_form_unentangled,
    entangling_gate,
    final_state,
    outcome_distribution,
    strategy_matrix,
)

__version__ = "0.1.0"
