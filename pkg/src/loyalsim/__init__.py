"""loyalsim: loyalty-program design and competition on sharing platforms."""

__version__ = "0.1.0"

from .utilities import OwnerClass, ScaledLog, SelfUseUtility, TabulatedMarginal
from .programs import PlatformConfig, SignUpBonus, SubsidySchedule, llp, no_program
from .monopoly import best_response, optimal_llp, optimal_monopoly_program
from .mtlp import build_hb, mtlp_revenue, oversubsidy_gap, revenue_upper_bound
from .duopoly import (
    DuopolyMarket,
    Llp,
    NoProgram,
    SignUp,
    critical_k,
    optimal_llp_duopoly,
    optimal_signup,
    owner_choice,
    squeeze_out,
)
from .markets import ladder_market, two_class_market

__all__ = [
    "OwnerClass",
    "ScaledLog",
    "SelfUseUtility",
    "TabulatedMarginal",
    "PlatformConfig",
    "SignUpBonus",
    "SubsidySchedule",
    "llp",
    "no_program",
    "best_response",
    "optimal_llp",
    "optimal_monopoly_program",
    "build_hb",
    "mtlp_revenue",
    "oversubsidy_gap",
    "revenue_upper_bound",
    "DuopolyMarket",
    "Llp",
    "NoProgram",
    "SignUp",
    "critical_k",
    "optimal_llp_duopoly",
    "optimal_signup",
    "owner_choice",
    "squeeze_out",
    "ladder_market",
    "two_class_market",
]
