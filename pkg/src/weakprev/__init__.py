"""Weak consistency notions for conditional lower previsions on finite spaces.

Exact rational arithmetic throughout.  See the README for an overview.
"""

from .core import (
    NEG_INF, POS_INF, Assessment, ConditionalGamble, DomainError, Event,
    ExtendedValue, Gamble, Partition, PartitionMismatch, PreconditionError,
    WeakPrevError, gain, gn_leq_events, gn_leq_gambles, restrict_inf, restrict_sup,
)
from .checker import (
    ConsistencyClass, Verdict, Witness, check_1aul, check_2coherent, check_2convex,
    check_axiom, check_capacity, check_centered, check_class, check_coherent,
    check_convex, check_internality, check_n_coherent, check_n_convex, classify,
)
from .extension import (
    ExtensionReport, gbr_interval, natext_2coherent, natext_2convex, natext_table,
    verify_gbr_family,
)
from .models import (
    FiniteDistribution, VarPrevision, build_var_assessment, conjugate,
    conjugate_dominance, var_alpha,
)
from .desirability import (
    DesirabilityMode, MembershipWitness, aprime_member, axiom_suite, recover_prevision,
)

__version__ = "0.1.0"
