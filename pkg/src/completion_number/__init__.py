"""Negative-eigenvalue completion of partial Hermitian matrices.

The package plans edge-insertion schedules that fill in a partial positive
Hermitian matrix one entry at a time, bounds the number of negative
eigenvalues of the result through an interlacing ledger, and certifies lower
bounds with 4-cycle gadgets.
"""

from .engine import (BoundLedger, CompletionResult, Schedule, ScheduleStep, StepCertificate,
                     check_schedule, completion_number_upper_bound, execute_schedule,
                     format_schedule, parse_schedule, plan_schedule, propagate_bounds,
                     replay_schedule)
from .estimator import HermitianCompleter
from .exceptions import (CliqueCapExceeded, CompletionError, InvalidGraphError,
                         NotHermitianError, NotPartialPositiveError, ParseError, ScheduleError,
                         WitnessError)
from .graph import (ChordalityResult, CliqueSet, Graph, disjoint_gadget_packing, format_graph,
                    is_chordal, maximal_cliques, new_maximal_cliques_after_edge, parse_graph)
from .linalg import (Inertia, SingleUnknownProblem, SingleUnknownResult, Tolerance, inertia,
                     is_positive, single_unknown_completion)
from .partial import (CliqueInertiaProfile, PartialHermitianMatrix, check_partial_positive,
                      clique_inertia_profile, format_partial_matrix, graph_of, mask,
                      parse_partial_matrix)
from .validation import check_graph, check_partial_matrix
from .witnesses import (WitnessCertificate, completion_number_lower_bound, family_Gn,
                        verify_gadget_forcing, verify_witness_lower_bound)

__version__ = "0.1.0"

__all__ = [
    "BoundLedger",
    "check_graph",
    "check_partial_matrix",
    "check_partial_positive",
    "check_schedule",
    "ChordalityResult",
    "clique_inertia_profile",
    "CliqueCapExceeded",
    "CliqueInertiaProfile",
    "CliqueSet",
    "completion_number_lower_bound",
    "completion_number_upper_bound",
    "CompletionError",
    "CompletionResult",
    "disjoint_gadget_packing",
    "execute_schedule",
    "family_Gn",
    "format_graph",
    "format_partial_matrix",
    "format_schedule",
    "Graph",
    "graph_of",
    "HermitianCompleter",
    "inertia",
    "Inertia",
    "InvalidGraphError",
    "is_chordal",
    "is_positive",
    "mask",
    "maximal_cliques",
    "new_maximal_cliques_after_edge",
    "NotHermitianError",
    "NotPartialPositiveError",
    "parse_graph",
    "parse_partial_matrix",
    "parse_schedule",
    "ParseError",
    "PartialHermitianMatrix",
    "plan_schedule",
    "propagate_bounds",
    "replay_schedule",
    "Schedule",
    "ScheduleError",
    "ScheduleStep",
    "single_unknown_completion",
    "SingleUnknownProblem",
    "SingleUnknownResult",
    "StepCertificate",
    "Tolerance",
    "verify_gadget_forcing",
    "verify_witness_lower_bound",
    "WitnessCertificate",
    "WitnessError",
]
