"""Security-game runners and executable reduction mechanics."""

from .games import (
    BUILTIN_STRATEGIES,
    GameRecord,
    GameTranscript,
    run_euf_cma_game,
    run_named_strategy,
)
from .reduction import (
    DbpSolution,
    TrapdoorView,
    composite_ds_pk,
    d_twist,
    dbp_check,
    dbp_extract,
    exponent_verify,
    honest_form,
    oms_reduction_check,
    setup_with_trapdoor,
    strip_to_ds,
)

__all__ = [
    "BUILTIN_STRATEGIES",
    "DbpSolution",
    "GameRecord",
    "GameTranscript",
    "TrapdoorView",
    "composite_ds_pk",
    "d_twist",
    "dbp_check",
    "dbp_extract",
    "exponent_verify",
    "honest_form",
    "oms_reduction_check",
    "run_euf_cma_game",
    "run_named_strategy",
    "setup_with_trapdoor",
    "strip_to_ds",
]
