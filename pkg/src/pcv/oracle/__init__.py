"""Brute-force evaluation of the inconsistency goals over finite domains.

Nothing here touches the rewriting engine: policies are evaluated
directly on ground events, and workflow runs are enumerated explicitly.
"""

from .core import (
    CANDIDATE_LIMIT, OracleError, OracleExplosion, diff_table, enumerate_events, oracle_goal,
    oracle_inapplicability, oracle_monotonic_acceptance, oracle_monotonic_denial, oracle_redundancy,
    oracle_workflow, replay_witness, tri_table,
)

__all__ = [
    "CANDIDATE_LIMIT", "OracleError", "OracleExplosion", "diff_table", "enumerate_events", "oracle_goal",
    "oracle_inapplicability", "oracle_monotonic_acceptance", "oracle_monotonic_denial",
    "oracle_redundancy", "oracle_workflow", "replay_witness", "tri_table",
]
