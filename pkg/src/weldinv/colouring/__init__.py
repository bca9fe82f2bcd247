from .fast import count_fast, e_solution_count
from .invariant import CountReport, InvariantValue, counting_invariant, invariant, normalise
from .naive import DEFAULT_ORACLE_CAP, OracleCapExceeded, count_naive, oracle_cap
from .problem import ColouringProblem, build_problem

__all__ = [
    "ColouringProblem",
    "CountReport",
    "DEFAULT_ORACLE_CAP",
    "InvariantValue",
    "OracleCapExceeded",
    "build_problem",
    "count_fast",
    "count_naive",
    "counting_invariant",
    "e_solution_count",
    "invariant",
    "normalise",
    "oracle_cap",
]
