"""Quantifier elimination for set-theoretic mereology, plus a hereditarily finite sets lab."""

import json

from ._core import (
    BudgetExceeded,
    EvaluationError,
    NotASentence,
    ParseError,
    check_equivalence,
    decide,
    eliminate,
    eliminate_exists,
    eval_formula,
    free_variables,
    hf_mem_star,
    hf_tau,
    normalize,
    run,
    witness_bound,
)


def hf_verify(max_rank=3, z="{}", pair_budget=1_000_000, seed=0):
    """Run the hereditarily finite checks and return the parsed JSON report."""
    code, out, err = run("hf-verify", format="json", budget=pair_budget, seed=seed, max_rank=max_rank, z=z)
    if code == 2:
        raise ValueError(err.strip())
    return json.loads(out)


def oracle_compare(count=500, seed=0, universe_size=8, budget=1_000_000):
    """Check elimination against the finite-set oracle on generated formulas."""
    code, out, err = run("oracle-compare", format="json", budget=budget, seed=seed, count=count,
                         universe_size=universe_size)
    return json.loads(out) if out else {"verdict": "fail", "error": err.strip(), "exit_code": code}


__all__ = [
    "BudgetExceeded",
    "EvaluationError",
    "NotASentence",
    "ParseError",
    "check_equivalence",
    "decide",
    "eliminate",
    "eliminate_exists",
    "eval_formula",
    "free_variables",
    "hf_mem_star",
    "hf_tau",
    "hf_verify",
    "normalize",
    "oracle_compare",
    "run",
    "witness_bound",
]
