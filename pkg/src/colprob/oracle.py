"""Independent verification paths: exhaustive enumeration and Monte Carlo.

This module deliberately shares no formula semantics with
colprob.semantics or colprob.evaluator. Formulas are evaluated as plain
truth conditions over full joint assignments (over full assignments the
choice and parallel connectives coincide as boolean and/or), and the
support-equality conditions that make choice connectives undetermined are
re-derived here from the syntax alone. Agreement between this path and the
event-space path is evidence, not tautology.
"""

from __future__ import annotations

import math
import random
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Mapping

from .errors import EvalError, NullConditionError, OracleError
from .evaluator import Determined
from .formula import (
    AtomNode,
    ChoiceAnd,
    ChoiceOr,
    Formula,
    GivenAdd,
    GivenPar,
    Not,
    ParAnd,
    ParOr,
)
from .model import Model, ancestral_closure, joint_point_prob, topological_order
from .semantics import Undetermined

STATE_SPACE_BOUND = 10_000_000


@dataclass(frozen=True)
class SampleConfig:
    sample_count: int
    seed: int = 0

    def __post_init__(self):
        if self.sample_count < 1:
            raise ValueError("sample_count must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")


@dataclass(frozen=True)
class McEstimate:
    estimate: float
    stderr: float
    samples: int
    seed: int


class _SupportMismatch(Exception):
    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(reason)


def _fmt(support: frozenset[str]) -> str:
    return "{" + ", ".join(sorted(support)) + "}"


def _support(f: Formula) -> frozenset[str]:
    """Syntactic support, replicating the undeterminedness conditions:
    choice connectives demand equal supports on both sides."""
    if isinstance(f, AtomNode):
        return frozenset((f.experiment,))
    if isinstance(f, Not):
        return _support(f.child)
    if isinstance(f, (ChoiceAnd, ChoiceOr)):
        left, right = _support(f.left), _support(f.right)
        if left != right:
            op = "choice-and (&)" if isinstance(f, ChoiceAnd) else "choice-or (|)"
            raise _SupportMismatch(
                f"{op} spans distinct supports {_fmt(left)} vs {_fmt(right)}"
            )
        return left
    if isinstance(f, (ParAnd, ParOr)):
        return _support(f.left) | _support(f.right)
    raise EvalError("conditionals are only allowed at the root of a query")


def _check_atoms(f: Formula, model: Model) -> None:
    if isinstance(f, AtomNode):
        decl = model.decl(f.experiment)
        if f.outcome not in decl.outcomes:
            raise EvalError(
                f"unknown outcome '{f.outcome}' of experiment '{f.experiment}'"
            )
    elif isinstance(f, Not):
        _check_atoms(f.child, model)
    elif isinstance(f, (ChoiceAnd, ChoiceOr, ParAnd, ParOr)):
        _check_atoms(f.left, model)
        _check_atoms(f.right, model)
    elif isinstance(f, (GivenAdd, GivenPar)):
        _check_atoms(f.event, model)
        _check_atoms(f.condition, model)
    else:
        raise TypeError(f"not a formula node: {f!r}")


def _mentioned(f: Formula) -> frozenset[str]:
    if isinstance(f, AtomNode):
        return frozenset((f.experiment,))
    if isinstance(f, Not):
        return _mentioned(f.child)
    if isinstance(f, (ChoiceAnd, ChoiceOr, ParAnd, ParOr)):
        return _mentioned(f.left) | _mentioned(f.right)
    return _mentioned(f.event) | _mentioned(f.condition)


def _compile(f: Formula) -> Callable[[Mapping[str, str]], bool]:
    """Compile a conditional-free formula to a truth test on assignments."""
    if isinstance(f, AtomNode):
        experiment, outcome = f.experiment, f.outcome
        return lambda a: a[experiment] == outcome
    if isinstance(f, Not):
        child = _compile(f.child)
        return lambda a: not child(a)
    if isinstance(f, (ChoiceAnd, ParAnd)):
        left, right = _compile(f.left), _compile(f.right)
        return lambda a: left(a) and right(a)
    if isinstance(f, (ChoiceOr, ParOr)):
        left, right = _compile(f.left), _compile(f.right)
        return lambda a: left(a) or right(a)
    raise EvalError("conditionals are only allowed at the root of a query")


def _closure_and_bound(f: Formula, model: Model) -> list[str]:
    closure = sorted(ancestral_closure(model, _mentioned(f)))
    size = math.prod(len(model.outcomes(n)) for n in closure)
    if size > STATE_SPACE_BOUND:
        raise OracleError(
            f"state-space bound exceeded: {size} joint assignments "
            f"(limit {STATE_SPACE_BOUND})"
        )
    return closure


def _assignments(model: Model, names: list[str]):
    for combo in product(*(model.outcomes(n) for n in names)):
        assignment = dict(zip(names, combo))
        yield assignment, joint_point_prob(model, assignment)


def enumerate_prob(f: Formula, model: Model):
    """Brute-force p(f) by summing over every full joint assignment.

    Returns the same tri-state result the evaluator does: Determined with
    an exact rational, or Undetermined when a choice connective (or the
    additive conditional) spans distinct supports.
    """
    _check_atoms(f, model)
    if isinstance(f, (GivenAdd, GivenPar)):
        return _enumerate_conditional(f, model)
    try:
        _support(f)
    except _SupportMismatch as mismatch:
        return Undetermined(mismatch.reason)
    names = _closure_and_bound(f, model)
    test = _compile(f)
    total = Fraction(0)
    for assignment, weight in _assignments(model, names):
        if test(assignment):
            total += weight
    return Determined(total)


def _enumerate_conditional(f, model: Model):
    try:
        event_support = _support(f.event)
        condition_support = _support(f.condition)
        if isinstance(f, GivenAdd) and event_support != condition_support:
            return Undetermined(
                "additive conditional (given) spans distinct supports "
                f"{_fmt(event_support)} vs {_fmt(condition_support)}"
            )
    except _SupportMismatch as mismatch:
        return Undetermined(mismatch.reason)
    names = _closure_and_bound(f, model)
    event = _compile(f.event)
    condition = _compile(f.condition)
    numerator = Fraction(0)
    denominator = Fraction(0)
    for assignment, weight in _assignments(model, names):
        if condition(assignment):
            denominator += weight
            if event(assignment):
                numerator += weight
    if denominator == 0:
        raise NullConditionError("conditioning on null event (enumerated mass 0)")
    return Determined(numerator / denominator)


def mc_estimate(f: Formula, model: Model, cfg: SampleConfig) -> McEstimate:
    """Seeded Monte Carlo estimate of p(f) with its binomial standard error.

    Experiments are sampled ancestors-first from their cpt rows; the same
    seed, model and formula always reproduce the same estimate bit for bit.
    Undetermined formulas cannot be sampled and are rejected.
    """
    _check_atoms(f, model)
    conditional = isinstance(f, (GivenAdd, GivenPar))
    try:
        if conditional:
            event_support = _support(f.event)
            condition_support = _support(f.condition)
            if isinstance(f, GivenAdd) and event_support != condition_support:
                raise OracleError(
                    "cannot sample an undetermined formula: additive "
                    f"conditional spans {_fmt(event_support)} vs "
                    f"{_fmt(condition_support)}"
                )
        else:
            _support(f)
    except _SupportMismatch as mismatch:
        raise OracleError(
            f"cannot sample an undetermined formula: {mismatch.reason}"
        ) from None

    closure = ancestral_closure(model, _mentioned(f))
    order = topological_order(model, closure)
    samplers = []
    for name in order:
        decl = model.decl(name)
        rows = {}
        for key, dist in decl.cpt.items():
            cumulative: list[float] = []
            running = 0.0
            for outcome in decl.outcomes:
                running += float(dist.get(outcome, 0))
                cumulative.append(running)
            cumulative[-1] = 1.0  # guard against float round-off
            rows[key] = cumulative
        samplers.append((name, decl.parents, decl.outcomes, rows))

    if conditional:
        event = _compile(f.event)
        condition = _compile(f.condition)
    else:
        event = _compile(f)
        condition = None

    rng = random.Random(cfg.seed)
    hits = 0
    eligible = 0
    for _ in range(cfg.sample_count):
        assignment: dict[str, str] = {}
        for name, parents, outcomes, rows in samplers:
            row = rows[tuple(assignment[p] for p in parents)]
            assignment[name] = outcomes[bisect_right(row, rng.random())]
        if condition is not None and not condition(assignment):
            continue
        eligible += 1
        if event(assignment):
            hits += 1
    if conditional and eligible == 0:
        raise OracleError(
            f"condition never occurred in {cfg.sample_count} samples; "
            "cannot estimate the conditional"
        )
    n = eligible if conditional else cfg.sample_count
    p_hat = hits / n
    stderr = math.sqrt(p_hat * (1.0 - p_hat) / n)
    return McEstimate(p_hat, stderr, cfg.sample_count, cfg.seed)
