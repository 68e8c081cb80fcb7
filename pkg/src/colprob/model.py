"""Experiment declarations, exact rational arithmetic, joint distributions.

Probabilities are `fractions.Fraction` throughout: arbitrary precision,
always in lowest terms, positive denominator, exact arithmetic. No floats
enter core evaluation at any point.

An experiment is a named, finite-outcome random source. It may depend on
parent experiments, in which case its distribution is a full conditional
probability table (one row per assignment of parent outcomes). The parent
graph must be acyclic. A model is just the collection of declared
experiments; its joint outcome space is the universe every query lives in.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import EvalError

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class Atom:
    """A single experiment outcome, e.g. outcome H of experiment c."""

    experiment: str
    outcome: str

    def __str__(self):
        return f"{self.outcome}@{self.experiment}"


@dataclass(frozen=True, eq=False)
class ExperimentDecl:
    """One declared experiment.

    ``cpt`` maps a tuple of parent outcomes (aligned with ``parents``; the
    empty tuple for parentless experiments) to the distribution over this
    experiment's own outcomes. Every row must sum to exactly 1.
    """

    name: str
    outcomes: tuple[str, ...]
    parents: tuple[str, ...] = ()
    cpt: Mapping[tuple[str, ...], Mapping[str, Fraction]] = field(default_factory=dict)
    is_predicate: bool = False

    @staticmethod
    def uniform(name: str, outcomes: Iterable[str]) -> "ExperimentDecl":
        outs = tuple(outcomes)
        w = Fraction(1, len(outs))
        return ExperimentDecl(name, outs, cpt={(): {o: w for o in outs}})

    @staticmethod
    def weighted(name: str, weights: Mapping[str, Fraction]) -> "ExperimentDecl":
        return ExperimentDecl(name, tuple(weights), cpt={(): dict(weights)})

    @staticmethod
    def predicate(name: str, p_true: Fraction) -> "ExperimentDecl":
        """A completed/uncertain proposition as a true/false experiment."""
        dist = {"true": p_true, "false": ONE - p_true}
        return ExperimentDecl(
            name, ("true", "false"), cpt={(): dist}, is_predicate=True
        )


@dataclass(frozen=True, eq=False)
class Model:
    """Immutable collection of experiments keyed by name.

    Construct once, validate, then query from any number of threads; nothing
    here mutates after __init__.
    """

    experiments: Mapping[str, ExperimentDecl]

    @staticmethod
    def of(*decls: ExperimentDecl) -> "Model":
        return Model({d.name: d for d in decls})

    def decl(self, name: str) -> ExperimentDecl:
        try:
            return self.experiments[name]
        except KeyError:
            raise EvalError(f"unknown experiment '{name}'") from None

    def outcomes(self, name: str) -> tuple[str, ...]:
        return self.decl(name).outcomes

    def __contains__(self, name: str) -> bool:
        return name in self.experiments


def validate_model(model: Model) -> list[str]:
    """Check every declaration invariant; return all violations found.

    An empty list means the model is valid. Checks: outcome lists nonempty
    and distinct, parents declared, parent graph acyclic, one cpt row per
    full parent assignment, no stray rows, weights in [0, 1], and every row
    summing to exactly 1.
    """
    issues: list[str] = []
    for name, decl in model.experiments.items():
        prefix = f"experiment {name}"
        if decl.name != name:
            issues.append(f"{prefix}: declared under mismatched key '{decl.name}'")
        if not decl.outcomes:
            issues.append(f"{prefix}: no outcomes declared")
            continue
        seen = set()
        for o in decl.outcomes:
            if o in seen:
                issues.append(f"{prefix}: duplicate outcome '{o}'")
            seen.add(o)
        unknown_parents = [p for p in decl.parents if p not in model.experiments]
        for p in unknown_parents:
            issues.append(f"{prefix}: unknown parent '{p}'")
        if p_dup := [p for i, p in enumerate(decl.parents) if p in decl.parents[:i]]:
            issues.append(f"{prefix}: duplicate parent '{p_dup[0]}'")
        if unknown_parents:
            continue
        issues.extend(_check_cpt(model, decl))
    issues.extend(_check_acyclic(model))
    return issues


def _check_cpt(model: Model, decl: ExperimentDecl) -> list[str]:
    issues = []
    prefix = f"experiment {decl.name}"
    expected_rows = set(
        itertools.product(*(model.outcomes(p) for p in decl.parents))
    )
    for key in decl.cpt:
        if key not in expected_rows:
            issues.append(f"{prefix}: cpt row for impossible parent assignment {key}")
    for key in sorted(expected_rows):
        row = decl.cpt.get(key)
        if row is None:
            issues.append(f"{prefix}: missing cpt row for {_row_label(decl, key)}")
            continue
        for o in row:
            if o not in decl.outcomes:
                issues.append(f"{prefix}: cpt references unknown outcome '{o}'")
        for o, w in row.items():
            if w < 0 or w > 1:
                issues.append(f"{prefix}: probability {w} for outcome '{o}' outside [0, 1]")
        total = sum(row.get(o, ZERO) for o in decl.outcomes)
        if total != 1:
            issues.append(f"{prefix}: cpt row {_row_label(decl, key)} sums to {total}")
    return issues


def _row_label(decl: ExperimentDecl, key: tuple[str, ...]) -> str:
    if not decl.parents:
        return "(unconditional)"
    return ", ".join(f"{p}={o}" for p, o in zip(decl.parents, key))


def _check_acyclic(model: Model) -> list[str]:
    # DFS with an explicit path so we can name the cycle found.
    issues = []
    state: dict[str, int] = {}  # 0 visiting, 1 done

    def visit(name: str, path: list[str]):
        if state.get(name) == 1:
            return
        if state.get(name) == 0:
            cycle = path[path.index(name):] + [name]
            issues.append("cycle: " + "→".join(cycle))
            return
        state[name] = 0
        decl = model.experiments.get(name)
        if decl is not None:
            for p in decl.parents:
                if p in model.experiments:
                    visit(p, path + [name])
        state[name] = 1

    for name in model.experiments:
        if state.get(name) != 1:
            visit(name, [])
    return issues


def ancestral_closure(model: Model, support: Iterable[str]) -> frozenset[str]:
    """Smallest superset of ``support`` closed under the parent relation."""
    closure: set[str] = set()
    frontier = list(support)
    while frontier:
        name = frontier.pop()
        if name in closure:
            continue
        closure.add(name)
        frontier.extend(model.decl(name).parents)
    return frozenset(closure)


def joint_point_prob(model: Model, assignment: Mapping[str, str]) -> Fraction:
    """Exact probability of one full assignment over an ancestrally closed
    domain: the product of each experiment's cpt entry given its parents.

    For mutually independent experiments this reduces to the plain product
    of marginals. The assignment is an unordered mapping; the result does
    not depend on iteration order.
    """
    for name in assignment:
        decl = model.decl(name)
        for p in decl.parents:
            if p not in assignment:
                raise EvalError(
                    f"assignment domain is not ancestrally closed: "
                    f"'{name}' depends on '{p}', which is missing"
                )
    prob = ONE
    for name, outcome in assignment.items():
        decl = model.decl(name)
        if outcome not in decl.outcomes:
            raise EvalError(f"unknown outcome '{outcome}' of experiment '{name}'")
        row = decl.cpt[tuple(assignment[p] for p in decl.parents)]
        prob *= row.get(outcome, ZERO)
    return prob


def topological_order(model: Model, names: Iterable[str]) -> list[str]:
    """Parents-first ordering of ``names`` (which must be ancestrally
    closed), deterministic: ties broken by experiment name."""
    pending = sorted(set(names))
    placed: set[str] = set()
    order: list[str] = []
    while pending:
        progressed = False
        for name in list(pending):
            if all(p in placed for p in model.decl(name).parents):
                order.append(name)
                placed.add(name)
                pending.remove(name)
                progressed = True
        if not progressed:
            raise EvalError("dependency cycle among: " + ", ".join(pending))
    return order
