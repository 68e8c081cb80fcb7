"""Denotational semantics: event formulas as spaces of exclusive points.

A point assigns one outcome to each experiment in a space's support; it is
unordered, so two points are equal exactly when their assignments are. An
event space is a set of pairwise-distinct points over a fixed support.

The denotation is structural:

  * an atom denotes the singleton space over its experiment;
  * ``~E`` denotes the complement of E within the full joint space over
    E's support;
  * ``E | F`` and ``E & F`` denote union and intersection, and are only
    determined when E and F have *equal* supports (any mismatch, even an
    overlap, is undetermined rather than silently lifted);
  * ``E && F`` denotes the unordered, flattened Cartesian conjunction:
    every merge of a point of E with a point of F in which shared
    experiments agree; conflicting merges are dropped, duplicate atoms
    collapse (which is what makes ``a && a`` mean ``a`` for predicates);
  * ``E || F`` is evaluated through its defining expansion
    ``(E && F) | (~E && F) | (E && ~F)``.

Conditionals have no denotation; they are probability-level constructs and
are rejected here.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import EmptySpaceError, EvalError
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
from .model import Model


class SharedExperimentWarning(UserWarning):
    """Parallel conjunction over a shared non-predicate experiment.

    The parallel connectives are meant for distinct experiments; for shared
    ones the conflict-filtering merge still yields a well-defined space
    (e.g. ``H@c && T@c`` is empty), but the query is probably not what the
    author intended, so we flag it instead of guessing.
    """


@dataclass(frozen=True)
class Point:
    """One outcome per experiment, stored as a sorted tuple of pairs."""

    items: tuple[tuple[str, str], ...]

    @staticmethod
    def of(assignment: Mapping[str, str]) -> "Point":
        return Point(tuple(sorted(assignment.items())))

    @property
    def experiments(self) -> frozenset[str]:
        return frozenset(e for e, _ in self.items)

    def outcome(self, experiment: str) -> str:
        for e, o in self.items:
            if e == experiment:
                return o
        raise KeyError(experiment)

    def as_dict(self) -> dict[str, str]:
        return dict(self.items)

    def merge(self, other: "Point") -> "Point | None":
        """Combine two points; None when a shared experiment disagrees."""
        merged = dict(self.items)
        for e, o in other.items:
            if merged.setdefault(e, o) != o:
                return None
        return Point.of(merged)

    def __str__(self) -> str:
        return "{" + ", ".join(f"{e}={o}" for e, o in self.items) + "}"


@dataclass(frozen=True)
class EventSpace:
    support: frozenset[str]
    points: frozenset[Point]

    def __post_init__(self):
        for p in self.points:
            if p.experiments != self.support:
                raise ValueError(
                    f"point {p} does not cover support {format_support(self.support)}"
                )

    @staticmethod
    def of(support: Iterable[str], points: Iterable[Point]) -> "EventSpace":
        return EventSpace(frozenset(support), frozenset(points))

    def __str__(self) -> str:
        if not self.points:
            return "{ }"
        return "{ " + ", ".join(str(p) for p in sorted(self.points, key=lambda p: p.items)) + " }"


@dataclass(frozen=True)
class Undetermined:
    """First-class 'the calculus assigns no value here' verdict."""

    reason: str


Denotation = EventSpace | Undetermined


def format_support(support: Iterable[str]) -> str:
    return "{" + ", ".join(sorted(support)) + "}"


def full_space(model: Model, support: Iterable[str]) -> EventSpace:
    """The joint space of every outcome combination over ``support``."""
    names = sorted(support)
    combos = itertools.product(*(model.outcomes(n) for n in names))
    points = frozenset(Point.of(dict(zip(names, combo))) for combo in combos)
    return EventSpace(frozenset(names), points)


def cartesian_conj(s: EventSpace, t: EventSpace) -> EventSpace:
    """Unordered, flattened Cartesian conjunction of two spaces.

    Points merge pairwise; merges that disagree on a shared experiment are
    dropped and duplicate atoms collapse, so the result is again a set of
    genuine partial assignments over the combined support.
    """
    support = s.support | t.support
    points = set()
    for a in s.points:
        for b in t.points:
            merged = a.merge(b)
            if merged is not None:
                points.add(merged)
    return EventSpace(support, frozenset(points))


def lift(s: EventSpace, target: Iterable[str], model: Model) -> EventSpace:
    """Extend every point of ``s`` with all outcome combinations of the
    experiments in ``target`` that ``s`` does not already assign."""
    target = frozenset(target)
    missing = target - s.support
    if not s.support <= target:
        raise EvalError(
            f"cannot lift a space over {format_support(s.support)} "
            f"to the smaller support {format_support(target)}"
        )
    if not missing:
        return s
    extension = full_space(model, missing)
    points = frozenset(
        a.merge(b) for a in s.points for b in extension.points
    )
    return EventSpace(target, points)


def denote(f: Formula, model: Model) -> Denotation:
    """The event space of ``f`` under ``model``, or Undetermined.

    Undeterminedness arises exactly when a choice connective spans two
    different supports; it propagates upward from subformulas. Unknown
    atoms and embedded conditionals are errors, not verdicts.
    """
    if isinstance(f, AtomNode):
        decl = model.decl(f.experiment)
        if f.outcome not in decl.outcomes:
            raise EvalError(
                f"unknown outcome '{f.outcome}' of experiment '{f.experiment}'"
            )
        return EventSpace.of(
            [f.experiment], [Point.of({f.experiment: f.outcome})]
        )
    if isinstance(f, Not):
        inner = denote(f.child, model)
        if isinstance(inner, Undetermined):
            return inner
        universe = full_space(model, inner.support)
        return EventSpace(inner.support, universe.points - inner.points)
    if isinstance(f, (ChoiceAnd, ChoiceOr)):
        left = denote(f.left, model)
        if isinstance(left, Undetermined):
            return left
        right = denote(f.right, model)
        if isinstance(right, Undetermined):
            return right
        if left.support != right.support:
            op = "choice-and (&)" if isinstance(f, ChoiceAnd) else "choice-or (|)"
            return Undetermined(
                f"{op} across distinct supports "
                f"{format_support(left.support)} and {format_support(right.support)}"
            )
        if isinstance(f, ChoiceAnd):
            return EventSpace(left.support, left.points & right.points)
        return EventSpace(left.support, left.points | right.points)
    if isinstance(f, ParAnd):
        left = denote(f.left, model)
        if isinstance(left, Undetermined):
            return left
        right = denote(f.right, model)
        if isinstance(right, Undetermined):
            return right
        shared = left.support & right.support
        flagged = sorted(e for e in shared if not model.decl(e).is_predicate)
        if flagged:
            warnings.warn(
                "parallel-and (&&) over shared experiment(s) "
                f"{format_support(flagged)}; merging with conflict filtering",
                SharedExperimentWarning,
                stacklevel=2,
            )
        return cartesian_conj(left, right)
    if isinstance(f, ParOr):
        # Defining expansion: at least one side occurs.
        e, g = f.left, f.right
        expanded = ChoiceOr(
            ChoiceOr(ParAnd(e, g), ParAnd(Not(e), g)), ParAnd(e, Not(g))
        )
        return denote(expanded, model)
    if isinstance(f, (GivenAdd, GivenPar)):
        raise EvalError(
            "conditionals ('given'/'pgiven') are only allowed at the root "
            "of a query; they have no event space"
        )
    raise TypeError(f"not a formula node: {f!r}")


def to_set_normal_form(s: EventSpace) -> Formula:
    """Rewrite a nonempty space as a choice-or of parallel-ands of atoms.

    The result is canonical (points and atoms in sorted order) and denotes
    exactly ``s``. The empty space has no such formula; asking for one is
    an EmptySpaceError.
    """
    if not s.points:
        raise EmptySpaceError(
            "the empty event space has no set normal form "
            "(no choice-or of atoms denotes it)"
        )
    disjuncts = []
    for point in sorted(s.points, key=lambda p: p.items):
        atoms = [AtomNode(e, o) for e, o in point.items]
        conj: Formula = atoms[0]
        for a in atoms[1:]:
            conj = ParAnd(conj, a)
        disjuncts.append(conj)
    out: Formula = disjuncts[0]
    for d in disjuncts[1:]:
        out = ChoiceOr(out, d)
    return out
