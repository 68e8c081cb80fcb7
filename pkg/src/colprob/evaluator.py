"""Probability evaluation over a model, with an explainable rule mode.

``prob`` is the reference path: denote the formula, lift its support to
the ancestral closure (so omitted parent experiments are marginalized
implicitly), and sum exact joint probabilities over the space's points.

``prob_explain`` computes the same value by rewrite rules applied
top-down, recording which rule justified each step:

    R1  p(~E)     = 1 - p(E)
    R2  p(E | F)  = p(E) + p(F) - p(E & F)        (equal supports)
    R3  p(E & F)  = p(F) * p(E given F)           (equal supports)
    R4  p(E || F) = 1 - p(~E && ~F)
    R5  p(E && F) = p(E) * p(F) under independence,
                    else p(F) * p(E pgiven F)

with event-space enumeration (the space rules R6-R8 rolled into one step)
as the fallback whenever a rule's side condition fails. Conditionals are
never event spaces; they are probability ratios, legal only at the root.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import EvalError, NullConditionError
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
    format_formula,
)
from .model import Model, ancestral_closure, joint_point_prob
from .semantics import (
    Denotation,
    EventSpace,
    Undetermined,
    denote,
    format_support,
    lift,
)


@dataclass(frozen=True)
class Determined:
    value: Fraction


ProbResult = Determined | Undetermined


@dataclass(frozen=True)
class Derivation:
    """One node of the explanation tree.

    ``rule`` is "R1".."R5" for the rewrite rules, "cpt" for atomic lookups,
    or "enumeration" for the event-space fallback. The root's result always
    equals ``prob`` of the same formula.
    """

    rule: str
    formula: str
    result: ProbResult
    children: tuple["Derivation", ...] = ()
    note: str = ""


def space_prob(space: EventSpace, model: Model) -> Fraction:
    """Exact probability mass of a space: lift to the ancestral closure of
    its support, then sum the joint probability of every point."""
    closure = ancestral_closure(model, space.support)
    lifted = lift(space, closure, model)
    return sum(
        (joint_point_prob(model, p.as_dict()) for p in lifted.points),
        start=Fraction(0),
    )


def prob(f: Formula, model: Model) -> ProbResult:
    """p(f): Determined(exact rational in [0, 1]) or Undetermined."""
    if isinstance(f, GivenAdd):
        return cond_additive(f.event, f.condition, model)
    if isinstance(f, GivenPar):
        return cond_parallel(f.event, f.condition, model)
    d = denote(f, model)
    if isinstance(d, Undetermined):
        return d
    return Determined(space_prob(d, model))


def cond_additive(event: Formula, condition: Formula, model: Model) -> ProbResult:
    """p(event given condition) = p(event & condition) / p(condition),
    defined only when both sides share one support."""
    de = denote(event, model)
    if isinstance(de, Undetermined):
        return de
    df = denote(condition, model)
    if isinstance(df, Undetermined):
        return df
    if de.support != df.support:
        return Undetermined(
            "additive conditional (given) across distinct supports "
            f"{format_support(de.support)} and {format_support(df.support)}"
        )
    p_cond = space_prob(df, model)
    if p_cond == 0:
        raise NullConditionError(
            f"conditioning on null event: p({format_formula(condition)}) = 0"
        )
    joint = EventSpace(de.support, de.points & df.points)
    return Determined(space_prob(joint, model) / p_cond)


def cond_parallel(event: Formula, condition: Formula, model: Model) -> ProbResult:
    """p(event pgiven condition) = p(event && condition) / p(condition).

    No support restriction; for experiments with no shared ancestry this
    collapses to p(event).
    """
    joint = denote(ParAnd(event, condition), model)
    if isinstance(joint, Undetermined):
        return joint
    df = denote(condition, model)
    if isinstance(df, Undetermined):
        return df
    p_cond = space_prob(df, model)
    if p_cond == 0:
        raise NullConditionError(
            f"conditioning on null event: p({format_formula(condition)}) = 0"
        )
    return Determined(space_prob(joint, model) / p_cond)


def independent(model: Model, left: EventSpace, right: EventSpace) -> bool:
    """True when the two supports share no experiment and no ancestry."""
    lc = ancestral_closure(model, left.support)
    rc = ancestral_closure(model, right.support)
    return not (lc & rc)


def prob_explain(f: Formula, model: Model) -> tuple[ProbResult, Derivation]:
    """Evaluate ``f`` while recording the rule applied at every step.

    The returned result is exactly the value ``prob`` gives; the rewrite
    rules and the event-space path agree by construction, so the tree is a
    justification, not an alternative answer.
    """
    d = _explain(f, model)
    return d.result, d


def _explain(f: Formula, model: Model) -> Derivation:
    text = format_formula(f)
    if isinstance(f, GivenAdd):
        return _explain_conditional(f, model, rule="R3")
    if isinstance(f, GivenPar):
        return _explain_conditional(f, model, rule="R5")

    if isinstance(f, AtomNode):
        value = space_prob(_space_of(f, model), model)
        return Derivation("cpt", text, Determined(value))

    if isinstance(f, Not):
        child = _explain(f.child, model)
        if isinstance(child.result, Undetermined):
            return Derivation("R1", text, child.result, (child,))
        value = 1 - child.result.value
        return Derivation("R1", text, Determined(value), (child,),
                          note=f"1 - p({format_formula(f.child)})")

    denoted = denote(f, model)
    if isinstance(denoted, Undetermined):
        rule = {ChoiceOr: "R2", ChoiceAnd: "R3", ParOr: "R4", ParAnd: "R5"}[type(f)]
        return Derivation(rule, text, denoted)

    if isinstance(f, ChoiceOr):
        left = _explain(f.left, model)
        right = _explain(f.right, model)
        both = _explain(ChoiceAnd(f.left, f.right), model)
        value = left.result.value + right.result.value - both.result.value
        return Derivation(
            "R2", text, Determined(value), (left, right, both),
            note="p(E) + p(F) - p(E & F)",
        )

    if isinstance(f, ChoiceAnd):
        p_cond = space_prob(_space_of(f.right, model), model)
        if p_cond == 0:
            return _enumerate_node(f, denoted, model)
        ratio = space_prob(denoted, model) / p_cond
        cond_leaf = Derivation(
            "enumeration",
            format_formula(GivenAdd(f.left, f.right)),
            Determined(ratio),
            note="conditional read off the event spaces",
        )
        right = _explain(f.right, model)
        value = right.result.value * ratio
        return Derivation(
            "R3", text, Determined(value), (right, cond_leaf),
            note="p(F) * p(E given F)",
        )

    if isinstance(f, ParOr):
        neither = ParAnd(Not(f.left), Not(f.right))
        child = _explain(neither, model)
        value = 1 - child.result.value
        return Derivation(
            "R4", text, Determined(value), (child,),
            note=f"1 - p({format_formula(neither)})",
        )

    if isinstance(f, ParAnd):
        left_space = _space_of(f.left, model)
        right_space = _space_of(f.right, model)
        if independent(model, left_space, right_space):
            left = _explain(f.left, model)
            right = _explain(f.right, model)
            value = left.result.value * right.result.value
            return Derivation(
                "R5", text, Determined(value), (left, right),
                note="independence: p(E) * p(F)",
            )
        p_cond = space_prob(right_space, model)
        if p_cond == 0:
            return _enumerate_node(f, denoted, model)
        ratio = space_prob(denoted, model) / p_cond
        cond_leaf = Derivation(
            "enumeration",
            format_formula(GivenPar(f.left, f.right)),
            Determined(ratio),
            note="conditional read off the event spaces",
        )
        right = _explain(f.right, model)
        value = right.result.value * ratio
        return Derivation(
            "R5", text, Determined(value), (right, cond_leaf),
            note="p(F) * p(E pgiven F)",
        )

    raise TypeError(f"not a formula node: {f!r}")


def _explain_conditional(f: GivenAdd | GivenPar, model: Model, rule: str) -> Derivation:
    text = format_formula(f)
    if isinstance(f, GivenAdd):
        result = cond_additive(f.event, f.condition, model)
        joint: Formula = ChoiceAnd(f.event, f.condition)
    else:
        result = cond_parallel(f.event, f.condition, model)
        joint = ParAnd(f.event, f.condition)
    if isinstance(result, Undetermined):
        return Derivation(rule, text, result)
    numerator = _explain(joint, model)
    denominator = _explain(f.condition, model)
    return Derivation(
        rule, text, result, (numerator, denominator),
        note="ratio of the joint to the condition",
    )


def _space_of(f: Formula, model: Model) -> EventSpace:
    d = denote(f, model)
    if isinstance(d, Undetermined):  # callers check the parent first
        raise EvalError(f"subformula unexpectedly undetermined: {d.reason}")
    return d


def _enumerate_node(f: Formula, space: EventSpace, model: Model) -> Derivation:
    closure = ancestral_closure(model, space.support)
    return Derivation(
        "enumeration",
        format_formula(f),
        Determined(space_prob(space, model)),
        note=f"{len(space.points)} point(s) over {format_support(space.support)}, "
             f"summed over {format_support(closure)}",
    )


def render_derivation(d: Derivation, indent: int = 0) -> str:
    """Indented, human-readable rendering of a derivation tree."""
    pad = "  " * indent
    if isinstance(d.result, Determined):
        value = str(d.result.value)
    else:
        value = f"undetermined ({d.result.reason})"
    line = f"{pad}[{d.rule}] p({d.formula}) = {value}"
    if d.note:
        line += f"   ({d.note})"
    lines = [line]
    for child in d.children:
        lines.append(render_derivation(child, indent + 1))
    return "\n".join(lines)
