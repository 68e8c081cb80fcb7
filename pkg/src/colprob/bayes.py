"""Both Bayes rules over a user-supplied partition of disjoint events.

The additive rule conditions within a single experiment:

    posterior_i = p(cell_i & F) / sum_j p(cell_j & F)

and therefore demands that every cell and the evidence share one support.
The parallel rule conditions across experiments:

    posterior_i = p(cell_i && F) / sum_j p(cell_j && F)

equivalently prior-times-likelihood, p(cell_i) * p(F pgiven cell_i), which
agrees with the joint form exactly under rational arithmetic.

Picking the wrong variant is a reported error, never a silent zero: for a
transmitted/received pair the additive rule is rejected with a support
mismatch instead of dividing 0 by 0.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction

from .errors import PartitionError
from .formula import ChoiceAnd, Formula, ParAnd, format_formula
from .evaluator import cond_parallel, prob
from .model import Model
from .semantics import SharedExperimentWarning, Undetermined, denote, format_support

ADDITIVE = "additive"
PARALLEL = "parallel"


@dataclass(frozen=True)
class Partition:
    """An ordered list of at least two candidate events."""

    cells: tuple[Formula, ...]

    def __post_init__(self):
        if len(self.cells) < 2:
            raise ValueError("a partition needs at least two cells")


@dataclass(frozen=True)
class PartitionReport:
    ok: bool
    violations: tuple[str, ...]
    exhaustive: bool
    total: Fraction


def check_partition(p: Partition, model: Model, variant: str) -> PartitionReport:
    """Verify pairwise disjointness and report exhaustiveness.

    Disjointness uses the variant's own conjunction (choice for additive,
    parallel for parallel). Exhaustiveness (cell probabilities summing to
    exactly 1) is reported but not required; the Bayes denominator
    normalizes over the given cells regardless. Undetermined cells, or
    cells with differing supports under the additive variant, are errors.
    """
    if variant not in (ADDITIVE, PARALLEL):
        raise ValueError(f"unknown variant {variant!r}")
    if variant == ADDITIVE:
        _common_support(p, model)
    cell_probs = []
    for i, cell in enumerate(p.cells, start=1):
        r = _quiet_prob(cell, model)
        if isinstance(r, Undetermined):
            raise PartitionError(
                f"cell {i} ({format_formula(cell)}) is undetermined: {r.reason}"
            )
        cell_probs.append(r.value)
    conj = ChoiceAnd if variant == ADDITIVE else ParAnd
    violations = []
    for i in range(len(p.cells)):
        for j in range(i + 1, len(p.cells)):
            overlap = _quiet_prob(conj(p.cells[i], p.cells[j]), model)
            if isinstance(overlap, Undetermined):
                raise PartitionError(
                    f"cells {i + 1},{j + 1}: disjointness undetermined: "
                    f"{overlap.reason}"
                )
            if overlap.value != 0:
                violations.append(f"cells {i + 1},{j + 1} not disjoint")
    total = sum(cell_probs, start=Fraction(0))
    return PartitionReport(
        ok=not violations,
        violations=tuple(violations),
        exhaustive=(total == 1),
        total=total,
    )


def bayes_additive(p: Partition, evidence: Formula, model: Model) -> list[Fraction]:
    """Posterior of each cell given ``evidence``, additive reading."""
    report = check_partition(p, model, ADDITIVE)
    if not report.ok:
        raise PartitionError("partition cells overlap", report.violations)
    cell_support = _common_support(p, model)
    ev = denote(evidence, model)
    if isinstance(ev, Undetermined):
        raise PartitionError(f"evidence is undetermined: {ev.reason}")
    if ev.support != cell_support:
        raise PartitionError(
            f"support mismatch: partition cells over {format_support(cell_support)} "
            f"but evidence over {format_support(ev.support)}; "
            "the additive Bayes rule needs a single experiment"
        )
    weights = [
        _determined(_quiet_prob(ChoiceAnd(cell, evidence), model))
        for cell in p.cells
    ]
    return _normalize(weights)


def bayes_parallel(
    p: Partition, evidence: Formula, model: Model, form: str = "joint"
) -> list[Fraction]:
    """Posterior of each cell given ``evidence``, parallel reading.

    ``form`` selects how the weights are computed: "joint" uses
    p(cell && evidence) directly, "prior-likelihood" uses
    p(cell) * p(evidence pgiven cell). The two agree exactly.
    """
    report = check_partition(p, model, PARALLEL)
    if not report.ok:
        raise PartitionError("partition cells overlap", report.violations)
    if form not in ("joint", "prior-likelihood"):
        raise ValueError(f"unknown form {form!r}")
    weights = []
    for cell in p.cells:
        if form == "joint":
            weights.append(_determined(_quiet_prob(ParAnd(cell, evidence), model)))
        else:
            prior = _determined(_quiet_prob(cell, model))
            if prior == 0:
                weights.append(Fraction(0))
                continue
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", SharedExperimentWarning)
                likelihood = cond_parallel(evidence, cell, model)
            weights.append(prior * _determined(likelihood))
    return _normalize(weights)


def _normalize(weights: list[Fraction]) -> list[Fraction]:
    denominator = sum(weights, start=Fraction(0))
    if denominator == 0:
        raise PartitionError(
            "zero denominator: the evidence is incompatible with every cell"
        )
    return [w / denominator for w in weights]


def _determined(result) -> Fraction:
    if isinstance(result, Undetermined):
        raise PartitionError(f"undetermined weight: {result.reason}")
    return result.value


def _common_support(p: Partition, model: Model) -> frozenset[str]:
    supports = []
    for i, cell in enumerate(p.cells, start=1):
        d = denote(cell, model)
        if isinstance(d, Undetermined):
            raise PartitionError(
                f"cell {i} ({format_formula(cell)}) is undetermined: {d.reason}"
            )
        supports.append(d.support)
    first = supports[0]
    for i, s in enumerate(supports[1:], start=2):
        if s != first:
            raise PartitionError(
                f"support mismatch between cells: cell 1 over "
                f"{format_support(first)} but cell {i} over {format_support(s)}"
            )
    return first


def _quiet_prob(f: Formula, model: Model):
    # Conjunctions built here are engine plumbing, not user queries; the
    # shared-experiment warning would only be noise.
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SharedExperimentWarning)
        return prob(f, model)
