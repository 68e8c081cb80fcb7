"""Command-line interface: evaluate queries, run Bayes inference, REPL.

Exit codes: 0 for a determined result, 2 when the calculus leaves the
query undetermined, 1 for any error (bad file, parse failure, invalid
model, null conditioning event, partition violations).

Values print as exact rationals; the 4-significant-digit decimal is a
display courtesy (marked with an approximation sign) and never feeds back
into any comparison. JSON output is byte-stable: fixed key order,
rationals rendered as "p/q" strings.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .bayes import Partition, bayes_additive, bayes_parallel, check_partition
from .errors import ColprobError, EmptySpaceError, ModelError, ParseError
from .evaluator import (
    Derivation,
    Determined,
    ProbResult,
    prob,
    prob_explain,
    render_derivation,
)
from .formula import Formula, format_formula
from .model import Model
from .oracle import McEstimate, SampleConfig, enumerate_prob, mc_estimate
from .parser import parse_formula, parse_model
from .semantics import Undetermined, denote, format_support, to_set_normal_form

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNDETERMINED = 2


def fraction_pq(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def decimal4(value: Fraction) -> str:
    return f"{float(value):.4g}"


@dataclass
class QueryOutput:
    query: str
    status: str  # determined | undetermined | error
    value: Fraction | None = None
    reason: str | None = None
    derivation: Derivation | None = None
    oracle: ProbResult | None = None
    mc: McEstimate | None = None

    def result_text(self) -> str:
        if self.status == "determined":
            return f"{self.value} (≈{decimal4(self.value)})"
        if self.status == "undetermined":
            return f"undetermined: {self.reason}"
        return f"error: {self.reason}"

    def render_text(self) -> str:
        lines = [self.result_text()]
        if self.derivation is not None:
            lines.append(render_derivation(self.derivation))
        if self.oracle is not None:
            lines.append(_oracle_text(self))
        if self.mc is not None:
            m = self.mc
            lines.append(
                f"mc: {m.estimate:.6g} ± {m.stderr:.3g} "
                f"(n={m.samples}, seed={m.seed})"
            )
        return "\n".join(lines)

    def to_json(self) -> str:
        payload = {
            "query": self.query,
            "status": self.status,
            "value": fraction_pq(self.value) if self.value is not None else None,
            "decimal": decimal4(self.value) if self.value is not None else None,
            "reason": self.reason,
            "derivation": _derivation_json(self.derivation),
            "oracle": _oracle_json(self),
            "mc": None
            if self.mc is None
            else {
                "estimate": self.mc.estimate,
                "stderr": self.mc.stderr,
                "samples": self.mc.samples,
                "seed": self.mc.seed,
            },
        }
        return json.dumps(payload)

    def exit_code(self) -> int:
        if self.status == "determined":
            return EXIT_OK
        if self.status == "undetermined":
            return EXIT_UNDETERMINED
        return EXIT_ERROR


def _oracle_agrees(out: QueryOutput) -> bool:
    if isinstance(out.oracle, Determined):
        return out.status == "determined" and out.oracle.value == out.value
    return out.status == "undetermined"


def _oracle_text(out: QueryOutput) -> str:
    verdict = "agree" if _oracle_agrees(out) else "DISAGREE"
    if isinstance(out.oracle, Determined):
        return f"oracle: {out.oracle.value} ({verdict})"
    return f"oracle: undetermined ({verdict})"


def _oracle_json(out: QueryOutput):
    if out.oracle is None:
        return None
    if isinstance(out.oracle, Determined):
        return {
            "status": "determined",
            "value": fraction_pq(out.oracle.value),
            "agrees": _oracle_agrees(out),
        }
    return {"status": "undetermined", "value": None, "agrees": _oracle_agrees(out)}


def _derivation_json(d: Derivation | None):
    if d is None:
        return None
    determined = isinstance(d.result, Determined)
    return {
        "rule": d.rule,
        "formula": d.formula,
        "value": fraction_pq(d.result.value) if determined else None,
        "reason": None if determined else d.result.reason,
        "note": d.note or None,
        "children": [_derivation_json(c) for c in d.children],
    }


def run_query(
    model: Model,
    query: str,
    *,
    explain: bool = False,
    oracle: bool = False,
    mc_samples: int | None = None,
    seed: int = 0,
) -> QueryOutput:
    """Evaluate one query string against a loaded model."""
    f = parse_formula(query)
    derivation = None
    if explain:
        result, derivation = prob_explain(f, model)
    else:
        result = prob(f, model)
    out = QueryOutput(query=query, status="", derivation=derivation)
    if isinstance(result, Determined):
        out.status = "determined"
        out.value = result.value
    else:
        out.status = "undetermined"
        out.reason = result.reason
    if oracle:
        out.oracle = enumerate_prob(f, model)
    if mc_samples is not None:
        out.mc = mc_estimate(f, model, SampleConfig(mc_samples, seed))
    return out


def _load_model(path: str) -> Model:
    return parse_model(Path(path).read_text(encoding="utf-8"))


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_ERROR


def _cmd_eval(args) -> int:
    try:
        model = _load_model(args.model)
        out = run_query(
            model,
            args.query,
            explain=args.explain,
            oracle=args.oracle,
            mc_samples=args.mc_samples,
            seed=args.seed,
        )
    except (OSError, ColprobError) as err:
        return _fail(str(err))
    print(out.to_json() if args.json else out.render_text())
    return out.exit_code()


def _cmd_bayes(args) -> int:
    try:
        model = _load_model(args.model)
        cells = [parse_formula(c) for c in args.cell]
        evidence = parse_formula(args.evidence)
        partition = Partition(tuple(cells))
        report = check_partition(partition, model, args.variant)
        if args.variant == "additive":
            posteriors = bayes_additive(partition, evidence, model)
        else:
            posteriors = bayes_parallel(partition, evidence, model)
    except (OSError, ValueError, ColprobError) as err:
        code = _fail(str(err))
        for v in getattr(err, "violations", ()):
            print(f"  {v}", file=sys.stderr)
        return code
    if args.json:
        payload = {
            "variant": args.variant,
            "evidence": args.evidence,
            "partition": {
                "disjoint": report.ok,
                "exhaustive": report.exhaustive,
                "total": fraction_pq(report.total),
            },
            "posteriors": [
                {
                    "cell": format_formula(cell),
                    "value": fraction_pq(v),
                    "decimal": decimal4(v),
                }
                for cell, v in zip(cells, posteriors)
            ],
        }
        print(json.dumps(payload))
    else:
        exhaustive = (
            "exhaustive"
            if report.exhaustive
            else f"not exhaustive (cells sum to {report.total})"
        )
        print(f"partition: disjoint, {exhaustive}")
        for cell, v in zip(cells, posteriors):
            print(f"{format_formula(cell)}: {v} (≈{decimal4(v)})")
    return EXIT_OK


def _cmd_check(args) -> int:
    try:
        model = _load_model(args.model)
    except OSError as err:
        return _fail(str(err))
    except ModelError as err:
        for issue in err.issues:
            print(f"error: {issue}", file=sys.stderr)
        return EXIT_ERROR
    except ColprobError as err:
        return _fail(str(err))
    print(f"ok ({len(model.experiments)} experiments)")
    return EXIT_OK


def _cmd_repl(args) -> int:
    try:
        model = _load_model(args.model)
    except (OSError, ColprobError) as err:
        return _fail(str(err))
    interactive = sys.stdin.isatty()
    if interactive:
        print("colprob repl; :quit to leave, :space/:explain/:bayes for tools")
    while True:
        if interactive:
            print("colprob> ", end="", flush=True)
        line = sys.stdin.readline()
        if not line:
            return EXIT_OK
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line == ":quit":
            return EXIT_OK
        try:
            _repl_dispatch(line, model)
        except ColprobError as err:
            print(f"error: {err}")
        except ValueError as err:
            print(f"error: {err}")


def _repl_dispatch(line: str, model: Model) -> None:
    if line.startswith(":space"):
        _repl_space(line[len(":space"):].strip(), model)
    elif line.startswith(":explain"):
        out = run_query(model, line[len(":explain"):].strip(), explain=True)
        print(out.render_text())
    elif line.startswith(":bayes"):
        _repl_bayes(line[len(":bayes"):].strip(), model)
    elif line.startswith(":"):
        print(f"error: unknown command {line.split()[0]!r}")
    else:
        print(run_query(model, line).result_text())


def _repl_space(text: str, model: Model) -> None:
    f = parse_formula(text)
    d = denote(f, model)
    if isinstance(d, Undetermined):
        print(f"undetermined: {d.reason}")
        return
    print(f"support: {format_support(d.support)}")
    print(f"space: {d}")
    try:
        print(f"set normal form: {format_formula(to_set_normal_form(d))}")
    except EmptySpaceError as err:
        print(f"set normal form: none ({err})")


def _repl_bayes(text: str, model: Model) -> None:
    variant, _, rest = text.partition(" ")
    if variant not in ("additive", "parallel"):
        raise ValueError(":bayes needs a variant: additive or parallel")
    rest = rest.strip()
    if not rest.startswith("["):
        raise ValueError(":bayes syntax: :bayes <variant> [cell, cell, ...] <evidence>")
    cells_part, sep, evidence_part = rest[1:].partition("]")
    if not sep or not evidence_part.strip():
        raise ValueError(":bayes syntax: :bayes <variant> [cell, cell, ...] <evidence>")
    cells = [parse_formula(c) for c in cells_part.split(",")]
    evidence = parse_formula(evidence_part.strip())
    partition = Partition(tuple(cells))
    report = check_partition(partition, model, variant)
    if variant == "additive":
        posteriors = bayes_additive(partition, evidence, model)
    else:
        posteriors = bayes_parallel(partition, evidence, model)
    exhaustive = "exhaustive" if report.exhaustive else f"cells sum to {report.total}"
    print(f"partition: disjoint, {exhaustive}")
    for cell, v in zip(cells, posteriors):
        print(f"{format_formula(cell)}: {v} (≈{decimal4(v)})")


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="colprob",
        description="Exact probabilities for event formulas over declared experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate one query")
    p_eval.add_argument("--model", required=True, help="model file")
    p_eval.add_argument("--query", required=True, help="formula to evaluate")
    p_eval.add_argument("--explain", action="store_true", help="print the rule derivation")
    p_eval.add_argument("--oracle", action="store_true",
                        help="cross-check with brute-force enumeration")
    p_eval.add_argument("--mc-samples", type=int, default=None, metavar="N",
                        help="also run a seeded Monte Carlo estimate")
    p_eval.add_argument("--seed", type=int, default=0, help="Monte Carlo seed")
    p_eval.add_argument("--json", action="store_true", help="machine-readable output")
    p_eval.set_defaults(func=_cmd_eval)

    p_bayes = sub.add_parser("bayes", help="posteriors over a partition")
    p_bayes.add_argument("--model", required=True)
    p_bayes.add_argument("--variant", required=True, choices=("additive", "parallel"))
    p_bayes.add_argument("--cell", action="append", required=True,
                         help="partition cell (repeat; at least two)")
    p_bayes.add_argument("--evidence", required=True)
    p_bayes.add_argument("--json", action="store_true")
    p_bayes.set_defaults(func=_cmd_bayes)

    p_repl = sub.add_parser("repl", help="interactive query loop")
    p_repl.add_argument("--model", required=True)
    p_repl.set_defaults(func=_cmd_repl)

    p_check = sub.add_parser("check", help="validate a model file")
    p_check.add_argument("--model", required=True)
    p_check.set_defaults(func=_cmd_check)
    return parser


def main(argv=None) -> int:
    args = build_arg_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
