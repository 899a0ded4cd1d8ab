"""Command handlers: instance document in, verdict document and exit code out"""
import argparse
import logging
import sys
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from pydantic import ValidationError

from ..config.settings import settings
from ..core import coherence, concave, tailmodel
from ..core.errors import CoherenceError, InputError, InvariantError, SchemaViolationError
from ..core.eventually_affine import EventuallyAffine
from ..core.models import (
    ConeSpec, FunctionalSpec, PartialAssignment, PayoffFn, Scenario, SureWin,
)
from ..data.loader import document_loader
from ..utils.helpers import format_location, format_rational, format_vector, parse_rational, parse_vector
from . import serialization
from .documents import DOCUMENTS

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INVARIANT = 2


@dataclass
class Outcome:
    verdict: str
    payload: dict
    verify: Callable[[], list[str]]


# === Document parsing ===

def _payoffs(rows, path: str) -> tuple[PayoffFn, ...]:
    return tuple(PayoffFn(parse_vector(row, f"{path}[{i}]")) for i, row in enumerate(rows))


def _cone(doc) -> ConeSpec:
    return ConeSpec(Scenario(tuple(doc.states)), _payoffs(doc.generators, "generators"))


def _anchors(doc, membership_only: bool = False) -> concave.AnchorSet:
    anchors = tuple(
        (
            PayoffFn(parse_vector(a.function, f"anchors[{j}].function")),
            parse_rational(a.value, f"anchors[{j}].value"),
        )
        for j, a in enumerate(doc.anchors)
    )
    return concave.AnchorSet(Scenario(tuple(doc.states)), anchors, membership_only)


def _function(doc, path: str) -> EventuallyAffine:
    return EventuallyAffine(
        parse_vector(doc.prefix, f"{path}.prefix"),
        parse_rational(doc.slope, f"{path}.slope"),
        parse_rational(doc.offset, f"{path}.offset"),
    )


def _weights(items, path: str) -> tuple[tuple[int, object], ...]:
    return tuple(
        (item.index, parse_rational(item.weight, f"{path}[{i}].weight")) for i, item in enumerate(items)
    )


def _functional(doc) -> tailmodel.TailFunctional:
    if doc.domain not in {d.value for d in tailmodel.Domain}:
        raise InputError(f"unknown domain {doc.domain!r} at functional.domain")
    return tailmodel.TailFunctional(
        doc.domain,
        _weights(doc.weights, "functional.weights"),
        parse_rational(doc.limit_charge, "functional.limit_charge"),
        parse_rational(doc.slope_charge, "functional.slope_charge"),
    )


# === Finite state space commands ===

def handle_sure_win(doc) -> Outcome:
    cone = _cone(doc)
    verdict = coherence.detect_sure_win(cone)
    verify = lambda: coherence.verify_verdict(cone, verdict)
    if isinstance(verdict, SureWin):
        return Outcome("sure_win", serialization.sure_win(verdict), verify)
    return Outcome("separating", {"m": serialization.probability(verdict.m)}, verify)


def handle_price(doc) -> Outcome:
    cone = _cone(doc)
    claim = PayoffFn(parse_vector(doc.claim, "claim"))
    cone.check_payoff(claim)
    price = coherence.superhedge_price(cone, claim)
    verify = lambda: coherence.verify_price(cone, claim, price)
    if price.is_finite:
        verdict = "finite"
        payload = {
            "value": format_rational(price.value),
            "primal": {"alpha": format_rational(price.alpha), "lambda": format_vector(price.coefficients)},
            "dual": serialization.probability(price.dual),
        }
    else:
        verdict = "minus_infinity"
        payload = {"value": serialization.extended(price.value), "sure_win": serialization.sure_win(price.sure_win)}
    if doc.interval:
        lower, upper = coherence.price_interval(cone, claim, price)
        payload["interval"] = {"lower": serialization.extended(lower), "upper": serialization.extended(upper)}
    return Outcome(verdict, payload, verify)


def handle_separate(doc) -> Outcome:
    cone = _cone(doc)
    result = coherence.separating_measures(cone, enumerate=doc.enumerate)
    verify = lambda: coherence.verify_separating(cone, result)
    if result.is_empty:
        return Outcome("empty", {"sure_win": serialization.sure_win(result.sure_win)}, verify)
    payload = {"sample": serialization.probability(result.sample)}
    if result.vertices is not None:
        payload["vertices"] = [serialization.probability(v) for v in result.vertices]
    return Outcome("nonempty", payload, verify)


def handle_extend(doc) -> Outcome:
    entries = tuple(
        (frozenset(e.event), parse_rational(e.value, f"entries[{i}].value")) for i, e in enumerate(doc.entries)
    )
    assignment = PartialAssignment(Scenario(tuple(doc.states)), entries)
    result = coherence.extend_to_probability(assignment)
    verify = lambda: coherence.verify_extension(assignment, result)
    if result.extends:
        return Outcome("extends", {"m": serialization.probability(result.m)}, verify)
    return Outcome("sure_win", {"a": format_vector(result.sure_win)}, verify)


def handle_represent(doc) -> Outcome:
    functional = FunctionalSpec(
        Scenario(tuple(doc.states)), _payoffs(doc.basis, "basis"), parse_vector(doc.values, "values")
    )
    result = coherence.represent_functional(functional, require_positive=doc.require_positive)
    verify = lambda: coherence.verify_representation(functional, result)
    if isinstance(result, coherence.NotPositive):
        payload = {
            "witness": format_vector(result.witness.values),
            "coefficients": format_vector(result.coefficients),
            "value": format_rational(result.value),
        }
        return Outcome("not_positive", payload, verify)
    payload = {
        "charge": format_vector(result.charge),
        "phi1": format_rational(result.phi1),
        "positive": result.positive,
        "positive_part": format_vector(result.positive_part),
        "negative_part": format_vector(result.negative_part),
    }
    return Outcome("represented", payload, verify)


# === Concave integrals ===

def handle_gamma_eval(doc) -> Outcome:
    anchors = _anchors(doc, doc.membership_only)
    f = PayoffFn(parse_vector(doc.function, "function"))
    result = concave.eval_generated(anchors, f)
    verify = lambda: concave.verify_generated(anchors, f, result)
    payload = {"value": serialization.extended(result.value)}
    if result.weights is not None:
        payload["weights"] = format_vector(result.weights)
    if result.core is not None:
        payload["core"] = format_vector(result.core.weights)
    verdict = {"-inf": "minus_infinity", "+inf": "plus_infinity"}.get(payload["value"], "finite")
    return Outcome(verdict, payload, verify)


def handle_core_witness(doc) -> Outcome:
    anchors = _anchors(doc)
    result = concave.shapley_witness(anchors, doc.subset)
    verify = lambda: concave.verify_shapley(anchors, doc.subset, result)
    if isinstance(result, concave.Incoherent):
        payload = serialization.sure_win(result.sure_win)
        payload["generators"] = [format_vector(g.values) for g in result.cone.generators]
        return Outcome("incoherent", payload, verify)
    payload = {
        "gamma_c": format_rational(result.gamma_c),
        "lambda_c": serialization.probability(result.witness),
        "theta": format_vector(result.theta),
        "weights": format_vector(result.weights),
    }
    return Outcome("witness", payload, verify)


def handle_common_extension(doc) -> Outcome:
    family = tuple(
        concave.FamilyMember(
            frozenset(m.tau), _payoffs(m.basis, f"family[{k}].basis"), parse_vector(m.values, f"family[{k}].values")
        )
        for k, m in enumerate(doc.family)
    )
    problem = concave.ExtensionProblem(Scenario(tuple(doc.states)), tuple(doc.base), family)
    bound = concave.coherence_bound(problem)
    extension = concave.common_extension(problem, bound)

    def verify() -> list[str]:
        return concave.verify_bound(problem, bound) + concave.verify_common_extension(problem, extension)

    if isinstance(extension, concave.IncoherentFamily):
        verdict = "incoherent"
        payload = {"ray": format_vector(extension.ray)}
    else:
        verdict = "coherent"
        payload = {
            "bound": format_rational(bound.bound),
            "coefficients": format_vector(bound.coefficients),
            "mu": [
                {"state": w, "label": t, "mass": format_rational(extension.mu[(w, t)])}
                for w, t in problem.cells
            ],
        }
    if doc.pairs:
        report = concave.restriction_monotonicity(problem, doc.pairs, bound)
        payload["monotonicity"] = {
            "applicable": report.coherent,
            "comparisons": [
                {
                    "tau": c.tau_index,
                    "upsilon": c.upsilon_index,
                    "basis_index": c.basis_index,
                    "nonnegative": c.nonnegative,
                    "phi_tau": format_rational(c.phi_tau),
                    "phi_upsilon": format_rational(c.phi_upsilon),
                    "holds": c.holds,
                }
                for c in report.comparisons
            ],
        }
    return Outcome(verdict, payload, verify)


# === Tail model ===

def handle_riesz(doc) -> Outcome:
    phi = _functional(doc.functional)
    functions = [_function(f, f"functions[{k}]") for k, f in enumerate(doc.functions)]
    decomposition = tailmodel.riesz_decompose(phi)
    rows = []
    for f in functions:
        limits = tailmodel.truncation_limits(phi, f)
        rows.append({
            "value": format_rational(phi(f)),
            "integral": format_rational(tailmodel.integrate_strict(decomposition.m, f)),
            "perp": format_rational(decomposition.perp(f)),
            "bounded_part": format_rational(limits.bounded_part),
            "residual": format_rational(limits.residual),
            "stabilization_index": limits.stabilization_index,
        })

    def verify() -> list[str]:
        failures = tailmodel.verify_decomposition(phi, decomposition)
        for k, (f, row) in enumerate(zip(functions, rows)):
            m_value = tailmodel.integrate_strict(decomposition.m, f)
            if phi(f) != decomposition.phi1 * m_value + decomposition.perp(f):
                failures.append(f"decomposition identity fails on function {k}")
            if parse_rational(row["residual"]) != decomposition.perp(f):
                failures.append(f"truncation residual differs from perp on function {k}")
        return failures

    payload = {
        "phi1": format_rational(decomposition.phi1),
        "m": serialization.measure(decomposition.m),
        "perp": serialization.functional(decomposition.perp),
        "functions": rows,
    }
    return Outcome("decomposition", payload, verify)


def handle_daniell(doc) -> Outcome:
    phi = _functional(doc.functional)
    window = tailmodel.check_window(doc.window)
    result = tailmodel.daniell_check(phi)
    verify = lambda: tailmodel.verify_daniell(phi, result, window)
    if isinstance(result, tailmodel.Daniell):
        return Outcome("daniell", {"measure": serialization.measure(result.measure)}, verify)
    payload = {
        "kind": result.kind.value,
        "family": result.description,
        "limit": format_rational(result.limit),
        "from_index": result.from_index,
        "members": [serialization.function(result.member(result.from_index + k)) for k in range(3)],
    }
    return Outcome("counterexample", payload, verify)


def handle_orderly(doc) -> Outcome:
    h = [_function(f, f"h[{k}]") for k, f in enumerate(doc.h)]
    target = _function(doc.target, "target")
    dominators = [_function(f, f"dominators[{k}]") for k, f in enumerate(doc.dominators)]
    m = tailmodel.TailMeasure(
        _weights(doc.measure.weights, "measure.weights"),
        parse_rational(doc.measure.limit_charge, "measure.limit_charge"),
    )
    report = tailmodel.orderly_diagnostic(h, target, dominators, m)
    verify = lambda: tailmodel.verify_orderly(h, target, dominators, m, report)

    def steps(verdicts) -> list[dict]:
        return [{"index": v.index, "holds": v.holds, "witness": v.witness} for v in verdicts]

    payload = {
        "pointwise_domination": steps(report.pointwise_domination),
        "monotone": steps(report.monotone),
        "nonnegative": steps(report.nonnegative),
        "dominator_integrals": format_vector(report.dominator_integrals),
        "note": report.note,
    }
    return Outcome("report", payload, verify)


HANDLERS = {
    "sure-win": handle_sure_win,
    "price": handle_price,
    "separate": handle_separate,
    "extend": handle_extend,
    "represent": handle_represent,
    "gamma-eval": handle_gamma_eval,
    "core-witness": handle_core_witness,
    "common-extension": handle_common_extension,
    "riesz": handle_riesz,
    "daniell": handle_daniell,
    "orderly": handle_orderly,
}


# === Entry points ===

def error_document(kind: str, message: str) -> dict:
    return {"error": {"kind": kind, "message": message}}


def run(command: str, raw: dict, check: bool = False) -> tuple[dict, int]:
    """Dispatch one instance; negative verdicts are successful runs"""
    try:
        if command not in HANDLERS:
            raise InputError(f"unknown command {command!r}")
        document_loader.validate_instance(command, raw)
        doc = DOCUMENTS[command].model_validate(raw)
        if doc.schema_version != settings.SCHEMA_VERSION:
            raise InputError(
                f"schema_version {doc.schema_version!r} is not supported, expected {settings.SCHEMA_VERSION!r}"
            )
        outcome = HANDLERS[command](doc)
        status = "not_requested"
        if check:
            failures = outcome.verify()
            if failures:
                raise InvariantError(f"certificate re-verification failed: {'; '.join(failures)}")
            status = "verified"
        logger.info(f"✅ {command}: {outcome.verdict}")
        return {
            "command": command,
            "schema_version": settings.SCHEMA_VERSION,
            "verdict": outcome.verdict,
            "payload": outcome.payload,
            "check": status,
        }, EXIT_OK
    except ValidationError as e:
        first = e.errors()[0]
        message = f"schema violation at {format_location(first['loc'])}: {first['msg']}"
        logger.error(f"❌ {command}: {message}")
        return error_document("schema", message), EXIT_INPUT
    except SchemaViolationError as e:
        logger.error(f"❌ {command}: {e}")
        return error_document("schema", str(e)), EXIT_INPUT
    except InvariantError as e:
        logger.error(f"❌ {command}: {e}")
        return error_document("invariant", str(e)), EXIT_INVARIANT
    except CoherenceError as e:
        logger.error(f"❌ {command}: {e}")
        return error_document("input", str(e)), EXIT_INPUT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coherence", description=settings.APP_TITLE)
    parser.add_argument("command", choices=sorted(HANDLERS))
    parser.add_argument("--input", default=None, help="instance file (default: stdin)")
    parser.add_argument("--check", action="store_true", help="re-verify every certificate")
    parser.add_argument("--pretty", action="store_true", help="indented output")
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.APP_VERSION}")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        raw = document_loader.load_instance(args.input)
    except InputError as e:
        document, code = error_document("input", str(e)), EXIT_INPUT
    else:
        document, code = run(args.command, raw, check=args.check)
    sys.stdout.write(serialization.dumps(document, pretty=args.pretty) + "\n")
    return code
