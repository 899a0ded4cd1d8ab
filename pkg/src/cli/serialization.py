"""Canonical JSON for verdict documents: sorted keys, rationals as strings"""
import json
from fractions import Fraction
from typing import Any

from ..core.eventually_affine import EventuallyAffine
from ..core.models import MinusInfinity, PlusInfinity, Probability, SureWin
from ..core.tailmodel import TailFunctional, TailMeasure
from ..utils.helpers import format_rational, format_vector


def extended(value) -> str:
    if isinstance(value, (MinusInfinity, PlusInfinity)):
        return str(value)
    return format_rational(value)


def probability(m: Probability) -> list[str]:
    return format_vector(m.weights)


def sure_win(verdict: SureWin) -> dict:
    return {"lambda": format_vector(verdict.coefficients)}


def weights(items) -> list[dict]:
    return [{"index": i, "weight": format_rational(w)} for i, w in items]


def function(f: EventuallyAffine) -> dict:
    return {
        "prefix": format_vector(f.prefix),
        "slope": format_rational(f.slope),
        "offset": format_rational(f.offset),
    }


def measure(m: TailMeasure) -> dict:
    return {"weights": weights(m.weights), "limit_charge": format_rational(m.limit_charge)}


def functional(phi: TailFunctional) -> dict:
    return {
        "domain": phi.domain.value,
        "weights": weights(phi.weights),
        "limit_charge": format_rational(phi.limit_charge),
        "slope_charge": format_rational(phi.slope_charge),
    }


def _default(value: Any):
    if isinstance(value, Fraction):
        return format_rational(value)
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def dumps(document: dict, pretty: bool = False) -> str:
    """Byte-stable rendering; Fractions left in the payload are written canonically"""
    return json.dumps(
        document,
        sort_keys=True,
        indent=2 if pretty else None,
        ensure_ascii=False,
        default=_default,
    )
