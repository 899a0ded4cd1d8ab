"""Pydantic models for instance documents, one per command"""
from typing import List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, StrictBool, StrictInt, StrictStr

# Rationals travel as JSON integers or "p/q" strings; helpers.parse_rational does the rest
Rational = Union[StrictInt, StrictStr]


class Document(BaseModel):
    model_config = ConfigDict(extra="forbid")

    schema_version: StrictStr = "1"


class ConeDocument(Document):
    states: List[StrictStr]
    generators: List[List[Rational]] = []


class SureWinDocument(ConeDocument):
    pass


class PriceDocument(ConeDocument):
    claim: List[Rational]
    interval: StrictBool = False


class SeparateDocument(ConeDocument):
    enumerate: StrictBool = False


class EntryDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    event: List[StrictStr]
    value: Rational


class ExtendDocument(Document):
    states: List[StrictStr]
    entries: List[EntryDocument]


class RepresentDocument(Document):
    states: List[StrictStr]
    basis: List[List[Rational]]
    values: List[Rational]
    require_positive: StrictBool = False


class AnchorDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    function: List[Rational]
    value: Rational


class GammaEvalDocument(Document):
    states: List[StrictStr]
    anchors: List[AnchorDocument]
    function: List[Rational]
    membership_only: StrictBool = False


class CoreWitnessDocument(Document):
    states: List[StrictStr]
    anchors: List[AnchorDocument]
    subset: List[StrictInt]


class MemberDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    tau: List[StrictStr]
    basis: List[List[Rational]]
    values: List[Rational]


class CommonExtensionDocument(Document):
    states: List[StrictStr]
    base: List[StrictStr]
    family: List[MemberDocument]
    pairs: List[Tuple[StrictInt, StrictInt]] = []


class FunctionDocument(BaseModel):
    """An eventually affine function: prefix values, then slope * i + offset"""
    model_config = ConfigDict(extra="forbid")

    prefix: List[Rational] = []
    slope: Rational = 0
    offset: Rational = 0


class WeightDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    index: StrictInt
    weight: Rational


class FunctionalDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    domain: StrictStr
    weights: List[WeightDocument] = []
    limit_charge: Rational = 0
    slope_charge: Rational = 0


class MeasureDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    weights: List[WeightDocument] = []
    limit_charge: Rational = 0


class RieszDocument(Document):
    functional: FunctionalDocument
    functions: List[FunctionDocument] = []


class DaniellDocument(Document):
    functional: FunctionalDocument
    window: Optional[StrictInt] = None


class OrderlyDocument(Document):
    h: List[FunctionDocument]
    target: FunctionDocument
    dominators: List[FunctionDocument]
    measure: MeasureDocument


DOCUMENTS = {
    "sure-win": SureWinDocument,
    "price": PriceDocument,
    "separate": SeparateDocument,
    "extend": ExtendDocument,
    "represent": RepresentDocument,
    "gamma-eval": GammaEvalDocument,
    "core-witness": CoreWitnessDocument,
    "common-extension": CommonExtensionDocument,
    "riesz": RieszDocument,
    "daniell": DaniellDocument,
    "orderly": OrderlyDocument,
}
