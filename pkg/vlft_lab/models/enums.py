# vlft_lab/models/enums.py
from enum import Enum


class XiMethod(str, Enum):
    BscRcuExact = "BscRcuExact"
    DmcDtConvolution = "DmcDtConvolution"
    ExhaustiveOracle = "ExhaustiveOracle"


class MConvention(str, Enum):
    M_minus_one = "M_minus_one"
    M = "M"


class BoundKind(str, Enum):
    infinite = "infinite"
    truncated = "truncated"
    repeated = "repeated"
    periodic = "periodic"
    combined = "combined"
    arq = "arq"


class SimVariant(str, Enum):
    Truncated = "Truncated"
    Repeated = "Repeated"
    InfiniteCapped = "InfiniteCapped"


class RowStatus(str, Enum):
    ok = "ok"
    infeasible = "infeasible"
