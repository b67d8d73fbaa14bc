from vlft_lab.models.channel import ChannelModel, DensityTable
from vlft_lab.models.enums import BoundKind, MConvention, RowStatus, SimVariant, XiMethod
from vlft_lab.models.schedule import DecodingSchedule

__all__ = [
    "BoundKind",
    "ChannelModel",
    "DecodingSchedule",
    "DensityTable",
    "MConvention",
    "RowStatus",
    "SimVariant",
    "XiMethod",
]
