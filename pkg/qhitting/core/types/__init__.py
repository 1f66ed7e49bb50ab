from .channel_spec import ChannelKind, ChannelSpecType, DensityType, MixType
from .report import AssumptionType, DiagnosticsType, MethodResultType
