from .caps import ComputationCaps, Context, ParamSpec
from .report import CheckResult, CheckStatus, Report

__all__ = [
    "CheckResult",
    "CheckStatus",
    "ComputationCaps",
    "Context",
    "ParamSpec",
    "Report",
]
