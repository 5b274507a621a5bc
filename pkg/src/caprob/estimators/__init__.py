"""MI estimators: plug-in histogram (Miller-Madow), KSG, MINE, InfoNCE.

The neural estimators live behind a lazy import so that loading the
package never pulls in torch unless they are actually used.
"""

from .common import MIEstimate
from .histogram import (
    HistogramSpec,
    histogram_mi_1d,
    leak_debit_summary,
    perdim_entropy,
    perdim_mi,
)
from .ksg import ksg_mi

_NEURAL = ("CriticConfig", "mine_mi", "infonce_mi")


def __getattr__(name):
    if name in _NEURAL:
        from . import neural

        return getattr(neural, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


__all__ = [
    "MIEstimate",
    "HistogramSpec",
    "histogram_mi_1d",
    "perdim_mi",
    "perdim_entropy",
    "leak_debit_summary",
    "ksg_mi",
    "CriticConfig",
    "mine_mi",
    "infonce_mi",
]
