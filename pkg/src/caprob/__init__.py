"""caprob: a numerical laboratory for the capability-robustness budget
of perception-to-action policies.

Exact Gaussian oracle, a linear-Gaussian proxy world, four MI estimators,
channel-capacity upper bounds, and sweep harnesses that verify the budget
inequality end to end.
"""

__version__ = "0.1.0"

from . import bounds, errors, gaussian, kernels, proxy

__all__ = ["bounds", "errors", "gaussian", "kernels", "proxy", "__version__"]
