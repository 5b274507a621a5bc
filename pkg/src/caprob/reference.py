"""Published reference values, echoed in report summaries for eyeball
comparison only. Nothing here is asserted by tests: the originals come
from experiments (real perception models, full-scale grids) that this
laboratory does not reproduce.
"""

# Median analytic / estimated slack per attack scale on the full-size
# verification grid (desk grids reproduce the trend, not the values).
SLACK_MEDIANS_ANALYTIC = {
    0.05: 23.1,
    0.1: 18.3,
    0.2: 13.7,
    0.5: 8.3,
    1.0: 6.2,
    2.0: 5.0,
}
SLACK_MEDIANS_ESTIMATED = {
    0.05: 12.7,
    0.1: 11.6,
    0.2: 10.4,
    0.5: 7.4,
    1.0: 4.9,
    2.0: 3.9,
}

# Leak stress test peak values at (lam=0.99, eps=1.0); reproduced almost
# exactly by the dx=7, da=7, sigma_pi=0.3 configuration.
LEAK_PEAK_NATS = 8.66
LEAK_PEAK_COUPLING_NATS = 6.39

# Best-cell achievement ratio and the under-actuated plateau on the
# full-size ridge-policy sweep.
ACHIEVABILITY_BEST_RATIO = 0.934
ACHIEVABILITY_UNDERACTUATED_PLATEAU = 0.50

# One discrete-inequality row on a real discrete-token policy:
# cap 7.54, rob 1.37 gives slack 6.17.
DISCRETE_ROW_CAP = 7.54
DISCRETE_ROW_ROB = 1.37

# Encoder-ceiling shift signatures: language-model-side adaptation moved
# the ceiling by at most 8.7% of the vanilla bound, while the strongest
# input-side filter cut the realized noise variance 0.556 -> 0.161.
LLM_SIDE_MAX_RELATIVE_SHIFT = 0.087
INPUT_SIDE_SIGMA2_VANILLA = 0.556
INPUT_SIDE_SIGMA2_FILTERED = 0.161

# Hard cap for 7 action coordinates at 256 levels each: 7 * ln 256.
ACTION_ENTROPY_HARD_CAP = 38.8


def reference_block(pairs):
    """Markdown lines labeling values as published references, not asserted."""
    lines = ["", "### Published reference (for eyeball comparison, not asserted)", ""]
    for label, value in pairs:
        lines.append(f"- {label}: {value}")
    return lines
