"""In-repo special functions.

The asymptotic constants downstream depend on Gamma evaluations; these are
computed here with a fixed Lanczos approximation rather than taken from the
environment, so every consumer of this package reproduces identical constants
bit-for-bit.  Relative error is below 1e-12 on the positive reals we use
(arguments in (0, 5)); the unit tests pin 1e-10 against an independent
implementation.
"""

import math

# Lanczos coefficients, g = 7, n = 9 (Godfrey's tabulation).
_LANCZOS_G = 7.0
_LANCZOS_C = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma_value(x: float) -> float:
    """Gamma(x) for x > 0.

    Args:
        x: strictly positive real argument.

    Returns:
        Gamma(x).
    """
    if not x > 0.0:
        raise ValueError(f"gamma_value requires x > 0, got {x}")
    if x < 0.5:
        # reflection keeps the Lanczos series in its accurate range
        return math.pi / (math.sin(math.pi * x) * gamma_value(1.0 - x))
    z = x - 1.0
    acc = _LANCZOS_C[0]
    for i in range(1, len(_LANCZOS_C)):
        acc += _LANCZOS_C[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * math.exp(-t) * acc


def beta_value(a: float, b: float) -> float:
    """Euler Beta function B(a, b) for positive arguments."""
    return gamma_value(a) * gamma_value(b) / gamma_value(a + b)


def normal_cdf(x: float) -> float:
    """Standard normal CDF."""
    return 0.5 * math.erfc(-x / math.sqrt(2.0))
