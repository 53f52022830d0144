import math

import numpy as np

from ucp.errors import NumericalError


def chebyshev_u(n, x):
    """Chebyshev polynomial of the second kind U_n(x) by forward recurrence.

    Seeds U_{-1} = 0 and U_0 = 1, so any n >= -1 is accepted and |x| > 1 needs no
    hyperbolic branch.
    """
    if n < -1:
        raise ValueError(f"chebyshev_u needs n >= -1, got {n}")
    if not math.isfinite(x):
        raise NumericalError(f"chebyshev_u argument is not finite: {x}")
    previous, current = 0.0, 1.0
    if n == -1:
        return previous
    for _ in range(n):
        previous, current = current, 2.0 * x * current - previous
    if not math.isfinite(current):
        raise NumericalError(f"U_{n}({x}) overflowed")
    return current


def q_pochhammer(mu, nu, p):
    """Finite q-Pochhammer symbol (mu; nu)_p = prod_{j<p} (1 - mu * nu**j)."""
    if p < 0:
        raise ValueError(f"q_pochhammer needs p >= 0, got {p}")
    if p == 0:
        return 1.0
    factors = 1.0 - mu * np.power(float(nu), np.arange(p, dtype=float))
    return float(np.prod(factors))
