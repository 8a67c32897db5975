"""Decibel conversions used throughout the package.

All variances are kept in shot-noise units (coherent state = 1), so a
squeezing level of "x dB below shot noise" corresponds to a variance of
10**(-x/10).
"""

import math

from .errors import DomainError


def db_to_var(db: float) -> float:
    """Convert a relative noise level in dB to a linear variance ratio."""
    return 10.0 ** (db / 10.0)


def var_to_db(v: float) -> float:
    """Convert a linear variance ratio to dB relative to shot noise."""
    if v <= 0.0:
        raise DomainError(f"variance must be positive, got {v}")
    return 10.0 * math.log10(v)
