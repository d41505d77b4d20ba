"""Sample moments of a market dataset and the log-normal moment formula.

Growth moments are taken over the n-1 consumption ratios x_t = c_{t+1}/c_t,
level moments over the log levels ln(c_t) of all n years, including the final
year (so replacing the final consumption changes mu_z and sigma2_z as well as
the last growth ratio). Return means use every return row. Variances use the
population divisor by default; pass ddof=1 for the sample divisor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataset import MarketDataset
from .errors import NegativeVariance, SeriesTooShort


@dataclass(frozen=True)
class SampleMoments:
    """First and second moments feeding calibration and expected utility.

    mu_x, sigma2_x: mean/variance of log consumption growth
    mean_x:         arithmetic mean of gross consumption growth
    mean_Re:        arithmetic mean of the equity gross return
    mean_Rf:        arithmetic mean of the risk-free gross return
    mu_z, sigma2_z: mean/variance of log consumption levels
    """

    mu_x: float
    sigma2_x: float
    mean_x: float
    mean_Re: float
    mean_Rf: float
    mu_z: float
    sigma2_z: float

    def __post_init__(self):
        if self.sigma2_x < 0 or self.sigma2_z < 0:
            raise NegativeVariance("variances must be nonnegative")
        if min(self.mean_x, self.mean_Re, self.mean_Rf) <= 0:
            raise ValueError("gross means must be positive")


def compute_moments(d: MarketDataset, ddof: int = 0) -> SampleMoments:
    """Sample moments of `d`.

    Raises SeriesTooShort when no growth ratio can be formed (and, with
    ddof=1, when a variance would have no degrees of freedom).
    """
    c = np.asarray(d.consumption.values, dtype=float)
    if c.size < 2:
        raise SeriesTooShort("need at least two years of consumption")
    x = c[1:] / c[:-1]
    lx = np.log(x)
    lz = np.log(c)
    if ddof and (lx.size - ddof < 1 or lz.size - ddof < 1):
        raise SeriesTooShort(f"too few observations for ddof={ddof}")
    return SampleMoments(
        mu_x=float(lx.mean()),
        sigma2_x=float(lx.var(ddof=ddof)),
        mean_x=float(x.mean()),
        mean_Re=float(np.mean(d.equity_return.values)),
        mean_Rf=float(np.mean(d.riskfree_return.values)),
        mu_z=float(lz.mean()),
        sigma2_z=float(lz.var(ddof=ddof)),
    )


def lognormal_moment(a: float, mu: float, sigma2: float) -> float:
    """E[z^a] for ln z ~ N(mu, sigma2): exp(a*mu + a^2*sigma2/2)."""
    if sigma2 < 0:
        raise NegativeVariance("sigma2 must be nonnegative")
    return math.exp(a * mu + 0.5 * a * a * sigma2)


def consistency_gap(m: SampleMoments) -> float:
    """ln(mean_x) - (mu_x + sigma2_x/2).

    Zero exactly when the growth sample satisfies the log-normal mean
    identity. The three calibration equations differ by precisely this
    number, so it measures how far the system is from having any exact
    solution (see calibration module).
    """
    return math.log(m.mean_x) - (m.mu_x + 0.5 * m.sigma2_x)
