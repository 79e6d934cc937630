"""Mardia-style multivariate normality statistics.

Raw (uncentered, unwhitened) moments against the N(0, I) reference, matching
how latent codes are compared to the prior during CWAE training:

    skewness  b1 = (1/n^2) sum_{j,k} (x_j . x_k)^3
    kurtosis  b2 = (1/n)   sum_j |x_j|^4

For N(0, I_D) the population kurtosis is D(D+2), so ``normalized_kurtosis``
(b2 minus that reference) is the deviation of interest.
"""

from dataclasses import dataclass

from . import kernels
from .distance import _as_sample


@dataclass(frozen=True)
class MardiaStats:
    skewness: float
    kurtosis: float
    normalized_kurtosis: float
    n: int
    dim: int


def mardia(x):
    """Raw Mardia skewness/kurtosis of a sample against the N(0, I) reference."""
    x = _as_sample(x, "x")
    n, dim = x.shape
    cube_sum, norm4_sum = kernels.mardia_sums(x)
    b1 = cube_sum / (n * n)
    b2 = norm4_sum / n
    return MardiaStats(
        skewness=b1,
        kurtosis=b2,
        normalized_kurtosis=b2 - dim * (dim + 2.0),
        n=n,
        dim=dim,
    )
