"""Scalar kernels and loop implementations (numba-compiled when available).

Everything here is written in plain scalar Python so that numba can compile
it; the same functions also run un-jitted, which keeps a single source of
truth for the scalar math used by the public API in :mod:`cramerwold.phi`.

The smoothing-kernel profile function evaluated everywhere below is

    profile(D, s) = 1F1(1/2; D/2; -s)

for integer D >= 2.  Three evaluation strategies are exposed, selected by an
integer mode code:

* ``MODE_EXACT`` - ascending Kummer series (rewritten via the Kummer
  transform ``exp(-s) * 1F1((D-1)/2; D/2; s)`` so every term is positive and
  the alternating-series cancellation that ruins float64 beyond s ~ 15 never
  occurs), falling back to 200-node Gauss-Legendre quadrature of the interval
  integral form for s > 40 where the series needs too many terms.
* ``MODE_ASYMPTOTIC`` - the large-D closed form ``(1 + 4s/(2D-3))**-0.5``.
* ``MODE_BESSEL2`` - the D = 2 special case ``exp(-s/2) * I0(s/2)`` via the
  two-branch Abramowitz-Stegun polynomial fit of I0.
"""

import math

import numpy as np

from .backend import maybe_njit

MODE_EXACT = 0
MODE_ASYMPTOTIC = 1
MODE_BESSEL2 = 2

SERIES_SWITCH = 40.0  # series below, quadrature above
QUAD_NODES = 200

_GLX, _GLW = np.polynomial.legendre.leggauss(QUAD_NODES)


@maybe_njit(cache=True)
def phi_series_scalar(dim, s):
    # exp(-s) * 1F1((dim-1)/2; dim/2; s), all-positive Kummer recurrence
    b = 0.5 * dim
    c = 0.5 * (dim - 1.0)
    term = 1.0
    total = 1.0
    k = 0
    while term > 1e-16 * total and k < 500:
        term *= (c + k) * s / ((b + k) * (k + 1.0))
        total += term
        k += 1
    return math.exp(-s) * total


@maybe_njit(cache=True)
def phi_expansion_scalar(dim, s):
    # Large-argument expansion of exp(-s) * 1F1((dim-1)/2; dim/2; s):
    #   Gamma(dim/2) / Gamma((dim-1)/2) * s^(-1/2)
    #     * sum_k (1/2)_k (3/2 - dim/2)_k / (k! * s^k),
    # truncated at the smallest term.  The dropped exponentially small
    # branch is below 1e-17 relative for every s this path serves.
    # Guarded by s >= max(dim, 40): there the term ratio stays under
    # ~1/4, so the sum reaches machine accuracy without intermediate
    # growth (which for s < dim would amplify rounding).
    b = 0.5 * dim
    term = 1.0
    total = 1.0
    k = 0
    while k < 80:
        nxt = term * (0.5 + k) * (1.5 - b + k) / ((k + 1.0) * s)
        if abs(nxt) >= abs(term) or abs(nxt) <= 1e-17 * abs(total):
            total += nxt
            break
        total += nxt
        term = nxt
        k += 1
    const = math.exp(math.lgamma(0.5 * dim) - math.lgamma(0.5 * (dim - 1.0)))
    return const / math.sqrt(s) * total


@maybe_njit(cache=True)
def phi_quad_scalar(dim, s):
    # 200-node Gauss-Legendre quadrature of
    #   C(dim) * integral_{-1}^{1} exp(-s x^2) (1 - x^2)^((dim-3)/2) dx
    # after rescaling x = u / sqrt(s); the exp(-u^2) factor kills the
    # endpoint region, so the dim = 2 endpoint singularity never matters
    # for the s > 40 range this path serves.
    half = min(math.sqrt(s), 8.5)
    p = 0.5 * (dim - 3.0)
    acc = 0.0
    for i in range(QUAD_NODES):
        u = half * _GLX[i]
        base = 1.0 - u * u / s
        if base > 0.0:
            acc += _GLW[i] * math.exp(-u * u + p * math.log(base))
    const = math.exp(math.lgamma(0.5 * dim) - math.lgamma(0.5) - math.lgamma(0.5 * (dim - 1.0)))
    return const / math.sqrt(s) * (half * acc)


@maybe_njit(cache=True)
def phi_exact_scalar(dim, s):
    if s <= SERIES_SWITCH:
        return phi_series_scalar(dim, s)
    if s >= dim:
        return phi_expansion_scalar(dim, s)
    return phi_quad_scalar(dim, s)


@maybe_njit(cache=True)
def phi_asymptotic_scalar(dim, s):
    # 1/sqrt instead of **-0.5: hardware sqrt, ~3x faster than libm pow here
    return 1.0 / math.sqrt(1.0 + 4.0 * s / (2.0 * dim - 3.0))


@maybe_njit(cache=True)
def phi_asymptotic_derivative_scalar(dim, s):
    r = 2.0 * dim - 3.0
    t = 1.0 + 4.0 * s / r
    return -(2.0 / r) / (t * math.sqrt(t))


@maybe_njit(cache=True)
def phi_bessel2_small_scalar(s):
    # exp(-s/2) I0(s/2) for s in [0, 7.5]; Abramowitz-Stegun 9.8.1 with t = s/7.5
    t2 = (s / 7.5) ** 2
    poly = 1.0 + t2 * (3.5156229 + t2 * (3.0899424 + t2 * (1.2067492
           + t2 * (0.2659732 + t2 * (0.0360768 + t2 * 0.0045813)))))
    return math.exp(-0.5 * s) * poly


@maybe_njit(cache=True)
def phi_bessel2_large_scalar(s):
    # exp(-s/2) I0(s/2) for s >= 7.5; Abramowitz-Stegun 9.8.2 with t = s/7.5
    u = 7.5 / s
    poly = 0.39894228 + u * (0.01328592 + u * (0.00225319 + u * (-0.00157565
           + u * (0.0091628 + u * (-0.02057706 + u * (0.02635537
           + u * (-0.01647633 + u * 0.00392377)))))))
    return math.sqrt(2.0 / s) * poly


@maybe_njit(cache=True)
def phi_bessel2_scalar(s):
    if s <= 7.5:
        return phi_bessel2_small_scalar(s)
    return phi_bessel2_large_scalar(s)


@maybe_njit(cache=True)
def phi_mode_scalar(dim, s, mode):
    if mode == MODE_ASYMPTOTIC:
        return phi_asymptotic_scalar(dim, s)
    if mode == MODE_BESSEL2:
        return phi_bessel2_scalar(s)
    return phi_exact_scalar(dim, s)


@maybe_njit(cache=True)
def sum_phi_cross(x, y, scale, mode):
    """sum_ij profile(D, scale * |x_i - y_j|^2), row-major, Kahan-compensated."""
    n, dim = x.shape
    k = y.shape[0]
    fdim = 1.0 * dim
    total = 0.0
    comp = 0.0
    for i in range(n):
        for j in range(k):
            d2 = 0.0
            for a in range(dim):
                t = x[i, a] - y[j, a]
                d2 += t * t
            val = phi_mode_scalar(fdim, d2 * scale, mode) - comp
            acc = total + val
            comp = (acc - total) - val
            total = acc
    return total


@maybe_njit(cache=True)
def sum_phi_norms(x, scale, mode):
    """sum_i profile(D, scale * |x_i|^2), Kahan-compensated."""
    n, dim = x.shape
    fdim = 1.0 * dim
    total = 0.0
    comp = 0.0
    for i in range(n):
        d2 = 0.0
        for a in range(dim):
            d2 += x[i, a] * x[i, a]
        val = phi_mode_scalar(fdim, d2 * scale, mode) - comp
        acc = total + val
        comp = (acc - total) - val
        total = acc
    return total


@maybe_njit(cache=True)
def cw_normal_asym_grad(z, gamma):
    """Gradient wrt z of the sample-vs-N(0,I) squared distance, asymptotic mode."""
    n, dim = z.shape
    fdim = 1.0 * dim
    c1 = 1.0 / (2.0 * n * n * math.sqrt(math.pi))
    c_pair = c1 / (gamma * math.sqrt(gamma))
    c_norm = -c1 * (2.0 * n / math.sqrt(gamma + 0.5)) / (1.0 + 2.0 * gamma)
    inv4g = 1.0 / (4.0 * gamma)
    inv2p4g = 1.0 / (2.0 + 4.0 * gamma)
    out = np.zeros((n, dim))
    for m in range(n):
        for j in range(n):
            d2 = 0.0
            for a in range(dim):
                t = z[m, a] - z[j, a]
                d2 += t * t
            w = phi_asymptotic_derivative_scalar(fdim, d2 * inv4g)
            for a in range(dim):
                out[m, a] += w * (z[m, a] - z[j, a])
        nrm2 = 0.0
        for a in range(dim):
            nrm2 += z[m, a] * z[m, a]
        wn = phi_asymptotic_derivative_scalar(fdim, nrm2 * inv2p4g)
        for a in range(dim):
            out[m, a] = c_pair * out[m, a] + c_norm * wn * z[m, a]
    return out


@maybe_njit(cache=True)
def mardia_sums(x):
    """(sum_jk (x_j . x_k)^3, sum_j |x_j|^4), Kahan-compensated."""
    n, dim = x.shape
    cube_total = 0.0
    cube_comp = 0.0
    for j in range(n):
        for k in range(n):
            dot = 0.0
            for a in range(dim):
                dot += x[j, a] * x[k, a]
            val = dot * dot * dot - cube_comp
            acc = cube_total + val
            cube_comp = (acc - cube_total) - val
            cube_total = acc
    norm4_total = 0.0
    norm4_comp = 0.0
    for j in range(n):
        nrm2 = 0.0
        for a in range(dim):
            nrm2 += x[j, a] * x[j, a]
        val = nrm2 * nrm2 - norm4_comp
        acc = norm4_total + val
        norm4_comp = (acc - norm4_total) - val
        norm4_total = acc
    return cube_total, norm4_total
