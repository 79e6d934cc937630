"""Vectorized NumPy implementations of the hot kernels.

These mirror the loop kernels in :mod:`cramerwold._loops` (same signatures,
same constants) and serve as the fallback backend.  The per-direction
Monte-Carlo evaluators also live here: they are written against NumPy's SIMD
``exp`` with cache-sized chunks, which on a single core outruns scalar jitted
loops by a wide margin.
"""

import math

import numpy as np

from ._loops import (
    MODE_ASYMPTOTIC,
    MODE_BESSEL2,
    MODE_EXACT,
    QUAD_NODES,
    SERIES_SWITCH,
    _GLX,
    _GLW,
)

# Pairwise work per chunk for the closed-form sums.  Sized so a chunk's
# intermediates stay cache-resident: measured on the target host this is both
# faster in absolute terms at large n and keeps the time-vs-n scaling cleanly
# quadratic (doubling ratio ~3.3 instead of ~7 with un-blocked Gram matrices).
# 16k elements leaves room for the half-dozen temporaries of the masked
# large-argument expansion loop without spilling out of L2.
_CHUNK_ELEMS = 1 << 14
_MC_CHUNK = 64  # directions per chunk; keeps buffers cache-resident


def _phi_series_vec(dim, s):
    b = 0.5 * dim
    c = 0.5 * (dim - 1.0)
    term = np.ones_like(s)
    total = np.ones_like(s)
    for k in range(500):
        term = term * ((c + k) / ((b + k) * (k + 1.0))) * s
        total += term
        if np.all(term <= 1e-16 * total):
            break
    return np.exp(-s) * total


def _phi_expansion_vec(dim, s):
    # Masked mirror of the scalar large-argument expansion; arithmetic
    # order matches the scalar loop so both backends agree bitwise.
    b = 0.5 * dim
    term = np.ones_like(s)
    total = np.ones_like(s)
    active = np.ones(s.shape, dtype=bool)
    for k in range(80):
        nxt = term * (0.5 + k) * (1.5 - b + k) / ((k + 1.0) * s)
        stop = (np.abs(nxt) >= np.abs(term)) | (np.abs(nxt) <= 1e-17 * np.abs(total))
        total = np.where(active, total + nxt, total)
        term = np.where(active & ~stop, nxt, term)
        active &= ~stop
        if not active.any():
            break
    const = math.exp(math.lgamma(0.5 * dim) - math.lgamma(0.5 * (dim - 1.0)))
    return const / np.sqrt(s) * total


def _phi_quad_vec(dim, s):
    half = np.minimum(np.sqrt(s), 8.5)
    p = 0.5 * (dim - 3.0)
    u = half[:, None] * _GLX[None, :]
    base = 1.0 - u * u / s[:, None]
    pos = base > 0.0
    logbase = np.log(np.maximum(base, 1e-300))
    integrand = np.where(pos, np.exp(-u * u + p * logbase), 0.0)
    const = math.exp(math.lgamma(0.5 * dim) - math.lgamma(0.5) - math.lgamma(0.5 * (dim - 1.0)))
    return const / np.sqrt(s) * (half * (integrand @ _GLW))


def _phi_exact_vec(dim, s):
    out = np.empty_like(s)
    small = s <= SERIES_SWITCH
    if small.any():
        out[small] = _phi_series_vec(dim, s[small])
    tail = (~small) & (s >= dim)
    if tail.any():
        out[tail] = _phi_expansion_vec(dim, s[tail])
    mid = (~small) & (~tail)
    if mid.any():
        out[mid] = _phi_quad_vec(dim, s[mid])
    return out


def _phi_bessel2_vec(s):
    out = np.empty_like(s)
    small = s <= 7.5
    if small.any():
        t2 = (s[small] / 7.5) ** 2
        poly = 1.0 + t2 * (3.5156229 + t2 * (3.0899424 + t2 * (1.2067492
               + t2 * (0.2659732 + t2 * (0.0360768 + t2 * 0.0045813)))))
        out[small] = np.exp(-0.5 * s[small]) * poly
    big = ~small
    if big.any():
        u = 7.5 / s[big]
        poly = 0.39894228 + u * (0.01328592 + u * (0.00225319 + u * (-0.00157565
               + u * (0.0091628 + u * (-0.02057706 + u * (0.02635537
               + u * (-0.01647633 + u * 0.00392377)))))))
        out[big] = np.sqrt(2.0 / s[big]) * poly
    return out


def phi_values(dim, s, mode):
    """Vectorized profile function over an array of nonnegative s."""
    s = np.asarray(s, dtype=np.float64)
    if mode == MODE_ASYMPTOTIC:
        return 1.0 / np.sqrt(1.0 + 4.0 * s / (2.0 * dim - 3.0))
    if mode == MODE_BESSEL2:
        return _phi_bessel2_vec(s)
    if mode == MODE_EXACT:
        return _phi_exact_vec(float(dim), s)
    raise ValueError(f"unknown mode code {mode!r}")


def _pair_d2_chunk(xc, y, nxc, ny):
    d2 = nxc[:, None] + ny[None, :] - 2.0 * (xc @ y.T)
    np.maximum(d2, 0.0, out=d2)
    return d2


def sum_phi_cross(x, y, scale, mode):
    n, dim = x.shape
    k = y.shape[0]
    nx = np.einsum("ij,ij->i", x, x)
    ny = np.einsum("ij,ij->i", y, y)
    rows = max(1, min(n, _CHUNK_ELEMS // max(k, 1)))
    parts = []
    for lo in range(0, n, rows):
        d2 = _pair_d2_chunk(x[lo:lo + rows], y, nx[lo:lo + rows], ny)
        parts.append(float(phi_values(dim, d2 * scale, mode).sum()))
    return math.fsum(parts)


def sum_phi_norms(x, scale, mode):
    dim = x.shape[1]
    nx = np.einsum("ij,ij->i", x, x)
    return float(phi_values(dim, nx * scale, mode).sum())


def cw_normal_asym_grad(z, gamma):
    n, dim = z.shape
    c1 = 1.0 / (2.0 * n * n * math.sqrt(math.pi))
    c_pair = c1 / (gamma * math.sqrt(gamma))
    c_norm = -c1 * (2.0 * n / math.sqrt(gamma + 0.5)) / (1.0 + 2.0 * gamma)
    r = 2.0 * dim - 3.0
    nz = np.einsum("ij,ij->i", z, z)
    rows = max(1, min(n, _CHUNK_ELEMS // max(n, 1)))
    pair = np.empty_like(z)
    for lo in range(0, n, rows):
        zc = z[lo:lo + rows]
        d2 = nz[lo:lo + rows, None] + nz[None, :] - 2.0 * (zc @ z.T)
        np.maximum(d2, 0.0, out=d2)
        t = 1.0 + 4.0 * (d2 / (4.0 * gamma)) / r
        w = -(2.0 / r) / (t * np.sqrt(t))
        pair[lo:lo + rows] = w.sum(axis=1)[:, None] * zc - w @ z
    tn = 1.0 + 4.0 * (nz / (2.0 + 4.0 * gamma)) / r
    wn = -(2.0 / r) / (tn * np.sqrt(tn))
    return c_pair * pair + c_norm * wn[:, None] * z


def mardia_sums(x):
    n = x.shape[0]
    rows = max(1, min(n, _CHUNK_ELEMS // n))
    cube_parts = []
    for lo in range(0, n, rows):
        g = x[lo:lo + rows] @ x.T
        cube_parts.append(float((g * g * g).sum()))
    nx = np.einsum("ij,ij->i", x, x)
    return math.fsum(cube_parts), float((nx * nx).sum())


def mc_pair_values(px, py, gamma):
    """Per-direction smoothed L2 distances between two projected samples.

    ``px``/``py`` hold one direction per row.  Self sums exploit evenness of
    the Gaussian kernel (upper triangle doubled, diagonal exact); the cross
    sum is dense.
    """
    ndir, n = px.shape
    k = py.shape[1]
    q = 1.0 / (4.0 * gamma)
    c0 = 1.0 / (2.0 * math.sqrt(math.pi * gamma))
    iun = np.triu_indices(n, 1)
    iuk = np.triu_indices(k, 1)
    inv_nn = 1.0 / (n * n)
    inv_kk = 1.0 / (k * k)
    inv_nk = 1.0 / (n * k)
    vals = np.empty(ndir)
    for lo in range(0, ndir, _MC_CHUNK):
        a = px[lo:lo + _MC_CHUNK]
        b = py[lo:lo + _MC_CHUNK]
        da = a[:, iun[0]] - a[:, iun[1]]
        np.square(da, out=da)
        da *= -q
        np.exp(da, out=da)
        sxx = n + 2.0 * da.sum(axis=1)
        db = b[:, iuk[0]] - b[:, iuk[1]]
        np.square(db, out=db)
        db *= -q
        np.exp(db, out=db)
        syy = k + 2.0 * db.sum(axis=1)
        dx = a[:, :, None] - b[:, None, :]
        np.square(dx, out=dx)
        dx *= -q
        np.exp(dx, out=dx)
        sxy = dx.reshape(a.shape[0], -1).sum(axis=1)
        v = c0 * (sxx * inv_nn + syy * inv_kk - 2.0 * (sxy * inv_nk))
        vals[lo:lo + _MC_CHUNK] = np.maximum(v, 0.0)
    return vals


def mc_normal_values(px, gamma):
    """Per-direction smoothed L2 distances between a projected sample and N(0,1)."""
    ndir, n = px.shape
    q = 1.0 / (4.0 * gamma)
    c0 = 1.0 / (2.0 * math.sqrt(math.pi * gamma))
    prior_self = 1.0 / (2.0 * math.sqrt(math.pi * (1.0 + gamma)))
    cross_var = 1.0 + 2.0 * gamma
    cross_c = 1.0 / math.sqrt(2.0 * math.pi * cross_var)
    iun = np.triu_indices(n, 1)
    inv_nn = 1.0 / (n * n)
    vals = np.empty(ndir)
    for lo in range(0, ndir, _MC_CHUNK):
        a = px[lo:lo + _MC_CHUNK]
        da = a[:, iun[0]] - a[:, iun[1]]
        np.square(da, out=da)
        da *= -q
        np.exp(da, out=da)
        s_self = n + 2.0 * da.sum(axis=1)
        across = a * a
        across *= -1.0 / (2.0 * cross_var)
        np.exp(across, out=across)
        s_cross = across.sum(axis=1)
        v = c0 * (s_self * inv_nn) + prior_self - (2.0 / n) * cross_c * s_cross
        vals[lo:lo + _MC_CHUNK] = np.maximum(v, 0.0)
    return vals
