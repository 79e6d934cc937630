"""Smoothing-kernel profile function of the Cramer-Wold distance.

``phi(D, s)`` is the confluent hypergeometric value 1F1(1/2; D/2; -s), the
radial profile that turns squared point distances into sphere-averaged
products of Gaussian-smoothed projections.  Three evaluation modes:

* ``PhiMode.EXACT_SERIES``  - stabilized Kummer series / Gauss-Legendre
  quadrature, accurate to ~1e-13 relative everywhere (default for 3 <= D < 20);
* ``PhiMode.ASYMPTOTIC``    - ``(1 + 4s/(2D-3))**-0.5`` (default for D >= 20);
* ``PhiMode.BESSEL_D2``     - ``exp(-s/2) I0(s/2)`` via the Abramowitz-Stegun
  polynomial fit (D = 2 only; the default there).
"""

import enum
import math

from . import _loops


class PhiMode(enum.Enum):
    EXACT_SERIES = "exact"
    ASYMPTOTIC = "asymptotic"
    BESSEL_D2 = "bessel2"


_MODE_CODES = {
    PhiMode.EXACT_SERIES: _loops.MODE_EXACT,
    PhiMode.ASYMPTOTIC: _loops.MODE_ASYMPTOTIC,
    PhiMode.BESSEL_D2: _loops.MODE_BESSEL2,
}


def _check_dim(dim):
    if not isinstance(dim, (int,)) or isinstance(dim, bool):
        raise ValueError(f"dimension must be an integer, got {dim!r}")
    if dim < 2:
        raise ValueError(f"dimension must be >= 2, got {dim}")
    return dim


def _check_s(s):
    s = float(s)
    if not math.isfinite(s) or s < 0.0:
        raise ValueError(f"s must be finite and >= 0, got {s!r}")
    return s


def resolve_mode(dim, mode=None):
    """Pick the evaluation mode for dimension ``dim``.

    ``None`` (or the string ``"auto"``) selects the default policy: Bessel
    fit at D = 2, stabilized series for 3 <= D < 20, asymptotic closed form
    for D >= 20.  Strings matching the mode values are also accepted.
    """
    _check_dim(dim)
    if mode is None or mode == "auto":
        if dim == 2:
            return PhiMode.BESSEL_D2
        if dim < 20:
            return PhiMode.EXACT_SERIES
        return PhiMode.ASYMPTOTIC
    if isinstance(mode, str):
        try:
            mode = PhiMode(mode)
        except ValueError:
            raise ValueError(f"unknown phi mode {mode!r}") from None
    if mode is PhiMode.BESSEL_D2 and dim != 2:
        raise ValueError(f"bessel2 mode is only valid for dimension 2, got {dim}")
    return mode


def mode_code(mode):
    """Integer code used by the kernels for a PhiMode."""
    return _MODE_CODES[mode]


def phi_exact(dim, s):
    """1F1(1/2; dim/2; -s) to ~1e-13 relative accuracy."""
    _check_dim(dim)
    s = _check_s(s)
    return _loops.phi_exact_scalar(float(dim), s)


def phi_asymptotic(dim, s):
    """Large-D closed form (1 + 4s/(2*dim-3))**-0.5."""
    _check_dim(dim)
    s = _check_s(s)
    return _loops.phi_asymptotic_scalar(float(dim), s)


def phi_asymptotic_derivative(dim, s):
    """d/ds of phi_asymptotic: -(2/(2*dim-3)) (1 + 4s/(2*dim-3))**-1.5."""
    _check_dim(dim)
    s = _check_s(s)
    return _loops.phi_asymptotic_derivative_scalar(float(dim), s)


def phi_bessel_d2(s):
    """exp(-s/2) I0(s/2): the dim = 2 profile via the two-branch polynomial fit."""
    s = _check_s(s)
    return _loops.phi_bessel2_scalar(s)


def phi(dim, s, mode=None):
    """Profile function with mode dispatch (``mode=None`` picks by dimension)."""
    resolved = resolve_mode(dim, mode)
    s = _check_s(s)
    if resolved is PhiMode.BESSEL_D2:
        return _loops.phi_bessel2_scalar(s)
    if resolved is PhiMode.ASYMPTOTIC:
        return _loops.phi_asymptotic_scalar(float(dim), s)
    return _loops.phi_exact_scalar(float(dim), s)
