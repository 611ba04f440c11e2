"""Angular-momentum special functions with pinned conventions.

Everything downstream of this module is sensitive to phase conventions, so
they are fixed here once and documented in CONVENTIONS.md:

* Clebsch-Gordan coefficients are real, in the Condon-Shortley convention,
  evaluated with Racah's closed-form sum in exact rational arithmetic
  (a single rounding at the final square root).
* Spherical harmonics carry the Condon-Shortley phase and are orthonormal
  on the unit sphere, ``Y_00 = 1/sqrt(4 pi)``.
* Spherical Bessel functions ``j_l``, ``y_l`` and the outgoing Hankel
  function ``h_l^(1) = j_l + i y_l``.

All functions are pure and stateless.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import cos, factorial, pi, sin, sqrt

import numpy as np
from scipy import special

from .errors import InputError

__all__ = [
    "clebsch_gordan",
    "spherical_harmonic",
    "spherical_bessel",
]

_THETA_SLACK = 1e-12


def _check_label(j: int, m: int, name: str) -> None:
    if not isinstance(j, (int, np.integer)) or not isinstance(m, (int, np.integer)):
        raise InputError(f"{name}: labels must be integers, got j={j!r}, m={m!r}")
    if j < 0:
        raise InputError(f"{name}: j must be >= 0, got {j}")
    if abs(m) > j:
        raise InputError(f"{name}: require |m| <= j, got j={j}, m={m}")


@lru_cache(maxsize=None)
def _cg_squared(j1: int, m1: int, j2: int, m2: int, J: int, M: int):
    """Exact (sign, coefficient^2) of <j1 m1; j2 m2 | J M> as a Fraction."""
    f = factorial
    delta2 = Fraction(
        f(j1 + j2 - J) * f(j1 - j2 + J) * f(-j1 + j2 + J), f(j1 + j2 + J + 1)
    )
    pref = (
        Fraction(2 * J + 1)
        * delta2
        * f(J + M)
        * f(J - M)
        * f(j1 + m1)
        * f(j1 - m1)
        * f(j2 + m2)
        * f(j2 - m2)
    )
    total = Fraction(0)
    for z in range(0, min(j1 + j2 - J, j1 - m1, j2 + m2) + 1):
        d1 = j1 + j2 - J - z
        d2 = j1 - m1 - z
        d3 = j2 + m2 - z
        d4 = J - j2 + m1 + z
        d5 = J - j1 - m2 + z
        if min(d1, d2, d3, d4, d5) < 0:
            continue
        total += Fraction((-1) ** z, f(z) * f(d1) * f(d2) * f(d3) * f(d4) * f(d5))
    sign = 1 if total >= 0 else -1
    return sign, total * total * pref


def clebsch_gordan(j1: int, m1: int, j2: int, m2: int, J: int, M: int) -> float:
    """Clebsch-Gordan coefficient <j1 m1; j2 m2 | J M>, Condon-Shortley.

    Returns 0.0 (not an error) when the selection rules fail: M != m1 + m2,
    or (j1, j2, J) violates the triangle inequality.

    Raises
    ------
    InputError
        If any individual label is invalid (negative j, |m| > j).
    """
    _check_label(j1, m1, "(j1, m1)")
    _check_label(j2, m2, "(j2, m2)")
    _check_label(J, M, "(J, M)")
    if M != m1 + m2:
        return 0.0
    if J < abs(j1 - j2) or J > j1 + j2:
        return 0.0
    sign, sq = _cg_squared(j1, m1, j2, m2, J, M)
    return sign * sqrt(float(sq))


def _norm_legendre(l: int, m: int, x: float) -> float:
    """Fully normalized associated Legendre value with Condon-Shortley phase.

    Returns ``bar-P_l^m(x)`` with normalization such that
    ``Y_lm = bar-P_l^m(cos theta) exp(i m phi)``; m must be >= 0.

    Diagonal recursion to (m, m), then upward in l at fixed m; stable for
    the moderate orders used here.
    """
    s = sqrt(max(0.0, 1.0 - x * x))
    p_mm = sqrt(1.0 / (4.0 * pi))
    for k in range(1, m + 1):
        p_mm *= -sqrt((2 * k + 1) / (2.0 * k)) * s
    if l == m:
        return p_mm
    p_next = sqrt(2.0 * m + 3.0) * x * p_mm
    if l == m + 1:
        return p_next
    for ll in range(m + 2, l + 1):
        a = sqrt((4.0 * ll * ll - 1.0) / (ll * ll - m * m))
        b = sqrt(
            ((2.0 * ll + 1.0) * (ll - 1.0 - m) * (ll - 1.0 + m))
            / ((2.0 * ll - 3.0) * (ll * ll - m * m))
        )
        p_mm, p_next = p_next, a * x * p_next - b * p_mm
    return p_next


def spherical_harmonic(l: int, m: int, theta: float, phi: float) -> complex:
    """Orthonormal spherical harmonic Y_lm(theta, phi), Condon-Shortley phase.

    Parameters
    ----------
    l, m : int
        Degree and order, |m| <= l.
    theta : float
        Polar angle in [0, pi].
    phi : float
        Azimuthal angle in radians (any real value).

    Raises
    ------
    InputError
        If |m| > l, l < 0, or theta is outside [0, pi].
    """
    _check_label(l, m, "(l, m)")
    theta = float(theta)
    if theta < -_THETA_SLACK or theta > pi + _THETA_SLACK:
        raise InputError(f"theta must lie in [0, pi], got {theta}")
    theta = min(max(theta, 0.0), pi)
    ma = abs(m)
    p = _norm_legendre(l, ma, cos(theta))
    val = p * complex(cos(ma * phi), sin(ma * phi))
    if m < 0:
        # conjugation symmetry Y_{l,-m} = (-1)^m conj(Y_{l,m})
        val = (-1) ** ma * val.conjugate()
    return val


def spherical_bessel(kind: str, l: int, x, derivative: bool = False):
    """Spherical Bessel / Neumann / outgoing Hankel function.

    Parameters
    ----------
    kind : {'j', 'y', 'h1'}
        'j' regular, 'y' irregular, 'h1' outgoing ``h_l^(1) = j_l + i y_l``.
    l : int
        Order, l >= 0.
    x : float or array_like
        Argument(s), strictly positive (all three kinds are restricted to
        x > 0 because the outgoing wave is singular at the origin).
    derivative : bool
        If True return the derivative with respect to x.

    Returns
    -------
    float, complex or ndarray
        Real for 'j'/'y', complex for 'h1'.
    """
    if kind not in ("j", "y", "h1"):
        raise InputError(f"kind must be one of 'j', 'y', 'h1', got {kind!r}")
    if not isinstance(l, (int, np.integer)) or l < 0:
        raise InputError(f"order l must be a nonnegative integer, got {l!r}")
    arr = np.asarray(x, dtype=float)
    if arr.size == 0 or np.any(arr <= 0.0) or not np.all(np.isfinite(arr)):
        raise InputError("argument x must be finite and > 0")
    if kind == "j":
        out = special.spherical_jn(l, arr, derivative=derivative)
    elif kind == "y":
        out = special.spherical_yn(l, arr, derivative=derivative)
    else:
        out = special.spherical_jn(l, arr, derivative=derivative) + 1j * special.spherical_yn(
            l, arr, derivative=derivative
        )
    if np.isscalar(x) or np.asarray(x).ndim == 0:
        return out.item()
    return out
