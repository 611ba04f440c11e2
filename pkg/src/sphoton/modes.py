"""Mode-function matrices for pure electric / magnetic multipole radiation.

A monochromatic multipole source of order ``j`` sitting at the origin radiates
outgoing spherical waves.  At an observation point ``(kr, theta, phi)`` the
vector amplitude of source mode ``m`` is resolved here onto the *local
helicity basis*: three complex unit vectors attached to the radial direction,

* ``chi_0  = e_r``                      (radial linear polarization),
* ``chi_+1 = -(e_a + i e_b)/sqrt(2)``   (positive helicity),
* ``chi_-1 = +(e_a - i e_b)/sqrt(2)``   (negative helicity),

where ``(e_a, e_b, e_r)`` is the lab frame rotated by the minimal rotation
``R_z(phi) R_y(theta) R_z(-phi)`` taking the z-axis onto the line of sight.
With this gauge the entries obey the phase law ``V[mu, m] ~ exp(i(m-mu)phi)``.

The entries are first assembled in the fixed lab helicity basis from the
standard expansion (Clebsch-Gordan coefficient x spherical harmonic x
outgoing Hankel radial factor),

    magnetic:  gamma * h_j(kr) <j, m-mu; 1, mu | j, m> Y_{j, m-mu}
    electric:  gamma * [ sqrt((j+1)/(2j+1)) h_{j-1}(kr) <j-1, m-mu; 1, mu | j, m> Y_{j-1, m-mu}
                       - sqrt( j   /(2j+1)) h_{j+1}(kr) <j+1, m-mu; 1, mu | j, m> Y_{j+1, m-mu} ]

and then rotated row-wise into the local basis.  The relative minus sign of
the electric combination selects the radiative (transverse) mode; with the
plus sign one gets the longitudinal field instead.  See CONVENTIONS.md.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import cos, pi, sin, sqrt

import numpy as np

from .angular import clebsch_gordan, spherical_bessel, spherical_harmonic
from .errors import InputError, SingularityError

__all__ = [
    "MU_ORDER",
    "PARITIES",
    "SpatialPoint",
    "ModeMatrix",
    "helicity_basis",
    "helicity_rotation",
    "mode_matrix",
    "zone_classify",
]

# Row order of every 3 x (2j+1) matrix in the package: helicity +1, 0, -1.
MU_ORDER = (1, 0, -1)

PARITIES = ("electric", "magnetic")


def mu_index(mu: int) -> int:
    """Row index of helicity label mu in MU_ORDER."""
    try:
        return MU_ORDER.index(mu)
    except ValueError:
        raise InputError(f"helicity label must be one of {MU_ORDER}, got {mu!r}") from None


@dataclass(frozen=True)
class SpatialPoint:
    """Observation point relative to the source at the origin.

    Attributes
    ----------
    kr : float
        Dimensionless radial coordinate (wavenumber x radius), > 0.
    theta : float
        Polar angle in [0, pi].
    phi : float
        Azimuthal angle in radians.
    """

    kr: float
    theta: float
    phi: float

    def __post_init__(self):
        if not np.isfinite(self.kr) or self.kr <= 0.0:
            raise SingularityError(f"kr must be finite and > 0, got {self.kr}")
        if not np.isfinite(self.theta) or self.theta < -1e-12 or self.theta > pi + 1e-12:
            raise InputError(f"theta must lie in [0, pi], got {self.theta}")
        if not np.isfinite(self.phi):
            raise InputError(f"phi must be finite, got {self.phi}")


@dataclass(frozen=True)
class ModeMatrix:
    """Local-helicity mode amplitudes of a pure multipole at one point.

    ``entries[r, c]`` is the component on helicity ``MU_ORDER[r]`` of source
    mode ``m = c - j``; shape 3 x (2j+1).  Entries scale linearly in the
    overall normalization ``gamma``.
    """

    j: int
    parity: str
    gamma: complex
    point: SpatialPoint
    entries: np.ndarray

    def __post_init__(self):
        if self.entries.shape != (3, 2 * self.j + 1):
            raise InputError(
                f"entries must have shape (3, {2 * self.j + 1}), got {self.entries.shape}"
            )
        if not np.all(np.isfinite(self.entries)):
            raise InputError("mode matrix entries must be finite")
        self.entries.setflags(write=False)

    def row(self, mu: int) -> np.ndarray:
        return self.entries[mu_index(mu)]

    @property
    def m_values(self) -> np.ndarray:
        return np.arange(-self.j, self.j + 1)


def helicity_basis(theta: float | None = None, phi: float | None = None) -> np.ndarray:
    """Cartesian components of the helicity basis vectors (chi_+1, chi_0, chi_-1).

    Without angles, returns the fixed lab basis; with angles, the local basis
    attached to the line of sight (minimal-rotation gauge).  Rows follow
    MU_ORDER.
    """
    chi = np.array(
        [
            [-1.0 / sqrt(2.0), -1.0j / sqrt(2.0), 0.0],
            [0.0, 0.0, 1.0],
            [1.0 / sqrt(2.0), -1.0j / sqrt(2.0), 0.0],
        ],
        dtype=complex,
    )
    if theta is None and phi is None:
        return chi
    if theta is None or phi is None:
        raise InputError("provide both angles or neither")
    ct, st = cos(theta), sin(theta)
    cp, sp = cos(phi), sin(phi)
    rz_p = np.array([[cp, -sp, 0.0], [sp, cp, 0.0], [0.0, 0.0, 1.0]])
    ry = np.array([[ct, 0.0, st], [0.0, 1.0, 0.0], [-st, 0.0, ct]])
    rz_m = np.array([[cp, sp, 0.0], [-sp, cp, 0.0], [0.0, 0.0, 1.0]])
    rot = rz_p @ ry @ rz_m
    return chi @ rot.T


def helicity_rotation(theta: float, phi: float) -> np.ndarray:
    """Unitary 3x3 matrix M mapping fixed-basis components to local ones.

    ``M[a, b] = chi_local[a]^dag . chi_fixed[b]`` with rows/columns in
    MU_ORDER, so local components are ``M @ fixed_components``.
    """
    loc = helicity_basis(theta, phi)
    fix = helicity_basis()
    return np.conj(loc) @ fix.T


def _fixed_entries(j: int, parity: str, p: SpatialPoint, gamma: complex) -> np.ndarray:
    ms = range(-j, j + 1)
    out = np.zeros((3, 2 * j + 1), dtype=complex)
    if parity == "magnetic":
        radial = {j: spherical_bessel("h1", j, p.kr)}
        terms = ((1.0, j),)
    else:
        radial = {
            j - 1: spherical_bessel("h1", j - 1, p.kr),
            j + 1: spherical_bessel("h1", j + 1, p.kr),
        }
        terms = (
            (sqrt((j + 1) / (2.0 * j + 1.0)), j - 1),
            (-sqrt(j / (2.0 * j + 1.0)), j + 1),
        )
    for r, mu in enumerate(MU_ORDER):
        for c, m in enumerate(ms):
            q = m - mu
            acc = 0.0j
            for coeff, l in terms:
                if abs(q) > l:
                    continue
                acc += (
                    coeff
                    * radial[l]
                    * clebsch_gordan(l, q, 1, mu, j, m)
                    * spherical_harmonic(l, q, p.theta, p.phi)
                )
            out[r, c] = gamma * acc
    return out


def mode_matrix(j: int, parity: str, p: SpatialPoint, gamma: complex = 1.0) -> ModeMatrix:
    """Build the 3x(2j+1) local-helicity mode matrix V at a spatial point.

    Parameters
    ----------
    j : int
        Multipole order, >= 1.
    parity : {'electric', 'magnetic'}
        Multipole type.
    p : SpatialPoint
        Observation point (kr > 0).
    gamma : complex
        Overall normalization; physical outputs downstream depend on it only
        through a global phase.

    Raises
    ------
    InputError
        Bad order or parity.
    SingularityError
        Raised when constructing a SpatialPoint with kr <= 0.
    """
    if not isinstance(j, (int, np.integer)) or j < 1:
        raise InputError(f"multipole order j must be an integer >= 1, got {j!r}")
    if parity not in PARITIES:
        raise InputError(f"parity must be one of {PARITIES}, got {parity!r}")
    gamma = complex(gamma)
    fixed = _fixed_entries(int(j), parity, p, gamma)
    local = helicity_rotation(p.theta, p.phi) @ fixed
    return ModeMatrix(j=int(j), parity=parity, gamma=gamma, point=p, entries=local)


def zone_classify(kr: float, near_bound: float = 0.1, far_bound: float = 100.0) -> str:
    """Label a radial distance as 'near', 'intermediate' or 'far'.

    Reporting convenience only; the physics is continuous in kr.
    """
    if not np.isfinite(kr) or kr <= 0.0:
        raise SingularityError(f"kr must be finite and > 0, got {kr}")
    if not (0.0 < near_bound < far_bound):
        raise InputError(
            f"require 0 < near_bound < far_bound, got {near_bound}, {far_bound}"
        )
    if kr < near_bound:
        return "near"
    if kr > far_bound:
        return "far"
    return "intermediate"
