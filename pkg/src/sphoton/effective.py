"""Whitening of local field fluctuations into canonical photon operators.

The Gram matrix of the mode-matrix rows,

    G[mu, mu'] = sum_m V[mu, m] V*[mu', m],

is the commutator matrix of the helicity components of the field at a point
and simultaneously the quantum noise floor of polarization measurements
(difference between antinormally and normally ordered polarization matrices).
It is Hermitian and positive semidefinite.  Diagonalizing it and rescaling by
the square roots of its eigenvalues turns the helicity components into a
triple of position-dependent annihilation operators with exactly canonical
commutators; the rows of the resulting transform ``T`` are orthonormal.

In the local helicity basis produced by :func:`sphoton.modes.mode_matrix` the
Gram matrix is diagonal at every point with the two transverse eigenvalues
exactly equal.  A plain eigensolver returns an arbitrary basis inside such a
degenerate eigenspace (driven by roundoff), so the diagonalizer below realigns
degenerate clusters onto the helicity axes before assigning labels.  This
keeps labels continuous along spatial paths and the output deterministic.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from math import sqrt

import numpy as np

from .angular import spherical_harmonic
from .errors import DarkPointError, InputError, SuppressedModeError
from .modes import MU_ORDER, ModeMatrix, mu_index

__all__ = [
    "FluctuationMatrix",
    "EffectiveTransform",
    "CoherentParameters",
    "fluctuation_matrix",
    "diagonalize_fluctuation",
    "effective_transform",
    "build_effective_transform",
    "coherent_parameters",
    "phase_reduced_realness",
]

DEFAULT_W_EPSILON = 1e-8

# Relative eigenvalue gap below which two eigenvalues count as one degenerate
# cluster.  Roundoff splits sit at ~1e-16, physical splits well above 1e-12.
_CLUSTER_RTOL = 1e-12

# Below this fraction of the largest eigenvalue a scaled row is numerically
# meaningless (noise amplified by 1/sqrt(W)); such rows are structural zeros.
_MACHINE_W_FLOOR = 1e-24

_DARK_FLOOR = 1e-300


@dataclass(frozen=True)
class FluctuationMatrix:
    """Validated 3x3 Hermitian PSD fluctuation (Gram) matrix."""

    entries: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.entries, dtype=complex)
        if g.shape != (3, 3):
            raise InputError(f"fluctuation matrix must be 3x3, got {g.shape}")
        if not np.all(np.isfinite(g)):
            raise InputError("fluctuation matrix entries must be finite")
        scale = float(np.abs(g).max())
        if scale > 0.0 and np.abs(g - g.conj().T).max() > 1e-14 * scale:
            raise InputError("fluctuation matrix is not Hermitian to 1e-14")
        trace = float(np.trace(g).real)
        if trace > 0.0 and np.linalg.eigvalsh(0.5 * (g + g.conj().T)).min() < -1e-12 * trace:
            raise InputError("fluctuation matrix is not positive semidefinite")
        object.__setattr__(self, "entries", g)
        g.setflags(write=False)

    @property
    def eigenvalue_scale(self) -> float:
        return float(np.abs(self.entries).max())


def fluctuation_matrix(V: ModeMatrix) -> FluctuationMatrix:
    """Gram matrix of the mode-matrix rows, G = V V^dag."""
    return FluctuationMatrix(entries=V.entries @ V.entries.conj().T)


def _clusters(w: np.ndarray, rtol: float) -> list[list[int]]:
    """Group sorted eigenvalue indices into near-degenerate clusters."""
    scale = max(float(w[-1]), _DARK_FLOOR)
    groups: list[list[int]] = [[0]]
    for i in range(1, len(w)):
        if w[i] - w[groups[-1][0]] <= rtol * scale:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def _realign_cluster(F: np.ndarray, cols: np.ndarray) -> np.ndarray:
    """Replace an orthonormal basis of a degenerate eigenspace by the basis
    obtained from Gram-Schmidt on the projected helicity axes.

    Within an exactly degenerate cluster any orthonormal basis of the span
    diagonalizes F, so this is a free (and stabilizing) choice.
    """
    dim = cols.shape[1]
    proj = cols @ cols.conj().T
    cand = [proj[:, k] for k in range(3)]  # projections of the helicity axes
    order = sorted(range(3), key=lambda k: (-np.linalg.norm(cand[k]), k))
    basis: list[np.ndarray] = []
    for k in order:
        v = cand[k].copy()
        for b in basis:
            v -= np.vdot(b, v) * b
        nv = np.linalg.norm(v)
        if nv > 1e-6:
            basis.append(v / nv)
        if len(basis) == dim:
            break
    # pathological fallback: complete from the original eigenvectors
    col_idx = 0
    while len(basis) < dim:
        v = cols[:, col_idx].copy()
        col_idx += 1
        for b in basis:
            v -= np.vdot(b, v) * b
        nv = np.linalg.norm(v)
        if nv > 1e-6:
            basis.append(v / nv)
    return np.column_stack(basis)


def _fix_phase(v: np.ndarray) -> np.ndarray:
    """Rotate a vector's global phase so its largest-magnitude component is
    real positive (first index wins on magnitude ties)."""
    k = int(np.argmax(np.abs(v)))
    a = v[k]
    if abs(a) == 0.0:
        return v
    return v * (abs(a) / a)


def diagonalize_fluctuation(
    F: FluctuationMatrix, w_epsilon: float = DEFAULT_W_EPSILON
) -> tuple[np.ndarray, np.ndarray, frozenset]:
    """Eigendecomposition of the fluctuation matrix with the package's
    labeling convention.

    Returns ``(U, W, suppressed)`` where ``U`` is unitary with columns ordered
    by helicity label (+1, 0, -1), ``U^dag F U = diag(W)``, and ``suppressed``
    is the set of labels whose eigenvalue fell below ``w_epsilon * max(W)``.

    Labeling: each eigenvector gets the helicity label with which it has
    maximal squared overlap, assigned greedily over all (eigenvector, label)
    pairs; ties are broken toward the larger eigenvalue.  Inside degenerate
    clusters the eigenbasis is first realigned onto the helicity axes, which
    makes the labels stable and the whole output continuous in the input.
    The phase of every eigenvector is fixed so that its largest-magnitude
    component is real positive.

    Raises
    ------
    DarkPointError
        If every eigenvalue is below the absolute floor (numerically zero
        field), so no mode structure exists.
    """
    if w_epsilon <= 0.0 or w_epsilon >= 1.0:
        raise InputError(f"w_epsilon must lie in (0, 1), got {w_epsilon}")
    g = F.entries
    w, q = np.linalg.eigh(g)
    if not np.all(np.isfinite(w)) or float(w[-1]) <= _DARK_FLOOR:
        raise DarkPointError(
            f"all fluctuation eigenvalues below the absolute floor ({_DARK_FLOOR})"
        )
    w = np.clip(w, 0.0, None)
    for group in _clusters(w, _CLUSTER_RTOL):
        if len(group) < 2:
            continue
        cols = _realign_cluster(g, q[:, group])
        q[:, group] = cols
        # Rayleigh quotients; exact eigenvalues for an exactly degenerate cluster
        for local, i in enumerate(group):
            w[i] = max(float(np.vdot(cols[:, local], g @ cols[:, local]).real), 0.0)

    # greedy label assignment by squared helicity overlap
    overlap = np.abs(q) ** 2  # overlap[row k, col i] = |<e_k, q_i>|^2
    pairs = sorted(
        ((i, k) for i in range(3) for k in range(3)),
        key=lambda p: (-overlap[p[1], p[0]], -w[p[0]], p[1], p[0]),
    )
    col_of_label = {}
    used_cols: set[int] = set()
    for i, k in pairs:
        if i in used_cols or k in col_of_label:
            continue
        col_of_label[k] = i
        used_cols.add(i)

    U = np.zeros((3, 3), dtype=complex)
    W = np.zeros(3)
    for k in range(3):
        i = col_of_label[k]
        U[:, k] = _fix_phase(q[:, i])
        W[k] = w[i]
    wmax = W.max()
    suppressed = frozenset(
        MU_ORDER[k] for k in range(3) if W[k] < w_epsilon * wmax
    )
    return U, W, suppressed


@dataclass(frozen=True)
class CoherentParameters:
    """Local coherent amplitudes per helicity label (MU_ORDER); suppressed
    modes are reported as vacuum (amplitude zero) and flagged."""

    values: np.ndarray
    suppressed: frozenset

    def value(self, mu: int) -> complex:
        return complex(self.values[mu_index(mu)])


@dataclass(frozen=True)
class EffectiveTransform:
    """Orthonormal-row transform from source modes to local photon modes.

    ``T[r, c]`` maps source mode ``m = c - j`` into the effective mode with
    helicity label ``MU_ORDER[r]``; ``a_mu = sum_m T[mu, m] a_m`` satisfies
    ``[a_mu, a_mu'^dag] = delta`` (rows are orthonormal).  ``U`` and ``W`` are
    the fluctuation eigenbasis and eigenvalues, columns/entries ordered like
    the rows of ``T``.  Labels in ``suppressed`` carry negligible weight; for
    a structurally dark radial mode (pure magnetic multipole) the row is
    completed with the canonical radial pattern ~ Y_jm so that all three
    ladder operators always exist.
    """

    j: int
    parity: str
    U: np.ndarray
    W: np.ndarray
    T: np.ndarray
    suppressed: frozenset

    def __post_init__(self):
        for name in ("U", "W", "T"):
            getattr(self, name).setflags(write=False)

    def row(self, mu: int, allow_suppressed: bool = False) -> np.ndarray:
        """Coefficient row of the effective annihilator a_mu(r).

        Raises SuppressedModeError when the mode is suppressed unless
        ``allow_suppressed`` is set.
        """
        if mu in self.suppressed and not allow_suppressed:
            raise SuppressedModeError(
                f"effective mode mu={mu:+d} is suppressed (W below threshold)"
            )
        return self.T[mu_index(mu)]

    def row_orthonormality_residual(self) -> float:
        """max-norm of T T^dag - I restricted to non-suppressed rows."""
        keep = [r for r, mu in enumerate(MU_ORDER) if mu not in self.suppressed]
        block = self.T[keep] @ self.T[keep].conj().T
        return float(np.abs(block - np.eye(len(keep))).max())


def _radial_pattern(V: ModeMatrix) -> np.ndarray:
    """Canonical unit row ~ Y_jm(theta, phi) completing the transverse pair."""
    p = V.point
    c = np.array(
        [spherical_harmonic(V.j, m, p.theta, p.phi) for m in range(-V.j, V.j + 1)],
        dtype=complex,
    )
    return c / np.linalg.norm(c)


def effective_transform(
    V: ModeMatrix, U: np.ndarray, W: np.ndarray, suppressed: frozenset
) -> EffectiveTransform:
    """Assemble the effective transform T = W^(-1/2) U^dag V row by row.

    Rows whose eigenvalue is positive are normalized by 1/sqrt(W); a row whose
    eigenvalue is numerically zero relative to max(W) cannot be normalized
    (structurally dark mode).  For the radial label the canonical pattern
    ~ Y_jm is substituted (orthonormal to the transverse rows by construction
    of the local basis); a structurally dark transverse label is left as a
    zero row.  Structurally dark labels are always in ``suppressed``.
    """
    U = np.asarray(U, dtype=complex)
    W = np.asarray(W, dtype=float)
    if U.shape != (3, 3) or W.shape != (3,):
        raise InputError("U must be 3x3 and W length 3")
    raw = U.conj().T @ V.entries
    wmax = float(W.max())
    if wmax <= _DARK_FLOOR:
        raise DarkPointError("all mode weights vanish; no transform exists")
    T = np.zeros_like(raw)
    extra_suppressed = set()
    for r, mu in enumerate(MU_ORDER):
        if W[r] > _MACHINE_W_FLOOR * wmax:
            T[r] = raw[r] / sqrt(W[r])
        else:
            extra_suppressed.add(mu)
            if mu == 0:
                T[r] = _radial_pattern(V)
    return EffectiveTransform(
        j=V.j,
        parity=V.parity,
        U=U,
        W=W,
        T=T,
        suppressed=frozenset(suppressed) | frozenset(extra_suppressed),
    )


def build_effective_transform(
    V: ModeMatrix, w_epsilon: float = DEFAULT_W_EPSILON
) -> EffectiveTransform:
    """Fluctuation matrix, diagonalization and transform in one call."""
    U, W, suppressed = diagonalize_fluctuation(fluctuation_matrix(V), w_epsilon)
    return effective_transform(V, U, W, suppressed)


def coherent_parameters(T: EffectiveTransform, alpha) -> CoherentParameters:
    """Local coherent amplitudes alpha_mu = sum_m T[mu, m] alpha_m.

    ``alpha`` is indexed by the source modes m = -j..j.  Suppressed labels are
    reported as vacuum (amplitude zero) and listed in the result's
    ``suppressed`` set.
    """
    a = np.asarray(alpha, dtype=complex)
    if a.shape != (2 * T.j + 1,):
        raise InputError(
            f"alpha must have length {2 * T.j + 1} (modes m=-j..j), got shape {a.shape}"
        )
    vals = T.T @ a
    for r, mu in enumerate(MU_ORDER):
        if mu in T.suppressed:
            vals[r] = 0.0
    return CoherentParameters(values=vals, suppressed=T.suppressed)


def phase_reduced_realness(V: ModeMatrix) -> tuple[float, bool]:
    """Check how real the fluctuation matrix becomes after stripping the
    azimuthal row phases.

    Multiplies row mu of V by exp(-i mu phi) and reports
    ``(max |Im G| / max |G|, ratio < 1e-10)`` for the resulting Gram matrix.
    The realness is a diagnostic, not an assumption, anywhere in the package.
    """
    phases = np.array([cmath.exp(-1j * mu * V.point.phi) for mu in MU_ORDER])
    v = phases[:, None] * V.entries
    g = v @ v.conj().T
    scale = float(np.abs(g).max())
    if scale == 0.0:
        return 0.0, True
    ratio = float(np.abs(g.imag).max() / scale)
    return ratio, ratio < 1e-10
