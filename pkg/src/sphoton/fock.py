"""Truncated multimode bosonic Fock space: states, operators, expectations.

The space holds the 2j+1 source modes of a multipole of order j, each
truncated at a per-mode occupation cutoff ``n_max``.  Basis enumeration is the
lexicographic (C-order) raveling of occupation tuples
``(n_{-j}, ..., n_{+j})`` with the m = -j mode most significant; this mapping
is part of the package contract and is relied on by golden tests.

Canonical commutators hold exactly on the subspace with every occupation
<= n_max - 1; oracle-grade comparisons should keep state support at
occupations <= n_max - 2 so that quadratic identities are exact as well.

Dense operator matrices (the brute-force oracle) are only built for small
spaces; all observables also have matrix-free evaluators (`apply_*`) that
scale to the CLI's dimension limit.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from math import sqrt

import numpy as np

from .errors import DimensionLimitError, InputError

__all__ = [
    "MAX_DENSE_DIM",
    "FockSpace",
    "FockState",
    "OperatorMatrix",
    "identity",
    "mode_annihilator",
    "mode_number",
    "composite_annihilator",
    "occupation_projector",
    "vacuum_state",
    "fock_basis_state",
    "coherent_state",
    "state_from_amplitudes",
    "expectation",
    "variance",
    "apply_mode_annihilator",
    "apply_mode_creator",
    "apply_annihilator",
    "apply_creator",
]

# Largest dimension for which dense operator matrices may be materialized.
MAX_DENSE_DIM = 4096

_HERM_TOL = 1e-12


@dataclass(frozen=True)
class FockSpace:
    """Truncated (2j+1)-mode bosonic space with per-mode cutoff n_max."""

    j: int
    n_max: int

    def __post_init__(self):
        if not isinstance(self.j, (int, np.integer)) or self.j < 1:
            raise InputError(f"j must be an integer >= 1, got {self.j!r}")
        if not isinstance(self.n_max, (int, np.integer)) or self.n_max < 1:
            raise InputError(f"n_max must be an integer >= 1, got {self.n_max!r}")

    @property
    def n_modes(self) -> int:
        return 2 * self.j + 1

    @property
    def dim(self) -> int:
        return (self.n_max + 1) ** self.n_modes

    @property
    def shape(self) -> tuple:
        return (self.n_max + 1,) * self.n_modes

    def axis_of(self, m: int) -> int:
        if abs(m) > self.j:
            raise InputError(f"mode label m={m} out of range for j={self.j}")
        return m + self.j

    def index_of(self, occupations) -> int:
        occ = tuple(int(n) for n in occupations)
        if len(occ) != self.n_modes or any(n < 0 or n > self.n_max for n in occ):
            raise InputError(f"bad occupation tuple {occupations!r}")
        return int(np.ravel_multi_index(occ, self.shape))

    def occupation_of(self, index: int) -> tuple:
        return tuple(int(n) for n in np.unravel_index(index, self.shape))

    def max_occupation_per_index(self) -> np.ndarray:
        """Vector of max_m n_m for every basis index (used for tail masses
        and protected-subspace projectors)."""
        idx = np.arange(self.dim)
        out = np.zeros(self.dim, dtype=np.int64)
        base = self.n_max + 1
        for _ in range(self.n_modes):
            np.maximum(out, idx % base, out)
            idx //= base
        return out


@dataclass(frozen=True)
class FockState:
    """Normalized state vector on a FockSpace.

    ``tail_mass`` is the probability that any mode sits exactly at the
    truncation edge n_max; it bounds how badly edge clipping can distort
    expectation values of low-order polynomials in the ladder operators.
    """

    space: FockSpace
    amplitudes: np.ndarray
    tail_mass: float = field(init=False)

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amp.shape != (self.space.dim,):
            raise InputError(
                f"amplitudes must have length {self.space.dim}, got {amp.shape}"
            )
        if not np.all(np.isfinite(amp)):
            raise InputError("state amplitudes must be finite")
        norm = np.linalg.norm(amp)
        if norm == 0.0:
            raise InputError("cannot normalize the zero vector")
        amp = amp / norm
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)
        edge = self.space.max_occupation_per_index() == self.space.n_max
        object.__setattr__(
            self, "tail_mass", float(np.sum(np.abs(amp[edge]) ** 2))
        )


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense operator on a FockSpace.

    If ``hermitian=True`` is claimed at construction it is verified and an
    InputError raised on failure; with ``hermitian=None`` the flag is
    computed lazily on first use of ``is_hermitian``.
    """

    space: FockSpace
    matrix: np.ndarray
    hermitian: bool | None = None

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (self.space.dim, self.space.dim):
            raise InputError(
                f"matrix must be {self.space.dim}x{self.space.dim}, got {m.shape}"
            )
        if self.hermitian is True and not _is_hermitian(m):
            raise InputError("operator claimed Hermitian fails verification")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def is_hermitian(self) -> bool:
        if self.hermitian is None:
            object.__setattr__(self, "hermitian", _is_hermitian(self.matrix))
        return bool(self.hermitian)

    def dagger(self) -> "OperatorMatrix":
        return OperatorMatrix(self.space, self.matrix.conj().T.copy(), self.hermitian)

    def _like(self, other) -> np.ndarray:
        if isinstance(other, OperatorMatrix):
            if other.space != self.space:
                raise InputError("operators act on different spaces")
            return other.matrix
        raise InputError(f"expected OperatorMatrix, got {type(other).__name__}")

    def __matmul__(self, other) -> "OperatorMatrix":
        return OperatorMatrix(self.space, self.matrix @ self._like(other))

    def __add__(self, other) -> "OperatorMatrix":
        return OperatorMatrix(self.space, self.matrix + self._like(other))

    def __sub__(self, other) -> "OperatorMatrix":
        return OperatorMatrix(self.space, self.matrix - self._like(other))

    def __mul__(self, scalar) -> "OperatorMatrix":
        return OperatorMatrix(self.space, self.matrix * complex(scalar))

    __rmul__ = __mul__

    def apply(self, state: FockState) -> np.ndarray:
        if state.space != self.space:
            raise InputError("state and operator live on different spaces")
        return self.matrix @ state.amplitudes


def _is_hermitian(m: np.ndarray) -> bool:
    scale = float(np.abs(m).max())
    if scale == 0.0:
        return True
    return float(np.abs(m - m.conj().T).max()) <= _HERM_TOL * scale


def _check_dense(space: FockSpace) -> None:
    if space.dim > MAX_DENSE_DIM:
        raise DimensionLimitError(
            f"dense operators limited to dimension {MAX_DENSE_DIM}; "
            f"space has dimension {space.dim} (use the apply_* evaluators)"
        )


def _single_ladder(n_max: int) -> np.ndarray:
    a = np.zeros((n_max + 1, n_max + 1))
    for n in range(1, n_max + 1):
        a[n - 1, n] = sqrt(n)
    return a


def identity(space: FockSpace) -> OperatorMatrix:
    _check_dense(space)
    return OperatorMatrix(space, np.eye(space.dim, dtype=complex), hermitian=True)


def mode_annihilator(space: FockSpace, m: int) -> OperatorMatrix:
    """Ladder operator a_m: sqrt(n) on mode m, identity on the others."""
    _check_dense(space)
    axis = space.axis_of(m)
    out = np.array([[1.0]])
    small = _single_ladder(space.n_max)
    eye = np.eye(space.n_max + 1)
    for k in range(space.n_modes):
        out = np.kron(out, small if k == axis else eye)
    return OperatorMatrix(space, out.astype(complex))


def mode_number(space: FockSpace, m: int) -> OperatorMatrix:
    a = mode_annihilator(space, m)
    return OperatorMatrix(space, a.matrix.conj().T @ a.matrix, hermitian=True)


def composite_annihilator(space: FockSpace, coeffs) -> OperatorMatrix:
    """Weighted annihilator sum_m c_m a_m (c indexed by m = -j..j)."""
    c = np.asarray(coeffs, dtype=complex).reshape(-1)
    if c.shape != (space.n_modes,):
        raise InputError(
            f"coefficient vector must have length {space.n_modes}, got {c.shape}"
        )
    _check_dense(space)
    out = np.zeros((space.dim, space.dim), dtype=complex)
    for k, m in enumerate(range(-space.j, space.j + 1)):
        if c[k] != 0.0:
            out += c[k] * mode_annihilator(space, m).matrix
    return OperatorMatrix(space, out)


def occupation_projector(space: FockSpace, cap: int) -> OperatorMatrix:
    """Diagonal projector onto basis states with every occupation <= cap."""
    if cap < 0:
        raise InputError(f"cap must be >= 0, got {cap}")
    _check_dense(space)
    keep = (space.max_occupation_per_index() <= cap).astype(complex)
    return OperatorMatrix(space, np.diag(keep), hermitian=True)


def vacuum_state(space: FockSpace) -> FockState:
    amp = np.zeros(space.dim, dtype=complex)
    amp[0] = 1.0
    return FockState(space, amp)


def fock_basis_state(space: FockSpace, occupations) -> FockState:
    amp = np.zeros(space.dim, dtype=complex)
    amp[space.index_of(occupations)] = 1.0
    return FockState(space, amp)


def state_from_amplitudes(space: FockSpace, amplitudes) -> FockState:
    return FockState(space, np.asarray(amplitudes, dtype=complex))


def coherent_state(space: FockSpace, alpha) -> FockState:
    """Product of truncated single-mode coherent states, renormalized.

    Emits a warning when an amplitude violates the tail-safety heuristic
    |alpha|^2 + 6 |alpha| + 8 <= n_max (the state is still constructed; the
    resulting tail mass is reported on the state).
    """
    a = np.asarray(alpha, dtype=complex).reshape(-1)
    if a.shape != (space.n_modes,):
        raise InputError(
            f"alpha must have length {space.n_modes} (modes m=-j..j), got {a.shape}"
        )
    for k, al in enumerate(a):
        r = abs(al)
        # a vacuum factor (r == 0) is represented exactly at any cutoff
        if r > 0.0 and r * r + 6.0 * r + 8.0 > space.n_max:
            warnings.warn(
                f"coherent amplitude |alpha|={r:.3g} for mode index {k} is not "
                f"tail-safe at n_max={space.n_max}; expect truncation bias",
                stacklevel=2,
            )
    ns = np.arange(space.n_max + 1)
    log_fact = np.cumsum(np.concatenate(([0.0], np.log(ns[1:]))))
    vec = np.array([1.0 + 0.0j])
    for al in a:
        if al == 0.0:
            single = np.zeros(space.n_max + 1, dtype=complex)
            single[0] = 1.0
        else:
            single = np.exp(ns * np.log(complex(al)) - 0.5 * log_fact)
        vec = np.kron(vec, single)
    return FockState(space, vec)


def expectation(op: OperatorMatrix, state: FockState) -> complex:
    """<psi| Op |psi>."""
    return complex(np.vdot(state.amplitudes, op.apply(state)))


def variance(op: OperatorMatrix, state: FockState) -> float:
    """<Op^2> - <Op>^2 for a verified-Hermitian operator."""
    if not op.is_hermitian:
        raise InputError("variance requires a verified-Hermitian operator")
    w = op.apply(state)
    mean = float(np.vdot(state.amplitudes, w).real)
    second = float(np.vdot(w, w).real)
    return second - mean * mean


# ---------------------------------------------------------------------------
# matrix-free ladder applications (scale to large spaces)
# ---------------------------------------------------------------------------

def _as_tensor(space: FockSpace, vec: np.ndarray) -> np.ndarray:
    v = np.asarray(vec, dtype=complex).reshape(-1)
    if v.shape != (space.dim,):
        raise InputError(f"vector must have length {space.dim}, got {v.shape}")
    return v.reshape(space.shape)


def apply_mode_annihilator(space: FockSpace, vec, m: int) -> np.ndarray:
    """a_m |vec> without materializing the operator."""
    t = np.moveaxis(_as_tensor(space, vec), space.axis_of(m), 0)
    out = np.zeros_like(t)
    roots = np.sqrt(np.arange(1, space.n_max + 1))
    out[:-1] = roots.reshape((-1,) + (1,) * (t.ndim - 1)) * t[1:]
    return np.moveaxis(out, 0, space.axis_of(m)).reshape(-1)


def apply_mode_creator(space: FockSpace, vec, m: int) -> np.ndarray:
    """a_m^dag |vec>; the component beyond n_max is clipped (truncation)."""
    t = np.moveaxis(_as_tensor(space, vec), space.axis_of(m), 0)
    out = np.zeros_like(t)
    roots = np.sqrt(np.arange(1, space.n_max + 1))
    out[1:] = roots.reshape((-1,) + (1,) * (t.ndim - 1)) * t[:-1]
    return np.moveaxis(out, 0, space.axis_of(m)).reshape(-1)


def apply_annihilator(space: FockSpace, vec, coeffs) -> np.ndarray:
    """(sum_m c_m a_m) |vec>."""
    c = np.asarray(coeffs, dtype=complex).reshape(-1)
    if c.shape != (space.n_modes,):
        raise InputError(
            f"coefficient vector must have length {space.n_modes}, got {c.shape}"
        )
    out = np.zeros(space.dim, dtype=complex)
    for k, m in enumerate(range(-space.j, space.j + 1)):
        if c[k] != 0.0:
            out += c[k] * apply_mode_annihilator(space, vec, m)
    return out


def apply_creator(space: FockSpace, vec, coeffs) -> np.ndarray:
    """(sum_m c_m a_m)^dag |vec> = (sum_m c_m^* a_m^dag) |vec>."""
    c = np.asarray(coeffs, dtype=complex).reshape(-1)
    if c.shape != (space.n_modes,):
        raise InputError(
            f"coefficient vector must have length {space.n_modes}, got {c.shape}"
        )
    out = np.zeros(space.dim, dtype=complex)
    for k, m in enumerate(range(-space.j, space.j + 1)):
        if c[k] != 0.0:
            out += np.conj(c[k]) * apply_mode_creator(space, vec, m)
    return out
