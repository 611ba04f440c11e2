"""Independent oracles used by the test suite.

These deliberately avoid the code paths they check: coupling coefficients are
rebuilt from highest-weight states and lowering operators, sphere integrals
use Gauss-Legendre quadrature, Gram matrices use naive double loops.
"""

import numpy as np


def cg_ladder_table(j1: int, j2: int) -> dict:
    """Clebsch-Gordan table for j1 x j2 built constructively.

    Highest-weight state of each J found as the null vector of the overlaps
    with all higher-J states in the M = J subspace, signed by the
    Condon-Shortley rule <j1 j1; j2 J-j1 | J J> > 0, then lowered with
    J- = J1- + J2-.  Returns {(m1, m2, J, M): coefficient}.
    """
    d2 = 2 * j2 + 1
    dim = (2 * j1 + 1) * d2

    def idx(m1, m2):
        return (m1 + j1) * d2 + (m2 + j2)

    states = {}
    for J in range(j1 + j2, abs(j1 - j2) - 1, -1):
        pairs = [(m1, J - m1) for m1 in range(max(-j1, J - j2), min(j1, J + j2) + 1)]
        if J == j1 + j2:
            top = np.zeros(dim)
            top[idx(j1, j2)] = 1.0
        else:
            rows = [states[Jp][J] for Jp in range(j1 + j2, J, -1)]
            overlap = np.array([[u[idx(m1, m2)] for (m1, m2) in pairs] for u in rows])
            _, _, vt = np.linalg.svd(overlap)
            small = vt[-1]
            top = np.zeros(dim)
            for c, (m1, m2) in enumerate(pairs):
                top[idx(m1, m2)] = small[c]
            top /= np.linalg.norm(top)
            if top[idx(min(j1, J + j2), J - min(j1, J + j2))] < 0:
                top = -top
        states[J] = {J: top}
        for M in range(J, -J, -1):
            cur = states[J][M]
            nxt = np.zeros(dim)
            for m1 in range(-j1, j1 + 1):
                for m2 in range(-j2, j2 + 1):
                    c = cur[idx(m1, m2)]
                    if c == 0.0:
                        continue
                    if m1 > -j1:
                        nxt[idx(m1 - 1, m2)] += c * np.sqrt(j1 * (j1 + 1) - m1 * (m1 - 1))
                    if m2 > -j2:
                        nxt[idx(m1, m2 - 1)] += c * np.sqrt(j2 * (j2 + 1) - m2 * (m2 - 1))
            nxt /= np.sqrt(J * (J + 1) - M * (M - 1))
            states[J][M - 1] = nxt

    table = {}
    for J, by_m in states.items():
        for M, v in by_m.items():
            for m1 in range(-j1, j1 + 1):
                m2 = M - m1
                if abs(m2) <= j2:
                    table[(m1, m2, J, M)] = float(v[idx(m1, m2)])
    return table


def sphere_integral(f, n_theta: int = 80, n_phi: int = 160) -> complex:
    """Integral of f(theta, phi) over the unit sphere; Gauss-Legendre in
    cos(theta), uniform trapezoid in phi."""
    nodes, weights = np.polynomial.legendre.leggauss(n_theta)
    thetas = np.arccos(nodes)
    phis = np.linspace(0.0, 2.0 * np.pi, n_phi, endpoint=False)
    total = 0.0 + 0.0j
    for w, th in zip(weights, thetas):
        total += w * sum(f(th, ph) for ph in phis)
    return total * (2.0 * np.pi / n_phi)


def hankel_asymptote(l: int, x: float) -> complex:
    """Leading large-argument form of the outgoing spherical Hankel function."""
    return (-1j) ** (l + 1) * np.exp(1j * x) / x


def naive_gram(rows: np.ndarray) -> np.ndarray:
    """Gram matrix by explicit double-loop summation."""
    n = rows.shape[0]
    out = np.zeros((n, n), dtype=complex)
    for a in range(n):
        for b in range(n):
            acc = 0.0 + 0.0j
            for k in range(rows.shape[1]):
                acc += rows[a, k] * np.conj(rows[b, k])
            out[a, b] = acc
    return out


def quasi_random_points(count: int, kr_lo: float, kr_hi: float,
                        theta_margin: float = 0.05):
    """Deterministic low-discrepancy (kr, theta, phi) triples; kr log-spaced."""
    gammas = (np.sqrt(2.0) - 1.0, np.sqrt(3.0) - 1.0, np.sqrt(5.0) - 2.0)
    pts = []
    u = [0.5, 0.5, 0.5]
    for _ in range(count):
        u = [(x + g) % 1.0 for x, g in zip(u, gammas)]
        kr = kr_lo * (kr_hi / kr_lo) ** u[0]
        theta = theta_margin + u[1] * (np.pi - 2.0 * theta_margin)
        phi = u[2] * 2.0 * np.pi
        pts.append((kr, theta, phi))
    return pts
