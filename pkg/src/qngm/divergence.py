"""Quantum divergences, fidelity-based distances, and the Hessian oracle.

All matrix powers and logs go through the Hermitian eigendecomposition; both
arguments of a divergence must be full rank (regularize first).
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from . import petz
from .errors import NumericalError, RankDeficientError, ShapeMismatchError
from .linalg import hermitian_eig
from .states import check_density

RANK_EPS = 1e-12
IMAG_TOL = 1e-10


def _real(value: complex, what: str) -> float:
    if abs(np.imag(value)) > IMAG_TOL:
        raise NumericalError(f"{what} has imaginary residue {np.imag(value):.3e}")
    return float(np.real(value))


def _full_rank_eig(rho: np.ndarray):
    w, v = hermitian_eig(check_density(rho))
    if w[0] < RANK_EPS:
        raise RankDeficientError(f"smallest eigenvalue {w[0]:.3e} below {RANK_EPS:.1e}")
    return w, v


def _check_pair(rho_bar: np.ndarray, rho: np.ndarray):
    if rho_bar.shape != rho.shape:
        raise ShapeMismatchError(f"state shapes differ: {rho_bar.shape} vs {rho.shape}")


def quantum_kl(rho_bar: np.ndarray, rho: np.ndarray) -> float:
    """Umegaki relative entropy Tr[rho_bar (ln rho_bar - ln rho)]."""
    _check_pair(rho_bar, rho)
    wb, vb = _full_rank_eig(rho_bar)
    w, v = _full_rank_eig(rho)
    log_bar = (vb * np.log(wb)) @ vb.conj().T
    log_rho = (v * np.log(w)) @ v.conj().T
    return _real(np.trace(rho_bar @ (log_bar - log_rho)), "quantum KL")


def standard_renyi(rho_bar: np.ndarray, rho: np.ndarray, alpha: float) -> float:
    """Rescaled standard Renyi: ln Tr[rho_bar^a rho^(1-a)] / (a (a - 1))."""
    if abs(alpha - 1.0) < petz.ALPHA_EPS:
        return quantum_kl(rho_bar, rho)
    if abs(alpha) < petz.ALPHA_EPS:
        raise NumericalError("standard Renyi index alpha = 0 is not supported")
    _check_pair(rho_bar, rho)
    wb, vb = _full_rank_eig(rho_bar)
    w, v = _full_rank_eig(rho)
    a_pow = (vb * wb**alpha) @ vb.conj().T
    b_pow = (v * w ** (1.0 - alpha)) @ v.conj().T
    tr = _real(np.trace(a_pow @ b_pow), "standard Renyi trace")
    return float(np.log(tr) / (alpha * (alpha - 1.0)))


def sandwiched_renyi(rho_bar: np.ndarray, rho: np.ndarray, alpha: float) -> float:
    """Rescaled sandwiched Renyi:

        ln Tr[(rho^((1-a)/2a) rho_bar rho^((1-a)/2a))^a] / (a (a - 1))
    """
    if abs(alpha - 1.0) < petz.ALPHA_EPS:
        return quantum_kl(rho_bar, rho)
    if abs(alpha) < petz.ALPHA_EPS:
        raise NumericalError("sandwiched Renyi index alpha = 0 is not supported")
    _check_pair(rho_bar, rho)
    wb, vb = _full_rank_eig(rho_bar)
    w, v = _full_rank_eig(rho)
    bread = (v * w ** ((1.0 - alpha) / (2.0 * alpha))) @ v.conj().T
    root_bar = (vb * np.sqrt(wb)) @ vb.conj().T
    # spectrum of rho^c rho_bar rho^c as squared singular values: the tiny
    # eigenvalues keep full relative accuracy, which the Hessian oracle needs
    sigma = np.linalg.svd(bread @ root_bar, compute_uv=False)
    if sigma[-1] <= 0.0:
        raise RankDeficientError("sandwiched core is not positive definite")
    tr = float(np.sum(sigma ** (2.0 * alpha)))
    return float(np.log(tr) / (alpha * (alpha - 1.0)))


def f_divergence(rho_bar: np.ndarray, rho: np.ndarray, F: Callable) -> float:
    """Quantum F-divergence sum_ij p_i F(pbar_j / p_i) |<psibar_j|psi_i>|^2."""
    _check_pair(rho_bar, rho)
    wb, vb = _full_rank_eig(rho_bar)
    w, v = _full_rank_eig(rho)
    overlap2 = np.abs(vb.conj().T @ v) ** 2  # [j, i] = |<psibar_j|psi_i>|^2
    ratio = wb[:, None] / w[None, :]
    return float(np.sum(w[None, :] * F(ratio) * overlap2))


def divergence(kind, rho_bar: np.ndarray, rho: np.ndarray) -> float:
    """Dispatch on ('qkl',), ('st', alpha), ('sw', alpha) or ('f', F)."""
    tag = kind[0] if isinstance(kind, tuple) else kind
    if tag == "qkl":
        return quantum_kl(rho_bar, rho)
    if tag == "st":
        return standard_renyi(rho_bar, rho, kind[1])
    if tag == "sw":
        return sandwiched_renyi(rho_bar, rho, kind[1])
    if tag == "f":
        return f_divergence(rho_bar, rho, kind[1])
    raise ValueError(f"unknown divergence kind {kind!r}")


def paired_divergence(f: petz.PetzFunction):
    """The divergence whose coincidence Hessian equals the metric of f.

    sld / sw:a  ->  sandwiched Renyi;   bkm  ->  quantum KL;
    rrld / half ->  sandwiched Renyi at a = -1 / 2;   st:a -> standard Renyi.
    """
    alias = {"sld": 0.5, "rrld": -1.0, "half": 2.0}
    if f.kind in alias:
        a = alias[f.kind]
        return lambda rb, r: sandwiched_renyi(rb, r, a)
    if f.kind == "bkm":
        return quantum_kl
    if f.kind == "sw":
        return lambda rb, r: sandwiched_renyi(rb, r, f.alpha)
    if f.kind == "st":
        return lambda rb, r: standard_renyi(rb, r, f.alpha)
    raise ValueError(f"no divergence pairing for Petz function {f}")


def alpha_divergence_F(alpha: float) -> Callable:
    """Scalar kernel of the standard quantum alpha-divergence.

    4 / (1 - a^2) (1 - t^((1+a)/2)) for a != +-1; t ln t at a = 1; -ln t at -1.
    """
    if alpha == 1.0:
        return lambda t: t * np.log(t)
    if alpha == -1.0:
        return lambda t: -np.log(t)
    return lambda t: 4.0 / (1.0 - alpha**2) * (1.0 - t ** ((1.0 + alpha) / 2.0))


def f_divergence_consistency(alpha: float, grid: np.ndarray = None) -> float:
    """Max violation of F(t) + t F(1/t) = (1 - t)^2 / f(t) over a t-grid.

    F is the alpha-divergence kernel; f is the standard-family Petz function
    at the reparameterized index (1 + alpha) / 2.
    """
    if grid is None:
        grid = petz.default_grid()
    grid = np.asarray(grid, dtype=float)
    F = alpha_divergence_F(alpha)
    f = petz.standard((1.0 + alpha) / 2.0)
    lhs = F(grid) + grid * F(1.0 / grid)
    rhs = (1.0 - grid) ** 2 / petz.evaluate(f, grid)
    return float(np.abs(lhs - rhs).max())


def fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """(Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2, clipped into [0, 1]."""
    _check_pair(rho, sigma)
    w, v = hermitian_eig(check_density(rho))
    check_density(sigma)
    root = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    lam = np.linalg.eigvalsh(root @ sigma @ root)
    value = float(np.sum(np.sqrt(np.clip(lam, 0.0, None))) ** 2)
    return min(max(value, 0.0), 1.0)


def bures_angle(rho: np.ndarray, sigma: np.ndarray) -> float:
    """arccos sqrt(F)."""
    return float(np.arccos(np.clip(np.sqrt(fidelity(rho, sigma)), 0.0, 1.0)))


def bures_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    """sqrt(2 (1 - sqrt(F)))."""
    return float(np.sqrt(max(2.0 * (1.0 - np.sqrt(fidelity(rho, sigma))), 0.0)))


def fubini_study(psi: np.ndarray, phi: np.ndarray) -> float:
    """arccos of the normalized overlap magnitude between two kets."""
    psi, phi = np.asarray(psi, dtype=complex), np.asarray(phi, dtype=complex)
    if psi.shape != phi.shape:
        raise ShapeMismatchError(f"kets of different shapes: {psi.shape} vs {phi.shape}")
    np_, nphi = np.linalg.norm(psi), np.linalg.norm(phi)
    if np_ == 0.0 or nphi == 0.0:
        raise ShapeMismatchError("kets must be nonzero")
    overlap = abs(np.vdot(psi, phi)) / (np_ * nphi)
    return float(np.arccos(np.clip(overlap, 0.0, 1.0)))


def fd_hessian(div: Callable[[np.ndarray], float], theta: np.ndarray, h: float = 1e-3):
    """Finite-difference Hessian of a divergence anchored at theta.

    div maps a parameter vector theta_bar to D(theta_bar || theta) with
    div(theta) = 0 and vanishing first derivatives at coincidence.  Uses the
    centered stencil

        [D(+h e_i + h e_j) + D(-h e_i - h e_j)
         - D(+h e_i) - D(-h e_i) - D(+h e_j) - D(-h e_j)] / (2 h^2)

    whose odd-order error terms cancel; the result is symmetrized.
    """
    theta = np.asarray(theta, dtype=float)
    if not 1e-4 <= h <= 1e-2:
        raise ValueError(f"step h = {h} outside [1e-4, 1e-2]")
    n = theta.size
    single = np.empty((n, 2))
    for i in range(n):
        e = np.zeros(n)
        e[i] = h
        single[i, 0] = div(theta + e)
        single[i, 1] = div(theta - e)
    hess = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            e = np.zeros(n)
            e[i] += h
            e[j] += h
            pair = div(theta + e) + div(theta - e)
            hess[i, j] = hess[j, i] = (
                pair - single[i, 0] - single[i, 1] - single[j, 0] - single[j, 1]
            ) / (2.0 * h * h)
    return 0.5 * (hess + hess.T)


def circuit_divergence(kind, state, theta: np.ndarray) -> Callable[[np.ndarray], float]:
    """Adapt a circuit (or any theta -> rho map) to the fd_hessian callable."""
    from . import states as _states

    if isinstance(state, _states.CircuitState):
        family = lambda t: _states.evaluate(state, t)
    else:
        family = state
    anchor = family(np.asarray(theta, dtype=float))
    return lambda theta_bar: divergence(kind, family(theta_bar), anchor)
