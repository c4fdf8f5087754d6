"""
Specific entropy, the concave functional q, admissibility and the invariant region
Omega_sigma = {U admissible : S(U) >= sigma} in its computable and linear forms.
"""
from dataclasses import dataclass
from typing import Callable

import numpy as np

from app.physics.state_eos import as_array, recover
from models.models import AuxiliaryPoint, Eos, InvariantRegion

_CBRT_EPS = np.cbrt(np.finfo(float).eps)


def entropy_from_prim(V, eos: Eos):
    V = as_array(V)
    with np.errstate(divide="ignore"):
        return np.log(V[..., -1]) - eos.gamma * np.log(V[..., 0])


def specific_entropy(U, eos: Eos):
    """S = log(p rho^-gamma), evaluated through primitive recovery."""
    V, _ = recover(U, eos)
    return entropy_from_prim(V, eos)


def q_fn(U):
    """q(U) = E - sqrt(D^2 + |m|^2), strictly concave."""
    U = as_array(U)
    return U[..., -1] - np.sqrt(U[..., 0] ** 2 + np.sum(U[..., 1:-1] ** 2, axis=-1))


def in_admissible(U):
    """D > 0 and E > sqrt(D^2 + |m|^2), both strict."""
    U = as_array(U)
    return (U[..., 0] > 0) & (q_fn(U) > 0)


def membership(U, sigma, eos: Eos, slack: float = 0.0):
    """Elementwise membership of Omega_sigma with an optional entropy slack."""
    U = as_array(U)
    flat = U.reshape(-1, U.shape[-1])
    ok = in_admissible(flat)
    S = np.full(ok.shape, -np.inf)
    if np.any(ok):
        S[ok] = specific_entropy(flat[ok], eos)
    floor = np.broadcast_to(np.asarray(sigma, dtype=float), U.shape[:-1]).ravel()
    return (ok & (S >= floor - slack)).reshape(U.shape[:-1])


def in_invariant_region(U, region: InvariantRegion):
    return membership(U, region.sigma, region.eos)


def _aux_arrays(aux):
    if isinstance(aux, AuxiliaryPoint):
        return np.asarray(aux.v_star, dtype=float), float(aux.rho_star)
    v_star, rho_star = aux
    return np.asarray(v_star, dtype=float), np.asarray(rho_star, dtype=float)


def phi_sigma(U, aux, sigma, eos: Eos):
    """
    Linear functional whose non-negativity over every auxiliary point (v*, rho*)
    characterizes Omega_sigma.
    """
    U = as_array(U)
    v_star, rho_star = _aux_arrays(aux)
    gamma = eos.gamma
    D, m, E = U[..., 0], U[..., 1:-1], U[..., -1]
    root = np.sqrt(1.0 - np.sum(v_star * v_star, axis=-1))
    return (
        E
        - np.sum(m * v_star, axis=-1)
        - D * root
        + np.exp(sigma) * (rho_star**gamma - gamma / (gamma - 1.0) * D * rho_star ** (gamma - 1.0) * root)
    )


def witness_aux(U, eos: Eos):
    """Auxiliary point (v(U), rho(U)); phi at it equals (p - e^sigma rho^gamma)/(gamma - 1)."""
    V, _ = recover(U, eos)
    return V[..., 1:-1], V[..., 0]


def g2_functional(U, v_star):
    """E - m.v* - D sqrt(1 - |v*|^2); positive for every v* exactly when U is admissible (D > 0)."""
    U = as_array(U)
    v_star = np.asarray(v_star, dtype=float)
    return U[..., -1] - np.sum(U[..., 1:-1] * v_star, axis=-1) - U[..., 0] * np.sqrt(
        1.0 - np.sum(v_star * v_star, axis=-1)
    )


def in_admissible_g2(U, v_star):
    U = as_array(U)
    return (U[..., 0] > 0) & (g2_functional(U, v_star) > 0)


def g2_witness(U):
    """v* = m / sqrt(D^2 + |m|^2) turns the G2 functional into q(U)."""
    U = as_array(U)
    return U[..., 1:-1] / np.sqrt(U[..., 0] ** 2 + np.sum(U[..., 1:-1] ** 2, axis=-1))[..., None]


@dataclass(frozen=True)
class EntropyFunction:
    """A scalar H(S) with its first two derivatives, generating the entropy -D H(S)."""
    name: str
    H: Callable[[np.ndarray], np.ndarray]
    dH: Callable[[np.ndarray], np.ndarray]
    d2H: Callable[[np.ndarray], np.ndarray]


def linear_entropy() -> EntropyFunction:
    return EntropyFunction("S", lambda s: s, lambda s: np.ones_like(s), lambda s: np.zeros_like(s))


def negated_entropy() -> EntropyFunction:
    return EntropyFunction("-S", lambda s: -s, lambda s: -np.ones_like(s), lambda s: np.zeros_like(s))


def borderline_entropy(gamma: float) -> EntropyFunction:
    """H = gamma e^(S/gamma), for which H' - gamma H'' vanishes identically."""
    return EntropyFunction(
        "gamma*exp(S/gamma)",
        lambda s: gamma * np.exp(s / gamma),
        lambda s: np.exp(s / gamma),
        lambda s: np.exp(s / gamma) / gamma,
    )


def entropy_condition(H: EntropyFunction, S, gamma: float):
    """True where H' > 0 and H' - gamma H'' > 0, the convexity condition on -D H(S)."""
    S = np.asarray(S, dtype=float)
    d1, d2 = H.dH(S), H.d2H(S)
    return (d1 > 0) & (d1 - gamma * d2 > 0)


def entropy_function(U, H: EntropyFunction, eos: Eos):
    U = as_array(U)
    return -U[..., 0] * H.H(specific_entropy(U, eos))


def entropy_flux(U, i: int, H: EntropyFunction, eos: Eos):
    """Entropy flux -D v_i H(S) paired with entropy_function."""
    U = as_array(U)
    V, _ = recover(U, eos)
    return -U[..., 0] * V[..., 1 + i] * H.H(entropy_from_prim(V, eos))


def entropy_hessian(H: EntropyFunction, U, eos: Eos, h=None) -> np.ndarray:
    """Central finite-difference Hessian of U -> -D H(S(U)), symmetrized."""
    U = as_array(U)
    n = U.shape[-1]
    steps = _CBRT_EPS * np.maximum(1.0, np.abs(U)) if h is None else np.broadcast_to(np.asarray(h, float), U.shape)

    def f(x):
        return entropy_function(x, H, eos)

    f0 = f(U)
    hess = np.empty(U.shape[:-1] + (n, n))
    for i in range(n):
        ei = np.zeros(n)
        ei[i] = 1.0
        hi = steps[..., i, None] * ei
        hess[..., i, i] = (f(U + hi) - 2.0 * f0 + f(U - hi)) / steps[..., i] ** 2
        for j in range(i + 1, n):
            ej = np.zeros(n)
            ej[j] = 1.0
            hj = steps[..., j, None] * ej
            value = (f(U + hi + hj) - f(U + hi - hj) - f(U - hi + hj) + f(U - hi - hj)) / (
                4.0 * steps[..., i] * steps[..., j]
            )
            hess[..., i, j] = value
            hess[..., j, i] = value
    return 0.5 * (hess + np.swapaxes(hess, -1, -2))


def elementary_inequality_margin(eta, gamma):
    """(eta gamma + 1)^(1/gamma) - (2 eta + 1)^(1/2), non-negative for eta > -1/2, gamma in (1, 2]."""
    eta = np.asarray(eta, dtype=float)
    return (eta * gamma + 1.0) ** (1.0 / gamma) - np.sqrt(2.0 * eta + 1.0)


def velocity_inequality_margin(v, v_star, gamma):
    """
    gamma (1 - v.v*)/(1 - |v|^2) - gamma + 1 - (sqrt(1-|v|^2)/sqrt(1-|v*|^2))^(-gamma),
    non-negative for v, v* in the unit ball.
    """
    v = np.asarray(v, dtype=float)
    v_star = np.asarray(v_star, dtype=float)
    a = 1.0 - np.sum(v * v, axis=-1)
    b = 1.0 - np.sum(v_star * v_star, axis=-1)
    return gamma * (1.0 - np.sum(v * v_star, axis=-1)) / a - gamma + 1.0 - (np.sqrt(a) / np.sqrt(b)) ** (-gamma)


