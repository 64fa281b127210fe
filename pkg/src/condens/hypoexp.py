"""Hypoexponential distribution: sum of independent exponentials.

The product-form coefficients p_j = prod_k Lambda_k / (Lambda_k - Lambda_j)
are exact for well-separated rates but blow up when two rates nearly tie;
in that regime the cdf and density are evaluated by uniformizing the
bidiagonal generator of the underlying Markov chain instead.
"""

from __future__ import annotations

import numpy as np

__all__ = ["hypoexp_cdf", "hypoexp_density", "RELATIVE_TIE_GAP"]

RELATIVE_TIE_GAP = 1e-8


def _check_rates(rates: np.ndarray) -> np.ndarray:
    lam = np.asarray(rates, dtype=float).ravel()
    if lam.size == 0:
        raise ValueError("at least one rate is required")
    if np.any(lam <= 0):
        raise ValueError("rates must be positive")
    return lam


def _has_near_tie(lam: np.ndarray) -> bool:
    if lam.size < 2:
        return False
    diff = np.abs(lam[:, None] - lam[None, :])
    np.fill_diagonal(diff, np.inf)
    return bool(np.any(diff / np.abs(lam[:, None]) < RELATIVE_TIE_GAP))


def _product_coefficients(lam: np.ndarray) -> np.ndarray:
    c = lam.size
    p = np.ones(c)
    for j in range(c):
        for k in range(c):
            if k != j:
                p[j] *= lam[k] / (lam[k] - lam[j])
    return p


def _uniformized(lam: np.ndarray, x: np.ndarray, rel_tol: float = 1e-12):
    """(cdf, density) by uniformization of the bidiagonal chain.

    States 1..c are transient (state j leaves at rate lam[j-1] to j+1);
    state c+1 absorbs.  cdf(x) is the absorbed mass at time x and the
    density is lam[c-1] times the mass in the last transient state.
    """
    c = lam.size
    q = float(lam.max()) * 1.000000001
    r = lam / q
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    cdf = np.zeros_like(xs)
    dens = np.zeros_like(xs)
    pos = xs > 0
    if not np.any(pos):
        return cdf, dens
    t = q * xs[pos]
    tmax = t.max()
    # enough Poisson terms for relative tail below rel_tol
    kmax = int(tmax + 12.0 * np.sqrt(tmax + 1.0) + 60)
    state = np.zeros(c + 1)
    state[0] = 1.0
    # Poisson(k; t) built up by recurrence per evaluation point
    pois = np.exp(-t)
    pois_cum = pois.copy()
    cdf_pos = np.zeros_like(t)
    dens_pos = np.zeros_like(t)
    for k in range(kmax + 1):
        if k > 0:
            pois = pois * t / k
            pois_cum += pois
            nxt = state.copy()
            nxt[:c] = state[:c] * (1.0 - r)
            nxt[1:c] += state[:c - 1] * r[:c - 1]
            nxt[c] += state[c - 1] * r[c - 1]
            state = nxt
        cdf_pos += pois * state[c]
        dens_pos += pois * state[c - 1]
        if state[c] > 1.0 - rel_tol:
            # chain absorbed: the remaining Poisson tail contributes state[c]
            cdf_pos += (1.0 - pois_cum) * state[c]
            break
    cdf[pos] = cdf_pos
    dens[pos] = lam[c - 1] * dens_pos
    return cdf, dens


def hypoexp_cdf(rates, x) -> np.ndarray | float:
    """P[A_1 + ... + A_c <= x] for independent Exp(rates[j]) terms."""
    lam = _check_rates(rates)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if _has_near_tie(lam):
        out, _ = _uniformized(lam, xs)
    else:
        p = _product_coefficients(lam)
        out = np.where(xs > 0, 1.0 - np.exp(-np.outer(xs, lam)) @ p, 0.0)
        out = np.clip(out, 0.0, 1.0)
    return float(out[0]) if np.isscalar(x) else out.reshape(np.shape(x))


def hypoexp_density(rates, x) -> np.ndarray | float:
    """Density of the sum; clamped at 0 against rounding of the product form."""
    lam = _check_rates(rates)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if _has_near_tie(lam):
        _, out = _uniformized(lam, xs)
    else:
        p = _product_coefficients(lam)
        out = np.where(xs >= 0, np.exp(-np.outer(xs, lam)) @ (lam * p), 0.0)
        out = np.maximum(out, 0.0)
    return float(out[0]) if np.isscalar(x) else out.reshape(np.shape(x))
