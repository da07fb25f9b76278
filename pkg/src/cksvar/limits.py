"""Discretised censored, regulated, and kinked Brownian motions.

``censor`` takes the pointwise positive part; ``regulate`` adds the running
maximum of the negative part, so the result stays nonnegative and dominates
the censored version pathwise.  ``kink`` loads a vector motion through a
sign-dependent matrix that must be continuous across its switching
hyperplane.

``limit_case1`` and ``limit_case2`` assemble the diffusive limits implied by
the two cointegration configurations: a regulated motion confined to the
positive half of the common-trend space, and a kinked motion whose loadings
switch with the sign of the driving combination.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AssumptionViolationError, DimensionMismatchError
from .vecm import VecmForm, kink_geometry, projection_case1

__all__ = [
    "BrownianGrid",
    "LimitPath",
    "brownian_grid",
    "censor",
    "regulate",
    "kink",
    "limit_case1",
    "limit_case2",
]

DEFAULT_GRID = 2048


@dataclass(frozen=True)
class BrownianGrid:
    """A Brownian motion sampled on a uniform [0, 1] grid."""

    grid: np.ndarray  # (m+1,)
    W: np.ndarray  # (q, m+1)
    variance: np.ndarray  # (q, q) per unit time
    seed: int

    @property
    def q(self) -> int:
        return self.W.shape[0]


def brownian_grid(variance: np.ndarray, m: int, seed: int, W0: np.ndarray | None = None) -> BrownianGrid:
    """Sample a q-dimensional Brownian motion with the given per-unit-time variance."""
    variance = np.atleast_2d(np.asarray(variance, dtype=float))
    q = variance.shape[0]
    if m < 1:
        raise ValueError("m must be >= 1")
    try:
        L = np.linalg.cholesky(variance)
    except np.linalg.LinAlgError as exc:
        raise DimensionMismatchError("variance must be positive definite") from exc
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    dW = rng.standard_normal((m, q)) @ L.T * np.sqrt(1.0 / m)
    W = np.zeros((q, m + 1))
    if W0 is not None:
        W[:, 0] = np.asarray(W0, dtype=float).reshape(q)
    W[:, 1:] = W[:, :1] + np.cumsum(dW, axis=0).T
    return BrownianGrid(grid=np.linspace(0.0, 1.0, m + 1), W=W, variance=variance, seed=seed)


def censor(w: np.ndarray) -> np.ndarray:
    """Pointwise positive part of a scalar series."""
    return np.maximum(np.asarray(w, dtype=float), 0.0)


def regulate(w: np.ndarray) -> np.ndarray:
    """Regulated version: ``w`` plus the running maximum of ``[-w]_+``."""
    w = np.asarray(w, dtype=float)
    return w + np.maximum.accumulate(np.maximum(-w, 0.0))


def kink(
    W: np.ndarray,
    G_plus: np.ndarray,
    G_minus: np.ndarray,
    tol: float = 1e-8,
) -> np.ndarray:
    """Load a (q, m+1) motion through the sign-dependent matrix pair.

    The pair must satisfy: (a) the first rows are positively proportional,
    ``e1' G(+1) = mu * e1' G(-1)`` with ``mu > 0``; and (b) ``G(+1) w ==
    G(-1) w`` on the switching hyperplane ``h' w = 0`` (checked on a basis of
    the hyperplane).  Violations are rejected.
    """
    W = np.atleast_2d(np.asarray(W, dtype=float))
    G_plus = np.atleast_2d(np.asarray(G_plus, dtype=float))
    G_minus = np.atleast_2d(np.asarray(G_minus, dtype=float))
    if G_plus.shape != G_minus.shape or G_plus.shape[1] != W.shape[0]:
        raise DimensionMismatchError("G matrices must share a shape compatible with W")
    h_plus = G_plus[0, :]
    h_minus = G_minus[0, :]
    scale = max(np.linalg.norm(h_plus), np.linalg.norm(h_minus))
    if scale == 0.0:
        mu = 1.0  # the switch never activates; treat as one-sided
    else:
        if np.linalg.norm(h_plus) <= tol * scale or np.linalg.norm(h_minus) <= tol * scale:
            raise AssumptionViolationError("first rows of G(+1), G(-1) are not positively proportional")
        j = int(np.argmax(np.abs(h_minus)))
        mu = h_plus[j] / h_minus[j]
        if mu <= 0.0 or np.linalg.norm(h_plus - mu * h_minus) > tol * scale:
            raise AssumptionViolationError("first rows of G(+1), G(-1) are not positively proportional")
    # continuity across the hyperplane h'w = 0
    h = h_plus
    q = W.shape[0]
    if np.linalg.norm(h) > 0 and q > 1:
        basis = np.linalg.svd(h.reshape(1, q), full_matrices=True)[2][1:, :].T  # (q, q-1) spanning h'w = 0
        probe = (G_plus - G_minus) @ basis
        if np.abs(probe).max() > tol * max(1.0, np.abs(G_plus).max(), np.abs(G_minus).max()):
            raise AssumptionViolationError("G is discontinuous across its switching hyperplane")
    signal = h @ W
    pos = signal >= 0.0
    return np.where(pos[None, :], G_plus @ W, G_minus @ W)


@dataclass(frozen=True)
class LimitPath:
    grid: np.ndarray
    Y: np.ndarray  # (m+1,)
    X: np.ndarray  # (p-1, m+1)
    kind: str


def _check_Z0(vecm: VecmForm, Z0, tol: float = 1e-8) -> np.ndarray:
    """Validate membership of the start point in the common-trend space."""
    p = vecm.p
    if Z0 is None:
        return np.zeros(p)
    Z0 = np.asarray(Z0, dtype=float).reshape(p)
    y0 = Z0[0]
    pi = vecm.pi_plus if y0 >= 0 else vecm.pi_minus
    resid = pi * y0 + (vecm.Pi_x @ Z0[1:] if p > 1 else 0.0)
    if np.linalg.norm(np.atleast_1d(resid)) > tol * max(1.0, np.linalg.norm(Z0)):
        raise AssumptionViolationError("Z0 is not in the common-trend space")
    return Z0


def limit_case1(vecm: VecmForm, U: BrownianGrid, Z0=None, tol: float = 1e-8) -> LimitPath:
    """Regulated limit of the case-(i) configuration.

    ``Y`` is the first coordinate of ``P U0`` regulated from below at zero;
    the remaining coordinates pick up the regulation through the loading
    ``kappa / kappa1``.  ``U`` must carry the long-run innovation variance;
    ``Z0`` (default zero) is the diffusive initial point, checked against the
    common-trend space.
    """
    if U.q != vecm.p:
        raise DimensionMismatchError("Brownian dimension must equal the model dimension")
    Z0 = _check_Z0(vecm, Z0, tol)
    if Z0[0] < 0:
        raise AssumptionViolationError("case (i) start point must have a nonnegative first coordinate")
    pair, kappa, kappa1 = projection_case1(vecm, tol)
    if kappa1 >= 0.0:
        raise AssumptionViolationError(f"regulation requires kappa1 < 0, got {kappa1:.6g}")
    U0 = U.W + (vecm.Gamma_at_1("+") @ Z0)[:, None]
    PU0 = pair.P_beta_perp @ U0
    ref = np.maximum.accumulate(np.maximum(-PU0[0], 0.0))
    Z = PU0 + np.outer(kappa / kappa1, ref)
    return LimitPath(grid=U.grid.copy(), Y=Z[0], X=Z[1:], kind="regulated_case_i")


def limit_case2(vecm: VecmForm, U: BrownianGrid, Z0=None, tol: float = 1e-8) -> LimitPath:
    """Kinked limit of the case-(ii) configuration.

    ``Z(lam) = P(s) U0(lam)`` with the sign ``s`` of the driving combination
    ``vartheta' U0(lam)`` selecting the projection; the first coordinate then
    shares the sign of the driver at every grid point.
    """
    if U.q != vecm.p:
        raise DimensionMismatchError("Brownian dimension must equal the model dimension")
    Z0 = _check_Z0(vecm, Z0, tol)
    geo = kink_geometry(vecm, tol)
    U0 = U.W + (vecm.Gamma_at_1("+" if Z0[0] >= 0 else "-") @ Z0)[:, None]
    driver = geo.vartheta @ U0
    pos = driver >= 0.0
    Z = np.where(pos[None, :], geo.P_beta_perp_plus @ U0, geo.P_beta_perp_minus @ U0)
    # cross-check: the scalar reparameterisation h(s) * driver gives the same Y
    Y_alt = np.where(pos, driver, geo.mu * driver)
    if np.abs(Z[0] - Y_alt).max() > 1e-8 * max(1.0, np.abs(Y_alt).max()):
        raise AssumptionViolationError("internal inconsistency between the two Y constructions")
    return LimitPath(grid=U.grid.copy(), Y=Z[0], X=Z[1:], kind="kinked_case_ii")
