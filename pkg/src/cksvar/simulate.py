"""Path simulation, innovation generation, and the short-memory cross-checks.

Canonical models iterate the reduced-form recursion directly; structural
models solve the piecewise-linear simultaneous system at each step by
enumerating the two sign branches, which the coherence condition guarantees
to single out a unique solution.  Batched variants iterate all replications
in lockstep for the Monte Carlo harness.

The two ``short_memory_*`` routines re-derive the stationary components of a
simulated path through their switching companion recursions and hand back
the reconstruction, which downstream tests compare against the path itself.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CaseError, CoherenceError, DgpError, DimensionMismatchError
from .model import CanonicalModel, CksvarModel, validate_dgp
from .vecm import Case, VecmForm, classify_case
from .companion import _ensure_two_lags, bold_pair_case1, bold_pair_case2, build_F

__all__ = [
    "InnovationSpec",
    "Path",
    "ScaledPath",
    "gen_innovations",
    "simulate",
    "simulate_batch",
    "scale_path",
    "short_memory_case1",
    "short_memory_case2",
    "Case1Trace",
    "Case2Trace",
]

SIGN_TOL = 1e-12


@dataclass(frozen=True)
class InnovationSpec:
    """How to draw the innovation sequence.

    ``iid_gaussian`` draws N(0, Sigma).  ``ma_infinity_truncated`` filters a
    standard Gaussian stream through the scalar weights and applies the
    Sigma^(1/2) loading afterwards, giving a weakly dependent sequence whose
    long-run variance is ``(sum of weights)^2 * Sigma``.
    """

    kind: str = "iid_gaussian"
    Sigma: np.ndarray = None
    ma_weights: tuple[float, ...] | None = None
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("iid_gaussian", "ma_infinity_truncated"):
            raise ValueError(f"unknown innovation kind: {self.kind}")
        Sigma = np.atleast_2d(np.asarray(self.Sigma if self.Sigma is not None else [[1.0]], dtype=float))
        try:
            np.linalg.cholesky(Sigma)
        except np.linalg.LinAlgError as exc:
            raise DimensionMismatchError("Sigma must be positive definite") from exc
        object.__setattr__(self, "Sigma", Sigma)
        if self.kind == "ma_infinity_truncated":
            w = tuple(float(x) for x in (self.ma_weights or (1.0,)))
            if not w:
                raise ValueError("ma_weights must be nonempty")
            object.__setattr__(self, "ma_weights", w)

    @property
    def p(self) -> int:
        return self.Sigma.shape[0]

    def long_run_variance(self) -> np.ndarray:
        if self.kind == "ma_infinity_truncated":
            return (sum(self.ma_weights) ** 2) * self.Sigma
        return self.Sigma.copy()


def _rng_for(seed, rep: int | None = None) -> np.random.Generator:
    if rep is None:
        return np.random.default_rng(np.random.SeedSequence(seed))
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(rep)]))


def gen_innovations(spec: InnovationSpec, n: int, rep: int | None = None) -> np.ndarray:
    """Draw ``n`` innovation vectors, deterministically in ``(spec.seed, rep)``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = _rng_for(spec.seed, rep)
    L = np.linalg.cholesky(spec.Sigma)
    if spec.kind == "iid_gaussian":
        return rng.standard_normal((n, spec.p)) @ L.T
    w = np.asarray(spec.ma_weights)
    q = w.size
    eta = rng.standard_normal((n + q - 1, spec.p))
    out = np.zeros((n, spec.p))
    for i, wi in enumerate(w):
        if wi != 0.0:
            out += wi * eta[q - 1 - i : q - 1 - i + n]
    return out @ L.T


@dataclass(frozen=True)
class Path:
    """A simulated trajectory on t = 1..n with k presample values.

    ``y_plus``/``y_minus`` are the parts of ``y`` above/below the model
    threshold; they satisfy ``y_plus + y_minus = y + b`` (plain positive and
    negative parts when ``b = 0``).
    """

    y: np.ndarray  # (n,)
    x: np.ndarray  # (n, p-1)
    y_plus: np.ndarray
    y_minus: np.ndarray
    init_y: np.ndarray  # (k,), chronological, last entry is t = 0
    init_x: np.ndarray  # (k, p-1)
    innovations: np.ndarray  # (n, p)
    b: float = 0.0

    @property
    def n(self) -> int:
        return self.y.size

    @property
    def p(self) -> int:
        return self.x.shape[1] + 1

    def z(self, t: int) -> np.ndarray:
        """Level vector ``(y_t, x_t)`` for t in -k+1..n."""
        if t >= 1:
            return np.concatenate([[self.y[t - 1]], self.x[t - 1]])
        k = self.init_y.size
        if t < -k + 1:
            raise IndexError(f"no presample value at t={t}")
        return np.concatenate([[self.init_y[t + k - 1]], self.init_x[t + k - 1]])


@dataclass(frozen=True)
class ScaledPath:
    lambda_grid: np.ndarray
    Z: np.ndarray  # (p, grid size)


def _prep_init(model: CksvarModel, init) -> tuple[np.ndarray, np.ndarray]:
    k, p = model.k, model.p
    if init is None:
        return np.zeros(k), np.zeros((k, p - 1))
    y0, x0 = init
    y0 = np.asarray(y0, dtype=float).reshape(k)
    x0 = np.asarray(x0, dtype=float).reshape(k, p - 1)
    return y0, x0


def simulate(
    model: CksvarModel | CanonicalModel,
    n: int,
    spec: InnovationSpec | None = None,
    init=None,
    innovations: np.ndarray | None = None,
) -> Path:
    """Simulate a single path of length ``n``.

    ``init`` supplies the k presample pairs ``(y, x)`` in chronological order
    (defaults to zeros).  Explicit ``innovations`` override ``spec``; exactly
    one of the two must be provided.
    """
    canon = isinstance(model, CanonicalModel)
    m = model.model if canon else model
    if innovations is None:
        if spec is None:
            raise ValueError("provide an InnovationSpec or explicit innovations")
        if spec.p != m.p:
            raise DimensionMismatchError(f"innovation dimension {spec.p} != model dimension {m.p}")
        innovations = gen_innovations(spec, n)
    u = np.asarray(innovations, dtype=float).reshape(n, m.p)
    y0, x0 = _prep_init(m, init)
    ys, xs = _simulate_batch_core(m, u[None, :, :], y0[None, :], x0[None, :, :])
    y, x = ys[0], xs[0]
    return Path(
        y=y,
        x=x,
        y_plus=np.maximum(y, m.b),
        y_minus=np.minimum(y, m.b),
        init_y=y0,
        init_x=x0,
        innovations=u,
        b=m.b,
    )


def simulate_batch(
    model: CksvarModel | CanonicalModel,
    n: int,
    reps: int,
    spec: InnovationSpec,
    init=None,
) -> tuple[np.ndarray, np.ndarray]:
    """Simulate ``reps`` independent paths in lockstep.

    Returns ``(y, x)`` of shapes (reps, n) and (reps, n, p-1).  Replication r
    draws its innovations from the derived stream ``(spec.seed, r)``, so the
    set of paths does not depend on batching.
    """
    m = model.model if isinstance(model, CanonicalModel) else model
    if spec.p != m.p:
        raise DimensionMismatchError(f"innovation dimension {spec.p} != model dimension {m.p}")
    u = np.stack([gen_innovations(spec, n, rep=r) for r in range(reps)])
    y0, x0 = _prep_init(m, init)
    y0 = np.broadcast_to(y0, (reps, m.k)).copy()
    x0 = np.broadcast_to(x0, (reps, m.k, m.p - 1)).copy()
    return _simulate_batch_core(m, u, y0, x0)


def _simulate_batch_core(
    m: CksvarModel, u: np.ndarray, y0: np.ndarray, x0: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Lockstep recursion over t for a (reps, n, p) innovation array."""
    reps, n, p = u.shape
    k, b = m.k, m.b
    canonical = m.is_canonical()
    if not canonical:
        rep_dgp = validate_dgp(m)
        if not rep_dgp.ok:
            raise DgpError("; ".join(rep_dgp.messages))
        lu_plus = np.linalg.inv(m.Phi0_plus_mat)
        lu_minus = np.linalg.inv(m.Phi0_minus_mat)
        phi0p, phi0m = m.phi0_plus, m.phi0_minus

    # Ring buffers of the k most recent (y+, y-, x), newest first.
    yp = np.maximum(y0, b)[:, ::-1].copy()  # (reps, k): column j holds t - 1 - j
    ym = np.minimum(y0, b)[:, ::-1].copy()
    xl = x0[:, ::-1, :].copy()  # (reps, k, p-1)

    phis_p = [m.phi_plus[i] for i in range(k)]  # (p,) each
    phis_m = [m.phi_minus[i] for i in range(k)]
    phis_x = [m.Phi_x[i] for i in range(k)]  # (p, p-1)
    c = m.c

    ys = np.empty((reps, n))
    xs = np.empty((reps, n, p - 1))
    for t in range(n):
        rhs = c[None, :] + u[:, t, :]
        for i in range(k):
            rhs = rhs + yp[:, i, None] * phis_p[i][None, :] + ym[:, i, None] * phis_m[i][None, :]
            if p > 1:
                rhs = rhs + xl[:, i, :] @ phis_x[i].T
        if canonical:
            y_t = rhs[:, 0] - b
            x_t = rhs[:, 1:]
        else:
            cand_p = rhs @ lu_plus.T - b * (lu_plus @ phi0m)[None, :]
            cand_m = rhs @ lu_minus.T - b * (lu_minus @ phi0p)[None, :]
            ok_p = cand_p[:, 0] >= b - SIGN_TOL
            ok_m = cand_m[:, 0] <= b + SIGN_TOL
            if not np.all(ok_p | ok_m):
                bad = int(np.argmin(ok_p | ok_m))
                raise CoherenceError(t + 1, f"no sign-consistent branch (replication {bad})")
            strict_both = (cand_p[:, 0] > b + SIGN_TOL) & (cand_m[:, 0] < b - SIGN_TOL)
            if np.any(strict_both):
                bad = int(np.argmax(strict_both))
                raise CoherenceError(t + 1, f"two sign-consistent branches (replication {bad})")
            use_p = ok_p  # boundary ties resolve to the upper branch
            y_t = np.where(use_p, cand_p[:, 0], cand_m[:, 0])
            x_t = np.where(use_p[:, None], cand_p[:, 1:], cand_m[:, 1:])
        ys[:, t] = y_t
        xs[:, t, :] = x_t
        # shift ring buffers
        yp[:, 1:] = yp[:, :-1]
        ym[:, 1:] = ym[:, :-1]
        yp[:, 0] = np.maximum(y_t, b)
        ym[:, 0] = np.minimum(y_t, b)
        if p > 1:
            xl[:, 1:, :] = xl[:, :-1, :]
            xl[:, 0, :] = x_t
    return ys, xs


def scale_path(path: Path, grid_points: int) -> ScaledPath:
    """Diffusively rescale a path onto a [0, 1] grid: ``Z(lam) = z(floor(n lam)) / sqrt(n)``."""
    n = path.n
    if grid_points < 1 or n < grid_points:
        raise ValueError("need 1 <= grid_points <= n")
    lam = np.linspace(0.0, 1.0, grid_points + 1)
    idx = np.floor(n * lam).astype(int)
    Z = np.empty((path.p, grid_points + 1))
    scale = 1.0 / np.sqrt(n)
    for j, t in enumerate(idx):
        Z[:, j] = path.z(int(t)) * scale
    return ScaledPath(lambda_grid=lam, Z=Z)


# ---------------------------------------------------------------------------
# Short-memory companion recursions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Case1Trace:
    """State trace of the case-(i) recursion and its reconstruction of y-."""

    zeta: np.ndarray  # (n+1, dim), row t is the state after step t
    ybar: np.ndarray  # (n+1,)
    delta: np.ndarray  # (n+1,)
    y_minus: np.ndarray  # (n,), reconstructed negative part for t = 1..n
    xi_plus: np.ndarray  # (n+1, p(k-1)+r), stacked equilibrium errors


@dataclass(frozen=True)
class Case2Trace:
    xi: np.ndarray  # (n+1, r+(k-1)(p+1))
    delta: np.ndarray  # (n,)


def _z_or_zero(path: Path, t: int) -> np.ndarray:
    """Level vector, treating presample values older than the path's buffer as zero.

    Older values are only requested when the lag order was zero-padded, in
    which case they carry zero coefficients and any choice reproduces the
    same path; zero keeps the companion state well defined.
    """
    try:
        return path.z(t)
    except IndexError:
        return np.zeros(path.p)


def _stacked_z(path: Path, k: int, t: int) -> np.ndarray:
    """Companion state (z_t, ..., z_{t-k+1}) for case (i)."""
    return np.concatenate([_z_or_zero(path, t - j) for j in range(k)])


def _stacked_z_star(path: Path, k: int, t: int) -> np.ndarray:
    """Companion state (z_t, z*_{t-1}, ..., z*_{t-k+1}) for case (ii)."""
    parts = [_z_or_zero(path, t)]
    for j in range(1, k):
        z = _z_or_zero(path, t - j)
        parts.append(np.concatenate([[max(z[0], 0.0), min(z[0], 0.0)], z[1:]]))
    return np.concatenate(parts)


def short_memory_case1(vecm: VecmForm, path: Path, tol: float = 1e-8) -> Case1Trace:
    """Evolve the case-(i) switching recursion along a simulated path.

    The recursion reproduces the path's negative part as ``delta_t * ybar_t``
    and its stacked equilibrium errors; agreement is exact up to floating
    point accumulation.
    """
    cls = classify_case(vecm, tol)
    if cls.pattern() is not Case.REGULATED or cls.orientation != 1:
        raise CaseError("short_memory_case1 requires the standard case (i) configuration")
    if path.b != 0.0:
        raise CaseError("short_memory_case1 requires a zero-threshold path")
    vecm = _ensure_two_lags(vecm)
    m = vecm.model
    p, k = vecm.p, vecm.k
    F0 = build_F(vecm, 0.0, tol)
    F1 = build_F(vecm, 1.0, tol)
    balpha, bbeta = bold_pair_case1(vecm, tol)
    n1 = bbeta.shape[1]
    dim = n1 + k

    n = path.n
    zeta = np.zeros((n + 1, dim))
    delta = np.zeros(n + 1)
    # state at t = 0: stacked errors, ybar_0 = y_0^-, lagged negative parts
    zeta[0, :n1] = bbeta.T @ _stacked_z(path, k, 0)
    zeta[0, n1] = min(path.z(0)[0], 0.0)
    for j in range(1, k):
        zeta[0, n1 + j] = min(_z_or_zero(path, -j)[0], 0.0)
    delta[0] = 1.0

    mu_vec = np.zeros(dim)
    mu_vec[:n1] = bbeta[:p, :].T @ vecm.c
    mu_vec[n1] = vecm.c[0]
    eps = np.zeros(dim)

    y_minus = np.zeros(n)
    y_plus_prev = max(path.z(0)[0], 0.0)
    dF = F1 - F0
    for t in range(1, n + 1):
        u = path.innovations[t - 1]
        eps[:n1] = bbeta[:p, :].T @ u
        eps[n1] = u[0]
        F = F0 + delta[t - 1] * dF
        zeta[t] = mu_vec + F @ zeta[t - 1] + eps
        ybar = zeta[t, n1]
        cand = y_plus_prev + ybar
        delta[t] = cand / ybar if cand < 0.0 else 0.0
        y_minus[t - 1] = delta[t] * ybar
        y_plus_prev = path.y_plus[t - 1]
    return Case1Trace(
        zeta=zeta,
        ybar=zeta[:, n1].copy(),
        delta=delta,
        y_minus=y_minus,
        xi_plus=zeta[:, :n1].copy(),
    )


def short_memory_case2(vecm: VecmForm, path: Path, tol: float = 1e-8) -> Case2Trace:
    """Evolve the case-(ii) convex-combination recursion along a path."""
    cls = classify_case(vecm, tol)
    if cls.pattern() is not Case.KINKED:
        raise CaseError("short_memory_case2 requires the case (ii) configuration")
    if path.b != 0.0:
        raise CaseError("short_memory_case2 requires a zero-threshold path")
    vecm = _ensure_two_lags(vecm)
    p, k = vecm.p, vecm.k
    balpha, bbeta_p, bbeta_m = bold_pair_case2(vecm, tol)
    dim = balpha.shape[1]
    A = {1: np.eye(dim) + bbeta_p.T @ balpha, -1: np.eye(dim) + bbeta_m.T @ balpha}
    Bcol = {1: bbeta_p[:p, :].T, -1: bbeta_m[:p, :].T}  # (dim, p)

    n = path.n
    xi = np.zeros((n + 1, dim))
    delta = np.zeros(n)
    s0 = 1 if path.z(0)[0] >= 0 else -1
    xi[0] = (bbeta_p if s0 == 1 else bbeta_m).T @ _stacked_z_star(path, k, 0)

    y_prev = path.z(0)[0]
    for t in range(1, n + 1):
        y_t = path.y[t - 1]
        s_prev = 1 if y_prev >= 0 else -1
        s_now = 1 if y_t >= 0 else -1
        # switch fraction: zero without a regime change, else the crossing
        # point of the segment; states exactly at zero sit in the upper
        # regime, so a move from zero downward is a full switch
        if s_prev == s_now:
            d = 0.0
        else:
            d = y_t / (y_t - y_prev)
        delta[t - 1] = d
        Abar = (1.0 - d) * A[s_prev] + d * A[s_now]
        Bbar = (1.0 - d) * Bcol[s_prev] + d * Bcol[s_now]
        xi[t] = Bbar @ vecm.c + Abar @ xi[t - 1] + Bbar @ path.innovations[t - 1]
        y_prev = y_t
    return Case2Trace(xi=xi, delta=delta)
