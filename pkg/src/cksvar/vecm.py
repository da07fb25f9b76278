"""Error-correction form, rank-pattern classification, and projection geometry.

The long-run behaviour of the model is governed by the two matrices
``Pi+ = [pi+, Pix]`` and ``Pi- = [pi-, Pix]`` read off the autoregressive
polynomial at one.  Their ranks, together with whether ``pi+``/``pi-`` lie in
the column span of ``Pix``, sort the model into three configurations:

* case (i), "regulated": rank jumps by one across the threshold and the
  common trends are confined to the half-space where y is positive;
* case (ii), "kinked": equal ranks with regime-dependent cointegrating
  vectors, producing sign-dependent trend loadings;
* case (iii): equal ranks with ``rank Pix = r - 1``; detected and reported
  but no limit objects are built for it here.

All projection objects needed by the representation results live here as
well: reduced-rank factorisations, orthocomplements, the oblique projection
pair of a factorisation, the case-(i) kappa loading, and the case-(ii) kink
geometry (theta, vartheta, mu, h).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import AssumptionViolationError, CaseError, DgpError
from .model import CanonicalModel, CksvarModel, istar

__all__ = [
    "VecmForm",
    "Case",
    "CaseClassification",
    "Factorization",
    "ProjectionPair",
    "KinkGeometry",
    "vecm_decompose",
    "classify_case",
    "factorize_pi",
    "orthocomplement",
    "projections",
    "projection_case1",
    "kink_geometry",
    "canonical_model_from_vecm",
]

DEFAULT_TOL = 1e-8


@dataclass(frozen=True)
class VecmForm:
    """Levels-and-differences rewriting of a model with ``b = 0``.

    ``pi_plus``/``pi_minus`` are the loadings on the lagged level of y+/y-,
    ``Pi_x`` on the lagged x, and ``Gamma_plus[i]``/``Gamma_minus[i]`` are the
    (p, p) short-run matrices on the lagged differences (their x-blocks
    coincide by construction).  ``canonical`` records whether the source model
    has the canonical contemporaneous matrix; several downstream builders
    require that.
    """

    pi_plus: np.ndarray
    pi_minus: np.ndarray
    Pi_x: np.ndarray
    Gamma_plus: np.ndarray  # (k-1, p, p)
    Gamma_minus: np.ndarray  # (k-1, p, p)
    c: np.ndarray
    canonical: bool
    model: CksvarModel

    @property
    def p(self) -> int:
        return self.model.p

    @property
    def k(self) -> int:
        return self.model.k

    @property
    def Pi_plus_mat(self) -> np.ndarray:
        return np.column_stack([self.pi_plus, self.Pi_x])

    @property
    def Pi_minus_mat(self) -> np.ndarray:
        return np.column_stack([self.pi_minus, self.Pi_x])

    def Gamma_at_1(self, regime: str) -> np.ndarray:
        """``Gamma^r(1) = Phi0^r - sum_i Gamma_i^r``."""
        base = self.model.Phi0_plus_mat if regime == "+" else self.model.Phi0_minus_mat
        G = self.Gamma_plus if regime == "+" else self.Gamma_minus
        return base - G.sum(axis=0)


def vecm_decompose(model: CksvarModel | CanonicalModel) -> VecmForm:
    """Derive the error-correction form of a model with zero threshold.

    ``Gamma_i^r = -sum_{j>i} Phi_j^r`` and ``Pi^r = -Phi^r(1)``; the
    polynomial identity ``Phi^r(lam) = Phi^r(1) lam + Gamma^r(lam) (1 - lam)``
    holds coefficient-wise by construction.
    """
    canonical = isinstance(model, CanonicalModel)
    m = model.model if canonical else model
    if m.b != 0.0:
        raise DgpError("vecm_decompose requires b = 0; apply threshold_shift first")
    canonical = canonical or m.is_canonical()
    p, k = m.p, m.k

    poly_plus = -m.poly_at(1.0, "+")
    poly_minus = -m.poly_at(1.0, "-")
    Gp = np.zeros((max(k - 1, 0), p, p))
    Gm = np.zeros((max(k - 1, 0), p, p))
    for i in range(1, k):
        for j in range(i + 1, k + 1):
            Gp[i - 1] -= m.phi_mat(j, "+")
            Gm[i - 1] -= m.phi_mat(j, "-")
    return VecmForm(
        pi_plus=poly_plus[:, 0],
        pi_minus=poly_minus[:, 0],
        Pi_x=poly_plus[:, 1:],
        Gamma_plus=Gp,
        Gamma_minus=Gm,
        c=m.c.copy(),
        canonical=bool(canonical),
        model=m,
    )


# ---------------------------------------------------------------------------
# Rank and span utilities
# ---------------------------------------------------------------------------


def numerical_rank(M: np.ndarray, tol: float = DEFAULT_TOL, ref: float | None = None) -> int:
    """Rank by singular-value thresholding at ``tol * ref``.

    ``ref`` defaults to the matrix's own largest singular value; blocks of a
    common object should pass a shared reference so that a block consisting
    of floating-point noise is recognised as zero.
    """
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if min(M.shape) == 0:
        return 0
    sv = np.linalg.svd(M, compute_uv=False)
    scale = sv[0] if ref is None else ref
    if scale == 0.0:
        return 0
    return int(np.sum(sv > tol * scale))


def _in_span(v: np.ndarray, M: np.ndarray, tol: float, scale: float = 0.0) -> bool:
    """Least-squares membership of ``v`` in the column span of ``M``.

    The residual is judged relative to ``|v|``; a ``v`` whose norm is below
    ``tol * scale`` counts as the zero vector (trivially in any span), which
    keeps the test stable when ``v`` is floating-point noise left over from a
    transform.
    """
    v = np.asarray(v, dtype=float).ravel()
    nv = np.linalg.norm(v)
    if nv <= tol * scale:
        return True
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if M.shape[1] == 0 or numerical_rank(M, tol) == 0:
        return False
    coef, *_ = np.linalg.lstsq(M, v, rcond=None)
    resid = np.linalg.norm(v - M @ coef)
    return bool(resid <= tol * nv)


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------


def _pi_scale(vecm: VecmForm) -> float:
    """Common reference scale for thresholding the long-run blocks.

    The long-run matrices are differences of the lag coefficients, so their
    floating-point noise floor is set by the coefficient magnitude; the
    reference is therefore the larger of the pooled top singular value and
    the coefficient scale.
    """
    m = np.column_stack([vecm.pi_plus, vecm.pi_minus, vecm.Pi_x])
    sv = np.linalg.svd(m, compute_uv=False)
    top = float(sv[0]) if sv.size else 0.0
    mod = vecm.model
    coeff = max(
        np.abs(mod.Phi0).max(),
        np.abs(mod.phi_plus).max(initial=0.0),
        np.abs(mod.phi_minus).max(initial=0.0),
        np.abs(mod.Phi_x).max(initial=0.0),
    )
    return max(top, coeff)


class Case(enum.Enum):
    REGULATED = "case_i_regulated"
    KINKED = "case_ii_kinked"
    LINEAR_IN_NONLINEAR_VECM = "case_iii_linear_in_nonlinear_vecm"
    LINEAR = "linear"
    UNSUPPORTED = "unsupported"


@dataclass(frozen=True)
class CaseClassification:
    """Rank pattern of ``(Pi+, Pi-, Pix)`` and the resulting case label.

    ``orientation`` is +1 for the standard layout (the rank deficiency sits in
    the positive regime for case (i)) and -1 for the mirror image, which is
    the same case after flipping the sign of y.
    """

    case: Case
    r_plus: int
    r_minus: int
    rank_Pi_x: int
    r: int
    pi_plus_in_span: bool
    pi_minus_in_span: bool
    tolerance_used: float
    orientation: int = 1
    linear: bool = False
    notes: tuple[str, ...] = ()

    def pattern(self) -> Case | None:
        """Table pattern implied by the ranks alone, ignoring linearity."""
        rx = self.rank_Pi_x
        if self.r_plus == rx and self.r_minus == rx + 1 and self.pi_plus_in_span and not self.pi_minus_in_span:
            return Case.REGULATED
        if self.r_minus == rx and self.r_plus == rx + 1 and self.pi_minus_in_span and not self.pi_plus_in_span:
            return Case.REGULATED
        if self.r_plus == self.r_minus == rx and self.pi_plus_in_span and self.pi_minus_in_span:
            return Case.KINKED
        if self.r_plus == self.r_minus == rx + 1 and not self.pi_plus_in_span and not self.pi_minus_in_span:
            return Case.LINEAR_IN_NONLINEAR_VECM
        return None

    def to_dict(self) -> dict:
        return {
            "case": self.case.value,
            "r_plus": self.r_plus,
            "r_minus": self.r_minus,
            "rank_Pi_x": self.rank_Pi_x,
            "r": self.r,
            "pi_plus_in_span": self.pi_plus_in_span,
            "pi_minus_in_span": self.pi_minus_in_span,
            "tolerance_used": self.tolerance_used,
            "orientation": self.orientation,
            "linear": self.linear,
            "notes": list(self.notes),
        }


def classify_case(vecm: VecmForm, tol: float = DEFAULT_TOL) -> CaseClassification:
    """Classify the rank configuration of the long-run matrices.

    Ranks are computed by relative singular-value thresholding and span
    membership by relative least-squares residuals, both at ``tol``.  Models
    with identical plus/minus coefficient polynomials are labelled linear;
    full-rank long-run matrices (no unit roots) are reported as unsupported
    for cointegration analysis.  Configurations outside the three-case table
    come back as unsupported with diagnostics.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    p = vecm.p
    sref = _pi_scale(vecm)
    r_plus = numerical_rank(vecm.Pi_plus_mat, tol, ref=sref)
    r_minus = numerical_rank(vecm.Pi_minus_mat, tol, ref=sref)
    rx = numerical_rank(vecm.Pi_x, tol, ref=sref)
    in_plus = _in_span(vecm.pi_plus, vecm.Pi_x, tol, scale=sref)
    in_minus = _in_span(vecm.pi_minus, vecm.Pi_x, tol, scale=sref)

    m = vecm.model
    scale = max(1.0, np.abs(m.Phi0).max(), np.abs(m.phi_plus).max(initial=0.0), np.abs(m.phi_minus).max(initial=0.0))
    linear = bool(
        np.allclose(m.phi0_plus, m.phi0_minus, atol=tol * scale)
        and np.allclose(m.phi_plus, m.phi_minus, atol=tol * scale)
    )

    notes: list[str] = []
    orientation = 1
    if abs(r_plus - r_minus) > 1:
        notes.append("rank gap exceeds one; long-run matrices differ by a single column, check tolerance")

    base = dict(
        r_plus=r_plus,
        r_minus=r_minus,
        rank_Pi_x=rx,
        pi_plus_in_span=in_plus,
        pi_minus_in_span=in_minus,
        tolerance_used=tol,
        linear=linear,
    )

    if linear:
        if r_plus == p:
            notes.append("linear and stationary (full-rank long-run matrix)")
        return CaseClassification(case=Case.LINEAR, r=min(r_plus, r_minus), notes=tuple(notes), **base)
    if r_plus == p and r_minus == p:
        notes.append("full-rank long-run matrices: no unit roots, stationary configuration")
        return CaseClassification(case=Case.UNSUPPORTED, r=p, notes=tuple(notes), **base)

    if r_plus == rx and r_minus == rx + 1 and in_plus and not in_minus:
        case, r = Case.REGULATED, rx
    elif r_minus == rx and r_plus == rx + 1 and in_minus and not in_plus:
        case, r, orientation = Case.REGULATED, rx, -1
        notes.append("mirrored orientation: flip the sign of y to reach the standard layout")
    elif r_plus == r_minus == rx and in_plus and in_minus:
        case, r = Case.KINKED, rx
    elif r_plus == r_minus == rx + 1 and not in_plus and not in_minus:
        case, r = Case.LINEAR_IN_NONLINEAR_VECM, r_plus
        notes.append("case (iii) detected; limit objects for it are not constructed")
    else:
        case, r = Case.UNSUPPORTED, min(r_plus, r_minus)
        notes.append(
            f"configuration outside the three-case table: r+={r_plus}, r-={r_minus}, "
            f"rank Pix={rx}, pi+ in span={in_plus}, pi- in span={in_minus}"
        )
    return CaseClassification(case=case, r=r, orientation=orientation, notes=tuple(notes), **base)


# ---------------------------------------------------------------------------
# Factorisations and projections
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Factorization:
    """Reduced-rank factorisation ``Pi = alpha beta'`` with orthocomplements."""

    alpha: np.ndarray  # (p, r)
    beta: np.ndarray  # (p, r)
    alpha_perp: np.ndarray  # (p, p - r)
    beta_perp: np.ndarray  # (p, p - r)

    @property
    def r(self) -> int:
        return self.beta.shape[1]


def orthocomplement(A: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of the column span of ``A``.

    ``A`` must be (m, n) with full column rank; the result is (m, m - n) with
    orthonormal columns satisfying ``result' A = 0``.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    m, n = A.shape
    if n == 0:
        return np.eye(m)
    if numerical_rank(A, DEFAULT_TOL) < n:
        raise AssumptionViolationError("orthocomplement requires full column rank")
    U, _, _ = np.linalg.svd(A, full_matrices=True)
    return U[:, n:]


def factorize_pi(Pi: np.ndarray, r: int, tol: float = DEFAULT_TOL, ref: float | None = None) -> Factorization:
    """Factor a (p, p) matrix of numerical rank ``r`` as ``alpha beta'``.

    ``beta`` is normalised so that its leading (r, r) block is the identity
    whenever that block is well conditioned, otherwise the orthonormal
    right-singular basis is kept.
    """
    Pi = np.atleast_2d(np.asarray(Pi, dtype=float))
    p = Pi.shape[0]
    got = numerical_rank(Pi, tol, ref=ref)
    if got != r:
        raise AssumptionViolationError(f"numerical rank {got} does not match requested r={r}")
    if r == 0:
        eye = np.eye(p)
        return Factorization(np.zeros((p, 0)), np.zeros((Pi.shape[1], 0)), eye, np.eye(Pi.shape[1]))
    U, s, Vt = np.linalg.svd(Pi)
    alpha = U[:, :r] * s[:r]
    beta = Vt[:r, :].T
    lead = beta[:r, :]
    sv = np.linalg.svd(lead, compute_uv=False)
    if sv[-1] > 1e-8 * max(sv[0], 1.0):
        alpha = alpha @ lead.T
        beta = beta @ np.linalg.inv(lead)
    return Factorization(alpha, beta, orthocomplement(alpha), orthocomplement(beta))


@dataclass(frozen=True)
class ProjectionPair:
    """Complementary oblique projections attached to a factorisation.

    ``P_beta_perp = beta_perp (alpha_perp' beta_perp)^{-1} alpha_perp'``
    projects onto span(beta_perp) along span(alpha); ``P_alpha`` is its
    complement.  Both are idempotent and they sum to the identity.
    """

    P_beta_perp: np.ndarray
    P_alpha: np.ndarray
    sign_context: str = "+1"


def projections(fact: Factorization) -> ProjectionPair:
    p = fact.beta_perp.shape[0]
    if fact.r == p:
        return ProjectionPair(np.zeros((p, p)), np.eye(p))
    M = fact.alpha_perp.T @ fact.beta_perp
    sv = np.linalg.svd(M, compute_uv=False)
    if sv[-1] <= 1e-12 * max(sv[0], 1.0):
        raise AssumptionViolationError("alpha_perp' beta_perp is singular; projections undefined")
    P_bp = fact.beta_perp @ np.linalg.solve(M, fact.alpha_perp.T)
    if fact.r == 0:
        return ProjectionPair(P_bp, np.eye(p) - P_bp)
    N = fact.beta.T @ fact.alpha
    P_a = fact.alpha @ np.linalg.solve(N, fact.beta.T)
    return ProjectionPair(P_bp, P_a)


def _require_case(vecm: VecmForm, wanted: Case, tol: float) -> CaseClassification:
    cls = classify_case(vecm, tol)
    pattern = cls.pattern()
    if pattern is not wanted:
        raise CaseError(
            f"operation requires the {wanted.value} configuration, got {cls.case.value} "
            f"(pattern {pattern.value if pattern else 'none'})"
        )
    if wanted is Case.REGULATED and cls.orientation != 1:
        raise CaseError("mirrored case (i) configuration: apply flip_y to the model first")
    return cls


def projection_case1(
    vecm: VecmForm, tol: float = DEFAULT_TOL
) -> tuple[ProjectionPair, np.ndarray, float]:
    """Case-(i) trend projection and the regulation loading.

    Returns the pair built from ``P = beta_perp+ [alpha_perp+' Gamma+(1)
    beta_perp+]^{-1} alpha_perp+'`` (complement ``I - P``), the loading
    ``kappa = P pi-`` and its first element ``kappa1``.  The weighting by
    ``Gamma+(1)`` makes ``P`` the top-left corner of the companion-form
    projection; it is idempotent only when the short-run matrices vanish.
    """
    cls = _require_case(vecm, Case.REGULATED, tol)
    fact = factorize_pi(vecm.Pi_plus_mat, cls.r, tol, ref=_pi_scale(vecm))
    G1 = vecm.Gamma_at_1("+")
    M = fact.alpha_perp.T @ G1 @ fact.beta_perp
    sv = np.linalg.svd(M, compute_uv=False)
    if sv.size and sv[-1] <= 1e-10 * max(sv[0], 1.0):
        raise AssumptionViolationError("alpha_perp' Gamma+(1) beta_perp is singular")
    P_bp = fact.beta_perp @ np.linalg.solve(M, fact.alpha_perp.T)
    kappa = P_bp @ vecm.pi_minus
    pair = ProjectionPair(P_bp, np.eye(vecm.p) - P_bp, sign_context="case-(i)-plus")
    return pair, kappa, float(kappa[0])


@dataclass(frozen=True)
class KinkGeometry:
    """Case-(ii) geometry: regime cointegration vectors and the kink map.

    ``theta_plus``/``theta_minus`` solve ``Pix theta = pi`` per regime;
    ``beta_perp(y)`` keeps the structured first column ``(1, -theta(y))`` so
    that the first row of the trend projection is ``h(y) vartheta'`` with
    ``h(y) = 1`` for y >= 0 and ``mu`` for y < 0.
    """

    theta_plus: np.ndarray
    theta_minus: np.ndarray
    beta_plus: np.ndarray
    beta_minus: np.ndarray
    beta_perp_plus: np.ndarray
    beta_perp_minus: np.ndarray
    alpha: np.ndarray
    alpha_perp: np.ndarray
    P_beta_perp_plus: np.ndarray
    P_beta_perp_minus: np.ndarray
    vartheta: np.ndarray
    mu: float

    def h(self, y: float) -> float:
        return 1.0 if y >= 0 else self.mu

    def beta(self, y: float) -> np.ndarray:
        return self.beta_plus if y >= 0 else self.beta_minus

    def beta_perp(self, y: float) -> np.ndarray:
        return self.beta_perp_plus if y >= 0 else self.beta_perp_minus

    def P_beta_perp(self, y: float) -> np.ndarray:
        return self.P_beta_perp_plus if y >= 0 else self.P_beta_perp_minus


def kink_geometry(vecm: VecmForm, tol: float = DEFAULT_TOL) -> KinkGeometry:
    """Build the case-(ii) kink geometry, verifying the determinant-sign condition.

    The positive ratio ``mu`` comes from the two determinants
    ``det(alpha_perp' Gamma(1; s) beta_perp(s))`` for s = +1, -1; equal
    nonzero signs are required, otherwise the configuration is rejected.  The
    identity ``e1' P_beta_perp(-1) = mu * e1' P_beta_perp(+1)`` is verified
    numerically before returning.
    """
    cls = _require_case(vecm, Case.KINKED, tol)
    p, r = vecm.p, cls.r

    pi_scale = _pi_scale(vecm)
    alpha, beta_x = factorize_pi_rect(vecm.Pi_x, r, tol, ref=pi_scale)
    alpha_perp = orthocomplement(alpha)
    theta = {}
    for name, pi in (("+", vecm.pi_plus), ("-", vecm.pi_minus)):
        if np.linalg.norm(pi) <= tol * pi_scale or vecm.Pi_x.shape[1] == 0 or r == 0:
            if np.linalg.norm(pi) > tol * pi_scale:
                raise AssumptionViolationError(f"pi{name} nonzero with rank-0 Pix")
            theta[name] = np.zeros(p - 1)
        else:
            sol, *_ = np.linalg.lstsq(vecm.Pi_x, pi, rcond=None)
            resid = np.linalg.norm(vecm.Pi_x @ sol - pi)
            if resid > tol * max(1.0, np.linalg.norm(pi)):
                raise AssumptionViolationError(f"pi{name} is not in the span of Pix")
            theta[name] = sol

    beta_x_perp = orthocomplement(beta_x) if beta_x.shape[1] else np.eye(p - 1)

    def beta_perp_of(th: np.ndarray) -> np.ndarray:
        out = np.zeros((p, p - r))
        out[0, 0] = 1.0
        out[1:, 0] = -th
        out[1:, 1:] = beta_x_perp
        return out

    def beta_of(th: np.ndarray) -> np.ndarray:
        return np.vstack([th @ beta_x, beta_x]) if r else np.zeros((p, 0))

    bpp = beta_perp_of(theta["+"])
    bpm = beta_perp_of(theta["-"])
    dets = {}
    mats = {}
    for sign, bp, reg in (("+", bpp, "+"), ("-", bpm, "-")):
        M = alpha_perp.T @ vecm.Gamma_at_1(reg) @ bp
        mats[sign] = M
        dets[sign] = float(np.linalg.det(M))
    scale = max(abs(dets["+"]), abs(dets["-"]), 1e-300)
    if min(abs(dets["+"]), abs(dets["-"])) <= tol * scale or np.sign(dets["+"]) != np.sign(dets["-"]):
        raise AssumptionViolationError(
            f"determinant-sign condition fails: det+ = {dets['+']:.6g}, det- = {dets['-']:.6g}"
        )
    mu = dets["+"] / dets["-"]

    P_plus = bpp @ np.linalg.solve(mats["+"], alpha_perp.T)
    P_minus = bpm @ np.linalg.solve(mats["-"], alpha_perp.T)
    vartheta = P_plus[0, :].copy()
    check = np.linalg.norm(P_minus[0, :] - mu * vartheta)
    if check > 1e-10 * max(1.0, np.linalg.norm(vartheta)):
        raise AssumptionViolationError("kink identity e1' P(-1) = mu e1' P(+1) failed numerically")

    return KinkGeometry(
        theta_plus=theta["+"],
        theta_minus=theta["-"],
        beta_plus=beta_of(theta["+"]),
        beta_minus=beta_of(theta["-"]),
        beta_perp_plus=bpp,
        beta_perp_minus=bpm,
        alpha=alpha,
        alpha_perp=alpha_perp,
        P_beta_perp_plus=P_plus,
        P_beta_perp_minus=P_minus,
        vartheta=vartheta,
        mu=float(mu),
    )


def factorize_pi_rect(
    M: np.ndarray, r: int, tol: float = DEFAULT_TOL, ref: float | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """SVD factorisation ``M = alpha beta'`` of a rectangular matrix of rank r."""
    M = np.atleast_2d(np.asarray(M, dtype=float))
    got = numerical_rank(M, tol, ref=ref)
    if got != r:
        raise AssumptionViolationError(f"numerical rank {got} does not match requested r={r}")
    if r == 0:
        return np.zeros((M.shape[0], 0)), np.zeros((M.shape[1], 0))
    U, s, Vt = np.linalg.svd(M)
    return U[:, :r] * s[:r], Vt[:r, :].T


# ---------------------------------------------------------------------------
# Inverse map: build a canonical model from its error-correction matrices
# ---------------------------------------------------------------------------


def canonical_model_from_vecm(
    pi_plus: np.ndarray,
    pi_minus: np.ndarray,
    Pi_x: np.ndarray,
    Gamma_plus: np.ndarray | None = None,
    Gamma_minus: np.ndarray | None = None,
    c: np.ndarray | None = None,
    Sigma: np.ndarray | None = None,
) -> CanonicalModel:
    """Construct the canonical model whose error-correction form has the given blocks.

    The lag coefficients follow from ``Phi_1 = Phi_0 + Pi + Gamma_1``,
    ``Phi_i = Gamma_i - Gamma_{i-1}`` and ``Phi_k = -Gamma_{k-1}``; with no
    short-run matrices the result is a first-order model.
    """
    pi_plus = np.asarray(pi_plus, dtype=float).ravel()
    p = pi_plus.size
    Pi_x = np.asarray(Pi_x, dtype=float).reshape(p, p - 1)
    Gp = np.zeros((0, p, p)) if Gamma_plus is None else np.asarray(Gamma_plus, dtype=float).reshape(-1, p, p)
    Gm = np.zeros((0, p, p)) if Gamma_minus is None else np.asarray(Gamma_minus, dtype=float).reshape(-1, p, p)
    if Gp.shape[0] != Gm.shape[0]:
        raise DgpError("Gamma_plus and Gamma_minus must have the same number of lags")
    k = Gp.shape[0] + 1
    Pi = {"+": np.column_stack([pi_plus, Pi_x]), "-": np.column_stack([np.asarray(pi_minus, float).ravel(), Pi_x])}
    G = {"+": Gp, "-": Gm}
    eye = np.eye(p)
    lags = {}
    for s in ("+", "-"):
        mats = []
        for i in range(1, k + 1):
            if i == 1:
                Phi_i = eye + Pi[s] + (G[s][0] if k > 1 else 0.0)
            elif i < k:
                Phi_i = G[s][i - 1] - G[s][i - 2]
            else:
                Phi_i = -G[s][k - 2]
            mats.append(np.asarray(Phi_i))
        lags[s] = mats
    target = istar(p)
    model = CksvarModel(
        p=p,
        k=k,
        b=0.0,
        c=np.zeros(p) if c is None else np.asarray(c, dtype=float),
        phi0_plus=target[:, 0],
        phi0_minus=target[:, 1],
        Phi0_x=target[:, 2:],
        phi_plus=np.stack([m[:, 0] for m in lags["+"]]),
        phi_minus=np.stack([m[:, 0] for m in lags["-"]]),
        Phi_x=np.stack([m[:, 1:] for m in lags["+"]]),
        Sigma=np.eye(p) if Sigma is None else Sigma,
    )
    x_mismatch = max(
        (np.abs(lags["+"][i][:, 1:] - lags["-"][i][:, 1:]).max(initial=0.0) for i in range(k)),
        default=0.0,
    )
    if x_mismatch > 1e-12:
        raise DgpError("x-blocks of the plus and minus lag polynomials must coincide")
    return CanonicalModel(model=model, P=np.eye(p + 1), Q=np.eye(p))
