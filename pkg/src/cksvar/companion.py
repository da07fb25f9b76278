"""Companion matrices, root checks, and the case-specific stability certificates.

The short-memory components of the model follow switching autoregressions
whose companion matrices come in two flavours:

* case (i): the affine family ``F_delta`` for ``delta in [0, 1]``, reduced to
  its extreme points ``F_0`` and ``F_1`` for certification;
* case (ii): the pair ``I + bbeta(+1)' balpha`` and ``I + bbeta(-1)' balpha``.

``verify_assumptions`` runs the unit-root counts on the two regime
polynomials, the rank bookkeeping, the intercept span condition, and the
joint-spectral-radius / sign certificates appropriate to the detected case,
transforming a structural model to canonical form first since the
certificates are stated for the canonical parameters.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CaseError
from .jsr import CompanionSet, jsr_bounds
from .model import CanonicalModel, CksvarModel, to_canonical, validate_dgp
from .vecm import (
    Case,
    CaseClassification,
    VecmForm,
    _in_span,
    _pi_scale,
    classify_case,
    factorize_pi,
    kink_geometry,
    projection_case1,
    vecm_decompose,
)

__all__ = [
    "det_poly_roots",
    "build_F",
    "bold_pair_case1",
    "bold_pair_case2",
    "build_case2_set",
    "AssumptionReport",
    "verify_assumptions",
    "UNIT_ROOT_WINDOW",
]

#: Roots with |root - 1| below this window count as unit roots; roots on the
#: unit circle but away from one are flagged as violations.
UNIT_ROOT_WINDOW = 1e-6


def det_poly_roots(model: CksvarModel | CanonicalModel, regime: str) -> np.ndarray:
    """Roots of ``det Phi^regime(lambda)``.

    Computed as reciprocals of the nonzero eigenvalues of the (kp, kp)
    companion matrix; zero eigenvalues correspond to roots at infinity and
    are dropped.
    """
    m = model.model if isinstance(model, CanonicalModel) else model
    if regime not in ("+", "-"):
        raise ValueError("regime must be '+' or '-'")
    p, k = m.p, m.k
    Phi0 = m.Phi0_plus_mat if regime == "+" else m.Phi0_minus_mat
    A = np.zeros((k * p, k * p))
    for i in range(1, k + 1):
        A[:p, (i - 1) * p : i * p] = np.linalg.solve(Phi0, m.phi_mat(i, regime))
    if k > 1:
        A[p:, : (k - 1) * p] = np.eye((k - 1) * p)
    eigs = np.linalg.eigvals(A)
    cutoff = 1e-12 * max(1.0, np.abs(eigs).max())
    nonzero = eigs[np.abs(eigs) > cutoff]
    return 1.0 / nonzero


# ---------------------------------------------------------------------------
# Case (i): the F_delta family
# ---------------------------------------------------------------------------


def _ensure_two_lags(vecm: VecmForm) -> VecmForm:
    """Re-derive the error-correction form after zero-padding to two lags."""
    if not vecm.canonical:
        raise CaseError("companion builders require a canonical model")
    if vecm.k >= 2:
        return vecm
    m = vecm.model.pad_to(2)
    return vecm_decompose(CanonicalModel(m, np.eye(m.p + 1), np.eye(m.p)))


def bold_pair_case1(vecm: VecmForm, tol: float = 1e-8) -> tuple[np.ndarray, np.ndarray]:
    """Companion-stacked loadings and cointegration matrix for the positive regime.

    Returns ``(balpha, bbeta)`` with ``balpha`` of shape (kp, p(k-1)+r) and
    ``bbeta`` of shape (kp, p(k-1)+r) such that the stacked long-run matrix
    factors as ``balpha @ bbeta.T``.
    """
    if not vecm.canonical:
        raise CaseError("companion builders require a canonical model")
    p, k = vecm.p, vecm.k
    if k < 2:
        raise CaseError("pad the model to at least two lags first")
    cls = classify_case(vecm, tol)
    fact = factorize_pi(vecm.Pi_plus_mat, cls.r, tol, ref=_pi_scale(vecm))
    r = cls.r
    n1 = p * (k - 1) + r

    balpha = np.zeros((k * p, n1))
    balpha[:p, :r] = fact.alpha
    for i in range(1, k):
        balpha[:p, r + (i - 1) * p : r + i * p] = vecm.Gamma_plus[i - 1]
        balpha[i * p : (i + 1) * p, r + (i - 1) * p : r + i * p] = np.eye(p)

    bbetaT = np.zeros((n1, k * p))
    bbetaT[:r, :p] = fact.beta.T
    for m in range(1, k):
        rows = slice(r + (m - 1) * p, r + m * p)
        bbetaT[rows, (m - 1) * p : m * p] = np.eye(p)
        bbetaT[rows, m * p : (m + 1) * p] = -np.eye(p)
    return balpha, bbetaT.T


def build_F(vecm: VecmForm, delta: float, tol: float = 1e-8) -> np.ndarray:
    """Companion matrix ``F_delta`` of the case-(i) short-memory recursion.

    The state stacks the equilibrium errors and lagged differences, the
    auxiliary level series, and the lagged negative parts; the matrix is
    affine in ``delta``.
    """
    if not 0.0 <= delta <= 1.0:
        raise ValueError("delta must lie in [0, 1]")
    cls = classify_case(vecm, tol)
    if cls.pattern() is not Case.REGULATED or cls.orientation != 1:
        raise CaseError("build_F requires the standard case (i) configuration")
    vecm = _ensure_two_lags(vecm)
    p, k = vecm.p, vecm.k
    balpha, bbeta = bold_pair_case1(vecm, tol)
    n1 = bbeta.shape[1]
    model = vecm.model

    dphi1 = model.phi_minus[0] - model.phi_plus[0]  # (p,)
    dphi_rest = (model.phi_minus[1:] - model.phi_plus[1:]).T  # (p, k-1)
    bbeta_1p = bbeta[:p, :]  # (p, n1)

    dim = n1 + k
    F = np.zeros((dim, dim))
    F[:n1, :n1] = np.eye(n1) + bbeta.T @ balpha
    F[:n1, n1] = (bbeta_1p.T @ dphi1) * delta
    F[:n1, n1 + 1 :] = bbeta_1p.T @ dphi_rest
    F[n1, :n1] = balpha[0, :]
    F[n1, n1] = (1.0 + dphi1[0]) * delta
    F[n1, n1 + 1 :] = dphi_rest[0, :]
    F[n1 + 1, n1] = delta
    if k > 2:
        F[n1 + 2 :, n1 + 1 : n1 + k - 1] = np.eye(k - 2)
    return F


# ---------------------------------------------------------------------------
# Case (ii): the switching pair
# ---------------------------------------------------------------------------


def _S_matrix(p: int, sign: int) -> np.ndarray:
    S = np.zeros((p + 1, p))
    S[0, 0] = 1.0 if sign >= 0 else 0.0
    S[1, 0] = 0.0 if sign >= 0 else 1.0
    S[2:, 1:] = np.eye(p - 1)
    return S


def bold_pair_case2(vecm: VecmForm, tol: float = 1e-8):
    """Stacked loadings ``balpha`` and the two sign-indexed ``bbeta`` matrices.

    Shapes: ``balpha`` is (k(p+1)-1, r+(k-1)(p+1)); each ``bbeta(s)`` has the
    transposed shape so that ``I + bbeta(s)' balpha`` is square.
    """
    if not vecm.canonical:
        raise CaseError("companion builders require a canonical model")
    p, k = vecm.p, vecm.k
    if k < 2:
        raise CaseError("pad the model to at least two lags first")
    geo = kink_geometry(vecm, tol)
    r = geo.alpha.shape[1]
    rows = k * (p + 1) - 1
    cols = r + (k - 1) * (p + 1)

    Gammas = [
        np.column_stack([vecm.Gamma_plus[i][:, 0], vecm.Gamma_minus[i][:, 0], vecm.Gamma_plus[i][:, 1:]])
        for i in range(k - 1)
    ]  # (p, p+1) each; the x-blocks of the two regimes coincide

    balpha = np.zeros((rows, cols))
    balpha[:p, :r] = geo.alpha
    for i in range(1, k):
        c0 = r + (i - 1) * (p + 1)
        balpha[:p, c0 : c0 + p + 1] = Gammas[i - 1]
        r0 = p + (i - 1) * (p + 1)
        balpha[r0 : r0 + p + 1, c0 : c0 + p + 1] = np.eye(p + 1)

    def bbetaT(sign: int) -> np.ndarray:
        beta = geo.beta_plus if sign >= 0 else geo.beta_minus
        out = np.zeros((cols, rows))
        out[:r, :p] = beta.T
        r0 = r
        out[r0 : r0 + p + 1, :p] = _S_matrix(p, sign)
        out[r0 : r0 + p + 1, p : p + p + 1] = -np.eye(p + 1)
        for m in range(2, k):
            rr = slice(r + (m - 1) * (p + 1), r + m * (p + 1))
            c_prev = p + (m - 2) * (p + 1)
            out[rr, c_prev : c_prev + p + 1] = np.eye(p + 1)
            out[rr, c_prev + p + 1 : c_prev + 2 * (p + 1)] = -np.eye(p + 1)
        return out

    return balpha, bbetaT(+1).T, bbetaT(-1).T


def build_case2_set(vecm: VecmForm, tol: float = 1e-8) -> CompanionSet:
    """The two switching companion matrices ``I + bbeta(s)' balpha`` for s = +1, -1."""
    cls = classify_case(vecm, tol)
    if cls.pattern() is not Case.KINKED:
        raise CaseError("build_case2_set requires the case (ii) configuration")
    vecm = _ensure_two_lags(vecm)
    balpha, bbeta_p, bbeta_m = bold_pair_case2(vecm, tol)
    eye = np.eye(balpha.shape[1])
    A_plus = eye + bbeta_p.T @ balpha
    A_minus = eye + bbeta_m.T @ balpha
    if np.allclose(A_plus, A_minus, atol=1e-14 * max(1.0, np.abs(A_plus).max())):
        return CompanionSet((A_plus,), ("I+bbeta'balpha",))
    return CompanionSet((A_plus, A_minus), ("I+bbeta(+1)'balpha", "I+bbeta(-1)'balpha"))


# ---------------------------------------------------------------------------
# Assumption report
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AssumptionReport:
    """Outcome of the root, rank, span, and case-specific certificate checks."""

    dgp_ok: bool
    cvar_roots_ok: bool
    roots_plus: tuple[complex, ...]
    roots_minus: tuple[complex, ...]
    q_plus: int
    q_minus: int
    rank_counts_ok: bool
    deterministic_ok: bool
    classification: CaseClassification | None
    case_checks: dict = field(default_factory=dict)
    messages: tuple[str, ...] = ()

    @property
    def all_ok(self) -> bool:
        if not (self.dgp_ok and self.cvar_roots_ok and self.rank_counts_ok and self.deterministic_ok):
            return False
        return all(chk.get("passed", False) for chk in self.case_checks.values())

    def to_dict(self) -> dict:
        return {
            "dgp_ok": self.dgp_ok,
            "cvar_roots_ok": self.cvar_roots_ok,
            "roots_plus": [[z.real, z.imag] for z in self.roots_plus],
            "roots_minus": [[z.real, z.imag] for z in self.roots_minus],
            "q_plus": self.q_plus,
            "q_minus": self.q_minus,
            "rank_counts_ok": self.rank_counts_ok,
            "deterministic_ok": self.deterministic_ok,
            "classification": self.classification.to_dict() if self.classification else None,
            "case_checks": self.case_checks,
            "all_ok": self.all_ok,
            "messages": list(self.messages),
        }


def _root_status(roots: np.ndarray) -> tuple[int, bool, list[str]]:
    q = 0
    ok = True
    msgs = []
    for z in roots:
        if abs(z - 1.0) < UNIT_ROOT_WINDOW:
            q += 1
        elif abs(z) < 1.0 + UNIT_ROOT_WINDOW:
            ok = False
            msgs.append(f"root {z:.6g} lies inside or on the unit circle away from one")
    return q, ok, msgs


def verify_assumptions(
    model: CksvarModel | CanonicalModel,
    tol: float = 1e-8,
    depth: int = 12,
    budget: int = 10**6,
) -> AssumptionReport:
    """Run every verifiable regularity condition and report pass/fail per item.

    Structural input is transformed to canonical form first (failures of the
    uniqueness checks short-circuit the report).  The case-specific section
    contains the joint-spectral-radius certificate and the sign condition of
    the detected case; for the linear case the certificate degenerates to a
    single matrix.
    """
    messages: list[str] = []
    if isinstance(model, CksvarModel):
        rep = validate_dgp(model)
        if not rep.ok:
            return AssumptionReport(
                dgp_ok=False,
                cvar_roots_ok=False,
                roots_plus=(),
                roots_minus=(),
                q_plus=0,
                q_minus=0,
                rank_counts_ok=False,
                deterministic_ok=False,
                classification=None,
                messages=tuple(rep.messages),
            )
        canon = to_canonical(model)
    else:
        canon = model
    canon = CanonicalModel(canon.model.pad_to(2), canon.P, canon.Q)

    roots_p = det_poly_roots(canon, "+")
    roots_m = det_poly_roots(canon, "-")
    q_plus, ok_p, msg_p = _root_status(roots_p)
    q_minus, ok_m, msg_m = _root_status(roots_m)
    messages += msg_p + msg_m
    cvar_ok = ok_p and ok_m

    vecm = vecm_decompose(canon)
    cls = classify_case(vecm, tol)
    rank_ok = (q_plus == canon.p - cls.r_plus) and (q_minus == canon.p - cls.r_minus)
    if not rank_ok:
        messages.append(
            f"unit-root counts (q+={q_plus}, q-={q_minus}) disagree with ranks "
            f"(r+={cls.r_plus}, r-={cls.r_minus}, p={canon.p})"
        )
    det_ok = _in_span(vecm.c, vecm.Pi_plus_mat, tol) and _in_span(vecm.c, vecm.Pi_minus_mat, tol)
    if not det_ok:
        messages.append("intercept is not in the span of both long-run matrices")

    checks: dict[str, dict] = {}
    pattern = cls.pattern()
    if pattern is Case.REGULATED and cls.orientation == 1:
        try:
            F0 = build_F(vecm, 0.0, tol)
            F1 = build_F(vecm, 1.0, tol)
            est = jsr_bounds(CompanionSet((F0, F1), ("F0", "F1")), depth, budget)
            checks["co_i_jsr"] = {"passed": est.certified_lt_one, **est.to_dict()}
            _, kappa, kappa1 = projection_case1(vecm, tol)
            checks["co_i_kappa1"] = {"passed": bool(kappa1 < 0.0), "kappa1": kappa1, "kappa": kappa.tolist()}
        except Exception as exc:  # keep the report usable
            checks["co_i_error"] = {"passed": False, "error": str(exc)}
    elif pattern is Case.REGULATED:
        messages.append("mirrored case (i): certificates apply to the sign-flipped model")
        checks["co_i_orientation"] = {"passed": False, "orientation": cls.orientation}
    elif pattern is Case.KINKED:
        try:
            geo = kink_geometry(vecm, tol)
            checks["co_ii_det_sign"] = {"passed": True, "mu": geo.mu}
        except Exception as exc:
            checks["co_ii_det_sign"] = {"passed": False, "error": str(exc)}
            geo = None
        if geo is not None:
            est = jsr_bounds(build_case2_set(vecm, tol), depth, budget)
            checks["co_ii_jsr"] = {"passed": est.certified_lt_one, **est.to_dict()}
    elif pattern is Case.LINEAR_IN_NONLINEAR_VECM:
        messages.append("case (iii) detected: classified only, no certificates are built")
    else:
        messages.append("no case-specific certificates apply to this configuration")

    return AssumptionReport(
        dgp_ok=True,
        cvar_roots_ok=cvar_ok,
        roots_plus=tuple(complex(z) for z in roots_p),
        roots_minus=tuple(complex(z) for z in roots_m),
        q_plus=q_plus,
        q_minus=q_minus,
        rank_counts_ok=bool(rank_ok),
        deterministic_ok=bool(det_ok),
        classification=cls,
        case_checks=checks,
        messages=tuple(messages),
    )
