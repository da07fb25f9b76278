"""Core model parameterisation and the structural-to-canonical transform.

A model couples one threshold variable ``y`` (entering through its parts
above/below a threshold ``b``) with ``p - 1`` linear variables ``x``:

    phi0p * y(t)+ + phi0m * y(t)- + Phi0x @ x(t)
        = c + sum_i [ phip[i] * y(t-i)+ + phim[i] * y(t-i)- + Phix[i] @ x(t-i) ] + u(t)

with ``y+ = max(y, b)`` and ``y- = min(y, b)``.  The canonical form
normalises the contemporaneous matrix to ``[[1, 1, 0], [0, 0, I]]`` so that
the left-hand side collapses to ``(y, x)`` when ``b = 0``.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, replace

import numpy as np

from .errors import DgpError, DimensionMismatchError, ModelFileError

__all__ = [
    "CksvarModel",
    "CanonicalModel",
    "DgpReport",
    "istar",
    "split",
    "validate_dgp",
    "threshold_shift",
    "to_canonical",
    "flip_y",
    "save_model",
    "load_model",
]

#: Relative condition-number ceiling beyond which the x-block of the
#: contemporaneous matrix is treated as numerically singular.
COND_LIMIT = 1e10


def istar(p: int) -> np.ndarray:
    """Canonical contemporaneous matrix ``[[1, 1, 0], [0, 0, I_{p-1}]]`` of shape (p, p+1)."""
    out = np.zeros((p, p + 1))
    out[0, 0] = 1.0
    out[0, 1] = 1.0
    out[1:, 2:] = np.eye(p - 1)
    return out


def split(y):
    """Split ``y`` into its positive and negative parts (threshold 0).

    Returns ``(max(y, 0), min(y, 0))``; the parts always sum back to ``y``.
    Accepts scalars or arrays.
    """
    y = np.asarray(y, dtype=float)
    y_plus = np.maximum(y, 0.0)
    y_minus = np.minimum(y, 0.0)
    if y.ndim == 0:
        return float(y_plus), float(y_minus)
    return y_plus, y_minus


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class CksvarModel:
    """Structural parameterisation.

    Parameters
    ----------
    p : int
        System dimension (>= 1); the first variable is the threshold variable.
    k : int
        Lag order (>= 1).
    b : float
        Threshold.  All analysis modules require ``b = 0``; use
        :func:`threshold_shift` to renormalise.
    c : ndarray, shape (p,)
        Intercept.
    phi0_plus, phi0_minus : ndarray, shape (p,)
        Contemporaneous loadings on ``y+`` and ``y-``.
    Phi0_x : ndarray, shape (p, p-1)
        Contemporaneous loadings on ``x``.
    phi_plus, phi_minus : ndarray, shape (k, p)
        Lag-i loadings on ``y(t-i)+`` / ``y(t-i)-``, i = 1..k.
    Phi_x : ndarray, shape (k, p, p-1)
        Lag-i loadings on ``x(t-i)``.
    Sigma : ndarray, shape (p, p)
        Innovation variance; must be symmetric positive definite.
    """

    p: int
    k: int
    b: float
    c: np.ndarray
    phi0_plus: np.ndarray
    phi0_minus: np.ndarray
    Phi0_x: np.ndarray
    phi_plus: np.ndarray
    phi_minus: np.ndarray
    Phi_x: np.ndarray
    Sigma: np.ndarray

    def __post_init__(self):
        p, k = self.p, self.k
        if p < 1 or k < 1:
            raise DimensionMismatchError(f"need p >= 1 and k >= 1, got p={p}, k={k}")
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "c", _freeze(np.reshape(self.c, (p,))))
        for name in ("phi0_plus", "phi0_minus"):
            object.__setattr__(self, name, _freeze(np.reshape(getattr(self, name), (p,))))
        try:
            object.__setattr__(self, "Phi0_x", _freeze(np.reshape(self.Phi0_x, (p, p - 1))))
            object.__setattr__(self, "phi_plus", _freeze(np.reshape(self.phi_plus, (k, p))))
            object.__setattr__(self, "phi_minus", _freeze(np.reshape(self.phi_minus, (k, p))))
            object.__setattr__(self, "Phi_x", _freeze(np.reshape(self.Phi_x, (k, p, p - 1))))
        except ValueError as exc:
            raise DimensionMismatchError(str(exc)) from exc
        Sigma = np.reshape(np.atleast_2d(np.asarray(self.Sigma, dtype=float)), (p, p))
        if not np.allclose(Sigma, Sigma.T, atol=1e-12 * max(1.0, np.abs(Sigma).max())):
            raise DimensionMismatchError("Sigma must be symmetric")
        try:
            np.linalg.cholesky(Sigma)
        except np.linalg.LinAlgError as exc:
            raise DimensionMismatchError("Sigma must be positive definite") from exc
        object.__setattr__(self, "Sigma", _freeze(Sigma))

    # -- block accessors -------------------------------------------------

    @property
    def Phi0(self) -> np.ndarray:
        """Contemporaneous matrix ``[phi0+, phi0-, Phi0x]`` of shape (p, p+1)."""
        return np.column_stack([self.phi0_plus, self.phi0_minus, self.Phi0_x])

    @property
    def Phi0_plus_mat(self) -> np.ndarray:
        """(p, p) matrix ``[phi0+, Phi0x]``."""
        return np.column_stack([self.phi0_plus, self.Phi0_x])

    @property
    def Phi0_minus_mat(self) -> np.ndarray:
        """(p, p) matrix ``[phi0-, Phi0x]``."""
        return np.column_stack([self.phi0_minus, self.Phi0_x])

    def lag(self, i: int) -> np.ndarray:
        """Lag-i coefficient block ``[phi_i+, phi_i-, Phi_i^x]`` (p, p+1), i = 1..k."""
        j = i - 1
        return np.column_stack([self.phi_plus[j], self.phi_minus[j], self.Phi_x[j]])

    def phi_mat(self, i: int, regime: str) -> np.ndarray:
        """(p, p) lag-i matrix ``[phi_i^r, Phi_i^x]`` for regime ``'+'`` or ``'-'``."""
        j = i - 1
        col = self.phi_plus[j] if regime == "+" else self.phi_minus[j]
        return np.column_stack([col, self.Phi_x[j]])

    def poly_at(self, lam: float, regime: str) -> np.ndarray:
        """Autoregressive polynomial ``Phi^r(lam) = Phi0^r - sum_i Phi_i^r lam^i``."""
        out = self.Phi0_plus_mat if regime == "+" else self.Phi0_minus_mat
        out = out.copy()
        for i in range(1, self.k + 1):
            out -= self.phi_mat(i, regime) * lam**i
        return out

    def is_canonical(self, tol: float = 1e-12) -> bool:
        return bool(np.allclose(self.Phi0, istar(self.p), atol=tol))

    def pad_to(self, k_new: int) -> "CksvarModel":
        """Zero-pad the lag order up to ``k_new`` (no-op if already >= k_new)."""
        if k_new <= self.k:
            return self
        extra = k_new - self.k
        return replace(
            self,
            k=k_new,
            phi_plus=np.vstack([self.phi_plus, np.zeros((extra, self.p))]),
            phi_minus=np.vstack([self.phi_minus, np.zeros((extra, self.p))]),
            Phi_x=np.concatenate([self.Phi_x, np.zeros((extra, self.p, self.p - 1))]),
        )


@dataclass(frozen=True)
class DgpReport:
    """Outcome of the coherence and sign-normalisation checks."""

    coherent: bool
    wlog_signs_ok: bool
    det_plus: float
    det_minus: float
    messages: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.coherent and self.wlog_signs_ok

    def to_dict(self) -> dict:
        return {
            "coherent": self.coherent,
            "wlog_signs_ok": self.wlog_signs_ok,
            "det_plus": self.det_plus,
            "det_minus": self.det_minus,
            "ok": self.ok,
            "messages": list(self.messages),
        }


def validate_dgp(model: CksvarModel) -> DgpReport:
    """Check that the simultaneous system has a unique solution for every shock.

    Two conditions are verified:

    * coherence: ``sign(det[phi0+, Phi0x]) == sign(det[phi0-, Phi0x]) != 0``;
    * sign normalisation: the x-block ``Phi0_xx`` is invertible and the two
      Schur complements ``phi0_yy^r - phi0_yx' Phi0_xx^{-1} phi0_xy^r`` share
      a strictly positive sign.

    A singular or badly conditioned ``Phi0_xx`` is reported as a failed sign
    check, not raised.
    """
    msgs: list[str] = []
    det_p = float(np.linalg.det(model.Phi0_plus_mat))
    det_m = float(np.linalg.det(model.Phi0_minus_mat))
    scale = max(1.0, np.abs(model.Phi0).max()) ** model.p
    coherent = abs(det_p) > 1e-14 * scale and abs(det_m) > 1e-14 * scale and np.sign(det_p) == np.sign(det_m)
    if not coherent:
        msgs.append(
            f"coherence fails: det[phi0+, Phi0x] = {det_p:.6g}, det[phi0-, Phi0x] = {det_m:.6g} "
            "must be nonzero with equal signs"
        )

    wlog_ok = True
    if model.p == 1:
        sp = float(model.phi0_plus[0])
        sm = float(model.phi0_minus[0])
        if not (sp > 0 and sm > 0):
            wlog_ok = False
            msgs.append(f"sign normalisation fails: phi0_yy+ = {sp:.6g}, phi0_yy- = {sm:.6g} must be > 0")
    else:
        Phi0_xx = model.Phi0_x[1:, :]
        sv = np.linalg.svd(Phi0_xx, compute_uv=False)
        if sv.size == 0 or sv[-1] <= 0 or sv[0] / sv[-1] > COND_LIMIT:
            wlog_ok = False
            msgs.append("sign normalisation fails: Phi0_xx is singular or badly conditioned")
        else:
            phi0_yx = model.Phi0_x[0, :]
            w = np.linalg.solve(Phi0_xx.T, phi0_yx)  # w' = phi0_yx' Phi0_xx^{-1}
            sp = float(model.phi0_plus[0] - w @ model.phi0_plus[1:])
            sm = float(model.phi0_minus[0] - w @ model.phi0_minus[1:])
            if not (sp > 0 and sm > 0):
                wlog_ok = False
                msgs.append(
                    f"sign normalisation fails: Schur complements {sp:.6g} (plus), {sm:.6g} (minus) must be > 0"
                )
    return DgpReport(bool(coherent), bool(wlog_ok), det_p, det_m, tuple(msgs))


def threshold_shift(model: CksvarModel) -> CksvarModel:
    """Renormalise the threshold to zero.

    The intercept moves to ``c - [phi+(1) + phi-(1)] * b`` and paths of the
    output model equal paths of the input with ``b`` subtracted from ``y``.
    """
    if model.b == 0.0:
        return model
    phi_plus_1 = model.phi0_plus - model.phi_plus.sum(axis=0)
    phi_minus_1 = model.phi0_minus - model.phi_minus.sum(axis=0)
    c_b = model.c - (phi_plus_1 + phi_minus_1) * model.b
    return replace(model, b=0.0, c=c_b)


@dataclass(frozen=True)
class CanonicalModel:
    """A model in canonical form together with the transform that produced it.

    ``P`` mixes the stacked variables: ``(y+, y-, x) = P @ (y+~, y-~, x~)``,
    and ``Q`` premultiplies the equations, so coefficient blocks map as
    ``tilde_block_i = Q @ block_i @ P`` and innovations as ``u~ = Q u``.
    """

    model: CksvarModel
    P: np.ndarray
    Q: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "P", _freeze(np.reshape(self.P, (self.model.p + 1, self.model.p + 1))))
        object.__setattr__(self, "Q", _freeze(np.reshape(self.Q, (self.model.p, self.model.p))))
        if not self.model.is_canonical(tol=1e-9):
            raise DgpError("CanonicalModel requires Phi0 equal to the canonical matrix")

    @property
    def p(self) -> int:
        return self.model.p

    @property
    def k(self) -> int:
        return self.model.k

    @property
    def P_inv(self) -> np.ndarray:
        return np.linalg.inv(self.P)


def to_canonical(model: CksvarModel | CanonicalModel) -> CanonicalModel:
    """Transform a structural model into canonical form.

    Rejects models failing :func:`validate_dgp` (naming the failed check) and
    renormalises a nonzero threshold first.  The transformed contemporaneous
    matrix is the canonical matrix exactly; lag blocks, intercept, and
    variance map through ``Q . P``, ``Q c`` and ``Q Sigma Q'``.
    """
    if isinstance(model, CanonicalModel):
        return model
    model = threshold_shift(model)
    report = validate_dgp(model)
    if not report.ok:
        raise DgpError("; ".join(report.messages) or "model fails uniqueness checks")

    p = model.p
    if p == 1:
        tilde_p = float(model.phi0_plus[0])
        tilde_m = float(model.phi0_minus[0])
        P_inv = np.diag([tilde_p, tilde_m])
        Q = np.eye(1)
    else:
        Phi0_xx = model.Phi0_x[1:, :]
        phi0_yx = model.Phi0_x[0, :]
        w = np.linalg.solve(Phi0_xx.T, phi0_yx)
        tilde_p = float(model.phi0_plus[0] - w @ model.phi0_plus[1:])
        tilde_m = float(model.phi0_minus[0] - w @ model.phi0_minus[1:])
        P_inv = np.zeros((p + 1, p + 1))
        P_inv[0, 0] = tilde_p
        P_inv[1, 1] = tilde_m
        P_inv[2:, 0] = model.phi0_plus[1:]
        P_inv[2:, 1] = model.phi0_minus[1:]
        P_inv[2:, 2:] = Phi0_xx
        Q = np.eye(p)
        Q[0, 1:] = -w
    P = np.linalg.inv(P_inv)

    # Internal consistency: Q Phi0 P must reproduce the canonical matrix.
    target = istar(p)
    got = Q @ model.Phi0 @ P
    if not np.allclose(got, target, atol=1e-9 * max(1.0, np.abs(got).max())):
        raise DgpError("canonical transform failed to normalise Phi0 (ill-conditioned model)")

    lags = [Q @ model.lag(i) @ P for i in range(1, model.k + 1)]
    new = CksvarModel(
        p=p,
        k=model.k,
        b=0.0,
        c=Q @ model.c,
        phi0_plus=target[:, 0],
        phi0_minus=target[:, 1],
        Phi0_x=target[:, 2:],
        phi_plus=np.stack([m[:, 0] for m in lags]),
        phi_minus=np.stack([m[:, 1] for m in lags]),
        Phi_x=np.stack([m[:, 2:] for m in lags]),
        Sigma=Q @ model.Sigma @ Q.T,
    )
    return CanonicalModel(model=new, P=P, Q=Q)


def flip_y(model: CksvarModel) -> CksvarModel:
    """Mirror the threshold variable: ``y -> -y`` with the first equation negated.

    Useful for bringing the mirrored rank configuration into the standard
    orientation.  Requires ``b = 0``.
    """
    if model.b != 0.0:
        raise DgpError("flip_y requires b = 0; apply threshold_shift first")
    R = np.eye(model.p)
    R[0, 0] = -1.0
    return CksvarModel(
        p=model.p,
        k=model.k,
        b=0.0,
        c=R @ model.c,
        phi0_plus=R @ (-model.phi0_minus),
        phi0_minus=R @ (-model.phi0_plus),
        Phi0_x=R @ model.Phi0_x,
        phi_plus=(R @ (-model.phi_minus).T).T,
        phi_minus=(R @ (-model.phi_plus).T).T,
        Phi_x=np.stack([R @ model.Phi_x[i] for i in range(model.k)]),
        Sigma=R @ model.Sigma @ R.T,
    )


# ---------------------------------------------------------------------------
# Model files (JSON, row-major matrices)
# ---------------------------------------------------------------------------


def _check_rect(name: str, data, shape: tuple[int, ...]):
    """Convert a nested list to an array of exactly `shape`, rejecting ragged input."""
    def walk(node, dims):
        if not dims:
            if isinstance(node, (list, tuple)):
                raise ModelFileError(f"{name}: too many nesting levels")
            return
        if not isinstance(node, (list, tuple)) or len(node) != dims[0]:
            raise ModelFileError(f"{name}: expected a list of length {dims[0]}, got {node!r}")
        for child in node:
            walk(child, dims[1:])

    walk(data, list(shape))
    try:
        return np.array(data, dtype=float).reshape(shape)
    except (TypeError, ValueError) as exc:
        raise ModelFileError(f"{name}: non-numeric entry ({exc})") from exc


def model_to_dict(model: CksvarModel) -> dict:
    return {
        "p": model.p,
        "k": model.k,
        "b": model.b,
        "c": model.c.tolist(),
        "phi0_plus": model.phi0_plus.tolist(),
        "phi0_minus": model.phi0_minus.tolist(),
        "Phi0_x": model.Phi0_x.tolist(),
        "phi_plus": model.phi_plus.tolist(),
        "phi_minus": model.phi_minus.tolist(),
        "Phi_x": model.Phi_x.tolist(),
        "Sigma": model.Sigma.tolist(),
    }


def model_from_dict(data: dict) -> CksvarModel:
    try:
        p = int(data["p"])
        k = int(data["k"])
    except KeyError as exc:
        raise ModelFileError(f"missing key: {exc.args[0]}") from exc
    if p < 1 or k < 1:
        raise ModelFileError(f"need p >= 1 and k >= 1, got p={p}, k={k}")
    b = float(data.get("b", 0.0))
    try:
        c = _check_rect("c", data["c"], (p,))
        phi0_plus = _check_rect("phi0_plus", data["phi0_plus"], (p,))
        phi0_minus = _check_rect("phi0_minus", data["phi0_minus"], (p,))
        Phi0_x = _check_rect("Phi0_x", data["Phi0_x"], (p, p - 1))
        phi_plus = _check_rect("phi_plus", data["phi_plus"], (k, p))
        phi_minus = _check_rect("phi_minus", data["phi_minus"], (k, p))
        Phi_x = _check_rect("Phi_x", data["Phi_x"], (k, p, p - 1))
        Sigma = _check_rect("Sigma", data["Sigma"], (p, p))
    except KeyError as exc:
        raise ModelFileError(f"missing key: {exc.args[0]}") from exc
    try:
        return CksvarModel(p, k, b, c, phi0_plus, phi0_minus, Phi0_x, phi_plus, phi_minus, Phi_x, Sigma)
    except DimensionMismatchError as exc:
        raise ModelFileError(str(exc)) from exc


def save_model(model: CksvarModel, path: str | os.PathLike) -> None:
    tmp = f"{path}.tmp{os.getpid()}"
    with open(tmp, "w") as fh:
        json.dump(model_to_dict(model), fh, indent=2)
        fh.write("\n")
    os.replace(tmp, path)


def load_model(path: str | os.PathLike) -> CksvarModel:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ModelFileError(f"{path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ModelFileError(f"{path}: expected a JSON object at top level")
    return model_from_dict(data)
