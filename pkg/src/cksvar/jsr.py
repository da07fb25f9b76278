"""Joint spectral radius bounds by product enumeration.

The joint spectral radius of a finite matrix set is the maximal asymptotic
growth rate over arbitrary products.  Two-sided bounds come from

* lower: ``rho(B)^(1/t)`` over every examined product ``B`` of length ``t``;
* upper: for each length ``t``, the maximum norm rate ``||B||^(1/t)`` over
  the products still alive at that level, clamped from below by the running
  lower bound.

A branch whose norm rate has fallen to (or below) the running lower bound is
pruned: any long product can be chopped into pruned prefixes and surviving
level-``t`` blocks, each certifying a growth rate no larger than
``max(lower, level max)``, so the level bound stays valid.  Norm rates are
evaluated under a small family of similarity scalings (identity plus
triangularising transforms of each member), which keeps the upper bound tight
for defective matrices; any fixed similarity yields a valid submultiplicative
norm, so the minimum over the family is safe.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

__all__ = ["CompanionSet", "JsrEstimate", "jsr_bounds"]


@dataclass(frozen=True)
class CompanionSet:
    """A finite set of equally sized square matrices with provenance labels."""

    matrices: tuple[np.ndarray, ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        mats = tuple(np.atleast_2d(np.asarray(m, dtype=float)) for m in self.matrices)
        if not mats:
            raise ValueError("CompanionSet needs at least one matrix")
        dim = mats[0].shape[0]
        for m in mats:
            if m.shape != (dim, dim):
                raise ValueError(f"all matrices must be square of equal dimension, got {m.shape}")
        labels = self.labels or tuple(f"A{i}" for i in range(len(mats)))
        if len(labels) != len(mats):
            raise ValueError("labels must match matrices one to one")
        object.__setattr__(self, "matrices", mats)
        object.__setattr__(self, "labels", tuple(labels))

    @property
    def dim(self) -> int:
        return self.matrices[0].shape[0]


@dataclass(frozen=True)
class JsrEstimate:
    lower: float
    upper: float
    depth: int
    certified_lt_one: bool
    truncated: bool = False

    def to_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "depth": self.depth,
            "certified_lt_one": self.certified_lt_one,
            "truncated": self.truncated,
        }


def _spectral_radius(M: np.ndarray) -> float:
    return float(np.abs(np.linalg.eigvals(M)).max())


def _scaling_candidates(mats: tuple[np.ndarray, ...]) -> list[np.ndarray | None]:
    """Similarity transforms to try: identity plus scaled Schur bases of each member."""
    cands: list[np.ndarray | None] = [None]
    dim = mats[0].shape[0]
    if dim == 1:
        return cands
    powers = np.arange(dim, dtype=float)
    for M in mats[:3]:
        try:
            _, Z = scipy.linalg.schur(M, output="complex")
        except Exception:  # pragma: no cover
            continue
        for delta in (1e-2, 1e-5):
            cands.append(Z @ np.diag(delta**powers))
    return cands


def _one_pass(
    mats: tuple[np.ndarray, ...],
    S: np.ndarray | None,
    depth: int,
    budget: int,
) -> tuple[float, np.ndarray, bool]:
    """Run the level-by-level enumeration under one similarity scaling.

    Returns (lower, per-level upper bounds, truncated).  Level bounds for
    levels the budget did not finish are reported as +inf.
    """
    if S is not None:
        S_inv = np.linalg.inv(S)
        work = tuple(S_inv @ m.astype(complex) @ S for m in mats)
    else:
        work = mats

    lower = 0.0
    uppers = np.full(depth, np.inf)
    count = 0
    truncated = False

    level = []
    for W in work:
        count += 1
        lower = max(lower, _spectral_radius(W))
    level_norms = [np.linalg.norm(W, 2) for W in work]
    uppers[0] = max(max(level_norms), lower)
    level = [W for W, nrm in zip(work, level_norms) if nrm > lower]

    for t in range(2, depth + 1):
        if not level:
            uppers[t - 1] = lower
            uppers[t:] = lower
            break
        new_level = []
        level_max = 0.0
        for B in level:
            for W in work:
                if count >= budget:
                    truncated = True
                    break
                count += 1
                C = B @ W
                rate = _spectral_radius(C) ** (1.0 / t)
                if rate > lower:
                    lower = rate
                norm_rate = np.linalg.norm(C, 2) ** (1.0 / t)
                level_max = max(level_max, norm_rate)
                if norm_rate > lower:
                    new_level.append(C)
            if truncated:
                break
        if truncated:
            break
        uppers[t - 1] = max(level_max, lower)
        level = new_level

    return lower, uppers, truncated


def jsr_bounds(cset: CompanionSet, depth: int = 12, budget: int = 10**6) -> JsrEstimate:
    """Two-sided joint-spectral-radius bounds for a matrix set.

    Parameters
    ----------
    cset : CompanionSet
        Matrices to bound.
    depth : int
        Maximum product length explored (>= 1).
    budget : int
        Cap on the number of matrix products formed per scaling pass; when
        exhausted the best bounds found so far are returned with
        ``truncated=True`` (certification may then fail).

    Both bounds are monotone in ``depth`` as long as the budget is not hit:
    the lower bound can only grow with more products, the upper bound is a
    running minimum over levels and scalings.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    mats = cset.matrices
    lower = 0.0
    upper = np.inf
    truncated = False
    for S in _scaling_candidates(mats):
        lo, uppers, trunc = _one_pass(mats, S, depth, budget)
        lower = max(lower, lo)
        upper = min(upper, float(np.min(uppers)))
        truncated = truncated or trunc
    upper = max(upper, lower)  # the true value is >= lower, so this loses nothing
    return JsrEstimate(
        lower=float(lower),
        upper=float(upper),
        depth=depth,
        certified_lt_one=bool(upper < 1.0 and not truncated),
        truncated=truncated,
    )
