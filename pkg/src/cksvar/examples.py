"""Built-in model fixtures.

Three stylised systems used throughout the test harness:

* ``natrate_1a``: a two-variable policy system where the natural real rate
  follows an AR(1); with a unit root in the rate it produces kinked
  cointegration between the policy stance and inflation.
* ``infltarget_1b``: the companion system with a drifting inflation target;
  feedback from inflation gaps (``delta < 0``) produces the regulated
  configuration, no feedback (``delta = 0``) the kinked one.
* ``univariate_tobit``: the scalar two-regime autoregression; with a unit
  root in the upper regime and a stable lower regime it is the canonical
  regulated example.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import CksvarError
from .model import CksvarModel

__all__ = ["ExampleFixture", "EXAMPLES", "build_example", "list_examples"]


class ExampleParamError(CksvarError):
    """A fixture parameter is outside its documented range."""


def _require(cond: bool, constraint: str):
    if not cond:
        raise ExampleParamError(f"parameter constraint violated: {constraint}")


def natrate_1a(
    chi: float = 0.3,
    psi: float = 0.9,
    gamma: float = 1.5,
    theta: float = -0.5,
    mu: float = 0.5,
    sigma_eta: float = 1.0,
    sigma_eps: float = 1.0,
) -> CksvarModel:
    """Policy stance and inflation with an AR(1) natural rate.

    System for (i, pi) with i the threshold variable:

        [1, 1, -gamma; 0, theta(1-mu), 1-theta*gamma] (i+, i-, pi)'
            = [psi, psi, -psi*gamma; 0, 0, chi] (lags)' + (eta, eps)'
    """
    _require(gamma > 0, "gamma > 0")
    _require(theta < 0, "theta < 0")
    _require(0 <= chi < 1, "chi in [0, 1)")
    _require(0 <= mu <= 1, "mu in [0, 1]")
    _require(-1 < psi <= 1, "psi in (-1, 1]")
    _require(sigma_eta > 0 and sigma_eps > 0, "sigma_eta, sigma_eps > 0")
    return CksvarModel(
        p=2,
        k=1,
        b=0.0,
        c=[0.0, 0.0],
        phi0_plus=[1.0, 0.0],
        phi0_minus=[1.0, theta * (1.0 - mu)],
        Phi0_x=[[-gamma], [1.0 - theta * gamma]],
        phi_plus=[[psi, 0.0]],
        phi_minus=[[psi, 0.0]],
        Phi_x=[[[-psi * gamma], [chi]]],
        Sigma=np.diag([sigma_eta**2, sigma_eps**2]),
    )


def infltarget_1b(
    delta: float = -0.2,
    mu: float = 0.5,
    gamma: float = 1.5,
    theta: float = -0.5,
    sigma_eta: float = 1.0,
    sigma_eps: float = 1.0,
) -> CksvarModel:
    """Policy stance and inflation with a drifting inflation target.

    Writing ``phi1 = 1 - theta*gamma`` and ``phi_mu = (1 - mu*theta*gamma) -
    theta*(1 - mu)``, the system for (i, pi) is

        [-1, -1, gamma; phi1, phi_mu, -phi1] (i+, i-, pi)'
            = [delta-1, delta-1, gamma-delta; 0, 0, 0] (lags)'
              + (gamma-1) (eta, eps)'

    so the innovation variance is ``(gamma-1)^2 diag(sigma_eta^2, sigma_eps^2)``.
    """
    _require(gamma > 1, "gamma > 1")
    _require(theta < 0, "theta < 0")
    _require(0 <= mu <= 1, "mu in [0, 1]")
    _require(-1 < delta <= 0, "delta in (-1, 0]")
    _require(sigma_eta > 0 and sigma_eps > 0, "sigma_eta, sigma_eps > 0")
    phi1 = 1.0 - theta * gamma
    phi_mu = (1.0 - mu * theta * gamma) - theta * (1.0 - mu)
    scale = (gamma - 1.0) ** 2
    return CksvarModel(
        p=2,
        k=1,
        b=0.0,
        c=[0.0, 0.0],
        phi0_plus=[-1.0, phi1],
        phi0_minus=[-1.0, phi_mu],
        Phi0_x=[[gamma], [-phi1]],
        phi_plus=[[delta - 1.0, 0.0]],
        phi_minus=[[delta - 1.0, 0.0]],
        Phi_x=[[[gamma - delta], [0.0]]],
        Sigma=scale * np.diag([sigma_eta**2, sigma_eps**2]),
    )


def univariate_tobit(
    phi_plus: tuple[float, ...] = (1.0,),
    phi_minus: tuple[float, ...] = (0.5,),
    c: float = 0.0,
    sigma: float = 1.0,
) -> CksvarModel:
    """Scalar two-regime autoregression ``y = c + sum(phi_i^+ y+ + phi_i^- y-) + u``."""
    phi_plus = tuple(float(v) for v in np.atleast_1d(phi_plus))
    phi_minus = tuple(float(v) for v in np.atleast_1d(phi_minus))
    _require(len(phi_plus) == len(phi_minus) and len(phi_plus) >= 1, "equal positive lag lengths")
    _require(sigma > 0, "sigma > 0")
    k = len(phi_plus)
    return CksvarModel(
        p=1,
        k=k,
        b=0.0,
        c=[c],
        phi0_plus=[1.0],
        phi0_minus=[1.0],
        Phi0_x=np.zeros((1, 0)),
        phi_plus=np.array(phi_plus).reshape(k, 1),
        phi_minus=np.array(phi_minus).reshape(k, 1),
        Phi_x=np.zeros((k, 1, 0)),
        Sigma=[[sigma**2]],
    )


@dataclass(frozen=True)
class ExampleFixture:
    name: str
    builder: Callable[..., CksvarModel]
    defaults: dict
    ranges: dict
    description: str

    def build(self, **params) -> CksvarModel:
        unknown = set(params) - set(self.defaults)
        if unknown:
            raise ExampleParamError(f"unknown parameters for {self.name}: {sorted(unknown)}")
        return self.builder(**{**self.defaults, **params})


EXAMPLES: dict[str, ExampleFixture] = {
    "natrate_1a": ExampleFixture(
        name="natrate_1a",
        builder=natrate_1a,
        defaults=dict(chi=0.3, psi=0.9, gamma=1.5, theta=-0.5, mu=0.5, sigma_eta=1.0, sigma_eps=1.0),
        ranges={
            "chi": "[0, 1)",
            "psi": "(-1, 1]",
            "gamma": "(0, inf)",
            "theta": "(-inf, 0)",
            "mu": "[0, 1]",
            "sigma_eta": "(0, inf)",
            "sigma_eps": "(0, inf)",
        },
        description="policy stance and inflation, AR(1) natural rate",
    ),
    "infltarget_1b": ExampleFixture(
        name="infltarget_1b",
        builder=infltarget_1b,
        defaults=dict(delta=-0.2, mu=0.5, gamma=1.5, theta=-0.5, sigma_eta=1.0, sigma_eps=1.0),
        ranges={
            "delta": "(-1, 0]",
            "mu": "[0, 1]",
            "gamma": "(1, inf)",
            "theta": "(-inf, 0)",
            "sigma_eta": "(0, inf)",
            "sigma_eps": "(0, inf)",
        },
        description="policy stance and inflation, drifting inflation target",
    ),
    "univariate_tobit": ExampleFixture(
        name="univariate_tobit",
        builder=univariate_tobit,
        defaults=dict(phi_plus=(1.0,), phi_minus=(0.5,), c=0.0, sigma=1.0),
        ranges={
            "phi_plus": "tuple, len k",
            "phi_minus": "tuple, len k",
            "c": "(-inf, inf)",
            "sigma": "(0, inf)",
        },
        description="scalar two-regime autoregression",
    ),
}


def build_example(name: str, **params) -> CksvarModel:
    """Construct a registered fixture, validating parameter ranges."""
    if name not in EXAMPLES:
        raise ExampleParamError(f"unknown example {name!r}; known: {sorted(EXAMPLES)}")
    return EXAMPLES[name].build(**params)


def list_examples() -> list[dict]:
    return [
        {"name": f.name, "description": f.description, "defaults": f.defaults, "ranges": f.ranges}
        for f in EXAMPLES.values()
    ]
