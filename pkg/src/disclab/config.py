"""Tunable constants and run configuration.

The switching machinery depends on several threshold constants that the
underlying arguments only require to be "small enough"; they live here with
documented defaults so every threshold inequality is explicit and
overridable.  All are exact rationals.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .graphcore import ParameterError


def _frac(s) -> Fraction:
    if isinstance(s, Fraction):
        return s
    if isinstance(s, int):
        return Fraction(s)
    return Fraction(str(s))


@dataclass(frozen=True)
class Config:
    """Constants record + run parameters.

    beta:   host-pair degree-closeness slack (|d_Y(x) - d_Y(x')| <= beta*n).
    delta:  max-degree threshold separating the single-pair and greedy
            switching routes (Delta >= delta*n -> single pair).
    rho_switch: per-pair success constant; a switch pair counts as good when
            its gain D_i reaches 0.1*rho_switch*sqrt(d_i).
    gamma:  host-bisection bias threshold (|cut - |X||Y|/2| >= gamma*n^2
            routes to the cut embedder).
    """

    beta: Fraction = Fraction(1, 1000)
    delta: Fraction = Fraction(1, 20)
    rho_switch: Fraction = Fraction(1, 100)
    gamma: Fraction = Fraction(1, 10000)
    trials: int = 64
    budget: int = 10_000
    oracle_cap: int = 9
    factor_cap: int = 12
    bisect_cap: int = 30
    disc_cap: int = 24
    base_seed: int = 0
    output: str = "json"
    fm_budget: int = 1_000_000
    clique_multiple: int = 4

    def __post_init__(self):
        for name in ("beta", "delta", "rho_switch", "gamma"):
            v = getattr(self, name)
            if not (0 < v < 1):
                raise ParameterError(f"{name} must lie in (0,1)")

    def to_obj(self) -> dict:
        return {
            "beta": str(self.beta), "delta": str(self.delta),
            "rho_switch": str(self.rho_switch), "gamma": str(self.gamma),
            "trials": self.trials, "budget": self.budget,
            "oracle_cap": self.oracle_cap, "factor_cap": self.factor_cap,
            "bisect_cap": self.bisect_cap, "disc_cap": self.disc_cap,
            "base_seed": self.base_seed, "output": self.output,
            "fm_budget": self.fm_budget, "clique_multiple": self.clique_multiple,
        }

    @staticmethod
    def from_obj(obj: dict) -> "Config":
        kwargs = {}
        for key in ("beta", "delta", "rho_switch", "gamma"):
            if key in obj:
                kwargs[key] = _frac(obj[key])
        for key in ("trials", "budget", "oracle_cap", "factor_cap", "bisect_cap",
                    "disc_cap", "base_seed", "fm_budget", "clique_multiple"):
            if key in obj:
                kwargs[key] = int(obj[key])
        if "output" in obj:
            kwargs["output"] = str(obj["output"])
        return Config(**kwargs)

    def with_(self, **kwargs) -> "Config":
        return replace(self, **kwargs)

    def digest(self) -> str:
        blob = json.dumps(self.to_obj(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


DEFAULT_CONFIG = Config()
