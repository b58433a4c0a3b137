"""Verification reports, convergence tables and the stiffness rules k(Lambda)."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

K_RULES = ("fixed", "lambda2", "prop33", "prop43")


class ConsistencyWarning(UserWarning):
    """A soft precondition (cutoff bound, convergence hypothesis) is violated."""


def k_lambda2(lam: int) -> float:
    return float(lam**2 * (lam + 1) ** 2)


def k_prop33(lam: int) -> float:
    """Smallest stiffness for which strong convergence on the circle is guaranteed."""
    return float(2 * lam * (lam + 1) * (2 * lam + 1) ** 2)


def k_prop43(lam: int) -> float:
    """Smallest stiffness for which strong convergence on the sphere is guaranteed."""
    return float(2 ** (3 * lam + 3) * lam ** (lam + 5) * (lam + 1))


def k_circle_default(lam: int) -> float:
    return max(k_lambda2(lam), k_prop33(lam))


def resolve_k(rule: str, lam: int, k: float | None = None) -> float:
    if rule == "fixed":
        if k is None or not k > 0:
            raise ValueError("k_rule 'fixed' needs a positive k")
        return float(k)
    table = {"lambda2": k_lambda2, "prop33": k_prop33, "prop43": k_prop43}
    try:
        return table[rule](lam)
    except KeyError:
        raise ValueError(f"unknown k_rule {rule!r}; expected one of {K_RULES}") from None


def warn_if(condition: bool, message: str) -> None:
    if condition:
        warnings.warn(message, ConsistencyWarning, stacklevel=3)


@dataclass
class Check:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.residual) and self.residual <= self.tolerance)

    def to_dict(self) -> dict:
        return {
            "identity": self.name,
            "residual": float(self.residual),
            "tolerance": float(self.tolerance),
            "pass": self.passed,
        }


@dataclass
class VerificationReport:
    model: str
    lam: int
    k: float | None
    checks: list[Check] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def add(self, name: str, residual: float, tolerance: float) -> None:
        self.checks.append(Check(name, float(residual), float(tolerance)))

    @property
    def overall_pass(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def max_residual(self) -> float:
        return max((c.residual for c in self.checks), default=0.0)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        out = {
            "model": self.model,
            "lambda": self.lam,
            "k": self.k,
            "entries": [c.to_dict() for c in self.checks],
            "overall_pass": self.overall_pass,
        }
        if self.extra:
            out["extra"] = self.extra
        return out


@dataclass
class ConvergenceTable:
    """Norms ``||(A_Lambda - A) phi||`` per cutoff, one named column per quantity."""

    lams: list[int]
    ks: list[float]
    columns: dict[str, list[float]]
    descriptions: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.lams, self.lams[1:])):
            raise ValueError("Lambda values must be strictly increasing")
        for name, col in self.columns.items():
            if len(col) != len(self.lams):
                raise ValueError(f"column {name!r} has wrong length")

    def column(self, name: str) -> np.ndarray:
        return np.asarray(self.columns[name], dtype=float)

    def is_nonincreasing(self, name: str, noise: float = 1e-14) -> bool:
        """True if each entry is at most the previous one plus ``noise``."""
        col = self.column(name)
        return bool(np.all(np.diff(col) <= noise))

    def rows(self):
        for name, col in self.columns.items():
            desc = self.descriptions.get(name, name)
            for lam, k, v in zip(self.lams, self.ks, col):
                yield lam, k, float(v), desc

    def to_dict(self) -> dict:
        return {
            "lambda": list(self.lams),
            "k": [float(k) for k in self.ks],
            "columns": {n: [float(v) for v in c] for n, c in self.columns.items()},
            "descriptions": dict(self.descriptions),
        }
