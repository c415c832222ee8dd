"""Wave-speed models c(v) with certified global bounds.

Two closed model families are supported: a constant speed, and the
liquid-crystal family c^2(v) = gamma*cos^2(v) + alpha*sin^2(v).  Keeping the
family closed is what makes the global bounds (min/max of c, and the source
coefficient sup |c'/(4c^2)|) exactly computable; arbitrary user callables
could not certify them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["WaveSpeed", "SpeedBounds", "eval_c", "eval_c_prime", "bounds"]

# Dense sampling used for suprema of derivative expressions of the trig
# model.  c^2 is pi-periodic, so one period of 2*pi is more than enough.
_SUP_SAMPLES = 100_000


@dataclass(frozen=True)
class SpeedBounds:
    """Tightest box for c and the coefficient bound C1 = sup |c'/(4c^2)|."""

    k_inv: float
    k: float
    c1: float

    @property
    def kappa(self) -> float:
        """Smallest K with K^-1 <= c <= K; the constant used in estimates."""
        return max(self.k, 1.0 / self.k_inv)


@dataclass(frozen=True)
class WaveSpeed:
    """A wave-speed model, either ``constant`` or ``trig``.

    For ``trig``, c^2(v) = gamma*cos^2(v) + alpha*sin^2(v); both elastic
    constants must be positive so c stays uniformly positive and smooth.
    """

    model: str
    c0: float = 1.0
    alpha: float = 1.0
    gamma: float = 1.0

    def __post_init__(self):
        if self.model == "constant":
            if not (np.isfinite(self.c0) and self.c0 > 0):
                raise ValueError(f"constant speed requires c0 > 0, got {self.c0}")
        elif self.model == "trig":
            if not (np.isfinite(self.alpha) and self.alpha > 0):
                raise ValueError(f"trig speed requires alpha > 0, got {self.alpha}")
            if not (np.isfinite(self.gamma) and self.gamma > 0):
                raise ValueError(f"trig speed requires gamma > 0, got {self.gamma}")
        else:
            raise ValueError(f"unknown wave-speed model {self.model!r}")

    @classmethod
    def constant(cls, c0: float) -> "WaveSpeed":
        return cls(model="constant", c0=c0)

    @classmethod
    def trigonometric(cls, alpha: float, gamma: float) -> "WaveSpeed":
        return cls(model="trig", alpha=alpha, gamma=gamma)

    def c(self, v):
        """Evaluate c(v), vectorized over v."""
        if self.model == "constant":
            return self.c0 * np.ones_like(np.asarray(v, dtype=float))
        s = np.sin(np.asarray(v, dtype=float))
        return np.sqrt(self.gamma + (self.alpha - self.gamma) * s * s)

    def c_prime(self, v):
        """Evaluate dc/dv = (alpha - gamma) sin(v) cos(v) / c(v)."""
        v = np.asarray(v, dtype=float)
        if self.model == "constant":
            return np.zeros_like(v)
        return (self.alpha - self.gamma) * np.sin(v) * np.cos(v) / self.c(v)

    def bounds(self) -> SpeedBounds:
        if self.model == "constant":
            return SpeedBounds(k_inv=self.c0, k=self.c0, c1=0.0)
        lo = float(np.sqrt(min(self.alpha, self.gamma)))
        hi = float(np.sqrt(max(self.alpha, self.gamma)))
        if self.alpha == self.gamma:
            return SpeedBounds(k_inv=lo, k=hi, c1=0.0)
        vs = np.linspace(0.0, 2.0 * np.pi, _SUP_SAMPLES)
        c = self.c(vs)
        c1 = float(np.max(np.abs(self.c_prime(vs) / (4.0 * c * c))))
        return SpeedBounds(k_inv=lo, k=hi, c1=c1)

    def log_derivative_sup(self) -> float:
        """sup over v of |c'(v) / (2 c(v))|; feeds interaction-potential bounds."""
        if self.model == "constant" or self.alpha == self.gamma:
            return 0.0
        vs = np.linspace(0.0, 2.0 * np.pi, _SUP_SAMPLES)
        return float(np.max(np.abs(self.c_prime(vs) / (2.0 * self.c(vs)))))


def eval_c(ws: WaveSpeed, v):
    return ws.c(v)


def eval_c_prime(ws: WaveSpeed, v):
    return ws.c_prime(v)


def bounds(ws: WaveSpeed) -> SpeedBounds:
    return ws.bounds()
