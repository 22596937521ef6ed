"""Named initial-data presets with analytic derivatives and antiderivatives.

Presets are specified by short strings so that configuration files and the
CLI need no user-side calculus:

    constant        constant:2.5
    linear          linear:1.5        (slope; f = slope*x)
    quadratic       quadratic:0.7     (coefficient; f = coef*x^2)
    sine            sine:1.0,2.0,0.5  (amplitude, frequency, phase;
                                       f = A*sin(w*x + phase))
    poly:c0,c1,...  polynomial with ascending coefficients
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.polynomial import Polynomial

__all__ = ["AnalyticFunction", "make_preset", "PRESET_NAMES"]

PRESET_NAMES = ("constant", "linear", "quadratic", "sine", "poly")


@dataclass(frozen=True)
class AnalyticFunction:
    """A scalar function with its derivative and antiderivative, all
    vectorized over numpy arrays."""

    spec: str
    f: Callable
    df: Callable
    antideriv: Callable

    def __call__(self, x):
        return self.f(x)


def _from_poly(spec: str, coeffs) -> AnalyticFunction:
    p = Polynomial(list(coeffs))
    dp = p.deriv()
    ip = p.integ()
    return AnalyticFunction(spec=spec,
                            f=lambda x: p(np.asarray(x, dtype=float)),
                            df=lambda x: dp(np.asarray(x, dtype=float)),
                            antideriv=lambda x: ip(np.asarray(x, dtype=float)))


def make_preset(spec: str) -> AnalyticFunction:
    spec = spec.strip()
    name, _, argstr = spec.partition(":")
    name = name.strip().lower()
    args = [float(v) for v in argstr.split(",") if v.strip()] if argstr else []
    if name == "constant":
        c = args[0] if args else 1.0
        return _from_poly(f"constant:{c!r}", [c])
    if name == "linear":
        slope = args[0] if args else 1.0
        return _from_poly(f"linear:{slope!r}", [0.0, slope])
    if name == "quadratic":
        coef = args[0] if args else 1.0
        return _from_poly(f"quadratic:{coef!r}", [0.0, 0.0, coef])
    if name == "poly":
        if not args:
            raise ValueError("poly preset needs coefficients, e.g. poly:1.0,0.5")
        return _from_poly("poly:" + ",".join(repr(a) for a in args), args)
    if name == "sine":
        amp = args[0] if len(args) > 0 else 1.0
        freq = args[1] if len(args) > 1 else 1.0
        phase = args[2] if len(args) > 2 else 0.0
        if freq == 0.0:
            raise ValueError("sine preset requires a nonzero frequency")
        return AnalyticFunction(
            spec=f"sine:{amp!r},{freq!r},{phase!r}",
            f=lambda x: amp * np.sin(freq * np.asarray(x, dtype=float) + phase),
            df=lambda x: amp * freq * np.cos(freq * np.asarray(x, dtype=float) + phase),
            antideriv=lambda x: -amp / freq * np.cos(freq * np.asarray(x, dtype=float) + phase),
        )
    raise ValueError(f"unknown data preset {spec!r}; known: {PRESET_NAMES}")
