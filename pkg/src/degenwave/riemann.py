"""Coordinate and parameter maps between physical and characteristic
variables for the degenerate hyperbolic equation

    x^n V_xx - (-y)^m V_yy + mu V = 0,   0 < m < 1,  0 <= n < 1,

and evaluation of its Riemann function in two equivalent closed forms.

Characteristic variables:  xi = x0 - y0, eta = x0 + y0 with
x0 = 2/(2-n) x^((2-n)/2), y0 = 2/(2-m) (-y)^((2-m)/2).  In (xi, eta) the
equation takes the generalized Euler-Poisson-Darboux form

    u_{xi eta} + alpha/(eta+xi) (u_eta + u_xi)
               - beta/(eta-xi) (u_eta - u_xi) - lam2 u = 0

with 2*alpha = n/(n-2), 2*beta = m/(m-2), lam2 = -mu/4.
"""
from __future__ import annotations

from dataclasses import dataclass

from .series import (
    DomainError,
    EvalConfig,
    PhiParams,
    PsiPQParams,
    phi,
    psi_pq,
)

__all__ = [
    "ProblemParams",
    "CharParams",
    "PhysicalPoint",
    "CharPoint",
    "RiemannArgs",
    "char_params",
    "physical_exponents",
    "to_characteristic",
    "from_characteristic",
    "riemann_args",
    "riemann_function",
]

# |omega| beyond which form="auto" switches from the Phi form to the Psi
# form (whose theta = omega/(omega-1) stays in [0,1) as omega -> -inf)
_OMEGA_SWITCH = 0.9


@dataclass(frozen=True)
class ProblemParams:
    """Physical exponents and spectral parameter of the equation."""

    m: float
    n: float
    mu: float

    def __post_init__(self) -> None:
        if not 0.0 < self.m < 1.0:
            raise ValueError(f"m must satisfy 0 < m < 1, got {self.m}")
        if not 0.0 <= self.n < 1.0:
            raise ValueError(f"n must satisfy 0 <= n < 1, got {self.n}")


@dataclass(frozen=True)
class CharParams:
    """Characteristic-form parameters; -1 < 2*alpha <= 0 and -1 < 2*beta < 0
    for admissible (m, n)."""

    alpha: float
    beta: float
    lam2: float

    def __post_init__(self) -> None:
        if not -0.5 < self.alpha <= 0.0:
            raise ValueError(f"alpha must lie in (-1/2, 0], got {self.alpha}")
        if not -0.5 < self.beta < 0.0:
            raise ValueError(f"beta must lie in (-1/2, 0), got {self.beta}")


@dataclass(frozen=True)
class PhysicalPoint:
    x: float
    y: float

    def __post_init__(self) -> None:
        if self.x < 0.0:
            raise ValueError(f"x must be >= 0, got {self.x}")
        if self.y > 0.0:
            raise ValueError(f"y must be <= 0, got {self.y}")


@dataclass(frozen=True)
class CharPoint:
    xi: float
    eta: float

    def __post_init__(self) -> None:
        if self.eta < self.xi:
            raise ValueError(f"characteristic ordering requires xi <= eta, got {self}")


@dataclass(frozen=True)
class RiemannArgs:
    sigma: float
    omega: float
    rho: float
    theta: float


def char_params(pp: ProblemParams) -> CharParams:
    """alpha = n/(2(n-2)), beta = m/(2(m-2)), lam2 = -mu/4."""
    return CharParams(alpha=pp.n / (2.0 * (pp.n - 2.0)),
                      beta=pp.m / (2.0 * (pp.m - 2.0)),
                      lam2=-pp.mu / 4.0)


def physical_exponents(cp: CharParams) -> tuple[float, float]:
    """Invert the parameter map: (m, n) from (beta, alpha)."""
    m = 4.0 * cp.beta / (2.0 * cp.beta - 1.0)
    n = 4.0 * cp.alpha / (2.0 * cp.alpha - 1.0)
    return m, n


def to_characteristic(p: PhysicalPoint, pp: ProblemParams) -> CharPoint:
    """xi = x0 - y0, eta = x0 + y0."""
    x0 = 2.0 / (2.0 - pp.n) * p.x ** ((2.0 - pp.n) / 2.0)
    y0 = 2.0 / (2.0 - pp.m) * (-p.y) ** ((2.0 - pp.m) / 2.0)
    return CharPoint(xi=x0 - y0, eta=x0 + y0)


def from_characteristic(c: CharPoint, pp: ProblemParams) -> PhysicalPoint:
    """Inverse map; requires 0 <= xi <= eta."""
    if c.xi < 0.0:
        raise DomainError(f"from_characteristic requires xi >= 0, got {c.xi}")
    x = ((2.0 - pp.n) / 4.0 * (c.eta + c.xi)) ** (2.0 / (2.0 - pp.n))
    y = -(((2.0 - pp.m) / 4.0 * (c.eta - c.xi)) ** (2.0 / (2.0 - pp.m)))
    return PhysicalPoint(x=x, y=y)


def riemann_args(c: CharPoint, c0: CharPoint, cp: CharParams) -> RiemannArgs:
    """Series arguments of the Riemann function R(xi, eta; xi0, eta0).

    Requires xi0 <= xi <= eta <= eta0 with eta + xi > 0 and eta0 > xi0.
    Inside that triangle sigma >= 0, omega <= 0, theta in [0, 1).
    """
    xi, eta = c.xi, c.eta
    xi0, eta0 = c0.xi, c0.eta
    if not (xi0 <= xi <= eta <= eta0):
        raise DomainError(
            f"riemann_args requires xi0 <= xi <= eta <= eta0, got {c} vs {c0}")
    if eta + xi <= 0.0 or eta0 <= xi0:
        raise DomainError("degenerate denominator: eta+xi > 0 and eta0 > xi0 required")
    num = (eta0 - eta) * (xi - xi0)
    sigma = num / ((eta + xi) * (eta0 + xi0))
    rho = -cp.lam2 * num
    if eta == xi:
        raise DomainError("omega undefined on the degenerate line eta = xi")
    omega = (eta - eta0) * (xi - xi0) / ((eta - xi) * (eta0 - xi0))
    theta = omega / (omega - 1.0) if omega != 0.0 else 0.0
    return RiemannArgs(sigma=sigma, omega=omega, rho=rho, theta=theta)


def riemann_function(c: CharPoint, c0: CharPoint, cp: CharParams,
                     form: str = "auto", cfg: EvalConfig = EvalConfig()) -> float:
    """Riemann function R(xi, eta; xi0, eta0) of the characteristic-form
    equation, with parameters (alpha, beta, 1-alpha, 1-beta; 1).

    form="phi_form" uses the three-variable series in (sigma, omega, rho);
    form="psi_form" uses the continued representation

        ((eta+xi)/(eta0+xi0))^alpha (eta0-xi)^(-beta) (eta-xi0)^(-beta)
        (eta-xi)^(2 beta) * Psi00(sigma, theta, rho),

    which remains usable when omega -> -inf near the line eta = xi (where R
    itself blows up of order -2 beta, so the line is rejected).
    form="auto" switches to the psi form when |omega| > 0.9.
    """
    xi, eta = c.xi, c.eta
    xi0, eta0 = c0.xi, c0.eta
    if c == c0:
        return 1.0
    if eta == xi:
        raise DomainError("R is singular of order -2*beta on the line eta = xi")
    args = riemann_args(c, c0, cp)
    al, be = cp.alpha, cp.beta
    if form == "auto":
        form = "psi_form" if abs(args.omega) > _OMEGA_SWITCH else "phi_form"
    if form == "phi_form":
        pre = ((eta + xi) / (eta0 + xi0)) ** al * ((eta - xi) / (eta0 - xi0)) ** be
        F = phi(PhiParams(al, be, 1.0 - al, 1.0 - be, 1.0),
                args.sigma, args.omega, args.rho, cfg)
        return pre * F.require()
    if form == "psi_form":
        pre = (((eta + xi) / (eta0 + xi0)) ** al
               * (eta0 - xi) ** (-be) * (eta - xi0) ** (-be) * (eta - xi) ** (2.0 * be))
        F = psi_pq(PsiPQParams(a=al, b=be, c=1.0 - al, d=1.0 - be, e=1.0, p=0, q=0),
                   args.sigma, args.theta, args.rho, cfg)
        return pre * F.require()
    raise ValueError(f"unknown form {form!r}; use 'phi_form', 'psi_form' or 'auto'")
