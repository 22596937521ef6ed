"""Explicit solution of the Cauchy problem

    x^n V_xx - (-y)^m V_yy + mu V = 0,
    V(x, 0) = tau1(x),  V_y(x, 0) = nu1(x),

evaluated through its characteristic-form representation

    u(xi0, eta0) = (eta0+xi0)^(-alpha) (eta0-xi0)^(-2 beta - 1)
                     * [ Int_{xi0}^{eta0} H1 tau dξ + Int H2 tau' dξ ]
                 + (eta0+xi0)^(-alpha) * Int_{xi0}^{eta0} H3 nu dξ

with kernels

    H1 = gamma1 (eta0-xi)^beta (xi-xi0)^beta xi^alpha S(xi0,eta0;xi,lam)
    H2 = -gamma1 (eta0+xi0-2 xi) (eta0-xi)^beta (xi-xi0)^beta xi^alpha
           * Xi10[alpha,1-alpha; beta / beta; 1+beta](sigma0, rho0)
    H3 = -gamma2 (eta0-xi)^(-beta) (xi-xi0)^(-beta) xi^alpha
           * Xi2(alpha, 1-alpha; 1-beta)(sigma0, rho0)

    S  = 2(1+2 beta) Xi - (alpha/xi)(eta0+xi0-2 xi) Xi
         - (eta0+xi0-2 xi) (d sigma0/d xi) (d Xi/d sigma0)
         + 4 rho0 (d Xi/d rho0)

    sigma0 = (eta0-xi)(xi-xi0) / (2 xi (eta0+xi0)),
    rho0   = -lam2 (eta0-xi)(xi-xi0),
    gamma1 = Gamma(1+2 beta) / (2^(1-alpha) Gamma^2(1+beta)),
    gamma2 = [2(1-2 beta)]^(2 beta) 2^(alpha-1)
             Gamma(1-2 beta) / Gamma^2(1-beta).

The factor (eta0+xi0-2*xi) on the sigma0-derivative term of S is required
for the representation to reproduce exact solutions (constant data with
mu = 0, power-law and Bessel-type separable solutions); the test suite
pins this down to machine precision.

The weighted integrals carry algebraic endpoint singularities of exponent
beta in (-1/2, 0) (resp. -beta for H3) and are computed with Gauss-Jacobi
rules holding the exact endpoint weight, after splitting at the midpoint,
with composite Gauss-Legendre panels on the smooth remainders.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from .riemann import (
    CharParams,
    CharPoint,
    PhysicalPoint,
    ProblemParams,
    char_params,
    physical_exponents,
    to_characteristic,
)
from .series import (
    DomainError,
    EvalConfig,
    SeriesValue,
    Xi2Params,
    XiPQParams,
    gamma_fn,
    xi2,
    xi_pq,
    xi10_dsigma,
    xi10_rho_drho,
)

__all__ = [
    "CauchyData",
    "KernelArgs",
    "KernelConstants",
    "QuadratureSpec",
    "GridSpec",
    "SolutionField",
    "DomainRestrictionError",
    "QuadratureError",
    "kernel_args",
    "kernel_constants",
    "xi_shorthand",
    "s_factor",
    "kernel_h1",
    "kernel_h2",
    "kernel_h3",
    "integrate_weighted",
    "solve_u",
    "solve_V",
    "solve_grid",
]

# sigma0 over (xi0, eta0) is bounded by (sqrt(eta0)-sqrt(xi0))^2/(2(eta0+xi0))
# < 1/2; the restriction below is a defensive guard, not a practical limit
_SIGMA0_MAX = 0.95


class DomainRestrictionError(Exception):
    """Evaluation point outside the supported region of the solution formula."""


class QuadratureError(Exception):
    """Weighted quadrature failed to reach its target tolerance."""


@dataclass(frozen=True)
class CauchyData:
    """Initial data on the degeneracy line: tau1 (in C^3) and nu1 (in C^2),
    with the analytic derivative tau1_prime supplied by the caller.

    All callables must be vectorized over numpy arrays.  nu1_antideriv is
    required only by the d'Alembert comparison.
    """

    tau1: Callable
    nu1: Callable
    tau1_prime: Callable
    nu1_antideriv: Callable | None = None
    label: str = ""

    def check_derivative(self, xs, tol: float = 1e-5) -> float:
        """Max deviation of tau1_prime from a central difference of tau1."""
        xs = np.asarray(xs, dtype=float)
        h = 1e-6
        fd = (self.tau1(xs + h) - self.tau1(xs - h)) / (2 * h)
        dev = float(np.max(np.abs(fd - self.tau1_prime(xs))))
        if dev > tol * max(1.0, float(np.max(np.abs(fd)))):
            raise ValueError(f"tau1_prime inconsistent with tau1 (max deviation {dev:.3e})")
        return dev


@dataclass(frozen=True)
class KernelArgs:
    sigma0: float
    rho0: float

    def __post_init__(self) -> None:
        if not self.sigma0 < 1.0:
            raise DomainRestrictionError(f"sigma0 must be < 1, got {self.sigma0}")


@dataclass(frozen=True)
class KernelConstants:
    gamma1: float
    gamma2: float


@dataclass(frozen=True)
class QuadratureSpec:
    """Endpoint-weighted quadrature control: node count per panel, number of
    panels per half interval, and the order-comparison target tolerance."""

    jacobi_order: int = 24
    subdivisions: int = 3
    target_tol: float = 1e-10

    def __post_init__(self) -> None:
        if self.jacobi_order < 4:
            raise ValueError("jacobi_order must be >= 4")
        if self.subdivisions < 1:
            raise ValueError("subdivisions must be >= 1")
        if not self.target_tol > 0:
            raise ValueError("target_tol must be > 0")


@dataclass(frozen=True)
class GridSpec:
    x_range: tuple[float, float]
    y_range: tuple[float, float]
    nx: int
    ny: int

    def xs(self) -> np.ndarray:
        return np.linspace(self.x_range[0], self.x_range[1], self.nx)

    def ys(self) -> np.ndarray:
        return np.linspace(self.y_range[0], self.y_range[1], self.ny)


@dataclass
class SolutionField:
    """Grid of (x, y, V) samples with per-point convergence flags."""

    x: np.ndarray
    y: np.ndarray
    V: np.ndarray
    converged: np.ndarray
    metadata: dict = field(default_factory=dict)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write("x,y,V,converged\n")
            for j, yv in enumerate(self.y):
                for i, xv in enumerate(self.x):
                    fh.write(f"{xv!r},{yv!r},{self.V[j, i]!r},{int(self.converged[j, i])}\n")

    def write_metadata(self, path) -> None:
        with open(path, "w") as fh:
            for k in sorted(self.metadata):
                fh.write(f"{k} = {self.metadata[k]}\n")


# --------------------------------------------------------------------------
# kernel ingredients (scalar contract surface)


def kernel_constants(cp: CharParams) -> KernelConstants:
    al, be = cp.alpha, cp.beta
    g1 = gamma_fn(1 + 2 * be) / (2 ** (1 - al) * gamma_fn(1 + be) ** 2)
    g2 = ((2 * (1 - 2 * be)) ** (2 * be) * 2 ** (al - 1)
          * gamma_fn(1 - 2 * be) / gamma_fn(1 - be) ** 2)
    return KernelConstants(gamma1=g1, gamma2=g2)


def kernel_args(c0: CharPoint, xi: float, cp: CharParams) -> KernelArgs:
    xi0, eta0 = c0.xi, c0.eta
    if not (xi0 < xi < eta0):
        raise DomainRestrictionError(f"xi must lie in (xi0, eta0), got {xi}")
    if xi <= 0.0:
        raise DomainRestrictionError("xi must be positive")
    num = (eta0 - xi) * (xi - xi0)
    return KernelArgs(sigma0=num / (2 * xi * (eta0 + xi0)), rho0=-cp.lam2 * num)


def _xi_params(cp: CharParams) -> XiPQParams:
    return XiPQParams(a=cp.alpha, b=1 - cp.alpha, c=cp.beta, p=1, q=0,
                      a_p=cp.beta, c_p=1 + cp.beta)


def xi_shorthand(cp: CharParams, ka: KernelArgs, cfg: EvalConfig = EvalConfig()) -> SeriesValue:
    """The kernel series Xi10[alpha,1-alpha; beta / beta; 1+beta](sigma0, rho0)."""
    return xi_pq(_xi_params(cp), ka.sigma0, ka.rho0, cfg)


def _dsigma0_dxi(c0: CharPoint, xi: float) -> float:
    return (c0.eta * c0.xi - xi * xi) / (2 * xi * xi * (c0.eta + c0.xi))


def s_factor(c0: CharPoint, xi: float, cp: CharParams,
             cfg: EvalConfig = EvalConfig()) -> float:
    """The combination S multiplying tau inside H1 (see module docstring)."""
    ka = kernel_args(c0, xi, cp)
    al, be = cp.alpha, cp.beta
    pxi = _xi_params(cp)
    Xi = xi_pq(pxi, ka.sigma0, ka.rho0, cfg).require()
    Xis = xi10_dsigma(pxi, ka.sigma0, ka.rho0, cfg).require()
    rXir = xi10_rho_drho(pxi, ka.sigma0, ka.rho0, cfg).require()
    mid = c0.eta + c0.xi - 2 * xi
    return (2 * (1 + 2 * be) * Xi - al / xi * mid * Xi
            - mid * _dsigma0_dxi(c0, xi) * Xis + 4 * rXir)


def kernel_h1(c0: CharPoint, xi: float, cp: CharParams,
              cfg: EvalConfig = EvalConfig()) -> float:
    ka = kernel_args(c0, xi, cp)  # rejects endpoints
    g1 = kernel_constants(cp).gamma1
    w = (c0.eta - xi) ** cp.beta * (xi - c0.xi) ** cp.beta
    return g1 * w * xi ** cp.alpha * s_factor(c0, xi, cp, cfg)


def kernel_h2(c0: CharPoint, xi: float, cp: CharParams,
              cfg: EvalConfig = EvalConfig()) -> float:
    ka = kernel_args(c0, xi, cp)
    g1 = kernel_constants(cp).gamma1
    w = (c0.eta - xi) ** cp.beta * (xi - c0.xi) ** cp.beta
    Xi = xi_shorthand(cp, ka, cfg).require()
    return -g1 * (c0.eta + c0.xi - 2 * xi) * w * xi ** cp.alpha * Xi


def kernel_h3(c0: CharPoint, xi: float, cp: CharParams,
              cfg: EvalConfig = EvalConfig()) -> float:
    ka = kernel_args(c0, xi, cp)
    g2 = kernel_constants(cp).gamma2
    w = (c0.eta - xi) ** (-cp.beta) * (xi - c0.xi) ** (-cp.beta)
    X2 = xi2(Xi2Params(cp.alpha, 1 - cp.alpha, 1 - cp.beta),
             ka.sigma0, ka.rho0, cfg).require()
    return -g2 * w * xi ** cp.alpha * X2


# --------------------------------------------------------------------------
# vectorized kernel series over quadrature nodes
#
# The quadrature needs the kernel series at many nodes per solve; the series
# coefficients depend only on (alpha, beta), so they are tabulated once and
# each node evaluation reduces to a power-basis contraction.  Agreement with
# the scalar series evaluators is asserted by the test suite.


def _poch_vec(x: float, count: int) -> np.ndarray:
    out = np.empty(count)
    out[0] = 1.0
    for j in range(1, count):
        out[j] = out[j - 1] * (x + j - 1)
    return out


def _table_sizes(smax: float, rmax: float, tol: float) -> tuple[int, int]:
    M = 24
    while smax > 0 and smax ** M > tol * (1 - smax) and M < 220:
        M += 8
    K = 10
    while rmax > 0 and rmax ** K / math.factorial(min(K, 160)) > tol and K < 160:
        K += 4
    return M, K + 6


def _xi10_table(cp: CharParams, M: int, K: int) -> np.ndarray:
    al, be = cp.alpha, cp.beta
    pa = _poch_vec(al, M)
    pb = _poch_vec(1 - al, M)
    pk = _poch_vec(be, K)
    pck = _poch_vec(1 + be, K)
    pden = _poch_vec(be, M + K)
    fm = np.array([math.factorial(m) for m in range(M)], dtype=float)
    fk = np.array([math.factorial(k) for k in range(K)], dtype=float)
    C = np.empty((M, K))
    for m in range(M):
        num = pa[m] * pb[m] / fm[m]
        C[m, :] = num * pk / (fk * pden[m:m + K] * pck)
    return C


def _xi2_table(a: float, b: float, c: float, M: int, K: int) -> np.ndarray:
    pa = _poch_vec(a, M)
    pb = _poch_vec(b, M)
    pden = _poch_vec(c, M + K)
    fm = np.array([math.factorial(m) for m in range(M)], dtype=float)
    fk = np.array([math.factorial(k) for k in range(K)], dtype=float)
    C = np.empty((M, K))
    for m in range(M):
        C[m, :] = pa[m] * pb[m] / fm[m] / (fk * pden[m:m + K])
    return C


class _KernelTables:
    """Coefficient tables for Xi, dXi/dsigma, rho dXi/drho and the H3 series,
    all evaluated by contraction against node power bases."""

    def __init__(self, cp: CharParams, smax: float, rmax: float, tol: float):
        M, K = _table_sizes(max(smax, 0.5), max(rmax, 1e-6), tol * 1e-3)
        self.M, self.K = M, K
        self.C_xi = _xi10_table(cp, M, K)
        self.C_h3 = _xi2_table(cp.alpha, 1 - cp.alpha, 1 - cp.beta, M, K)
        m = np.arange(M)[:, None]
        k = np.arange(K)[None, :]
        self.C_xi_ds = self.C_xi * m       # against sigma^(m-1) basis
        self.C_xi_rdr = self.C_xi * k      # against rho^k basis

    def _bases(self, s: np.ndarray, r: np.ndarray):
        S = np.vander(s, self.M, increasing=True)
        R = np.vander(r, self.K, increasing=True)
        return S, R

    def eval_all(self, s: np.ndarray, r: np.ndarray):
        """Returns (Xi, dXi/dsigma, rho*dXi/drho, Xi2_h3) at the nodes."""
        S, R = self._bases(s, r)
        xi_v = np.einsum("nm,mk,nk->n", S, self.C_xi, R)
        h3_v = np.einsum("nm,mk,nk->n", S, self.C_h3, R)
        rdr_v = np.einsum("nm,mk,nk->n", S, self.C_xi_rdr, R)
        # the m-index shifts down one power of sigma in the derivative
        ds_v = np.einsum("nm,mk,nk->n", S[:, : self.M - 1], self.C_xi_ds[1:, :], R)
        return xi_v, ds_v, rdr_v, h3_v


# --------------------------------------------------------------------------
# endpoint-weighted quadrature


def _panels(lo: float, hi: float, count: int) -> list[tuple[float, float]]:
    """Split [lo, hi] into `count` panels shrinking geometrically toward lo
    (the singular end); the first panel carries the Jacobi weight."""
    if count == 1:
        return [(lo, hi)]
    cuts = [lo + (hi - lo) * 2.0 ** (j - count + 1) for j in range(count - 1)]
    edges = [lo] + cuts + [hi]
    return list(zip(edges[:-1], edges[1:]))


def _half_interval(g, lo: float, hi: float, w_exp: float, order: int,
                   subdivisions: int) -> float:
    """Integral over [lo, hi] of (t - lo)^w_exp * g(t) with the singularity
    at lo; g must accept an array of nodes."""
    total = 0.0
    panels = _panels(lo, hi, subdivisions)
    # singular panel: Gauss-Jacobi with weight (1+x)^w_exp at x = -1
    a, b = panels[0]
    x, w = roots_jacobi(order, 0.0, w_exp)
    half = (b - a) / 2.0
    nodes = a + half * (x + 1.0)
    total += half ** (w_exp + 1.0) * float(np.dot(w, g(nodes)))
    # smooth panels: Gauss-Legendre with the weight in the integrand
    if len(panels) > 1:
        xl, wl = roots_legendre(order)
        for a, b in panels[1:]:
            half = (b - a) / 2.0
            nodes = a + half * (xl + 1.0)
            total += half * float(np.dot(wl, (nodes - lo) ** w_exp * g(nodes)))
    return total


def _integrate_once(f, lo: float, hi: float, w_exp: float, order: int,
                    subdivisions: int) -> float:
    mid = 0.5 * (lo + hi)

    def g_left(t):
        return (hi - t) ** w_exp * f(t)

    def g_right(u):
        # mirrored: u = lo + hi - t transforms the right half onto a left-type one
        t = lo + hi - u
        return (hi - t) ** 0.0 * (t - lo) ** w_exp * f(t)

    left = _half_interval(g_left, lo, mid, w_exp, order, subdivisions)
    right = _half_interval(g_right, lo, mid, w_exp, order, subdivisions)
    return left + right


def integrate_weighted(f, lo: float, hi: float, w_exp: float,
                       spec: QuadratureSpec = QuadratureSpec()) -> tuple[float, float, bool]:
    """Compute Int_lo^hi (hi-t)^w_exp (t-lo)^w_exp f(t) dt for w_exp > -1.

    The interval is split at the midpoint; each half uses a Gauss-Jacobi
    rule carrying the exact weight at its singular endpoint, composed with
    Gauss-Legendre panels toward the smooth end.  Returns (value,
    error_estimate, converged); the error estimate compares rules of
    increasing order and panel count.
    """
    if hi <= lo:
        raise ValueError("empty interval")
    v1 = _integrate_once(f, lo, hi, w_exp, spec.jacobi_order, spec.subdivisions)
    v2 = _integrate_once(f, lo, hi, w_exp, spec.jacobi_order + 8, spec.subdivisions)
    err = abs(v2 - v1)
    scale = max(abs(v2), 1.0)
    if err <= spec.target_tol * scale:
        return v2, err, True
    v3 = _integrate_once(f, lo, hi, w_exp, spec.jacobi_order + 16,
                         spec.subdivisions + 2)
    err = abs(v3 - v2)
    return v3, err, err <= spec.target_tol * max(abs(v3), 1.0)


# --------------------------------------------------------------------------
# data transported to the characteristic line


def _char_data(data: CauchyData, n: float):
    """tau, tau', nu on the characteristic diagonal:
    tau(xi) = tau1(g(xi)) with g(xi) = ((2-n) xi / 2)^(2/(2-n));
    tau'(xi) = tau1'(g(xi)) g'(xi), g'(xi) = ((2-n) xi / 2)^(n/(2-n))."""
    c = (2.0 - n) / 2.0
    e = 2.0 / (2.0 - n)

    def g(xs):
        return (c * np.asarray(xs, dtype=float)) ** e

    def gp(xs):
        return (c * np.asarray(xs, dtype=float)) ** (e - 1.0)

    tau = lambda xs: data.tau1(g(xs))
    taup = lambda xs: data.tau1_prime(g(xs)) * gp(xs)
    nu = lambda xs: data.nu1(g(xs))
    return tau, taup, nu


# --------------------------------------------------------------------------
# the solution


def _sigma0_sup(c0: CharPoint) -> float:
    if c0.xi <= 0.0:
        return 0.5
    return (math.sqrt(c0.eta) - math.sqrt(c0.xi)) ** 2 / (2.0 * (c0.eta + c0.xi))


def solve_u(c0: CharPoint, data: CauchyData, cp: CharParams,
            q: QuadratureSpec = QuadratureSpec()) -> float:
    """Characteristic-form solution u(xi0, eta0) for 0 < xi0 < eta0 <= 1."""
    xi0, eta0 = c0.xi, c0.eta
    if not (0.0 < xi0 < eta0 <= 1.0 + 1e-12):
        raise DomainRestrictionError(
            f"solve_u requires 0 < xi0 < eta0 <= 1, got ({xi0}, {eta0})")
    if not _sigma0_sup(c0) < _SIGMA0_MAX:
        raise DomainRestrictionError("sigma0 exceeds the supported range")
    al, be, lam2 = cp.alpha, cp.beta, cp.lam2
    m_phys, n_phys = physical_exponents(cp)
    tau, taup, nu = _char_data(data, n_phys)
    kc = kernel_constants(cp)
    rmax = abs(lam2) * (eta0 - xi0) ** 2 / 4.0
    tables = _KernelTables(cp, _sigma0_sup(c0), rmax, q.target_tol)

    def args_at(xs: np.ndarray):
        num = (eta0 - xs) * (xs - xi0)
        return num / (2.0 * xs * (eta0 + xi0)), -lam2 * num

    def f12(xs: np.ndarray) -> np.ndarray:
        s0, r0 = args_at(xs)
        Xi, Xis, rXir, _ = tables.eval_all(s0, r0)
        mid = eta0 + xi0 - 2.0 * xs
        ds0 = (eta0 * xi0 - xs * xs) / (2.0 * xs * xs * (eta0 + xi0))
        S = (2.0 * (1.0 + 2.0 * be) * Xi - al / xs * mid * Xi
             - mid * ds0 * Xis + 4.0 * rXir)
        return kc.gamma1 * xs ** al * (S * tau(xs) - mid * Xi * taup(xs))

    def f3(xs: np.ndarray) -> np.ndarray:
        s0, r0 = args_at(xs)
        _, _, _, X2 = tables.eval_all(s0, r0)
        return -kc.gamma2 * xs ** al * X2 * nu(xs)

    I12, err12, ok12 = integrate_weighted(f12, xi0, eta0, be, q)
    I3, err3, ok3 = integrate_weighted(f3, xi0, eta0, -be, q)
    if not (ok12 and ok3):
        raise QuadratureError(
            f"kernel quadrature did not converge (errors {err12:.3e}, {err3:.3e})")
    pref = (eta0 + xi0) ** (-al)
    return pref * (eta0 - xi0) ** (-2.0 * be - 1.0) * I12 + pref * I3


def solve_V(p: PhysicalPoint, data: CauchyData, pp: ProblemParams,
            q: QuadratureSpec = QuadratureSpec()) -> float:
    """Physical-variable solution V(x, y); identical computation to solve_u
    at the characteristic image of p."""
    return solve_u(to_characteristic(p, pp), data, char_params(pp), q)


def solve_grid(gs: GridSpec, data: CauchyData, pp: ProblemParams,
               q: QuadratureSpec = QuadratureSpec()) -> SolutionField:
    """Per-point solve_V over a rectangular grid; per-point failures are
    recorded in the convergence mask, not raised."""
    xs, ys = gs.xs(), gs.ys()
    V = np.full((gs.ny, gs.nx), np.nan)
    ok = np.zeros((gs.ny, gs.nx), dtype=bool)
    for j, yv in enumerate(ys):
        for i, xv in enumerate(xs):
            try:
                V[j, i] = solve_V(PhysicalPoint(xv, yv), data, pp, q)
                ok[j, i] = True
            except (DomainRestrictionError, QuadratureError, DomainError, ValueError):
                ok[j, i] = False
    meta = {
        "problem.m": repr(pp.m), "problem.n": repr(pp.n), "problem.mu": repr(pp.mu),
        "grid.x_min": repr(gs.x_range[0]), "grid.x_max": repr(gs.x_range[1]),
        "grid.y_min": repr(gs.y_range[0]), "grid.y_max": repr(gs.y_range[1]),
        "grid.nx": gs.nx, "grid.ny": gs.ny,
        "quadrature.jacobi_order": q.jacobi_order,
        "quadrature.subdivisions": q.subdivisions,
        "quadrature.target_tol": repr(q.target_tol),
        "data.tau1": data.label or "custom",
    }
    return SolutionField(x=xs, y=ys, V=V, converged=ok, metadata=meta)
