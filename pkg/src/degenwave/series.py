"""Convergence-controlled evaluation of Gauss, Humbert-type and extended
confluent hypergeometric series of one, two and three variables.

The families implemented here are

    F(a,b;c;s)            = sum_m (a)_m (b)_m / (m! (c)_m) s^m
    Xi2(a,b;c;s,r)        = sum_{m,k} (a)_m (b)_m / (m! k! (c)_{m+k}) s^m r^k
    Phi(a,b,c,d;e;s,w,r)  = sum_{m,n,k} (a)_m (b)_n (c)_m (d)_n
                            / (m! n! k! (e)_{m+n+k}) s^m w^n r^k
    XiPQ, PsiPQ           = two-variable extensions carrying extra Pochhammer
                            ratios with indices p*k and q*(m+k), p,q in {0,1};
                            PsiPQ carries an inner Gauss factor
                            F(b, e-d+m+k; e+m+k; theta) per (m,k) term.

Double and triple series are summed over diagonal shells (m+k = const,
resp. m+n+k = const) with per-index multiplicative recurrences.  Index
prefixes are kept as (mantissa, binary exponent) pairs so that terminating
series produce exact zeros and long summations cannot overflow.  Shell sums
are accumulated with compensated (Neumaier) summation.

All evaluators are pure and deterministic: identical inputs give
bit-identical outputs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
from scipy.special import gammaln, gammasgn

__all__ = [
    "EvalConfig",
    "SeriesValue",
    "GaussParams",
    "Xi2Params",
    "PhiParams",
    "XiPQParams",
    "PsiPQParams",
    "SeriesArgs",
    "SeriesError",
    "PoleError",
    "DomainError",
    "ConvergenceError",
    "pochhammer",
    "gamma_fn",
    "gauss_f",
    "xi2",
    "phi",
    "xi_pq",
    "psi_pq",
    "xi10_dsigma",
    "xi10_rho_drho",
]

_INT_TOL = 1e-12
# distance from a non-positive-integer lower parameter below which we refuse
_POLE_GUARD = 1e-10
# |c-a-b - nearest integer| below which the z->1-z connection formula is
# ill-conditioned and evaluation is delegated to mpmath
_LOG_CASE_GUARD = 0.05


class SeriesError(Exception):
    """Base class for series evaluation failures."""


class PoleError(SeriesError):
    """A lower parameter sits on (or too close to) a pole 0, -1, -2, ..."""


class DomainError(SeriesError):
    """Argument outside the convergence/validity domain of the evaluator."""


class ConvergenceError(SeriesError):
    """Raised by SeriesValue.require() when a sum did not converge."""


def _is_nonpos_int(x: float, tol: float = _INT_TOL) -> bool:
    return x < 0.5 and abs(x - round(x)) <= tol and round(x) <= 0


def _check_lower(value: float, name: str, guard: float = _POLE_GUARD) -> None:
    if value < 0.5 and abs(value - round(value)) <= guard and round(value) <= 0:
        raise PoleError(f"lower parameter {name}={value} is a pole (0, -1, -2, ...)")


# --------------------------------------------------------------------------
# configuration and result types


@dataclass(frozen=True)
class EvalConfig:
    """Truncation control for the series evaluators.

    rel_tol is relative when |value| >= 1 and absolute otherwise; max_terms
    caps each summation index.  shell_strategy selects the summation order
    for the multi-variable series ("diagonal" shells m+k=s, or "nested"
    row-by-row); both orders must agree, which the test suite asserts.
    """

    rel_tol: float = 1e-12
    max_terms: int = 500
    shell_strategy: str = "diagonal"

    def __post_init__(self) -> None:
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be > 0")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")
        if self.shell_strategy not in ("diagonal", "nested"):
            raise ValueError("shell_strategy must be 'diagonal' or 'nested'")


@dataclass(frozen=True)
class SeriesValue:
    """Evaluated sum with truncation diagnostics."""

    value: float
    tail_estimate: float
    terms_used: int
    converged: bool

    def require(self) -> float:
        if not self.converged:
            raise ConvergenceError(
                f"series did not converge: value={self.value!r}, "
                f"tail_estimate={self.tail_estimate!r}, terms_used={self.terms_used}"
            )
        return self.value


@dataclass(frozen=True)
class GaussParams:
    a: float
    b: float
    c: float

    def __post_init__(self) -> None:
        _check_lower(self.c, "c")


@dataclass(frozen=True)
class Xi2Params:
    a: float
    b: float
    c: float

    def __post_init__(self) -> None:
        _check_lower(self.c, "c")


@dataclass(frozen=True)
class PhiParams:
    a: float
    b: float
    c: float
    d: float
    e: float

    def __post_init__(self) -> None:
        _check_lower(self.e, "e")


@dataclass(frozen=True)
class XiPQParams:
    """Parameters of XiPQ.  Primed parameters may be None when unused
    (a', c' for p=0; b', d' for q=0)."""

    a: float
    b: float
    c: float
    p: int
    q: int
    a_p: float | None = None
    b_p: float | None = None
    c_p: float | None = None
    d_p: float | None = None

    def __post_init__(self) -> None:
        if self.p not in (0, 1) or self.q not in (0, 1):
            raise ValueError("p and q take the values 0 and 1")
        _check_lower(self.c, "c")
        if self.p == 1:
            if self.a_p is None or self.c_p is None:
                raise ValueError("p=1 requires a' and c'")
            _check_lower(self.c_p, "c'")
        if self.q == 1:
            if self.b_p is None or self.d_p is None:
                raise ValueError("q=1 requires b' and d'")
            _check_lower(self.d_p, "d'")


@dataclass(frozen=True)
class PsiPQParams:
    """Parameters of PsiPQ; e is the lower parameter of the outer double
    series and of the inner Gauss factor F(b, e-d+m+k; e+m+k; theta)."""

    a: float
    b: float
    c: float
    d: float
    e: float
    p: int
    q: int
    a_p: float | None = None
    b_p: float | None = None
    c_p: float | None = None
    d_p: float | None = None

    def __post_init__(self) -> None:
        if self.p not in (0, 1) or self.q not in (0, 1):
            raise ValueError("p and q take the values 0 and 1")
        _check_lower(self.e, "e")
        if self.p == 1:
            if self.a_p is None or self.c_p is None:
                raise ValueError("p=1 requires a' and c'")
            _check_lower(self.c_p, "c'")
        if self.q == 1:
            if self.b_p is None or self.d_p is None:
                raise ValueError("q=1 requires b' and d'")
            _check_lower(self.d_p, "d'")


@dataclass(frozen=True)
class SeriesArgs:
    """Argument tuple shared by the evaluator front ends; theta = w/(w-1)."""

    sigma: float = 0.0
    omega: float = 0.0
    rho: float = 0.0
    theta: float = 0.0


# --------------------------------------------------------------------------
# scalar special functions


def pochhammer(alpha: float, l: int) -> float:
    """Rising factorial (alpha)_l = alpha (alpha+1) ... (alpha+l-1), (alpha)_0 = 1.

    Exact products for small l; log-gamma differences with sign tracking for
    large l to avoid overflow.
    """
    if l < 0:
        raise ValueError("l must be >= 0")
    if l == 0:
        return 1.0
    # an exact zero factor appears iff alpha is an integer in (-l, 0]
    if _is_nonpos_int(alpha) and -round(alpha) < l:
        return 0.0
    if l <= 40:
        out = 1.0
        for j in range(l):
            out *= alpha + j
        return out
    top = alpha + l
    sign = gammasgn(top) * gammasgn(alpha)
    return sign * math.exp(gammaln(top) - gammaln(alpha))


def gamma_fn(x: float) -> float:
    """Euler gamma function; raises PoleError at 0, -1, -2, ..."""
    if _is_nonpos_int(x):
        raise PoleError(f"gamma pole at x={x}")
    return float(gammasgn(x) * math.exp(gammaln(x)))


# --------------------------------------------------------------------------
# compensated accumulator and scaled prefix sequences


class _Neumaier:
    __slots__ = ("s", "c")

    def __init__(self) -> None:
        self.s = 0.0
        self.c = 0.0

    def add(self, x: float) -> None:
        t = self.s + x
        if abs(self.s) >= abs(x):
            self.c += (self.s - t) + x
        else:
            self.c += (x - t) + self.s
        self.s = t

    @property
    def total(self) -> float:
        return self.s + self.c


def _norm(man: float, ex: int) -> tuple[float, int]:
    if man == 0.0:
        return 0.0, 0
    m, e = math.frexp(man)
    return m, ex + e


class _Prefix:
    """Sequence x_0, x_1, ... built by multiplicative steps, stored as
    (mantissa, exponent) pairs so long products neither overflow nor
    underflow and annihilated factors give exact zeros."""

    __slots__ = ("man", "ex")

    def __init__(self, start: float = 1.0) -> None:
        m, e = _norm(start, 0)
        self.man = [m]
        self.ex = [e]

    def extend_to(self, n: int, step) -> None:
        """Ensure x_n exists; step(j) is the ratio x_{j+1}/x_j."""
        while len(self.man) <= n:
            j = len(self.man) - 1
            m, e = _norm(self.man[j] * step(j), self.ex[j])
            self.man.append(m)
            self.ex.append(e)

    def get(self, n: int) -> tuple[float, int]:
        return self.man[n], self.ex[n]


def _combine(*pairs: tuple[float, int]) -> float:
    man = 1.0
    ex = 0
    for m, e in pairs:
        man *= m
        ex += e
    if man == 0.0:
        return 0.0
    return math.ldexp(man, ex)


# --------------------------------------------------------------------------
# tail bookkeeping shared by every evaluator


def _finish(
    total: float,
    blocks: list[float],
    terms_used: int,
    exhausted: bool,
    max_abs_term: float,
    cfg: EvalConfig,
) -> SeriesValue:
    """Derive the tail estimate and convergence flag from the trailing
    per-shell (or per-row) absolute sums in `blocks`."""
    scale = max(abs(total), 1.0)
    if len(blocks) >= 2 and blocks[-2] > 0.0:
        ratio = blocks[-1] / blocks[-2]
    else:
        ratio = 0.0
    if len(blocks) >= 3 and blocks[-3] > 0.0:
        ratio = max(ratio, blocks[-2] / blocks[-3])
    ratio = min(max(ratio, 0.0), 0.95)
    last = blocks[-1] if blocks else 0.0
    tail = 3.0 * last * max(ratio / (1.0 - ratio), 1.0) if last > 0.0 else 0.0
    converged = (not exhausted) and tail <= cfg.rel_tol * scale
    # severe cancellation guard: the result is meaningless when the largest
    # term towers over the sum by more than 1/rel_tol
    if max_abs_term > scale / cfg.rel_tol:
        converged = False
        tail = max(tail, max_abs_term * cfg.rel_tol)
    return SeriesValue(total, tail, terms_used, converged)


def _stop_threshold(acc_total: float, cfg: EvalConfig) -> float:
    # stop well below rel_tol so the reported tail_estimate (which carries a
    # geometric safety factor) still clears the convergence criterion
    return cfg.rel_tol * max(abs(acc_total), 1.0) / 64.0


# --------------------------------------------------------------------------
# Gauss hypergeometric function


def _gauss_raw(a: float, b: float, c: float, z: float, cfg: EvalConfig) -> SeriesValue:
    """Direct power series of F(a,b;c;z); caller guarantees |z| < 1 or a
    terminating upper parameter."""
    acc = _Neumaier()
    term = 1.0
    acc.add(term)
    blocks = [1.0]
    max_abs = 1.0
    terms = 1
    small_run = 0
    exhausted = True
    for m in range(cfg.max_terms):
        term *= (a + m) * (b + m) / ((m + 1.0) * (c + m)) * z
        acc.add(term)
        terms += 1
        at = abs(term)
        blocks.append(at)
        max_abs = max(max_abs, at)
        if at <= _stop_threshold(acc.total, cfg):
            small_run += 1
            if small_run >= 2:
                exhausted = False
                break
        else:
            small_run = 0
        if term == 0.0:
            exhausted = False
            break
    return _finish(acc.total, blocks, terms, exhausted, max_abs, cfg)


def _gauss_terminating_index(a: float, b: float) -> int | None:
    """Smallest n with (a)_{n+1} = 0 or (b)_{n+1} = 0, if any."""
    best = None
    for upper in (a, b):
        if _is_nonpos_int(upper):
            n = -round(upper)
            best = n if best is None else min(best, n)
    return best


def _gauss_mpmath(a: float, b: float, c: float, z: float, cfg: EvalConfig) -> SeriesValue:
    with mpmath.workdps(30):
        v = float(mpmath.hyp2f1(a, b, c, z))
    return SeriesValue(v, abs(v) * 1e-15, 0, True)


def _gauss_any(a: float, b: float, c: float, z: float, cfg: EvalConfig) -> SeriesValue:
    """F(a,b;c;z) for real z < 1, with the z -> 1-z connection formula on
    [1/2, 1) and the Pfaff transformation for z <= -1/2."""
    nterm = _gauss_terminating_index(a, b)
    if nterm is not None:
        # exact polynomial: sum the finitely many terms directly
        local = EvalConfig(rel_tol=cfg.rel_tol, max_terms=nterm + 1, shell_strategy=cfg.shell_strategy)
        sv = _gauss_raw(a, b, c, z, local)
        return SeriesValue(sv.value, 0.0, sv.terms_used, True)
    if z >= 1.0:
        raise DomainError(f"gauss_f requires sigma < 1, got {z}")
    if z <= -0.5:
        # Pfaff: F(a,b;c;z) = (1-z)^(-a) F(a, c-b; c; z/(z-1)), z/(z-1) in (0,1)
        inner = _gauss_any(a, c - b, c, z / (z - 1.0), cfg)
        w = (1.0 - z) ** (-a)
        return SeriesValue(w * inner.value, abs(w) * inner.tail_estimate,
                           inner.terms_used, inner.converged)
    if z < 0.5:
        return _gauss_raw(a, b, c, z, cfg)
    # z in [1/2, 1): linear transformation in 1-z
    cab = c - a - b
    if abs(cab - round(cab)) < _LOG_CASE_GUARD:
        # logarithmic / near-logarithmic case: delegate to mpmath, which
        # evaluates the limit formula in extended precision
        return _gauss_mpmath(a, b, c, z, cfg)
    g = gamma_fn
    w1 = g(c) * g(cab) / (g(c - a) * g(c - b))
    w2 = g(c) * g(-cab) / (g(a) * g(b)) * (1.0 - z) ** cab
    f1 = _gauss_any(a, b, 1.0 - cab, 1.0 - z, cfg)
    f2 = _gauss_any(c - a, c - b, 1.0 + cab, 1.0 - z, cfg)
    value = w1 * f1.value + w2 * f2.value
    tail = abs(w1) * f1.tail_estimate + abs(w2) * f2.tail_estimate
    return SeriesValue(value, tail, f1.terms_used + f2.terms_used,
                       f1.converged and f2.converged)


def gauss_f(p: GaussParams, sigma: float, cfg: EvalConfig = EvalConfig()) -> SeriesValue:
    """Gauss hypergeometric function F(a,b;c;sigma) for real sigma < 1.

    Terminates exactly when a or b is a non-positive integer (then any real
    sigma is admissible).
    """
    return _gauss_any(p.a, p.b, p.c, sigma, cfg)


# --------------------------------------------------------------------------
# diagonal-shell engines for the two- and three-variable series


def _double_shell(P: _Prefix, Q: _Prefix, G: _Prefix, p_step, q_step, g_step,
                  cfg: EvalConfig, inner=None) -> SeriesValue:
    """Sum T(m,k) = P[m] Q[k] G[m+k] (inner(m+k) if given) over diagonal
    shells s = m+k, stopping when two consecutive shells are negligible."""
    acc = _Neumaier()
    blocks: list[float] = []
    terms = 0
    max_abs = 0.0
    small_run = 0
    exhausted = True
    smax = 2 * cfg.max_terms
    for s in range(smax + 1):
        P.extend_to(min(s, cfg.max_terms), p_step)
        Q.extend_to(min(s, cfg.max_terms), q_step)
        G.extend_to(s, g_step)
        gpair = G.get(s)
        fs = 1.0 if inner is None else inner(s)
        shell_abs = 0.0
        m_lo = max(0, s - cfg.max_terms)
        m_hi = min(s, cfg.max_terms)
        for m in range(m_lo, m_hi + 1):
            k = s - m
            t = _combine(P.get(m), Q.get(k), gpair) * fs
            if t != 0.0:
                acc.add(t)
                shell_abs += abs(t)
                if abs(t) > max_abs:
                    max_abs = abs(t)
            terms += 1
        blocks.append(shell_abs)
        if shell_abs <= _stop_threshold(acc.total, cfg):
            small_run += 1
            if small_run >= 2 and s >= 2:
                exhausted = False
                break
        else:
            small_run = 0
    return _finish(acc.total, blocks, terms, exhausted, max_abs, cfg)


def _double_nested(P: _Prefix, Q: _Prefix, G: _Prefix, p_step, q_step, g_step,
                   cfg: EvalConfig, inner=None) -> SeriesValue:
    """Row-by-row (m outer, k inner) summation of the same terms; used as an
    alternative order for cross-checking the diagonal strategy."""
    acc = _Neumaier()
    blocks: list[float] = []
    terms = 0
    max_abs = 0.0
    small_rows = 0
    exhausted = True
    for m in range(cfg.max_terms + 1):
        P.extend_to(m, p_step)
        row_abs = 0.0
        small_k = 0
        for k in range(cfg.max_terms + 1):
            Q.extend_to(k, q_step)
            G.extend_to(m + k, g_step)
            fs = 1.0 if inner is None else inner(m + k)
            t = _combine(P.get(m), Q.get(k), G.get(m + k)) * fs
            terms += 1
            if t != 0.0:
                acc.add(t)
                row_abs += abs(t)
                max_abs = max(max_abs, abs(t))
            if abs(t) <= _stop_threshold(acc.total, cfg):
                small_k += 1
                if small_k >= 2:
                    break
            else:
                small_k = 0
        blocks.append(row_abs)
        if row_abs <= _stop_threshold(acc.total, cfg):
            small_rows += 1
            if small_rows >= 2 and m >= 2:
                exhausted = False
                break
        else:
            small_rows = 0
    return _finish(acc.total, blocks, terms, exhausted, max_abs, cfg)


def _run_double(P, Q, G, p_step, q_step, g_step, cfg, inner=None) -> SeriesValue:
    if cfg.shell_strategy == "nested":
        return _double_nested(P, Q, G, p_step, q_step, g_step, cfg, inner)
    return _double_shell(P, Q, G, p_step, q_step, g_step, cfg, inner)


# --------------------------------------------------------------------------
# Xi2


def xi2(p: Xi2Params, sigma: float, rho: float, cfg: EvalConfig = EvalConfig()) -> SeriesValue:
    """Humbert-type double series Xi2(a,b;c;sigma,rho); |sigma| < 1, entire
    in rho (the single denominator Pochhammer of order m+k dominates)."""
    if abs(sigma) >= 1.0 and _gauss_terminating_index(p.a, p.b) is None:
        raise DomainError(f"xi2 requires |sigma| < 1, got {sigma}")
    a, b, c = p.a, p.b, p.c
    P = _Prefix()
    Q = _Prefix()
    G = _Prefix()
    p_step = lambda m: (a + m) * (b + m) / (m + 1.0) * sigma
    q_step = lambda k: rho / (k + 1.0)
    g_step = lambda s: 1.0 / (c + s)
    return _run_double(P, Q, G, p_step, q_step, g_step, cfg)


# --------------------------------------------------------------------------
# XiPQ and its sigma / rho derivatives


def _xi_pq_engine(p: XiPQParams, sigma: float, rho: float, cfg: EvalConfig,
                  mode: str) -> SeriesValue:
    a, b, c = p.a, p.b, p.c
    ap = p.a_p if p.p == 1 else None
    cp = p.c_p if p.p == 1 else None
    bp = p.b_p if p.q == 1 else None
    dp = p.d_p if p.q == 1 else None

    if mode == "value":
        P = _Prefix(1.0)

        def p_step(m):
            return (a + m) * (b + m) / (m + 1.0) * sigma
    elif mode == "dsigma":
        # term-wise d/dsigma: coefficient m, power sigma^(m-1); row m=0 drops
        P = _Prefix(0.0)
        P.man.append(_norm(a * b, 0)[0])
        P.ex.append(_norm(a * b, 0)[1])

        def p_step(m):
            if m == 0:
                return 0.0  # placeholder; m=1 entry preseeded above
            return (a + m) * (b + m) / m * sigma
    else:
        P = _Prefix(1.0)

        def p_step(m):
            return (a + m) * (b + m) / (m + 1.0) * sigma

    if mode == "rho_drho":
        # rho * d/drho multiplies each term by k; k=0 column drops
        Q = _Prefix(0.0)
        q1 = rho if p.p == 0 else rho * ap / cp
        Q.man.append(_norm(q1, 0)[0])
        Q.ex.append(_norm(q1, 0)[1])

        def q_step(k):
            if k == 0:
                return 0.0
            r = rho * (k + 1.0) / k / (k + 1.0)
            if p.p == 1:
                r *= (ap + k) / (cp + k)
            return r
    else:
        Q = _Prefix(1.0)

        def q_step(k):
            r = rho / (k + 1.0)
            if p.p == 1:
                r *= (ap + k) / (cp + k)
            return r

    G = _Prefix(1.0)

    def g_step(s):
        r = 1.0 / (c + s)
        if p.q == 1:
            r *= (bp + s) / (dp + s)
        return r

    return _run_double(P, Q, G, p_step, q_step, g_step, cfg)


def xi_pq(p: XiPQParams, sigma: float, rho: float, cfg: EvalConfig = EvalConfig()) -> SeriesValue:
    """Extended double series XiPQ with Pochhammer factors (a')_{pk},
    (b')_{q(m+k)} over (c')_{pk}, (d')_{q(m+k)}; p=0 (or q=0) makes the
    primed factors identically 1."""
    if abs(sigma) >= 1.0 and _gauss_terminating_index(p.a, p.b) is None:
        raise DomainError(f"xi_pq requires |sigma| < 1, got {sigma}")
    return _xi_pq_engine(p, sigma, rho, cfg, "value")


def xi10_dsigma(p: XiPQParams, sigma: float, rho: float, cfg: EvalConfig = EvalConfig()) -> SeriesValue:
    """Exact term-wise d/dsigma of xi_pq."""
    if abs(sigma) >= 1.0 and _gauss_terminating_index(p.a, p.b) is None:
        raise DomainError(f"xi10_dsigma requires |sigma| < 1, got {sigma}")
    return _xi_pq_engine(p, sigma, rho, cfg, "dsigma")


def xi10_rho_drho(p: XiPQParams, sigma: float, rho: float, cfg: EvalConfig = EvalConfig()) -> SeriesValue:
    """Exact term-wise rho * d/drho of xi_pq."""
    if abs(sigma) >= 1.0 and _gauss_terminating_index(p.a, p.b) is None:
        raise DomainError(f"xi10_rho_drho requires |sigma| < 1, got {sigma}")
    return _xi_pq_engine(p, sigma, rho, cfg, "rho_drho")


# --------------------------------------------------------------------------
# PsiPQ


def psi_pq(p: PsiPQParams, sigma: float, theta: float, rho: float,
           cfg: EvalConfig = EvalConfig()) -> SeriesValue:
    """Double series with an inner Gauss factor F(b, e-d+m+k; e+m+k; theta)
    per (m,k) term; theta < 1 (the inner series is continued by the Pfaff
    transformation for theta <= -1/2)."""
    if theta >= 1.0:
        raise DomainError(f"psi_pq requires theta < 1, got {theta}")
    if abs(sigma) >= 1.0 and _gauss_terminating_index(p.a, p.c) is None:
        raise DomainError(f"psi_pq requires |sigma| < 1, got {sigma}")
    a, b, c, d, e = p.a, p.b, p.c, p.d, p.e
    ap = p.a_p if p.p == 1 else None
    cp = p.c_p if p.p == 1 else None
    bp = p.b_p if p.q == 1 else None
    dp = p.d_p if p.q == 1 else None

    inner_cache: dict[int, float] = {}
    inner_diag = {"converged": True, "terms": 0}

    def inner(s: int) -> float:
        f = inner_cache.get(s)
        if f is None:
            _check_lower(e + s, "e+m+k")
            sv = _gauss_any(b, e - d + s, e + s, theta, cfg)
            inner_diag["converged"] = inner_diag["converged"] and sv.converged
            inner_diag["terms"] += sv.terms_used
            f = sv.value
            inner_cache[s] = f
        return f

    P = _Prefix(1.0)
    Q = _Prefix(1.0)
    G = _Prefix(1.0)

    def p_step(m):
        return (a + m) * (c + m) / (m + 1.0) * sigma

    def q_step(k):
        r = rho / (k + 1.0)
        if p.p == 1:
            r *= (ap + k) / (cp + k)
        return r

    def g_step(s):
        r = 1.0 / (e + s)
        if p.q == 1:
            r *= (bp + s) / (dp + s)
        return r

    sv = _run_double(P, Q, G, p_step, q_step, g_step, cfg, inner=inner)
    return SeriesValue(sv.value, sv.tail_estimate, sv.terms_used + inner_diag["terms"],
                       sv.converged and inner_diag["converged"])


# --------------------------------------------------------------------------
# Phi (triple series)


def phi(p: PhiParams, sigma: float, omega: float, rho: float,
        cfg: EvalConfig = EvalConfig()) -> SeriesValue:
    """Three-variable confluent series Phi(a,b,c,d;e;sigma,omega,rho).

    Direct triple-shell summation for |omega| < 0.5; for omega <= -0.5 the
    sum is continued through the analytic-continuation identity
    Phi = (1-omega)^(-b) PsiPQ(p=q=0)(sigma, omega/(omega-1), rho), whose
    theta argument then lies in (1/3, 1).
    """
    if abs(sigma) >= 1.0 and not _is_nonpos_int(p.a) and not _is_nonpos_int(p.c):
        raise DomainError(f"phi requires |sigma| < 1, got {sigma}")
    if omega >= 1.0:
        raise DomainError(f"phi requires omega < 1, got {omega}")
    if omega <= -0.5 and not _is_nonpos_int(p.b) and not _is_nonpos_int(p.d):
        pp = PsiPQParams(a=p.a, b=p.b, c=p.c, d=p.d, e=p.e, p=0, q=0)
        sv = psi_pq(pp, sigma, omega / (omega - 1.0), rho, cfg)
        w = (1.0 - omega) ** (-p.b)
        return SeriesValue(w * sv.value, abs(w) * sv.tail_estimate,
                           sv.terms_used, sv.converged)
    if abs(omega) >= 1.0:
        raise DomainError(f"phi requires |omega| < 1, got {omega}")

    a, b, c, d, e = p.a, p.b, p.c, p.d, p.e
    P = _Prefix(1.0)
    O = _Prefix(1.0)
    Q = _Prefix(1.0)
    G = _Prefix(1.0)
    p_step = lambda m: (a + m) * (c + m) / (m + 1.0) * sigma
    o_step = lambda n: (b + n) * (d + n) / (n + 1.0) * omega
    q_step = lambda k: rho / (k + 1.0)
    g_step = lambda s: 1.0 / (e + s)

    acc = _Neumaier()
    blocks: list[float] = []
    terms = 0
    max_abs = 0.0
    small_run = 0
    exhausted = True
    smax = 2 * cfg.max_terms
    for s in range(smax + 1):
        mx = min(s, cfg.max_terms)
        P.extend_to(mx, p_step)
        O.extend_to(mx, o_step)
        Q.extend_to(mx, q_step)
        G.extend_to(s, g_step)
        gpair = G.get(s)
        shell_abs = 0.0
        for m in range(max(0, s - 2 * cfg.max_terms), mx + 1):
            pm = P.get(m)
            if pm[0] == 0.0:
                continue
            for n in range(max(0, s - m - cfg.max_terms), min(s - m, cfg.max_terms) + 1):
                k = s - m - n
                t = _combine(pm, O.get(n), Q.get(k), gpair)
                terms += 1
                if t != 0.0:
                    acc.add(t)
                    shell_abs += abs(t)
                    if abs(t) > max_abs:
                        max_abs = abs(t)
        blocks.append(shell_abs)
        if shell_abs <= _stop_threshold(acc.total, cfg):
            small_run += 1
            if small_run >= 2 and s >= 2:
                exhausted = False
                break
        else:
            small_run = 0
    return _finish(acc.total, blocks, terms, exhausted, max_abs, cfg)
