"""Residual-based verification of the radial-derivative commutator identities.

Each ``verify_*`` operation evaluates the two sides of one differentiation
identity on concrete jets and reports the max-abs coefficient difference.
The identities are polynomial identities in the jet coefficients, so in
the exact regime a correct implementation must produce a residual that is
*literally zero*; the float regime substitutes a tolerance (used for
exponents that are not rational).

Identity ids (the wire names used in reports and by the CLI):

========  ==================================================================
eq1.2     reciprocal expansion of R^m(f^(-1) h) through R^m(f^k h)
eq1.3     power commutator: R^m(f^t h) - f^t R^m h via rho-weighted defects
eq1.4     log commutator: R^m((log f) h) - (log f) R^m h via a-weighted defects
eq3.4     stratum reduction: c-weighted defect combinations equal the
          stratified operator built from composition-derivative tables
eq3.6     power commutator expanded through the u/c tables (no rho)
eq3.9     log commutator expanded through the v/c tables (no a)
fdb       composition-derivative expansion of R^nu(f^k)
========  ==================================================================
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .coefficients import (
    ConsistencyError,
    a_coefficients,
    binomial,
    c_table,
    falling_factorial,
    fdb_table,
    log_derivative_factors,
    power_coefficients_float,
    power_derivative_factors,
    rho_coefficients,
)
from .jets import DEFAULT_TOL, EXACT, FLOAT, ConstantTermError, Jet
from .rationals import format_rational

_PARAM_ORDER = ("n", "m", "k", "nu", "D", "t", "r", "seed")


@dataclass
class VerificationReport:
    """Outcome of one identity trial.

    ``residual`` is a Fraction in the exact regime (zero required to pass)
    and a float in the float regime (compared against ``tol``).
    """

    identity: str
    params: dict
    residual: Fraction | float
    passed: bool
    exact: bool
    tol: float | None = None
    elapsed: float = 0.0

    @property
    def residual_is_zero(self) -> bool:
        return self.residual == 0

    def to_json_dict(self) -> dict:
        out = {"id": self.identity}
        for key in _PARAM_ORDER:
            if key in self.params and self.params[key] is not None:
                value = self.params[key]
                out[key] = format_rational(value) if isinstance(value, Fraction) else value
        if self.exact:
            out["residual"] = "0" if self.residual == 0 else format_rational(self.residual)
        else:
            out["residual"] = float(self.residual)
        out["pass"] = self.passed
        return out

    def to_json_line(self) -> str:
        return json.dumps(self.to_json_dict(), separators=(",", ":"))


def _passed(residual, exact: bool, tol: float | None) -> bool:
    if exact:
        return residual == 0
    return residual <= (DEFAULT_TOL if tol is None else tol)


def _report(identity, params, residual, jet_exact, tol, t0) -> VerificationReport:
    return VerificationReport(
        identity=identity,
        params=params,
        residual=residual,
        passed=_passed(residual, jet_exact, tol),
        exact=jet_exact,
        tol=None if jet_exact else (DEFAULT_TOL if tol is None else tol),
        elapsed=time.perf_counter() - t0,
    )


# -- Leibniz building blocks -------------------------------------------------


def _defect(g: Jet, h: Jet, m: int) -> Jet:
    """R^m(g h) - g R^m h, computed directly."""
    return (g * h).radial_power(m) - g * h.radial_power(m)


def leibniz_defect(g: Jet, h: Jet, m: int) -> Jet:
    """sum_{nu=1..m} C(m,nu) (R^nu g)(R^(m-nu) h): the defect via the product rule."""
    acc = Jet.zero(g.n, g.D, g.regime)
    for nu in range(1, m + 1):
        acc = acc + (g.radial_power(nu) * h.radial_power(m - nu)).scale(binomial(m, nu))
    return acc


def commutator_defect(g: Jet, h: Jet, m: int, *, tol: float | None = None) -> Jet:
    """R^m(g h) - g R^m h, cross-checked against the Leibniz form.

    The two computations are independent; a disagreement (exact mismatch in
    the exact regime, beyond ``tol`` in the float regime) raises
    :class:`~radialjet.coefficients.ConsistencyError`.
    """
    g._check_match(h)
    if m < 0:
        raise ValueError("commutator defect needs m >= 0")
    direct = _defect(g, h, m)
    expanded = leibniz_defect(g, h, m)
    diff = direct.max_abs_diff(expanded)
    limit = 0 if g.regime == EXACT else (DEFAULT_TOL if tol is None else tol)
    if diff > limit:
        raise ConsistencyError(
            f"commutator-defect routes disagree (m={m}): max-abs {diff}"
        )
    return direct


# -- the three headline identities -------------------------------------------


def _power_tables(m: int, t, regime: str):
    """(rho_list, rho0) in the scalar type matching the regime."""
    if regime == EXACT:
        table = rho_coefficients(m, Fraction(t))
        return list(table.rho), table.rho0
    if isinstance(t, Fraction):
        table = rho_coefficients(m, t)
        return [float(v) for v in table.rho], float(table.rho0)
    rho0, rho = power_coefficients_float(m, float(t))
    return rho, rho0


def _require_power_preconditions(f: Jet, t):
    if f.regime == EXACT:
        if f.constant_term != 1:
            raise ConstantTermError(
                f"exact-regime power identity needs f(0) = 1, got {f.constant_term}"
            )
    elif not f.constant_term:
        raise ConstantTermError("power identity needs f(0) != 0")


def verify_power_identity(
    f: Jet, h: Jet, m: int, t, *, tol: float | None = None, seed=None
) -> VerificationReport:
    """Residual of the power commutator identity at exponent t.

    Left side: R^m(f^t h) - f^t R^m h with f^t = exp(t log f).
    Right side: f^t * sum_{k=1..m} (rho_k / f^k) (R^m(f^k h) - f^k R^m h).
    """
    f._check_match(h)
    _require_power_preconditions(f, t)
    t0 = time.perf_counter()
    rho, _ = _power_tables(m, t, f.regime)
    ft = f.real_pow(t)
    lhs = _defect(ft, h, m)
    finv = f.inverse()
    fk = fik = None
    acc = Jet.zero(f.n, f.D, f.regime)
    for k in range(1, m + 1):
        fk = f if fk is None else fk * f
        fik = finv if fik is None else fik * finv
        acc = acc + (fik * _defect(fk, h, m)).scale(rho[k - 1])
    rhs = ft * acc
    residual = lhs.max_abs_diff(rhs)
    params = {
        "n": f.n, "m": m, "D": f.D,
        "t": Fraction(t) if f.regime == EXACT or isinstance(t, Fraction) else float(t),
        "seed": seed,
    }
    return _report("eq1.3", params, residual, f.regime == EXACT, tol, t0)


def power_reconstruction(f: Jet, h: Jet, m: int, t) -> Jet:
    """R^m(f^t h) rebuilt from the identity's right-hand side.

    Equals sum_{k=0..m} rho_k f^(t-k) R^m(f^k h) with
    rho_0 = 1 - rho_1 - ... - rho_m; used for cross-checks between
    identities (e.g. t = -1 against the reciprocal expansion).
    """
    f._check_match(h)
    _require_power_preconditions(f, t)
    rho, rho0 = _power_tables(m, t, f.regime)
    ft = f.real_pow(t)
    finv = f.inverse()
    acc = h.radial_power(m).scale(rho0)
    fk = fik = None
    for k in range(1, m + 1):
        fk = f if fk is None else fk * f
        fik = finv if fik is None else fik * finv
        acc = acc + (fik * (fk * h).radial_power(m)).scale(rho[k - 1])
    return ft * acc


def verify_log_identity(
    f: Jet, h: Jet, m: int, *, tol: float | None = None, seed=None
) -> VerificationReport:
    """Residual of the log commutator identity.

    Left side: R^m((log f) h) - (log f) R^m h.
    Right side: sum_{k=1..m} (a_k / f^k) (R^m(f^k h) - f^k R^m h).
    """
    f._check_match(h)
    if f.regime == EXACT and f.constant_term != 1:
        raise ConstantTermError(
            f"exact-regime log identity needs f(0) = 1, got {f.constant_term}"
        )
    if f.regime != EXACT and not f.constant_term:
        raise ConstantTermError("log identity needs f(0) != 0")
    t0 = time.perf_counter()
    table = a_coefficients(m)
    a = list(table.a) if f.regime == EXACT else [float(v) for v in table.a]
    g = f.log_series()
    lhs = _defect(g, h, m)
    finv = f.inverse()
    fk = fik = None
    acc = Jet.zero(f.n, f.D, f.regime)
    for k in range(1, m + 1):
        fk = f if fk is None else fk * f
        fik = finv if fik is None else fik * finv
        acc = acc + (fik * _defect(fk, h, m)).scale(a[k - 1])
    residual = lhs.max_abs_diff(acc)
    params = {"n": f.n, "m": m, "D": f.D, "seed": seed}
    return _report("eq1.4", params, residual, f.regime == EXACT, tol, t0)


def reciprocal_expansion(f: Jet, h: Jet, m: int) -> Jet:
    """The expansion of R^m(f^(-1) h) through the family R^m(f^j h):

    sum_{k=0..m} (-1)^(m-k) ((m+1)! / (k! (m+1-k)!)) f^(-(m-k+1)) R^m(f^(m-k) h).
    """
    f._check_match(h)
    if not f.constant_term:
        raise ConstantTermError("reciprocal expansion needs f(0) != 0")
    finv = f.inverse()
    acc = Jet.zero(f.n, f.D, f.regime)
    for k in range(m + 1):
        coeff = (-1) ** (m - k) * binomial(m + 1, k)
        term = finv.int_pow(m - k + 1) * (f.int_pow(m - k) * h).radial_power(m)
        acc = acc + term.scale(coeff)
    return acc


def verify_reciprocal_identity(
    f: Jet, h: Jet, m: int, *, tol: float | None = None, seed=None
) -> VerificationReport:
    """Residual of R^m(f^(-1) h) against its expansion through R^m(f^k h).

    Only integer powers appear, so the exact regime admits any nonzero
    rational constant term (f(0) = 1 is not required here).
    """
    t0 = time.perf_counter()
    lhs = (f.inverse() * h).radial_power(m)
    rhs = reciprocal_expansion(f, h, m)
    residual = lhs.max_abs_diff(rhs)
    params = {"n": f.n, "m": m, "D": f.D, "seed": seed}
    return _report("eq1.2", params, residual, f.regime == EXACT, tol, t0)


# -- stratified operator and its reduction -----------------------------------


def _radial_tower(f: Jet, m: int) -> list[Jet]:
    """[R^1 f, ..., R^m f]."""
    tower = []
    g = f
    for _ in range(m):
        g = g.radial_power(1)
        tower.append(g)
    return tower


def _stratum_product(tower: list[Jet], alpha) -> Jet | None:
    """prod_j (R^j f)^(alpha_j), or None when alpha = 0 (the empty product)."""
    out = None
    for j, aj in enumerate(alpha, start=1):
        if aj:
            p = tower[j - 1].int_pow(aj)
            out = p if out is None else out * p
    return out


def stratum_operator(f: Jet, h: Jet, m: int, i: int) -> Jet:
    """The stratified commutator operator of depth i:

    f^(-i) sum_{nu=i..m} C(m,nu) sum_{alpha in A_{nu,i}} b_alpha
           (R f, ..., R^nu f)^alpha R^(m-nu) h,

    where A_{nu,i} collects the composition-derivative indices of order nu
    with exactly i outer derivatives.
    """
    f._check_match(h)
    if not 1 <= i <= m:
        raise ValueError(f"stratum depth must satisfy 1 <= i <= m, got i={i}, m={m}")
    if not f.constant_term:
        raise ConstantTermError("stratum operator needs f(0) != 0")
    tower = _radial_tower(f, m)
    acc = Jet.zero(f.n, f.D, f.regime)
    for nu in range(i, m + 1):
        coef = binomial(m, nu)
        h_part = h.radial_power(m - nu)
        for alpha, b in fdb_table(nu).stratum(i):
            prod = _stratum_product(tower, alpha)
            acc = acc + (prod * h_part).scale(coef * b)
    return f.inverse().int_pow(i) * acc


def verify_stratum_reduction(
    f: Jet, h: Jet, m: int, r: int, *, tol: float | None = None, seed=None
) -> VerificationReport:
    """Residual of the c-weighted defect combination against the stratum operator:

    sum_{k=1..m} (c_{k,r} / f^k) sum_{nu=1..m} C(m,nu) (R^nu f^k)(R^(m-nu) h)
        =  stratum_operator(f, h, m, r).
    """
    f._check_match(h)
    if not 1 <= r <= m:
        raise ValueError(f"need 1 <= r <= m, got r={r}, m={m}")
    t0 = time.perf_counter()
    c = c_table(m)
    finv = f.inverse()
    fk = fik = None
    acc = Jet.zero(f.n, f.D, f.regime)
    for k in range(1, m + 1):
        fk = f if fk is None else fk * f
        fik = finv if fik is None else fik * finv
        ckr = c.entry(k, r)
        if ckr:
            coeff = ckr if f.regime == EXACT else float(ckr)
            acc = acc + (fik * leibniz_defect(fk, h, m)).scale(coeff)
    rhs = stratum_operator(f, h, m, r)
    residual = acc.max_abs_diff(rhs)
    params = {"n": f.n, "m": m, "D": f.D, "r": r, "seed": seed}
    return _report("eq3.4", params, residual, f.regime == EXACT, tol, t0)


def verify_fdb_power(
    f: Jet, k: int, nu: int, *, tol: float | None = None, seed=None
) -> VerificationReport:
    """Residual of the composition-derivative expansion of R^nu(f^k):

    R^nu(f^k) = sum_{i=1..min(k,nu)} (k!/(k-i)!) f^(k-i)
                sum_{alpha in A_{nu,i}} b_alpha (R f, ..., R^nu f)^alpha.
    """
    if k < 1 or nu < 1:
        raise ValueError("verify_fdb_power needs k >= 1 and nu >= 1")
    t0 = time.perf_counter()
    lhs = f.int_pow(k).radial_power(nu)
    tower = _radial_tower(f, nu)
    acc = Jet.zero(f.n, f.D, f.regime)
    for i in range(1, min(k, nu) + 1):
        beta_ik = falling_factorial(k, i)
        fki = f.int_pow(k - i)
        for alpha, b in fdb_table(nu).stratum(i):
            prod = _stratum_product(tower, alpha)
            acc = acc + (fki * prod).scale(beta_ik * b)
    residual = lhs.max_abs_diff(acc)
    params = {"n": f.n, "k": k, "nu": nu, "D": f.D, "seed": seed}
    return _report("fdb", params, residual, f.regime == EXACT, tol, t0)


def verify_power_expansion(
    f: Jet, h: Jet, m: int, t, *, tol: float | None = None, seed=None
) -> VerificationReport:
    """Residual of the power commutator expanded through the u/c tables:

    sum_nu C(m,nu) (R^nu f^t)(R^(m-nu) h)
        = f^t sum_{r=1..m} u(r) sum_{k=1..m} (c_{k,r} / f^k)
              sum_nu C(m,nu) (R^nu f^k)(R^(m-nu) h).
    """
    f._check_match(h)
    _require_power_preconditions(f, t)
    t0 = time.perf_counter()
    exact = f.regime == EXACT
    u = power_derivative_factors(m, Fraction(t)) if exact or isinstance(t, Fraction) else None
    if u is None:
        tf = float(t)
        u = []
        acc_u = 1.0
        for r in range(1, m + 1):
            acc_u *= tf - (r - 1)
            u.append(acc_u)
    elif not exact:
        u = [float(v) for v in u]
    c = c_table(m)
    ft = f.real_pow(t)
    lhs = leibniz_defect(ft, h, m)
    finv = f.inverse()
    defects = []
    fk = None
    for k in range(1, m + 1):
        fk = f if fk is None else fk * f
        defects.append(leibniz_defect(fk, h, m))
    acc = Jet.zero(f.n, f.D, f.regime)
    fik = None
    for k in range(1, m + 1):
        fik = finv if fik is None else fik * finv
        weight = sum(
            (u[r - 1] * c.entry(k, r) for r in range(1, m + 1)),
            Fraction(0) if exact else 0.0,
        )
        acc = acc + (fik * defects[k - 1]).scale(weight)
    rhs = ft * acc
    residual = lhs.max_abs_diff(rhs)
    params = {
        "n": f.n, "m": m, "D": f.D,
        "t": Fraction(t) if exact or isinstance(t, Fraction) else float(t),
        "seed": seed,
    }
    return _report("eq3.6", params, residual, exact, tol, t0)


def verify_log_expansion(
    f: Jet, h: Jet, m: int, *, tol: float | None = None, seed=None
) -> VerificationReport:
    """Residual of the log commutator expanded through the v/c tables:

    sum_nu C(m,nu) (R^nu log f)(R^(m-nu) h)
        = sum_{r=1..m} v(r) sum_{k=1..m} (c_{k,r} / f^k)
              sum_nu C(m,nu) (R^nu f^k)(R^(m-nu) h).
    """
    f._check_match(h)
    if f.regime == EXACT and f.constant_term != 1:
        raise ConstantTermError(
            f"exact-regime log expansion needs f(0) = 1, got {f.constant_term}"
        )
    t0 = time.perf_counter()
    exact = f.regime == EXACT
    v = log_derivative_factors(m)
    if not exact:
        v = [float(x) for x in v]
    c = c_table(m)
    lhs = leibniz_defect(f.log_series(), h, m)
    finv = f.inverse()
    acc = Jet.zero(f.n, f.D, f.regime)
    fk = fik = None
    for k in range(1, m + 1):
        fk = f if fk is None else fk * f
        fik = finv if fik is None else fik * finv
        weight = sum(
            (v[r - 1] * c.entry(k, r) for r in range(1, m + 1)),
            Fraction(0) if exact else 0.0,
        )
        acc = acc + (fik * leibniz_defect(fk, h, m)).scale(weight)
    residual = lhs.max_abs_diff(acc)
    params = {"n": f.n, "m": m, "D": f.D, "seed": seed}
    return _report("eq3.9", params, residual, exact, tol, t0)


# -- numeric norm-bound demonstrations ----------------------------------------

POWER_MODE = "power"
LOG_MODE = "log"


@dataclass
class NormBoundReport:
    """Numeric evaluation of one multiplier-bound inequality chain.

    ``lhs`` is computed exactly from jet coefficients; ``rhs`` uses sampled
    sup-norms, which under-estimate the true sups.  The check therefore
    asserts lhs <= headroom * rhs with a documented headroom factor (the
    sampled quantities sit only on the larger side).  ``rhs_chain_end`` is
    the final, weaker bound of the chain (no additional sampling error);
    rhs <= rhs_chain_end holds exactly.
    """

    mode: str
    params: dict
    lhs: float
    rhs: float
    rhs_chain_end: float
    headroom: float
    slack: float
    min_modulus: float
    passed: bool
    elapsed: float = 0.0

    def to_json_dict(self) -> dict:
        out = {"id": f"bound-{self.mode}"}
        for key in ("n", "m", "s", "t", "seed"):
            if key in self.params and self.params[key] is not None:
                value = self.params[key]
                out[key] = float(value) if isinstance(value, Fraction) else value
        out.update(
            lhs=self.lhs,
            rhs=self.rhs,
            rhs_chain_end=self.rhs_chain_end,
            headroom=self.headroom,
            slack=self.slack,
            min_modulus=self.min_modulus,
        )
        out["pass"] = self.passed
        return out

    def to_json_line(self) -> str:
        return json.dumps(self.to_json_dict(), separators=(",", ":"))


def norm_bound_demo(
    f: Jet,
    h: Jet,
    m: int,
    s,
    mode: str,
    t=None,
    *,
    sampler=None,
    headroom: float = 1.1,
    min_modulus: float = 1e-6,
    seed=None,
) -> NormBoundReport:
    """Evaluate the norm-bound chain behind the multiplier statements.

    Power mode (exponent t): from R^m(f^t h) = sum_k rho_k f^(t-k) R^m(f^k h),

        ||R^m(f^t h)||_s <= sum_{k=0..m} |rho_k| sup|f^(t-k)| ||R^m(f^k h)||_s
                         <= sum_{k=0..m} |rho_k| sup|f^(t-k)| ||f^k h||_{m,s}.

    Log mode: from R^m((log f) h) = (log f) R^m h + sum_k a_k f^(-k) R^m(f^k h),

        ||R^m((log f) h)||_s
            <= sup|log f| ||R^m h||_s + sum_{k=0..m} |a_k| c^(-k) ||R^m(f^k h)||_s
            <= sup|log f| ||h||_{m,s} + sum_{k=0..m} |a_k| c^(-k) ||f^k h||_{m,s},

    with c the sampled min of |f| (the demo refuses if that min drops
    below ``min_modulus``).  Requires float-regime jets; f and h are
    treated as polynomials and re-embedded at a cap large enough that all
    products f^k h are exact, so the sampled sup-norms are the only
    one-sided quantities.
    """
    from .spaces import SamplerConfig, bergman_norm_sq, evaluate_jet, hms_norm_sq, sample_points

    if mode not in (POWER_MODE, LOG_MODE):
        raise ValueError(f"unknown mode {mode!r}")
    if f.regime == EXACT or h.regime == EXACT:
        raise ValueError("norm-bound demos run in the float regime")
    if mode == POWER_MODE and t is None:
        raise ValueError("power mode needs an exponent t")
    f._check_match(h)
    t0 = time.perf_counter()

    cap = max(f.D, h.D, m * f.support_degree + h.support_degree)
    fw, hw = f.extend(cap), h.extend(cap)

    pts = sample_points(f.n, sampler or SamplerConfig())
    fvals = evaluate_jet(fw, pts)
    fabs = abs(fvals)
    cmin = float(fabs.min())
    if cmin < min_modulus:
        raise ValueError(
            f"sampled |f| reaches {cmin:.3e} < {min_modulus:.1e}; "
            "the bound chain needs f bounded away from zero"
        )

    powers = [hw]
    fk = None
    for _ in range(m):
        fk = fw if fk is None else fk * fw
        powers.append(fk * hw)
    norm_r = [math.sqrt(float(bergman_norm_sq(g.radial_power(m), s))) for g in powers]
    norm_full = [math.sqrt(float(hms_norm_sq(g, m, s))) for g in powers]

    if mode == POWER_MODE:
        tf = float(t) if not isinstance(t, complex) else t.real
        rho, rho0 = _power_tables(m, t if isinstance(t, Fraction) else tf, FLOAT)
        coeffs = [abs(rho0)] + [abs(v) for v in rho]
        sups = [float(np.max(fabs ** (tf - k))) for k in range(m + 1)]
        lhs = math.sqrt(
            float(bergman_norm_sq((fw.real_pow(tf) * hw).radial_power(m), s))
        )
        rhs = sum(c * sp * nr for c, sp, nr in zip(coeffs, sups, norm_r))
        rhs_end = sum(c * sp * nf for c, sp, nf in zip(coeffs, sups, norm_full))
        params = {"n": f.n, "m": m, "s": float(s), "t": tf, "seed": seed}
    else:
        table = a_coefficients(m)
        coeffs = [abs(float(table.a0))] + [abs(float(v)) for v in table.a]
        sup_log = float(np.max(np.abs(np.log(fvals))))
        cpow = [cmin ** (-k) for k in range(m + 1)]
        lhs = math.sqrt(
            float(bergman_norm_sq((fw.log_series() * hw).radial_power(m), s))
        )
        rhs = sup_log * norm_r[0] + sum(
            c * cp * nr for c, cp, nr in zip(coeffs, cpow, norm_r)
        )
        rhs_end = sup_log * norm_full[0] + sum(
            c * cp * nf for c, cp, nf in zip(coeffs, cpow, norm_full)
        )
        params = {"n": f.n, "m": m, "s": float(s), "seed": seed}

    chain_ok = rhs <= rhs_end * (1 + 1e-12)
    passed = lhs <= headroom * rhs and chain_ok
    return NormBoundReport(
        mode=mode,
        params=params,
        lhs=lhs,
        rhs=rhs,
        rhs_chain_end=rhs_end,
        headroom=headroom,
        slack=headroom * rhs - lhs,
        min_modulus=cmin,
        passed=passed,
        elapsed=time.perf_counter() - t0,
    )
