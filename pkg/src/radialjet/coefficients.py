"""Exact coefficient tables for the radial-derivative commutator calculus.

Everything here is rational and self-verifying.  The central object is the
falling-factorial matrix ``beta`` with entries k!/(k-i)! for i <= k (the
i-th derivative data of x^k at a generic point, divided by the power of x),
and its inverse ``c``.  Weighted column sums of ``c`` against the
derivative factors of x^t and log x produce the correction coefficients
``rho`` and ``a`` that expand the m-th radial derivative of f^t*h and
(log f)*h through the family R^m(f^k h), k = 1..m.

Each of ``c``, ``rho`` and ``a`` is computed along two independent routes
(a triangular solve against ``beta`` and a closed form) and the
constructor raises :class:`ConsistencyError` if the routes ever disagree.

The composition-derivative (Faa di Bruno) tables carry, for each order
``nu``, the index set A_nu of multi-indices alpha with
1*alpha_1 + ... + nu*alpha_nu = nu and an integer coefficient b_alpha per
index, built by the one-derivative induction step; they stratify by
|alpha|, the order of the outer derivative they multiply.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .jets import MultiIndex
from .rationals import format_rational


class ConsistencyError(RuntimeError):
    """Two independent computation paths disagreed; an implementation bug."""


def binomial(m: int, nu: int) -> int:
    """The binomial coefficient m! / (nu! (m - nu)!), with range checking."""
    if not 0 <= nu <= m:
        raise ValueError(f"binomial needs 0 <= nu <= m, got nu={nu}, m={m}")
    return math.comb(m, nu)


def falling_factorial(k: int, i: int) -> int:
    """k! / (k - i)! for 0 <= i <= k, else 0."""
    if i < 0:
        raise ValueError("falling factorial needs i >= 0")
    if i > k:
        return 0
    out = 1
    for j in range(k - i + 1, k + 1):
        out *= j
    return out


# -- beta and its inverse ---------------------------------------------------


@dataclass(frozen=True)
class BetaMatrix:
    """Upper-triangular m x m matrix with entries k!/(k-i)!, 1-based (i, k)."""

    m: int
    rows: tuple[tuple[int, ...], ...]

    def entry(self, i: int, k: int) -> int:
        return self.rows[i - 1][k - 1]

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.rows]


@lru_cache(maxsize=None)
def beta_matrix(m: int) -> BetaMatrix:
    """The falling-factorial matrix of order m (diagonal k!, hence invertible)."""
    if m < 1:
        raise ValueError("beta_matrix needs m >= 1")
    rows = tuple(
        tuple(falling_factorial(k, i) for k in range(1, m + 1))
        for i in range(1, m + 1)
    )
    return BetaMatrix(m, rows)


@dataclass(frozen=True)
class CTable:
    """The inverse of :class:`BetaMatrix`: upper-triangular rationals, c_{k,k} = 1/k!."""

    m: int
    rows: tuple[tuple[Fraction, ...], ...]

    def entry(self, k: int, r: int) -> Fraction:
        return self.rows[k - 1][r - 1]

    def to_lists(self) -> list[list[str]]:
        return [[format_rational(v) for v in row] for row in self.rows]


def c_table_by_solve(m: int) -> tuple[tuple[Fraction, ...], ...]:
    """Invert beta column by column with back-substitution (exact)."""
    beta = beta_matrix(m)
    cols: list[list[Fraction]] = []
    for r in range(1, m + 1):
        col = [Fraction(0)] * m
        for i in range(r, 0, -1):
            rhs = Fraction(1 if i == r else 0)
            rhs -= sum(
                (Fraction(beta.entry(i, k)) * col[k - 1] for k in range(i + 1, r + 1)),
                Fraction(0),
            )
            col[i - 1] = rhs / beta.entry(i, i)
        cols.append(col)
    return tuple(tuple(cols[r][k] for r in range(m)) for k in range(m))


def c_table_closed_form(m: int) -> tuple[tuple[Fraction, ...], ...]:
    """c_{k,r} = (-1)^(r-k) / (k! (r-k)!) for r >= k, else 0."""
    return tuple(
        tuple(
            Fraction((-1) ** (r - k), math.factorial(k) * math.factorial(r - k))
            if r >= k
            else Fraction(0)
            for r in range(1, m + 1)
        )
        for k in range(1, m + 1)
    )


@lru_cache(maxsize=None)
def c_table(m: int) -> CTable:
    """The inverse table, computed by both routes; raises if they disagree."""
    if m < 1:
        raise ValueError("c_table needs m >= 1")
    solved = c_table_by_solve(m)
    closed = c_table_closed_form(m)
    if solved != closed:
        raise ConsistencyError(
            f"c-table routes disagree at m={m}: solve={solved}, closed={closed}"
        )
    return CTable(m, solved)


# -- correction coefficients for powers and logs ----------------------------


def power_derivative_factors(m: int, t: Fraction) -> tuple[Fraction, ...]:
    """u(r) = t (t-1) ... (t-r+1): the r-th derivative of x^t is u(r) x^(t-r)."""
    u = []
    acc = Fraction(1)
    for r in range(1, m + 1):
        acc *= t - (r - 1)
        u.append(acc)
    return tuple(u)


def log_derivative_factors(m: int) -> tuple[Fraction, ...]:
    """v(r) = (-1)^(r-1) (r-1)!: the r-th derivative of log x is v(r) x^(-r)."""
    return tuple(
        Fraction((-1) ** (r - 1) * math.factorial(r - 1)) for r in range(1, m + 1)
    )


@dataclass(frozen=True)
class PowerCoefficients:
    """Correction coefficients rho_1..rho_m for the exponent t, plus rho_0."""

    m: int
    t: Fraction
    u: tuple[Fraction, ...]
    rho: tuple[Fraction, ...]
    rho0: Fraction

    def to_json_dict(self) -> dict:
        return {
            "m": self.m,
            "t": format_rational(self.t),
            "rho": [format_rational(v) for v in self.rho],
            "rho0": format_rational(self.rho0),
        }


def rho_by_solve(m: int, t: Fraction) -> tuple[Fraction, ...]:
    """rho_k = sum_r u(r) c_{k,r}, against the inverse table."""
    c = c_table(m)
    u = power_derivative_factors(m, t)
    return tuple(
        sum((u[r - 1] * c.entry(k, r) for r in range(1, m + 1)), Fraction(0))
        for k in range(1, m + 1)
    )


def rho_closed_form(m: int, t: Fraction) -> tuple[Fraction, ...]:
    """rho_k = ((-1)^k / (k! (m-k)!)) * prod_{i in {0..m}, i != k} (i - t)."""
    out = []
    for k in range(1, m + 1):
        prod = Fraction(1)
        for i in range(m + 1):
            if i != k:
                prod *= i - t
        out.append(
            Fraction((-1) ** k, math.factorial(k) * math.factorial(m - k)) * prod
        )
    return tuple(out)


@lru_cache(maxsize=None)
def rho_coefficients(m: int, t) -> PowerCoefficients:
    """Power-correction coefficients, dual-path checked; t must be rational."""
    if m < 1:
        raise ValueError("rho_coefficients needs m >= 1")
    t = Fraction(t)
    solved = rho_by_solve(m, t)
    closed = rho_closed_form(m, t)
    if solved != closed:
        raise ConsistencyError(
            f"rho routes disagree at m={m}, t={t}: solve={solved}, closed={closed}"
        )
    rho0 = Fraction(1) - sum(solved, Fraction(0))
    return PowerCoefficients(m, t, power_derivative_factors(m, t), solved, rho0)


def power_coefficients_float(m: int, t: float) -> tuple[float, list[float]]:
    """(rho_0, [rho_1..rho_m]) as floats, for non-rational exponents.

    Float evaluation of the closed product form; the exact table is not
    available when t is irrational.
    """
    rho = []
    for k in range(1, m + 1):
        prod = 1.0
        for i in range(m + 1):
            if i != k:
                prod *= i - t
        rho.append((-1) ** k * prod / (math.factorial(k) * math.factorial(m - k)))
    return 1.0 - sum(rho), rho


@dataclass(frozen=True)
class LogCoefficients:
    """Correction coefficients a_1..a_m for the logarithm, plus a_0."""

    m: int
    v: tuple[Fraction, ...]
    a: tuple[Fraction, ...]
    a0: Fraction

    def to_json_dict(self) -> dict:
        return {
            "m": self.m,
            "a": [format_rational(v) for v in self.a],
            "a0": format_rational(self.a0),
        }


def a_by_solve(m: int) -> tuple[Fraction, ...]:
    """a_k = sum_r v(r) c_{k,r}."""
    c = c_table(m)
    v = log_derivative_factors(m)
    return tuple(
        sum((v[r - 1] * c.entry(k, r) for r in range(1, m + 1)), Fraction(0))
        for k in range(1, m + 1)
    )


def a_closed_form(m: int) -> tuple[Fraction, ...]:
    """a_k = ((-1)^(k+1) / k) * binomial(m, k)."""
    return tuple(
        Fraction((-1) ** (k + 1), k) * binomial(m, k) for k in range(1, m + 1)
    )


@lru_cache(maxsize=None)
def a_coefficients(m: int) -> LogCoefficients:
    """Log-correction coefficients, dual-path checked."""
    if m < 1:
        raise ValueError("a_coefficients needs m >= 1")
    solved = a_by_solve(m)
    closed = a_closed_form(m)
    if solved != closed:
        raise ConsistencyError(
            f"a routes disagree at m={m}: solve={solved}, closed={closed}"
        )
    a0 = -sum(solved, Fraction(0))
    return LogCoefficients(m, log_derivative_factors(m), solved, a0)


# -- composition-derivative (Faa di Bruno) tables ---------------------------


@dataclass(frozen=True)
class FdBTable:
    """Index set A_nu with integer coefficients b_alpha, stratified by |alpha|.

    ``entries`` is sorted graded-lex (by |alpha|, then lexicographically);
    every key alpha satisfies sum_j j*alpha_j = nu and every b_alpha >= 1.
    """

    nu: int
    entries: tuple[tuple[MultiIndex, int], ...]

    def coefficient(self, alpha) -> int:
        alpha = tuple(alpha)
        for key, b in self.entries:
            if tuple(key) == alpha:
                return b
        raise KeyError(f"{alpha} is not in A_{self.nu}")

    def as_dict(self) -> dict[MultiIndex, int]:
        return dict(self.entries)

    def stratum(self, i: int) -> tuple[tuple[MultiIndex, int], ...]:
        """The entries with |alpha| = i (i outer derivatives)."""
        return tuple((a, b) for a, b in self.entries if a.weight == i)

    def to_json_dict(self) -> dict:
        return {
            "nu": self.nu,
            "b": {",".join(map(str, a)): b for a, b in self.entries},
        }


@lru_cache(maxsize=None)
def fdb_table(nu: int) -> FdBTable:
    """Composition-derivative coefficients of order nu, built by induction.

    Start from {(1,): 1}.  Differentiating a term
    b * F^(|alpha|)(G) * prod_j (G^(j))^(alpha_j) once sends b to the index
    with alpha_1 incremented (the outer chain-rule term) and, for each j
    with alpha_j > 0, sends alpha_j * b to the index with alpha_j
    decremented and alpha_{j+1} incremented.
    """
    if nu < 1:
        raise ValueError("fdb_table needs nu >= 1")
    table: dict[tuple[int, ...], int] = {(1,): 1}
    for order in range(1, nu):
        nxt: dict[tuple[int, ...], int] = {}
        for alpha, b in table.items():
            ext = alpha + (0,)
            chain = (ext[0] + 1,) + ext[1:]
            nxt[chain] = nxt.get(chain, 0) + b
            for j, aj in enumerate(ext[:-1]):
                if aj:
                    moved = list(ext)
                    moved[j] -= 1
                    moved[j + 1] += 1
                    moved = tuple(moved)
                    nxt[moved] = nxt.get(moved, 0) + aj * b
        table = nxt
    entries = sorted(table.items(), key=lambda kv: (sum(kv[0]), kv[0]))
    return FdBTable(nu, tuple((MultiIndex(a), b) for a, b in entries))
