"""Exact arithmetic of total-degree-truncated power series at the origin of C^n.

A *jet* is a power series in z_1..z_n kept only up to a total-degree cap D.
Every operation here (multiplication, integer and real powers, log, exp,
and the radial derivative R = z_1*d_1 + ... + z_n*d_n) maps degree-d data
to degree-d data, so the coefficients of a jet computation agree with the
coefficients of the corresponding computation on genuine analytic
functions up to degree D.  Truncation loses nothing: computing at a larger
cap and truncating afterwards gives the same jet as computing at the
smaller cap directly.  That is what makes exact, zero-residual testing of
differentiation identities possible on finite data.

Two scalar regimes are supported:

* ``"exact"`` -- rational coefficients with arbitrary-precision integer
  arithmetic.  Internally a jet stores one integer numerator per monomial
  plus a single shared positive denominator, which keeps the repeated
  truncated convolutions fast; the public coefficient type is
  ``fractions.Fraction``.  No rounding ever occurs.
* ``"float"`` -- complex double coefficients.  Comparisons take a
  caller-supplied absolute tolerance (default ``1e-10``) on the max-abs
  coefficient difference.

Jets are immutable values; all operations are pure functions returning
new jets, so they are safe to evaluate concurrently.
"""

from __future__ import annotations

import cmath
import itertools
import math
import random
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

from .rationals import format_rational, parse_rational

EXACT = "exact"
FLOAT = "float"
REGIMES = (EXACT, FLOAT)

#: Default absolute tolerance for float-regime coefficient comparisons.
DEFAULT_TOL = 1e-10

UNIT_CONSTANT = "unit-constant"
FREE = "free"


class JetShapeError(ValueError):
    """Jets with different (n, D, regime) were combined."""


class ConstantTermError(ValueError):
    """A functional-calculus operation met an inadmissible constant term."""


class MultiIndex(tuple):
    """A multi-index: a tuple of non-negative integers with weight |alpha|."""

    __slots__ = ()

    def __new__(cls, entries: Iterable[int]) -> "MultiIndex":
        entries = tuple(int(e) for e in entries)
        if any(e < 0 for e in entries):
            raise ValueError(f"multi-index entries must be >= 0, got {entries}")
        return super().__new__(cls, entries)

    @property
    def weight(self) -> int:
        return sum(self)

    def __repr__(self) -> str:  # pragma: no cover
        return f"MultiIndex{tuple(self)}"


@lru_cache(maxsize=None)
def monomial_indices(n: int, D: int) -> tuple[MultiIndex, ...]:
    """All multi-indices of length ``n`` and weight <= ``D``, graded-lex order.

    Order: ascending total weight, ties broken lexicographically on the
    entries.  This order is the canonical enumeration used for storage and
    serialization throughout the package.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    if D < 0:
        raise ValueError("need D >= 0")
    exps = [a for a in itertools.product(range(D + 1), repeat=n) if sum(a) <= D]
    exps.sort(key=lambda a: (sum(a), a))
    return tuple(MultiIndex(a) for a in exps)


@lru_cache(maxsize=None)
def _position(n: int, D: int) -> dict[tuple, int]:
    return {tuple(a): i for i, a in enumerate(monomial_indices(n, D))}


@lru_cache(maxsize=None)
def _weights(n: int, D: int) -> tuple[int, ...]:
    return tuple(a.weight for a in monomial_indices(n, D))


@lru_cache(maxsize=None)
def _mul_rows(n: int, D: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """For each basis position i, the (j, k) pairs with z^i * z^j = z^k, |k| <= D."""
    exps = monomial_indices(n, D)
    pos = _position(n, D)
    w = _weights(n, D)
    rows = []
    for i, a in enumerate(exps):
        cap = D - w[i]
        row = [
            (j, pos[tuple(x + y for x, y in zip(a, b))])
            for j, b in enumerate(exps)
            if w[j] <= cap
        ]
        rows.append(tuple(row))
    return tuple(rows)


def _normalize(nums: list[int], den: int) -> tuple[list[int], int]:
    """Divide the numerators and the shared denominator by their content."""
    if den < 0:
        den = -den
        nums = [-v for v in nums]
    g = math.gcd(den, *nums)
    if g > 1:
        nums = [v // g for v in nums]
        den //= g
    return nums, den if den else 1


class Jet:
    """A truncated power series on C^n.  Immutable; see module docstring."""

    __slots__ = ("n", "D", "regime", "_nums", "_den", "_vals")

    def __init__(self, n: int, D: int, regime: str, _internal=None):
        if regime not in REGIMES:
            raise ValueError(f"unknown regime {regime!r}")
        self.n = int(n)
        self.D = int(D)
        size = len(monomial_indices(self.n, self.D))
        self.regime = regime
        if _internal is None:
            if regime == EXACT:
                self._nums, self._den = [0] * size, 1
                self._vals = None
            else:
                self._vals = [0j] * size
                self._nums = self._den = None
        elif regime == EXACT:
            self._nums, self._den = _internal
            self._vals = None
        else:
            self._vals = _internal
            self._nums = self._den = None

    # -- constructors -------------------------------------------------

    @classmethod
    def _exact(cls, n: int, D: int, nums: list[int], den: int) -> "Jet":
        return cls(n, D, EXACT, _internal=_normalize(nums, den))

    @classmethod
    def _float(cls, n: int, D: int, vals: list[complex]) -> "Jet":
        return cls(n, D, FLOAT, _internal=vals)

    @classmethod
    def zero(cls, n: int, D: int, regime: str = EXACT) -> "Jet":
        return cls(n, D, regime)

    @classmethod
    def constant(cls, n: int, D: int, value, regime: str = EXACT) -> "Jet":
        out = cls(n, D, regime)
        if regime == EXACT:
            c = Fraction(value)
            out._nums[0], out._den = c.numerator, c.denominator
        else:
            out._vals[0] = complex(value)
        return out

    @classmethod
    def variable(cls, n: int, D: int, j: int, regime: str = EXACT) -> "Jet":
        """The coordinate function z_j (1-based j)."""
        if not 1 <= j <= n:
            raise ValueError(f"variable index {j} out of range 1..{n}")
        if D < 1:
            raise ValueError("degree cap must be >= 1 to hold a variable")
        alpha = tuple(1 if i == j - 1 else 0 for i in range(n))
        return cls.from_coeffs(n, D, {alpha: 1}, regime)

    @classmethod
    def from_coeffs(cls, n: int, D: int, coeffs: Mapping, regime: str = EXACT) -> "Jet":
        """Build a jet from a mapping multi-index -> coefficient.

        Keys of weight exceeding ``D`` are rejected.
        """
        if regime not in REGIMES:
            raise ValueError(f"unknown regime {regime!r}")
        pos = _position(n, D)
        if regime == EXACT:
            entries = {}
            den = 1
            for alpha, c in coeffs.items():
                key = tuple(int(e) for e in alpha)
                if key not in pos:
                    raise ValueError(f"multi-index {key} outside the (n={n}, D={D}) basis")
                c = Fraction(c)
                entries[pos[key]] = c
                den = den * c.denominator // math.gcd(den, c.denominator)
            nums = [0] * len(pos)
            for i, c in entries.items():
                nums[i] = c.numerator * (den // c.denominator)
            return cls._exact(n, D, nums, den)
        out = cls(n, D, FLOAT)
        for alpha, c in coeffs.items():
            key = tuple(int(e) for e in alpha)
            if key not in pos:
                raise ValueError(f"multi-index {key} outside the (n={n}, D={D}) basis")
            out._vals[pos[key]] = complex(c)
        return out

    # -- inspection ---------------------------------------------------

    def _check_match(self, other: "Jet") -> None:
        if (self.n, self.D, self.regime) != (other.n, other.D, other.regime):
            raise JetShapeError(
                f"jet shape mismatch: (n={self.n}, D={self.D}, {self.regime}) vs "
                f"(n={other.n}, D={other.D}, {other.regime})"
            )

    def coefficient(self, alpha):
        """Coefficient of z^alpha (Fraction in exact regime, complex in float)."""
        key = tuple(int(e) for e in alpha)
        pos = _position(self.n, self.D)
        if key not in pos:
            raise ValueError(f"multi-index {key} outside the (n={self.n}, D={self.D}) basis")
        i = pos[key]
        if self.regime == EXACT:
            return Fraction(self._nums[i], self._den)
        return self._vals[i]

    def coefficients(self) -> dict:
        """Nonzero coefficients as a dict MultiIndex -> scalar, graded-lex order."""
        exps = monomial_indices(self.n, self.D)
        if self.regime == EXACT:
            den = self._den
            return {
                exps[i]: Fraction(v, den) for i, v in enumerate(self._nums) if v
            }
        return {exps[i]: v for i, v in enumerate(self._vals) if v != 0}

    @property
    def constant_term(self):
        if self.regime == EXACT:
            return Fraction(self._nums[0], self._den)
        return self._vals[0]

    @property
    def is_zero(self) -> bool:
        data = self._nums if self.regime == EXACT else self._vals
        return not any(data)

    @property
    def support_degree(self) -> int:
        """Largest total degree carrying a nonzero coefficient (0 for the zero jet)."""
        w = _weights(self.n, self.D)
        data = self._nums if self.regime == EXACT else self._vals
        deg = 0
        for i, v in enumerate(data):
            if v:
                deg = w[i]
        return deg

    # -- ring operations ----------------------------------------------

    def __add__(self, other) -> "Jet":
        if not isinstance(other, Jet):
            return self + Jet.constant(self.n, self.D, other, self.regime)
        self._check_match(other)
        if self.regime == EXACT:
            da, db = self._den, other._den
            g = math.gcd(da, db)
            ma, mb = db // g, da // g
            nums = [x * ma + y * mb for x, y in zip(self._nums, other._nums)]
            return Jet._exact(self.n, self.D, nums, da * ma)
        return Jet._float(self.n, self.D, [x + y for x, y in zip(self._vals, other._vals)])

    __radd__ = __add__

    def __neg__(self) -> "Jet":
        if self.regime == EXACT:
            return Jet(self.n, self.D, EXACT, _internal=([-v for v in self._nums], self._den))
        return Jet._float(self.n, self.D, [-v for v in self._vals])

    def __sub__(self, other) -> "Jet":
        if not isinstance(other, Jet):
            other = Jet.constant(self.n, self.D, other, self.regime)
        return self + (-other)

    def __rsub__(self, other) -> "Jet":
        return (-self) + other

    def scale(self, scalar) -> "Jet":
        """Multiply every coefficient by a scalar."""
        if self.regime == EXACT:
            c = Fraction(scalar)
            nums = [v * c.numerator for v in self._nums]
            return Jet._exact(self.n, self.D, nums, self._den * c.denominator)
        c = complex(scalar)
        return Jet._float(self.n, self.D, [v * c for v in self._vals])

    def __mul__(self, other) -> "Jet":
        if not isinstance(other, Jet):
            return self.scale(other)
        self._check_match(other)
        rows = _mul_rows(self.n, self.D)
        if self.regime == EXACT:
            a, b = self._nums, other._nums
            out = [0] * len(a)
            for i, ai in enumerate(a):
                if ai:
                    for j, k in rows[i]:
                        bj = b[j]
                        if bj:
                            out[k] += ai * bj
            return Jet._exact(self.n, self.D, out, self._den * other._den)
        a, b = self._vals, other._vals
        out = [0j] * len(a)
        for i, ai in enumerate(a):
            if ai:
                for j, k in rows[i]:
                    bj = b[j]
                    if bj:
                        out[k] += ai * bj
        return Jet._float(self.n, self.D, out)

    def __rmul__(self, other) -> "Jet":
        return self.scale(other)

    # -- radial derivative ----------------------------------------------

    def radial(self) -> "Jet":
        """R f, the radial derivative z_1*d_1 f + ... + z_n*d_n f.

        Diagonal on monomials: the z^alpha coefficient is scaled by |alpha|.
        """
        return self.radial_power(1)

    def radial_power(self, m: int) -> "Jet":
        """R^m f: the z^alpha coefficient is scaled by |alpha|^m.  m = 0 is the identity."""
        if m < 0:
            raise ValueError("radial power needs m >= 0")
        if m == 0:
            return self
        w = _weights(self.n, self.D)
        if self.regime == EXACT:
            nums = [v * w[i] ** m if v else 0 for i, v in enumerate(self._nums)]
            return Jet(self.n, self.D, EXACT, _internal=(nums, self._den))
        vals = [v * w[i] ** m if v else 0j for i, v in enumerate(self._vals)]
        return Jet._float(self.n, self.D, vals)

    # -- functional calculus --------------------------------------------

    def int_pow(self, k: int) -> "Jet":
        """f^k for integer k; negative k requires f(0) != 0."""
        k = int(k)
        if k == 0:
            return Jet.constant(self.n, self.D, 1, self.regime)
        base = self if k > 0 else self.inverse()
        e = abs(k)
        result = None
        sq = base
        while e:
            if e & 1:
                result = sq if result is None else result * sq
            e >>= 1
            if e:
                sq = sq * sq
        return result

    def inverse(self) -> "Jet":
        """The jet g with f*g = 1 up to degree D; requires f(0) != 0."""
        c = self.constant_term
        if not c:
            raise ConstantTermError("cannot invert a jet with vanishing constant term")
        # f = c*(1 - u) with u(0) = 0, so 1/f = (1/c) * sum_k u^k.
        u = Jet.constant(self.n, self.D, c, self.regime) - self
        u = u.scale(Fraction(1, 1) / c if self.regime == EXACT else 1.0 / c)
        acc = Jet.constant(self.n, self.D, 1, self.regime)
        power = None
        for _ in range(self.D):
            power = u if power is None else power * u
            if power.is_zero:
                break
            acc = acc + power
        return acc.scale(Fraction(1, 1) / c if self.regime == EXACT else 1.0 / c)

    def log_series(self) -> "Jet":
        """log f.

        Exact regime: requires f(0) = 1; the result is the finite sum
        sum_{k=1..D} (-1)^(k+1) (f-1)^k / k and has zero constant term.
        Float regime: requires f(0) != 0; the constant term is the
        principal branch of log f(0).
        """
        c = self.constant_term
        if self.regime == EXACT:
            if c != 1:
                raise ConstantTermError(
                    f"exact-regime log needs constant term 1, got {c}"
                )
            return self._log_of_unit()
        if not c:
            raise ConstantTermError("float-regime log needs a nonzero constant term")
        g = self.scale(1.0 / c)._log_of_unit()
        return g + Jet.constant(self.n, self.D, cmath.log(c), FLOAT)

    def _log_of_unit(self) -> "Jet":
        u = self - Jet.constant(self.n, self.D, 1, self.regime)
        acc = Jet.zero(self.n, self.D, self.regime)
        power = None
        for k in range(1, self.D + 1):
            power = u if power is None else power * u
            if power.is_zero:
                break
            coeff = Fraction((-1) ** (k + 1), k) if self.regime == EXACT else (-1.0) ** (k + 1) / k
            acc = acc + power.scale(coeff)
        return acc

    def exp_series(self) -> "Jet":
        """exp f as the finite sum sum_{k<=D} f^k / k!.

        Exact regime: requires f(0) = 0 (the sum is then finite and exact).
        Float regime: any constant term; exp f(0) factors out.
        """
        c = self.constant_term
        if self.regime == EXACT:
            if c != 0:
                raise ConstantTermError(
                    f"exact-regime exp needs constant term 0, got {c}"
                )
            return self._exp_of_nilpotent()
        v = self - Jet.constant(self.n, self.D, c, FLOAT)
        return v._exp_of_nilpotent().scale(cmath.exp(c))

    def _exp_of_nilpotent(self) -> "Jet":
        acc = Jet.constant(self.n, self.D, 1, self.regime)
        power = None
        fact = 1
        for k in range(1, self.D + 1):
            power = self if power is None else power * self
            if power.is_zero:
                break
            fact *= k
            coeff = Fraction(1, fact) if self.regime == EXACT else 1.0 / fact
            acc = acc + power.scale(coeff)
        return acc

    def real_pow(self, t) -> "Jet":
        """f^t = exp(t * log f) for a scalar exponent t.

        Exact regime: requires f(0) = 1 and rational t.  Float regime:
        requires f(0) != 0 (principal branch).  This path is independent
        of :meth:`int_pow` even when t is an integer.
        """
        if self.regime == EXACT:
            t = Fraction(t)
            if self.constant_term != 1:
                raise ConstantTermError(
                    f"exact-regime real power needs constant term 1, got {self.constant_term}"
                )
        else:
            t = complex(t) if not isinstance(t, (int, float, Fraction)) else float(t)
        return self.log_series().scale(t).exp_series()

    # -- cap changes ----------------------------------------------------

    def truncate(self, new_D: int) -> "Jet":
        """Drop all coefficients of weight above ``new_D`` (new_D <= D)."""
        if new_D > self.D:
            raise ValueError("truncate cannot raise the degree cap; use extend")
        return self._recap(new_D)

    def extend(self, new_D: int) -> "Jet":
        """Re-embed into a larger cap (new coefficients are zero)."""
        if new_D < self.D:
            raise ValueError("extend cannot lower the degree cap; use truncate")
        return self._recap(new_D)

    def _recap(self, new_D: int) -> "Jet":
        if new_D == self.D:
            return self
        old = monomial_indices(self.n, self.D)
        pos = _position(self.n, new_D)
        size = len(pos)
        if self.regime == EXACT:
            nums = [0] * size
            for i, v in enumerate(self._nums):
                if v and old[i].weight <= new_D:
                    nums[pos[tuple(old[i])]] = v
            return Jet._exact(self.n, new_D, nums, self._den)
        vals = [0j] * size
        for i, v in enumerate(self._vals):
            if v and old[i].weight <= new_D:
                vals[pos[tuple(old[i])]] = v
        return Jet._float(self.n, new_D, vals)

    def to_float(self) -> "Jet":
        """Convert to the float regime (identity on float jets)."""
        if self.regime == FLOAT:
            return self
        den = float(self._den)
        return Jet._float(self.n, self.D, [complex(v / den) for v in self._nums])

    # -- comparison -----------------------------------------------------

    def max_abs_diff(self, other: "Jet"):
        """Max |coefficient difference|; Fraction in exact regime, float otherwise."""
        self._check_match(other)
        if self.regime == EXACT:
            da, db = self._den, other._den
            worst = 0
            for x, y in zip(self._nums, other._nums):
                d = abs(x * db - y * da)
                if d > worst:
                    worst = d
            return Fraction(worst, da * db)
        return max(
            (abs(x - y) for x, y in zip(self._vals, other._vals)), default=0.0
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Jet):
            return NotImplemented
        if (self.n, self.D, self.regime) != (other.n, other.D, other.regime):
            return False
        return self.max_abs_diff(other) == 0

    __hash__ = None

    def isclose(self, other: "Jet", tol: float = DEFAULT_TOL) -> bool:
        return self.max_abs_diff(other) <= tol

    # -- serialization ----------------------------------------------------

    def to_json_dict(self) -> dict:
        """JSON form: {"n", "D", "regime", "coeffs": [{"alpha", "re", "im"}]}.

        Exact coefficients render as "p/q" strings in lowest terms; only
        nonzero coefficients are listed, in graded-lex order.
        """
        exps = monomial_indices(self.n, self.D)
        coeffs = []
        if self.regime == EXACT:
            for i, v in enumerate(self._nums):
                if v:
                    coeffs.append(
                        {
                            "alpha": list(exps[i]),
                            "re": format_rational(Fraction(v, self._den)),
                            "im": "0/1",
                        }
                    )
        else:
            for i, v in enumerate(self._vals):
                if v:
                    coeffs.append({"alpha": list(exps[i]), "re": v.real, "im": v.imag})
        return {"n": self.n, "D": self.D, "regime": self.regime, "coeffs": coeffs}

    @classmethod
    def from_json_dict(cls, data: dict) -> "Jet":
        n, D, regime = int(data["n"]), int(data["D"]), data["regime"]
        if regime == EXACT:
            coeffs = {}
            for entry in data["coeffs"]:
                re = parse_rational(str(entry["re"]))
                im = parse_rational(str(entry["im"]))
                if im:
                    raise ValueError(
                        "exact-regime jets are real-rational; nonzero imaginary part "
                        f"{entry['im']!r} is not representable"
                    )
                coeffs[tuple(entry["alpha"])] = re
            return cls.from_coeffs(n, D, coeffs, EXACT)
        coeffs = {
            tuple(e["alpha"]): complex(float(e["re"]), float(e["im"]))
            for e in data["coeffs"]
        }
        return cls.from_coeffs(n, D, coeffs, FLOAT)

    def __repr__(self) -> str:
        terms = []
        for alpha, c in itertools.islice(self.coefficients().items(), 6):
            mono = "*".join(
                f"z{j + 1}^{e}" if e > 1 else f"z{j + 1}"
                for j, e in enumerate(alpha)
                if e
            )
            terms.append(f"{c}{'*' + mono if mono else ''}")
        body = " + ".join(terms) if terms else "0"
        if len(self.coefficients()) > 6:
            body += " + ..."
        return f"Jet(n={self.n}, D={self.D}, {self.regime}: {body})"


# -- module-level operation surface ---------------------------------------


def radial_power(h: Jet, m: int) -> Jet:
    """R^m h; see :meth:`Jet.radial_power`."""
    return h.radial_power(m)


def mul(f: Jet, g: Jet) -> Jet:
    """Truncated Cauchy product of two jets of matching shape."""
    return f * g


def int_pow(f: Jet, k: int) -> Jet:
    """f^k for integer k (negative k requires f(0) != 0)."""
    return f.int_pow(k)


def log_series(f: Jet) -> Jet:
    """log f; see :meth:`Jet.log_series`."""
    return f.log_series()


def exp_series(f: Jet) -> Jet:
    """exp f; see :meth:`Jet.exp_series`."""
    return f.exp_series()


def real_pow(f: Jet, t) -> Jet:
    """f^t = exp(t log f); see :meth:`Jet.real_pow`."""
    return f.real_pow(t)


def random_jet(
    n: int,
    D: int,
    seed: int | None,
    constraint: str = FREE,
    regime: str = EXACT,
    *,
    rng: random.Random | None = None,
) -> Jet:
    """A reproducible random jet.

    Draws one small rational per monomial (numerator in [-9, 9],
    denominator in [1, 9]) in graded-lex order; ``constraint="unit-constant"``
    then forces the constant coefficient to exactly 1.  Float-regime jets
    use the float values of the same rational stream, so exact/float draws
    with equal seeds describe the same polynomial.

    Pass ``rng`` to continue an existing stream (``seed`` is then ignored),
    e.g. to draw an (f, h) pair from one seed.
    """
    if constraint not in (FREE, UNIT_CONSTANT):
        raise ValueError(f"unknown constraint {constraint!r}")
    if regime not in REGIMES:
        raise ValueError(f"unknown regime {regime!r}")
    if rng is None:
        rng = random.Random(seed)
    draws = [
        Fraction(rng.randint(-9, 9), rng.randint(1, 9))
        for _ in monomial_indices(n, D)
    ]
    if constraint == UNIT_CONSTANT:
        draws[0] = Fraction(1)
    if regime == EXACT:
        den = 1
        for c in draws:
            den = den * c.denominator // math.gcd(den, c.denominator)
        nums = [c.numerator * (den // c.denominator) for c in draws]
        return Jet._exact(n, D, nums, den)
    return Jet._float(n, D, [complex(c) for c in draws])


def random_pair(
    n: int, D: int, seed: int | None, regime: str = EXACT
) -> tuple[Jet, Jet]:
    """One seeded (f, h) verification pair: f has unit constant term, h is free."""
    rng = random.Random(seed)
    f = random_jet(n, D, None, UNIT_CONSTANT, regime, rng=rng)
    h = random_jet(n, D, None, FREE, regime, rng=rng)
    return f, h
