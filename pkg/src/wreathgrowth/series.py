"""Truncated formal power series with exact rational coefficients.

Every series carries its truncation degree and all arithmetic is exact
modulo z^(degree+1).  Mixing series of different degrees is an error, never
a silent re-truncation.  Floating point appears only in the root-finding
helpers at the bottom of the module.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction | int

_F0 = Fraction(0)
_F1 = Fraction(1)


class SeriesDegreeError(ValueError):
    """Two series of different truncation degrees were combined."""


class SeriesDomainError(ValueError):
    """An operand violates a series-operation precondition."""


class RootBracketError(ArithmeticError):
    """The level-1 crossing could not be bracketed on (0, 1]."""


class EstimateError(ArithmeticError):
    """Growth-rate estimate undefined (not enough nonzero coefficients)."""


def _frac(x: Rational) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class TruncatedSeries:
    """A power series prefix: coeffs[m] is the coefficient of z^m, m <= degree."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise SeriesDomainError("series needs at least the constant coefficient")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_coeffs(values: Iterable[Rational], degree: int) -> "TruncatedSeries":
        vals = [_frac(v) for v in values]
        if len(vals) > degree + 1:
            raise SeriesDomainError(
                f"{len(vals)} coefficients exceed truncation degree {degree}"
            )
        vals += [_F0] * (degree + 1 - len(vals))
        return TruncatedSeries(tuple(vals))

    @staticmethod
    def zero(degree: int) -> "TruncatedSeries":
        return TruncatedSeries((_F0,) * (degree + 1))

    @staticmethod
    def one(degree: int) -> "TruncatedSeries":
        return TruncatedSeries((_F1,) + (_F0,) * degree)

    @staticmethod
    def monomial(degree: int, power: int, coeff: Rational = 1) -> "TruncatedSeries":
        if not 0 <= power <= degree:
            raise SeriesDomainError(f"monomial power {power} outside degree {degree}")
        vals = [_F0] * (degree + 1)
        vals[power] = _frac(coeff)
        return TruncatedSeries(tuple(vals))

    # -- basics ------------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, m: int) -> Fraction:
        return self.coeffs[m]

    def valuation(self) -> int:
        """Index of the first nonzero coefficient; degree+1 for the zero prefix."""
        for m, c in enumerate(self.coeffs):
            if c:
                return m
        return self.degree + 1

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def _check(self, other: "TruncatedSeries") -> None:
        if self.degree != other.degree:
            raise SeriesDegreeError(
                f"degree mismatch: {self.degree} vs {other.degree}"
            )

    def restrict(self, degree: int) -> "TruncatedSeries":
        """Explicitly drop to a smaller truncation degree."""
        if degree > self.degree:
            raise SeriesDomainError("restrict cannot raise the degree")
        return TruncatedSeries(self.coeffs[: degree + 1])

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        return TruncatedSeries(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        return TruncatedSeries(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(tuple(-a for a in self.coeffs))

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        n = self.degree
        out = [_F0] * (n + 1)
        left = [(i, c) for i, c in enumerate(self.coeffs) if c]
        right = [(j, c) for j, c in enumerate(other.coeffs) if c]
        if len(left) > len(right):
            left, right = right, left
        for i, a in left:
            for j, b in right:
                if i + j > n:
                    break
                out[i + j] += a * b
        return TruncatedSeries(tuple(out))

    def scale(self, factor: Rational) -> "TruncatedSeries":
        f = _frac(factor)
        return TruncatedSeries(tuple(f * c for c in self.coeffs))

    def __rmul__(self, factor: Rational) -> "TruncatedSeries":
        return self.scale(factor)

    def __pow__(self, n: int) -> "TruncatedSeries":
        if n < 0:
            raise SeriesDomainError("negative powers go through reciprocal()")
        result = TruncatedSeries.one(self.degree)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def reciprocal(self) -> "TruncatedSeries":
        """Series g with self*g = 1 mod z^(degree+1); needs nonzero constant term."""
        a0 = self.coeffs[0]
        if a0 == 0:
            raise SeriesDomainError("reciprocal needs a nonzero constant term")
        n = self.degree
        inv0 = 1 / a0
        out = [_F0] * (n + 1)
        out[0] = inv0
        nz = [(i, c) for i, c in enumerate(self.coeffs) if c and i > 0]
        for m in range(1, n + 1):
            acc = _F0
            for i, c in nz:
                if i > m:
                    break
                acc += c * out[m - i]
            out[m] = -inv0 * acc
        return TruncatedSeries(tuple(out))

    def compose(self, inner: "TruncatedSeries") -> "TruncatedSeries":
        """self(inner(z)); inner must have zero constant term."""
        self._check(inner)
        if inner.coeffs[0] != 0:
            raise SeriesDomainError("composition needs inner constant term 0")
        result = TruncatedSeries.zero(self.degree)
        for m in range(self.degree, -1, -1):
            result = result * inner
            if self.coeffs[m]:
                result = result + TruncatedSeries.monomial(self.degree, 0, self.coeffs[m])
        return result

    def substitute_power(self, r: int) -> "TruncatedSeries":
        """self(z^r): coefficient at m is coeffs[m/r] when r divides m, else 0."""
        if r < 1:
            raise SeriesDomainError("substitute_power needs r >= 1")
        n = self.degree
        out = [_F0] * (n + 1)
        for m in range(0, n + 1, r):
            out[m] = self.coeffs[m // r]
        return TruncatedSeries(tuple(out))

    # -- evaluation / io ---------------------------------------------------

    def evaluate(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + float(c)
        return acc

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "coeffs": [f"{c.numerator}/{c.denominator}" for c in self.coeffs],
        }

    @staticmethod
    def from_dict(data: dict) -> "TruncatedSeries":
        return TruncatedSeries.from_coeffs(
            [Fraction(s) for s in data["coeffs"]], data["degree"]
        )

    def __str__(self) -> str:
        parts = [f"{c}*z^{m}" for m, c in enumerate(self.coeffs) if c]
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class BivariateSeries:
    """Two-variable prefix: coefficient of x^i y^j kept for all i+j <= degree."""

    degree: int
    coeffs: dict[tuple[int, int], Fraction] = field(default_factory=dict)

    @staticmethod
    def zero(degree: int) -> "BivariateSeries":
        return BivariateSeries(degree, {})

    @staticmethod
    def one(degree: int) -> "BivariateSeries":
        return BivariateSeries(degree, {(0, 0): _F1})

    @staticmethod
    def var_x(degree: int) -> "BivariateSeries":
        return BivariateSeries(degree, {(1, 0): _F1})

    @staticmethod
    def var_y(degree: int) -> "BivariateSeries":
        return BivariateSeries(degree, {(0, 1): _F1})

    def coefficient(self, i: int, j: int) -> Fraction:
        return self.coeffs.get((i, j), _F0)

    def _check(self, other: "BivariateSeries") -> None:
        if self.degree != other.degree:
            raise SeriesDegreeError(
                f"degree mismatch: {self.degree} vs {other.degree}"
            )

    def __add__(self, other: "BivariateSeries") -> "BivariateSeries":
        self._check(other)
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            s = out.get(key, _F0) + c
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return BivariateSeries(self.degree, out)

    def __sub__(self, other: "BivariateSeries") -> "BivariateSeries":
        return self + other.scale(-1)

    def scale(self, factor: Rational) -> "BivariateSeries":
        f = _frac(factor)
        if f == 0:
            return BivariateSeries.zero(self.degree)
        return BivariateSeries(self.degree, {k: f * c for k, c in self.coeffs.items()})

    def __mul__(self, other: "BivariateSeries") -> "BivariateSeries":
        self._check(other)
        n = self.degree
        out: dict[tuple[int, int], Fraction] = {}
        for (i1, j1), a in self.coeffs.items():
            for (i2, j2), b in other.coeffs.items():
                i, j = i1 + i2, j1 + j2
                if i + j <= n:
                    key = (i, j)
                    out[key] = out.get(key, _F0) + a * b
        return BivariateSeries(n, {k: c for k, c in out.items() if c})

    def __pow__(self, n: int) -> "BivariateSeries":
        if n < 0:
            raise SeriesDomainError("negative bivariate powers unsupported")
        result = BivariateSeries.one(self.degree)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BivariateSeries):
            return NotImplemented
        return self.degree == other.degree and dict(self.coeffs) == dict(other.coeffs)

    def substitute(
        self, x_sub: TruncatedSeries, y_sub: TruncatedSeries
    ) -> TruncatedSeries:
        """Evaluate at univariate series arguments with positive valuation."""
        x_sub._check(y_sub)
        if x_sub.coeffs[0] != 0 or y_sub.coeffs[0] != 0:
            raise SeriesDomainError("substitution needs zero constant terms")
        deg = x_sub.degree
        xp = [TruncatedSeries.one(deg)]
        yp = [TruncatedSeries.one(deg)]
        for _ in range(self.degree):
            xp.append(xp[-1] * x_sub)
            yp.append(yp[-1] * y_sub)
        acc = TruncatedSeries.zero(deg)
        for (i, j), c in sorted(self.coeffs.items()):
            acc = acc + (xp[i] * yp[j]).scale(c)
        return acc


def subtree_series_bivariate(branching: int, degree: int) -> BivariateSeries:
    """Two-variable series F(x, y) counting the finite rooted subtrees hanging
    off one fixed edge of a regular tree of the given branching degree, graded
    by non-leaf count (x) and leaf count (y).

    F is the unique series solution of F = 1 + y - x + x*F^(branching-1); the
    iteration below is a contraction in the (x, y)-adic metric, so degree+1
    rounds pin every retained coefficient.
    """
    if branching < 1:
        raise SeriesDomainError("branching degree must be >= 1")
    one = BivariateSeries.one(degree)
    x = BivariateSeries.var_x(degree)
    y = BivariateSeries.var_y(degree)
    g = one
    for _ in range(degree + 1):
        g = one + y - x + x * g ** (branching - 1)
    return g


def subtree_fixed_point(
    branching: int, x_sub: TruncatedSeries, y_sub: TruncatedSeries
) -> TruncatedSeries:
    """F(x_sub(z), y_sub(z)) for the rooted-subtree series F above, computed
    directly in univariate arithmetic.

    Both substituted series must have zero constant term, which makes
    G <- 1 + y_sub - x_sub + x_sub*G^(branching-1) a z-adic contraction.
    """
    x_sub._check(y_sub)
    if branching < 1:
        raise SeriesDomainError("branching degree must be >= 1")
    if x_sub.coeffs[0] != 0 or y_sub.coeffs[0] != 0:
        raise SeriesDomainError("substituted series must have zero constant term")
    degree = x_sub.degree
    one = TruncatedSeries.one(degree)
    g = one
    base = one + y_sub - x_sub
    for _ in range(degree + 1):
        g = base + x_sub * g ** (branching - 1)
    return g


def find_unit_root(f: TruncatedSeries, tol: float = 1e-12) -> float:
    """The unique t > 0 with f(t) = 1, for f with nonnegative coefficients and
    zero constant term, located by doubling then bisection.

    Monotonicity of f on the positive axis makes the bracketed root unique.
    Only roots in (0, 1] are searched; if the prefix never reaches 1 there the
    truncation was too small and RootBracketError is raised.
    """
    if f.is_zero():
        raise SeriesDomainError("find_unit_root needs a nonzero series")
    if f.coeffs[0] != 0:
        raise SeriesDomainError("find_unit_root needs zero constant term")
    if any(c < 0 for c in f.coeffs):
        raise SeriesDomainError("find_unit_root needs nonnegative coefficients")
    if f.evaluate(1.0) < 1.0:
        raise RootBracketError("series prefix stays below 1 on (0, 1]")
    hi = max(tol, 1e-12)
    while hi < 1.0 and f.evaluate(hi) < 1.0:
        hi = min(2.0 * hi, 1.0)
    lo = 0.0 if hi <= tol else hi / 2.0
    mid = (lo + hi) / 2.0
    for _ in range(200):
        mid = (lo + hi) / 2.0
        val = f.evaluate(mid)
        if abs(val - 1.0) <= tol:
            return mid
        if val < 1.0:
            lo = mid
        else:
            hi = mid
    return mid


def growth_rate_estimate(f: TruncatedSeries, window: int) -> float:
    """Reciprocal growth-rate estimate from the trailing coefficients:
    1 / (a_hi / a_lo)^(1/(hi-lo)) over the last `window` steps.

    The windowed geometric rate cancels slowly-varying prefactors (such as
    polynomial corrections in m) that bias the single-coefficient m-th-root
    test; it is still an estimate, not an exact radius of convergence.
    """
    if window < 1:
        raise SeriesDomainError("window must be >= 1")
    hi = max((m for m, c in enumerate(f.coeffs) if c), default=-1)
    if hi < 0:
        raise EstimateError("all coefficients are zero")
    lo = hi - window
    while lo >= 0 and f.coeffs[lo] == 0:
        lo -= 1
    if lo < 0:
        raise EstimateError("not enough nonzero trailing coefficients for window")
    ratio = f.coeffs[hi] / f.coeffs[lo]
    rate = abs(ratio) ** (1.0 / (hi - lo))
    if rate == 0.0:
        raise EstimateError("degenerate growth in window")
    return 1.0 / rate
