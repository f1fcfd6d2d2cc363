"""Scalar fields used to evaluate operator columns at a fixed q0.

``FloatField`` works in double precision.  ``ModField`` works in Z/P with q0
reduced mod P, which is exact unless P happens to divide one of the minors
that decide a pivot.  P is kept below 2^26 so that the rank code can do
exact int64 matrix products; evaluating at several q0 and keeping the
largest rank makes an accidental collapse unlikely.
Both expose the same small interface so rank code does not care which one
it is running on.
"""

from __future__ import annotations

from fractions import Fraction

# largest prime below 2^26; 2, 3 and 5 all have multiplicative order > 3 * 10^7 mod P
DEFAULT_PRIME = 2**26 - 5


class GaugeError(ArithmeticError):
    """A square root survived where the field needs an exact rational value."""


class FloatField:
    exact = False

    def __init__(self, q0):
        q0 = Fraction(q0)
        if not 0 < q0 < 1:
            raise ValueError(f"q0 must lie in (0, 1), got {q0}")
        self.q0 = q0
        self.q = float(q0)
        self.zero = 0.0
        self.one = 1.0

    def frac(self, r: Fraction) -> float:
        return r.numerator / r.denominator

    def qpow(self, e: int) -> float:
        return self.q**e

    def omq(self, k: int, count: int) -> float:
        """(1 - q^(2k))^(count/2)."""
        return (1.0 - self.q ** (2 * k)) ** (count / 2)

    def reduce(self, x: float) -> float:
        return x

    def is_zero(self, x: float) -> bool:
        return x == 0.0

    def to_float(self, x: float) -> float:
        return x

    def __repr__(self) -> str:
        return f"FloatField(q0={self.q0})"


class ModField:
    exact = True

    def __init__(self, q0, prime: int = DEFAULT_PRIME):
        q0 = Fraction(q0)
        if not 0 < q0 < 1:
            raise ValueError(f"q0 must lie in (0, 1), got {q0}")
        self.q0 = q0
        self.p = prime
        self.q = q0.numerator * pow(q0.denominator, -1, prime) % prime
        self.zero = 0
        self.one = 1
        self._omq: dict[int, int] = {}

    def frac(self, r: Fraction) -> int:
        return r.numerator * pow(r.denominator, -1, self.p) % self.p

    def qpow(self, e: int) -> int:
        return pow(self.q, e, self.p)

    def omq(self, k: int, count: int) -> int:
        if count % 2:
            raise GaugeError(f"odd power of sqrt(1 - q^{2 * k}) in an exact evaluation")
        base = self._omq.get(k)
        if base is None:
            base = (1 - pow(self.q, 2 * k, self.p)) % self.p
            if base == 0:
                raise ZeroDivisionError(f"1 - q^{2 * k} vanishes mod {self.p}")
            self._omq[k] = base
        return pow(base, count // 2, self.p)

    def reduce(self, x: int) -> int:
        return x % self.p

    def is_zero(self, x: int) -> bool:
        return x % self.p == 0

    def to_float(self, x: int) -> float:
        x %= self.p
        return float(x if x <= self.p // 2 else x - self.p)

    def __repr__(self) -> str:
        return f"ModField(q0={self.q0}, p={self.p})"

