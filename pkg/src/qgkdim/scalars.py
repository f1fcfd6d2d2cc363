"""Exact scalars built from q and the root atoms r_k = sqrt(1 - q^(2k)).

A :class:`ScalarExpr` is a finite sum of terms ``c * q^a * r_{k1} * ... * r_{kt}``
with rational ``c``, integer ``a`` and a set of distinct positive ``k``.  The
square-free form is kept by rewriting ``r_k^2 = 1 - q^(2k)``.  Distinct atom
products are linearly independent over Q(q), so two normal forms are equal
exactly when they are the same dictionary.

>>> r1 = ScalarExpr.atom(1)
>>> r1 * r1
1 - q^2
>>> (r1 + ScalarExpr.qpow(1)) * (r1 - ScalarExpr.qpow(1))
1 - 2*q^2
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

import mpmath

Monomial = tuple[int, frozenset]  # (q exponent, atom set)


def _mul_monomials(x: Monomial, y: Monomial) -> dict[Monomial, int]:
    """Product of two monomials, reduced; returns {monomial: integer coefficient}."""
    qexp = x[0] + y[0]
    shared = x[1] & y[1]
    base = x[1] ^ y[1]
    out: dict[Monomial, int] = {(qexp, base): 1}
    # each shared atom contributes a factor (1 - q^(2k))
    for k in shared:
        nxt: dict[Monomial, int] = {}
        for (a, atoms), c in out.items():
            nxt[(a, atoms)] = nxt.get((a, atoms), 0) + c
            key = (a + 2 * k, atoms)
            nxt[key] = nxt.get(key, 0) - c
        out = nxt
    return out


class ScalarExpr:
    """Immutable element of Q[q, q^-1, r_1, r_2, ...] in square-free normal form."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Fraction | int] | None = None):
        clean: dict[Monomial, Fraction] = {}
        for (a, atoms), c in (terms or {}).items():
            atoms = frozenset(atoms)
            if any(k < 0 for k in atoms):
                raise ValueError(f"atom index must be positive, got {sorted(atoms)}")
            if 0 in atoms:
                continue  # r_0 = sqrt(1 - 1) = 0
            c = Fraction(c)
            if c:
                clean[(int(a), atoms)] = c
        self._terms = clean
        self._hash = None

    # construction -----------------------------------------------------------
    @classmethod
    def const(cls, c: Fraction | int) -> "ScalarExpr":
        return cls({(0, frozenset()): c})

    @classmethod
    def qpow(cls, a: int, c: Fraction | int = 1) -> "ScalarExpr":
        return cls({(a, frozenset()): c})

    @classmethod
    def atom(cls, k: int) -> "ScalarExpr":
        """The root atom sqrt(1 - q^(2k)); ``atom(0)`` is zero."""
        if k < 0:
            raise ValueError("atom index must be nonnegative")
        return cls({(0, frozenset([k])): 1})

    @classmethod
    def zero(cls) -> "ScalarExpr":
        return cls()

    @classmethod
    def one(cls) -> "ScalarExpr":
        return cls.const(1)

    # inspection -------------------------------------------------------------
    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def sorted_terms(self) -> list[tuple[int, tuple[int, ...], Fraction]]:
        """Terms in canonical order: by atom set, then by q exponent."""
        items = [(a, tuple(sorted(atoms)), c) for (a, atoms), c in self._terms.items()]
        items.sort(key=lambda t: (len(t[1]), t[1], t[0]))
        return items

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = ScalarExpr.const(other)
        if not isinstance(other, ScalarExpr):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # arithmetic -------------------------------------------------------------
    @staticmethod
    def _coerce(x) -> "ScalarExpr":
        if isinstance(x, ScalarExpr):
            return x
        if isinstance(x, (int, Fraction)):
            return ScalarExpr.const(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to ScalarExpr")

    def __add__(self, other) -> "ScalarExpr":
        other = self._coerce(other)
        out = dict(self._terms)
        for key, c in other._terms.items():
            out[key] = out.get(key, 0) + c
        return ScalarExpr(out)

    __radd__ = __add__

    def __neg__(self) -> "ScalarExpr":
        return ScalarExpr({key: -c for key, c in self._terms.items()})

    def __sub__(self, other) -> "ScalarExpr":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "ScalarExpr":
        return self._coerce(other) - self

    def __mul__(self, other) -> "ScalarExpr":
        other = self._coerce(other)
        out: dict[Monomial, Fraction] = {}
        for kx, cx in self._terms.items():
            for ky, cy in other._terms.items():
                for key, c in _mul_monomials(kx, ky).items():
                    out[key] = out.get(key, 0) + cx * cy * c
        return ScalarExpr(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "ScalarExpr":
        if e < 0:
            raise ValueError("negative powers are not in the ring")
        out = ScalarExpr.one()
        for _ in range(e):
            out = out * self
        return out

    def shift_q(self, a: int) -> "ScalarExpr":
        """Multiply by q^a."""
        return ScalarExpr({(qa + a, atoms): c for (qa, atoms), c in self._terms.items()})

    # evaluation -------------------------------------------------------------
    def eval(self, q0, precision: int = 30) -> mpmath.mpf:
        """Evaluate at ``q = q0`` with ``precision`` decimal digits.

        >>> float(ScalarExpr.atom(1).eval(Fraction(1, 2)))
        0.8660254037844386
        """
        q0 = Fraction(q0)
        if not 0 < q0 < 1:
            raise ValueError(f"q0 must lie in (0, 1), got {q0}")
        with mpmath.workdps(precision + 10):
            qv = mpmath.mpf(q0.numerator) / q0.denominator
            total = mpmath.mpf(0)
            for (a, atoms), c in self._terms.items():
                term = mpmath.mpf(c.numerator) / c.denominator * qv**a
                for k in atoms:
                    term *= mpmath.sqrt(1 - qv ** (2 * k))
                total += term
            return +total

    # printing ---------------------------------------------------------------
    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for a, atoms, c in self.sorted_terms():
            factors = []
            if a == 1:
                factors.append("q")
            elif a:
                factors.append(f"q^{a}")
            factors.extend(f"r{k}" for k in atoms)
            mag = abs(c)
            if factors:
                body = "*".join(factors)
                text = body if mag == 1 else f"{mag}*{body}"
            else:
                text = str(mag)
            parts.append(("-" if c < 0 else "+", text))
        sign, first = parts[0]
        out = ("-" if sign == "-" else "") + first
        for sign, text in parts[1:]:
            out += f" {sign} {text}"
        return out

    __str__ = __repr__


def scalar_mul(x: ScalarExpr, y: ScalarExpr) -> ScalarExpr:
    return x * y


def scalar_eval(x: ScalarExpr, q0, precision: int = 30) -> mpmath.mpf:
    return x.eval(q0, precision)


def scalar_sum(xs: Iterable[ScalarExpr]) -> ScalarExpr:
    out = ScalarExpr.zero()
    for x in xs:
        out = out + x
    return out
