"""Normal-form q-shift operators on c00(Z)^n (x) c00(N)^l.

Conventions.  On every factor S lowers (e_m -> e_(m-1), and e_0 -> 0 on the
Fock space) and S* raises.  A Laurent factor carries a pure shift ``z``
(e_m -> e_(m+z)).  A Fock factor carries ``(S*)^a g(N) S^c``, so that
e_p -> g(p - c) e_(p - c + a) when p >= c and 0 otherwise.

The coefficient of a tensor term is one :class:`Coeff`: a finite sum of
monomials  ``r * q^v * prod_f q^(u_f N_f) * prod sqrt(1 - q^(2 d N_f + 2 c))``
with the roots square-free per factor.  Terms with equal shift data are
merged.  A term with min(a, c) > 0 is rewritten as a term with smaller
(a, c) whenever the coefficient vanishes on the points the rewrite would add,
which is what makes relations such as  alpha alpha* - alpha* alpha =
(1 - q^2) beta^2  hold syntactically.
"""

from __future__ import annotations

import itertools
import json
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

from .fields import FloatField
from .scalars import ScalarExpr
from .weyl import WeylFamily, is_reduced, weyl_group

Root = tuple[int, int]  # (d, c): sqrt(1 - q^(2 d N + 2 c))
FactorMono = tuple[int, frozenset]  # (u, roots)
Mono = tuple[int, tuple[FactorMono, ...]]  # (v, per-factor parts)
Key = tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]  # (z, a, c)


class SignatureError(ValueError):
    pass


# --------------------------------------------------------------------------- #
# coefficient functions
# --------------------------------------------------------------------------- #


def _mul_factor(x: FactorMono, y: FactorMono) -> list[tuple[int, FactorMono, int]]:
    """Product of single-factor monomials as [(q-shift v, monomial, sign)]."""
    u = x[0] + y[0]
    shared = x[1] & y[1]
    out = [(0, (u, x[1] ^ y[1]), 1)]
    for d, c in shared:
        nxt = []
        for v, (uu, roots), s in out:
            nxt.append((v, (uu, roots), s))
            nxt.append((v + 2 * c, (uu + 2 * d, roots), -s))
        out = nxt
    return out


class Coeff:
    """Multivariate coefficient function of the number operators N_1..N_l."""

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: dict[Mono, Fraction] | None = None):
        self.nvars = nvars
        clean = {}
        for (v, facs), r in (terms or {}).items():
            if len(facs) != nvars:
                raise SignatureError(f"monomial has {len(facs)} factors, expected {nvars}")
            r = Fraction(r)
            if r:
                key = (v, tuple((u, frozenset(roots)) for u, roots in facs))
                clean[key] = clean.get(key, 0) + r
        self._terms = {k: r for k, r in clean.items() if r}
        self._hash = None

    # construction -----------------------------------------------------------
    @classmethod
    def const(cls, nvars: int, r=1, v: int = 0) -> "Coeff":
        return cls(nvars, {(v, ((0, frozenset()),) * nvars): r})

    @classmethod
    def qn(cls, nvars: int, f: int, u: int, r=1, v: int = 0) -> "Coeff":
        """r * q^(u N_f + v) (factor index f is 0-based)."""
        facs = [(0, frozenset())] * nvars
        facs[f] = (u, frozenset())
        return cls(nvars, {(v, tuple(facs)): r})

    @classmethod
    def root(cls, nvars: int, f: int, d: int, c: int) -> "Coeff":
        """sqrt(1 - q^(2 d N_f + 2 c))."""
        facs = [(0, frozenset())] * nvars
        facs[f] = (0, frozenset([(d, c)]))
        return cls(nvars, {(0, tuple(facs)): 1})

    @property
    def terms(self) -> dict[Mono, Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, Coeff) and self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    # arithmetic -------------------------------------------------------------
    def __add__(self, other: "Coeff") -> "Coeff":
        out = dict(self._terms)
        for k, r in other._terms.items():
            out[k] = out.get(k, 0) + r
        return Coeff(self.nvars, out)

    def __neg__(self) -> "Coeff":
        return Coeff(self.nvars, {k: -r for k, r in self._terms.items()})

    def __sub__(self, other: "Coeff") -> "Coeff":
        return self + (-other)

    def __mul__(self, other: "Coeff") -> "Coeff":
        out: dict[Mono, Fraction] = {}
        for (vx, fx), rx in self._terms.items():
            for (vy, fy), ry in other._terms.items():
                partial = [(vx + vy, (), rx * ry)]
                for a, b in zip(fx, fy):
                    nxt = []
                    for v, facs, r in partial:
                        for dv, mono, s in _mul_factor(a, b):
                            nxt.append((v + dv, facs + (mono,), r * s))
                    partial = nxt
                for v, facs, r in partial:
                    out[(v, facs)] = out.get((v, facs), 0) + r
        return Coeff(self.nvars, out)

    def scale(self, r=1, qexp: int = 0) -> "Coeff":
        r = Fraction(r)
        return Coeff(self.nvars, {(v + qexp, f): x * r for (v, f), x in self._terms.items()})

    def shift(self, shifts: Sequence[int]) -> "Coeff":
        """Substitute N_f -> N_f + shifts[f]."""
        if not any(shifts):
            return self
        out = {}
        for (v, facs), r in self._terms.items():
            nv = v
            nf = []
            for (u, roots), k in zip(facs, shifts):
                nv += u * k
                nf.append((u, frozenset((d, c + d * k) for d, c in roots)))
            out[(nv, tuple(nf))] = r
        return Coeff(self.nvars, out)

    def tensor(self, other: "Coeff") -> "Coeff":
        out = {}
        for (vx, fx), rx in self._terms.items():
            for (vy, fy), ry in other._terms.items():
                out[(vx + vy, fx + fy)] = rx * ry
        return Coeff(self.nvars + other.nvars, out)

    # evaluation -------------------------------------------------------------
    def evaluate(self, nvals: Sequence[int]) -> ScalarExpr:
        out: dict = {}
        for (v, facs), r in self._terms.items():
            term = ScalarExpr.qpow(v + sum(u * n for (u, _), n in zip(facs, nvals)), r)
            killed = False
            atoms = []
            for (_, roots), n in zip(facs, nvals):
                for d, c in roots:
                    k = d * n + c
                    if k == 0:
                        killed = True
                    atoms.append(k)
            if killed:
                continue
            if any(k < 0 for k in atoms):
                raise ValueError(f"root with negative argument at N={tuple(nvals)}")
            for k in atoms:
                term = term * ScalarExpr.atom(k)
            for key, x in term.terms.items():
                out[key] = out.get(key, 0) + x
        return ScalarExpr(out)

    def evaluate_in(self, field, nvals: Sequence[int], gauge: dict[int, int] | None = None):
        """Value at N = nvals in ``field``; ``gauge`` adds extra root multiplicities."""
        total = field.zero
        for (v, facs), r in self._terms.items():
            counts = dict(gauge) if gauge else {}
            killed = False
            qexp = v
            for (u, roots), n in zip(facs, nvals):
                qexp += u * n
                for d, c in roots:
                    k = d * n + c
                    if k == 0:
                        killed = True
                        break
                    if k < 0:
                        raise ValueError(f"root with negative argument at N={tuple(nvals)}")
                    counts[k] = counts.get(k, 0) + 1
                if killed:
                    break
            if killed:
                continue
            val = field.frac(r) * field.qpow(qexp)
            for k, cnt in counts.items():
                if cnt:
                    val = field.reduce(val * field.omq(k, cnt))
            total = field.reduce(total + val)
        return total

    def grid(self, q: float, nvals: Sequence[np.ndarray]) -> np.ndarray:
        """Float values on the grid nvals[0] x nvals[1] x ... (all N >= 0)."""
        total = np.zeros(tuple(len(n) for n in nvals))
        for (v, facs), r in self._terms.items():
            term = np.array(float(r) * q**v)
            for (u, roots), n in zip(facs, nvals):
                vals = q ** (u * n.astype(float))
                for d, c in roots:
                    vals = vals * np.sqrt(np.clip(1.0 - q ** (2.0 * (d * n + c)), 0.0, None))
                term = np.multiply.outer(term, vals)
            total = total + term
        return total

    def vanishes_at(self, f: int, n: int) -> bool | None:
        """Does the coefficient vanish identically once N_f = n?  None if undecidable."""
        groups: dict = {}
        for (v, facs), r in self._terms.items():
            u, roots = facs[f]
            ks = [d * n + c for d, c in roots]
            if 0 in ks:
                continue
            if any(k < 0 for k in ks):
                return None
            term = ScalarExpr.qpow(v + u * n, r)
            for k in ks:
                term = term * ScalarExpr.atom(k)
            rest = facs[:f] + facs[f + 1 :]
            groups[rest] = groups.get(rest, ScalarExpr.zero()) + term
        return all(x.is_zero() for x in groups.values())

    # printing ---------------------------------------------------------------
    def sorted_terms(self):
        def order(item):
            (v, facs), r = item
            return (tuple((u, tuple(sorted(roots))) for u, roots in facs), v, r)

        return sorted(self._terms.items(), key=order)

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for (v, facs), r in self.sorted_terms():
            bits = [str(r)]
            if v:
                bits.append(f"q^{v}")
            for f, (u, roots) in enumerate(facs, start=1):
                if u:
                    bits.append(f"q^({u}N{f})")
                for d, c in sorted(roots):
                    bits.append(f"r({d}N{f}{c:+d})")
            parts.append("*".join(bits))
        return " + ".join(parts)


# --------------------------------------------------------------------------- #
# operators
# --------------------------------------------------------------------------- #


@dataclass(frozen=True)
class Signature:
    laurent: int
    fock: int
    fock_d: tuple[int, ...] = ()

    def __post_init__(self):
        if self.laurent < 0 or self.fock < 0:
            raise SignatureError("signature counts must be nonnegative")
        if not self.fock_d:
            object.__setattr__(self, "fock_d", (1,) * self.fock)
        if len(self.fock_d) != self.fock or any(d < 1 for d in self.fock_d):
            raise SignatureError(f"bad Fock parameters {self.fock_d} for {self.fock} factors")

    def __add__(self, other: "Signature") -> "Signature":
        return Signature(self.laurent + other.laurent, self.fock + other.fock, self.fock_d + other.fock_d)


@dataclass(frozen=True)
class FactorOp:
    """Single-factor building block: Laurent shift z, or Fock (S*)^a g(N) S^c."""

    z: int = 0
    a: int = 0
    c: int = 0
    g: Coeff | None = None

    @property
    def is_laurent(self) -> bool:
        return self.g is None


class Operator:
    """Finite sum of tensor terms in normal form (immutable)."""

    __slots__ = ("signature", "_terms", "_hash")

    def __init__(self, signature: Signature, terms: dict[Key, Coeff] | None = None, *, canonical: bool = True):
        self.signature = signature
        merged: dict[Key, Coeff] = {}
        for (z, a, c), g in (terms or {}).items():
            if len(z) != signature.laurent or len(a) != signature.fock or len(c) != signature.fock:
                raise SignatureError("term shape does not match signature")
            if g.nvars != signature.fock:
                raise SignatureError("coefficient arity does not match signature")
            key = (tuple(z), tuple(a), tuple(c))
            merged[key] = merged[key] + g if key in merged else g
        merged = {k: g for k, g in merged.items() if g}
        self._terms = _canonicalize(merged) if canonical else merged
        self._hash = None

    # construction -----------------------------------------------------------
    @classmethod
    def zero(cls, signature: Signature) -> "Operator":
        return cls(signature)

    @classmethod
    def identity(cls, signature: Signature) -> "Operator":
        s = signature
        return cls(s, {((0,) * s.laurent, (0,) * s.fock, (0,) * s.fock): Coeff.const(s.fock)})

    @classmethod
    def laurent_shift(cls, z: Sequence[int]) -> "Operator":
        s = Signature(len(z), 0)
        return cls(s, {(tuple(z), (), ()): Coeff.const(0)})

    @classmethod
    def fock(cls, a: int, g: Coeff, c: int, d: int = 1) -> "Operator":
        s = Signature(0, 1, (d,))
        return cls(s, {((), (a,), (c,)): g})

    @classmethod
    def from_factors(cls, factors: Sequence[FactorOp], r=1, fock_d: Sequence[int] = ()) -> "Operator":
        """Tensor product of single-factor pieces, Laurent factors first."""
        laurent = [f for f in factors if f.is_laurent]
        fock = [f for f in factors if not f.is_laurent]
        sig = Signature(len(laurent), len(fock), tuple(fock_d) or (1,) * len(fock))
        g = Coeff.const(0, r)
        for f in fock:
            g = g.tensor(f.g)
        key = (tuple(f.z for f in laurent), tuple(f.a for f in fock), tuple(f.c for f in fock))
        return cls(sig, {key: g})

    # inspection -------------------------------------------------------------
    @property
    def terms(self) -> dict[Key, Coeff]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, Operator) and self.signature == other.signature and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.signature, frozenset(self._terms.items())))
        return self._hash

    def max_raise(self) -> int:
        return max((max(a, default=0) for _, a, _ in self._terms), default=0)

    def _check(self, other: "Operator"):
        if self.signature != other.signature:
            raise SignatureError(f"signature mismatch: {self.signature} vs {other.signature}")

    # algebra ----------------------------------------------------------------
    def __add__(self, other: "Operator") -> "Operator":
        self._check(other)
        out = dict(self._terms)
        for k, g in other._terms.items():
            out[k] = out[k] + g if k in out else g
        return Operator(self.signature, out)

    def __neg__(self) -> "Operator":
        return Operator(self.signature, {k: -g for k, g in self._terms.items()}, canonical=False)

    def __sub__(self, other: "Operator") -> "Operator":
        return self + (-other)

    def scale(self, r=1, qexp: int = 0) -> "Operator":
        return Operator(self.signature, {k: g.scale(r, qexp) for k, g in self._terms.items()})

    def __mul__(self, other: "Operator") -> "Operator":
        """Composition: (x * y) v = x(y(v))."""
        if not isinstance(other, Operator):
            return NotImplemented
        self._check(other)
        out: dict[Key, Coeff] = {}
        for (zx, ax, cx), gx in self._terms.items():
            for (zy, ay, cy), gy in other._terms.items():
                a, c, sx, sy = [], [], [], []
                for a1, c1, a2, c2 in zip(ax, cx, ay, cy):
                    if a2 >= c1:
                        k = a2 - c1
                        a.append(a1 + k)
                        c.append(c2)
                        sx.append(k)
                        sy.append(0)
                    else:
                        k = c1 - a2
                        a.append(a1)
                        c.append(k + c2)
                        sx.append(0)
                        sy.append(k)
                key = (tuple(p + q for p, q in zip(zx, zy)), tuple(a), tuple(c))
                g = gx.shift(sx) * gy.shift(sy)
                out[key] = out[key] + g if key in out else g
        return Operator(self.signature, out)

    def __pow__(self, e: int) -> "Operator":
        out = Operator.identity(self.signature)
        for _ in range(e):
            out = out * self
        return out

    def adjoint(self) -> "Operator":
        return Operator(
            self.signature,
            {(tuple(-x for x in z), c, a): g for (z, a, c), g in self._terms.items()},
        )

    def tensor(self, other: "Operator") -> "Operator":
        sig = self.signature + other.signature
        out = {}
        for (zx, ax, cx), gx in self._terms.items():
            for (zy, ay, cy), gy in other._terms.items():
                out[(zx + zy, ax + ay, cx + cy)] = gx.tensor(gy)
        return Operator(sig, out)

    # action -----------------------------------------------------------------
    def apply(self, index: tuple[Sequence[int], Sequence[int]]) -> dict:
        """Exact image of one basis vector: {(laurent idx, fock idx): ScalarExpr}."""
        lidx, fidx = tuple(index[0]), tuple(index[1])
        if len(lidx) != self.signature.laurent or len(fidx) != self.signature.fock:
            raise SignatureError("basis index does not match signature")
        if any(p < 0 for p in fidx):
            raise ValueError("Fock indices must be nonnegative")
        out: dict = {}
        for (z, a, c), g in self._terms.items():
            if any(p < cc for p, cc in zip(fidx, c)):
                continue
            nvals = tuple(p - cc for p, cc in zip(fidx, c))
            val = g.evaluate(nvals)
            if val.is_zero():
                continue
            key = (
                tuple(m + s for m, s in zip(lidx, z)),
                tuple(n + aa for n, aa in zip(nvals, a)),
            )
            out[key] = out[key] + val if key in out else val
        return {k: v for k, v in out.items() if not v.is_zero()}

    def column(self, fidx: Sequence[int], field, gauge: bool = True) -> dict:
        """Image of e_fidx evaluated in ``field``: {(z, fock out): value}.

        Laurent factors are translation invariant, so only the shift z is kept.
        With ``gauge`` the operator is conjugated by D = prod_p c_p |e_p><e_p|,
        c_p = prod_{j<=p} sqrt(1 - q^(2 d j)) on each Fock factor, which turns
        every element of the generated algebra into one with q-polynomial
        entries.  Conjugation preserves linear (in)dependence.
        """
        out: dict = {}
        ds = self.signature.fock_d
        for (z, a, c), g in self._terms.items():
            if any(p < cc for p, cc in zip(fidx, c)):
                continue
            nvals = tuple(p - cc for p, cc in zip(fidx, c))
            pout = tuple(n + aa for n, aa in zip(nvals, a))
            counts: dict[int, int] = {}
            if gauge:
                for d, pin, po in zip(ds, fidx, pout):
                    if pin > po:
                        for j in range(po + 1, pin + 1):
                            counts[d * j] = counts.get(d * j, 0) + 1
                    elif po > pin:
                        for j in range(pin + 1, po + 1):
                            counts[d * j] = counts.get(d * j, 0) - 1
            val = g.evaluate_in(field, nvals, counts)
            if field.is_zero(val):
                continue
            key = (z, pout)
            out[key] = field.reduce(out[key] + val) if key in out else val
        return {k: v for k, v in out.items() if not field.is_zero(v)}

    def float_grid(self, radius: int, q0) -> dict:
        """Ungauged float images of the whole input box: {(z, delta): array over pins}."""
        q = float(Fraction(q0))
        shape = (radius + 1,) * self.signature.fock
        out: dict = {}
        for (z, a, c), g in self._terms.items():
            if any(cc > radius for cc in c):
                continue
            vals = g.grid(q, [np.arange(radius + 1 - cc) for cc in c])
            arr = np.zeros(shape)
            arr[tuple(slice(cc, None) for cc in c)] = vals
            key = (z, tuple(aa - cc for aa, cc in zip(a, c)))
            out[key] = out[key] + arr if key in out else arr
        return out

    # dump -------------------------------------------------------------------
    def sorted_terms(self) -> list[tuple[Key, Coeff]]:
        return sorted(self._terms.items(), key=lambda kv: kv[0])

    def dump(self) -> str:
        lines = []
        for (z, a, c), g in self.sorted_terms():
            lines.append(f"term: z={list(z)} a={list(a)} c={list(c)} coeff={g!r}")
        return "\n".join(lines)

    def __repr__(self) -> str:
        return f"Operator({self.signature}, {len(self._terms)} terms)"


def _reduce_term(key: Key, g: Coeff) -> tuple[Key, Coeff]:
    z, a, c = key
    a, c = list(a), list(c)
    for f in range(len(a)):
        m = min(a[f], c[f])
        step = 0
        while step < m and g.vanishes_at(f, -(step + 1)) is True:
            step += 1
        if step:
            shifts = [0] * len(a)
            shifts[f] = -step
            g = g.shift(shifts)
            a[f] -= step
            c[f] -= step
    return (z, tuple(a), tuple(c)), g


def _canonicalize(terms: dict[Key, Coeff]) -> dict[Key, Coeff]:
    changed = True
    while changed:
        changed = False
        out: dict[Key, Coeff] = {}
        for key, g in terms.items():
            if any(min(x, y) > 0 for x, y in zip(key[1], key[2])):
                nkey, ng = _reduce_term(key, g)
                if nkey != key:
                    changed = True
                key, g = nkey, ng
            out[key] = out[key] + g if key in out else g
        terms = {k: g for k, g in out.items() if g}
    return terms


def op_apply(x: Operator, index) -> dict:
    return x.apply(index)


def op_compose(x: Operator, y: Operator) -> Operator:
    return x * y


def op_adjoint(x: Operator) -> Operator:
    return x.adjoint()


# --------------------------------------------------------------------------- #
# standard single-factor operators
# --------------------------------------------------------------------------- #


def alpha(d: int = 1) -> Operator:
    """e_p -> sqrt(1 - q^(2 d p)) e_(p-1)."""
    return Operator.fock(0, Coeff.root(1, 0, d, d), 1, d)


def alpha_star(d: int = 1) -> Operator:
    return alpha(d).adjoint()


def beta(d: int = 1) -> Operator:
    """q^(d N)."""
    return Operator.fock(0, Coeff.qn(1, 0, d), 0, d)


def fock_shift(a: int, c: int, d: int = 1) -> Operator:
    """(S*)^a S^c on one Fock factor."""
    return Operator.fock(a, Coeff.const(1), c, d)


# --------------------------------------------------------------------------- #
# corepresentation matrices
# --------------------------------------------------------------------------- #


@dataclass(frozen=True)
class CorepMatrix:
    size: int
    signature: Signature
    entries: tuple[tuple[Operator, ...], ...]
    reduced: bool = True

    def __post_init__(self):
        if len(self.entries) != self.size or any(len(row) != self.size for row in self.entries):
            raise ValueError("entries must be size x size")
        for row in self.entries:
            for x in row:
                if x.signature != self.signature:
                    raise SignatureError("entry signature mismatch")

    def entry(self, i: int, j: int) -> Operator:
        """u^i_j, 1-based, superscript i is the row."""
        return self.entries[i - 1][j - 1]

    def nonzero_entries(self) -> Iterator[tuple[int, int, Operator]]:
        for i in range(1, self.size + 1):
            for j in range(1, self.size + 1):
                x = self.entry(i, j)
                if x:
                    yield i, j, x

    def to_json(self) -> dict:
        sig = self.signature
        return {
            "size": self.size,
            "signature": {"laurent": sig.laurent, "fock": sig.fock, "fock_d": list(sig.fock_d)},
            "entries": [[self.entry(i, j).dump().splitlines() for j in range(1, self.size + 1)] for i in range(1, self.size + 1)],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)


def _matrix(size: int, sig: Signature, fill) -> CorepMatrix:
    rows = tuple(tuple(fill(i, j) for j in range(1, size + 1)) for i in range(1, size + 1))
    return CorepMatrix(size, sig, rows)


def identity_matrix(size: int, sig: Signature) -> CorepMatrix:
    one, zero = Operator.identity(sig), Operator.zero(sig)
    return _matrix(size, sig, lambda i, j: one if i == j else zero)


def psi_corep(d: int = 1) -> CorepMatrix:
    """The 2x2 block of the standard O_{q^d}(SU(2)) action on c00(N)."""
    if d < 1:
        raise ValueError("d must be a positive integer")
    sig = Signature(0, 1, (d,))
    entries = {
        (1, 1): alpha(d),
        (2, 2): alpha(d).adjoint(),
        (1, 2): Operator.fock(0, Coeff.qn(1, 0, d, -1, d), 0, d),
        (2, 1): beta(d),
    }
    return _matrix(2, sig, lambda i, j: entries[(i, j)])


def doublets(family: str, n: int, i: int) -> list[tuple[int, int]]:
    """Index pairs (upper, lower) on which s_i acts in the vector representation."""
    fam = WeylFamily(family, n)
    if not 1 <= i <= n:
        raise ValueError(f"simple reflection index {i} out of range 1..{n}")
    if family == "A":
        return [(i, i + 1)]
    N = fam.corep_dim
    if i < n:
        return [(i, i + 1), (N - i, N - i + 1)]
    if family == "C":
        return [(n, n + 1)]
    return [(n - 1, n + 1), (n, n + 2)]


def pi_simple(family: str, n: int, i: int) -> CorepMatrix:
    fam = WeylFamily(family, n)
    if not 1 <= i <= n:
        raise ValueError(f"simple reflection index {i} out of range 1..{n}")
    d = fam.root_exponents[i - 1]
    block = psi_corep(d)
    sig = block.signature
    one, zero = Operator.identity(sig), Operator.zero(sig)
    role: dict[int, tuple[int, int]] = {}
    for pair_no, (x, y) in enumerate(doublets(family, n, i)):
        role[x] = (pair_no, 1)
        role[y] = (pair_no, 2)

    def fill(r, s):
        if r in role and s in role and role[r][0] == role[s][0]:
            return block.entry(role[r][1], role[s][1])
        if r == s and r not in role:
            return one
        return zero

    return _matrix(fam.corep_dim, sig, fill)


def chi_e(family: str, n: int) -> CorepMatrix:
    fam = WeylFamily(family, n)
    N = fam.corep_dim
    sig = Signature(n, 0)

    def diag(i):
        z = [0] * n
        if family == "A":
            if i == 1:
                z = [-1] * n
            else:
                z[n + 1 - i] = 1  # position n+2-i, 1-based
        elif i > n:
            z[N - i] = 1  # position 2n+1-i
        else:
            z[i - 1] = -1
        return Operator.laurent_shift(z)

    zero = Operator.zero(sig)
    return _matrix(N, sig, lambda i, j: diag(i) if i == j else zero)


def convolve(A: CorepMatrix, B: CorepMatrix) -> CorepMatrix:
    """(A * B)(i, j) = sum_k A(i, k) (x) B(k, j)."""
    if A.size != B.size:
        raise ValueError(f"size mismatch {A.size} vs {B.size}")
    sig = A.signature + B.signature
    zero = Operator.zero(sig)

    def fill(i, j):
        acc = zero
        for k in range(1, A.size + 1):
            x, y = A.entry(i, k), B.entry(k, j)
            if x and y:
                acc = acc + x.tensor(y)
        return acc

    out = _matrix(A.size, sig, fill)
    return CorepMatrix(out.size, out.signature, out.entries, A.reduced and B.reduced)


def pi_word(family: str, n: int, word: Sequence[int]) -> CorepMatrix:
    """pi_{s_i1} * ... * pi_{s_ik}; the empty word gives the trivial action."""
    fam = WeylFamily(family, n)
    M = identity_matrix(fam.corep_dim, Signature(0, 0))
    for idx, i in enumerate(word):
        step = pi_simple(family, n, i)
        M = step if idx == 0 else convolve(M, step)
    return M


def chi_word(family: str, n: int, word: Sequence[int]) -> CorepMatrix:
    word = tuple(word)
    reduced = is_reduced(weyl_group(family, n), word)
    if not reduced:
        warnings.warn(f"word {word} is not reduced in {family}_{n}", stacklevel=2)
    M = chi_e(family, n)
    for i in word:
        M = convolve(M, pi_simple(family, n, i))
    return CorepMatrix(M.size, M.signature, M.entries, reduced)


# --------------------------------------------------------------------------- #
# unitarity oracle
# --------------------------------------------------------------------------- #


@dataclass(frozen=True)
class Window:
    laurent_radius: int = 6
    fock_cap: int = 14
    margin: int = 6

    def __post_init__(self):
        if self.margin < 0 or self.laurent_radius < self.margin or self.fock_cap < self.margin:
            raise ValueError("window requires R_z, R_f >= margin >= 0")

    def interior(self, fock: int) -> Iterator[tuple[int, ...]]:
        top = self.fock_cap - self.margin
        return itertools.product(range(top + 1), repeat=fock)


def unitarity_residuals(M: CorepMatrix) -> list[tuple[str, int, int, Operator]]:
    """Nonzero residuals of sum_k M(i,k) M(j,k)* - delta and sum_k M(k,i)* M(k,j) - delta."""
    one = Operator.identity(M.signature)
    adj = [[M.entry(i, j).adjoint() for j in range(1, M.size + 1)] for i in range(1, M.size + 1)]
    out = []
    for i in range(1, M.size + 1):
        for j in range(1, M.size + 1):
            left = Operator.zero(M.signature)
            right = Operator.zero(M.signature)
            for k in range(1, M.size + 1):
                x, y = M.entry(i, k), adj[j - 1][k - 1]
                if x and y:
                    left = left + x * y
                x, y = adj[k - 1][i - 1], M.entry(k, j)
                if x and y:
                    right = right + x * y
            if i == j:
                left, right = left - one, right - one
            if left:
                out.append(("row", i, j, left))
            if right:
                out.append(("col", i, j, right))
    return out


def _compose_grids(x: dict, y: dict, top: int, pad: int) -> dict:
    """Grid of x*y on box(top).

    y lives on box(top); x lives on a box large enough for y's outputs and is
    padded with ``pad`` leading zero layers on every axis, so shifted reads
    are plain slices.
    """
    out: dict = {}
    for (zy, dy), vy in y.items():
        window = tuple(slice(pad + s, pad + s + top + 1) for s in dy)
        for (zx, dx), vx in x.items():
            val = vy * vx[window]
            key = (tuple(a + b for a, b in zip(zy, zx)), tuple(a + b for a, b in zip(dy, dx)))
            acc = out.get(key)
            if acc is None:
                out[key] = val
            else:
                acc += val
    return out


def unitarity_defect(M: CorepMatrix, window: Window = Window(), q0=Fraction(1, 2)) -> float:
    """Max over interior basis vectors of |sum_k u^i_k (u^j_k)* - delta_ij| and the column analogue.

    Products are formed numerically from float images, not from the symbolic
    composition, so this is an independent check of the normal-form algebra.
    """
    sig = M.signature
    if sig.fock == 0:
        raise ValueError("unitarity_defect needs at least one Fock factor")
    top = window.fock_cap - window.margin
    big = top + max((x.max_raise() for _, _, x in M.nonzero_entries()), default=0)
    pad = max((max(c, default=0) for _, _, x in M.nonzero_entries() for _, _, c in x.terms), default=0)
    fock = sig.fock

    def padded(grid):
        return {k: np.pad(v, [(pad, 0)] * fock) for k, v in grid.items()}

    N = M.size
    ent = {(i, j): M.entry(i, j) for i in range(1, N + 1) for j in range(1, N + 1)}
    small = {k: x.float_grid(top, q0) for k, x in ent.items() if x}
    large = {k: padded(x.float_grid(big, q0)) for k, x in ent.items() if x}
    small_adj = {k: x.adjoint().float_grid(top, q0) for k, x in ent.items() if x}
    large_adj = {k: padded(x.adjoint().float_grid(big, q0)) for k, x in ent.items() if x}
    unit = ((0,) * sig.laurent, (0,) * sig.fock)
    worst = 0.0
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            for left in (True, False):
                acc: dict = {}
                for k in range(1, N + 1):
                    if left:  # u^i_k (u^j_k)*
                        pair = (i, k), (j, k)
                        if pair[0] not in small or pair[1] not in small:
                            continue
                        prod = _compose_grids(large[pair[0]], small_adj[pair[1]], top, pad)
                    else:  # (u^k_i)* u^k_j
                        pair = (k, i), (k, j)
                        if pair[0] not in small or pair[1] not in small:
                            continue
                        prod = _compose_grids(large_adj[pair[0]], small[pair[1]], top, pad)
                    for key, v in prod.items():
                        if key in acc:
                            acc[key] += v
                        else:
                            acc[key] = v
                if i == j:
                    acc[unit] = acc.get(unit, 0.0) - 1.0
                if acc:
                    sq = sum(np.asarray(v) ** 2 for v in acc.values())
                    worst = max(worst, float(np.sqrt(np.max(sq))))
    return worst


def flip_sign(M: CorepMatrix, i: int, j: int) -> CorepMatrix:
    """Negative control: negate one entry."""
    rows = [list(r) for r in M.entries]
    rows[i - 1][j - 1] = -rows[i - 1][j - 1]
    return CorepMatrix(M.size, M.signature, tuple(tuple(r) for r in rows), M.reduced)


def factored_entry(family: str, n: int, word: Sequence[int], i: int, j: int) -> Operator:
    """chi_e(u^i_i) (x) pi_w(u^i_j), computed without the convolution sum."""
    return chi_e(family, n).entry(i, i).tensor(pi_word(family, n, word).entry(i, j))


def all_entries(M: CorepMatrix, with_adjoints: bool = True) -> list[Operator]:
    ops = [x for _, _, x in M.nonzero_entries()]
    if with_adjoints:
        ops += [x.adjoint() for x in ops]
    return ops
