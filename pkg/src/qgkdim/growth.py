"""Growth of span(Xi^m) for finite operator sets, and GKdim bookkeeping.

An operator is identified with its columns on a finite box of Fock inputs
{0..R}^l.  Laurent factors are pure shifts, hence translation invariant, so
only their shift vector enters a column key.  Restriction to a box is not
multiplicative, so the basis at level m is chosen on a box of radius
R_m = R + (m_max - m) * raise, where ``raise`` bounds how far one generator
moves a Fock index up.  A product x*g restricted to R_(m+1) only reads x on
R_m, which makes dropping dependent elements at level m safe for every later
level.  The reported d(m) is the exact dimension of Xi^m restricted to R_m: a
certified lower bound that the window-growth loop checks for stability.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .fields import DEFAULT_PRIME, FloatField, ModField
from .oper import Operator
from .quotient import smith_normal_form
from .weyl import WeylFamily, longest_element, weyl_group


class InsufficientRowsError(ValueError):
    pass


# --------------------------------------------------------------------------- #
# configuration records
# --------------------------------------------------------------------------- #


@dataclass(frozen=True)
class GeneratorSet:
    ops: tuple[Operator, ...]
    adjoint_closed: bool = False
    name: str = ""

    def __post_init__(self):
        if not self.ops:
            raise ValueError("empty generator set")
        sig = self.ops[0].signature
        if any(x.signature != sig for x in self.ops):
            raise ValueError("generators must share a signature")
        if self.ops[0] != Operator.identity(sig):
            raise ValueError("the first generator must be the unit")

    @classmethod
    def build(cls, ops: Iterable[Operator], close_adjoint: bool = False, name: str = "") -> "GeneratorSet":
        ops = [x for x in ops if x]
        if not ops:
            raise ValueError("no nonzero generators")
        if close_adjoint:
            ops = ops + [x.adjoint() for x in ops]
        unit = Operator.identity(ops[0].signature)
        out = [unit]
        for x in ops:
            if x not in out:
                out.append(x)
        closed = all(x.adjoint() in out for x in out)
        return cls(tuple(out), closed, name)

    @property
    def signature(self):
        return self.ops[0].signature

    def __len__(self) -> int:
        return len(self.ops)

    @property
    def raise_bound(self) -> int:
        return max(x.max_raise() for x in self.ops)


@dataclass(frozen=True)
class WindowPolicy:
    """Final-level Fock radius, growth step, radius budget, confirmations."""

    fock_cap: int = 8
    laurent_radius: int = 0
    step: int = 2
    budget: int = 24
    confirmations: int = 2

    def __post_init__(self):
        if self.fock_cap < 0 or self.step < 1:
            raise ValueError("bad window policy")
        if self.budget < self.fock_cap:
            raise ValueError("window budget must be at least the initial radius")


@dataclass(frozen=True)
class Backend:
    kind: str = "multipoint"
    q0: Fraction = Fraction(1, 2)
    points: tuple[Fraction, ...] = (Fraction(1, 2), Fraction(1, 3), Fraction(2, 5))
    tolerance: float = 1e-9
    prime: int = DEFAULT_PRIME

    def __post_init__(self):
        if self.kind not in ("numeric", "multipoint"):
            raise ValueError(f"unknown backend {self.kind!r}")
        for q in (self.q0, *self.points):
            if not 0 < Fraction(q) < 1:
                raise ValueError(f"q0 must lie in (0, 1), got {q}")

    def fields(self):
        if self.kind == "numeric":
            return [FloatField(self.q0)]
        return [ModField(q, self.prime) for q in self.points]

    def describe(self) -> dict:
        if self.kind == "numeric":
            return {"kind": "numeric", "q0": str(self.q0), "tolerance": self.tolerance}
        return {"kind": "multipoint", "points": [str(q) for q in self.points], "prime": self.prime}


@dataclass
class GrowthRow:
    m: int
    d: int
    window_rz: int
    window_rf: int
    stable: bool


@dataclass
class GrowthSeries:
    rows: list[GrowthRow]
    backend: dict
    generators: int
    history: list[list[int]] = field(default_factory=list)

    @property
    def dims(self) -> list[int]:
        return [r.d for r in self.rows]

    @property
    def all_stable(self) -> bool:
        return all(r.stable for r in self.rows)

    def stable_rows(self) -> list[GrowthRow]:
        return [r for r in self.rows if r.stable]

    def to_csv(self) -> str:
        lines = ["m,d,window_Rz,window_Rf,stable"]
        for r in self.rows:
            lines.append(f"{r.m},{r.d},{r.window_rz},{r.window_rf},{str(r.stable).lower()}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {"rows": [asdict(r) for r in self.rows], "backend": self.backend, "generators": self.generators}


@dataclass
class DegreeEstimate:
    degree: int
    method: str
    differences: list[int]
    slope: float
    residual: float


# --------------------------------------------------------------------------- #
# elimination
# --------------------------------------------------------------------------- #


class ModEchelon:
    """Reduced row echelon form over Z/P, grown one row at a time.

    Rows are int64 arrays.  With P < 2^26 a row-times-matrix product of up to
    2^11 terms stays below 2^63, so reduction is a single exact matmul.
    """

    CHUNK = 2048

    def __init__(self, p: int):
        if p >= 2**26:
            raise ValueError("ModEchelon needs a prime below 2^26")
        self.p = p
        self.rows = np.zeros((0, 0), dtype=np.int64)
        self.pivots: list[int] = []

    def __len__(self) -> int:
        return len(self.pivots)

    def _widen(self, width: int):
        if width > self.rows.shape[1]:
            pad = np.zeros((self.rows.shape[0], width - self.rows.shape[1]), dtype=np.int64)
            self.rows = np.hstack([self.rows, pad])

    def add(self, vec: np.ndarray) -> bool:
        p = self.p
        self._widen(len(vec))
        v = np.zeros(self.rows.shape[1], dtype=np.int64)
        v[: len(vec)] = vec % p
        if self.pivots:
            coef = v[self.pivots]
            for s in range(0, len(self.pivots), self.CHUNK):
                v = (v - (coef[s : s + self.CHUNK] @ self.rows[s : s + self.CHUNK]) % p) % p
        nz = np.flatnonzero(v)
        if not len(nz):
            return False
        piv = int(nz[0])
        v = v * pow(int(v[piv]), -1, p) % p
        if self.pivots:
            col = self.rows[:, piv].copy()
            self.rows = (self.rows - np.outer(col, v) % p) % p
        self.rows = np.vstack([self.rows, v])
        self.pivots.append(piv)
        return True


class FloatEchelon:
    """Orthonormal basis grown by two passes of Gram-Schmidt."""

    def __init__(self, tolerance: float = 1e-9):
        self.tol = tolerance
        self.rows = np.zeros((0, 0))

    def __len__(self) -> int:
        return self.rows.shape[0]

    def add(self, vec: np.ndarray) -> bool:
        if len(vec) > self.rows.shape[1]:
            self.rows = np.hstack([self.rows, np.zeros((self.rows.shape[0], len(vec) - self.rows.shape[1]))])
        v = np.zeros(self.rows.shape[1])
        v[: len(vec)] = vec
        norm0 = np.linalg.norm(v)
        if norm0 == 0.0:
            return False
        v /= norm0
        for _ in range(2):
            v -= (self.rows @ v) @ self.rows
        norm = np.linalg.norm(v)
        if norm <= self.tol:
            return False
        self.rows = np.vstack([self.rows, v / norm])
        return True


class _Block:
    """Echelon form for one graded piece; columns are (z, delta) chunks of the input box."""

    def __init__(self, fld, tolerance: float, chunk: int):
        self.ech = ModEchelon(fld.p) if fld.exact else FloatEchelon(tolerance)
        self.offsets: dict = {}
        self.chunk = chunk

    def add(self, arrays: dict) -> bool:
        for key in sorted(arrays):
            if key not in self.offsets:
                self.offsets[key] = len(self.offsets) * self.chunk
        dtype = np.int64 if isinstance(self.ech, ModEchelon) else float
        vec = np.zeros(len(self.offsets) * self.chunk, dtype=dtype)
        for key, arr in arrays.items():
            off = self.offsets[key]
            vec[off : off + self.chunk] = arr.ravel()
        return self.ech.add(vec)


# --------------------------------------------------------------------------- #
# column engine
# --------------------------------------------------------------------------- #


def box(radius: int, dim: int):
    return itertools.product(range(radius + 1), repeat=dim)


def _split_columns(x: Operator, radius: int, fld) -> dict:
    """{(z, delta): array over the input box} with e_pin -> value e_(pin + delta)."""
    fock = x.signature.fock
    shape = (radius + 1,) * fock
    dtype = np.int64 if fld.exact else float
    out: dict = {}
    for pin in box(radius, fock):
        for (z, pout), v in x.column(pin, fld).items():
            key = (z, tuple(b - a for a, b in zip(pin, pout)))
            arr = out.get(key)
            if arr is None:
                arr = out[key] = np.zeros(shape, dtype=dtype)
            arr[pin] = v
    return out


def _shifted(arr: np.ndarray, delta, radius: int) -> np.ndarray:
    """b[pin] = arr[pin + delta] on box(radius); indices below 0 are clipped (masked by the caller)."""
    if not delta:
        return arr
    top = arr.shape[0] - 1
    idx = [np.clip(np.arange(radius + 1) + s, 0, top) for s in delta]
    return arr[np.ix_(*idx)]


def _crop(arr: np.ndarray, radius: int) -> np.ndarray:
    return arr[(slice(0, radius + 1),) * arr.ndim]


class _Words:
    """Words in the generators, each stored as {(z, delta): array over its level box}."""

    def __init__(self, gens: GeneratorSet, fld, windows: list[int]):
        self.fld = fld
        self.exact = fld.exact
        top = windows[1] if len(windows) > 1 else windows[0]
        self.gen = [_split_columns(x, top, fld) for x in gens.ops]
        sig = gens.signature
        shape = (windows[0] + 1,) * sig.fock
        one = np.ones(shape, dtype=np.int64 if fld.exact else float)
        self.unit = {((0,) * sig.laurent, (0,) * sig.fock): one}

    def times(self, word: dict, g: int, radius: int) -> dict:
        """(word * generator g) on box(radius); word must live on a box of radius + raise."""
        out: dict = {}
        p = self.fld.p if self.exact else None
        for (zg, dg), phi in self.gen[g].items():
            phi = _crop(phi, radius)
            for (zw, dw), psi in word.items():
                val = phi * _shifted(psi, dg, radius)
                key = (tuple(a + b for a, b in zip(zg, zw)), tuple(a + b for a, b in zip(dg, dw)))
                acc = out.get(key)
                out[key] = val if acc is None else acc + val
                if p is not None:
                    out[key] %= p
        return {k: v for k, v in out.items() if v.any()}


def grading(gens: GeneratorSet) -> tuple[tuple[int, ...], ...]:
    """Integer functionals on (z, a - c) that are constant on the terms of every generator.

    Words in the generators are then homogeneous, span(Xi^m) splits into
    graded pieces, and elimination runs block by block.
    """
    sig = gens.signature
    dim = sig.laurent + sig.fock
    diffs = []
    for x in gens.ops:
        vecs = [tuple(z) + tuple(a - c for a, c in zip(av, cv)) for z, av, cv in x.terms]
        diffs += [tuple(v - w for v, w in zip(vec, vecs[0])) for vec in vecs[1:]]
    if not diffs:
        return tuple(tuple(int(i == j) for j in range(dim)) for i in range(dim))
    snf = smith_normal_form(diffs, dim)
    return tuple(tuple(snf.V[i][j] for i in range(dim)) for j in range(snf.rank, dim))


def _degree(x: Operator, F) -> tuple[int, ...]:
    z, a, c = next(iter(x.terms))
    v = tuple(z) + tuple(p - r for p, r in zip(a, c))
    return tuple(sum(f * t for f, t in zip(row, v)) for row in F)


def level_dims(gens: GeneratorSet, m_max: int, radius: int, fld, tolerance: float = 1e-9) -> tuple[list[int], list[int]]:
    """d(0..m_max) for one field with final-level radius ``radius``."""
    raise_ = gens.raise_bound
    windows = [radius + (m_max - m) * raise_ for m in range(m_max + 1)]
    F = grading(gens)
    gdeg = [_degree(x, F) for x in gens.ops]
    words = _Words(gens, fld, windows)
    fock = gens.signature.fock
    # (degree, arrays) per kept word; arrays live on the box of the word's level
    basis = [(gdeg[0], words.unit)]
    new = list(basis)
    dims = [1]
    for m in range(1, m_max + 1):
        R = windows[m]
        chunk = (R + 1) ** fock
        blocks: dict = {}

        def keep(deg, arrays):
            blk = blocks.get(deg)
            if blk is None:
                blk = blocks[deg] = _Block(fld, tolerance, chunk)
            return blk.add(arrays)

        kept, fresh = [], []
        for deg, arrays in basis:
            arrays = {k: _crop(v, R) for k, v in arrays.items()}
            if arrays and keep(deg, arrays):
                kept.append((deg, arrays))
        for deg, arrays in new:
            for g in range(1, len(gens)):
                prod = words.times(arrays, g, R)
                d = tuple(x + y for x, y in zip(deg, gdeg[g]))
                if prod and keep(d, prod):
                    kept.append((d, prod))
                    fresh.append((d, prod))
        basis, new = kept, fresh
        dims.append(len(kept))
    return dims, windows


def _dims_for_radius(gens, m_max, radius, backend: Backend, threads: int = 1) -> tuple[list[int], list[int]]:
    fields = backend.fields()
    if threads > 1 and len(fields) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda f: level_dims(gens, m_max, radius, f, backend.tolerance), fields))
    else:
        results = [level_dims(gens, m_max, radius, f, backend.tolerance) for f in fields]
    dims = [max(col) for col in zip(*(r[0] for r in results))]
    return dims, results[0][1]


def span_growth(
    gens: GeneratorSet,
    m_max: int,
    window: WindowPolicy = WindowPolicy(),
    backend: Backend = Backend(),
    threads: int = 1,
) -> GrowthSeries:
    """d(m) = dim span(Xi^m) for m = 1..m_max with window stabilization."""
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    fock = gens.signature.fock
    history, windows = [], []
    radius = window.fock_cap
    while True:
        dims, wins = _dims_for_radius(gens, m_max, radius, backend, threads)
        history.append(dims)
        windows = wins
        if fock == 0:
            stable = [True] * (m_max + 1)
            break
        need = window.confirmations + 1
        if len(history) >= need:
            tail = history[-need:]
            stable = [len({h[m] for h in tail}) == 1 for m in range(m_max + 1)]
            if all(stable):
                break
        else:
            stable = [False] * (m_max + 1)
        if radius + window.step > window.budget:
            break
        radius += window.step
    rows = [
        GrowthRow(m, history[-1][m], window.laurent_radius, windows[m] if fock else 0, stable[m])
        for m in range(1, m_max + 1)
    ]
    return GrowthSeries(rows, backend.describe(), len(gens), [h[1:] for h in history])


def family_rank(ops: Sequence[Operator], radius: int, backend: Backend = Backend()) -> int:
    """Rank of a fixed operator family restricted to the input box of ``radius``."""
    best = 0
    for fld in backend.fields():
        chunk = (radius + 1) ** ops[0].signature.fock
        blk = _Block(fld, backend.tolerance, chunk)
        rank = sum(blk.add(_split_columns(x, radius, fld)) for x in ops if x)
        best = max(best, rank)
    return best


def stable_family_rank(ops: Sequence[Operator], radius: int, backend: Backend = Backend(), step: int = 2) -> tuple[int, bool]:
    """Rank at radius, radius+step, radius+2*step; stable when all three agree."""
    ranks = [family_rank(ops, radius + t * step, backend) for t in range(3)]
    return ranks[-1], len(set(ranks)) == 1


# --------------------------------------------------------------------------- #
# degree detection
# --------------------------------------------------------------------------- #


def degree_detect(series: GrowthSeries | Sequence[int], min_run: int = 3) -> DegreeEstimate:
    """Polynomial growth degree of d(m).

    Looks for the smallest t whose t-th differences are constant over the last
    ``min_run`` consecutive stable values; falls back to a log-log fit on the
    second half of the series.
    """
    if isinstance(series, GrowthSeries):
        rows = series.stable_rows()
        ms = [r.m for r in rows]
        ds = [r.d for r in rows]
    else:
        ds = list(series)
        ms = list(range(1, len(ds) + 1))
    if len(ds) < 5:
        raise InsufficientRowsError("degree detection needs at least 5 stable rows")
    # keep the trailing run of consecutive m
    start = len(ms) - 1
    while start > 0 and ms[start - 1] == ms[start] - 1:
        start -= 1
    ms, ds = ms[start:], ds[start:]

    x = np.log(np.array(ms[len(ms) // 2 :], dtype=float))
    y = np.log(np.array(ds[len(ds) // 2 :], dtype=float))
    if len(x) >= 2 and np.ptp(x) > 0:
        coef, res, *_ = np.polyfit(x, y, 1, full=True)
        slope = float(coef[0])
        residual = float(res[0]) if len(res) else 0.0
    else:
        slope, residual = float("nan"), float("nan")

    diffs = list(ds)
    for t in range(0, len(ds) - min_run + 1):
        tail = diffs[-min_run:]
        if len(diffs) >= min_run and len(set(tail)) == 1:
            if tail[0] != 0:
                return DegreeEstimate(t, "finite-differences", tail, slope, residual)
            return DegreeEstimate(max(t - 1, 0), "finite-differences", tail, slope, residual)
        diffs = [b - a for a, b in zip(diffs, diffs[1:])]
    return DegreeEstimate(int(round(slope)), "loglog", diffs[-min_run:], slope, residual)


# --------------------------------------------------------------------------- #
# closed forms
# --------------------------------------------------------------------------- #


@dataclass(frozen=True)
class GKdimReport:
    family: str
    n: int
    longest_length: int
    gkdim: int
    manifold_dim: int
    enumerated: bool

    @property
    def match(self) -> bool:
        return self.gkdim == self.manifold_dim


def gkdim_report(family: str, n: int) -> GKdimReport:
    fam = WeylFamily(family, n)
    if n <= 6:
        length = len(longest_element(weyl_group(family, n)))
        exact = True
    else:
        length = fam.longest_length_formula
        exact = False
    return GKdimReport(family, n, length, 2 * length + n, fam.manifold_dim, exact)
