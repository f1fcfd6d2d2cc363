"""Weyl groups of types A, C and D as (signed) permutation groups.

Elements act on the coordinate vectors e_1, ..., e_N' (N' = n+1 for A_n and
N' = n for C_n, D_n).  An element is stored by its images ``w(e_i) = ±e_j``.
Lengths are computed by counting positive roots sent to negative roots, and
canonical reduced words come from repeatedly stripping the smallest left
descent.

>>> W = weyl_group("A", 2)
>>> W.order()
6
>>> longest_element(W).letters
(1, 2, 1)
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

FAMILIES = ("A", "C", "D")
MIN_RANK = {"A": 1, "C": 2, "D": 2}
ENUMERATION_CAP = 5


class RankError(ValueError):
    pass


class DecompositionError(RuntimeError):
    """No parts decomposition matches the Case templates."""


@dataclass(frozen=True)
class WeylFamily:
    family: str
    n: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise RankError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if not isinstance(self.n, int) or self.n < MIN_RANK[self.family]:
            raise RankError(f"rank {self.n} out of range for type {self.family}")

    @property
    def corep_dim(self) -> int:
        return self.n + 1 if self.family == "A" else 2 * self.n

    @property
    def ambient_dim(self) -> int:
        return self.n + 1 if self.family == "A" else self.n

    @property
    def root_exponents(self) -> tuple[int, ...]:
        """The d_i = <alpha_i, alpha_i>/2, normalized so short roots have d = 1."""
        if self.family == "C":
            return (1,) * (self.n - 1) + (2,)
        return (1,) * self.n

    def lower_index(self, i: int) -> int:
        """M_n^i: smallest row index touched by the first i parts."""
        return 1 if self.family == "A" else self.n - i + 1

    def upper_index(self, i: int) -> int:
        """N_n^i: largest row index touched by the first i parts."""
        return i + 1 if self.family == "A" else self.corep_dim - self.n + i

    @property
    def manifold_dim(self) -> int:
        n = self.n
        return {"A": n * n + 2 * n, "C": 2 * n * n + n, "D": 2 * n * n - n}[self.family]

    @property
    def longest_length_formula(self) -> int:
        n = self.n
        return {"A": n * (n + 1) // 2, "C": n * n, "D": n * n - n}[self.family]

    @property
    def order_formula(self) -> int:
        n = self.n
        if self.family == "A":
            return math.factorial(n + 1)
        if self.family == "C":
            return 2**n * math.factorial(n)
        return 2 ** (n - 1) * math.factorial(n)


@dataclass(frozen=True)
class SignedPerm:
    """``images[i-1] = ±j`` means the element maps e_i to ±e_j."""

    images: tuple[int, ...]

    def __post_init__(self):
        absval = sorted(abs(x) for x in self.images)
        if absval != list(range(1, len(self.images) + 1)):
            raise ValueError(f"not a signed permutation: {self.images}")

    @classmethod
    def identity(cls, size: int) -> "SignedPerm":
        return cls(tuple(range(1, size + 1)))

    def __mul__(self, other: "SignedPerm") -> "SignedPerm":
        # (self * other)(e_i) = self(other(e_i))
        out = []
        for x in other.images:
            y = self.images[abs(x) - 1]
            out.append(y if x > 0 else -y)
        return SignedPerm(tuple(out))

    def inverse(self) -> "SignedPerm":
        out = [0] * len(self.images)
        for i, x in enumerate(self.images, start=1):
            out[abs(x) - 1] = i if x > 0 else -i
        return SignedPerm(tuple(out))

    def act(self, vec: Sequence[int]) -> tuple[int, ...]:
        out = [0] * len(vec)
        for i, c in enumerate(vec):
            if c:
                x = self.images[i]
                out[abs(x) - 1] += c if x > 0 else -c
        return tuple(out)

    @property
    def negatives(self) -> int:
        return sum(1 for x in self.images if x < 0)

    def is_identity(self) -> bool:
        return all(x == i for i, x in enumerate(self.images, start=1))


@dataclass(frozen=True)
class ReducedWord:
    letters: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.letters)

    @property
    def length(self) -> int:
        return len(self.letters)

    def __add__(self, other: "ReducedWord") -> "ReducedWord":
        return ReducedWord(self.letters + other.letters)


@dataclass(frozen=True)
class Part:
    r: int
    epsilon: int
    k: int
    letters: tuple[int, ...]


@dataclass(frozen=True)
class PartsDecomposition:
    parts: tuple[Part, ...]

    @property
    def letters(self) -> tuple[int, ...]:
        return tuple(itertools.chain.from_iterable(p.letters for p in self.parts))

    @property
    def length(self) -> int:
        return len(self.letters)

    def part(self, r: int) -> tuple[int, ...]:
        return self.parts[r - 1].letters


def _is_positive(vec: Sequence[int]) -> bool:
    for c in vec:
        if c:
            return c > 0
    return False


def _unit(size: int, i: int, c: int = 1) -> list[int]:
    v = [0] * size
    v[i - 1] = c
    return v


@dataclass(frozen=True)
class WeylGroup:
    family: WeylFamily
    generators: tuple[SignedPerm, ...] = field(init=False)
    simple_roots: tuple[tuple[int, ...], ...] = field(init=False)
    positive_roots: tuple[tuple[int, ...], ...] = field(init=False)

    def __post_init__(self):
        fam, n, size = self.family.family, self.family.n, self.family.ambient_dim
        gens, simple = [], []
        for i in range(1, n + 1):
            img = list(range(1, size + 1))
            root = [0] * size
            if fam == "A" or i < n:
                img[i - 1], img[i] = i + 1, i
                root[i - 1], root[i] = 1, -1
            elif fam == "C":
                img[n - 1] = -n
                root[n - 1] = 2
            else:
                img[n - 2], img[n - 1] = -n, -(n - 1)
                root[n - 2], root[n - 1] = 1, 1
            gens.append(SignedPerm(tuple(img)))
            simple.append(tuple(root))
        pos = []
        for i, j in itertools.combinations(range(1, size + 1), 2):
            pos.append(tuple(a - b for a, b in zip(_unit(size, i), _unit(size, j))))
            if fam != "A":
                pos.append(tuple(a + b for a, b in zip(_unit(size, i), _unit(size, j))))
        if fam == "C":
            pos.extend(tuple(_unit(size, i, 2)) for i in range(1, size + 1))
        object.__setattr__(self, "generators", tuple(gens))
        object.__setattr__(self, "simple_roots", tuple(simple))
        object.__setattr__(self, "positive_roots", tuple(pos))

    @property
    def n(self) -> int:
        return self.family.n

    def identity(self) -> SignedPerm:
        return SignedPerm.identity(self.family.ambient_dim)

    def element(self, letters: Iterable[int]) -> SignedPerm:
        w = self.identity()
        for i in letters:
            if not 1 <= i <= self.n:
                raise ValueError(f"letter {i} out of range 1..{self.n}")
            w = w * self.generators[i - 1]
        return w

    def length(self, w: SignedPerm) -> int:
        return sum(1 for root in self.positive_roots if not _is_positive(w.act(root)))

    def is_left_descent(self, w: SignedPerm, i: int) -> bool:
        """True when l(s_i w) < l(w)."""
        return not _is_positive(w.inverse().act(self.simple_roots[i - 1]))

    def is_right_descent(self, w: SignedPerm, i: int) -> bool:
        return not _is_positive(w.act(self.simple_roots[i - 1]))

    def contains(self, w: SignedPerm) -> bool:
        if len(w.images) != self.family.ambient_dim:
            return False
        fam = self.family.family
        if fam == "A":
            return w.negatives == 0
        if fam == "D":
            return w.negatives % 2 == 0
        return True

    def reduced_word(self, w: SignedPerm) -> ReducedWord:
        letters = []
        while not w.is_identity():
            i = next(i for i in range(1, self.n + 1) if self.is_left_descent(w, i))
            letters.append(i)
            w = self.generators[i - 1] * w
        return ReducedWord(tuple(letters))

    def elements(self) -> list[SignedPerm]:
        if self.n > ENUMERATION_CAP:
            raise RankError(f"enumeration capped at rank {ENUMERATION_CAP}")
        return _enumerate(self)

    def order(self) -> int:
        if self.n > ENUMERATION_CAP:
            return self.family.order_formula
        return len(self.elements())

    def parabolic(self, subset: Iterable[int]) -> list[SignedPerm]:
        """Elements of the subgroup W_S generated by s_i, i in S."""
        subset = sorted(set(subset))
        seen = {self.identity()}
        frontier = [self.identity()]
        while frontier:
            nxt = []
            for w in frontier:
                for i in subset:
                    v = self.generators[i - 1] * w
                    if v not in seen:
                        seen.add(v)
                        nxt.append(v)
            frontier = nxt
        return list(seen)


@functools.lru_cache(maxsize=None)
def _enumerate_cached(family: str, n: int) -> tuple[SignedPerm, ...]:
    W = WeylGroup(WeylFamily(family, n))
    return tuple(W.parabolic(range(1, n + 1)))


def _enumerate(W: WeylGroup) -> list[SignedPerm]:
    return list(_enumerate_cached(W.family.family, W.n))


def weyl_group(family: str, n: int) -> WeylGroup:
    return WeylGroup(WeylFamily(family, n))


def word_normalize(group: WeylGroup, letters: Iterable[int]) -> ReducedWord:
    return group.reduced_word(group.element(letters))


def is_reduced(group: WeylGroup, letters: Sequence[int]) -> bool:
    return group.length(group.element(letters)) == len(letters)


def longest_element(group: WeylGroup) -> ReducedWord:
    w = group.identity()
    grew = True
    while grew:
        grew = False
        for i in range(1, group.n + 1):
            if not group.is_left_descent(w, i):
                w = group.generators[i - 1] * w
                grew = True
                break
    return group.reduced_word(w)


def longest_coset_rep(group: WeylGroup, subset: Iterable[int]) -> ReducedWord:
    """Longest element of W^S = {w : l(s_i w) > l(w) for all i in S}.

    Computed as w_S * w_0, the unique longest minimal left coset representative.
    """
    subset = sorted(set(subset))
    for i in subset:
        if not 1 <= i <= group.n:
            raise ValueError(f"subset element {i} out of range")
    w0 = group.element(longest_element(group).letters)
    ws = max(group.parabolic(subset), key=group.length)
    return group.reduced_word(ws * w0)


def coset_reps(group: WeylGroup, subset: Iterable[int]) -> list[SignedPerm]:
    """W^S by enumeration."""
    subset = list(subset)
    return [w for w in group.elements() if not any(group.is_left_descent(w, i) for i in subset)]


# parts decomposition ----------------------------------------------------------



def _ascending(a: int, b: int) -> list[int]:
    return list(range(a, b + 1)) if b >= a else []


def _descending(a: int, b: int) -> list[int]:
    return list(range(a, b - 1, -1)) if a >= b else []


def part_template(family: str, n: int, r: int, epsilon: int, k: int) -> tuple[int, ...]:
    """The letter string psi_{r,k}^{(epsilon)} for the given family."""
    if not n - r + 1 <= k <= n:
        raise ValueError(f"k={k} out of range for r={r}")
    if epsilon == 0:
        return ()
    if family == "A":
        return tuple(_descending(r, n - k + 1))
    start = n - r + 1
    if epsilon == 1:
        return tuple(_ascending(start, k))
    if family == "C":
        return tuple(_ascending(start, n - 1) + [n] + _descending(n - 1, k))
    return tuple(_ascending(start, n - 1) + [n] + _descending(n - 2, k))


def part_candidates(family: str, n: int, r: int) -> list[Part]:
    """Templates for part r in search order: epsilon 2, 1, 0; larger k first."""
    out, seen = [], set()
    for eps in (2, 1, 0):
        for k in range(n, n - r, -1):
            letters = part_template(family, n, r, eps, k)
            if letters in seen:
                continue
            seen.add(letters)
            out.append(Part(r, eps, k, letters))
    return out


def parts_decompose(group: WeylGroup, word: Sequence[int] | ReducedWord) -> PartsDecomposition:
    """Factor w as psi_1 psi_2 ... psi_n with each psi_r a Case template.

    Depth-first search from r = 1; a branch is kept only while the prefix is
    reduced and is a left prefix of w (no length drop in prefix^-1 * w).
    """
    letters = word.letters if isinstance(word, ReducedWord) else tuple(word)
    target = group.element(letters)
    total = group.length(target)
    fam, n = group.family.family, group.n

    def search(r: int, prefix: SignedPerm, plen: int, chosen: list[Part]):
        if r > n:
            return list(chosen) if prefix == target else None
        for cand in part_candidates(fam, n, r):
            x = prefix * group.element(cand.letters)
            xlen = plen + len(cand.letters)
            if group.length(x) != xlen:
                continue
            if group.length(x.inverse() * target) != total - xlen:
                continue
            chosen.append(cand)
            found = search(r + 1, x, xlen, chosen)
            chosen.pop()
            if found is not None:
                return found
        return None

    found = search(1, group.identity(), 0, [])
    if found is None:
        raise DecompositionError(f"no parts decomposition for {letters} in {fam}_{n}")
    return PartsDecomposition(tuple(found))


def longest_parts(group: WeylGroup) -> PartsDecomposition:
    return parts_decompose(group, longest_element(group))
