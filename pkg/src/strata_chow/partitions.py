"""Set partitions of [n] and integer partitions of n."""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from math import comb, factorial
from typing import Iterable, Iterator, Sequence


@dataclass(frozen=True, order=True)
class SetPartition:
    """A partition of {1..n}; parts are sorted tuples, ordered by their minima."""

    n: int
    parts: tuple[tuple[int, ...], ...]

    def __init__(self, parts: Iterable[Iterable[int]], n: int | None = None):
        ps = [tuple(sorted(p)) for p in parts]
        if any(not p for p in ps):
            raise ValueError("empty part")
        if any(len(set(p)) != len(p) for p in ps):
            raise ValueError(f"repeated element in {ps}")
        ps.sort(key=lambda p: p[0])
        elems = [x for p in ps for x in p]
        if n is None:
            n = max(elems, default=0)
        if sorted(elems) != list(range(1, n + 1)):
            raise ValueError(f"parts {ps} do not partition [1..{n}]")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "parts", tuple(ps))

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "SetPartition":
        """Parse "1,3|2|4,5" (also accepts "{{1,3},{2},{4,5}}")."""
        text = text.strip()
        if text.startswith("{"):
            groups = re.findall(r"\{([^{}]*)\}", text)
        else:
            groups = text.split("|")
        try:
            parts = [[int(x) for x in g.replace(" ", "").split(",") if x] for g in groups]
        except ValueError as exc:
            raise ValueError(f"cannot parse set partition {text!r}") from exc
        return cls(parts, n)

    @classmethod
    def singletons(cls, n: int) -> "SetPartition":
        return cls([[i] for i in range(1, n + 1)], n)

    @property
    def d(self) -> int:
        return len(self.parts)

    def __len__(self):
        return len(self.parts)

    def __str__(self):
        return "|".join(",".join(map(str, p)) for p in self.parts)

    def __repr__(self):
        return f"SetPartition({self})"

    def part_of(self, i: int) -> tuple[int, ...]:
        for p in self.parts:
            if i in p:
                return p
        raise ValueError(f"{i} not in [1..{self.n}]")

    def block_index(self, i: int) -> int:
        for k, p in enumerate(self.parts):
            if i in p:
                return k
        raise ValueError(f"{i} not in [1..{self.n}]")

    def same_part(self, i: int, j: int) -> bool:
        return self.block_index(i) == self.block_index(j)

    def merge(self, i: int, j: int) -> "SetPartition":
        a, b = self.block_index(i), self.block_index(j)
        if a == b:
            raise ValueError(f"{i} and {j} already lie in the same part of {self}")
        rest = [p for k, p in enumerate(self.parts) if k not in (a, b)]
        return SetPartition(rest + [self.parts[a] + self.parts[b]], self.n)

    def without(self, i: int) -> "SetPartition":
        """Delete i and renumber the larger elements down by one."""
        parts = []
        for p in self.parts:
            q = [x - (x > i) for x in p if x != i]
            if q:
                parts.append(q)
        return SetPartition(parts, self.n - 1)

    def add_to_part_of(self, new: int, j: int) -> "SetPartition":
        """Adjoin element new (= n+1) to the part containing j."""
        return SetPartition([p + (new,) if j in p else p for p in self.parts], self.n + 1)

    def add_singleton(self, new: int) -> "SetPartition":
        return SetPartition(list(self.parts) + [(new,)], self.n + 1)

    def shape(self) -> "IntPartition":
        return IntPartition(len(p) for p in self.parts)

    def to_json(self):
        return [list(p) for p in self.parts]


def shape(P: SetPartition) -> "IntPartition":
    return P.shape()


def merge(P: SetPartition, i: int, j: int) -> SetPartition:
    return P.merge(i, j)


# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class IntPartition:
    """A partition of n, parts weakly decreasing."""

    parts: tuple[int, ...]

    def __init__(self, parts: Iterable[int]):
        ps = tuple(sorted((int(p) for p in parts), reverse=True))
        if not ps or ps[-1] <= 0:
            raise ValueError("an integer partition needs positive parts")
        object.__setattr__(self, "parts", ps)

    @classmethod
    def parse(cls, text: str) -> "IntPartition":
        """Parse "3+2+1", "3^1 2^1 1^1", "[4,1,1]" or "{4,1,1}"."""
        t = text.strip()
        if t and t[0] in "[{(" and t[-1] in "]})":
            t = t[1:-1]
        if "^" in t:
            parts = []
            for tok in t.replace(",", " ").split():
                a, _, e = tok.partition("^")
                parts += [int(a)] * int(e or 1)
        else:
            toks = re.split(r"[+,\s]+", t)
            try:
                parts = [int(x) for x in toks if x]
            except ValueError as exc:
                raise ValueError(f"cannot parse integer partition {text!r}") from exc
        try:
            return cls(parts)
        except ValueError as exc:
            raise ValueError(f"cannot parse integer partition {text!r}: {exc}") from exc

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def d(self) -> int:
        return len(self.parts)

    def multiplicities(self) -> dict[int, int]:
        return dict(sorted(Counter(self.parts).items(), reverse=True))

    def normalization(self) -> int:
        out = 1
        for e in Counter(self.parts).values():
            out *= factorial(e)
        return out

    def is_special(self) -> bool:
        if self.n % 2:
            raise ValueError("speciality is defined for partitions of an even integer")
        mult = Counter(self.parts)
        if any(a % 2 == 0 for a in mult) or any(e % 2 for e in mult.values()):
            return False
        multinomial = factorial(self.d)
        for e in mult.values():
            multinomial //= factorial(e)
        return multinomial % 2 == 1

    def merges(self) -> list["IntPartition"]:
        """All partitions obtained by merging some parts (including self)."""
        seen = set()
        for P in enumerate_set_partitions_all(self.d):
            seen.add(IntPartition(sum(self.parts[i - 1] for i in block) for block in P.parts))
        return sorted(seen, reverse=True)

    def seed(self) -> SetPartition:
        """A set partition of shape self: consecutive blocks of sizes parts."""
        out, start = [], 1
        for a in self.parts:
            out.append(range(start, start + a))
            start += a
        return SetPartition(out, self.n)

    def __str__(self):
        return "[" + ",".join(map(str, self.parts)) + "]"

    def __repr__(self):
        return f"IntPartition({self})"

    def __iter__(self):
        return iter(self.parts)

    def to_json(self):
        return list(self.parts)


def normalization(lam: IntPartition) -> int:
    return lam.normalization()


def is_special(lam: IntPartition) -> bool:
    return lam.is_special()


# ---------------------------------------------------------------------------
# Enumeration

def _restricted_growth(n: int, d: int) -> Iterator[list[int]]:
    a = [0] * n

    def rec(i, m):
        if i == n:
            if m == d:
                yield list(a)
            return
        # remaining slots must be able to open the missing blocks
        if d - m > n - i:
            return
        for b in range(min(m + 1, d)):
            a[i] = b
            yield from rec(i + 1, max(m, b + 1))

    yield from rec(0, 0)


def enumerate_set_partitions(d: int, n: int) -> list[SetPartition]:
    if not 1 <= d <= n:
        raise ValueError(f"need 1 <= d <= n, got d={d}, n={n}")
    out = []
    for rgs in _restricted_growth(n, d):
        blocks: list[list[int]] = [[] for _ in range(d)]
        for i, b in enumerate(rgs, 1):
            blocks[b].append(i)
        out.append(SetPartition(blocks, n))
    return out


def enumerate_set_partitions_all(n: int) -> list[SetPartition]:
    return [P for d in range(1, n + 1) for P in enumerate_set_partitions(d, n)]


def enumerate_int_partitions(n: int, d: int | None = None) -> list[IntPartition]:
    out = []

    def rec(rem, cap, acc):
        if rem == 0:
            if d is None or len(acc) == d:
                out.append(IntPartition(acc))
            return
        if d is not None and len(acc) >= d:
            return
        for a in range(min(rem, cap), 0, -1):
            rec(rem - a, a, acc + [a])

    rec(n, n, [])
    return out


# ---------------------------------------------------------------------------
# Good partitions

def _is_interval(p: Sequence[int]) -> bool:
    return p[-1] - p[0] + 1 == len(p)


def is_good(P: SetPartition) -> bool:
    if P.d < 2:
        raise ValueError("goodness needs at least two parts")
    parts = P.parts
    for a, b in permutations(range(P.d), 2):
        if a > b:
            continue  # the condition is symmetric in A1, A2
        union = sorted(parts[a] + parts[b])
        if union != list(range(1, len(union) + 1)):
            continue
        if all(_is_interval(p) for k, p in enumerate(parts) if k not in (a, b)):
            return True
    return False


def good_partitions(d: int, n: int) -> list[SetPartition]:
    if d > n:
        return []
    return [P for P in enumerate_set_partitions(d, n) if is_good(P)]


def _binom(a: int, b: int) -> int:
    """Binomial coefficient with C(a, 0) = 1 for every a and 0 for b < 0 or 0 <= a < b."""
    if b < 0:
        return 0
    if b == 0:
        return 1
    if a < 0:
        # (-1)^b C(b - a - 1, b)
        return (-1) ** b * comb(b - a - 1, b)
    return comb(a, b)


def count_good_closed(d: int, n: int) -> int:
    if d > n:
        return 0
    return sum((2 ** (k - 1) - 1) * _binom(n - k - 1, n - k - d + 2) for k in range(1, n - d + 3))


def count_good(d: int, n: int) -> tuple[int, int]:
    """(brute-force count of Good(d, n), closed-form count)."""
    if d < 2 or n < 2:
        raise ValueError("need d >= 2 and n >= 2")
    direct = len(good_partitions(d, n)) if d <= n else 0
    return direct, count_good_closed(d, n)


@lru_cache(maxsize=None)
def rank(k: int, n: int) -> int:
    """Rank of the degree-k piece: sum_{i <= k, i = k mod 2} C(n, i)."""
    if n < 1 or k < 0:
        raise ValueError("need n >= 1 and k >= 0")
    return sum(comb(n, i) for i in range(k % 2, k + 1, 2))


def stirling2(n: int, d: int) -> int:
    if n == d:
        return 1
    if d == 0 or d > n:
        return 0
    return d * stirling2(n - 1, d) + stirling2(n - 1, d - 1)
