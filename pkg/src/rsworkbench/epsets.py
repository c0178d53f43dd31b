"""Exact arithmetic on ultimately periodic subsets of the natural numbers.

A set is stored as a prefix word (membership bits for 0..len(prefix)-1)
followed by a period word repeated forever.  Values are kept in a canonical
form so that two descriptors denote the same set iff they compare equal.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import islice
from math import gcd
from typing import Callable, Iterable, Iterator, Optional, Sequence


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _primitive_root(word: str) -> str:
    n = len(word)
    for d in range(1, n + 1):
        if n % d == 0 and word[:d] * (n // d) == word:
            return word[:d]
    return word


def _check_bits(word: str, what: str) -> None:
    if any(ch not in "01" for ch in word):
        raise ValueError(f"{what} must be a bit word, got {word!r}")


@dataclass(frozen=True)
class UPSet:
    """An ultimately periodic subset of N, always held in canonical form.

    The period is primitive and the prefix is as short as possible.
    Construction through the dataclass constructor canonicalizes.
    """

    prefix: str
    period: str

    def __post_init__(self):
        _check_bits(self.prefix, "prefix")
        _check_bits(self.period, "period")
        if not self.period:
            raise ValueError("period must be nonempty")
        prefix, period = self.prefix, _primitive_root(self.period)
        while prefix and prefix[-1] == period[-1]:
            prefix = prefix[:-1]
            period = period[-1] + period[:-1]
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "period", period)

    # construction helpers

    @classmethod
    def empty(cls) -> "UPSet":
        return cls("", "0")

    @classmethod
    def full(cls) -> "UPSet":
        return cls("", "1")

    @classmethod
    def finite(cls, members: Iterable[int]) -> "UPSet":
        members = set(members)
        if not members:
            return cls.empty()
        if min(members) < 0:
            raise ValueError("members must be natural numbers")
        top = max(members)
        return cls("".join("1" if n in members else "0" for n in range(top + 1)), "0")

    @classmethod
    def cofinite(cls, missing: Iterable[int]) -> "UPSet":
        return ~cls.finite(missing)

    @classmethod
    def residues(cls, modulus: int, classes: Iterable[int]) -> "UPSet":
        classes = {r % modulus for r in classes}
        return cls("", "".join("1" if r in classes else "0" for r in range(modulus)))

    @classmethod
    def interval(cls, lo: int, hi: Optional[int] = None) -> "UPSet":
        """Members n with lo <= n < hi (hi=None means unbounded)."""
        lo = max(lo, 0)
        if hi is None:
            return cls("0" * lo, "1")
        return cls.finite(range(lo, hi))

    @classmethod
    def from_predicate(cls, pred: Callable[[int], bool], start: int, period: int) -> "UPSet":
        """Sample pred on 0..start+period-1; the caller guarantees periodicity past start."""
        prefix = "".join("1" if pred(n) else "0" for n in range(start))
        cycle = "".join("1" if pred(n) else "0" for n in range(start, start + period))
        return cls(prefix, cycle)

    # membership and enumeration

    def __contains__(self, n: int) -> bool:
        if n < 0:
            return False
        if n < len(self.prefix):
            return self.prefix[n] == "1"
        return self.period[(n - len(self.prefix)) % len(self.period)] == "1"

    member = __contains__

    def is_finite(self) -> bool:
        return "1" not in self.period

    def is_infinite(self) -> bool:
        return "1" in self.period

    def is_cofinite(self) -> bool:
        return "0" not in self.period

    def __iter__(self) -> Iterator[int]:
        for n, bit in enumerate(self.prefix):
            if bit == "1":
                yield n
        if self.is_finite():
            return
        base = len(self.prefix)
        offsets = [i for i, bit in enumerate(self.period) if bit == "1"]
        while True:
            for i in offsets:
                yield base + i
            base += len(self.period)

    def members(self, limit: int) -> list[int]:
        """Members strictly below limit."""
        out = []
        for n in self:
            if n >= limit:
                break
            out.append(n)
        return out

    def first(self, count: int) -> list[int]:
        return list(islice(iter(self), count))

    def __len__(self) -> int:
        if self.is_infinite():
            raise ValueError("infinite set has no length")
        return self.prefix.count("1")

    def size(self) -> float:
        """Cardinality, with float('inf') for infinite sets."""
        return float("inf") if self.is_infinite() else self.prefix.count("1")

    def min(self) -> int:
        for n in self:
            return n
        raise ValueError("empty set has no minimum")

    def max(self) -> int:
        if self.is_infinite():
            raise ValueError("infinite set has no maximum")
        top = self.prefix.rfind("1")
        if top < 0:
            raise ValueError("empty set has no maximum")
        return top

    def __bool__(self) -> bool:
        return "1" in self.prefix or "1" in self.period

    def count_below(self, n: int) -> int:
        return len(self.members(n))

    def next_member(self, after: int) -> Optional[int]:
        """Least member strictly greater than after, or None."""
        probe = max(after + 1, 0)
        if probe >= len(self.prefix) and self.is_finite():
            return None
        limit = max(probe, len(self.prefix)) + len(self.period)
        while probe < limit or probe < len(self.prefix):
            if probe in self:
                return probe
            probe += 1
        return None

    # algebra

    def __invert__(self) -> "UPSet":
        return combine(SetOp.COMPLEMENT, self)

    def __and__(self, other: "UPSet") -> "UPSet":
        return combine(SetOp.INTERSECT, self, other)

    def __or__(self, other: "UPSet") -> "UPSet":
        return combine(SetOp.UNION, self, other)

    def __sub__(self, other: "UPSet") -> "UPSet":
        return combine(SetOp.INTERSECT, self, ~other)

    def __le__(self, other: "UPSet") -> bool:
        return not (self - other)

    def above(self, n: int) -> "UPSet":
        """Members strictly greater than n."""
        return self & UPSet.interval(n + 1)

    def below(self, n: int) -> "UPSet":
        """Members strictly less than n."""
        return self & UPSet.interval(0, n)

    def subset_star(self, other: "UPSet") -> bool:
        return subset_star(self, other)

    def shift(self, k: int) -> "UPSet":
        """The set {n + k : n in self, n + k >= 0}."""
        if k >= 0:
            return UPSet("0" * k + self.prefix, self.period)
        drop = -k
        if drop <= len(self.prefix):
            return UPSet(self.prefix[drop:], self.period)
        r = (drop - len(self.prefix)) % len(self.period)
        return UPSet("", self.period[r:] + self.period[:r])

    def bits(self, n: int) -> str:
        """Characteristic word of length n."""
        return "".join("1" if i in self else "0" for i in range(n))

    # serialization

    def to_json(self) -> dict:
        return {"prefix": self.prefix, "period": self.period}

    @classmethod
    def from_json(cls, data: dict) -> "UPSet":
        try:
            return cls(str(data["prefix"]), str(data["period"]))
        except KeyError as exc:
            raise ValueError(f"UPSet object is missing {exc.args[0]!r}") from None

    def __repr__(self) -> str:
        return f"UPSet({self.prefix!r}, {self.period!r})"

    def describe(self, show: int = 12) -> str:
        if self.is_finite():
            return "{" + ", ".join(map(str, self)) + "}"
        head = ", ".join(map(str, self.first(show)))
        return "{" + head + ", ...}"


class SetOp(enum.Enum):
    COMPLEMENT = "complement"
    INTERSECT = "intersect"
    UNION = "union"


_BINARY = {
    SetOp.INTERSECT: lambda x, y: x and y,
    SetOp.UNION: lambda x, y: x or y,
}


def make(prefix: str, period: str) -> UPSet:
    return UPSet(prefix, period)


def combine(op: SetOp | str, a: UPSet, b: Optional[UPSet] = None) -> UPSet:
    op = SetOp(op)
    if op is SetOp.COMPLEMENT:
        if b is not None:
            raise ValueError("complement takes one operand")
        flip = str.maketrans("01", "10")
        return UPSet(a.prefix.translate(flip), a.period.translate(flip))
    if b is None:
        raise ValueError(f"{op.value} takes two operands")
    offset = max(len(a.prefix), len(b.prefix))
    span = _lcm(len(a.period), len(b.period))
    fn = _BINARY[op]

    def bits(lo, hi):
        return "".join("1" if fn(n in a, n in b) else "0" for n in range(lo, hi))

    return UPSet(bits(0, offset), bits(offset, offset + span))


def intersect_all(sets: Iterable[UPSet]) -> UPSet:
    out = UPSet.full()
    for s in sets:
        out = out & s
    return out


def union_all(sets: Iterable[UPSet]) -> UPSet:
    out = UPSet.empty()
    for s in sets:
        out = out | s
    return out


def is_finite(a: UPSet) -> bool:
    return a.is_finite()


def nth_element(a: UPSet, i: int) -> int:
    if i < 0:
        raise IndexError("index must be a natural number")
    if a.is_finite() and i >= len(a):
        raise IndexError(f"set has only {len(a)} elements")
    for k, n in enumerate(a):
        if k == i:
            return n
    raise AssertionError("unreachable")


def subset_star(a: UPSet, b: UPSet) -> bool:
    """True iff a minus b is finite."""
    return combine(SetOp.INTERSECT, a, combine(SetOp.COMPLEMENT, b)).is_finite()


def signed(a: UPSet, bit: int | str) -> UPSet:
    """a itself for bit 1, its complement for bit 0."""
    return a if str(bit) == "1" else ~a


class SetSequenceDesc:
    """A total sequence of UPSets indexed by N."""

    def nth(self, i: int) -> UPSet:
        raise NotImplementedError

    def __getitem__(self, i: int) -> UPSet:
        return self.nth(i)


@dataclass(frozen=True)
class Extensional(SetSequenceDesc):
    """Finitely many explicit sets followed by a constant tail (empty or full)."""

    head: tuple[UPSet, ...]
    tail_full: bool = False

    def __post_init__(self):
        object.__setattr__(self, "head", tuple(self.head))

    def nth(self, i: int) -> UPSet:
        if i < 0:
            raise IndexError("index must be a natural number")
        if i < len(self.head):
            return self.head[i]
        return UPSet.full() if self.tail_full else UPSet.empty()

    @property
    def tail(self) -> UPSet:
        return UPSet.full() if self.tail_full else UPSet.empty()

    def to_json(self) -> dict:
        return {
            "form": "extensional",
            "head": [s.to_json() for s in self.head],
            "tail": "full" if self.tail_full else "empty",
        }

    @classmethod
    def from_json(cls, data: dict) -> "Extensional":
        tail = data.get("tail", "empty")
        if tail not in ("empty", "full"):
            raise ValueError(f"tail must be 'empty' or 'full', got {tail!r}")
        return cls(tuple(UPSet.from_json(s) for s in data.get("head", [])), tail == "full")


@dataclass(frozen=True)
class SequenceFamily:
    """A registered rule for an intensional sequence.

    ``horizon(params, probe)`` returns an index bound I such that questions
    about ``probe`` (cohesion or the one-or-infinitely-many dichotomy) are
    decided by the indices below I; it is None for families that only
    support bounded checks.
    """

    name: str
    nth: Callable[[tuple, int], UPSet]
    horizon: Optional[Callable[[tuple, object], int]] = None


_FAMILIES: dict[str, SequenceFamily] = {}


def _register_family(family: SequenceFamily) -> SequenceFamily:
    if family.name in _FAMILIES:
        raise ValueError(f"family {family.name!r} already registered")
    _FAMILIES[family.name] = family
    return family


def registered_families() -> tuple[str, ...]:
    return tuple(sorted(_FAMILIES))


@dataclass(frozen=True)
class Intensional(SetSequenceDesc):
    """A sequence given by a registered family tag and parameters."""

    family: str
    params: tuple

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown sequence family {self.family!r}")

    def nth(self, i: int) -> UPSet:
        if i < 0:
            raise IndexError("index must be a natural number")
        return _FAMILIES[self.family].nth(self.params, i)

    def horizon(self, probe) -> Optional[int]:
        fn = _FAMILIES[self.family].horizon
        return None if fn is None else fn(self.params, probe)

    def __hash__(self):
        return hash((self.family, repr(self.params)))


def a_sigma(seq: SetSequenceDesc, sigma: str | Sequence[int]) -> UPSet:
    """Signed intersection of seq[i] over i < len(sigma); the empty word gives N."""
    out = UPSet.full()
    for i, bit in enumerate(sigma):
        out = out & signed(seq.nth(i), bit)
    return out


@dataclass(frozen=True)
class Delta02Desc:
    """A two-argument approximation f(n, s) whose limit is a UPSet.

    f(n, s) is overrides[(n, s)] when present and limit(n) otherwise, so
    lim_s f(n, s) = limit(n) because the override table is finite.
    """

    limit: UPSet
    overrides: tuple[tuple[int, int, int], ...] = ()

    def __post_init__(self):
        table = {}
        for n, s, bit in self.overrides:
            if n < 0 or s < 0 or bit not in (0, 1):
                raise ValueError(f"bad override {(n, s, bit)!r}")
            table[(n, s)] = bit
        object.__setattr__(self, "overrides", tuple(sorted((n, s, b) for (n, s), b in table.items())))

    def __call__(self, n: int, s: int) -> int:
        for m, t, bit in self.overrides:
            if (m, t) == (n, s):
                return bit
        return 1 if n in self.limit else 0

    @property
    def settle_stage(self) -> int:
        """A stage after which f(n, s) = limit(n) for every n."""
        return 1 + max((s for _, s, _ in self.overrides), default=-1)

    @property
    def touched(self) -> int:
        """Indices n >= this bound carry no overrides."""
        return 1 + max((n for n, _, _ in self.overrides), default=-1)

    def to_json(self) -> dict:
        return {"limit": self.limit.to_json(), "overrides": [list(o) for o in self.overrides]}

    @classmethod
    def from_json(cls, data: dict) -> "Delta02Desc":
        return cls(UPSet.from_json(data["limit"]), tuple(tuple(o) for o in data.get("overrides", [])))


def period_words(max_len: int) -> Iterator[str]:
    for n in range(max_len + 1):
        for k in range(2 ** n):
            yield format(k, f"0{n}b") if n else ""


def enumerate_upsets(max_prefix: int, max_period: int) -> list[UPSet]:
    """All canonical UPSets expressible with prefix <= max_prefix and period <= max_period.

    The order is deterministic: by (prefix length, period length, prefix, period)
    of the first descriptor that produced each set.
    """
    seen: dict[UPSet, None] = {}
    for p in range(max_prefix + 1):
        for q in range(1, max_period + 1):
            for pre in (format(k, f"0{p}b") if p else "" for k in range(2 ** p)):
                for per in (format(k, f"0{q}b") for k in range(2 ** q)):
                    seen.setdefault(UPSet(pre, per), None)
    return list(seen)


EVENS = UPSet("", "10")
ODDS = UPSet("", "01")
NATURALS = UPSet.full()
EMPTY = UPSet.empty()
