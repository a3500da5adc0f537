"""Base hierarchies: queryable base sets and their successor constructions.

A base hierarchy is a nonempty set of integers >= 2 in which every base
divides the next one.  Hierarchies are materialized lazily from a spec;
rule-generated ones extend themselves on demand, explicit open prefixes
refuse queries beyond what they know.

A hierarchy value is single-owner mutable state (materialization appends);
snapshots are immutable and freely shareable.
"""

from __future__ import annotations

import json
import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from typing import Iterator, Union

from .errors import HierarchyError, NumericBlowup, UnknownBeyondPrefix

DEFAULT_DIGIT_CAP = 10**6


class _Inf:
    """Distinguished infinity: above every natural, divisible by all of them."""

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __gt__(self, other):
        return isinstance(other, int) or other is not self

    def __ge__(self, other):
        return True

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("ExtNat.INF")


INF = _Inf()
ExtNat = Union[int, _Inf]


def divides(k: int, m: ExtNat) -> bool:
    """k | m, where every positive k divides INF."""
    if m is INF:
        return k > 0
    return k > 0 and m % k == 0


def dec(n: int) -> str:
    """Decimal string of an arbitrary-precision int, lifting the interpreter's
    conversion guard as far as actually needed."""
    import sys

    if hasattr(sys, "get_int_max_str_digits"):
        need = int(n.bit_length() * 0.31) + 16
        if sys.get_int_max_str_digits() < need:
            sys.set_int_max_str_digits(need)
    return str(n)


def bits_cap(digit_cap: int) -> int:
    return int(digit_cap * math.log2(10)) + 8


def check_digits(value: int, digit_cap: int) -> int:
    if value.bit_length() > bits_cap(digit_cap):
        raise NumericBlowup(f"value exceeds {digit_cap}-digit cap")
    return value


def guarded_pow(base: int, exponent: int, digit_cap: int) -> int:
    """base ** exponent with a pre-check against the digit cap."""
    if base >= 2 and exponent * math.log2(base) > bits_cap(digit_cap):
        raise NumericBlowup(f"power exceeds {digit_cap}-digit cap")
    return base**exponent


# ---------------------------------------------------------------------------
# specs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExplicitSpec:
    bases: tuple[int, ...]
    open_ended: bool = False
    kind = "explicit"


@dataclass(frozen=True)
class RatioSpec:
    min_base: int
    k: int
    kind = "ratio"


@dataclass(frozen=True)
class PowerSpec:
    min_base: int
    k: int
    kind = "power"


@dataclass(frozen=True)
class TowerSpec:
    min_base: int
    n: int
    kind = "tower"


@dataclass(frozen=True)
class ClassicSpec:
    i: int
    kind = "classic"


@dataclass(frozen=True)
class OuroborosSpec:
    base: "HierarchySpec"
    i: int
    kind = "ouroboros"


@dataclass(frozen=True)
class MinimalisticSpec:
    base: "HierarchySpec"
    kind = "minimalistic"


@dataclass(frozen=True)
class CanonicalSpec:
    level: int
    kind = "canonical"


HierarchySpec = Union[
    ExplicitSpec,
    RatioSpec,
    PowerSpec,
    TowerSpec,
    ClassicSpec,
    OuroborosSpec,
    MinimalisticSpec,
    CanonicalSpec,
]


def spec_to_json(spec: HierarchySpec) -> dict:
    if isinstance(spec, ExplicitSpec):
        return {"kind": "explicit", "bases": list(spec.bases), "open": spec.open_ended}
    if isinstance(spec, RatioSpec):
        return {"kind": "ratio", "min": spec.min_base, "k": spec.k}
    if isinstance(spec, PowerSpec):
        return {"kind": "power", "min": spec.min_base, "k": spec.k}
    if isinstance(spec, TowerSpec):
        return {"kind": "tower", "min": spec.min_base, "n": spec.n}
    if isinstance(spec, ClassicSpec):
        return {"kind": "classic", "i": spec.i}
    if isinstance(spec, OuroborosSpec):
        return {"kind": "ouroboros", "base": spec_to_json(spec.base), "i": spec.i}
    if isinstance(spec, MinimalisticSpec):
        return {"kind": "minimalistic", "base": spec_to_json(spec.base)}
    if isinstance(spec, CanonicalSpec):
        return {"kind": "canonical", "level": spec.level}
    raise HierarchyError(f"unknown spec {spec!r}")


def spec_from_json(data: dict | str) -> HierarchySpec:
    if isinstance(data, str):
        data = json.loads(data)
    kind = data.get("kind")
    if kind == "explicit":
        return ExplicitSpec(tuple(data["bases"]), bool(data.get("open", False)))
    if kind == "ratio":
        return RatioSpec(int(data["min"]), int(data["k"]))
    if kind == "power":
        return PowerSpec(int(data["min"]), int(data["k"]))
    if kind == "tower":
        return TowerSpec(int(data["min"]), int(data["n"]))
    if kind == "classic":
        return ClassicSpec(int(data["i"]))
    if kind == "ouroboros":
        return OuroborosSpec(spec_from_json(data["base"]), int(data["i"]))
    if kind == "minimalistic":
        return MinimalisticSpec(spec_from_json(data["base"]))
    if kind == "canonical":
        return CanonicalSpec(int(data["level"]))
    raise HierarchyError(f"unknown hierarchy spec kind {kind!r}")


# ---------------------------------------------------------------------------
# decomposition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Decomposition:
    """n = b^e * a + r with b^e <= n < b^(e+1), 0 < a < b, r < b^e."""

    base: int
    exponent: int
    leading: int
    remainder: int


def decompose(n: int, b: int) -> Decomposition:
    if b < 2:
        raise ValueError(f"base must be >= 2, got {b}")
    if n <= 0:
        raise ValueError("only positive numbers decompose")
    e = 0
    p = 1
    while p * b <= n:
        p *= b
        e += 1
    a, r = divmod(n, p)
    return Decomposition(b, e, a, r)


# ---------------------------------------------------------------------------
# the hierarchy object and its materialization engines
# ---------------------------------------------------------------------------

class _BaseView:
    """Shared read-only query interface over a strictly increasing base list."""

    _bases: list[int]

    @property
    def min_base(self) -> int:
        return self._bases[0]

    @property
    def max_materialized(self) -> int:
        return self._bases[-1]

    @property
    def materialized(self) -> tuple[int, ...]:
        return tuple(self._bases)

    def __contains__(self, n) -> bool:
        i = bisect_left(self._bases, n)
        if i < len(self._bases) and self._bases[i] == n:
            return True
        if n > self._bases[-1]:
            self._ensure_value(n)
            i = bisect_left(self._bases, n)
            return i < len(self._bases) and self._bases[i] == n
        return False

    def base_of(self, n: int) -> int:
        """max{b in B | b <= n}, or min B below it."""
        if n < self._bases[0]:
            return self._bases[0]
        self._ensure_value(n)
        return self._bases[bisect_right(self._bases, n) - 1]

    def s_next(self, n: int) -> ExtNat:
        """Least base strictly above n; INF when provably none."""
        self._ensure_beyond(n)
        i = bisect_right(self._bases, n)
        if i < len(self._bases):
            return self._bases[i]
        return INF

    def pred_base(self, b: int) -> int:
        i = bisect_left(self._bases, b)
        if i == 0 or i >= len(self._bases) or self._bases[i] != b:
            raise ValueError(f"{b} has no predecessor base here")
        return self._bases[i - 1]

    def is_critical(self, n: int) -> bool:
        return n > 0 and n % self.base_of(n) == 0

    def bases_up_to(self, v: int) -> list[int]:
        self._ensure_value(v)
        return self._bases[: bisect_right(self._bases, v)]

    # engine hooks -----------------------------------------------------
    def _ensure_value(self, v: int) -> None:
        raise NotImplementedError

    def _ensure_beyond(self, v: int) -> None:
        raise NotImplementedError


class _PrefixView(_BaseView):
    """A growing base list viewed as a complete hierarchy (S beyond max = INF).

    Used internally by the successor constructions: at every stage the prefix
    built so far is treated as the whole target set, which is sound because
    upgrades only depend on a bounded part of the hierarchies.
    """

    def __init__(self, bases: list[int]):
        self._bases = bases

    def _ensure_value(self, v: int) -> None:
        pass

    def _ensure_beyond(self, v: int) -> None:
        pass


class BaseHierarchy(_BaseView):
    """A base hierarchy materialized lazily from its spec."""

    def __init__(
        self,
        spec: HierarchySpec,
        digit_cap: int = DEFAULT_DIGIT_CAP,
        validate: bool = True,
    ):
        self.spec = spec
        self.digit_cap = digit_cap
        self.validate = validate
        self.provenance: dict[int, int] = {}
        self._engine = _make_engine(self, spec)
        self._bases = self._engine.initial()
        if not self._bases:
            raise HierarchyError("a base hierarchy is nonempty")
        self._validate_new(0)

    def divisibility_violations(self) -> list[tuple[int, int]]:
        bs = self._bases
        return [
            (bs[i - 1], bs[i]) for i in range(1, len(bs)) if bs[i] % bs[i - 1] != 0
        ]

    # -- validation ----------------------------------------------------
    def _validate_new(self, start: int) -> None:
        if not self.validate:
            return
        bs = self._bases
        if bs[0] < 2:
            raise HierarchyError(f"bases must be >= 2, got {bs[0]}")
        for i in range(max(start, 1), len(bs)):
            if bs[i] <= bs[i - 1]:
                raise HierarchyError(f"bases must increase: {bs[i - 1]} !< {bs[i]}")
            if bs[i] % bs[i - 1] != 0:
                raise HierarchyError(
                    f"divisibility broken: {bs[i - 1]} does not divide {bs[i]}"
                )

    @property
    def exhausted(self) -> bool:
        return self._engine.exhausted

    def _extend(self) -> None:
        before = len(self._bases)
        self._engine.extend()
        if len(self._bases) > before:
            self._validate_new(before)

    def _ensure_value(self, v: int) -> None:
        while self._bases[-1] < v and not self._engine.exhausted:
            self._extend()

    def _ensure_beyond(self, v: int) -> None:
        while self._bases[-1] <= v and not self._engine.exhausted:
            self._extend()

    def ensure_stage(self, n: int) -> None:
        """Drive a staged construction through stage n (no-op otherwise)."""
        self._engine.run_to_stage(n)

    def snapshot(self, open_ended: bool | None = None) -> "BaseHierarchy":
        """An explicit copy of the materialized prefix."""
        if open_ended is None:
            open_ended = not self.exhausted
        return BaseHierarchy(
            ExplicitSpec(tuple(self._bases), open_ended), self.digit_cap
        )

    def __repr__(self) -> str:
        tail = "" if self.exhausted else ", ..."
        shown = ", ".join(str(b) for b in self._bases[:8])
        if len(self._bases) > 8:
            shown += ", ..."
        return f"BaseHierarchy({{{shown}{tail}}})"


# -- engines ----------------------------------------------------------------

class _Engine:
    exhausted = False

    def initial(self) -> list[int]:
        raise NotImplementedError

    def extend(self) -> None:
        raise NotImplementedError

    def run_to_stage(self, n: int) -> None:
        pass


class _ExplicitEngine(_Engine):
    def __init__(self, hier: BaseHierarchy, spec: ExplicitSpec):
        self.exhausted = not spec.open_ended
        self._spec = spec

    def initial(self) -> list[int]:
        return sorted(self._spec.bases)

    def extend(self) -> None:
        raise UnknownBeyondPrefix(
            "explicit open prefix cannot answer queries beyond its last base"
        )


class _RuleEngine(_Engine):
    """Successor-by-formula hierarchies (constant ratio, power, tower)."""

    def __init__(self, hier: BaseHierarchy, spec):
        self.hier = hier
        self.spec = spec
        if isinstance(spec, RatioSpec) and (spec.k < 2 or spec.min_base < 2):
            raise HierarchyError("ratio rule needs min >= 2 and k >= 2")
        if isinstance(spec, PowerSpec) and (spec.k < 2 or spec.min_base < 2):
            raise HierarchyError("power rule needs min >= 2 and k >= 2")
        if isinstance(spec, TowerSpec) and (spec.n < 2 or spec.min_base < 2):
            raise HierarchyError("tower rule needs min >= 2 and height >= 2")

    def initial(self) -> list[int]:
        return [self.spec.min_base]

    def next_base(self, b: int) -> int:
        cap = self.hier.digit_cap
        if isinstance(self.spec, RatioSpec):
            return check_digits(self.spec.k * b, cap)
        if isinstance(self.spec, PowerSpec):
            return guarded_pow(b, self.spec.k, cap)
        t = b
        for _ in range(self.spec.n - 1):
            t = guarded_pow(b, t, cap)
        return t

    def extend(self) -> None:
        self.hier._bases.append(self.next_base(self.hier._bases[-1]))


class _StagedEngine(_Engine):
    """Common driver for the stage-indexed successor constructions."""

    def __init__(self, hier: BaseHierarchy, source: BaseHierarchy):
        self.hier = hier
        self.source = source
        self.stage = source.min_base  # stages up to min B yield the seed set
        self._session = None

    def initial(self) -> list[int]:
        seed = self.source.min_base + 1
        self.hier.provenance[seed] = 0
        return [seed]

    def session(self):
        if self._session is None:
            from .upgrade import UpgradeSession

            self._session = UpgradeSession(
                self.source,
                _PrefixView(self.hier._bases),
                digit_cap=self.hier.digit_cap,
            )
        return self._session

    def _next_candidate(self) -> int:
        """The next stage that can change the prefix: stages are no-ops unless
        critical in the source, and critical stages are the multiples of the
        governing source base (source bases themselves included)."""
        t = self.stage + 1
        b = self.source.base_of(t)
        return -(-t // b) * b

    def extend(self) -> None:
        before = len(self.hier._bases)
        while len(self.hier._bases) == before:
            self.stage = self._next_candidate()
            self.step(self.stage)

    def run_to_stage(self, n: int) -> None:
        while self.stage < n:
            nxt = self._next_candidate()
            if nxt > n:
                self.stage = n
                return
            self.stage = nxt
            self.step(self.stage)

    def step(self, n: int) -> None:
        raise NotImplementedError


class _OuroborosEngine(_StagedEngine):
    def __init__(self, hier: BaseHierarchy, spec: OuroborosSpec):
        if spec.i < 1:
            raise HierarchyError("ouroboros successor needs i >= 1")
        self.i = spec.i
        super().__init__(hier, BaseHierarchy(spec.base, hier.digit_cap))

    def step(self, n: int) -> None:
        src = self.source
        if not src.is_critical(n):
            return
        sess = self.session()
        bases = self.hier._bases
        c = bases[-1]
        if n in src:
            b = src.base_of(n - 1)
            t = sess.chg_base(b, c, n - 1)
            a = t // c + 1
            new = check_digits(c * a, self.hier.digit_cap)
            if new != c:
                bases.append(new)
                self.hier.provenance[new] = n
        else:
            b = src.base_of(n)
            d = c
            for _ in range(self.i):
                d = sess.chg_base(b, d, n)
                bases.append(d)
                self.hier.provenance[d] = n


class _MinimalisticEngine(_StagedEngine):
    def __init__(self, hier: BaseHierarchy, spec: MinimalisticSpec):
        super().__init__(hier, BaseHierarchy(spec.base, hier.digit_cap))

    def step(self, n: int) -> None:
        src = self.source
        if n not in src:
            return
        sess = self.session()
        bases = self.hier._bases
        m = bases[-1]
        value, _ = sess.upgrade_alt(n - 1)
        if value is INF:
            raise HierarchyError("minimalistic successor hit an infinite upgrade")
        k = (value // m + 1) * m
        check_digits(k, self.hier.digit_cap)
        if k != m:
            bases.append(k)
            self.hier.provenance[k] = n


def _make_engine(hier: BaseHierarchy, spec: HierarchySpec) -> _Engine:
    if isinstance(spec, ExplicitSpec):
        return _ExplicitEngine(hier, spec)
    if isinstance(spec, (RatioSpec, PowerSpec, TowerSpec)):
        return _RuleEngine(hier, spec)
    if isinstance(spec, ClassicSpec):
        return _ExplicitEngine(hier, ExplicitSpec((spec.i + 2,), open_ended=False))
    if isinstance(spec, OuroborosSpec):
        return _OuroborosEngine(hier, spec)
    if isinstance(spec, MinimalisticSpec):
        return _MinimalisticEngine(hier, spec)
    if isinstance(spec, CanonicalSpec):
        inner: HierarchySpec = ExplicitSpec((3,), open_ended=False)
        for j in range(spec.level):
            inner = OuroborosSpec(inner, j + 2)
        return _make_engine(hier, inner)
    raise HierarchyError(f"unknown hierarchy spec {spec!r}")


def make(spec_or_bases, digit_cap: int = DEFAULT_DIGIT_CAP) -> BaseHierarchy:
    """Convenience constructor from a spec, JSON dict, or iterable of bases."""
    if isinstance(spec_or_bases, BaseHierarchy):
        return spec_or_bases
    if isinstance(spec_or_bases, dict):
        return BaseHierarchy(spec_from_json(spec_or_bases), digit_cap)
    if isinstance(
        spec_or_bases,
        (
            ExplicitSpec,
            RatioSpec,
            PowerSpec,
            TowerSpec,
            ClassicSpec,
            OuroborosSpec,
            MinimalisticSpec,
            CanonicalSpec,
        ),
    ):
        return BaseHierarchy(spec_or_bases, digit_cap)
    return BaseHierarchy(ExplicitSpec(tuple(sorted(spec_or_bases))), digit_cap)


# ---------------------------------------------------------------------------
# module-level operations
# ---------------------------------------------------------------------------

def base_of(B: BaseHierarchy, n: int) -> int:
    return B.base_of(n)


def s_next(B: BaseHierarchy, n: int) -> ExtNat:
    return B.s_next(n)


def is_critical(B: BaseHierarchy, n: int) -> bool:
    return B.is_critical(n)


@dataclass(frozen=True)
class HereditaryTerm:
    """Recursive base representation: value, or base^exp * lead + rest."""

    value: int
    base: int | None = None
    exponent: "HereditaryTerm | None" = None
    leading: "HereditaryTerm | None" = None
    remainder: "HereditaryTerm | None" = None
    is_base: bool = False

    def render(self) -> str:
        if self.base is None:
            return str(self.value)
        lead = self.leading.render()
        head = f"{self.base}^{self.exponent.render()}"
        if lead != "1":
            head = f"{head}*{_wrap(lead)}"
        if self.remainder is not None and self.remainder.value != 0:
            return f"{head} + {self.remainder.render()}"
        return head


def _wrap(s: str) -> str:
    return f"({s})" if "+" in s else s


def hereditary(n: int, B: BaseHierarchy) -> HereditaryTerm:
    """B-normal form of n, recursing until every number is a base or small."""
    if n < B.min_base:
        return HereditaryTerm(n)
    if n in B:
        return HereditaryTerm(n, is_base=True)
    d = decompose(n, B.base_of(n))
    return HereditaryTerm(
        n,
        base=d.base,
        exponent=hereditary(d.exponent, B),
        leading=hereditary(d.leading, B),
        remainder=hereditary(d.remainder, B),
    )


def ouroboros_prefix(
    B, i: int, n_max: int, digit_cap: int = DEFAULT_DIGIT_CAP
) -> BaseHierarchy:
    """The ouroboros successor of B, staged through n_max (still extendable).

    The result records in ``provenance`` which stage introduced each base.
    """
    src = make(B, digit_cap)
    out = BaseHierarchy(OuroborosSpec(src.spec, i), digit_cap)
    # reuse the already-materialized source rather than rebuilding it
    out._engine.source = src
    out.ensure_stage(n_max)
    return out


def minimalistic_prefix(
    B, n_max: int, digit_cap: int = DEFAULT_DIGIT_CAP
) -> BaseHierarchy:
    """The minimalistic successor of B, staged through n_max."""
    src = make(B, digit_cap)
    out = BaseHierarchy(MinimalisticSpec(src.spec), digit_cap)
    out._engine.source = src
    out.ensure_stage(n_max)
    return out


def classic(i: int) -> BaseHierarchy:
    """The singleton hierarchy {i+2} of the classical process."""
    return BaseHierarchy(ClassicSpec(i))


def canonical_prefix(
    level: int, n_max: int, digit_cap: int = DEFAULT_DIGIT_CAP
) -> BaseHierarchy:
    """Level ``level`` of the canonical family: start {3}, then ouroboros steps."""
    out = BaseHierarchy(CanonicalSpec(level), digit_cap)
    out.ensure_stage(n_max)
    return out
