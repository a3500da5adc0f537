"""Goodstein runner over dynamical hierarchies, with certified-descent traces,
an independent classical oracle, and the majorization harnesses.

A run upgrades the current value into the next hierarchy of the family and
subtracts one, recording per step the value, base, witness, assigned ordinal,
and (optionally) the descent and preservation checks.  Traces serialize to
JSON lines with arbitrary-precision numerics as decimal strings.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import IO, Optional

from . import ordinal as o_
from .assignment import AssignSession
from .errors import HierarchyError, NumericBlowup, UnknownBeyondPrefix
from .hierarchy import (
    DEFAULT_DIGIT_CAP,
    INF,
    BaseHierarchy,
    ClassicSpec,
    ExplicitSpec,
    OuroborosSpec,
    make,
    ouroboros_prefix,
    spec_from_json,
    spec_to_json,
)
from .ordinal import LT, Ord
from .upgrade import UpgradeSession

CHECK_LEVELS = ("none", "descent", "descent+preservation")


class DynamicalFamily:
    """A sequence of base hierarchies, each a good successor of the last.

    Kinds: ``classic`` (B_i = {i+2}), ``canonical`` (start {3}, ouroboros
    steps with increment i+2), and ``iterated`` (an arbitrary start spec with
    ouroboros steps B_{i+1} = (B_i)_{+(i+i0)}).
    """

    def __init__(self, kind: str, base=None, i0: int = 1,
                 digit_cap: int = DEFAULT_DIGIT_CAP):
        if kind not in ("classic", "canonical", "iterated"):
            raise HierarchyError(f"unknown family kind {kind!r}")
        self.kind = kind
        self.i0 = 2 if kind == "canonical" else i0
        self.digit_cap = digit_cap
        if kind == "canonical":
            base = ExplicitSpec((3,))
        if kind == "iterated" and base is None:
            raise HierarchyError("iterated family needs a start hierarchy")
        self._base_spec = base
        self._levels: list[BaseHierarchy] = []

    @classmethod
    def from_json(cls, data, digit_cap: int = DEFAULT_DIGIT_CAP) -> "DynamicalFamily":
        if isinstance(data, str):
            data = json.loads(data)
        kind = data.get("family") or data.get("kind")
        if kind == "classic":
            return cls("classic", digit_cap=digit_cap)
        if kind == "canonical":
            return cls("canonical", digit_cap=digit_cap)
        if kind == "iterated":
            return cls(
                "iterated",
                base=spec_from_json(data["base"]),
                i0=int(data.get("i0", 1)),
                digit_cap=digit_cap,
            )
        raise HierarchyError(f"unknown family kind {kind!r}")

    def to_json(self) -> dict:
        if self.kind == "iterated":
            return {
                "family": "iterated",
                "base": spec_to_json(self._base_spec),
                "i0": self.i0,
            }
        return {"family": self.kind}

    def hierarchy(self, i: int) -> BaseHierarchy:
        if self.kind == "classic":
            while len(self._levels) <= i:
                self._levels.append(
                    BaseHierarchy(ClassicSpec(len(self._levels)), self.digit_cap)
                )
            return self._levels[i]
        while len(self._levels) <= i:
            j = len(self._levels)
            if j == 0:
                self._levels.append(make(self._base_spec, self.digit_cap))
            else:
                prev = self._levels[j - 1]
                nxt = BaseHierarchy(
                    OuroborosSpec(prev.spec, j - 1 + self.i0), self.digit_cap
                )
                nxt._engine.source = prev  # share materialized state
                self._levels.append(nxt)
        return self._levels[i]


@dataclass
class RunConfig:
    family: DynamicalFamily
    start: int
    max_steps: int = 100
    digit_cap: int = DEFAULT_DIGIT_CAP
    check_level: str = "descent+preservation"

    def __post_init__(self):
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")
        if self.check_level not in CHECK_LEVELS:
            raise ValueError(f"check_level must be one of {CHECK_LEVELS}")


@dataclass
class StepRecord:
    index: int
    value: int
    base: int
    witness: Optional[object]  # int, INF, or None (no upgrade performed)
    ordinal: Optional[Ord]
    checks: dict[str, bool] = field(default_factory=dict)

    def to_json(self) -> dict:
        from .hierarchy import dec

        wit = self.witness
        if isinstance(wit, int):
            wit = dec(wit)
        elif wit is not None:
            wit = str(wit)
        dec(self.base)  # lift the int->str guard for json serialization
        return {
            "i": self.index,
            "n": dec(self.value),
            "base": self.base,
            "witness": wit,
            "ord": None if self.ordinal is None else o_.render(self.ordinal),
            "checks": dict(self.checks),
        }


@dataclass
class Trace:
    config: dict
    records: list[StepRecord] = field(default_factory=list)
    status: str = "done"  # done | max_steps | blowup | undecidable
    error: Optional[str] = None

    @property
    def values(self) -> list[int]:
        return [r.value for r in self.records]

    def all_checks_pass(self) -> bool:
        return all(all(r.checks.values()) for r in self.records)

    def write_jsonl(self, fp: IO[str]) -> None:
        for r in self.records:
            fp.write(json.dumps(r.to_json(), sort_keys=False) + "\n")


def run(cfg: RunConfig) -> Trace:
    """Execute the process from cfg.start until 0, max_steps, or a blow-up."""
    fam = cfg.family
    with_ords = cfg.check_level != "none"
    sessions: dict[int, AssignSession] = {}

    def asg(level: int) -> AssignSession:
        if level not in sessions:
            sessions[level] = AssignSession(fam.hierarchy(level))
        return sessions[level]

    trace = Trace(config={"family": fam.to_json(), "start": str(cfg.start),
                          "max_steps": cfg.max_steps, "digit_cap": cfg.digit_cap,
                          "check_level": cfg.check_level})
    n = cfg.start
    i = 0
    while True:
        B = fam.hierarchy(i)
        base = B.base_of(n)
        ordinal = asg(i).o(n) if with_ords else None
        if n == 0:
            trace.records.append(StepRecord(i, n, base, None, ordinal))
            trace.status = "done"
            return trace
        if i >= cfg.max_steps:
            trace.records.append(StepRecord(i, n, base, None, ordinal))
            trace.status = "max_steps"
            return trace
        try:
            C = fam.hierarchy(i + 1)
            sess = UpgradeSession(B, C, digit_cap=cfg.digit_cap)
            value, witness = sess.upgrade_alt(n)
        except NumericBlowup as exc:
            trace.records.append(StepRecord(i, n, base, None, ordinal))
            trace.status = "blowup"
            trace.error = str(exc)
            return trace
        except UnknownBeyondPrefix as exc:
            trace.records.append(StepRecord(i, n, base, None, ordinal))
            trace.status = "undecidable"
            trace.error = str(exc)
            return trace
        if value is INF:
            trace.records.append(StepRecord(i, n, base, INF, ordinal))
            trace.status = "undecidable"
            trace.error = f"upgrade of {n} at step {i} is infinite"
            return trace
        checks: dict[str, bool] = {}
        if with_ords:
            try:
                nxt_ord = asg(i + 1).o(value - 1)
                checks["descent"] = o_.compare(nxt_ord, ordinal) == LT
                if cfg.check_level == "descent+preservation":
                    checks["preserve"] = asg(i + 1).o(value) == ordinal
            except NumericBlowup as exc:
                trace.records.append(StepRecord(i, n, base, witness, ordinal))
                trace.status = "blowup"
                trace.error = str(exc)
                return trace
        trace.records.append(StepRecord(i, n, base, witness, ordinal, checks))
        n = value - 1
        i += 1


# ---------------------------------------------------------------------------
# independent classical oracle (no shared code with the upgrade machinery)
# ---------------------------------------------------------------------------

def _classic_change(n: int, b: int, c: int, bit_limit: int) -> int:
    """Hereditary base change b -> c; digits below b are kept as they are."""
    if n < b:
        return n
    total = 0
    e = 0
    while n > 0:
        n, digit = divmod(n, b)
        if digit:
            exp = _classic_change(e, b, c, bit_limit)
            if exp * math.log2(c) > bit_limit:
                raise NumericBlowup("classical oracle exceeded the digit cap")
            total += digit * c**exp
            if total.bit_length() > bit_limit:
                raise NumericBlowup("classical oracle exceeded the digit cap")
        e += 1
    return total


def classic_oracle(
    m: int, max_steps: int = 200, digit_cap: int = DEFAULT_DIGIT_CAP
) -> list[int]:
    """Value sequence of the classical process for m, bases 2, 3, 4, ...

    Stops at 0, after max_steps steps, or when the digit cap is hit.
    """
    bit_limit = int(digit_cap * math.log2(10)) + 8
    out = [m]
    b = 2
    for _ in range(max_steps):
        cur = out[-1]
        if cur == 0:
            break
        try:
            nxt = _classic_change(cur, b, b + 1, bit_limit)
        except NumericBlowup:
            break
        out.append(nxt - 1)
        b += 1
    return out


# ---------------------------------------------------------------------------
# majorization harnesses
# ---------------------------------------------------------------------------

@dataclass
class MajorizationReport:
    min_base: int
    i: int
    n_max: int
    violations: list[str] = field(default_factory=list)
    checked: int = 0

    @property
    def passed(self) -> bool:
        return not self.violations


def verify_majorization(
    B, i: int, n_max: int, digit_cap: int = DEFAULT_DIGIT_CAP
) -> MajorizationReport:
    """Check o_C(up(n)-1) >= o_B(n)[[i]] for C the (i+1)-ouroboros successor,
    strictly when min B divides n.  Requires 0 < i < min B - 1."""
    src = make(B, digit_cap)
    if not 0 < i < src.min_base - 1:
        raise ValueError(
            f"majorization needs 0 < i < min B - 1 = {src.min_base - 1}, got {i}"
        )
    C = ouroboros_prefix(src, i + 1, n_max, digit_cap)
    sess = UpgradeSession(src, C, digit_cap=digit_cap)
    ab, ac = AssignSession(src), AssignSession(C)
    report = MajorizationReport(min_base=src.min_base, i=i, n_max=n_max)
    for n in range(1, n_max + 1):
        value, _ = sess.upgrade_alt(n)
        lhs = ac.o(value - 1)
        rhs = o_.sq_fs(ab.o(n), i)
        cmp = o_.compare(lhs, rhs)
        strict = n % src.min_base == 0
        if cmp == LT or (strict and cmp == o_.EQ):
            report.violations.append(
                f"n={n}: o_C({value - 1}) = {o_.render(lhs)} "
                f"{'<' if cmp == LT else '='} {o_.render(rhs)}"
                f"{' (strictness required)' if strict else ''}"
            )
        report.checked += 1
    return report


def descent_chain(trace: Trace) -> list[Ord]:
    """The assigned-ordinal chain of a trace (requires a checked run)."""
    out = []
    for r in trace.records:
        if r.ordinal is None:
            raise ValueError("trace was produced without ordinals")
        out.append(r.ordinal)
    return out


def check_funmajor(chain: list[Ord], i0: int = 0) -> bool:
    """Verify the square-sequence majorization pattern on an ordinal chain.

    Hypothesis: chain[j][[i0+j+1]] <= chain[j+1] <= chain[j] for each step;
    conclusion: chain[j] >= the iterated squares of chain[0] started at i0.
    Returns False as soon as either part fails.
    """
    for j in range(len(chain) - 1):
        if o_.compare(chain[j + 1], chain[j]) == o_.GT:
            return False
        if o_.compare(o_.sq_fs(chain[j], i0 + j + 1), chain[j + 1]) == o_.GT:
            return False
    t = chain[0] if chain else None
    for j in range(len(chain)):
        if j > 0:
            t = o_.sq_fs(t, i0 + j)
        if o_.compare(chain[j], t) == LT:
            return False
    return True
