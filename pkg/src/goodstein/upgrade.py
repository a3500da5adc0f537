"""The base-change operator, the upgrade with witness search, and the
good-successor checker.

An ``UpgradeSession`` binds a source hierarchy B to a target hierarchy C with
min B <= min C and memoizes everything it computes.  Two routes are provided:

* ``upgrade``: the recursive definition itself (needs all upgrades below n,
  so it costs O(n); kept as the reference oracle);
* ``upgrade_alt``: the witness criterion "least c >= up(b) with
  chg(b,c,n) < S_C(c)", which only recurses through bases and coefficients.

Both agree everywhere; the differential tests exercise that.  Sessions are
single-owner mutable state.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    InfiniteUpgrade,
    NumericBlowup,
    SearchBudgetExceeded,
    UnknownBeyondPrefix,
)
from .hierarchy import (
    DEFAULT_DIGIT_CAP,
    INF,
    BaseHierarchy,
    ExtNat,
    check_digits,
    guarded_pow,
    make,
)

DEFAULT_SEARCH_CAP = 10**4

UpgradeResult = tuple  # (value: ExtNat, witness: ExtNat | None)


def _digits_desc(m: int, b: int) -> list[tuple[int, int]]:
    """Nonzero base-b digits of m as (exponent, digit), most significant first."""
    out = []
    e = 0
    while m > 0:
        m, d = divmod(m, b)
        if d:
            out.append((e, d))
        e += 1
    out.reverse()
    return out


class UpgradeSession:
    """Upgrade computations from a source hierarchy into a target hierarchy."""

    def __init__(
        self,
        source,
        target,
        digit_cap: int = DEFAULT_DIGIT_CAP,
        search_cap: int = DEFAULT_SEARCH_CAP,
        cross_check: bool = False,
    ):
        self.source = source if hasattr(source, "base_of") else make(source)
        self.target = target if hasattr(target, "base_of") else make(target)
        if self.source.min_base > self.target.min_base:
            raise ValueError("upgrade needs min B <= min C")
        self.digit_cap = digit_cap
        self.search_cap = search_cap
        self.cross_check = cross_check
        self._alt: dict[int, UpgradeResult] = {}
        self._alt_chg: dict[tuple[int, int, int], int] = {}
        self._ref: list[UpgradeResult] = []
        self._ref_chg: dict[tuple[int, int, int], int] = {}

    # -- base change ----------------------------------------------------

    def _chg(self, b: int, c: int, m: int, memo: dict, up) -> int:
        """chg(b,c,m): rewrite m from base b to base c, upgrading coefficients."""
        if m < b:
            v = up(m)
            if v is INF:
                raise InfiniteUpgrade(f"upgrade of coefficient {m} is infinite")
            return v
        key = (b, c, m)
        hit = memo.get(key)
        if hit is not None:
            return hit
        digits = _digits_desc(m, b)
        terms: list[tuple[int, int]] = []
        for e, a in digits:
            ee = self._chg(b, c, e, memo, up) if e >= b else up(e)
            if ee is INF:
                raise InfiniteUpgrade(f"upgrade of exponent {e} is infinite")
            av = up(a)
            if av is INF:
                raise InfiniteUpgrade(f"upgrade of coefficient {a} is infinite")
            terms.append((ee, av))
        if all(terms[i][0] > terms[i + 1][0] for i in range(len(terms) - 1)):
            # rewritten exponents still descend: Horner with gap powers
            acc = terms[0][1]
            prev = terms[0][0]
            for ee, av in terms[1:]:
                acc = check_digits(
                    acc * guarded_pow(c, prev - ee, self.digit_cap) + av,
                    self.digit_cap,
                )
                prev = ee
            val = check_digits(
                acc * guarded_pow(c, prev, self.digit_cap), self.digit_cap
            )
        else:
            # non-monotone rewrite (possible when c < up(b)): plain summation
            val = 0
            for ee, av in terms:
                val = check_digits(
                    val + guarded_pow(c, ee, self.digit_cap) * av, self.digit_cap
                )
        memo[key] = val
        return val

    def chg_base(self, b: int, c: int, m: int) -> int:
        """Public base change; coefficients resolved through ``upgrade_alt``."""
        return self._chg(b, c, m, self._alt_chg, lambda x: self.upgrade_alt(x)[0])

    # -- production route -------------------------------------------------

    def upgrade_alt(self, n: int) -> UpgradeResult:
        """(value, witness) by the least-witness criterion."""
        hit = self._alt.get(n)
        if hit is not None:
            return hit
        src, tgt = self.source, self.target
        if n < src.min_base:
            res = (n, None)
        elif n in src:
            prev, _ = self.upgrade_alt(n - 1)
            if prev is INF:
                res = (INF, INF)
            else:
                w = tgt.s_next(prev)
                res = (INF, INF) if w is INF else (w, w)
        else:
            res = self._scan(n, alt=True)
        self._alt[n] = res
        if self.cross_check:
            ref = self.upgrade(n)
            if ref != res:
                raise AssertionError(
                    f"upgrade routes disagree at {n}: reference {ref}, witness {res}"
                )
        return res

    def _scan(self, n: int, alt: bool) -> UpgradeResult:
        src, tgt = self.source, self.target
        b = src.base_of(n)
        if alt:
            ub, _ = self.upgrade_alt(b)
            if ub is INF:
                return (INF, INF)
            start = ub - 1
            memo, up = self._alt_chg, lambda x: self.upgrade_alt(x)[0]
            floor = None
        else:
            floor, _ = self._ref[n - 1]
            if floor is INF:
                return (INF, INF)
            start = tgt.min_base - 1
            memo, up = self._ref_chg, lambda x: self._ref[x][0]
        c = tgt.s_next(start)
        seen = 0
        while c is not INF:
            seen += 1
            if seen > self.search_cap:
                raise SearchBudgetExceeded(
                    f"no witness for upgrade of {n} within {self.search_cap} bases"
                )
            try:
                val = self._chg(b, c, n, memo, up)
            except InfiniteUpgrade:
                return (INF, INF)
            nxt = tgt.s_next(c)
            if val < nxt and (floor is None or floor < val):
                return (val, c)
            c = nxt
        return (INF, INF)

    # -- reference route ---------------------------------------------------

    def upgrade(self, n: int) -> UpgradeResult:
        """(value, witness) computed from the recursive definition.

        Fills a table for every m <= n; meant for modest n (tests, oracles).
        """
        src = self.source
        while len(self._ref) <= n:
            m = len(self._ref)
            if m < src.min_base:
                self._ref.append((m, None))
            elif m in src:
                # chg(b,c,m) = c here, so the displayed condition collapses to
                # the least base above the previous upgrade
                prev, _ = self._ref[m - 1]
                if prev is INF:
                    self._ref.append((INF, INF))
                else:
                    w = self.target.s_next(prev)
                    self._ref.append((INF, INF) if w is INF else (w, w))
            else:
                self._ref.append(self._scan(m, alt=False))
        return self._ref[n]


# ---------------------------------------------------------------------------
# good-successor verification
# ---------------------------------------------------------------------------

@dataclass
class GoodSuccessorReport:
    """Outcome of the bounded good-successor check (a pass certifies only the
    inspected range)."""

    source: tuple[int, ...]
    target: tuple[int, ...]
    bound: int
    violations: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def good_successor_check(
    B,
    C,
    n_bound: int,
    digit_cap: int = DEFAULT_DIGIT_CAP,
    search_cap: int = DEFAULT_SEARCH_CAP,
) -> GoodSuccessorReport:
    """Check the three good-successor conditions for n, b <= n_bound."""
    src = B if isinstance(B, BaseHierarchy) else _raw(B, digit_cap)
    tgt = C if isinstance(C, BaseHierarchy) else _raw(C, digit_cap)
    report = GoodSuccessorReport(
        source=src.materialized, target=tgt.materialized, bound=n_bound
    )
    for lo, hi in src.divisibility_violations():
        report.violations.append(f"source hierarchy invalid: {lo} does not divide {hi}")
    for lo, hi in tgt.divisibility_violations():
        report.violations.append(f"target hierarchy invalid: {lo} does not divide {hi}")
    if src.min_base > tgt.min_base:
        report.violations.append(
            f"min condition fails: min B = {src.min_base} > min C = {tgt.min_base}"
        )
        return report
    sess = UpgradeSession(src, tgt, digit_cap=digit_cap, search_cap=search_cap)
    finite_up_to = -1
    for n in range(n_bound + 1):
        try:
            value, _ = sess.upgrade_alt(n)
        except UnknownBeyondPrefix:
            report.violations.append(f"upgrade of {n} undecidable on this prefix")
            return report
        if value is INF:
            report.violations.append(f"witness failure: upgrade of {n} is infinite")
            return report
        finite_up_to = n
    for b in src.bases_up_to(min(n_bound, finite_up_to)):
        if b <= src.min_base:
            continue
        m, _ = sess.upgrade_alt(b - 1)
        cb = tgt.base_of(m)
        nxt = tgt.s_next(m)
        mult = (m // cb + 1) * cb
        if mult < nxt:
            report.violations.append(
                f"multiple {mult} of {cb} lies strictly between "
                f"up({b - 1}) = {m} and S_C = {nxt}"
            )
    return report


def _raw(bases, digit_cap: int) -> BaseHierarchy:
    from .hierarchy import ExplicitSpec

    return BaseHierarchy(
        ExplicitSpec(tuple(sorted(bases))), digit_cap, validate=False
    )
