"""Phase-transition classifier: from the growth of a base hierarchy to the
size band of its ordinal ceiling and the matching proof-theoretic strength.

Rule specs are classified exactly (the band conditions are decidable from
the rule); explicit open prefixes get a *conditional* answer recording which
conditions held on the inspected prefix.  Finite closed hierarchies always
sit at the top of the scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

from . import ordinal as o_
from .assignment import AssignSession
from .errors import GoodsteinError
from .hierarchy import (
    INF,
    BaseHierarchy,
    ClassicSpec,
    ExplicitSpec,
    HierarchySpec,
    PowerSpec,
    RatioSpec,
    TowerSpec,
    make,
)
from .ordinal import EPSILON0, GAMMA0, TOP, ExtOrd, Ord


class Inconclusive(GoodsteinError):
    """The prefix cannot even conditionally determine the regime."""


# regime tags
EXACTLY_OMEGA2 = "ExactlyOmega2"
UP_TO_OMEGA_OMEGA = "UpToOmegaOmega"
BELOW_OMEGA_OMEGA_OMEGA = "BelowOmegaOmegaOmega"
BAND = "Band"
BELOW_EPSILON0 = "BelowEpsilon0"
EPSILON0_TO_GAMMA0 = "Epsilon0ToGamma0"
BELOW_THETA_OMEGA_N = "BelowThetaOmegaN"
BACHMANN_HOWARD = "BachmannHowardScale"


@dataclass(frozen=True)
class TheoryLabel:
    name: str  # RCA0 | RCA0+Sigma0_2nIND | ACA0 | ATR0 | KPminus_omega_PinIND | KP
    parameter: Optional[int] = None

    def render(self) -> str:
        if self.name == "RCA0+Sigma0_2nIND":
            if self.parameter is None:
                return "RCA0+Sigma0_2n-IND (every n)"
            return f"RCA0+Sigma0_{2 * self.parameter}-IND"
        if self.name == "KPminus_omega_PinIND":
            return f"KP^-w+Pi_{self.parameter}-IND"
        return self.name


@dataclass
class Regime:
    tag: str
    n: Optional[int] = None
    infinitely_many_3b: Optional[bool] = None
    bound_lo: Ord = o_.ZERO
    bound_hi: ExtOrd = TOP
    conditional: bool = False
    evidence: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.bound_hi is not TOP and o_.compare(self.bound_lo, self.bound_hi) == o_.GT:
            raise ValueError("regime bounds out of order")


_W2 = o_.omega_tower(1, 2)  # w^2
_WW = o_.omega_tower(2, 1)  # w^w
_W3 = o_.omega_tower(3, 1)  # w^(w^w)


def _mk_regime(tag: str, **kw) -> Regime:
    if tag == EXACTLY_OMEGA2:
        return Regime(tag, bound_lo=_W2, bound_hi=_W2, **kw)
    if tag == UP_TO_OMEGA_OMEGA:
        inf = kw.pop("infinitely_many_3b")
        lo = _WW if inf else _W2
        return Regime(tag, infinitely_many_3b=inf, bound_lo=lo, bound_hi=_WW, **kw)
    if tag == BELOW_OMEGA_OMEGA_OMEGA:
        return Regime(tag, bound_lo=_WW, bound_hi=_W3, **kw)
    if tag == BAND:
        n = kw.pop("n")
        return Regime(
            tag,
            n=n,
            bound_lo=o_.omega_tower(2 * n + 1, 1),
            bound_hi=o_.omega_tower(2 * n + 3, 1),
            **kw,
        )
    if tag == BELOW_EPSILON0:
        return Regime(tag, bound_lo=_W3, bound_hi=EPSILON0, **kw)
    if tag == EPSILON0_TO_GAMMA0:
        return Regime(tag, bound_lo=EPSILON0, bound_hi=GAMMA0, **kw)
    if tag == BELOW_THETA_OMEGA_N:
        n = kw.pop("n")
        return Regime(
            tag, n=n, bound_lo=GAMMA0, bound_hi=o_.Theta(o_.omega_n(n)), **kw
        )
    if tag == BACHMANN_HOWARD:
        return Regime(tag, bound_lo=EPSILON0, bound_hi=TOP, **kw)
    raise ValueError(f"unknown regime tag {tag}")


# ---------------------------------------------------------------------------
# greedy chains
# ---------------------------------------------------------------------------

def greedy_chain(B, bound: int) -> list[int]:
    """The greedy chain d_0 < d_1 < ... within the prefix of bases <= bound:
    d_0 = min B, each next d is the least base with S(d) > d * (product so far).
    """
    hier = make(B)
    bases = hier.bases_up_to(bound)
    chain = [bases[0]]
    product = bases[0]
    for d in bases[1:]:
        try:
            s = hier.s_next(d)
        except GoodsteinError:
            break
        if s is INF:
            break  # cannot certify a gap above the last base
        if s > d * product:
            chain.append(d)
            product *= d
    return chain


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

def classify(spec, probe_bound: int = 200) -> Regime:
    """Map a hierarchy spec to its growth regime.

    Rule specs are decided exactly; explicit open prefixes and the staged
    successor kinds are classified from the materialized prefix and flagged
    conditional.  Finite closed sets are top-scale (their last base has no
    successor, so no bounding condition can hold).
    """
    hier = make(spec)
    spec = hier.spec
    if isinstance(spec, RatioSpec):
        return _classify_ratio(spec.min_base, spec.k)
    if isinstance(spec, PowerSpec):
        return _classify_power(spec.min_base, spec.k)
    if isinstance(spec, TowerSpec):
        return _mk_regime(
            BELOW_THETA_OMEGA_N, n=spec.n, evidence={"rule": f"S(b) = b_{spec.n}"}
        )
    if isinstance(spec, (ClassicSpec, ExplicitSpec)) and hier.exhausted:
        return _mk_regime(
            BACHMANN_HOWARD,
            evidence={"reason": "finite hierarchy: S of the last base is INF"},
        )
    return _classify_prefix(hier, probe_bound)


def _classify_ratio(m: int, k: int) -> Regime:
    ev = {"rule": f"S(b) = {k}b", "min": m}
    if k == 2:
        return _mk_regime(EXACTLY_OMEGA2, evidence=ev)
    if k == 3 and m >= 3:
        return _mk_regime(UP_TO_OMEGA_OMEGA, infinitely_many_3b=True, evidence=ev)
    if k <= m:
        return _mk_regime(BELOW_OMEGA_OMEGA_OMEGA, evidence=ev)
    # some S(b) > b^2 (at b = m), so the ceiling reaches eps0
    if m > 2 and k <= m * m:
        ev["gamma0_constant"] = k
        return _mk_regime(EPSILON0_TO_GAMMA0, evidence=ev)
    n = 2
    while k > _tower_quotient_bound(m, n):
        n += 1
    ev["tower_level"] = n
    return _mk_regime(BELOW_THETA_OMEGA_N, n=n, evidence=ev)


def _tower_quotient_bound(b: int, n: int) -> float:
    # b_n / b, i.e. the largest constant ratio bounded by a height-n tower
    t = b
    for _ in range(n - 1):
        if t > 64:
            return math.inf
        t = b**t
    return t / b


def _classify_power(m: int, k: int) -> Regime:
    ev = {"rule": f"S(b) = b^{k}", "min": m}
    if k == 2:
        # unbounded ratios force an infinite greedy chain: the ceiling is
        # exactly eps0, and S(b) <= min(b^3, b^2*2) keeps it below Gamma0
        ev["greedy_chain"] = "infinite"
        return _mk_regime(EPSILON0_TO_GAMMA0, evidence=ev)
    n = 2
    while not _power_fits_tower(m, k, n):
        n += 1
    ev["tower_level"] = n
    return _mk_regime(BELOW_THETA_OMEGA_N, n=n, evidence=ev)


def _power_fits_tower(m: int, k: int, n: int) -> bool:
    # b^k <= b_n for every base b >= m; worst case is b = m
    t = m
    for _ in range(n - 1):
        if t >= k * 4:
            return True
        t = m**t
    return m**k <= t


def _classify_prefix(hier: BaseHierarchy, probe_bound: int) -> Regime:
    hier.ensure_stage(probe_bound)
    bases = hier.bases_up_to(probe_bound)
    pairs = []
    for b in bases:
        try:
            s = hier.s_next(b)
        except GoodsteinError:
            break  # open prefix: the last base has no observable successor
        if s is INF:
            return _mk_regime(
                BACHMANN_HOWARD,
                evidence={"reason": f"S({b}) = INF on a finite hierarchy"},
            )
        pairs.append((b, s))
    if not pairs:
        raise Inconclusive(
            "prefix shows no base/successor pair; nothing is observable"
        )
    ev = {"pairs": [[b, s] for b, s in pairs]}
    m = bases[0]
    if all(s == 2 * b for b, s in pairs):
        return _mk_regime(EXACTLY_OMEGA2, conditional=True, evidence=ev)
    if all(s <= 3 * b <= b * m for b, s in pairs) and any(s == 3 * b for b, s in pairs):
        raise Inconclusive(
            "prefix is compatible with both finitely and infinitely many "
            "ratio-3 steps; the w^w boundary is undecidable from a prefix"
        )
    if all(s <= b * m for b, s in pairs) and any(s > 3 * b for b, s in pairs):
        return _mk_regime(BELOW_OMEGA_OMEGA_OMEGA, conditional=True, evidence=ev)
    if all(s <= b * b for b, s in pairs):
        chain = greedy_chain(hier, probe_bound)
        ev["chain"] = chain
        n = len(chain) - 1
        if n == 0:
            raise Inconclusive("greedy chain stalls at min B on this prefix")
        return _mk_regime(BAND, n=n, conditional=True, evidence=ev)
    c = max(-(-s // (b * b)) for b, s in pairs)  # ceil(S/b^2)
    if m > 2 and all(s <= b**3 for b, s in pairs):
        ev["gamma0_constant"] = c
        return _mk_regime(EPSILON0_TO_GAMMA0, conditional=True, evidence=ev)
    n = 2
    while True:
        if all(s <= _tower(b, n) for b, s in pairs):
            break
        n += 1
    return _mk_regime(BELOW_THETA_OMEGA_N, n=n, conditional=True, evidence=ev)


def _tower(b: int, n: int):
    t = b
    for _ in range(n - 1):
        if t > 64:
            return math.inf
        t = b**t
    return t


# ---------------------------------------------------------------------------
# theory correspondence
# ---------------------------------------------------------------------------

def theory_for(regime: Regime) -> tuple[Optional[TheoryLabel], Optional[TheoryLabel]]:
    """(provable_in, unprovable_in) for the termination statement."""
    tag = regime.tag
    if tag == EXACTLY_OMEGA2:
        return TheoryLabel("RCA0"), None
    if tag == UP_TO_OMEGA_OMEGA:
        if regime.infinitely_many_3b:
            return TheoryLabel("RCA0+Sigma0_2nIND", 1), TheoryLabel("RCA0")
        return TheoryLabel("RCA0"), None
    if tag == BELOW_OMEGA_OMEGA_OMEGA:
        return TheoryLabel("RCA0+Sigma0_2nIND", 1), TheoryLabel("RCA0")
    if tag == BAND:
        return (
            TheoryLabel("RCA0+Sigma0_2nIND", regime.n + 1),
            TheoryLabel("RCA0+Sigma0_2nIND", regime.n),
        )
    if tag == BELOW_EPSILON0:
        return TheoryLabel("ACA0"), TheoryLabel("RCA0+Sigma0_2nIND", None)
    if tag == EPSILON0_TO_GAMMA0:
        return TheoryLabel("ATR0"), TheoryLabel("ACA0")
    if tag == BELOW_THETA_OMEGA_N:
        unprov = (
            TheoryLabel("ATR0")
            if regime.n <= 2
            else TheoryLabel("KPminus_omega_PinIND", regime.n - 1)
        )
        return TheoryLabel("KPminus_omega_PinIND", regime.n), unprov
    if tag == BACHMANN_HOWARD:
        return None, TheoryLabel("KP")
    raise ValueError(f"unknown regime tag {tag}")


# ---------------------------------------------------------------------------
# empirical landmarks and reporting
# ---------------------------------------------------------------------------

def empirical_floor(B, n_max: int) -> Ord:
    """max over n <= n_max of o_B(n); a lower witness for the ceiling."""
    sess = AssignSession(make(B))
    best = o_.ZERO
    for n in range(n_max + 1):
        v = sess.o(n)
        if o_.compare(v, best) == o_.GT:
            best = v
    return best


_LABELS: list[tuple[Ord, str]] = []


def _label(x: ExtOrd) -> str:
    if x is TOP:
        return "BH"
    if not _LABELS:
        _LABELS.append((EPSILON0, "eps0"))
        _LABELS.append((GAMMA0, "Gamma0"))
        for k in range(1, 12):
            _LABELS.append((o_.omega_tower(k, 1), f"w_{k}"))
        _LABELS.append((_W2, "w^2"))
        for n in range(2, 8):
            _LABELS.append((o_.Theta(o_.omega_n(n)), f"th(O_{n})"))
    for landmark, name in _LABELS:
        if x == landmark:
            return name
    return o_.render(x)


def regime_report(regime: Regime) -> dict:
    provable, unprovable = theory_for(regime)
    out = {
        "regime": regime.tag,
        "lo": _label(regime.bound_lo),
        "hi": _label(regime.bound_hi),
        "lo_term": o_.render(regime.bound_lo),
        "hi_term": o_.render_ext(regime.bound_hi),
        "conditional": regime.conditional,
        "provable": provable.render() if provable else None,
        "unprovable": unprovable.render() if unprovable else None,
        "evidence": regime.evidence,
    }
    if regime.n is not None:
        out["n"] = regime.n
    if regime.infinitely_many_3b is not None:
        out["infinitely_many_3b"] = regime.infinitely_many_3b
    return out
