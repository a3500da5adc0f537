"""Term calculus for ordinals below the Bachmann-Howard ordinal.

Terms are built from 0, the collapsing function ``th``, ordinal sums, and
monomials ``O^x*y`` over the first uncountable ordinal ``O``.  Countable
additively indecomposable ordinals are always stored as ``th``-terms;
omega-powers are a computed view, never a constructor.  That choice makes
fixpoint membership and ``th``-argument extraction plain pattern inspection.

Canonical form:

* a ``Sum`` has at least two parts, none zero, ordered non-increasingly;
* monomial parts carry strictly decreasing exponents and precede all
  ``th``-parts (equal-exponent monomials are merged by coefficient addition);
* the finite ordinal ``k`` is ``k`` copies of ``th(0)``.

Values are immutable; every operation is pure and thread-safe.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Union

from .errors import BudgetExceeded, ParseError

LT, EQ, GT = -1, 0, 1

# Finite ordinals are stored as repeated th(0) parts; reject absurd requests.
FINITE_PART_CAP = 1 << 20


class Ord:
    """Base class of all ordinal terms."""

    __slots__ = ()


@dataclass(frozen=True, slots=True)
class _Zero(Ord):
    pass


@dataclass(frozen=True, slots=True)
class Theta(Ord):
    """th(arg): the collapse of ``arg`` into the countable ordinals."""

    arg: Ord


@dataclass(frozen=True, slots=True)
class OmegaMono(Ord):
    """O^exp * coeff with a nonzero exponent and countable nonzero coefficient."""

    exp: Ord
    coeff: Ord


@dataclass(frozen=True, slots=True)
class Sum(Ord):
    parts: tuple[Ord, ...]


class _Top:
    """The collapse of the whole notation system: sup th(O_n).

    Accepted only by ``sq_fs``, ``iter_sq`` and ``big_f``; it is not an Ord.
    """

    __slots__ = ()

    def __repr__(self) -> str:
        return "TOP"


TOP = _Top()
ExtOrd = Union[Ord, _Top]

ZERO = _Zero()
ONE = Theta(ZERO)
OMEGA = Theta(ONE)
BIG_OMEGA = OmegaMono(ONE, ONE)
EPSILON0 = Theta(BIG_OMEGA)
GAMMA0 = Theta(OmegaMono(Sum((ONE, ONE)), ONE))  # th(O^2*1)


def parts(x: Ord) -> tuple[Ord, ...]:
    if isinstance(x, Sum):
        return x.parts
    if isinstance(x, _Zero):
        return ()
    return (x,)


def from_parts(ps: tuple[Ord, ...]) -> Ord:
    if not ps:
        return ZERO
    if len(ps) == 1:
        return ps[0]
    return Sum(ps)


def from_int(k: int) -> Ord:
    if k < 0:
        raise ValueError("ordinals are non-negative")
    if k > FINITE_PART_CAP:
        raise ValueError(f"finite ordinal {k} exceeds the representation cap")
    if k == 0:
        return ZERO
    return from_parts((ONE,) * k)


def is_finite(x: Ord) -> bool:
    return all(p == ONE for p in parts(x))


def to_int(x: Ord) -> int:
    if not is_finite(x):
        raise ValueError(f"not a finite ordinal: {render(x)}")
    return len(parts(x))


def is_countable(x: Ord) -> bool:
    ps = parts(x)
    return not ps or not isinstance(ps[0], OmegaMono)


def is_successor(x: Ord) -> bool:
    ps = parts(x)
    return bool(ps) and ps[-1] == ONE


def is_limit(x: Ord) -> bool:
    return x != ZERO and not is_successor(x)


def pred(x: Ord) -> Ord:
    """Predecessor of a successor ordinal."""
    if not is_successor(x):
        raise ValueError(f"not a successor: {render(x)}")
    return from_parts(parts(x)[:-1])


# ---------------------------------------------------------------------------
# comparison and maximal coefficients
# ---------------------------------------------------------------------------

def compare(a: Ord, b: Ord) -> int:
    """Total order on normal forms: -1 (LT), 0 (EQ) or 1 (GT)."""
    if a == b:
        return EQ
    pa, pb = parts(a), parts(b)
    for x, y in zip(pa, pb):
        c = _compare_part(x, y)
        if c:
            return c
    return (len(pa) > len(pb)) - (len(pa) < len(pb))


def _compare_part(x: Ord, y: Ord) -> int:
    if x == y:
        return EQ
    xt, yt = isinstance(x, Theta), isinstance(y, Theta)
    if xt and yt:
        c = compare(x.arg, y.arg)
        if c == EQ:
            return EQ  # th is injective
        if c == LT:
            # th(u) < th(v) for u < v  iff  mco(u) < th(v)
            return LT if compare(mco(x.arg), y) == LT else GT
        return GT if compare(mco(y.arg), x) == LT else LT
    if xt:
        return LT  # countable below every O-monomial
    if yt:
        return GT
    c = compare(x.exp, y.exp)
    if c:
        return c
    return compare(x.coeff, y.coeff)


def ord_max(a: Ord, b: Ord) -> Ord:
    return a if compare(a, b) != LT else b


def mco(x: Ord) -> Ord:
    """Maximal coefficient appearing hereditarily in the normal form.

    Countable ordinals are their own maximal coefficient (they sit in
    coefficient position of O^0).
    """
    if is_countable(x):
        return x
    best = ZERO
    ps = parts(x)
    for i, p in enumerate(ps):
        if isinstance(p, OmegaMono):
            best = ord_max(best, ord_max(p.coeff, mco(p.exp)))
        else:
            # the countable tail enters as a single coefficient
            best = ord_max(best, from_parts(ps[i:]))
            break
    return best


# ---------------------------------------------------------------------------
# additive structure
# ---------------------------------------------------------------------------

def add(a: Ord, b: Ord) -> Ord:
    """Ordinal sum in normal form (left parts absorbed by a larger leader)."""
    if b == ZERO:
        return a
    if a == ZERO:
        return b
    pa, pb = parts(a), parts(b)
    q = pb[0]
    k = len(pa)
    while k > 0 and _compare_part(pa[k - 1], q) == LT:
        k -= 1
    kept = pa[:k]
    if (
        kept
        and isinstance(kept[-1], OmegaMono)
        and isinstance(q, OmegaMono)
        and kept[-1].exp == q.exp
    ):
        merged = OmegaMono(q.exp, add(kept[-1].coeff, q.coeff))
        return from_parts(kept[:-1] + (merged,) + pb[1:])
    return from_parts(kept + pb)


def nat_mul(a: Ord, k: int) -> Ord:
    """k-fold ordinal sum of ``a`` (finite k only)."""
    if not isinstance(k, int):
        raise ValueError(f"nat_mul needs a finite repetition count, got {k!r}")
    if k < 0:
        raise ValueError("negative repetition count")
    out = ZERO
    for _ in range(k):
        out = add(out, a)
    return out


def left_subtract(a: Ord, x: Ord) -> Ord:
    """The unique z with a + z = x, for a <= x."""
    pa, px = parts(a), parts(x)
    i = 0
    while i < len(pa) and i < len(px) and pa[i] == px[i]:
        i += 1
    if i == len(pa):
        return from_parts(px[i:])
    if i == len(px):
        raise ValueError("left_subtract: minuend smaller than subtrahend")
    p, q = pa[i], px[i]
    if (
        isinstance(p, OmegaMono)
        and isinstance(q, OmegaMono)
        and p.exp == q.exp
        and compare(p.coeff, q.coeff) == LT
    ):
        rest = (OmegaMono(q.exp, left_subtract(p.coeff, q.coeff)),) + px[i + 1:]
        return from_parts(rest)
    if _compare_part(p, q) != LT:
        raise ValueError("left_subtract: minuend smaller than subtrahend")
    return from_parts(px[i:])


def countable_tail(x: Ord) -> Ord:
    """The countable remainder of the O-normal form (beta in O*a + beta)."""
    ps = parts(x)
    for i, p in enumerate(ps):
        if not isinstance(p, OmegaMono):
            return from_parts(ps[i:])
    return ZERO


def uncountable_head(x: Ord) -> Ord:
    ps = parts(x)
    for i, p in enumerate(ps):
        if not isinstance(p, OmegaMono):
            return from_parts(ps[:i])
    return x


def is_omega_multiple(x: Ord) -> bool:
    """Whether x is a (left) multiple of O."""
    return all(isinstance(p, OmegaMono) for p in parts(x))


def is_omega_sq_multiple(x: Ord) -> bool:
    two = from_int(2)
    return all(
        isinstance(p, OmegaMono) and compare(p.exp, two) != LT for p in parts(x)
    )


def omega_quotient(x: Ord) -> Ord:
    """The unique a with O*a = x; x must be a multiple of O."""
    out: list[Ord] = []
    for p in parts(x):
        if not isinstance(p, OmegaMono):
            raise ValueError(f"not a multiple of O: {render(x)}")
        if is_finite(p.exp):
            e = from_int(to_int(p.exp) - 1)
        else:
            e = p.exp  # 1 + e = e for infinite exponents
        out.append(omega_mono(e, p.coeff))
    return from_parts(tuple(out))


# ---------------------------------------------------------------------------
# monomials, towers, omega-powers
# ---------------------------------------------------------------------------

def omega_mono(exponent: Ord, coeff: Ord) -> Ord:
    """Normal-form O^exponent * coeff."""
    if not is_countable(coeff):
        raise ValueError(f"monomial coefficient must be countable: {render(coeff)}")
    if coeff == ZERO:
        return ZERO
    if exponent == ZERO:
        return coeff
    return OmegaMono(exponent, coeff)


def omega_n(k: int) -> Ord:
    """The tower O_k: O_0 = 1 and O_{k+1} = O^(O_k)."""
    out: Ord = ONE
    for _ in range(k):
        out = omega_mono(out, ONE)
    return out


def omega_pow(x: Ord) -> Ord:
    """The omega-power w^x as a normal-form term.

    For countable x this is th(x), th(x-1) or x itself depending on whether
    x sits finitely above an epsilon number.  Uncountable exponents go
    through w^(O*a+beta) = O^a * w^beta.
    """
    if not is_countable(x):
        a = omega_quotient(uncountable_head(x))
        return omega_mono(a, omega_pow(countable_tail(x)))
    if x == ZERO:
        return ONE
    ps = parts(x)
    n = 0
    while n < len(ps) and ps[len(ps) - 1 - n] == ONE:
        n += 1
    core = from_parts(ps[: len(ps) - n])
    if isinstance(core, Theta) and not is_countable(core.arg):
        # core is an epsilon number
        if n == 0:
            return x
        return Theta(pred(x))
    return Theta(x)


def omega_tower(k: int, top: int) -> Ord:
    """Tower of k omegas with w^top at the very top (k = 0 gives top)."""
    out = from_int(top)
    for _ in range(k):
        out = omega_pow(out)
    return out


# ---------------------------------------------------------------------------
# cofinality and the theta-indexed fundamental sequences x[theta]
# ---------------------------------------------------------------------------

def cofinality(x: Ord) -> Ord:
    """Formal cofinality: 0, 1, a countable limit, or O."""
    if x == ZERO:
        return ZERO
    if is_successor(x):
        return ONE
    if is_countable(x):
        return x  # countable limit: O^0 * beta with beta a limit
    ps = parts(x)
    if len(ps) > 1:
        return cofinality(from_parts(ps[1:]))
    e, c = x.exp, x.coeff
    if is_limit(c):
        return c
    c0 = pred(c)
    del c0  # only the successor shape of c matters below
    if is_limit(e):
        return cofinality(e)
    return BIG_OMEGA


def fs(x: Ord, theta: Ord) -> Ord:
    """The fundamental-sequence system x[theta] with countable index theta."""
    if not is_countable(theta):
        raise ValueError("fs index must be countable")
    if x == ZERO or x == ONE:
        return ZERO
    if is_countable(x):
        if is_successor(x):
            return pred(x)
        return theta  # countable limit
    ps = parts(x)
    if len(ps) > 1:
        return add(ps[0], fs(from_parts(ps[1:]), theta))
    e, c = x.exp, x.coeff
    if is_limit(c):
        return omega_mono(e, theta)
    c0 = pred(c)
    if c0 != ZERO:
        return add(omega_mono(e, c0), fs(OmegaMono(e, ONE), theta))
    # x = O^e
    if is_limit(e):
        return omega_mono(fs(e, theta), ONE)
    return omega_mono(pred(e), theta)


# ---------------------------------------------------------------------------
# fixpoints, th*, and the hat decomposition
# ---------------------------------------------------------------------------

def is_fix(x: Ord) -> bool:
    """Membership in Fix: mco(x[1]) < mco(x) = cofinality(x) = th(g), g > x."""
    m = mco(x)
    if not isinstance(m, Theta):
        return False
    if compare(m.arg, x) != GT:
        return False
    if cofinality(x) != m:
        return False
    return compare(mco(fs(x, ONE)), m) == LT


def _in_jump(x: Ord) -> bool:
    return x == ZERO or is_successor(x) or is_fix(x)


def theta_star(x: Ord) -> Ord:
    """th(z) for x = z+1; the cofinality for x in Fix; 0 otherwise."""
    if is_successor(x):
        return Theta(pred(x))
    if is_fix(x):
        return cofinality(x)
    return ZERO


def zeta_check(x: Ord) -> Ord:
    """For x = O*a + beta (beta countable): O*a when th*(x) > 0, else x."""
    if theta_star(x) != ZERO:
        return uncountable_head(x)
    return x


# ---------------------------------------------------------------------------
# the square fundamental sequences x[[iota]] and the functions F
# ---------------------------------------------------------------------------

def sq_fs(x: ExtOrd, iota: int) -> Ord:
    """Square fundamental sequences on countable terms; TOP[[n]] = th(O_n)."""
    if iota < 0:
        raise ValueError("square fundamental sequences need iota >= 0")
    if x is TOP:
        return Theta(omega_n(iota))
    if not isinstance(x, Ord):
        raise TypeError(f"sq_fs expects an ordinal term or TOP, got {x!r}")
    if not is_countable(x):
        raise ValueError("square fundamental sequences are defined on countables")
    if x == ZERO:
        return ZERO
    ps = parts(x)
    if len(ps) > 1:
        return add(ps[0], sq_fs(from_parts(ps[1:]), iota))
    z = x.arg  # x = th(z)
    if is_countable(z) and _in_jump(z):
        return nat_mul(theta_star(z), iota)
    zc = zeta_check(z)
    tau = cofinality(zc)
    if is_countable(tau):  # 0 < tau < O
        return Theta(add(fs(zc, sq_fs(tau, iota)), theta_star(z)))
    # tau = O
    cur = theta_star(z)
    for _ in range(iota):
        cur = Theta(fs(zc, cur))
    return cur


def iter_sq(alpha: ExtOrd, i: int) -> ExtOrd:
    """Iterated squares: {a}(0) = a and {a}(i+1) = {a}(i)[[i+1]]."""
    cur = alpha
    for j in range(1, i + 1):
        cur = sq_fs(cur, j)
    return cur


def big_f(alpha: ExtOrd, n: int, budget: int = 10**6) -> int:
    """F_alpha(n): steps for the iterated squares of alpha[[n]] to hit 0.

    Raises BudgetExceeded when the (expected) blow-up outruns the budget.
    """
    cur = sq_fs(alpha, n)
    steps = 0
    while cur != ZERO:
        if steps >= budget:
            raise BudgetExceeded(
                f"F_({render_ext(alpha)})({n}) not reached within {budget} steps"
            )
        steps += 1
        cur = sq_fs(cur, steps)
    return steps


# ---------------------------------------------------------------------------
# rendering and parsing
# ---------------------------------------------------------------------------

def _render_atom(x: Ord) -> str:
    s = render(x)
    if (isinstance(x, OmegaMono) or isinstance(x, Sum)) and not is_finite(x):
        return f"({s})"
    return s


def _render_part(p: Ord) -> str:
    if isinstance(p, Theta):
        return f"th({render(p.arg)})"
    return f"O^{_render_atom(p.exp)}*{_render_atom(p.coeff)}"


def render(x: Ord) -> str:
    """Canonical ASCII form; parse(render(x)) == x on normal forms."""
    if x is TOP:
        return "BH"
    if x == ZERO:
        return "0"
    ps = parts(x)
    n = 0
    while n < len(ps) and ps[len(ps) - 1 - n] == ONE:
        n += 1
    bits = [_render_part(p) for p in ps[: len(ps) - n]]
    if n:
        bits.append(str(n))
    return " + ".join(bits)


def render_ext(x: ExtOrd) -> str:
    return "BH" if x is TOP else render(x)


_TOKEN = re.compile(r"\s*(\d+|th|eps0|BH|w|O|\^|\*|\+|\(|\))")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.tokens: list[tuple[str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m:
                if text[pos:].strip():
                    raise ParseError(f"unexpected character {text[pos:].strip()[0]!r}", pos)
                break
            self.tokens.append((m.group(1), m.start(1)))
            pos = m.end()
        self.idx = 0

    def peek(self) -> str | None:
        return self.tokens[self.idx][0] if self.idx < len(self.tokens) else None

    def where(self) -> int:
        if self.idx < len(self.tokens):
            return self.tokens[self.idx][1]
        return len(self.text)

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if tok is None:
            raise ParseError(f"unexpected end of input (wanted {expected})", self.where())
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r}, found {tok!r}", self.where())
        self.idx += 1
        return tok

    def parse_expr(self) -> Ord:
        out = self.parse_mono()
        while self.peek() == "+":
            self.take("+")
            out = add(out, self.parse_mono())
        return out

    def parse_mono(self) -> Ord:
        if self.peek() == "O":
            at = self.where()
            self.take("O")
            self.take("^")
            exponent = self.parse_mono()
            self.take("*")
            coeff = self.parse_atom()
            try:
                return omega_mono(exponent, coeff)
            except ValueError as exc:
                raise ParseError(str(exc), at) from exc
        return self.parse_atom()

    def parse_atom(self) -> Ord:
        tok = self.peek()
        at = self.where()
        if tok is None:
            raise ParseError("unexpected end of input", at)
        if tok.isdigit():
            self.take()
            try:
                return from_int(int(tok))
            except ValueError as exc:
                raise ParseError(str(exc), at) from exc
        if tok == "th":
            self.take()
            self.take("(")
            inner = self.parse_expr()
            self.take(")")
            return Theta(inner)
        if tok == "w":
            self.take()
            return OMEGA
        if tok == "eps0":
            self.take()
            return EPSILON0
        if tok == "(":
            self.take()
            inner = self.parse_expr()
            self.take(")")
            return inner
        raise ParseError(f"unexpected token {tok!r}", at)


def parse(text: str) -> Ord:
    """Parse the ASCII grammar: 0, decimals, th(x), x + y, O^x*y, w, eps0."""
    p = _Parser(text)
    if p.peek() is None:
        raise ParseError("empty expression", 0)
    if p.peek() == "BH":
        raise ParseError("BH is only legal where extended terms are accepted", p.where())
    out = p.parse_expr()
    if p.peek() is not None:
        raise ParseError(f"trailing input {p.peek()!r}", p.where())
    return out


def parse_ext(text: str) -> ExtOrd:
    """Like parse, but accepts the token BH for the top collapse."""
    if text.strip() == "BH":
        return TOP
    return parse(text)
