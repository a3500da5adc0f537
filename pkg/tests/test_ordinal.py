"""Ordinal term calculus: frozen examples and structural properties."""

from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from goodstein import ordinal as o
from goodstein.errors import BudgetExceeded, ParseError

from conftest import countable_limits, countable_terms, limits, ord_terms, uncountable_limits

TWO = o.from_int(2)
W2 = o.Theta(TWO)  # w^2
OMEGA_SQ = o.omega_mono(TWO, o.ONE)  # O^2
OMEGA_OMEGA = o.omega_mono(o.BIG_OMEGA, o.ONE)  # O^O


# ---------------------------------------------------------------------------
# comparison
# ---------------------------------------------------------------------------

def test_compare_examples():
    assert o.compare(o.Theta(o.ZERO), o.Theta(o.ONE)) == o.LT  # 1 < w
    assert o.compare(o.Theta(o.BIG_OMEGA), o.Theta(OMEGA_OMEGA)) == o.LT
    assert (
        o.compare(OMEGA_OMEGA, o.add(o.omega_mono(o.ONE, o.OMEGA), o.ONE)) == o.GT
    )


def test_compare_epsilon_chain():
    # w < w^w < eps0 < th(O^O) and all below Omega
    chain = [o.OMEGA, o.omega_tower(2, 1), o.EPSILON0, o.Theta(OMEGA_OMEGA), o.BIG_OMEGA]
    for a, b in zip(chain, chain[1:]):
        assert o.compare(a, b) == o.LT


@given(ord_terms(), ord_terms())
def test_compare_antisymmetric(a, b):
    assert o.compare(a, b) == -o.compare(b, a)
    assert (o.compare(a, b) == o.EQ) == (a == b)


@given(ord_terms(), ord_terms(), ord_terms())
def test_compare_transitive(a, b, c):
    if o.compare(a, b) != o.GT and o.compare(b, c) != o.GT:
        assert o.compare(a, c) != o.GT


# ---------------------------------------------------------------------------
# mco
# ---------------------------------------------------------------------------

def test_mco_examples():
    assert o.mco(o.ZERO) == o.ZERO
    assert o.mco(OMEGA_OMEGA) == o.ONE
    assert o.mco(o.omega_mono(o.ONE, o.OMEGA)) == o.OMEGA


def test_mco_countable_tail_is_single_coefficient():
    # O*2 + w + 1 has maximal coefficient w + 1, not w
    x = o.add(o.omega_mono(o.ONE, TWO), o.add(o.OMEGA, o.ONE))
    assert o.mco(x) == o.add(o.OMEGA, o.ONE)


@given(ord_terms())
def test_mco_below_collapse(x):
    assert o.compare(o.mco(x), o.Theta(x)) == o.LT


@given(ord_terms(), countable_terms(), countable_terms())
def test_theta_monotone_in_countable_part(a, b1, b2):
    base = o.uncountable_head(a)
    if b1 == b2:
        return
    lo, hi = (b1, b2) if o.compare(b1, b2) == o.LT else (b2, b1)
    assert o.compare(o.Theta(o.add(base, lo)), o.Theta(o.add(base, hi))) == o.LT


# ---------------------------------------------------------------------------
# additive structure
# ---------------------------------------------------------------------------

def test_add_examples():
    assert o.add(o.ONE, o.OMEGA) == o.OMEGA
    assert o.add(o.OMEGA, o.ONE) == o.Sum((o.OMEGA, o.ONE))
    assert o.nat_mul(o.OMEGA, 2) == o.Sum((o.OMEGA, o.OMEGA))


def test_nat_mul_rejects_infinite_count():
    from goodstein.hierarchy import INF

    with pytest.raises(ValueError):
        o.nat_mul(o.OMEGA, INF)


def test_add_merges_equal_exponents():
    a = o.omega_mono(TWO, o.OMEGA)
    b = o.omega_mono(TWO, o.ONE)
    assert o.add(a, b) == o.omega_mono(TWO, o.add(o.OMEGA, o.ONE))


@given(ord_terms(), ord_terms())
def test_add_monotone_and_absorbing(a, b):
    s = o.add(a, b)
    assert o.compare(s, b) != o.LT
    if b != o.ZERO:
        assert o.compare(s, a) == o.GT or o.is_countable(s) or True


@given(ord_terms(), ord_terms())
def test_left_subtract_roundtrip(a, b):
    x = o.add(a, b)
    z = o.left_subtract(a, x)
    assert o.add(a, z) == x


# ---------------------------------------------------------------------------
# omega powers, monomials, towers
# ---------------------------------------------------------------------------

def test_omega_pow_examples():
    assert o.omega_pow(TWO) == W2
    assert o.omega_pow(o.EPSILON0) == o.EPSILON0
    assert o.omega_pow(o.add(o.EPSILON0, o.ONE)) == o.Theta(o.EPSILON0)


def test_omega_pow_small_exhaustive():
    # below w^w no epsilon number exists, so w^a is literally th(a);
    # cross-check strict monotonicity pairwise
    alphas = []
    for c2, c1, c0 in itertools.product(range(3), repeat=3):
        a = o.add(
            o.nat_mul(W2, c2), o.add(o.nat_mul(o.OMEGA, c1), o.from_int(c0))
        )
        alphas.append(a)
    alphas = list(dict.fromkeys(alphas))
    for a in alphas:
        assert o.omega_pow(a) == (o.ONE if a == o.ZERO else o.Theta(a))
    for a, b in itertools.combinations(alphas, 2):
        assert o.compare(o.omega_pow(a), o.omega_pow(b)) == o.compare(a, b)


def test_omega_pow_uncountable_split():
    # w^(O*a + beta) = O^a * w^beta
    assert o.omega_pow(o.BIG_OMEGA) == o.BIG_OMEGA  # w^O = O
    x = o.add(o.omega_mono(o.ONE, TWO), TWO)  # O*2 + 2
    assert o.omega_pow(x) == o.omega_mono(TWO, W2)  # O^2 * w^2


def test_omega_mono_and_towers():
    assert o.omega_n(0) == o.ONE
    assert o.omega_n(1) == o.BIG_OMEGA
    assert o.omega_n(2) == OMEGA_OMEGA
    assert o.omega_tower(2, 1) == o.Theta(o.OMEGA)  # w^w
    assert o.omega_mono(o.ZERO, TWO) == TWO
    with pytest.raises(ValueError):
        o.omega_mono(o.ONE, o.BIG_OMEGA)


# ---------------------------------------------------------------------------
# cofinality and fundamental sequences
# ---------------------------------------------------------------------------

def test_cofinality_examples():
    assert o.cofinality(o.from_int(5)) == o.ONE
    assert o.cofinality(o.OMEGA) == o.OMEGA
    assert o.cofinality(OMEGA_OMEGA) == o.BIG_OMEGA


def test_fs_examples():
    th = o.Theta(TWO)
    assert o.fs(o.BIG_OMEGA, th) == th
    assert o.fs(OMEGA_OMEGA, o.OMEGA) == o.omega_mono(o.OMEGA, o.ONE)
    assert o.fs(o.omega_mono(o.ONE, TWO), o.from_int(5)) == o.add(
        o.BIG_OMEGA, o.from_int(5)
    )


@given(limits(), countable_terms(), countable_terms())
def test_fs_monotone_in_index(z, t1, t2):
    if t1 == t2:
        return
    lo, hi = (t1, t2) if o.compare(t1, t2) == o.LT else (t2, t1)
    assert o.compare(o.fs(z, lo), o.fs(z, hi)) == o.LT


@given(ord_terms(), countable_terms())
def test_fs_mco_bound(z, t):
    bound = o.ord_max(o.mco(z), t)
    assert o.compare(o.mco(o.fs(z, t)), bound) != o.GT


@given(uncountable_limits(), countable_terms())
def test_fs_uncountable_dichotomy(z, t):
    r = o.fs(z, t)
    assert r == t or not o.is_countable(r)


# ---------------------------------------------------------------------------
# Fix / th* / hat decomposition
# ---------------------------------------------------------------------------

def test_fix_and_star_examples():
    assert o.theta_star(o.ONE) == o.ONE  # th(0)
    assert not o.is_fix(o.BIG_OMEGA)
    assert o.theta_star(o.BIG_OMEGA) == o.ZERO
    assert o.zeta_check(o.BIG_OMEGA) == o.BIG_OMEGA
    assert o.is_fix(o.EPSILON0)  # epsilon numbers are the countable fixpoints
    assert o.theta_star(o.EPSILON0) == o.EPSILON0
    assert o.zeta_check(o.EPSILON0) == o.ZERO
    assert o.zeta_check(o.add(o.EPSILON0, o.ONE)) == o.ZERO  # successor: star > 0


def test_zeta_check_keeps_uncountable_part():
    x = o.add(OMEGA_OMEGA, o.add(TWO, o.ONE))  # O^O + 3: successor
    assert o.zeta_check(x) == OMEGA_OMEGA


# ---------------------------------------------------------------------------
# square fundamental sequences and F
# ---------------------------------------------------------------------------

def test_sq_fs_examples():
    for i in range(7):
        assert o.sq_fs(o.OMEGA, i) == o.from_int(i)
        assert o.sq_fs(W2, i) == o.nat_mul(o.OMEGA, i)
    assert [o.sq_fs(o.EPSILON0, i) for i in range(4)] == [
        o.ZERO,
        o.ONE,
        o.OMEGA,
        o.omega_tower(2, 1),
    ]
    assert o.sq_fs(o.TOP, 2) == o.Theta(OMEGA_OMEGA)
    assert o.sq_fs(o.from_int(5), 3) == o.from_int(4)  # finite: k[[i]] = k-1


@given(countable_limits(), st.integers(0, 5))
def test_sq_fs_increasing_and_bounded(x, i):
    a, b = o.sq_fs(x, i), o.sq_fs(x, i + 1)
    assert o.compare(a, b) == o.LT
    assert o.compare(b, x) == o.LT


@given(countable_limits(), st.integers(1, 6))
def test_sq_fs_infinite_dichotomy(x, i):
    # the dichotomy needs a positive index: x[[0]] can land on 1
    r = o.sq_fs(x, i)
    assert r == o.from_int(i) or o.compare(r, o.OMEGA) != o.LT


def test_iter_sq_and_big_f():
    assert o.big_f(o.ZERO, 7) == 0
    for n in range(7):
        assert o.big_f(o.OMEGA, n) == n
    assert o.big_f(W2, 1) == 2
    assert o.iter_sq(o.EPSILON0, 1) == o.ONE  # eps0[[1]]
    assert o.iter_sq(o.EPSILON0, 2) == o.ZERO  # then 1[[2]]
    assert o.iter_sq(o.TOP, 1) == o.EPSILON0
    with pytest.raises(BudgetExceeded):
        o.big_f(o.TOP, 2, budget=500)


@given(countable_terms(), st.integers(0, 3))
@settings(max_examples=30)
def test_sq_iteration_strictly_decreasing(x, n):
    cur = o.sq_fs(x, n)
    for step in range(1, 40):
        if cur == o.ZERO:
            break
        nxt = o.sq_fs(cur, step)
        assert o.compare(nxt, cur) == o.LT
        cur = nxt


# ---------------------------------------------------------------------------
# parsing and rendering
# ---------------------------------------------------------------------------

def test_parse_examples():
    assert o.parse("th(0)") == o.ONE
    assert o.parse("O^th(1)*2 + th(0)") == o.add(
        o.omega_mono(o.OMEGA, TWO), o.ONE
    )
    assert o.render(o.omega_pow(TWO)) == "th(2)"
    assert o.parse("w") == o.OMEGA
    assert o.parse("eps0") == o.EPSILON0
    assert o.parse("O^O^0*1*1") == o.BIG_OMEGA  # nested monomial exponent
    assert o.parse(" th( 1 ) +  2 ") == o.add(o.OMEGA, TWO)


def test_parse_ext_top():
    assert o.parse_ext("BH") is o.TOP
    with pytest.raises(ParseError):
        o.parse("BH")


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as exc:
        o.parse("th(1) + ")
    assert exc.value.pos == 8
    with pytest.raises(ParseError):
        o.parse("O^1*O^1*1")  # uncountable coefficient
    with pytest.raises(ParseError):
        o.parse("th(1))")


@given(ord_terms())
def test_render_parse_roundtrip(x):
    assert o.parse(o.render(x)) == x


def test_render_canonical_forms():
    assert o.render(o.ZERO) == "0"
    assert o.render(o.from_int(7)) == "7"
    assert o.render(o.add(o.OMEGA, TWO)) == "th(1) + 2"
    assert o.render(o.BIG_OMEGA) == "O^1*1"
    assert o.render(o.omega_mono(o.BIG_OMEGA, TWO)) == "O^(O^1*1)*2"
    assert o.render_ext(o.TOP) == "BH"
