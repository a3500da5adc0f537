"""Shared hypothesis strategies: random normal-form ordinal terms.

Terms are built exclusively through the canonicalizing constructors, so every
generated value is in normal form by construction.
"""

from __future__ import annotations

import hypothesis.strategies as st
from hypothesis import settings

from goodstein import ordinal as o

settings.register_profile("suite", deadline=None, max_examples=60)
settings.load_profile("suite")


def _as_coeff(x: o.Ord) -> o.Ord:
    return x if (x != o.ZERO and o.is_countable(x)) else o.ONE


def _as_exp(x: o.Ord) -> o.Ord:
    return x if x != o.ZERO else o.ONE


def ord_terms(max_leaves: int = 10) -> st.SearchStrategy[o.Ord]:
    base = st.sampled_from(
        [o.ZERO, o.ONE, o.from_int(2), o.from_int(3), o.OMEGA, o.BIG_OMEGA]
    )

    def extend(children):
        theta = children.map(o.Theta)
        mono = st.tuples(children, children).map(
            lambda t: o.omega_mono(_as_exp(t[0]), _as_coeff(t[1]))
        )
        sums = st.tuples(children, children).map(lambda t: o.add(t[0], t[1]))
        return theta | mono | sums

    return st.recursive(base, extend, max_leaves=max_leaves)


def countable_terms() -> st.SearchStrategy[o.Ord]:
    return ord_terms().map(lambda x: x if o.is_countable(x) else o.mco(x))


def countable_limits() -> st.SearchStrategy[o.Ord]:
    return countable_terms().map(
        lambda x: x if o.is_limit(x) else o.add(x, o.OMEGA)
    )


def limits() -> st.SearchStrategy[o.Ord]:
    return ord_terms().map(lambda x: x if o.is_limit(x) else o.add(x, o.OMEGA))


def uncountable_limits() -> st.SearchStrategy[o.Ord]:
    return ord_terms().map(lambda x: o.add(o.BIG_OMEGA, x)).map(
        lambda x: x if o.is_limit(x) else o.add(x, o.OMEGA)
    )
