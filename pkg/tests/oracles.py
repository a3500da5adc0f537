"""Independent brute-force oracles used by the test suite.

Everything here is deliberately self-contained: plain integers, no imports
from the package under test.  The implementations follow the recursive
definitions directly and make no attempt at efficiency, so keep inputs small.
"""

from __future__ import annotations

INF = float("inf")


def base_of(bases: list[int], n: int) -> int:
    lo = min(bases)
    if n < lo:
        return lo
    return max(b for b in bases if b <= n)


def s_next(bases: list[int], n: int):
    above = [b for b in bases if b > n]
    return min(above) if above else INF


def decompose(n: int, b: int) -> tuple[int, int, int]:
    e = 0
    while b ** (e + 1) <= n:
        e += 1
    a, r = divmod(n, b ** e)
    return e, a, r


def brute_chg(B: list[int], C: list[int], up: list[int], b: int, c: int, m: int) -> int:
    if m < b:
        return up[m]
    e, a, r = decompose(m, b)
    return c ** brute_chg(B, C, up, b, c, e) * up[a] + brute_chg(B, C, up, b, c, r)


def brute_upgrade_table(B: list[int], C: list[int], up_to: int) -> list:
    """Upgrade values computed straight from the recursive definition.

    C is treated as a complete hierarchy (nothing beyond max(C)).  Entries
    are INF when no witness base exists.
    """
    lo = min(B)
    up: list = []
    for n in range(up_to + 1):
        if n < lo:
            up.append(n)
            continue
        b = base_of(B, n)
        found = None
        for c in sorted(C):
            try:
                val = brute_chg(B, C, up, b, c, n)
            except TypeError:  # INF leaked into arithmetic: upgrade is infinite
                continue
            if up[n - 1] < val < s_next(C, c):
                found = val
                break
        up.append(found if found is not None else INF)
    return up


def oracle_ouroboros(B: list[int], i: int, n_max: int):
    """Stage-by-stage transcription of the ouroboros successor construction.

    Returns (bases, provenance) where provenance maps each base to the stage
    n at which it was added (min(B)+1 is tagged with stage 0).
    """
    lo = min(B)
    C = [lo + 1]
    prov = {lo + 1: 0}
    for n in range(lo + 1, n_max + 1):
        up = brute_upgrade_table(B, C, n - 1)
        bn = base_of(B, n)
        if bn % 1:  # pragma: no cover - bases are ints
            raise AssertionError
        if n % bn != 0:
            continue  # not critical
        if n in B:
            b = base_of(B, n - 1)
            c = C[-1]
            t = brute_chg(B, C, up, b, c, n - 1)
            a = t // c + 1
            new = c * a
            if new not in C:
                C.append(new)
                prov[new] = n
        else:
            b = base_of(B, n)
            d = C[-1]
            for _ in range(i):
                d = brute_chg(B, C, up, b, d, n)
                C.append(d)
                prov[d] = n
    return C, prov


def oracle_minimalistic(B: list[int], n_max: int):
    """Transcription of the minimalistic successor construction."""
    lo = min(B)
    C = [lo + 1]
    prov = {lo + 1: 0}
    for n in range(lo + 1, n_max + 1):
        if n not in B:
            continue
        up = brute_upgrade_table(B, C, n - 1)
        m = max(C)
        k = ((up[n - 1]) // m + 1) * m
        if k not in C:
            C.append(k)
            prov[k] = n
    return C, prov


def classic_change(n: int, b: int, c: int) -> int:
    """Hereditary base change b -> c (digits < b kept verbatim)."""
    if n < b:
        return n
    total = 0
    e = 0
    while n > 0:
        n, digit = divmod(n, b)
        if digit:
            total += digit * c ** classic_change(e, b, c)
        e += 1
    return total
