"""Level-index machinery over the 2^(n(M+1)) outcome sequences.

Conventions, fixed once and used everywhere:

* A level index ell ranges over [0, 2^(n(M+1))).  Its bits are numbered
  1..n(M+1) from the most significant end, and chunk i (1 <= i <= n) is
  the i-th group of M+1 bits, so chunk 1 sits at the most significant
  position.  Bit position zeta lies in chunk i = ceil(zeta/(M+1)) at
  within-chunk offset p = zeta - (i-1)(M+1).
* decode maps ell to the outcome ranks (s_1, ..., s_n) of its chunks;
  increasing ell is exactly lexicographic order on decoded sequences.
* iweight(ell) is the value class of the decoded sum (the weight-side
  class); istep(ell) is the unique t with SMC(t) <= ell < SMC(t+1) (the
  step-side class).  is_n / is_star are the corresponding class values;
  is_star over ell = 0..m^n-1 is the sorted rearrangement of is_n.
* alpha(t, xi)  = |{ell in [0, xi] : istep(ell)  = t}|   (closed form),
  beta(t, xi)   = |{ell in [0, xi] : iweight(ell) = t}|.
  Both count over the inclusive range {0, ..., xi}.
* IA_{n,t} = {ell : istep(ell) = t} is the contiguous block
  [SMC(t), SMC(t+1)); IB_{n,t} = {ell : iweight(ell) = t}; enum_a and
  enum_b return their s-th smallest elements (s is 1-based).

beta has two implementations.  beta_bruteforce scans all of [0, xi].
beta_fast runs the prefix walk: the levels below xi split by their
longest common prefix with xi; at every 1-bit zeta of xi, the levels
that share bits 1..zeta-1, have bit zeta = 0, and are free afterwards
form a block whose class-t count is a sum of multinomial coefficients
over the compositions left after removing the determined chunk prefix.
The class is known only through the tau1 oracle: each call makes one
bulk tau1 scan over K_n (|K_n| counted queries) and then only counts,
so the query total is polynomial in n for fixed M.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .errors import DomainError
from .exactnum import ExactScalar
from .multinomial import ValueTable, _coef
from .outcomes import OutcomeModel


def _check_level(table: ValueTable, ell: int, name: str = "level index"):
    if not isinstance(ell, int) or not 0 <= ell < table.num_indices:
        raise DomainError(
            f"{name} {ell!r} out of range [0, {table.num_indices})"
        )


def decode_weight_index(model: OutcomeModel, n: int, ell: int) -> Tuple[int, ...]:
    """Outcome ranks (s_1, ..., s_n) of the n chunks of ell; chunk 1 first."""
    mp1 = model.M + 1
    if not isinstance(ell, int) or not 0 <= ell < model.m**n:
        raise DomainError(f"level index {ell!r} out of range [0, {model.m ** n})")
    mask = model.m - 1
    lut = model._index_of_chunk
    return tuple(lut[(ell >> ((n - i) * mp1)) & mask] for i in range(1, n + 1))


def encode_weight_index(model: OutcomeModel, svec: Sequence[int]) -> int:
    """Inverse of decode: pack outcome ranks back into a level index."""
    mp1 = model.M + 1
    ell = 0
    for s in svec:
        ell = (ell << mp1) | model.chunk_of_index(s)
    return ell


def frequency_vector(model: OutcomeModel, n: int, ell: int) -> Tuple[int, ...]:
    freq = [0] * model.m
    for s in decode_weight_index(model, n, ell):
        freq[s - 1] += 1
    return tuple(freq)


def iweight(table: ValueTable, ell: int) -> int:
    """Value class of the decoded sum at ell (weight side)."""
    _check_level(table, ell)
    return table.class_of(frequency_vector(table.model, table.n, ell))


def istep(table: ValueTable, ell: int) -> int:
    """The unique t with SMC(t) <= ell < SMC(t+1) (step side)."""
    _check_level(table, ell)
    return bisect_right(table.smc, ell) - 1


def is_n(table: ValueTable, ell: int) -> ExactScalar:
    """Value of the decoded sum at ell."""
    return table.values[iweight(table, ell)]


def is_star(table: ValueTable, ell: int) -> ExactScalar:
    """ell-th smallest sum value with multiplicity: the sorted rearrangement."""
    return table.values[istep(table, ell)]


def tau2(
    model: OutcomeModel, n: int, s: int, ell: int, b: int, stats=None
) -> int:
    """How many chunks i in (b, n] of ell decode to outcome rank s."""
    if not 0 <= b <= n:
        raise DomainError(f"chunk bound {b} out of range [0, {n}]")
    model._check_rank(s)
    if stats is not None:
        stats.tau2_queries += 1
    svec = decode_weight_index(model, n, ell)
    return sum(1 for i in range(b, n) if svec[i] == s)


def alpha(table: ValueTable, t: int, xi: int) -> int:
    """|IA_{n,t} intersect {0..xi}|: clipped overlap with [SMC(t), SMC(t+1))."""
    table._check_class(t)
    _check_level(table, xi, "cutoff xi")
    return max(0, min(xi + 1, table.smc[t + 1]) - table.smc[t])


def beta_bruteforce(table: ValueTable, t: int, xi: int) -> int:
    """|IB_{n,t} intersect {0..xi}| by scanning every level index."""
    table._check_class(t)
    _check_level(table, xi, "cutoff xi")
    return sum(1 for ell in range(xi + 1) if iweight(table, ell) == t)


@dataclass
class BetaWalk:
    """Per-position breakdown of one fast beta evaluation."""

    t: int
    xi: int
    total: int
    self_term: int
    steps: List[Tuple[int, int]]  # (zeta, contribution) at each 1-bit of xi


def beta_fast(table: ValueTable, t: int, xi: int) -> int:
    """beta via the prefix walk; polynomially many tau1 queries."""
    return _beta_walk(table, t, xi, trace=False).total


def beta_fast_trace(table: ValueTable, t: int, xi: int) -> BetaWalk:
    return _beta_walk(table, t, xi, trace=True)


def _beta_walk(table: ValueTable, t: int, xi: int, trace: bool) -> BetaWalk:
    table._check_class(t)
    _check_level(table, xi, "cutoff xi")
    model = table.model
    n = table.n
    mp1 = model.M + 1
    m = model.m
    mask = m - 1
    stats = table.stats
    self_term = 1 if iweight(table, xi) == t else 0
    members = table.tau1_members(t)  # one bulk tau1 scan
    lut = model._index_of_chunk
    freq = [0] * m
    steps: List[Tuple[int, int]] = []
    total = 0
    for i in range(1, n + 1):
        cx = (xi >> ((n - i) * mp1)) & mask
        if cx:
            # compositions still reachable once chunks 1..i-1 are pinned
            remaining = []
            for k in members:
                km = tuple(a - b for a, b in zip(k, freq))
                if min(km) >= 0:
                    remaining.append(km)
            for p in range(1, mp1 + 1):
                if not (cx >> (mp1 - p)) & 1:
                    continue
                zeta = (i - 1) * mp1 + p
                keep = mp1 - p + 1  # zero out bit p and everything below
                base = (cx >> keep) << keep
                contrib = 0
                for sigma in range(1 << (mp1 - p)):
                    s1 = lut[base | sigma] - 1
                    for km in remaining:
                        if km[s1] >= 1:
                            kk = km[:s1] + (km[s1] - 1,) + km[s1 + 1 :]
                            contrib += _coef(kk)
                            stats.bigint_ops += 1
                if trace:
                    steps.append((zeta, contrib))
                total += contrib
        freq[lut[cx] - 1] += 1
    return BetaWalk(t, xi, total + self_term, self_term, steps)


def enum_a(table: ValueTable, t: int, s: int) -> int:
    """s-th smallest element of IA_{n,t}: SMC(t) + s - 1."""
    table._check_class(t)
    _check_s(table, t, s)
    return table.smc[t] + s - 1


def enum_b(table: ValueTable, t: int, s: int) -> int:
    """s-th smallest element of IB_{n,t}, by binary search on monotone beta."""
    table._check_class(t)
    _check_s(table, t, s)
    lo, hi = 0, table.num_indices - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if beta_fast(table, t, mid) >= s:
            hi = mid
        else:
            lo = mid + 1
    if iweight(table, lo) != t:
        raise DomainError(
            f"enum_b postcondition failed: iweight({lo}) != {t}"
        )
    return lo


def _check_s(table: ValueTable, t: int, s: int):
    if not isinstance(s, int) or not 1 <= s <= table.gammas[t]:
        raise DomainError(
            f"rank {s!r} out of range [1, {table.gammas[t]}] for class {t}"
        )


def ria(table: ValueTable, t: int, ell: int) -> bool:
    """ell in IA_{n,t}?"""
    table._check_class(t)
    _check_level(table, ell)
    return table.smc[t] <= ell < table.smc[t + 1]


def rib(table: ValueTable, t: int, ell: int) -> bool:
    """ell in IB_{n,t}?"""
    table._check_class(t)
    _check_level(table, ell)
    return iweight(table, ell) == t


# -- exhaustive per-table maps (cached; table-side, no oracle counting) ------


def weight_classes(table: ValueTable) -> List[int]:
    """iweight of every level index, materialized once per table."""
    cached = table._cache.get("weight_classes")
    if cached is not None:
        return cached
    model = table.model
    n = table.n
    m = model.m
    class_index = table._class_index
    lut = model._index_of_chunk
    out = [0] * table.num_indices
    freq = [0] * m

    def rec(depth: int, base: int):
        if depth == n:
            out[base] = class_index[tuple(freq)]
            return
        nxt = base * m
        for c in range(m):
            s1 = lut[c] - 1
            freq[s1] += 1
            rec(depth + 1, nxt + c)
            freq[s1] -= 1

    rec(0, 0)
    table._cache["weight_classes"] = out
    return out


def step_classes(table: ValueTable) -> List[int]:
    """istep of every level index: class t repeated gamma_t times."""
    cached = table._cache.get("step_classes")
    if cached is not None:
        return cached
    out = []
    for t, g in enumerate(table.gammas):
        out.extend([t] * g)
    table._cache["step_classes"] = out
    return out


def decoded_vectors(table: ValueTable) -> List[Tuple[int, ...]]:
    """decode of every level index, materialized once per table."""
    cached = table._cache.get("decoded_vectors")
    if cached is not None:
        return cached
    model = table.model
    n = table.n
    m = model.m
    lut = model._index_of_chunk
    out: List[Optional[Tuple[int, ...]]] = [None] * table.num_indices
    path: List[int] = []

    def rec(depth: int, base: int):
        if depth == n:
            out[base] = tuple(path)
            return
        nxt = base * m
        for c in range(m):
            path.append(lut[c])
            rec(depth + 1, nxt + c)
            path.pop()

    rec(0, 0)
    table._cache["decoded_vectors"] = out
    return out
