"""Skew braces with a prescribed additive group.

Braces (A,·,∘) with (A,·) = G correspond to regular subgroups of the
holomorph Hol(G) = {x -> g·φ(x)}: the circle translations n_a(x) = a∘x
form one, and conversely a regular N defines a∘b := n_a(b) where n_a is
the unique member sending 0 to a.  The search below exploits that every
member of a regular subgroup is a fixed-point-free permutation with all
cycles of equal length.
"""

from __future__ import annotations

import multiprocessing as mp
import time
from dataclasses import dataclass
from functools import cached_property
from itertools import permutations

import numpy as np

from .braces import SkewBrace, brace_fingerprint, braces_isomorphic, make_brace
from .errors import SearchTimeout, SizeLimit
from .groups import (
    DEFAULT_AUT_BOUND,
    FiniteGroup,
    automorphism_group,
    build_group,
)

DEFAULT_HOLOMORPH_BOUND = 20000
BRUTE_FORCE_BOUND = 5
DEFAULT_NODE_BUDGET = 5_000_000


class Holomorph:
    """Hol(G) = G ⋊ Aut(G) as a permutation group on G's carrier."""

    def __init__(self, base: FiniteGroup, *, aut_bound: int = DEFAULT_AUT_BOUND):
        self.base = base
        self.aut = automorphism_group(base, bound=aut_bound)
        n = base.order
        rows = []
        for g in range(n):
            row_g = base.table[g]
            for a in self.aut.elements:
                rows.append(np.take(row_g, a.perm))
        perms = np.stack(rows).astype(np.int32)
        order_idx = np.lexsort(perms.T[::-1])
        perms = np.ascontiguousarray(perms[order_idx])
        perms.setflags(write=False)
        self.perms = perms
        self.index = {p.tobytes(): i for i, p in enumerate(perms)}
        if len(self.index) != n * self.aut.order:
            raise AssertionError("holomorph action is not faithful")
        self.identity = self.index[
            np.arange(n, dtype=np.int32).tobytes()
        ]
        self.img0 = perms[:, 0].copy()
        self._compose_cache: dict[int, int] = {}

    @property
    def order(self) -> int:
        return self.perms.shape[0]

    def compose(self, i: int, j: int) -> int:
        """Index of perms[i] ∘ perms[j]."""
        key = i * self.order + j
        hit = self._compose_cache.get(key)
        if hit is not None:
            return hit
        out = self.index[np.ascontiguousarray(self.perms[i][self.perms[j]]).tobytes()]
        self._compose_cache[key] = out
        return out

    @cached_property
    def uniform_cycle_length(self) -> np.ndarray:
        """cycle length when all cycles of perms[i] are equal, else 0.

        Members of regular subgroups act freely, so their cycles all have
        length equal to the element order; anything else can be pruned.
        """
        n = self.base.order
        out = np.zeros(self.order, dtype=np.int64)
        for i in range(self.order):
            p = self.perms[i]
            seen = np.zeros(n, dtype=bool)
            length = 0
            ok = True
            for s in range(n):
                if seen[s]:
                    continue
                x, c = s, 0
                while not seen[x]:
                    seen[x] = True
                    x = int(p[x])
                    c += 1
                if length == 0:
                    length = c
                elif c != length:
                    ok = False
                    break
            if ok and n % length == 0:
                out[i] = length
        return out

    @cached_property
    def semiregular_by_point(self) -> list[list[int]]:
        """For each carrier point x, candidate element indices mapping 0 to x."""
        buckets: list[list[int]] = [[] for _ in range(self.base.order)]
        for i in range(self.order):
            if self.uniform_cycle_length[i] > 0:
                buckets[int(self.img0[i])].append(i)
        return buckets


@dataclass(frozen=True)
class RegularSubgroup:
    parent: Holomorph
    elements: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def is_regular(self) -> bool:
        """Size |G| and the orbit map e -> e(0) is a bijection."""
        if self.order != self.parent.base.order:
            return False
        imgs = sorted(int(self.parent.img0[i]) for i in self.elements)
        return imgs == list(range(self.parent.base.order))


def holomorph(
    G: FiniteGroup,
    *,
    aut_bound: int = DEFAULT_AUT_BOUND,
    holomorph_bound: int = DEFAULT_HOLOMORPH_BOUND,
) -> Holomorph:
    if G.order > holomorph_bound:  # |Hol| >= |G|, refuse before the Aut search
        raise SizeLimit("holomorph", G.order, holomorph_bound)
    hol = Holomorph(G, aut_bound=aut_bound)
    if hol.order > holomorph_bound:
        raise SizeLimit("holomorph", hol.order, holomorph_bound)
    return hol


class _RegularSearch:
    """Backtracking over canonical generator chains.

    A node is a closed, fixed-point-free subgroup S; the branch point is
    the least carrier point x uncovered by {s(0)}, and the children add
    one semiregular element h with h(0) = x.  Any regular N containing S
    holds exactly one such h, so every N is reached along exactly one
    chain; no dedup is required (kept as an assertion).
    """

    def __init__(self, hol: Holomorph, node_budget: int, deadline: float | None):
        self.hol = hol
        self.n = hol.base.order
        self.node_budget = node_budget
        self.deadline = deadline
        self.nodes = 0
        self.found: dict[tuple[int, ...], None] = {}

    def _closure(self, closed: frozenset[int], new: int) -> frozenset[int] | None:
        """Close under composition, pruning on non-uniform elements and on
        subgroup orders not dividing |G|."""
        hol = self.hol
        ucl = hol.uniform_cycle_length
        elems = set(closed)
        elems.add(new)
        frontier = [new]
        while frontier:
            nxt = []
            for x in frontier:
                for y in list(elems):
                    for z in (hol.compose(x, y), hol.compose(y, x)):
                        if z not in elems:
                            if ucl[z] == 0:
                                return None
                            elems.add(z)
                            nxt.append(z)
                if len(elems) > self.n:
                    return None
            frontier = nxt
        if self.n % len(elems) != 0:
            return None
        return frozenset(elems)

    def run(self, roots: list[int] | None = None) -> list[tuple[int, ...]]:
        start = frozenset([self.hol.identity])
        if roots is None:
            self._expand(start)
        else:
            for h in roots:
                sub = self._closure(start, h)
                if sub is not None:
                    self._descend(sub)
        return sorted(self.found)

    def first_level_candidates(self) -> list[int]:
        covered = {0}
        x = self._least_uncovered(covered)
        return list(self.hol.semiregular_by_point[x])

    def _least_uncovered(self, covered: set[int]) -> int:
        for x in range(self.n):
            if x not in covered:
                return x
        raise AssertionError("no uncovered point")

    def _expand(self, S: frozenset[int]) -> None:
        covered = {int(self.hol.img0[i]) for i in S}
        x = self._least_uncovered(covered)
        for h in self.hol.semiregular_by_point[x]:
            sub = self._closure(S, h)
            if sub is not None:
                self._descend(sub)

    def _descend(self, sub: frozenset[int]) -> None:
        self.nodes += 1
        if self.nodes > self.node_budget:
            raise SearchTimeout(f"node budget {self.node_budget}")
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise SearchTimeout("wall clock budget")
        if len(sub) == self.n:
            self.found[tuple(sorted(sub))] = None
            return
        self._expand(sub)


_REG_STATE: dict = {}


def _regular_worker(roots: list[int]) -> list[tuple[int, ...]]:
    search = _RegularSearch(
        _REG_STATE["hol"], _REG_STATE["budget"], _REG_STATE["deadline"]
    )
    return search.run(roots)


def regular_subgroups(
    G: FiniteGroup,
    *,
    workers: int = 1,
    node_budget: int = DEFAULT_NODE_BUDGET,
    timeout_ms: int | None = None,
    aut_bound: int = DEFAULT_AUT_BOUND,
    holomorph_bound: int = DEFAULT_HOLOMORPH_BOUND,
    hol: Holomorph | None = None,
) -> list[RegularSubgroup]:
    """All regular subgroups of Hol(G), canonically ordered."""
    if hol is None:
        hol = holomorph(G, aut_bound=aut_bound, holomorph_bound=holomorph_bound)
    deadline = time.monotonic() + timeout_ms / 1000 if timeout_ms else None
    search = _RegularSearch(hol, node_budget, deadline)
    if workers <= 1:
        tuples = search.run()
    else:
        roots = search.first_level_candidates()
        chunks = [roots[i::workers] for i in range(workers)]
        chunks = [c for c in chunks if c]
        _REG_STATE.update(hol=hol, budget=node_budget, deadline=deadline)
        ctx = mp.get_context("fork")
        with ctx.Pool(len(chunks)) as pool:
            parts = pool.map(_regular_worker, chunks)
        _REG_STATE.clear()
        merged: set[tuple[int, ...]] = set()
        for part in parts:
            merged.update(part)
        tuples = sorted(merged)
    return [RegularSubgroup(hol, t) for t in tuples]


def brace_from_regular(G: FiniteGroup, N: RegularSubgroup, *, name: str | None = None) -> SkewBrace:
    """The brace with dot = G and a∘b := n_a(b), n_a ∈ N, n_a(0) = a."""
    if not N.is_regular():
        raise ValueError("subgroup is not regular on the carrier")
    n = G.order
    circle_table = np.zeros((n, n), dtype=np.int32)
    for i in N.elements:
        a = int(N.parent.img0[i])
        circle_table[a] = N.parent.perms[i]
    circle = build_group(circle_table, name=f"{G.name}_circle")
    return make_brace(G, circle, name=name or f"brace_on_{G.name}")


def enumerate_braces(
    G: FiniteGroup,
    up_to_iso: bool = False,
    *,
    workers: int = 1,
    node_budget: int = DEFAULT_NODE_BUDGET,
    timeout_ms: int | None = None,
    aut_bound: int = DEFAULT_AUT_BOUND,
    holomorph_bound: int = DEFAULT_HOLOMORPH_BOUND,
) -> list[SkewBrace]:
    """One brace per regular subgroup, optionally deduplicated up to
    brace isomorphism (first representative kept, deterministic order)."""
    regs = regular_subgroups(
        G,
        workers=workers,
        node_budget=node_budget,
        timeout_ms=timeout_ms,
        aut_bound=aut_bound,
        holomorph_bound=holomorph_bound,
    )
    braces = [
        brace_from_regular(G, N, name=f"{G.name}#r{i}") for i, N in enumerate(regs)
    ]
    if not up_to_iso:
        return braces
    classes: list[SkewBrace] = []
    buckets: dict[tuple, list[SkewBrace]] = {}
    for b in braces:
        fp = brace_fingerprint(b)
        bucket = buckets.setdefault(fp, [])
        if not any(braces_isomorphic(b, rep) for rep in bucket):
            bucket.append(b)
            classes.append(b)
    return classes


def brute_force_braces(G: FiniteGroup) -> list[SkewBrace]:
    """Independent oracle for |G| <= 5.

    Enumerates all families {m_a} of bijections with m_0 = id and
    m_a(0) = a, keeps those whose induced table a∘b := m_a(b) is a group
    satisfying the brace relation with G.  Backtracking prunes only on
    the Latin-square property of the candidate table, which any group
    table must satisfy; holomorph machinery is never consulted.
    """
    n = G.order
    if n > BRUTE_FORCE_BOUND:
        raise SizeLimit("brute force brace search", n, BRUTE_FORCE_BOUND)
    rows_by_first: dict[int, list[tuple[int, ...]]] = {a: [] for a in range(1, n)}
    for perm in permutations(range(n)):
        if perm[0] != 0:
            rows_by_first[perm[0]].append(perm)
    found: list[np.ndarray] = []
    table = [tuple(range(n))] + [()] * (n - 1)

    def descend(a: int) -> None:
        if a == n:
            cand = np.array(table, dtype=np.int32)
            try:
                circle = build_group(cand)
            except Exception:
                return
            try:
                make_brace(G, circle)
            except Exception:
                return
            found.append(cand)
            return
        for row in rows_by_first[a]:
            ok = True
            for b in range(1, n):
                col = row[b]
                for j in range(a):
                    if table[j][b] == col:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                table[a] = row
                descend(a + 1)
                table[a] = ()

    descend(1)
    out = []
    for i, cand in enumerate(found):
        circle = build_group(cand, name=f"{G.name}_bf{i}")
        out.append(make_brace(G, circle, name=f"{G.name}#bf{i}"))
    return out
