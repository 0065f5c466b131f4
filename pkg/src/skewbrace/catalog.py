"""Built-in named groups, generated as Cayley tables and validated at load.

Acceptance runs must not depend on external files, so every name the CLI
accepts is constructed here: cyclic tables directly, everything else by
closing permutation generators and indexing the closure.
"""

from __future__ import annotations

import numpy as np

from .errors import NotAGroup
from .groups import DEFAULT_TABLE_BOUND, FiniteGroup, build_group, direct_power


def cyclic_group(n: int, name: str | None = None) -> FiniteGroup:
    ref = np.arange(n)
    table = (ref[:, None] + ref[None, :]) % n
    return build_group(table, name or f"C{n}")


def _compose(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(p[x] for x in q)


def group_from_permutations(generators, name: str) -> FiniteGroup:
    """Close permutation generators and return the abstract Cayley table.

    Element 0 is the identity permutation; the rest are ordered by their
    image tuples, so tables are reproducible.
    """
    gens = [tuple(int(x) for x in g) for g in generators]
    if not gens:
        raise NotAGroup("no generators")
    degree = len(gens[0])
    for g in gens:
        if len(g) != degree or sorted(g) != list(range(degree)):
            raise NotAGroup(f"generator {g} is not a permutation of 0..{degree - 1}")
    ident = tuple(range(degree))
    elems = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = _compose(p, g)
                if q not in elems:
                    elems.add(q)
                    nxt.append(q)
        frontier = nxt
    ordered = [ident] + sorted(elems - {ident})
    index = {p: i for i, p in enumerate(ordered)}
    n = len(ordered)
    table = np.zeros((n, n), dtype=np.int32)
    for i, p in enumerate(ordered):
        for j, q in enumerate(ordered):
            table[i, j] = index[_compose(p, q)]
    return build_group(table, name)


def quaternion_group() -> FiniteGroup:
    """Q8 with ids 0..7 read as (sign, unit): id = 4*s + u, units 1,i,j,k."""
    unit_mul = {
        (0, 0): (0, 0), (0, 1): (0, 1), (0, 2): (0, 2), (0, 3): (0, 3),
        (1, 0): (0, 1), (2, 0): (0, 2), (3, 0): (0, 3),
        (1, 1): (1, 0), (2, 2): (1, 0), (3, 3): (1, 0),
        (1, 2): (0, 3), (2, 1): (1, 3),
        (2, 3): (0, 1), (3, 2): (1, 1),
        (3, 1): (0, 2), (1, 3): (1, 2),
    }
    table = np.zeros((8, 8), dtype=np.int32)
    for a in range(8):
        sa, ua = divmod(a, 4)
        for b in range(8):
            sb, ub = divmod(b, 4)
            sp, up = unit_mul[(ua, ub)]
            table[a, b] = ((sa + sb + sp) % 2) * 4 + up
    return build_group(table, "Q8")


def _builders() -> dict[str, callable]:
    return {
        "C2": lambda: cyclic_group(2),
        "C3": lambda: cyclic_group(3),
        "C4": lambda: cyclic_group(4),
        "C5": lambda: cyclic_group(5),
        "C6": lambda: cyclic_group(6),
        "C7": lambda: cyclic_group(7),
        "C8": lambda: cyclic_group(8),
        "V4": lambda: group_from_permutations([(1, 0, 3, 2), (2, 3, 0, 1)], "V4"),
        "S3": lambda: group_from_permutations([(1, 2, 0), (1, 0, 2)], "S3"),
        "A4": lambda: group_from_permutations([(1, 2, 0, 3), (0, 2, 3, 1)], "A4"),
        "A5": lambda: group_from_permutations([(1, 2, 3, 4, 0), (1, 2, 0, 3, 4)], "A5"),
        "D4": lambda: group_from_permutations([(1, 2, 3, 0), (3, 2, 1, 0)], "D4"),
        "Q8": quaternion_group,
        "C4xC2": lambda: group_from_permutations(
            [(1, 2, 3, 0, 4, 5), (0, 1, 2, 3, 5, 4)], "C4xC2"
        ),
    }


BUILTIN_NAMES = tuple(sorted(_builders()))

_cache: dict[str, FiniteGroup] = {}


def builtin_group(name: str) -> FiniteGroup:
    if name not in _cache:
        builders = _builders()
        if name not in builders:
            raise KeyError(f"unknown builtin group {name!r}")
        _cache[name] = builders[name]()
    return _cache[name]


def resolve_group_name(
    name: str, *, table_bound: int = DEFAULT_TABLE_BOUND
) -> FiniteGroup | None:
    """Builtin lookup, with T^k syntax for direct powers (e.g. A5^2)."""
    if name in _builders():
        return builtin_group(name)
    if "^" in name:
        base, _, exp = name.partition("^")
        if base in _builders() and exp.isdigit():
            return direct_power(builtin_group(base), int(exp), table_bound=table_bound)
    return None
