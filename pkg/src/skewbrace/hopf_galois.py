"""Correspondence data between a brace on a Galois group and its induced
Hopf-Galois structure.

Purely group/brace-level reporting: a subgroup of the circle group sits
in the image of the correspondence exactly when it is a left ideal, and
the structure is minimal exactly when the brace is left-simple.  No field
or Hopf-algebra elements are modelled.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .braces import SkewBrace, canonical_ideals, is_left_simple
from .errors import SizeLimit
from .groups import DEFAULT_LATTICE_BOUND, all_subgroups


@dataclass(frozen=True)
class HGSReport:
    brace_id: str
    degree: int
    orbit_partition: list[tuple[int, ...]]
    subgroup_rows: list[dict]
    image_size: int
    minimal: bool
    partial: bool

    def to_dict(self) -> dict:
        return {
            "brace_id": self.brace_id,
            "degree": self.degree,
            "orbit_partition": [list(o) for o in self.orbit_partition],
            "subgroup_rows": self.subgroup_rows,
            "image_size": self.image_size,
            "minimal": self.minimal,
            "partial": self.partial,
        }


def lambda_orbits(B: SkewBrace) -> list[tuple[int, ...]]:
    """Orbits of the carrier under all λ_a, sorted by least member."""
    n = B.order
    L = B.lambda_table
    seen = np.zeros(n, dtype=bool)
    orbits = []
    for x in range(n):
        if seen[x]:
            continue
        cur = np.array([x], dtype=np.int64)
        while True:
            nxt = np.unique(np.concatenate([cur, np.unique(L[:, cur])]))
            if nxt.size == cur.size:
                break
            cur = nxt
        seen[cur] = True
        orbits.append(tuple(int(v) for v in cur))
    return orbits


def fixed_algebra_stats(B: SkewBrace) -> dict:
    """Orbit statistics of the λ-action; the structure's dimension is |G|."""
    orbits = lambda_orbits(B)
    sizes = [len(o) for o in orbits]
    assert sum(sizes) == B.order
    assert orbits[0] == (0,), "the identity orbit must be {0}"
    return {
        "orbit_count": len(orbits),
        "orbit_sizes": sizes,
        "orbits": [list(o) for o in orbits],
        "dimension": B.order,
    }


def _is_left_ideal_rows(B: SkewBrace, elements: tuple[int, ...]) -> bool:
    ids = np.fromiter(elements, dtype=np.int64)
    member = frozenset(int(x) for x in elements)
    prods = np.unique(B.dot.table[np.ix_(ids, ids)])
    if not all(int(x) in member for x in prods):
        return False
    lam = np.unique(B.lambda_table[:, ids])
    return all(int(x) in member for x in lam)


def correspondence_report(
    B: SkewBrace, *, lattice_bound: int = DEFAULT_LATTICE_BOUND
) -> HGSReport:
    """Enumerate circle subgroups and mark those in the correspondence
    image (= the left ideals).

    Above the lattice bound the row set is restricted to the trivial
    subgroup, the whole group, and the canonical ideals, flagged partial.
    """
    minimal, _ = is_left_simple(B)
    orbits = lambda_orbits(B)
    rows: list[dict] = []
    partial = B.order > lattice_bound
    if not partial:
        subs = all_subgroups(B.circle, lattice_bound=lattice_bound)
        for sub in subs:
            rows.append(
                {
                    "elements": list(sub.elements),
                    "order": sub.order,
                    "is_left_ideal": _is_left_ideal_rows(B, sub.elements),
                }
            )
    else:
        seen: dict[tuple[int, ...], bool] = {}
        seen[(0,)] = True
        seen[tuple(range(B.order))] = True
        for ideal in canonical_ideals(B).values():
            seen[ideal.elements] = True
        for elems in sorted(seen, key=lambda e: (len(e), e)):
            rows.append(
                {
                    "elements": list(elems) if len(elems) <= 128 else None,
                    "order": len(elems),
                    "is_left_ideal": True,
                }
            )
    image_size = sum(1 for r in rows if r["is_left_ideal"])
    report = HGSReport(
        brace_id=B.name,
        degree=B.order,
        orbit_partition=orbits,
        subgroup_rows=rows,
        image_size=image_size,
        minimal=minimal,
        partial=partial,
    )
    if not partial:
        # the minimality clause of the correspondence, checked both ways
        if minimal != (image_size == 2 and B.order > 1):
            raise AssertionError("minimal flag disagrees with the image size")
    return report
