"""JSON file formats for groups and braces.

Group files: {"name": str, "order": n, "table": [[int]]}
         or  {"name": str, "degree": d, "perm_generators": [[int]]}
Brace files: {"name": str, "order": n, "dot": [[int]], "circle": [[int]]}
"""

from __future__ import annotations

import json
from pathlib import Path

from .braces import SkewBrace, make_brace
from .catalog import group_from_permutations
from .errors import NotAGroup
from .groups import DEFAULT_TABLE_BOUND, FiniteGroup, build_group


def group_from_dict(data: dict, *, table_bound: int = DEFAULT_TABLE_BOUND) -> FiniteGroup:
    name = data.get("name")
    if "table" in data:
        table = data["table"]
        if "order" in data and len(table) != data["order"]:
            raise NotAGroup("declared order does not match the table")
        return build_group(table, name, table_bound=table_bound)
    if "perm_generators" in data:
        gens = data["perm_generators"]
        if "degree" in data:
            for g in gens:
                if len(g) != data["degree"]:
                    raise NotAGroup("generator degree mismatch")
        return group_from_permutations(gens, name or "G")
    raise NotAGroup("group file needs 'table' or 'perm_generators'")


def load_group(path: str | Path, *, table_bound: int = DEFAULT_TABLE_BOUND) -> FiniteGroup:
    with open(path) as fh:
        return group_from_dict(json.load(fh), table_bound=table_bound)


def group_to_dict(G: FiniteGroup) -> dict:
    return {"name": G.name, "order": G.order, "table": G.table.tolist()}


def save_group(G: FiniteGroup, path: str | Path) -> None:
    Path(path).write_text(json.dumps(group_to_dict(G), sort_keys=True))


def brace_from_dict(
    data: dict, *, table_bound: int = DEFAULT_TABLE_BOUND, workers: int = 1
) -> SkewBrace:
    name = data.get("name")
    dot = build_group(data["dot"], f"{name}_dot" if name else None, table_bound=table_bound)
    circle = build_group(
        data["circle"], f"{name}_circle" if name else None, table_bound=table_bound
    )
    if "order" in data and dot.order != data["order"]:
        raise NotAGroup("declared order does not match the tables")
    return make_brace(dot, circle, name=name, workers=workers)


def load_brace(
    path: str | Path, *, table_bound: int = DEFAULT_TABLE_BOUND, workers: int = 1
) -> SkewBrace:
    with open(path) as fh:
        return brace_from_dict(json.load(fh), table_bound=table_bound, workers=workers)


def brace_to_dict(B: SkewBrace) -> dict:
    return {
        "name": B.name,
        "order": B.order,
        "dot": B.dot.table.tolist(),
        "circle": B.circle.table.tolist(),
    }


def save_brace(B: SkewBrace, path: str | Path) -> None:
    Path(path).write_text(json.dumps(brace_to_dict(B), sort_keys=True))
