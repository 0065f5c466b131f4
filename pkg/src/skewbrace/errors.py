"""Exception types shared across the package.

Exit-code conventions used by the CLI: verification failures map to 1,
usage errors to 2, and resource-limit errors (SizeLimit, SearchTimeout)
to 3.
"""

from __future__ import annotations


class SkewBraceError(Exception):
    """Base class for all package errors."""


class NotAGroup(SkewBraceError):
    """A Cayley table failed group validation (identity, Latin square,
    associativity, or inverses)."""

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(reason)


class IdentityMismatch(SkewBraceError):
    """The two tables of a would-be brace do not share identity 0."""


class BraceRelationFails(SkewBraceError):
    """The brace relation a∘(b·c) = (a∘b)·a⁻¹·(a∘c) fails; carries the
    first violating triple found."""

    def __init__(self, a: int, b: int, c: int):
        self.triple = (a, b, c)
        super().__init__(f"brace relation fails at (a, b, c) = ({a}, {b}, {c})")


class SizeLimit(SkewBraceError):
    """A computation was refused because the input exceeds its configured
    feasibility bound."""

    def __init__(self, what: str, size: int, bound: int):
        self.what = what
        self.size = size
        self.bound = bound
        super().__init__(f"{what}: size {size} exceeds bound {bound}")


class SearchTimeout(SkewBraceError):
    """A backtracking search exhausted its node or wall-clock budget.
    The partial result is never returned silently."""

    def __init__(self, budget: str):
        self.budget = budget
        super().__init__(f"search budget exhausted: {budget}")


class NotSimpleAdditive(SkewBraceError):
    """The factorization conditions require a non-abelian simple additive
    group."""


class UnknownFamily(SkewBraceError):
    """Unrecognized simple-group family name in an order or outer-order
    formula."""


class TableCorrupt(SkewBraceError):
    """A static classification-table row failed its recomputation from
    first principles."""

    def __init__(self, row: str, detail: str):
        self.row = row
        self.detail = detail
        super().__init__(f"table row {row}: {detail}")


class CodingMismatch(SkewBraceError):
    """A brace's additive table is not the canonical direct-power coding
    expected by the check."""
