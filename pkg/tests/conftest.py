import pytest

import skewbrace as sb
from skewbrace.catalog import resolve_group_name

SMALL_GROUP_NAMES = [
    "C2", "C3", "C4", "V4", "C5", "C6", "S3", "C7",
    "C8", "C4xC2", "C2^3", "D4", "Q8",
]


@pytest.fixture(scope="session")
def groups():
    out = {name: resolve_group_name(name) for name in SMALL_GROUP_NAMES}
    out["A5"] = sb.builtin_group("A5")
    out["A4"] = sb.builtin_group("A4")
    return out


@pytest.fixture(scope="session")
def a5(groups):
    return groups["A5"]


@pytest.fixture(scope="session")
def a5_squared(a5):
    return sb.direct_power(a5, 2)


@pytest.fixture(scope="session")
def a5_braces(a5):
    return sb.enumerate_braces(a5)


@pytest.fixture(scope="session")
def v4_c4_brace(groups):
    regs = sb.regular_subgroups(groups["V4"])
    braces = [sb.brace_from_regular(groups["V4"], N) for N in regs]
    return next(b for b in braces if sb.brace_class(b) == "neither")


@pytest.fixture(scope="session")
def trivial_a5(a5):
    return sb.make_brace(a5, a5, name="trivial:A5")


@pytest.fixture(scope="session")
def almost_trivial_a5(a5):
    return sb.make_brace(a5, sb.opposite_group(a5), name="almost_trivial:A5")
