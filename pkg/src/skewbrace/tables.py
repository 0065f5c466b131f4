"""Audit of the static classification tables.

The shipped dataset is the proof surface for the contradiction arguments,
so the audit (a) pins its content by digest, (b) recomputes every derived
number from first-principles order formulas, and (c) re-establishes each
contradiction with exact integer arithmetic.  Any recomputation mismatch
raises TableCorrupt; a contradiction that fails to confirm marks the row
refuted and the audit as failed.
"""

from __future__ import annotations

import hashlib
import json
from importlib import resources
from math import factorial, gcd

from .classification import (
    PrimePowerParam,
    g2_order,
    omega_eps_order,
    out_order,
    prime_power,
    psl_order,
    psu_order,
    psp_order,
    pomega_eps_order,
    sl_order,
    vp,
    zsigmondy,
)
from .errors import TableCorrupt

TABLES_SHA256 = "c94465e6eb03eecea6de18b024eefe61e78732d616dd2e0060d2854607ea683a"


def _load_raw() -> bytes:
    return resources.files("skewbrace.data").joinpath("tables_sec3.json").read_bytes()


def load_tables(*, verify_digest: bool = True) -> dict:
    raw = _load_raw()
    if verify_digest:
        digest = hashlib.sha256(raw).hexdigest()
        if digest != TABLES_SHA256:
            raise TableCorrupt("digest", f"sha256 {digest} != pinned {TABLES_SHA256}")
    return json.loads(raw)


# ---------------------------------------------------------------------------
# first-principles resolution of named orders


def resolve_named_order(name: str) -> int:
    """Order of a named finite group, computed rather than trusted."""
    if name in _SPECIAL_ORDERS:
        return _SPECIAL_ORDERS[name]()
    if name.startswith(("PSL", "PSU", "SL")) and "(" in name:
        head, _, rest = name.partition("(")
        q = int(rest.rstrip(")"))
        fam, n = head[:-1], int(head[-1])
        if fam == "PSL":
            return psl_order(n, q)
        if fam == "PSU":
            return psu_order(n, q)
        if fam == "SL":
            return sl_order(n, q)
    raise TableCorrupt(name, "unknown named order")


_SPECIAL_ORDERS = {
    "S3": lambda: factorial(3),
    "S4": lambda: factorial(4),
    "S6": lambda: factorial(6),
    "S8": lambda: factorial(8),
    "A4": lambda: factorial(4) // 2,
    "A5": lambda: factorial(5) // 2,
    "A7": lambda: factorial(7) // 2,
    "A9": lambda: factorial(9) // 2,
    # dihedral group of order 10
    "D10": lambda: 10,
    # AGammaL1(q) = q(q-1)f for q = p^f; here q = 9 = 3^2
    "AGammaL1(9)": lambda: 9 * 8 * 2,
    # M9 is sharply 2-transitive on 9 points
    "M9": lambda: 9 * 8,
    # M11 and M12 are sharply 4- and 5-transitive on 11 and 12 points
    "M11": lambda: 11 * 10 * 9 * 8,
    "M12": lambda: 12 * 11 * 10 * 9 * 8,
    # ATLAS order; M23 is the point stabilizer of M24
    "M24": lambda: 244823040,
    "M23": lambda: 244823040 // 24,
    "G2(3)": lambda: g2_order(3),
    "Sp6(2)": lambda: psp_order(3, 2),
    "Omega7(3)": lambda: omega_eps_order_odd(3, 3),
    "OmegaMinus8(3)": lambda: omega_eps_order(4, 3, -1),
    "OmegaPlus8(2)": lambda: omega_eps_order(4, 2, +1),
}


def omega_eps_order_odd(m: int, q: int) -> int:
    from .classification import omega_odd_order

    return omega_odd_order(m, q)


def product_of_factors(factors) -> int:
    out = 1
    for f in factors:
        if isinstance(f, int):
            out *= f
        elif isinstance(f, str):
            out *= resolve_named_order(f)
        elif isinstance(f, list) and f and f[0] == "pow":
            out *= f[1] ** f[2]
        else:
            raise TableCorrupt(str(f), "unparseable factor")
    return out


def _family_order(fam: dict) -> int:
    kind = fam["kind"]
    if kind == "PSL":
        return psl_order(fam["n"], fam["q"])
    if kind == "PSU":
        return psu_order(fam["n"], fam["q"])
    if kind == "PSp":
        return psp_order(fam["m"], fam["q"])
    if kind == "OmegaOdd":
        return omega_eps_order_odd(fam["m"], fam["q"])
    if kind == "POmegaPlus8":
        return pomega_eps_order(4, fam["q"], +1)
    if kind == "M11":
        return resolve_named_order("M11")
    raise TableCorrupt(kind, "unknown family kind")


def _family_out(fam: dict) -> int:
    kind = fam["kind"]
    if kind == "M11":
        return 1  # ATLAS: M11 has trivial outer automorphism group
    q = fam["q"]
    param = PrimePowerParam.from_q(q)
    if kind == "PSL":
        if fam["n"] == 2:
            return out_order("PSL2", param)
        return out_order("PSLn", param, n=fam["n"])
    if kind == "PSU":
        return out_order("PSUn", param, n=fam["n"])
    if kind == "PSp":
        if fam["m"] == 2 and param.p == 2:
            return out_order("PSp4_even", param)
        return out_order("PSp2m", param, m=fam["m"])
    if kind == "OmegaOdd":
        return out_order("Omega_odd", param, m=fam["m"])
    if kind == "POmegaPlus8":
        return out_order("POmega_plus8", param)
    raise TableCorrupt(kind, "unknown family kind")


def _prime_powers_up_to(q_max: int):
    from sympy import primerange

    for p in primerange(2, q_max + 1):
        q = p
        f = 1
        while q <= q_max:
            yield int(p), f, q
            q *= p
            f += 1


# ---------------------------------------------------------------------------
# per-section checks


def _check(name: str, ok: bool, detail: str = "") -> dict:
    return {"name": name, "ok": bool(ok), "detail": detail}


def _audit_helper_orders(data: dict) -> dict:
    checks = []
    for name, stated in sorted(data["helper_orders"].items()):
        computed = resolve_named_order(name)
        if computed != stated:
            raise TableCorrupt(name, f"stated {stated}, recomputed {computed}")
        checks.append(_check(f"order[{name}]", True, str(computed)))
    return {"id": "helper-orders", "checks": checks, "verdict": "confirmed"}


def _audit_solvable_rows(data: dict) -> list[dict]:
    rows = []
    for row in data["solvable_case"]["rows"]:
        checks = []
        out_stated = row["out"]
        out_comp = _family_out(row["family"])
        if out_comp != out_stated:
            raise TableCorrupt(row["id"], f"out stated {out_stated}, recomputed {out_comp}")
        h_min = product_of_factors(row["h_min"])
        k_min = product_of_factors(row["k_min"])
        ok_h = out_stated % h_min != 0
        ok_k = out_stated % k_min != 0
        checks.append(_check("h_min_not_dividing_out", ok_h, f"{h_min} | {out_stated} is false"))
        checks.append(_check("k_min_not_dividing_out", ok_k, f"{k_min} | {out_stated} is false"))
        rows.append(
            {
                "id": row["id"],
                "checks": checks,
                "verdict": "confirmed" if ok_h and ok_k else "refuted",
            }
        )
    return rows


def _audit_psl2_inequality(data: dict) -> dict:
    """f(2, q-1) < q+1, via the chain 2f < 2^f + 1 <= 2(q+1)/(2, q-1)."""
    q_max = data["solvable_case"]["psl2_sweep_q_max"]
    bad = []
    count = 0
    for p, f, q in _prime_powers_up_to(q_max):
        count += 1
        d = gcd(2, q - 1)
        chain = (2 * f < 2**f + 1) and ((2**f + 1) * d <= 2 * (q + 1))
        target = q * (q - 1) * f < q * (q - 1) * (q + 1) // d
        if not (chain and target):
            bad.append(q)
    ok = not bad
    return {
        "id": "solvable-psl2-inequality",
        "checks": [
            _check("q(q-1)f < |PSL2(q)| for all prime powers", ok, f"{count} prime powers <= {q_max}; failures {bad}")
        ],
        "verdict": "confirmed" if ok else "refuted",
    }


def _audit_alternating(data: dict) -> list[dict]:
    sec = data["case_alternating"]
    m_lo, m_hi = sec["m_sweep"]
    rows = []
    for row in sec["rows"]:
        checks = []
        if row["id"] == "alt-de-A6":
            t_order = factorial(6) // 2
            if t_order != row["t_order"]:
                raise TableCorrupt(row["id"], "A6 order mismatch")
            ok = all(k != t_order for k in row["k_orders"])
            checks.append(_check("k_order_differs_from_t", ok, f"{row['k_orders']} vs {t_order}"))
        else:
            ok = True
            for m in range(m_lo, m_hi + 1):
                out = sec["out_m6"] if m == 6 else sec["out_other"]
                if row["h_lower_kind"] == "m":
                    lower = m
                elif row["h_lower_kind"] == "m(m-1)/2":
                    lower = m * (m - 1) // 2
                else:
                    lower = row["h_lower"]
                if lower <= out:
                    ok = False
            checks.append(_check("h_lower_exceeds_out", ok, f"m in [{m_lo},{m_hi}]"))
        rows.append({"id": row["id"], "checks": checks, "verdict": "confirmed" if ok else "refuted"})
    return rows


def _audit_sporadic(data: dict) -> list[dict]:
    rows = []
    for row in data["case_sporadic"]["rows"]:
        checks = []
        if "t" in row:
            t_order = resolve_named_order(row["t"])
            k_order = resolve_named_order(row["k"])
            ok = k_order != t_order
            checks.append(_check("k_order_differs_from_t", ok, f"|{row['k']}| = {k_order}, |{row['t']}| = {t_order}"))
        else:
            ok = row["h_lower"] > row["out_max"]
            checks.append(_check("h_lower_exceeds_out", ok, f"{row['h_lower']} > {row['out_max']}"))
        rows.append({"id": row["id"], "checks": checks, "verdict": "confirmed" if ok else "refuted"})
    return rows


def _audit_classical_rows(data: dict) -> list[dict]:
    rows = []
    for row in data["case_classical_rows"]:
        t_comp = _family_order(row["family"])
        if t_comp != row["t_order"]:
            raise TableCorrupt(row["id"], f"|T| stated {row['t_order']}, recomputed {t_comp}")
        out_comp = _family_out(row["family"])
        if out_comp != row["out"]:
            raise TableCorrupt(row["id"], f"out stated {row['out']}, recomputed {out_comp}")
        K = product_of_factors(row["k_factors"])
        ok = row["out"] * K < row["t_order"]
        rows.append(
            {
                "id": row["id"],
                "checks": [
                    _check("out_times_K_below_t", ok, f"{row['out']}*{K} < {row['t_order']}")
                ],
                "verdict": "confirmed" if ok else "refuted",
            }
        )
    return rows


_VAL_CASES = {
    # case: (needs_m, p_filter, out_fn(param, m), h_divisor_fn(q, m), out_vp_bound, h_vp_bound)
    "b": (False, None),
    "c": (True, 2),
    "d": (False, 2),
    "e": (False, "odd"),
    "f": (True, None),
    "g": (True, "odd"),
    "h": (True, None),
    "i": (False, None),
}


def _val_out(case: str, param: PrimePowerParam, m: int | None) -> int:
    if case == "b":
        return out_order("PSLn", param, n=4)
    if case == "c":
        if m == 2:
            return out_order("PSp4_even", param)
        return out_order("PSp2m", param, m=m)
    if case == "d":
        return out_order("PSp4_even", param)
    if case == "e":
        return out_order("PSp2m", param, m=2)
    if case == "f":
        return out_order("PSUn", param, n=2 * m)
    if case == "g":
        return out_order("Omega_odd", param, m=m)
    if case == "h":
        return out_order("POmega_plus", param, m=m)
    if case == "i":
        return out_order("POmega_plus8", param)
    raise TableCorrupt(case, "unknown valuation case")


def _val_h_divisor(case: str, q: int, m: int | None) -> int:
    if case == "b":
        return q**3 * (q**3 - 1) // gcd(2, q - 1)
    if case == "c":
        return q**m * (q**m - 1)
    if case == "d":
        return q**2 * (q**2 - 1)
    if case == "e":
        return q**3 * (q**2 - 1)
    if case == "f":
        return q ** (2 * m) * (q ** (2 * m) - 1) // (q + 1)
    if case == "g":
        return q ** (m * (m + 1) // 2) * (q**m - 1) // 2
    if case == "h":
        return q**m * (q**m - 1) // gcd(2, q - 1)
    if case == "i":
        return q**4 * (q**4 - 1) // gcd(2, q - 1)
    raise TableCorrupt(case, "unknown valuation case")


def _val_bounds(case: str, p: int, f: int, m: int | None) -> tuple[int, int]:
    """(stated upper bound on vp(out), stated lower bound on vp(h))."""
    vpf = vp(f, p)
    if case == "b":
        return 1 + vpf, 3 * f
    if case == "c":
        return 1 + vpf, m * f
    if case == "d":
        return 1 + vpf, 2 * f
    if case == "e":
        return vpf, 3 * f
    if case == "f":
        return 1 + vpf, 2 * m * f
    if case == "g":
        return vpf, m * (m + 1) // 2 * f
    if case == "h":
        return 3 + vpf, m * f
    if case == "i":
        return 3 + vpf, 4 * f
    raise TableCorrupt(case, "unknown valuation case")


def _audit_valuation_rows(data: dict) -> list[dict]:
    sweep = data["valuation_sweep"]
    q_max = sweep["q_max"]
    rows = []
    for row in data["valuation_rows"]:
        case = row["case"]
        needs_m, p_filter = _VAL_CASES[case]
        m_list = sweep["m_values"].get(case, [None]) if needs_m else [None]
        bad = []
        count = 0
        for p, f, q in _prime_powers_up_to(q_max):
            if p_filter == 2 and p != 2:
                continue
            if p_filter == "odd" and p == 2:
                continue
            param = PrimePowerParam(p, f)
            for m in m_list:
                count += 1
                out = _val_out(case, param, m)
                h_div = _val_h_divisor(case, q, m)
                out_bound, h_bound = _val_bounds(case, p, f, m)
                ok = (
                    vp(out, p) <= out_bound
                    and h_bound <= vp(h_div, p)
                    and out_bound < h_bound
                    and vp(out, p) < vp(h_div, p)
                )
                if not ok:
                    bad.append((q, m))
        ok_row = not bad
        rows.append(
            {
                "id": row["id"],
                "checks": [
                    _check(
                        "vp(out) < vp(h_divisor)",
                        ok_row,
                        f"{count} parameter points; failures {bad[:5]}",
                    )
                ],
                "verdict": "confirmed" if ok_row else "refuted",
            }
        )
    return rows


def _audit_case_a(data: dict) -> list[dict]:
    sec = data["case_a"]
    rows = []
    # n = 2: |Out| <= 2f < 2^f + 1 <= q + 1 = (q^2-1)/(q-1)
    bad = []
    count = 0
    for p, f, q in _prime_powers_up_to(sec["n2_q_max"]):
        count += 1
        out = gcd(2, q - 1) * f
        h_min = (q**2 - 1) // (q - 1)
        chain = out <= 2 * f < 2**f + 1 <= q + 1 == h_min
        if not (chain and out < h_min):
            bad.append(q)
    rows.append(
        {
            "id": "case-a-n2-sweep",
            "checks": [_check("out_below_h_min", not bad, f"{count} prime powers; failures {bad}")],
            "verdict": "confirmed" if not bad else "refuted",
        }
    )
    for sp in sec["specials"]:
        q = sp["p"] ** sp["f"]
        param = PrimePowerParam(sp["p"], sp["f"])
        out = out_order("PSLn", param, n=sp["n"])
        if out != sp["out"]:
            raise TableCorrupt(sp["id"], f"out stated {sp['out']}, recomputed {out}")
        h_min = (q ** sp["n"] - 1) // (q - 1)
        if h_min != sp["h_min"]:
            raise TableCorrupt(sp["id"], f"h_min stated {sp['h_min']}, recomputed {h_min}")
        ok = out < h_min
        rows.append(
            {
                "id": sp["id"],
                "checks": [_check("out_below_h_min", ok, f"{out} < {h_min}")],
                "verdict": "confirmed" if ok else "refuted",
            }
        )
    # n >= 3 away from (fn, p) = (6, 2): a primitive prime divisor rules out (2)
    zs = sec["zsigmondy_sample"]
    n_lo, n_hi = zs["n_range"]
    bad_z = []
    count_z = 0
    exception_ok = zsigmondy(2, 6) is None
    for p in zs["p_list"]:
        for n in range(n_lo, n_hi + 1):
            f = 1
            while f * n <= zs["fn_max"]:
                if (f * n, p) != (6, 2):
                    count_z += 1
                    q = p**f
                    ell = zsigmondy(p, f * n)
                    out = gcd(n, q - 1) * 2 * f
                    ok = (
                        ell is not None
                        and ((q**n - 1) // (q - 1)) % ell == 0
                        and out % ell != 0
                    )
                    if not ok:
                        bad_z.append((p, f, n))
                f += 1
    checks = [
        _check("zsigmondy(2,6)_is_none", exception_ok),
        _check(
            "primitive_prime_divides_H_not_out",
            not bad_z,
            f"{count_z} (p, f, n) samples; failures {bad_z[:5]}",
        ),
    ]
    desc_bad = []
    for p, f, n in sec["descent_samples"]:
        for ell in range(2, f + 1):
            if f % ell == 0 and _is_prime_small(ell):
                if pow(p, (f // ell) * n, ell) != pow(p, f * n, ell):
                    desc_bad.append((p, f, n, ell))
    checks.append(_check("descent_congruence", not desc_bad, f"failures {desc_bad}"))
    ok_all = exception_ok and not bad_z and not desc_bad
    rows.append(
        {
            "id": "case-a-zsigmondy",
            "checks": checks,
            "verdict": "confirmed" if ok_all else "refuted",
        }
    )
    return rows


def _is_prime_small(k: int) -> bool:
    if k < 2:
        return False
    return all(k % d for d in range(2, int(k**0.5) + 1))


def audit_paper_tables() -> dict:
    """Recompute and confirm every encoded contradiction row."""
    data = load_tables()
    rows = [_audit_helper_orders(data)]
    rows += _audit_solvable_rows(data)
    rows.append(_audit_psl2_inequality(data))
    rows += _audit_alternating(data)
    rows += _audit_sporadic(data)
    rows += _audit_classical_rows(data)
    rows += _audit_valuation_rows(data)
    rows += _audit_case_a(data)
    confirmed = sum(1 for r in rows if r["verdict"] == "confirmed")
    refuted = [r["id"] for r in rows if r["verdict"] != "confirmed"]
    return {
        "rows": rows,
        "summary": {
            "total": len(rows),
            "confirmed": confirmed,
            "refuted": refuted,
            "solvable_rows": len(data["solvable_case"]["rows"]),
            "classical_rows": len(data["case_classical_rows"]),
        },
        "passed": not refuted,
    }
