"""Explicit numerology connecting tower length, nilpotent depth and intersection.

All real-valued quantities use 60-digit decimal arithmetic.  Comparisons
that can be phrased over the integers are done exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Context, Decimal, localcontext
from fractions import Fraction
from typing import Dict, Optional

PREC = 60
DIL_FLOOR = Decimal("0.197")


class BoundError(ValueError):
    pass


def _ctx():
    return localcontext(Context(prec=PREC))


@dataclass(frozen=True)
class BoundReport:
    name: str
    argument: int
    value: Decimal
    symbolic: str
    branch: str = ""
    log_branch: Optional[Decimal] = None

    def as_dict(self) -> Dict[str, str]:
        out = {"name": self.name, "argument": str(self.argument), "value": f"{self.value:.30f}",
               "symbolic": self.symbolic}
        if self.branch:
            out["branch"] = self.branch
        if self.log_branch is not None:
            out["log_branch"] = f"{self.log_branch:.30f}"
        return out


def constant_c() -> Decimal:
    """ln(28/25) / ln(4)."""
    with _ctx():
        return (Decimal(28) / Decimal(25)).ln() / Decimal(4).ln()


C_SYMBOLIC = "ln(28/25)/ln(4)"


def _pow(base: Decimal, exponent: Decimal) -> Decimal:
    with _ctx():
        return (exponent * base.ln()).exp()


def isect_bound(d: int, boundary: bool = False) -> BoundReport:
    """Lower bound ((d+2)/2)^c on the intersection number."""
    least = 7 if boundary else 3
    if d < least:
        raise BoundError(f"depth {d} is below the hypothesis d >= {least}")
    with _ctx():
        val = _pow(Decimal(d + 2) / 2, constant_c())
    return BoundReport("isect" + ("_boundary" if boundary else ""), d, val,
                       f"(({d}+2)/2)^({C_SYMBOLIC})")


def dil_log_branch(k: int) -> Decimal:
    with _ctx():
        return constant_c() * (Decimal(k + 3) / 2).ln() - Decimal(2).ln()


def dil_bound(k: int) -> BoundReport:
    """max(0.197, c ln((k+3)/2) - ln 2) for the log-dilatation."""
    if k < 1:
        raise BoundError("k must be at least 1")
    lb = dil_log_branch(k)
    if lb > DIL_FLOOR:
        return BoundReport("dil", k, lb, f"c*ln(({k}+3)/2)-ln(2)", "logarithmic", lb)
    return BoundReport("dil", k, DIL_FLOOR, "0.197", "constant", lb)


def flm_dilatation(n: int) -> BoundReport:
    """Log-dilatation lower bound ln(n/2) when n >= 3."""
    if n < 3:
        raise BoundError("the intersection bound needs n >= 3")
    with _ctx():
        val = (Decimal(n) / 2).ln()
    return BoundReport("flm", n, val, f"ln({n}/2)")


def smallest_depth_exceeding(target: int = 2) -> int:
    """Smallest d >= 3 with ((d+2)/2)^c > target."""
    # ((d+2)/2)^c > t  <=>  d > 2 t^(1/c) - 2
    with _ctx():
        approx = int(2 * _pow(Decimal(target), 1 / constant_c())) - 2
    d = max(3, approx - 2)
    while isect_bound(d).value <= target:
        d += 1
    while d > 3 and isect_bound(d - 1).value > target:
        d -= 1
    return d


def first_positive_log_branch() -> int:
    k = 1
    lo, hi = 1, 1
    while dil_log_branch(hi) <= 0:
        lo, hi = hi, hi * 2
    while lo < hi:
        k = (lo + hi) // 2
        if dil_log_branch(k) > 0:
            hi = k
        else:
            lo = k + 1
    return lo


def first_k_log_branch_at_least(threshold: Decimal = DIL_FLOOR) -> int:
    lo, hi = 1, 1
    while dil_log_branch(hi) < threshold:
        lo, hi = hi, hi * 2
    while lo < hi:
        mid = (lo + hi) // 2
        if dil_log_branch(mid) >= threshold:
            hi = mid
        else:
            lo = mid + 1
    return lo


# ---------------------------------------------------------------- exact checks


def tower_length_ok(k: int, n: int) -> bool:
    """k <= 2 log_{28/25}(n) + 1 for n >= 2, and k <= 3 for n <= 1."""
    if n <= 1:
        return k <= 3
    if k <= 1:
        return True
    # (28/25)^(k-1) <= n^2
    return 28 ** (k - 1) <= n * n * 25 ** (k - 1)


def tower_length_bound(n: int) -> Decimal:
    if n <= 1:
        return Decimal(3)
    with _ctx():
        return 2 * Decimal(n).ln() / (Decimal(28) / Decimal(25)).ln() + 1


def tower_length_cap(n: int) -> int:
    """Largest integer k allowed by ``tower_length_ok``."""
    k = 1
    while tower_length_ok(k + 1, n):
        k += 1
    return k


def basic_move_ok(n_after: int, n_before: int) -> bool:
    return 28 * n_after <= 25 * n_before


def depth_limit(k: int) -> int:
    """Largest depth d compatible with a tower of length k."""
    return max(1, 2**k - 2)


@dataclass(frozen=True)
class ChainCheck:
    name: str
    ok: bool
    detail: str


def consistency_chain(n: int, k: int, d: int, ell: Optional[int] = None,
                      nil_class: Optional[int] = None, boundary: bool = False) -> list:
    """Check d <= 2^k - 2 <= 2^(2 log_{28/25}(n) + 1) - 2 and its inversion."""
    out = []
    out.append(ChainCheck("d<=2^k-2", d <= depth_limit(k), f"d={d}, 2^k-2={2**k - 2}"))
    out.append(ChainCheck("k<=2log(n)+1", tower_length_ok(k, n),
                          f"k={k}, bound={tower_length_bound(n):.6f}"))
    if ell is not None:
        out.append(ChainCheck("ell<=2^k-1", ell <= 2**k - 1, f"ell={ell}"))
        if ell >= 2:
            out.append(ChainCheck("d<=ell-1", d <= ell - 1, f"d={d}, ell={ell}"))
    if nil_class is not None:
        out.append(ChainCheck("d<=class", d <= max(nil_class, 1), f"d={d}, class={nil_class}"))
    least = 7 if boundary else 3
    if d >= least and n >= 2:
        b = isect_bound(d, boundary).value
        out.append(ChainCheck("n>=((d+2)/2)^c", Decimal(n) >= b, f"n={n}, bound={b:.12f}"))
    return out


def chain_ok(checks: list) -> bool:
    return all(c.ok for c in checks)


def as_fraction(x: Decimal) -> Fraction:
    return Fraction(x)
