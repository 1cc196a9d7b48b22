"""Asymptotic lines read off the formula table with leading-exponential arithmetic.

J[A,B,r,s,i,j] is a positive sum of exponentials in t.  Replacing every J by
its dominant exponential as t -> +inf or t -> -inf and pushing that through
the position and amplitude formulas gives c t + d for log X, log Q, ...,
hence for x, ln m, y, ln n.  This route does not use the theorem statements.
"""

from __future__ import annotations

from ..formulas import Lead, LeadAlgebra, evaluate
from ..solver import LOG2, Solution
from .lines import AsymptoteLine, direction_name


def engine_lines(sol: Solution, direction: int) -> dict[tuple[str, str], AsymptoteLine]:
    """{(target, kind): line} for every peakon, from dominant exponentials."""
    alg = LeadAlgebra(sol.dets, direction)
    out: dict[tuple[str, str], AsymptoteLine] = {}
    dname = direction_name(direction)
    for rec, pos, amp in evaluate(sol.table, alg, sol.params, sol.spectral):
        low = rec.kind.lower()
        for i, (lx, lq) in enumerate(zip(pos, amp), start=1):
            target = f"{low}[{rec.index}.{i}]"
            c = 0.5 * lx.rate
            d = 0.5 * (lx.logc + LOG2)
            out[(target, "position")] = AsymptoteLine(c, d, dname, target, "position", c == 0.0)
            ca = 0.5 * lx.rate + lq.rate
            da = 0.5 * lx.logc + lq.logc - 0.5 * LOG2
            out[(target, "log-amplitude")] = AsymptoteLine(ca, da, dname, target, "log-amplitude", ca == 0.0)
    return out
