"""Scheme comparison analytics: efficiency ratio, correction factors, p-ranges.

The headline quantity is the efficiency ratio eta: the geometric upper bound
on compromising an interlinked l-scheme divided by the (n p)^(l+1) estimate
for the (l+1)-chain disjoint layout built from the same link budget.  Values
below one favor the interlinked layout.

Because (n p)^(l+1) overstates 1 - (1-p)^n per chain, eta gets a correction:
gamma(mu) = mu (1 - exp(-1/mu)), with mu = 1/(n p), is the limiting ratio of
the exact chain-compromise probability to n p, and dividing eta by
gamma^(l+1) gives the conservative comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple

from .cut_combinatorics import alpha_closed, count_cuts_bruteforce
from .errors import SizeCapError
from .net_model import build_mnop

ETA_VERDICT_MOP = "MOP-better"
ETA_VERDICT_MNOP = "MNOP-better"


def gamma(mu: float) -> float:
    """Limiting ratio of 1 - (1-p)^n to n p at fixed mu = 1/(n p).

    Strictly increasing on [1, inf), always below 1, approaching 1 from
    below as mu grows.
    """
    if mu < 1.0:
        raise ValueError(f"mu must be >= 1, got {mu}")
    return -mu * math.expm1(-1.0 / mu)


def v_n(mu: float, n: int) -> float:
    """Relative error of the n*p linearization at p = 1/(mu*n).

    Defined by 1 - (1-p)^n = (1 + v_n(mu)) * n * p.  Decreases in n and
    tends to gamma(mu) - 1.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if mu * n <= 1.0:
        raise ValueError(f"mu*n must exceed 1, got {mu * n}")
    p = 1.0 / (mu * n)
    return mu * (1.0 - (1.0 - p) ** n) - 1.0


@dataclass(frozen=True)
class EtaReport:
    """Efficiency comparison of the l-scheme against the (l+1)-chain layout."""

    n: int
    l: int
    p: float
    r: float
    mu: float
    eta: float
    eta_corrected: float
    verdict: str


def eta(n: int, l: int, p: float, r: float) -> EtaReport:
    """Efficiency ratio and its gamma-corrected variant.

    eta = alpha(l) / ((1-r) p n^l); the corrected value divides by
    gamma(mu)^(l+1) with mu = 1/(n p).  Requires n*l*p <= r < 1, which also
    guarantees mu > 1.  The verdict follows the corrected value; the
    boundary eta_corrected == 1 counts as MNOP-better.
    """
    if n < 1 or l < 1:
        raise ValueError(f"n and l must be >= 1, got n={n}, l={l}")
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must be in (0, 1), got {p}")
    if not 0.0 < r < 1.0:
        raise ValueError(f"r must be in (0, 1), got {r}")
    if n * l * p > r:
        raise ValueError(f"precondition n*l*p <= r violated: n*l*p = {n * l * p}, r = {r}")
    mu = 1.0 / (n * p)
    value = alpha_closed(l) / ((1.0 - r) * p * float(n) ** l)
    corrected = value / gamma(mu) ** (l + 1)
    verdict = ETA_VERDICT_MOP if corrected < 1.0 else ETA_VERDICT_MNOP
    return EtaReport(n=n, l=l, p=p, r=r, mu=mu, eta=value, eta_corrected=corrected, verdict=verdict)


class PRange(NamedTuple):
    p_min: float
    p_max: float
    nonempty: bool


def p_range(n: int, l: int, r: float, corrected: bool = False) -> PRange:
    """Window of per-node probabilities where the l-scheme wins.

    The lower end solves eta = 1 (below it the interlinked scheme loses its
    edge); the upper end is r/(n l), where the geometric bound stops
    applying.  With ``corrected=True`` the lower end solves
    eta / gamma^(l+1) = 1 by bisection instead.
    """
    if l < 2:
        raise ValueError(f"the comparison needs l >= 2 interlinked chains, got l={l}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0.0 < r < 1.0:
        raise ValueError(f"r must be in (0, 1), got {r}")
    p_min = alpha_closed(l) / ((1.0 - r) * float(n) ** l)
    p_max = r / (n * l)
    if corrected:
        p_min = _corrected_p_min(n, l, r, p_min)
    return PRange(p_min=p_min, p_max=p_max, nonempty=p_min < p_max)


def _corrected_p_min(n: int, l: int, r: float, uncorrected: float) -> float:
    def excess(p: float) -> float:
        mu = max(1.0 / (n * p), 1.0)  # p = 1/n can round mu a hair below 1
        return math.log(alpha_closed(l) / ((1.0 - r) * p * float(n) ** l)) - (l + 1) * math.log(
            gamma(mu)
        )

    lo = uncorrected  # eta = 1 here, so the corrected ratio is still >= 1
    hi = 1.0 / n  # largest p keeping mu >= 1
    if lo >= hi or excess(hi) > 0.0:
        return math.inf
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if excess(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return hi


@dataclass(frozen=True)
class SingleLinkReport:
    n: int
    column: int
    cuts_with_link: int
    cuts_without_link: int

    @property
    def ratio(self) -> float:
        return self.cuts_with_link / self.cuts_without_link


def single_link_report(n: int) -> SingleLinkReport:
    """Effect of one mid-network interlink on the number of 2-cuts.

    Builds the two-chain layout of length n, adds a single vertical link at
    the middle column, and counts size-2 disconnecting sets on both graphs
    by exhaustive enumeration.  The count drops from n^2 toward n^2/2 as n
    grows, i.e. one link roughly halves the leading compromise term.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if 2 * n >= 30:
        raise SizeCapError(f"2n = {2 * n} intermediates exceeds the enumeration cap")
    base = build_mnop([n, n], 0.0)
    column = (n + 1) // 2
    linked = replace(base, edges=base.edges | {(f"p1_{column}", f"p2_{column}")})
    return SingleLinkReport(
        n=n,
        column=column,
        cuts_with_link=count_cuts_bruteforce(linked, 2),
        cuts_without_link=count_cuts_bruteforce(base, 2),
    )


def single_link_factor(n: int) -> float:
    """Ratio of 2-cut counts with and without the single mid-column link."""
    return single_link_report(n).ratio


@dataclass(frozen=True)
class FigureRow:
    n: int
    l: int
    log10_p_min: float
    log10_p_max: float
    log10_width: float  # positive exactly when the window is nonempty


def figure_data(r: float = 0.1, n_max: int = 100, l_max: int = 10) -> list[FigureRow]:
    """Grid of admissible-p windows over n in [5, n_max], l in [2, l_max]."""
    rows = []
    for l in range(2, l_max + 1):
        for n in range(5, n_max + 1):
            window = p_range(n, l, r)
            lo = math.log10(window.p_min)
            hi = math.log10(window.p_max)
            rows.append(FigureRow(n=n, l=l, log10_p_min=lo, log10_p_max=hi, log10_width=hi - lo))
    return rows


def figure_csv(rows) -> str:
    lines = ["n,l,log10_p_min,log10_p_max,log10_width"]
    for row in rows:
        lines.append(
            f"{row.n},{row.l},{row.log10_p_min:.6g},{row.log10_p_max:.6g},{row.log10_width:.6g}"
        )
    return "\n".join(lines) + "\n"
