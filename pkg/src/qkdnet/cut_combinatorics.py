"""Counting A-B vertex cuts in interlinked l-schemes.

Three independent routes to the same quantities live here:

* a closed form and an exact integer-matrix form for the asymptotic number
  of minimal cuts per column, ``alpha_closed`` / ``alpha_matrix``;
* a dynamic program ``count_min_cuts_dp`` for the exact number of minimal
  (size-l) cuts of the (n, l) scheme;
* exhaustive enumeration: ``count_cuts_bruteforce`` for one subset size and
  ``cut_census`` for the full table of disconnecting-subset counts by size.

The census feeds the exact compromise probability (a binomial mixture over
subset sizes) and the empirical validation of the geometric growth bound on
cut counts, which in turn justifies the closed-form upper bound
``hack_prob_upper_bound``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import _bitgraph
from .errors import SizeCapError
from .net_model import LSchemeParams, Network, build_lscheme

ENUMERATION_CAP = 30  # exhaustive routines refuse above this many intermediates


def alpha_closed(l: int) -> float:
    """Asymptotic number of minimal cuts per column of the l-scheme.

    Closed form obtained by diagonalizing the two-term production recursion;
    alpha(1) = 1 by convention (a bare chain has one cut per column).
    """
    if l < 1:
        raise ValueError(f"l must be >= 1, got {l}")
    if l == 1:
        return 1.0
    d = math.sqrt(l * l + 6 * l - 7)
    return ((1 + l + d) ** l - (1 + l - d) ** l) / (2**l * d)


def alpha_matrix(l: int) -> Fraction:
    """Exact rational value of the per-column minimal-cut density.

    Evaluates (1, l-2) M^(l-1) (1, 1)^T / (l-1) in integer arithmetic, where
    M = ((3, 2(l-2)), (2, l-2)) encodes how an interlinked (degree > 2) or
    plain (degree 2) vertex of one row constrains the next row's choices.
    """
    if l < 2:
        raise ValueError(f"l must be >= 2, got {l}")
    a, b = 1, l - 2  # row vector, multiplied through the matrix power
    for _ in range(l - 1):
        a, b = 3 * a + 2 * b, 2 * (l - 2) * a + (l - 2) * b
    return Fraction(a + b, l - 1)


def _transition_window(j: int, n: int, l: int) -> tuple[int, int]:
    """Admissible next-row columns for a cut vertex settled in column j.

    From an interlinked column the next row's vertex may sit up to l-1
    columns away in either direction.  From a plain column it must sit
    between the two interlinked columns bracketing j (they are l-1 apart).
    Windows are clipped to the existing columns 1..n; if the scheme has no
    interlinked column at all the rows are independent chains and the window
    is unrestricted.
    """
    step = l - 1
    if j % step == 0:
        return max(1, j - step), min(n, j + step)
    a = (j // step) * step
    b = a + step
    return max(1, a), min(n, b)


def count_min_cuts_dp(n: int, l: int) -> int:
    """Exact number of minimal (size-l) A-B vertex cuts of the (n, l) scheme.

    A minimal cut takes exactly one vertex per row; a one-per-row selection
    is a cut exactly when every consecutive row pair respects the transition
    window above.  Dynamic programming over rows counts the admissible
    selections in O(n l^2) time with exact integers.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if l < 1:
        raise ValueError(f"l must be >= 1, got {l}")
    if l == 1:
        return n
    windows = [_transition_window(j, n, l) for j in range(1, n + 1)]
    prev = [1] * n
    for _ in range(l - 1):
        cur = [0] * n
        for j, (lo, hi) in enumerate(windows):
            w = prev[j]
            if w:
                for m in range(lo - 1, hi):
                    cur[m] += w
        prev = cur
    return sum(prev)


def count_cuts_bruteforce(net: Network, k: int) -> int:
    """Number of size-k intermediate subsets whose removal disconnects A, B.

    Checks every k-subset in combinadic (lexicographic) order with a bitmask
    reachability test.  Refuses above the enumeration cap; use
    :func:`sample_cut_fraction` to estimate instead.
    """
    bg = _bitgraph.from_network(net)
    m = bg.size
    if m > ENUMERATION_CAP:
        raise SizeCapError(
            f"{m} intermediate nodes exceeds the enumeration cap of {ENUMERATION_CAP}; "
            "use sample_cut_fraction for an estimate"
        )
    if not 0 <= k <= m:
        raise ValueError(f"k must be in [0, {m}], got {k}")
    count = 0
    for combo in combinations(range(m), k):
        mask = 0
        for i in combo:
            mask |= 1 << i
        if not _bitgraph.connected_python(bg, mask):
            count += 1
    return count


def sample_cut_fraction(net: Network, k: int, samples: int, seed: int = 0) -> float:
    """Monte Carlo estimate of the fraction of size-k subsets that are cuts."""
    bg = _bitgraph.from_network(net)
    m = bg.size
    if not 0 <= k <= m:
        raise ValueError(f"k must be in [0, {m}], got {k}")
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    rng = np.random.default_rng(seed)
    hits = 0
    for _ in range(samples):
        mask = 0
        for i in rng.choice(m, size=k, replace=False):
            mask |= 1 << int(i)
        if not _bitgraph.connected_python(bg, mask):
            hits += 1
    return hits / samples


@dataclass(frozen=True)
class CutCensus:
    """Table of disconnecting-subset counts by size.

    ``beta[k]`` is the number of k-subsets of the intermediates whose removal
    disconnects A from B (any superset of a cut counts, so the table is the
    exact ingredient of the binomial compromise-probability mixture).
    """

    size: int
    beta: tuple[int, ...]
    n: int | None = None
    l: int | None = None

    def hack_probability(self, p: float) -> float:
        """Exact compromise probability under uniform per-node probability p."""
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"p out of [0, 1]: {p}")
        q = 1.0 - p
        return sum(b * p**k * q ** (self.size - k) for k, b in enumerate(self.beta) if b)

    def to_csv(self) -> str:
        lines = ["k,beta"]
        lines += [f"{k},{b}" for k, b in enumerate(self.beta)]
        return "\n".join(lines) + "\n"


def cut_census(net: Network, chunk_bits: int = 22) -> CutCensus:
    """Exhaustive census of all 2^m intermediate subsets of a network.

    Enumeration runs over fixed mask ranges that can be processed as
    independent chunks and summed, so results do not depend on scheduling.
    """
    bg = _bitgraph.from_network(net)
    if bg.size > ENUMERATION_CAP:
        raise SizeCapError(
            f"{bg.size} intermediate nodes exceeds the enumeration cap of {ENUMERATION_CAP}; "
            "use sample_cut_fraction for an estimate"
        )
    counts = _bitgraph.census_counts(bg, chunk_bits=chunk_bits)
    return CutCensus(size=bg.size, beta=tuple(int(c) for c in counts))


def lscheme_cut_census(n: int, l: int, chunk_bits: int = 22) -> CutCensus:
    """Census of the (n, l) scheme, tagged with its parameters."""
    base = cut_census(build_lscheme(LSchemeParams(n=n, l=l)), chunk_bits=chunk_bits)
    return CutCensus(size=base.size, beta=base.beta, n=n, l=l)


@dataclass(frozen=True)
class BetaLemmaReport:
    """Outcome of validating the geometric growth bound on cut counts."""

    n: int
    l: int
    census: CutCensus
    chain_ok: bool  # beta(k) <= beta(k-1) * nl for every k-1 >= l
    bound_ok: bool  # beta(k) <= alpha(l) * n * (nl)^(k-l) for every k >= l
    max_ratio: float | None  # max over k of beta(k) / (beta(k-1) * nl)
    max_ratio_k: int | None
    first_ratio: float | None  # the k = l+1 ratio, the one that approaches 1

    @property
    def passed(self) -> bool:
        return self.chain_ok and self.bound_ok

    @property
    def max_at_first_step(self) -> bool:
        """True when the growth ratio peaks right after the minimal size."""
        return self.max_ratio_k == self.l + 1


def verify_beta_lemma(n: int, l: int, census: CutCensus | None = None) -> BetaLemmaReport:
    """Check the two empirical cut-count inequalities on one scheme.

    The chain inequality bounds each census entry by nl times the previous
    one; iterating it from the minimal-cut count gives the geometric bound
    against alpha(l) * n * (nl)^(k-l).  Both are verified exactly in integer
    arithmetic.
    """
    if n * l >= ENUMERATION_CAP:
        raise SizeCapError(f"n*l = {n * l} exceeds the census cap of {ENUMERATION_CAP - 1}")
    if census is None:
        census = lscheme_cut_census(n, l)
    size = census.size
    beta = census.beta
    alpha = alpha_matrix(l) if l >= 2 else Fraction(1)

    chain_ok = all(beta[k] <= beta[k - 1] * size for k in range(l + 1, size + 1))
    bound_ok = all(beta[k] <= alpha * n * size ** (k - l) for k in range(l, size + 1))

    ratios = [(beta[k] / (beta[k - 1] * size), k) for k in range(l + 1, size + 1)]
    if ratios:
        max_ratio = max(r for r, _ in ratios)
        max_ratio_k = min(k for r, k in ratios if r == max_ratio)
        first_ratio = ratios[0][0]
    else:
        max_ratio = max_ratio_k = first_ratio = None
    return BetaLemmaReport(
        n=n,
        l=l,
        census=census,
        chain_ok=chain_ok,
        bound_ok=bound_ok,
        max_ratio=max_ratio,
        max_ratio_k=max_ratio_k,
        first_ratio=first_ratio,
    )


def exact_hack_probability(net: Network, p: float) -> float:
    """Exact compromise probability by exhaustive enumeration.

    Every intermediate falls independently with the same probability p; the
    connection is compromised when the fallen set disconnects A from B.  The
    per-node trust stored on the network is ignored; heterogeneous trust is
    the Monte Carlo estimator's job.
    """
    return cut_census(net).hack_probability(p)


def hack_prob_upper_bound(n: int, l: int, p: float, r: float) -> float:
    """Geometric-series upper bound on the l-scheme compromise probability.

    Valid when n*l*p <= r < 1: the census is dominated term by term by
    alpha(l) * n * (nl)^(k-l), so the binomial mixture is dominated by a
    geometric series with ratio n*l*p, summing to alpha(l)*n*p^l / (1-r).
    """
    if n < 1 or l < 1:
        raise ValueError(f"n and l must be >= 1, got n={n}, l={l}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p out of [0, 1]: {p}")
    if not 0.0 < r < 1.0:
        raise ValueError(f"r must be in (0, 1), got {r}")
    if n * l * p > r:
        raise ValueError(f"precondition n*l*p <= r violated: n*l*p = {n * l * p}, r = {r}")
    return alpha_closed(l) * n * p**l / (1.0 - r)
