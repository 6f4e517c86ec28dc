"""Two-phase power budget: split, cluster size, feasibility, alpha search."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

from .outage import OutageConfig, OutageEstimate, monte_carlo_outage


class InfeasibleAllocationError(ValueError):
    """Raised when a power allocation cannot satisfy the broadcast bound."""


@dataclass(frozen=True)
class PowerAllocation:
    """Split of the total budget across the two transmission phases.

    p1 = alpha * p_total funds the intra-cluster broadcast, p2 the
    beamforming phase; they sum to p_total exactly.  k is the cluster size
    implied by alpha (None until cluster_size has been applied).
    """

    p_total: float
    alpha: float
    p1: float
    p2: float
    k: Optional[int] = None


@dataclass(frozen=True)
class BroadcastSpec:
    """Intra-cluster broadcast parameters: rate, noise variance, per-node power."""

    r_br: float = 2.0
    sigma_nbr2: float = 1.0
    p_s: float = 4.0

    def __post_init__(self):
        if self.r_br <= 0 or self.sigma_nbr2 <= 0 or self.p_s <= 0:
            raise ValueError("r_br, sigma_nbr2 and p_s must all be positive")


def split(p_total: float, alpha: float) -> PowerAllocation:
    """Split p_total into phase powers p1 = alpha*p_total, p2 = rest."""
    if p_total <= 0:
        raise ValueError("p_total must be positive")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    p1 = alpha * p_total
    p2 = p_total - p1
    # recompute p1 as the residual so the two phases recover the budget
    # exactly; a plain alpha*p_total can land one rounding step off
    p1 = p_total - p2
    if p1 + p2 != p_total:
        p2 = p_total - p1
    return PowerAllocation(p_total=p_total, alpha=alpha, p1=p1, p2=p2)


def cluster_size(alpha: float, p_total: float, p_s: float) -> int:
    """Number of cluster nodes K = alpha * p_total / p_s, rounded.

    Rounds half away from zero to the nearest integer (the quoted cluster
    sizes imply e.g. 4.5 -> 5), with a minimum of 1; a raw value below 0.5
    cannot support even one node and raises InfeasibleAllocationError.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    if p_total <= 0 or p_s <= 0:
        raise ValueError("p_total and p_s must be positive")
    raw = alpha * p_total / p_s
    k = math.floor(raw + 0.5)
    if k < 1:
        raise InfeasibleAllocationError(
            f"alpha*p_total/p_s = {raw:.4g} rounds to zero nodes"
        )
    return k


def broadcast_power_bound(k: int, spec: BroadcastSpec) -> float:
    """Minimum broadcast-phase power: K * (2^r_br - 1) * sigma_nbr2."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return k * (2.0 ** spec.r_br - 1.0) * spec.sigma_nbr2


def broadcast_feasible(p1: float, k: int, spec: BroadcastSpec) -> bool:
    """True iff p1 covers the broadcast bound (phase then modeled error-free)."""
    return p1 >= broadcast_power_bound(k, spec)


def optimize_alpha(grid: Sequence[float], p_total: float, p_s: float, m: int,
                   r_tr: float, sigma_n2: float, trials: int, seed: int,
                   spec: Optional[BroadcastSpec] = None,
                   gain_mode: str = "frobenius", workers: int = 1) -> dict:
    """Grid-search the power split minimizing Monte Carlo outage.

    For each alpha the cluster size K and phase powers follow from the
    budget; infeasible grid points (broadcast bound unmet) are skipped with
    a warning.  Ties break toward smaller alpha, which spends less broadcast
    power.  Returns alpha_star, k_star, p_out_star and the full (alpha, K,
    estimate) curve in ascending-alpha order.
    """
    if len(grid) == 0:
        raise ValueError("alpha grid must be nonempty")
    if spec is None:
        spec = BroadcastSpec(p_s=p_s)
    curve: list[tuple[float, int, OutageEstimate]] = []
    for i, alpha in enumerate(sorted(grid)):
        alloc = split(p_total, alpha)
        k = cluster_size(alpha, p_total, p_s)
        if not broadcast_feasible(alloc.p1, k, spec):
            warnings.warn(
                f"alpha={alpha:.3g} infeasible: p1={alloc.p1:.4g} < "
                f"bound {broadcast_power_bound(k, spec):.4g}; skipped"
            )
            continue
        cfg = OutageConfig(r_tr=r_tr, p2=alloc.p2, sigma_n2=sigma_n2, m=m,
                           k=k, trials=trials, seed=(seed, i),
                           gain_mode=gain_mode)
        curve.append((alpha, k, monte_carlo_outage(cfg, workers=workers)))
    if not curve:
        raise InfeasibleAllocationError("no feasible alpha on the grid")
    best = min(curve, key=lambda row: (row[2].probability, row[0]))
    assert all(best[2].probability <= row[2].probability for row in curve)
    return {
        "alpha_star": best[0],
        "k_star": best[1],
        "p_out_star": best[2].probability,
        "curve": curve,
    }
