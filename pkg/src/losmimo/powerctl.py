"""Target-SINR power control and max-min fairness.

Every scheme/link pair reduces to a KL x KL linear system
(D - diag(zeta) C) eta = zeta, with D diagonal and C nonnegative; a target
vector is achievable iff the solution is elementwise nonnegative and each
cell's power norm (1-norm downlink, inf-norm uplink) is at most 1.
Stacking is cell-major: index j = l*K + k.
"""

from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelSet
from .linproc import (
    DOWNLINK,
    MR,
    UPLINK,
    ZF,
    PowerAllocation,
    evaluate_sinr,
    gram_inverse,
)

RESIDUAL_TOL = 1e-8
NEG_SLACK = 1e-12
NORM_SLACK = 1e-9


@dataclass(frozen=True)
class PcSystem:
    d: np.ndarray  # (KL,) diagonal of D, positive
    c: np.ndarray  # (KL, KL) nonnegative
    scheme: str
    link: str
    rho: float
    cells: int
    users_per_cell: int

    @property
    def norm_kind(self) -> float:
        return 1 if self.link == DOWNLINK else np.inf


@dataclass(frozen=True)
class PcSolution:
    eta: np.ndarray  # (KL,) clamped to >= 0
    feasible: bool
    reason: str | None  # None | "singular" | "constraint"
    per_cell_norms: np.ndarray  # (L,)
    achieved: np.ndarray  # (KL,) D eta / (1 + C eta)

    def allocation(self, system: PcSystem) -> PowerAllocation:
        kind = "total" if system.link == DOWNLINK else "individual"
        return PowerAllocation(
            eta=self.eta.reshape(system.cells, system.users_per_cell), kind=kind
        )


@dataclass(frozen=True)
class MaxminResult:
    target: float  # largest feasible common SINR target (linear)
    solution: PcSolution
    trace: list = field(default_factory=list)  # (probed target, feasible) pairs


def build_pc_system(channels: ChannelSet, scheme: str, link: str, rho: float) -> PcSystem:
    """Construct D and C for one of the four scheme/link pairs."""
    cells = channels.cell_count
    users = channels.users_per_cell
    n = cells * users
    c = np.zeros((n, n))

    if scheme == MR:
        v = np.concatenate(
            [np.linalg.norm(channels.serving(l), axis=0) ** 2 for l in range(cells)]
        )
        for l in range(cells):
            rows = slice(l * users, (l + 1) * users)
            for lp in range(cells):
                cols = slice(lp * users, (lp + 1) * users)
                if link == DOWNLINK:
                    # entry: |<g (l,k)->BS lp, g (lp,k')->BS lp>|^2 / ||g (lp,k')||^2
                    block = channels.matrices[lp, l].conj().T @ channels.matrices[lp, lp]
                    if lp == l:
                        np.fill_diagonal(block, 0.0)
                    c[rows, cols] = np.abs(block) ** 2 / v[cols][None, :]
                else:
                    # entry: |<g (l,k)->BS l, g (lp,k')->BS l>|^2 / ||g (l,k)||^2
                    block = channels.serving(l).conj().T @ channels.matrices[l, lp]
                    if lp == l:
                        np.fill_diagonal(block, 0.0)
                    c[rows, cols] = np.abs(block) ** 2 / v[rows][:, None]
    elif scheme == ZF:
        igrams = [gram_inverse(channels.serving(l)) for l in range(cells)]
        v = np.concatenate([1.0 / np.real(np.diag(ig)) for ig in igrams])
        for l in range(cells):
            rows = slice(l * users, (l + 1) * users)
            for lp in range(cells):
                if lp == l:
                    continue  # ZF diagonal blocks are exactly zero
                cols = slice(lp * users, (lp + 1) * users)
                if link == DOWNLINK:
                    # |B_l^{lp}|^2 transposed, times the target cell's v
                    b = igrams[lp] @ channels.matrices[lp, lp].conj().T @ channels.matrices[lp, l]
                    c[rows, cols] = (np.abs(b).T ** 2) * v[cols][None, :]
                else:
                    b = igrams[l] @ channels.serving(l).conj().T @ channels.matrices[l, lp]
                    c[rows, cols] = v[rows][:, None] * np.abs(b) ** 2
    else:
        raise ValueError(f"unknown scheme {scheme!r}")

    return PcSystem(
        d=rho * v, c=rho * c, scheme=scheme, link=link, rho=rho,
        cells=cells, users_per_cell=users,
    )


def _per_cell_norms(eta: np.ndarray, system: PcSystem) -> np.ndarray:
    per_cell = eta.reshape(system.cells, system.users_per_cell)
    if system.link == DOWNLINK:
        return np.sum(per_cell, axis=1)
    return np.max(per_cell, axis=1)


def solve_targets(system: PcSystem, targets: np.ndarray) -> PcSolution:
    """Solve (D - diag(zeta) C) eta = zeta and check admissibility."""
    zeta = np.asarray(targets, dtype=float).ravel()
    n = len(system.d)
    if len(zeta) != n:
        raise ValueError(f"expected {n} targets, got {len(zeta)}")
    a = np.diag(system.d) - zeta[:, None] * system.c
    try:
        eta = np.linalg.solve(a, zeta)
    except np.linalg.LinAlgError:
        eta = np.zeros(n)
        return PcSolution(eta=eta, feasible=False, reason="singular",
                          per_cell_norms=_per_cell_norms(eta, system),
                          achieved=np.zeros(n))
    residual = np.linalg.norm(a @ eta - zeta) / max(np.linalg.norm(zeta), 1.0)
    if not np.all(np.isfinite(eta)) or residual > RESIDUAL_TOL:
        eta = np.zeros(n)
        return PcSolution(eta=eta, feasible=False, reason="singular",
                          per_cell_norms=_per_cell_norms(eta, system),
                          achieved=np.zeros(n))
    ok = bool(np.min(eta) >= -NEG_SLACK)
    eta = np.clip(eta, 0.0, None)
    norms = _per_cell_norms(eta, system)
    ok = ok and bool(np.all(norms <= 1.0 + NORM_SLACK))
    achieved = system.d * eta / (1.0 + system.c @ eta)
    return PcSolution(eta=eta, feasible=ok, reason=None if ok else "constraint",
                      per_cell_norms=norms, achieved=achieved)


def maxmin_common_target(
    channels: ChannelSet, scheme: str, link: str, rho: float, rel_tol: float = 1e-6
) -> MaxminResult:
    """Largest feasible common SINR target by bisection.

    Upper bound: the best interference-free SINR (max diagonal of D at full
    power), which no common target can exceed.
    """
    system = build_pc_system(channels, scheme, link, rho)
    n = len(system.d)
    trace: list[tuple[float, bool]] = []

    def probe(target: float) -> PcSolution:
        sol = solve_targets(system, np.full(n, target))
        trace.append((target, sol.feasible))
        return sol

    hi = float(np.max(system.d))
    sol = probe(hi)
    if sol.feasible:
        return MaxminResult(target=hi, solution=sol, trace=trace)
    lo = 0.0
    best = solve_targets(system, np.zeros(n))
    while hi - lo > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        sol = probe(mid)
        if sol.feasible:
            lo, best = mid, sol
        else:
            hi = mid
    return MaxminResult(target=lo, solution=best, trace=trace)


def single_cell_zf_maxmin_dl(serving: np.ndarray, rho_d: float) -> tuple[np.ndarray, float]:
    """Single-cell ZF downlink max-min: eta_k proportional to the inverse
    Gram diagonal, total power 1; every user gets the same SINR."""
    d = np.real(np.diag(gram_inverse(serving)))
    total = float(np.sum(d))
    return d / total, rho_d / total


def single_cell_zf_maxmin_ul(serving: np.ndarray, rho_u: float) -> tuple[np.ndarray, float]:
    """Single-cell ZF uplink max-min: the worst user transmits at full
    power; every user gets the same SINR."""
    d = np.real(np.diag(gram_inverse(serving)))
    peak = float(np.max(d))
    return d / peak, rho_u / peak


def evaluate_allocation(
    channels: ChannelSet, system: PcSystem, solution: PcSolution
) -> np.ndarray:
    """Closed-form SINRs (flat, cell-major) for a solved allocation."""
    report = evaluate_sinr(
        channels, system.scheme, system.link, solution.allocation(system), system.rho
    )
    return report.values.ravel()
