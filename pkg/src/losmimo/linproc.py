"""MR and ZF precoders/decoders and the four closed-form effective SINRs.

All SINRs are linear scale. Notation: for a serving matrix G (M x K), the
Gram matrix is G^H G and its inverse's diagonal governs ZF performance.
"""

from dataclasses import dataclass

import numpy as np

from .channel import ChannelSet
from .errors import DegenerateChannelError, SingularChannelError

COND_LIMIT = 1e12

DOWNLINK = "DL"
UPLINK = "UL"
MR = "MR"
ZF = "ZF"


@dataclass(frozen=True)
class PowerAllocation:
    """Per-cell power-control coefficients.

    Downlink uses a total per-cell constraint (1-norm <= 1), uplink an
    individual per-user constraint (inf-norm <= 1).
    """

    eta: np.ndarray  # (L, K), nonnegative
    kind: str  # "total" (DL) or "individual" (UL)

    def __post_init__(self):
        eta = np.asarray(self.eta, dtype=float)
        object.__setattr__(self, "eta", eta)
        if self.kind not in ("total", "individual"):
            raise ValueError(f"unknown constraint kind {self.kind!r}")
        if np.any(eta < 0):
            raise ValueError("power coefficients must be nonnegative")
        norms = self.per_cell_norms()
        if np.any(norms > 1.0 + 1e-9):
            raise ValueError(f"per-cell power constraint violated: norms {norms}")

    def per_cell_norms(self) -> np.ndarray:
        if self.kind == "total":
            return np.sum(self.eta, axis=1)
        return np.max(self.eta, axis=1) if self.eta.size else np.zeros(len(self.eta))


def dl_allocation(eta: np.ndarray) -> PowerAllocation:
    return PowerAllocation(eta=np.atleast_2d(eta), kind="total")


def ul_allocation(eta: np.ndarray) -> PowerAllocation:
    return PowerAllocation(eta=np.atleast_2d(eta), kind="individual")


@dataclass(frozen=True)
class Precoder:
    matrix: np.ndarray  # (M, K)
    scheme: str
    cell: int


@dataclass(frozen=True)
class SinrReport:
    values: np.ndarray  # (L, K), linear scale
    scheme: str
    link: str


def gram_inverse(serving: np.ndarray) -> np.ndarray:
    """Inverse of G^H G with a rank-deficiency guard."""
    if serving.shape[1] > serving.shape[0]:
        raise SingularChannelError(
            f"need K <= M for ZF, got K={serving.shape[1]}, M={serving.shape[0]}"
        )
    gram = serving.conj().T @ serving
    if np.linalg.cond(gram) > COND_LIMIT:
        raise SingularChannelError("channel Gram matrix is rank deficient")
    return np.linalg.inv(gram)


def mr_precoder(serving: np.ndarray, eta: np.ndarray, cell: int = 0) -> Precoder:
    """Column k: conj(g_k) * sqrt(eta_k) / ||g_k||. Transmit power = sum(eta)."""
    norms = np.linalg.norm(serving, axis=0)
    if np.any(norms == 0):
        raise DegenerateChannelError("zero channel column")
    matrix = serving.conj() * (np.sqrt(np.asarray(eta, dtype=float)) / norms)[None, :]
    return Precoder(matrix=matrix, scheme=MR, cell=cell)


def zf_precoder(serving: np.ndarray, eta: np.ndarray, cell: int = 0) -> Precoder:
    """Zero-forcing precoder: G^T times it is diagonal with entries
    sqrt(eta_k / [(G^H G)^-1]_kk); transmit power = sum(eta)."""
    igram = gram_inverse(serving)
    d = np.real(np.diag(igram))
    scale = np.sqrt(np.asarray(eta, dtype=float) / d)
    matrix = (serving.conj() @ igram.conj()) * scale[None, :]
    return Precoder(matrix=matrix, scheme=ZF, cell=cell)


def _check_kind(alloc: PowerAllocation, link: str) -> None:
    want = "total" if link == DOWNLINK else "individual"
    if alloc.kind != want:
        raise ValueError(f"{link} needs a {want!r} allocation, got {alloc.kind!r}")


def mr_dl_sinr(channels: ChannelSet, alloc: PowerAllocation, rho_d: float) -> SinrReport:
    """Per-user MR downlink SINR over the full channel set."""
    _check_kind(alloc, DOWNLINK)
    cells = channels.cell_count
    norms2 = np.stack(
        [np.linalg.norm(channels.serving(l), axis=0) ** 2 for l in range(cells)]
    )  # (L, K)
    values = np.empty_like(alloc.eta)
    for l in range(cells):
        num = rho_d * alloc.eta[l] * norms2[l]
        denom = np.ones(channels.users_per_cell)
        for lp in range(cells):
            # cross[k, k'] = <g from (l,k) to BS lp, g from (lp,k') to BS lp>
            cross = channels.matrices[lp, l].conj().T @ channels.matrices[lp, lp]
            contrib = (np.abs(cross) ** 2 / norms2[lp][None, :]) @ alloc.eta[lp]
            if lp == l:
                contrib -= alloc.eta[l] * norms2[l]  # remove the k'=k self term
            denom += rho_d * contrib
        values[l] = num / denom
    return SinrReport(values=values, scheme=MR, link=DOWNLINK)


def mr_ul_sinr(channels: ChannelSet, alloc: PowerAllocation, rho_u: float) -> SinrReport:
    """Per-user MR uplink SINR; cross channels are other-cell users seen at
    the serving base station."""
    _check_kind(alloc, UPLINK)
    cells = channels.cell_count
    values = np.empty_like(alloc.eta)
    for l in range(cells):
        own = channels.serving(l)
        norms2 = np.linalg.norm(own, axis=0) ** 2
        interf = np.zeros(channels.users_per_cell)
        for lp in range(cells):
            cross = own.conj().T @ channels.matrices[l, lp]
            contrib = (np.abs(cross) ** 2) @ alloc.eta[lp]
            if lp == l:
                contrib -= alloc.eta[l] * norms2**2
            interf += contrib
        values[l] = rho_u * alloc.eta[l] * norms2 / (1.0 + rho_u * interf / norms2)
    return SinrReport(values=values, scheme=MR, link=UPLINK)


def zf_dl_sinr(channels: ChannelSet, alloc: PowerAllocation, rho_d: float) -> SinrReport:
    """Per-user ZF downlink SINR; intra-cell interference is nulled, other
    cells leak through their own ZF precoders."""
    _check_kind(alloc, DOWNLINK)
    cells = channels.cell_count
    igrams = [gram_inverse(channels.serving(l)) for l in range(cells)]
    dinv = np.stack([np.real(np.diag(ig)) for ig in igrams])  # (L, K)
    values = np.empty_like(alloc.eta)
    for l in range(cells):
        op = np.zeros(channels.users_per_cell)
        for lp in range(cells):
            if lp == l:
                continue
            # rows k: (g from (l,k) to BS lp)^H G_lp (G_lp^H G_lp)^-1
            leak = channels.matrices[lp, l].conj().T @ channels.matrices[lp, lp] @ igrams[lp]
            op += (np.abs(leak) ** 2 / dinv[lp][None, :]) @ alloc.eta[lp]
        values[l] = rho_d * alloc.eta[l] / ((1.0 + rho_d * op) * dinv[l])
    return SinrReport(values=values, scheme=ZF, link=DOWNLINK)


def zf_ul_sinr(channels: ChannelSet, alloc: PowerAllocation, rho_u: float) -> SinrReport:
    """Per-user ZF uplink SINR with decoded other-cell leakage B-matrices."""
    _check_kind(alloc, UPLINK)
    cells = channels.cell_count
    values = np.empty_like(alloc.eta)
    for l in range(cells):
        igram = gram_inverse(channels.serving(l))
        dinv = np.real(np.diag(igram))
        decode = igram @ channels.serving(l).conj().T  # (K, M)
        op = np.zeros(channels.users_per_cell)
        for lp in range(cells):
            if lp == l:
                continue
            b = decode @ channels.matrices[l, lp]
            op += (np.abs(b) ** 2) @ alloc.eta[lp]
        values[l] = rho_u * alloc.eta[l] / (dinv + rho_u * op)
    return SinrReport(values=values, scheme=ZF, link=UPLINK)


_SINR_FUNCS = {
    (MR, DOWNLINK): mr_dl_sinr,
    (MR, UPLINK): mr_ul_sinr,
    (ZF, DOWNLINK): zf_dl_sinr,
    (ZF, UPLINK): zf_ul_sinr,
}


def evaluate_sinr(
    channels: ChannelSet, scheme: str, link: str, alloc: PowerAllocation, rho: float
) -> SinrReport:
    """Dispatch to the closed form for (scheme, link)."""
    try:
        func = _SINR_FUNCS[(scheme, link)]
    except KeyError:
        raise ValueError(f"unknown scheme/link combination ({scheme}, {link})") from None
    return func(channels, alloc, rho)
