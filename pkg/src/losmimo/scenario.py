"""End-to-end pipeline: geometry -> channels -> power control -> CDF data.

Reproduces the published experiment's data product: per-user SINR CDFs for
system-wide max-min power control ("MR DL", "MR UL", "ZF DL", "ZF UL") plus
the center cell's users under per-cell single-cell ZF max-min evaluated with
the full multi-cell formulas ("ZF DL-1", "ZF UL-1").
"""

import csv
import logging
from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelSet, build_channel_set, link_budget, wavelength_m
from .config import ScenarioConfig
from .errors import SingularChannelError
from .geometry import circular_array, drop_users, hex_centers
from .linproc import DOWNLINK, UPLINK, ZF, dl_allocation, ul_allocation, zf_dl_sinr, zf_ul_sinr
from .mcsim import simulate_dl, simulate_ul
from .powerctl import maxmin_common_target, single_cell_zf_maxmin_dl, single_cell_zf_maxmin_ul

log = logging.getLogger(__name__)

CENTER_CELL = 0
MAX_RESAMPLES = 100


@dataclass
class CdfTable:
    """Sorted per-series SINR samples in dB with empirical probabilities."""

    series: dict[str, np.ndarray] = field(default_factory=dict)

    def add(self, name: str, values_db: np.ndarray) -> None:
        prev = self.series.get(name)
        stacked = values_db if prev is None else np.concatenate([prev, values_db])
        self.series[name] = stacked

    def finalize(self) -> None:
        self.series = {name: np.sort(vals) for name, vals in self.series.items()}

    def rows(self):
        for name in self.series:
            vals = self.series[name]
            n = len(vals)
            for i, v in enumerate(vals):
                yield name, v, (i + 1) / n

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["series", "sinr_db", "cdf"])
            for name, v, p in self.rows():
                writer.writerow([name, repr(float(v)), repr(float(p))])


def _to_db(values: np.ndarray) -> np.ndarray:
    return 10.0 * np.log10(np.clip(values, 1e-300, None))


def build_drop_channels(cfg: ScenarioConfig, seed: int) -> ChannelSet:
    """One drop's full channel set from scenario parameters."""
    wl = wavelength_m(cfg.carrier_ghz)
    layout = hex_centers(cfg.cells, cfg.cell_radius_m)
    arrays = [
        circular_array(cfg.antennas_per_cell, wl, cfg.bs_array_height_m, center)
        for center in layout.centers
    ]
    drop = drop_users(layout, cfg.users_per_cell, cfg.min_bs_distance_m, cfg.user_height_m, seed)
    return build_channel_set(layout, arrays, drop, wl)


def run_scenario(cfg: ScenarioConfig) -> tuple[CdfTable, dict]:
    """Run all configured drops and aggregate per-user SINRs into CDF series.

    Drops that hit a rank-deficient ZF Gram matrix are re-sampled with a
    fresh derived seed and counted in the summary.
    """
    cfg.validate()
    budget = link_budget(
        cfg.carrier_ghz, cfg.bandwidth_hz, cfg.bs_power_w, cfg.mobile_power_w,
        cfg.bs_noise_figure_db, cfg.mobile_noise_figure_db,
    )
    rho = {DOWNLINK: budget.rho_dl, UPLINK: budget.rho_ul}
    combos = [(s, li) for s in cfg.scheme_list() for li in cfg.link_list()]
    single_cell = cfg.single_cell_series and "ZF" in cfg.scheme_list()

    seed_stream = np.random.default_rng(cfg.seed)
    table = CdfTable()
    resampled = 0
    completed = 0
    while completed < cfg.drops:
        drop_seed = int(seed_stream.integers(2**63))
        try:
            channels = build_drop_channels(cfg, drop_seed)
            drop_series: dict[str, np.ndarray] = {}
            for scheme, link in combos:
                result = maxmin_common_target(channels, scheme, link, rho[link])
                drop_series[f"{scheme} {link}"] = _to_db(result.solution.achieved)
            if single_cell:
                eta_dl = np.stack(
                    [
                        single_cell_zf_maxmin_dl(channels.serving(l), budget.rho_dl)[0]
                        for l in range(cfg.cells)
                    ]
                )
                eta_ul = np.stack(
                    [
                        single_cell_zf_maxmin_ul(channels.serving(l), budget.rho_ul)[0]
                        for l in range(cfg.cells)
                    ]
                )
                dl = zf_dl_sinr(channels, dl_allocation(eta_dl), budget.rho_dl)
                ul = zf_ul_sinr(channels, ul_allocation(eta_ul), budget.rho_ul)
                drop_series["ZF DL-1"] = _to_db(dl.values[CENTER_CELL])
                drop_series["ZF UL-1"] = _to_db(ul.values[CENTER_CELL])
        except SingularChannelError:
            resampled += 1
            log.warning("rank-deficient drop re-sampled (%d so far)", resampled)
            if resampled > MAX_RESAMPLES:
                raise
            continue
        for name, vals in drop_series.items():
            table.add(name, vals)
        completed += 1
    table.finalize()
    summary = {
        "drops": completed,
        "resampled": resampled,
        "series": {name: len(vals) for name, vals in table.series.items()},
    }
    return table, summary


@dataclass(frozen=True)
class VerificationEntry:
    scheme: str
    link: str
    max_dev_sigma: float


@dataclass(frozen=True)
class VerificationReport:
    entries: list[VerificationEntry]
    threshold: float
    n_symbols: int

    @property
    def passed(self) -> bool:
        return all(e.max_dev_sigma < self.threshold for e in self.entries)


def verify(cfg: ScenarioConfig, n_symbols: int, threshold: float = 5.0) -> VerificationReport:
    """Closed-form vs Monte Carlo agreement over one configured drop.

    Uses uniform admissible allocations (downlink 1/K per user, uplink full
    power) and reports the worst deviation in standard-error units.
    """
    cfg.validate()
    if n_symbols < 2:
        raise ValueError("verification needs n_symbols >= 2 to estimate a standard error")
    budget = link_budget(
        cfg.carrier_ghz, cfg.bandwidth_hz, cfg.bs_power_w, cfg.mobile_power_w,
        cfg.bs_noise_figure_db, cfg.mobile_noise_figure_db,
    )
    channels = build_drop_channels(cfg, cfg.seed)
    shape = (cfg.cells, cfg.users_per_cell)
    alloc = {
        DOWNLINK: dl_allocation(np.full(shape, 1.0 / cfg.users_per_cell)),
        UPLINK: ul_allocation(np.ones(shape)),
    }
    rho = {DOWNLINK: budget.rho_dl, UPLINK: budget.rho_ul}
    sim = {DOWNLINK: simulate_dl, UPLINK: simulate_ul}

    from .linproc import evaluate_sinr

    entries = []
    for scheme in cfg.scheme_list():
        for link in cfg.link_list():
            closed = evaluate_sinr(channels, scheme, link, alloc[link], rho[link])
            result = sim[link](channels, scheme, alloc[link], rho[link], n_symbols, cfg.seed)
            sigma = np.where(result.sinr_stderr > 0, result.sinr_stderr, np.inf)
            dev = float(np.max(np.abs(result.sinr - closed.values) / sigma))
            entries.append(VerificationEntry(scheme=scheme, link=link, max_dev_sigma=dev))
    return VerificationReport(entries=entries, threshold=threshold, n_symbols=n_symbols)
