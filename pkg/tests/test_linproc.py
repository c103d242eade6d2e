import numpy as np
import pytest

from losmimo import (
    ChannelSet,
    DegenerateChannelError,
    SingularChannelError,
    dl_allocation,
    evaluate_sinr,
    mr_dl_sinr,
    mr_precoder,
    mr_ul_sinr,
    ul_allocation,
    zf_dl_sinr,
    zf_precoder,
    zf_ul_sinr,
)
from losmimo.linproc import PowerAllocation

from conftest import random_channel_set


def _random_matrix(rng, antennas=16, users=4):
    return (rng.standard_normal((antennas, users)) + 1j * rng.standard_normal((antennas, users))) / np.sqrt(2 * antennas)


class TestAllocations:
    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            dl_allocation(np.array([[0.5, -0.1]]))

    def test_rejects_norm_violation(self):
        with pytest.raises(ValueError):
            dl_allocation(np.array([[0.7, 0.7]]))  # 1-norm > 1
        with pytest.raises(ValueError):
            ul_allocation(np.array([[1.2, 0.3]]))  # inf-norm > 1

    def test_ul_total_above_one_allowed(self):
        alloc = ul_allocation(np.array([[1.0, 1.0, 1.0]]))
        assert np.allclose(alloc.per_cell_norms(), 1.0)

    def test_kind_mismatch(self, rng):
        cs = random_channel_set(rng)
        ul = ul_allocation(np.ones((2, 3)))
        with pytest.raises(ValueError):
            mr_dl_sinr(cs, ul, 10.0)
        dl = dl_allocation(np.full((2, 3), 0.2))
        with pytest.raises(ValueError):
            zf_ul_sinr(cs, dl, 10.0)


class TestPrecoders:
    def test_mr_single_user(self, rng):
        g = _random_matrix(rng, users=1)
        p = mr_precoder(g, np.array([1.0]))
        assert np.allclose(p.matrix[:, 0], g[:, 0].conj() / np.linalg.norm(g))
        assert np.linalg.norm(p.matrix) ** 2 == pytest.approx(1.0, rel=1e-12)

    def test_mr_zero_power(self, rng):
        g = _random_matrix(rng)
        p = mr_precoder(g, np.zeros(4))
        assert np.all(p.matrix == 0)

    def test_mr_zero_column_raises(self, rng):
        g = _random_matrix(rng)
        g[:, 2] = 0
        with pytest.raises(DegenerateChannelError):
            mr_precoder(g, np.full(4, 0.25))

    @pytest.mark.parametrize("factory", [mr_precoder, zf_precoder])
    def test_power_identity(self, rng, factory):
        # E(||s||^2) = ||P||_F^2 = ||eta||_1 for unit-variance symbols
        for _ in range(20):
            g = _random_matrix(rng)
            eta = rng.uniform(0, 0.25, 4)
            p = factory(g, eta)
            assert np.linalg.norm(p.matrix) ** 2 == pytest.approx(np.sum(eta), rel=1e-12)

    def test_zf_nulling(self, rng):
        for _ in range(20):
            g = _random_matrix(rng)
            eta = rng.uniform(0.01, 0.25, 4)
            p = zf_precoder(g, eta)
            crosstalk = g.T @ p.matrix
            diag = np.abs(np.diag(crosstalk))
            off = np.abs(crosstalk - np.diag(np.diag(crosstalk)))
            assert np.max(off) < 1e-10 * np.min(diag)

    def test_zf_diagonal_value(self, rng):
        g = _random_matrix(rng)
        eta = rng.uniform(0.01, 0.25, 4)
        p = zf_precoder(g, eta)
        igram = np.linalg.inv(g.conj().T @ g)
        expected = np.sqrt(eta / np.real(np.diag(igram)))
        assert np.allclose(np.diag(g.T @ p.matrix), expected, rtol=1e-10)

    def test_zf_equals_mr_for_orthogonal_columns(self, rng):
        q, _ = np.linalg.qr(_random_matrix(rng, 16, 4))
        g = q * rng.uniform(0.5, 2.0, 4)[None, :]
        eta = rng.uniform(0.01, 0.25, 4)
        assert np.allclose(zf_precoder(g, eta).matrix, mr_precoder(g, eta).matrix, atol=1e-12)

    def test_zf_single_user_equals_mr(self, rng):
        g = _random_matrix(rng, users=1)
        eta = np.array([0.7])
        assert np.allclose(zf_precoder(g, eta).matrix, mr_precoder(g, eta).matrix)

    def test_zf_rank_deficient_raises(self, rng):
        g = _random_matrix(rng)
        g[:, 1] = g[:, 0]
        with pytest.raises(SingularChannelError):
            zf_precoder(g, np.full(4, 0.25))
        with pytest.raises(SingularChannelError):
            zf_precoder(_random_matrix(rng, antennas=3, users=4), np.full(4, 0.25))


class TestClosedFormDegenerateCases:
    def test_single_user_single_cell(self, rng):
        cs = random_channel_set(rng, cells=1, users=1)
        g = cs.serving(0)[:, 0]
        rho = 15.0
        dl = dl_allocation(np.array([[0.8]]))
        ul = ul_allocation(np.array([[0.6]]))
        expected_dl = rho * 0.8 * np.linalg.norm(g) ** 2
        expected_ul = rho * 0.6 * np.linalg.norm(g) ** 2
        assert mr_dl_sinr(cs, dl, rho).values[0, 0] == pytest.approx(expected_dl, rel=1e-12)
        assert zf_dl_sinr(cs, dl, rho).values[0, 0] == pytest.approx(expected_dl, rel=1e-12)
        assert mr_ul_sinr(cs, ul, rho).values[0, 0] == pytest.approx(expected_ul, rel=1e-12)
        assert zf_ul_sinr(cs, ul, rho).values[0, 0] == pytest.approx(expected_ul, rel=1e-12)

    def test_orthogonal_channels_no_intra_interference(self, rng):
        q, _ = np.linalg.qr(_random_matrix(rng, 16, 4))
        cs = ChannelSet(matrices=q[None, None], wavelength=0.005)
        rho = 30.0
        eta = rng.uniform(0.01, 0.25, (1, 4))
        report = mr_dl_sinr(cs, dl_allocation(eta), rho)
        expected = rho * eta[0] * np.linalg.norm(q, axis=0) ** 2
        assert np.allclose(report.values[0], expected, rtol=1e-10)

    def test_mr_ul_single_active_user(self, rng):
        cs = random_channel_set(rng, cells=1, users=3)
        eta = np.zeros((1, 3))
        eta[0, 1] = 1.0
        rho = 12.0
        g = cs.serving(0)[:, 1]
        report = mr_ul_sinr(cs, ul_allocation(eta), rho)
        # only noise in the denominator for the active user
        assert report.values[0, 1] == pytest.approx(rho * np.linalg.norm(g) ** 2, rel=1e-12)

    def test_mr_zf_agree_for_orthogonal_single_cell(self, rng):
        q, _ = np.linalg.qr(_random_matrix(rng, 16, 4))
        g = q * rng.uniform(0.5, 2.0, 4)[None, :]
        cs = ChannelSet(matrices=g[None, None], wavelength=0.005)
        rho = 25.0
        dl = dl_allocation(rng.uniform(0.01, 0.25, (1, 4)))
        ul = ul_allocation(rng.uniform(0.1, 1.0, (1, 4)))
        assert np.allclose(mr_dl_sinr(cs, dl, rho).values, zf_dl_sinr(cs, dl, rho).values, rtol=1e-10)
        assert np.allclose(mr_ul_sinr(cs, ul, rho).values, zf_ul_sinr(cs, ul, rho).values, rtol=1e-10)


class TestClosedFormProperties:
    @pytest.mark.parametrize("scheme,link", [("MR", "DL"), ("MR", "UL"), ("ZF", "DL"), ("ZF", "UL")])
    def test_interferer_power_monotonicity(self, rng, scheme, link):
        cs = random_channel_set(rng, cells=2, users=3)
        rho = 10.0
        make = dl_allocation if link == "DL" else ul_allocation
        base = rng.uniform(0.05, 0.15, (2, 3)) if link == "DL" else rng.uniform(0.2, 0.5, (2, 3))
        lo = evaluate_sinr(cs, scheme, link, make(base), rho).values
        bumped = base.copy()
        bumped[1, 2] *= 1.5
        hi = evaluate_sinr(cs, scheme, link, make(bumped), rho).values
        mask = np.ones((2, 3), dtype=bool)
        mask[1, 2] = False
        assert np.all(hi[mask] <= lo[mask] + 1e-12)

    @pytest.mark.parametrize("scheme,link", [("MR", "DL"), ("MR", "UL"), ("ZF", "DL"), ("ZF", "UL")])
    def test_scale_covariance(self, rng, scheme, link):
        # scaling all channels by c is the same as scaling rho by |c|^2
        cs = random_channel_set(rng, cells=2, users=3)
        c = 0.37
        scaled = ChannelSet(matrices=c * cs.matrices, wavelength=cs.wavelength)
        rho = 40.0
        make = dl_allocation if link == "DL" else ul_allocation
        alloc = make(rng.uniform(0.05, 0.2, (2, 3)))
        direct = evaluate_sinr(scaled, scheme, link, alloc, rho).values
        equivalent = evaluate_sinr(cs, scheme, link, alloc, rho * c**2).values
        assert np.allclose(direct, equivalent, rtol=1e-12)

    def test_mr_dl_brute_force_oracle(self, rng):
        # explicit loop evaluation of the SP/(NP+IP+OP) form
        cs = random_channel_set(rng, cells=3, users=2, antennas=8)
        rho = 17.0
        eta = rng.uniform(0.05, 0.3, (3, 2))
        report = mr_dl_sinr(cs, dl_allocation(eta), rho)
        for l in range(3):
            for k in range(2):
                g_own = cs.matrices[l, l][:, k]
                sp = rho * eta[l, k] * np.linalg.norm(g_own) ** 2
                denom = 1.0
                for kp in range(2):
                    if kp == k:
                        continue
                    gp = cs.matrices[l, l][:, kp]
                    denom += rho * eta[l, kp] * abs(g_own.conj() @ gp) ** 2 / np.linalg.norm(gp) ** 2
                for lp in range(3):
                    if lp == l:
                        continue
                    g_cross = cs.matrices[lp, l][:, k]
                    for kp in range(2):
                        gp = cs.matrices[lp, lp][:, kp]
                        denom += rho * eta[lp, kp] * abs(g_cross.conj() @ gp) ** 2 / np.linalg.norm(gp) ** 2
                assert report.values[l, k] == pytest.approx(sp / denom, rel=1e-12)

    def test_mr_ul_brute_force_oracle(self, rng):
        cs = random_channel_set(rng, cells=3, users=2, antennas=8)
        rho = 9.0
        eta = rng.uniform(0.1, 1.0, (3, 2))
        report = mr_ul_sinr(cs, ul_allocation(eta), rho)
        for l in range(3):
            for k in range(2):
                g_own = cs.matrices[l, l][:, k]
                n2 = np.linalg.norm(g_own) ** 2
                acc = 0.0
                for lp in range(3):
                    for kp in range(2):
                        if lp == l and kp == k:
                            continue
                        acc += eta[lp, kp] * abs(g_own.conj() @ cs.matrices[l, lp][:, kp]) ** 2
                expected = rho * eta[l, k] * n2 / (1 + rho / n2 * acc)
                assert report.values[l, k] == pytest.approx(expected, rel=1e-12)

    def test_zf_ul_brute_force_oracle(self, rng):
        cs = random_channel_set(rng, cells=2, users=3, antennas=12)
        rho = 11.0
        eta = rng.uniform(0.1, 1.0, (2, 3))
        report = zf_ul_sinr(cs, ul_allocation(eta), rho)
        for l in range(2):
            g = cs.matrices[l, l]
            igram = np.linalg.inv(g.conj().T @ g)
            for k in range(3):
                op = 0.0
                for lp in range(2):
                    if lp == l:
                        continue
                    b = igram @ g.conj().T @ cs.matrices[l, lp]
                    for kp in range(3):
                        op += abs(b[k, kp]) ** 2 * eta[lp, kp]
                expected = rho * eta[l, k] / (np.real(igram[k, k]) + rho * op)
                assert report.values[l, k] == pytest.approx(expected, rel=1e-12)

    def test_zf_dl_brute_force_oracle(self, rng):
        cs = random_channel_set(rng, cells=2, users=3, antennas=12)
        rho = 13.0
        eta = rng.uniform(0.05, 0.3, (2, 3))
        report = zf_dl_sinr(cs, dl_allocation(eta), rho)
        for l in range(2):
            g_own = cs.matrices[l, l]
            igram_own = np.linalg.inv(g_own.conj().T @ g_own)
            for k in range(3):
                op = 0.0
                for lp in range(2):
                    if lp == l:
                        continue
                    g_int = cs.matrices[lp, lp]
                    igram = np.linalg.inv(g_int.conj().T @ g_int)
                    row = cs.matrices[lp, l][:, k].conj() @ g_int @ igram
                    for kp in range(3):
                        op += abs(row[kp]) ** 2 / np.real(igram[kp, kp]) * eta[lp, kp]
                expected = rho * eta[l, k] / ((1 + rho * op) * np.real(igram_own[k, k]))
                assert report.values[l, k] == pytest.approx(expected, rel=1e-12)
