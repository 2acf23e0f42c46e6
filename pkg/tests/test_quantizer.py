"""Quantizer cells, probabilities, Fisher information, output coefficients."""

import csv
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from quantest.distributions import (
    Distribution,
    Family,
    FamilyTag,
    ParamKind,
    cauchy,
    cdf,
    continuous_fi,
    gaussian,
    pdf,
)
from quantest.errors import DomainError
from quantest.quantizer import (
    CellProbabilities,
    DegenerateCellWarning,
    Quantizer,
    cell_probs,
    export_cell_table_csv,
    quantize,
    quantized_fi,
    score_coefficients,
)

GGD = FamilyTag.GGD
STD = FamilyTag.STD
LOC = ParamKind.LOCATION
SCA = ParamKind.SCALE


def dist(tag, beta, mu=0.0, delta=1.0):
    return Distribution(Family(tag, beta), mu, delta)


CASES = [
    dist(GGD, 1.5), dist(GGD, 2.0), dist(GGD, 3.0), dist(GGD, 2.0, 1.3, 0.7),
    dist(STD, 1.0), dist(STD, 3.0), dist(STD, 2.5, -0.4, 2.0),
]
FI_CASES = [(d, k) for d in CASES for k in (LOC, SCA)
            if not (d.tag is GGD and d.beta <= 1.0 and k is LOC)]


def sym_quantizer(d, offsets=(0.4, 1.1, 2.3)):
    off = np.asarray(offsets)
    return Quantizer(d.mu + d.delta * np.concatenate((-off[::-1], [0.0], off)))


class TestQuantizerValidation:
    def test_needs_at_least_one_threshold(self):
        with pytest.raises(DomainError):
            Quantizer(np.array([]))

    def test_rejects_nonfinite(self):
        with pytest.raises(DomainError):
            Quantizer(np.array([0.0, np.inf]))
        with pytest.raises(DomainError):
            Quantizer(np.array([np.nan]))

    def test_rejects_unsorted_or_duplicate(self):
        with pytest.raises(DomainError):
            Quantizer(np.array([1.0, 0.0]))
        with pytest.raises(DomainError):
            Quantizer(np.array([1.0, 1.0]))

    def test_interval_count(self):
        assert Quantizer(np.array([0.0])).n_intervals == 2
        assert Quantizer(np.arange(7.0)).n_intervals == 8

    def test_thresholds_are_read_only(self):
        q = Quantizer(np.array([0.0, 1.0]))
        with pytest.raises(ValueError):
            q.interior_thresholds[0] = 5.0

    def test_json_round_trip(self):
        q = Quantizer(np.array([-1.5, 0.25, 2.0]))
        back = Quantizer.from_json_list(q.to_json_list())
        assert np.array_equal(back.interior_thresholds, q.interior_thresholds)

    def test_scalar_threshold_accepted(self):
        assert Quantizer(0.5).n_intervals == 2


class TestQuantize:
    def test_indices_are_one_based_and_cover_all_cells(self):
        q = Quantizer(np.array([-1.0, 0.0, 1.0]))
        assert quantize(q, -5.0) == 1
        assert quantize(q, -0.5) == 2
        assert quantize(q, 0.5) == 3
        assert quantize(q, 5.0) == 4

    def test_threshold_value_falls_in_upper_cell(self):
        q = Quantizer(np.array([0.0, 1.0]))
        assert quantize(q, 0.0) == 2
        assert quantize(q, 1.0) == 3

    def test_vectorized(self):
        q = Quantizer(np.array([0.0]))
        got = quantize(q, np.array([-1.0, 0.0, 1.0]))
        assert got.tolist() == [1, 2, 2]

    def test_monotone_in_input(self):
        q = Quantizer(np.array([-0.7, 0.1, 0.9, 2.0]))
        ys = np.linspace(-3, 3, 301)
        idx = quantize(q, ys)
        assert np.all(np.diff(idx) >= 0)


class TestCellProbabilities:
    def test_rejects_out_of_range(self):
        with pytest.raises(DomainError):
            CellProbabilities(np.array([-0.1, 1.1]))

    def test_rejects_wrong_total(self):
        with pytest.raises(DomainError):
            CellProbabilities(np.array([0.5, 0.6]))

    @pytest.mark.parametrize("d", CASES)
    def test_sum_to_one(self, d):
        p = cell_probs(sym_quantizer(d), d).probs
        assert p.sum() == pytest.approx(1.0, abs=1e-14)
        assert p.size == 8

    @pytest.mark.parametrize("d", CASES)
    def test_match_density_integrals(self, d):
        q = sym_quantizer(d)
        p = cell_probs(q, d).probs
        edges = np.concatenate(([-np.inf], q.interior_thresholds, [np.inf]))
        for i in range(q.n_intervals):
            want = quad(lambda y: pdf(d, y), edges[i], edges[i + 1], limit=200)[0]
            assert p[i] == pytest.approx(want, rel=1e-7, abs=1e-10)

    def test_match_cdf_differences(self):
        d = dist(STD, 3.0)
        q = Quantizer(np.array([-2.0, 0.5, 1.0]))
        p = cell_probs(q, d).probs
        want = np.diff([0.0, cdf(d, -2.0), cdf(d, 0.5), cdf(d, 1.0), 1.0])
        np.testing.assert_allclose(p, want, rtol=0, atol=1e-16)

    def test_far_tail_thresholds_warn(self):
        d = gaussian()
        with pytest.warns(DegenerateCellWarning):
            cell_probs(Quantizer(np.array([40.0, 41.0])), d)


class TestQuantizedInformation:
    def test_one_bit_gaussian_location_closed_form(self):
        # symmetric sign quantizer: I_q = 4 f(0)^2 = 4/pi
        got = quantized_fi(Quantizer(np.array([0.0])), gaussian(), LOC)
        assert got == pytest.approx(4.0 / math.pi, rel=1e-14)

    def test_one_bit_cauchy_location_closed_form(self):
        got = quantized_fi(Quantizer(np.array([0.0])), cauchy(), LOC)
        assert got == pytest.approx(4.0 / math.pi**2, rel=1e-14)

    def test_one_bit_gaussian_scale_closed_form(self):
        # threshold at y = 1: I_q = f(1)^2 (1/F(1) + 1/(1-F(1)))
        f1 = math.exp(-1.0) / math.sqrt(math.pi)
        F1 = 0.5 * (1.0 + math.erf(1.0))
        want = f1 * f1 * (1.0 / F1 + 1.0 / (1.0 - F1))
        got = quantized_fi(Quantizer(np.array([1.0])), gaussian(), SCA)
        assert got == pytest.approx(want, rel=1e-13)

    @pytest.mark.parametrize("d,kind", FI_CASES)
    def test_cell_derivatives_match_finite_differences(self, d, kind):
        q = sym_quantizer(d)
        p = cell_probs(q, d).probs
        eta = score_coefficients(q, d, kind)
        h = 1e-5 * d.delta
        if kind is LOC:
            up = Distribution(d.family, d.mu + h, d.delta)
            dn = Distribution(d.family, d.mu - h, d.delta)
        else:
            up = Distribution(d.family, d.mu, d.delta + h)
            dn = Distribution(d.family, d.mu, d.delta - h)
        fd = (cell_probs(q, up).probs - cell_probs(q, dn).probs) / (2 * h)
        np.testing.assert_allclose(eta * p, fd, rtol=1e-6, atol=1e-9)

    @pytest.mark.parametrize("d,kind", FI_CASES)
    def test_equals_second_moment_of_coefficients(self, d, kind):
        q = sym_quantizer(d)
        p = cell_probs(q, d).probs
        eta = score_coefficients(q, d, kind)
        assert quantized_fi(q, d, kind) == pytest.approx(float(p @ (eta * eta)), rel=1e-13)

    @pytest.mark.parametrize("d,kind", FI_CASES)
    def test_below_continuous_information(self, d, kind):
        assert quantized_fi(sym_quantizer(d), d, kind) < continuous_fi(d, kind)

    @pytest.mark.parametrize("d,kind", FI_CASES)
    def test_refinement_never_loses_information(self, d, kind):
        coarse = sym_quantizer(d)
        extra = np.sort(np.concatenate((coarse.interior_thresholds,
                                        d.mu + d.delta * np.array([-1.7, 0.66]))))
        fine = Quantizer(extra)
        assert quantized_fi(fine, d, kind) >= quantized_fi(coarse, d, kind) - 1e-13

    @pytest.mark.parametrize("kind", [LOC, SCA])
    def test_affine_equivariance(self, kind):
        a, b = -2.5, 3.0
        d1 = dist(STD, 2.5)
        d2 = dist(STD, 2.5, a + b * d1.mu, b * d1.delta)
        q1 = sym_quantizer(d1)
        q2 = Quantizer(a + b * q1.interior_thresholds)
        assert quantized_fi(q2, d2, kind) == pytest.approx(
            quantized_fi(q1, d1, kind) / b**2, rel=1e-12)

    def test_zero_probability_cell_is_dropped_with_warning(self):
        # Cauchy mass beyond 1e17 underflows to zero while the density does not
        q = Quantizer(np.array([0.0, 1e17, 2e17]))
        with pytest.warns(DegenerateCellWarning):
            got = quantized_fi(q, cauchy(), LOC)
        base = quantized_fi(Quantizer(np.array([0.0])), cauchy(), LOC)
        assert math.isfinite(got)
        assert got == pytest.approx(base, rel=1e-10)


class TestScoreCoefficients:
    @pytest.mark.parametrize("d,kind", FI_CASES)
    def test_zero_mean(self, d, kind):
        q = sym_quantizer(d)
        p = cell_probs(q, d).probs
        eta = score_coefficients(q, d, kind)
        assert float(p @ eta) == pytest.approx(0.0, abs=1e-12)

    def test_location_sign_structure(self):
        # coefficients increase with the cell for a symmetric location design
        d = gaussian()
        eta = score_coefficients(sym_quantizer(d), d, LOC)
        assert np.all(np.diff(eta) > 0)
        np.testing.assert_allclose(eta, -eta[::-1], rtol=0, atol=1e-14)

    def test_scale_sign_structure(self):
        # central cells shrink the scale estimate, outer cells grow it
        d = gaussian()
        eta = score_coefficients(sym_quantizer(d), d, SCA)
        np.testing.assert_allclose(eta, eta[::-1], rtol=0, atol=1e-14)
        assert eta[0] > 0 > eta[3]

    def test_one_bit_gaussian_values(self):
        eta = score_coefficients(Quantizer(np.array([0.0])), gaussian(), LOC)
        np.testing.assert_allclose(
            eta, [-2.0 / math.sqrt(math.pi), 2.0 / math.sqrt(math.pi)], rtol=1e-14)

    def test_zero_probability_cell_gets_zero(self):
        q = Quantizer(np.array([0.0, 1e17, 2e17]))
        with pytest.warns(DegenerateCellWarning):
            eta = score_coefficients(q, cauchy(), LOC)
        assert eta[2] == 0.0


class TestCellTableExport:
    def test_round_trip(self, tmp_path):
        d = dist(GGD, 1.5, 0.3, 1.2)
        q = sym_quantizer(d)
        path = tmp_path / "cells.csv"
        export_cell_table_csv(path, q, d, SCA)
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["i", "tau_i", "P_i", "eta_i"]
        assert len(rows) == 1 + q.n_intervals
        assert [int(r[0]) for r in rows[1:]] == list(range(1, q.n_intervals + 1))
        taus = [float(r[1]) for r in rows[1:]]
        assert taus[:-1] == pytest.approx(q.interior_thresholds.tolist(), abs=0)
        assert math.isinf(taus[-1])
        p = cell_probs(q, d).probs
        eta = score_coefficients(q, d, SCA)
        assert [float(r[2]) for r in rows[1:]] == p.tolist()
        assert [float(r[3]) for r in rows[1:]] == eta.tolist()


@given(
    st.lists(st.floats(-4.0, 4.0), min_size=1, max_size=9, unique=True),
    st.sampled_from([(GGD, 2.0), (GGD, 1.5), (STD, 1.0), (STD, 3.0)]),
)
@settings(max_examples=60, deadline=None)
def test_information_identities_hold_for_arbitrary_thresholds(raw, fam):
    thr = np.sort(np.asarray(raw))
    if thr.size > 1 and np.min(np.diff(thr)) < 1e-3:
        return
    d = dist(*fam)
    q = Quantizer(thr)
    p = cell_probs(q, d).probs
    assert p.sum() == pytest.approx(1.0, abs=1e-12)
    for kind in (LOC, SCA):
        eta = score_coefficients(q, d, kind)
        fi = quantized_fi(q, d, kind)
        assert float(p @ eta) == pytest.approx(0.0, abs=1e-10)
        assert fi == pytest.approx(float(p @ (eta * eta)), rel=1e-11, abs=1e-12)
        assert fi <= continuous_fi(d, kind) + 1e-12
