"""Tests for maass_util module."""

import cmath
import math

import mpmath
import pytest

from src.common_util import PrecisionError
from src.maass_util import (
    CoeffTable,
    GammaThetaMatrix,
    F_eval,
    UpperHalfPoint,
    c_minus,
    c_minus_class_number,
    c_plus,
    c_plus_class_number,
    coeff_table,
    hecke_Tp2,
    incomplete_gamma_half,
    incomplete_gamma_half_scaled,
    nu_theta,
    shadow_coefficient,
    theta_cubed_eval,
    theta_eval,
    theta_half,
)
from src.quadform_util import r3_brute

LOG2 = math.log(2)


class TestCoefficients:
    def test_c_plus_examples(self):
        assert c_plus(1) == pytest.approx(-6 * LOG2 / math.pi, abs=1e-12)
        assert c_plus(1).real == pytest.approx(-1.3238136009, abs=1e-10)
        # L(1, χ_8) = log(1 + √2)/√2
        expected = -12 / math.pi * math.log(1 + math.sqrt(2)) / math.sqrt(2)
        assert c_plus(2) == pytest.approx(expected, abs=1e-12)
        assert c_plus(4) == pytest.approx(c_plus(1), abs=1e-14)

    def test_constant_term_conventions(self):
        assert c_plus(0) == pytest.approx(-3 * LOG2 / math.pi, abs=1e-12)
        assert c_plus(0, "intro") == pytest.approx(2 * c_plus(0), abs=1e-14)

    def test_square_indices(self):
        for m in range(1, 16):
            assert c_plus(m * m) == pytest.approx(-6 * LOG2 / math.pi, abs=1e-10)

    def test_square_branch_limit_reading(self):
        assert c_plus(9, square_branch="limit") == pytest.approx(c_plus(9), abs=1e-14)
        assert c_plus(4, square_branch="limit") == pytest.approx(1.5 * c_plus(4), abs=1e-14)

    def test_c_minus_examples(self):
        assert c_minus(1) == pytest.approx(-3 / math.sqrt(math.pi), abs=1e-12)
        assert c_minus(1).real == pytest.approx(-1.692569, abs=1e-6)
        assert c_minus(3) == pytest.approx(-4 / math.sqrt(3 * math.pi), abs=1e-12)
        assert abs(c_minus(7)) < 1e-14

    def test_shadow_identity(self):
        for n in range(1, 301):
            expected = -r3_brute(n) / (2 * math.sqrt(math.pi * n))
            assert abs(c_minus(n) - expected) <= 1e-8
            assert shadow_coefficient(n) == pytest.approx(r3_brute(n), abs=1e-8)

    def test_invalid_indices(self):
        with pytest.raises(ValueError):
            c_plus(-1)
        with pytest.raises(ValueError):
            c_minus(0)


class TestClassNumberForms:
    def test_c_plus_real_quadratic_example(self):
        coeff = c_plus_class_number(2)
        assert (coeff.D, coeff.h) == (8, 1)
        assert coeff.unit == pytest.approx(math.log(1 + math.sqrt(2)), abs=1e-14)
        expected = -12 / math.pi * math.log(1 + math.sqrt(2)) / math.sqrt(2)
        assert coeff.value == pytest.approx(expected, abs=1e-12)

    @pytest.mark.slow
    def test_c_plus_agrees_with_zeta_route(self):
        for n in range(1, 301):
            assert c_plus_class_number(n).value == pytest.approx(c_plus(n).real, abs=1e-10)

    def test_square_index_uses_log2(self):
        coeff = c_plus_class_number(9)
        assert (coeff.D, coeff.h, coeff.unit) == (1, 0, 0.0)
        assert coeff.value == pytest.approx(-6 * LOG2 / math.pi, abs=1e-12)

    def test_c_minus_imaginary_quadratic(self):
        coeff = c_minus_class_number(1)
        assert (coeff.D, coeff.h, coeff.unit) == (-4, 1, 4.0)
        assert coeff.value == pytest.approx(-3 / math.sqrt(math.pi), abs=1e-12)
        for n in range(1, 301):
            assert c_minus_class_number(n).value == pytest.approx(c_minus(n).real, abs=1e-10)

    def test_invalid_indices(self):
        with pytest.raises(ValueError):
            c_plus_class_number(0)
        with pytest.raises(ValueError):
            c_minus_class_number(-3)


class TestCoeffTable:
    def test_r3(self):
        table = coeff_table("r3", 4)
        assert [table[n] for n in range(5)] == [1, 6, 12, 8, 6]

    def test_holo_plus(self):
        table = coeff_table("holo_plus", 1)
        assert sorted(table.entries) == [0, 1]
        assert table[1] == pytest.approx(-6 * LOG2 / math.pi)

    def test_nonholo_minus(self):
        table = coeff_table("nonholo_minus", 3)
        assert sorted(table.entries) == [1, 2, 3]
        assert table[2] == pytest.approx(-12 / (2 * math.sqrt(2 * math.pi)), abs=1e-12)
        assert 0 not in table

    def test_entries_are_real(self):
        for family in ("holo_plus", "nonholo_minus"):
            table = coeff_table(family, 60)
            assert all(abs(complex(v).imag) <= 1e-10 for v in table.entries.values())

    def test_threads_do_not_change_values(self):
        assert coeff_table("holo_plus", 40, 1).entries == coeff_table("holo_plus", 40, 4).entries

    def test_realness_violation(self):
        with pytest.raises(PrecisionError):
            coeff_table("holo_plus", 5, realness_tol=-1.0)

    def test_invalid(self):
        with pytest.raises(ValueError):
            coeff_table("r3", -1)
        with pytest.raises(ValueError):
            coeff_table("bogus", 3)  # type: ignore[arg-type]


class TestHecke:
    def test_weight_three_halves_exact(self):
        table = coeff_table("r3", 49 * 100)
        for p in (3, 5, 7):
            image = hecke_Tp2(table, p, 1, 100)
            for n in range(101):
                assert image[n] == (1 + p) * table[n]

    def test_r3_example(self):
        table = coeff_table("r3", 9)
        image = hecke_Tp2(table, 3, 1)
        assert image.n_max == 1
        assert image[1] == 30 - 6 == 24

    @pytest.mark.slow
    @pytest.mark.timeout(120)
    def test_weight_one_half(self):
        table = coeff_table("holo_plus", 25 * 50)
        for p in (3, 5):
            image = hecke_Tp2(table, p, 0, 50)
            for n in range(1, 51):
                assert abs(image[n] - (1 + 1 / p) * table[n]) <= 1e-7

    def test_example_at_two(self):
        table = coeff_table("holo_plus", 18)
        image = hecke_Tp2(table, 3, 0, 2)
        assert image[2] == pytest.approx(4 / 3 * table[2], abs=1e-10)

    def test_constant_term(self):
        table = CoeffTable("holo_plus", {0: 2.0, 1: 0.0, 9: 0.0}, 9)
        assert hecke_Tp2(table, 3, 0)[0] == pytest.approx(2.0 * (1 + 1 / 3))
        table = CoeffTable("r3", {0: 1, 1: 0, 9: 0}, 9)
        assert hecke_Tp2(table, 3, 1)[0] == 4

    def test_invalid(self):
        table = coeff_table("r3", 20)
        with pytest.raises(ValueError):
            hecke_Tp2(table, 3, 1, 5)
        with pytest.raises(ValueError):
            hecke_Tp2(table, 9, 1)
        with pytest.raises(ValueError):
            hecke_Tp2(table, 2, 1)
        with pytest.raises(ValueError):
            hecke_Tp2(table, 3, 2)


class TestMultiplier:
    def test_examples(self):
        assert nu_theta(GammaThetaMatrix(0, 1, -1, 0)) == pytest.approx(cmath.exp(1j * math.pi / 4))
        assert nu_theta(GammaThetaMatrix(1, 2, 0, 1)) == pytest.approx(1)
        assert nu_theta(GammaThetaMatrix(1, 0, 2, 1)) == pytest.approx(1)

    def test_group_membership(self):
        with pytest.raises(ValueError):
            GammaThetaMatrix(1, 1, 0, 1)
        with pytest.raises(ValueError):
            GammaThetaMatrix(2, 0, 0, 1)
        with pytest.raises(ValueError):
            GammaThetaMatrix(1, 1, 1, 2)

    @pytest.mark.parametrize(
        "a, b, c, d",
        [
            (0, 1, -1, 0),
            (0, -1, 1, 0),
            (1, 2, 0, 1),
            (1, 0, 2, 1),
            (1, 0, -2, 1),
            (-1, 0, -2, -1),
            (-1, 0, 2, -1),
            (1, 2, 2, 5),
            (2, 1, 3, 2),
            (2, -1, 1, 0),
            (2, 1, -1, 0),
        ],
    )
    def test_transformation(self, a, b, c, d):
        tau = complex(0.1, 1.3)
        A = GammaThetaMatrix(a, b, c, d)
        left = theta_half(A.act(tau), 60)
        right = nu_theta(A) * A.automorphy(tau) * theta_half(tau, 60)
        assert abs(left - right) <= 1e-8


class TestTheta:
    def test_classical_value(self):
        expected = float(mpmath.pi**0.25 / mpmath.gamma(0.75))
        assert theta_eval(UpperHalfPoint(0.0, 0.5), 20).value == pytest.approx(expected, abs=1e-12)
        assert theta_half(1j) == pytest.approx(expected, abs=1e-12)
        assert expected == pytest.approx(1.086435, abs=1e-6)

    def test_matches_jacobi_theta(self):
        tau = UpperHalfPoint(0.3, 0.7)
        q = cmath.exp(2j * math.pi * tau.tau)
        expected = complex(mpmath.jtheta(3, 0, q))
        assert theta_eval(tau).value == pytest.approx(expected, abs=1e-12)

    def test_periodicity(self):
        a = theta_eval(UpperHalfPoint(0.3, 0.7)).value
        b = theta_eval(UpperHalfPoint(2.3, 0.7)).value
        assert abs(a - b) <= 1e-12

    def test_large_y(self):
        value = theta_eval(UpperHalfPoint(0.0, 30.0))
        assert value.value == pytest.approx(1.0, abs=1e-15)
        assert value.error < 1e-100

    def test_cube(self):
        tau = UpperHalfPoint(0.2, 0.9)
        assert theta_cubed_eval(tau).value == pytest.approx(theta_eval(tau).value ** 3, abs=1e-14)

    def test_invalid(self):
        with pytest.raises(ValueError):
            UpperHalfPoint(0.0, 0.0)
        with pytest.raises(ValueError):
            theta_eval(UpperHalfPoint(0.0, 1.0), 0)


class TestIncompleteGamma:
    def test_examples(self):
        assert incomplete_gamma_half(0.0) == pytest.approx(math.sqrt(math.pi))
        assert incomplete_gamma_half(1.0) == pytest.approx(0.278806, abs=1e-6)

    def test_matches_erfc(self):
        for k in range(0, 400):
            x = k * 0.05
            expected = math.sqrt(math.pi) * math.erfc(math.sqrt(x))
            assert abs(incomplete_gamma_half(x) - expected) <= 1e-12

    def test_monotone(self):
        values = [incomplete_gamma_half(0.1 * k) for k in range(200)]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_scaled_large_arguments(self):
        for x in (4.0, 10.0, 50.0, 700.0, 5000.0):
            expected = float(mpmath.exp(x) * mpmath.gammainc(0.5, x))
            assert incomplete_gamma_half_scaled(x) == pytest.approx(expected, rel=1e-12)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            incomplete_gamma_half(-1.0)
        with pytest.raises(ValueError):
            incomplete_gamma_half_scaled(-0.5)


class TestFEval:
    def test_large_y(self):
        tau = UpperHalfPoint(0.0, 50.0)
        result = F_eval(tau, 5)
        assert result.value == pytest.approx(c_plus(0) + 2 * math.sqrt(50), abs=1e-12)
        assert result.last_term < 1e-100

    def test_real_on_imaginary_axis(self):
        for y in (1.0, 2.0, 5.0):
            assert abs(F_eval(UpperHalfPoint(0.0, y), 20).value.imag) <= 1e-9

    def test_periodicity(self):
        a = F_eval(UpperHalfPoint(0.25, 1.0), 20)
        b = F_eval(UpperHalfPoint(1.25, 1.0), 20)
        assert abs(a.holomorphic - b.holomorphic) <= 1e-12
        assert abs(a.nonholomorphic - b.nonholomorphic) <= 1e-12

    def test_finite_off_axis(self):
        result = F_eval(UpperHalfPoint(0.5, 1.0), 40)
        assert cmath.isfinite(result.value)
        assert result.sqrt_term == pytest.approx(2.0)

    def test_constant_term_convention(self):
        tau = UpperHalfPoint(0.0, 40.0)
        delta = F_eval(tau, 3, constant_term="intro").value - F_eval(tau, 3).value
        assert delta == pytest.approx(c_plus(0), abs=1e-12)

    def test_invalid(self):
        with pytest.raises(ValueError):
            F_eval(UpperHalfPoint(0.0, 1.0), 0)
