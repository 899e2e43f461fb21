"""Tests for arith_util module."""

import math

import pytest
import sympy

from src.arith_util import (
    T,
    T_derivative,
    character_table,
    divisors,
    euler_phi,
    factorize,
    fundamental_discriminant,
    is_fundamental,
    is_square,
    jacobi_table,
    kronecker,
    mobius,
    psi,
    quad_char,
    sigma,
    squarefree_split,
    star_lower,
    star_upper,
)


class TestFactorize:
    """素因数分解"""

    def test_examples(self):
        assert factorize(12).factors == ((2, 2), (3, 1))
        assert factorize(12).sign == 1
        assert factorize(-1).sign == -1
        assert factorize(-1).factors == ()
        assert factorize(9973).factors == ((9973, 1),)

    def test_matches_sympy(self):
        for n in range(2, 2000):
            assert dict(factorize(n).factors) == sympy.factorint(n)

    def test_reconstruct(self):
        for n in (-360, -7, 1, 97, 1024, 123456):
            assert factorize(n).reconstruct() == n

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            factorize(0)

    def test_too_large_rejected(self):
        with pytest.raises(ValueError):
            factorize(2**63)


class TestMultiplicative:
    def test_mobius(self):
        assert mobius(1) == 1
        assert mobius(6) == 1
        assert mobius(12) == 0
        assert mobius(30) == -1

    def test_sigma(self):
        assert sigma(1, 6) == 12
        assert sigma(1, 9) == 13
        assert sigma(0, 12) == 6

    def test_euler_phi(self):
        assert euler_phi(1) == 1
        assert euler_phi(9) == 6
        assert euler_phi(10) == 4
        for n in range(1, 500):
            assert euler_phi(n) == sympy.totient(n)

    @pytest.mark.slow
    @pytest.mark.timeout(120)
    def test_multiplicativity_on_coprime_pairs(self):
        chi = quad_char(-3)
        bound = 10_000
        mu = {n: mobius(n) for n in range(1, bound + 1)}
        sig = {n: sigma(1, n) for n in range(1, bound + 1)}
        t1 = {n: T(1, chi, n) for n in range(1, bound + 1)}
        t25 = {n: T(2.5, chi, n) for n in range(1, bound + 1)}
        for a in range(1, math.isqrt(bound) + 1):
            for b in range(a, bound // a + 1):
                if math.gcd(a, b) != 1:
                    continue
                ab = a * b
                assert mu[ab] == mu[a] * mu[b]
                assert sig[ab] == sig[a] * sig[b]
                assert t1[ab] == t1[a] * t1[b]
                assert t25[ab] == pytest.approx(t25[a] * t25[b], rel=1e-12)

    def test_divisors(self):
        assert divisors(12) == [1, 2, 3, 4, 6, 12]
        assert divisors(1) == [1]
        assert divisors(97) == sorted(sympy.divisors(97))

    def test_non_positive_rejected(self):
        for fn in (mobius, euler_phi, divisors):
            with pytest.raises(ValueError):
                fn(0)
        with pytest.raises(ValueError):
            sigma(1, -3)


def test_is_square() -> None:
    assert is_square(0)
    assert is_square(49)
    assert not is_square(50)
    assert not is_square(-4)


class TestSquarefreeSplit:
    @pytest.mark.parametrize(
        "n, d, f, q, w",
        [(12, 3, 2, 1, 1), (-18, -2, 3, 0, 3), (48, 3, 4, 2, 1), (-1, -1, 1, 0, 1)],
    )
    def test_examples(self, n, d, f, q, w):
        split = squarefree_split(n)
        assert (split.d, split.f, split.q, split.w) == (d, f, q, w)

    def test_recompose(self):
        for n in list(range(-3000, 0)) + list(range(1, 3000)):
            split = squarefree_split(n)
            assert split.d * split.f**2 == n
            assert mobius(abs(split.d)) != 0
            assert split.f == 2**split.q * split.w
            assert split.w % 2 == 1


class TestKronecker:
    def test_examples(self):
        assert kronecker(3, 5) == -1
        assert kronecker(-4, 3) == -1
        assert kronecker(-3, 2) == -1
        assert kronecker(5, 2) == -1
        assert kronecker(1, 2) == 1
        assert kronecker(4, 2) == 0

    def test_euler_criterion(self):
        for p in sympy.primerange(3, 100):
            for a in range(p):
                expected = pow(a, (p - 1) // 2, p)
                expected = -1 if expected == p - 1 else expected
                assert kronecker(a, p) == expected

    def test_matches_sympy_jacobi(self):
        for b in range(1, 120, 2):
            for a in range(-60, 60):
                assert kronecker(a, b) == sympy.jacobi_symbol(a % b, b)

    def test_zero_denominator(self):
        assert kronecker(1, 0) == 1
        assert kronecker(-1, 0) == 1
        assert kronecker(2, 0) == 0


class TestStarredSymbols:
    def test_upper_examples(self):
        assert star_upper(0, -1) == 1
        assert star_upper(0, 1) == 1
        assert star_upper(2, 7) == 1
        assert star_upper(2, -7) == 1

    def test_lower_examples(self):
        assert star_lower(0, 1) == 1
        assert star_lower(0, -1) == -1
        assert star_lower(-3, -5) == 1
        assert star_lower(2, 3) == -1

    def test_variants_agree_off_the_negative_quadrant(self):
        for c in range(-20, 21):
            for d in range(-21, 22, 2):
                if d > 0 or c > 0:
                    assert star_lower(c, d) == star_upper(c, d)

    def test_even_denominator_rejected(self):
        with pytest.raises(ValueError):
            star_upper(1, 4)
        with pytest.raises(ValueError):
            star_lower(1, 0)


class TestQuadraticCharacters:
    def test_fundamental_discriminant(self):
        assert fundamental_discriminant(-3) == -3
        assert fundamental_discriminant(-1) == -4
        assert fundamental_discriminant(2) == 8
        assert fundamental_discriminant(12) == 12
        assert fundamental_discriminant(-12) == -3
        assert fundamental_discriminant(4) == 1

    def test_is_fundamental(self):
        assert all(is_fundamental(D) for D in (-3, -4, -7, -8, 5, 8, 12, 229))
        assert not any(is_fundamental(D) for D in (0, 1, -12, -16, 9, 16, 2, 3))

    def test_psi_examples(self):
        assert psi(5, 2) == -1
        assert psi(-1, 3) == -1
        assert all(psi(4, m) == 1 for m in range(1, 40, 2))
        assert quad_char(9).is_trivial

    def test_psi_multiplicative_and_periodic(self):
        for n in (-7, -4, 5, 8, 12, -20):
            chi = quad_char(n)
            period = abs(chi.D)
            for a in range(1, 30):
                assert chi(a + period) == chi(a)
                for b in range(1, 30):
                    assert chi(a * b) == chi(a) * chi(b)

    def test_quad_char_zero_rejected(self):
        with pytest.raises(ValueError):
            quad_char(0)


class TestT:
    def test_trivial_character_identity(self):
        for w in range(1, 51):
            assert T(1, None, w) == w
            assert T(1, quad_char(1), w) == w

    def test_examples(self):
        assert T(1, quad_char(8), 3) == 5
        assert T(1, quad_char(-3), 2) == 4
        for D in (-4, 5, 8):
            assert T(1, quad_char(D), 1) == 1

    def test_exact_at_one(self):
        assert isinstance(T(1, quad_char(-7), 6), int)

    def test_real_argument(self):
        # T_2(2) = σ_3(2) − 2·σ_3(1) = 7
        assert T(2.0, None, 2) == pytest.approx(7.0)

    def test_derivative_matches_difference_quotient(self):
        h = 1e-6
        for w in (2, 4, 6, 12):
            for chi in (None, quad_char(-3)):
                numeric = (T(1.0 + h, chi, w) - T(1.0 - h, chi, w)) / (2 * h)
                assert T_derivative(1.0, chi, w) == pytest.approx(numeric, rel=1e-6)


class TestTables:
    def test_character_table_matches_kronecker(self):
        for D in (-3, -4, -7, -8, -20, -23, 5, 8, 12, 229):
            if not is_fundamental(D):
                continue
            table = character_table(D)
            assert len(table) == abs(D)
            for a in range(abs(D)):
                assert table[a] == kronecker(D, a)

    def test_character_table_read_only(self):
        table = character_table(-7)
        with pytest.raises(ValueError):
            table[0] = 1

    def test_jacobi_table(self):
        for modulus in (1, 3, 9, 15, 45, 49):
            values = jacobi_table(modulus, 3 * modulus)
            for x, v in enumerate(values):
                assert v == sympy.jacobi_symbol(x % modulus, modulus)

    def test_jacobi_even_modulus_rejected(self):
        with pytest.raises(ValueError):
            jacobi_table(4, 10)
