from fractions import Fraction as F

import pytest

from cycletheta.cyclotomic import Cyc, sqrt_as_cyclotomic
from cycletheta.quadlattice import direct_sum, discriminant_form, named_lattice
from cycletheta.weilrep import (
    InsufficientTruncation,
    WeilRepMatrix,
    rho_S,
    rho_T,
    rho_word,
    theta_transform_check,
    verify_relations,
)

CORPUS = ["A1", "A2", "A3", "D4", "E8", "U", "A1(-1)"]


def df_of(name):
    return discriminant_form(named_lattice(name))


class TestGenerators:
    def test_rho_t_trivial(self):
        m = rho_T(df_of("U"))
        assert m.size == 1
        assert m.entries[0][0] == Cyc.one(m.root_order)

    def test_rho_t_a1(self):
        m = rho_T(df_of("A1"))
        n = m.root_order
        assert m.entries[0][0] == Cyc.one(n)
        assert m.entries[1][1] == Cyc.e(F(1, 4), n)  # = i
        assert m.entries[0][1].is_zero and m.entries[1][0].is_zero

    def test_rho_t_a2(self):
        m = rho_T(df_of("A2"))
        n = m.root_order
        diag = [m.entries[i][i] for i in range(3)]
        assert sorted(
            (d == Cyc.one(n), d == Cyc.e(F(1, 3), n)) for d in diag
        ) == [(False, True), (False, True), (True, False)]

    def test_rho_s_unimodular(self):
        m = rho_S(df_of("E8"))
        assert m.entries[0][0] == Cyc.one(m.root_order)

    def test_rho_s_a1(self):
        # e(-1/8)/sqrt(2) * [[1, 1], [1, -1]]
        m = rho_S(df_of("A1"))
        n = m.root_order
        scale = Cyc.e(F(-1, 8), n) * sqrt_as_cyclotomic(2, n).scale(F(1, 2))
        assert m.entries[0][0] == scale
        assert m.entries[0][1] == scale
        assert m.entries[1][0] == scale
        assert m.entries[1][1] == -scale

    def test_rho_s_a1_neg(self):
        # sig8 = 7, so the phase is e(-7/8) = e(1/8)
        m = rho_S(df_of("A1(-1)"))
        n = m.root_order
        scale = Cyc.e(F(1, 8), n) * sqrt_as_cyclotomic(2, n).scale(F(1, 2))
        assert m.entries[0][0] == scale
        assert m.entries[1][1] == -scale


class TestWords:
    def test_empty_word_identity(self):
        assert rho_word(df_of("A1"), "").is_identity()

    def test_ss_on_a1(self):
        # S^2 = e(-1/4) * identity on A1 (negation is trivial on Z/2)
        m = rho_word(df_of("A1"), "SS")
        n = m.root_order
        phase = Cyc.e(F(-1, 4), n)
        expected = WeilRepMatrix.identity(df_of("A1"), n).scale(phase)
        assert m == expected

    @pytest.mark.parametrize("name", CORPUS)
    def test_braid_word(self, name):
        df = df_of(name)
        assert rho_word(df, "STSTST") == rho_word(df, "SS")

    def test_inverse_tokens(self):
        df = df_of("A3")
        assert rho_word(df, "Ss").is_identity()
        assert rho_word(df, "tT").is_identity()
        assert rho_word(df, "S^-1S").is_identity()
        assert rho_word(df, "T^-1T").is_identity()

    def test_bad_token(self):
        with pytest.raises(ValueError):
            rho_word(df_of("A1"), "SX")


class TestRelations:
    @pytest.mark.parametrize("name", CORPUS)
    def test_corpus(self, name):
        rep = verify_relations(df_of(name))
        assert rep.all_pass

    @pytest.mark.parametrize("name", ["A1", "A2", "A3", "D4"])
    def test_t_order_equals_level(self, name):
        df = df_of(name)
        t = rho_T(df)
        acc = t
        order = 1
        while not acc.is_identity():
            acc = acc @ t
            order += 1
            assert order <= 4 * df.level
        assert order == df.level

    @pytest.mark.parametrize("name", CORPUS)
    def test_dual_consistency(self, name):
        # the dual representation is the entrywise conjugate on generators
        df = df_of(name)
        for gen in (rho_S(df), rho_T(df)):
            conj = gen.conjugate()
            dag = gen.dagger()
            # rho(S) is symmetric and rho(T) diagonal, so both coincide
            assert conj.entries == dag.entries

    def test_unitarity(self):
        for name in CORPUS:
            assert rho_S(df_of(name)).is_unitary()
            assert rho_T(df_of(name)).is_unitary()


class TestThetaTransform:
    def test_t_generator_trivial_residual(self):
        res = theta_transform_check(named_lattice("A2"), "T", 1j, 10)
        assert res.residual < 1e-10

    def test_e8_s_at_i(self):
        res = theta_transform_check(named_lattice("E8"), "S", 1j, 8)
        assert res.residual < 1e-9

    def test_a1_s_at_i(self):
        # odd rank via the principal branch of tau^(1/2)
        res = theta_transform_check(named_lattice("A1"), "S", 1j, 12)
        assert res.residual < 1e-9

    def test_corpus_at_i_and_2i(self):
        a1a1 = direct_sum(named_lattice("A1"), named_lattice("A1"))
        for lat in [a1a1, named_lattice("D4"), named_lattice("E8")]:
            for gen in ("S", "T"):
                for tau in (1j, 2j):
                    res = theta_transform_check(lat, gen, tau, 16)
                    assert res.residual < 1e-9
                    assert res.tail_bound < 1e-12

    def test_insufficient_truncation(self):
        with pytest.raises(InsufficientTruncation):
            theta_transform_check(named_lattice("E8"), "S", 0.05j, 8)

    def test_tail_monotone(self):
        r8 = theta_transform_check(named_lattice("E8"), "S", 1j, 8)
        r14 = theta_transform_check(named_lattice("E8"), "S", 1j, 14)
        assert r14.tail_bound < r8.tail_bound
        assert r14.residual <= r8.residual + 1e-15

    def test_bad_inputs(self):
        with pytest.raises(ValueError):
            theta_transform_check(named_lattice("A1"), "Q", 1j, 8)
        with pytest.raises(ValueError):
            theta_transform_check(named_lattice("A1"), "S", -1j, 8)


class TestNumericAgreement:
    @pytest.mark.parametrize("name", CORPUS)
    def test_exact_matches_float(self, name):
        # the cyclotomic matrices, evaluated as complex numbers, must satisfy
        # the same relations numerically
        df = df_of(name)
        s = rho_S(df).to_complex()
        size = len(s)
        for i in range(size):
            for j in range(size):
                acc = sum(s[i][k] * s[j][k].conjugate() for k in range(size))
                assert abs(acc - (1 if i == j else 0)) < 1e-12
