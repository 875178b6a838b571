import numpy as np
import pytest
from hypothesis import given, strategies as st

from milnorsph import liegroup as lg
from milnorsph.liegroup import AlgebraError, Family, InnerProductKind as IPK, LieGroupSpec


def unit(n, i, j):
    E = np.zeros((n, n))
    E[i - 1, j - 1] = 1.0
    return E


SO2 = LieGroupSpec(Family.SPECIAL_ORTHOGONAL, 2)
SO3 = LieGroupSpec(Family.SPECIAL_ORTHOGONAL, 3)
SU2 = LieGroupSpec(Family.SPECIAL_UNITARY, 2)
SO12 = LieGroupSpec(Family.LORENTZ, 2)
ALL = [LieGroupSpec(Family.ORTHOGONAL, 3), SO3, LieGroupSpec(Family.SPECIAL_ORTHOGONAL, 4), SU2,
       LieGroupSpec(Family.SPECIAL_UNITARY, 3), SO12, LieGroupSpec(Family.LORENTZ, 3)]
specs = st.sampled_from(ALL)
seeds = st.integers(0, 2**31 - 1)


class TestBasis:
    def test_small_examples(self):
        assert len(lg.algebra_basis(SO2)) == 1
        assert len(lg.algebra_basis(SU2)) == 3
        assert len(lg.algebra_basis(SO12)) == 3

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_dimension_formulas(self, n):
        assert len(lg.algebra_basis(LieGroupSpec(Family.SPECIAL_ORTHOGONAL, n))) == n * (n - 1) // 2
        assert len(lg.algebra_basis(LieGroupSpec(Family.ORTHOGONAL, n))) == n * (n - 1) // 2
        assert len(lg.algebra_basis(LieGroupSpec(Family.SPECIAL_UNITARY, n))) == n * n - 1
        assert len(lg.algebra_basis(LieGroupSpec(Family.LORENTZ, n))) == n * (n + 1) // 2

    @pytest.mark.parametrize("spec", ALL, ids=str)
    def test_membership_and_independence(self, spec):
        B = lg.algebra_basis(spec)
        assert all(lg.algebra_residual(spec, X) <= 1e-12 for X in B)
        flat = np.array([np.concatenate([np.real(X).ravel(), np.imag(X).ravel()]) for X in B])
        assert np.linalg.matrix_rank(flat) == len(B)

    def test_lorentz_eta(self):
        assert np.array_equal(LieGroupSpec(Family.LORENTZ, 3).eta, np.diag([-1.0, 1, 1, 1]))

    def test_so12_relation_entrywise(self):
        eta = SO12.eta
        for X in lg.algebra_basis(SO12):
            assert np.array_equal(X.T @ eta + eta @ X, np.zeros((3, 3)))

    def test_invalid_size(self):
        with pytest.raises(ValueError):
            LieGroupSpec(Family.SPECIAL_ORTHOGONAL, 0)
        with pytest.raises(ValueError):
            LieGroupSpec(Family.LORENTZ, 0)

    @pytest.mark.parametrize("text", ["O(2)", "SO(3)", "SU(2)", "SO(1,3)"])
    def test_parse_roundtrip(self, text):
        assert str(LieGroupSpec.parse(text)) == text

    @given(specs, seeds)
    def test_coordinates_roundtrip(self, spec, seed):
        X = lg.random_algebra(spec, np.random.default_rng(seed))
        assert np.allclose(lg.from_coords(spec, lg.algebra_coords(spec, X)), X, atol=1e-12)


class TestInnerProducts:
    def test_so3_trace(self):
        X = unit(3, 1, 2) - unit(3, 2, 1)
        assert lg.inner_product(SO3, IPK.TRACE, X, X) == pytest.approx(2.0, abs=1e-14)

    def test_su2_re_trace(self):
        X = np.diag([1j, -1j])
        assert lg.inner_product(SU2, IPK.RE_TRACE, X, X) == pytest.approx(2.0, abs=1e-14)

    def test_su2_killing_bruteforce(self):
        X = np.diag([1j, -1j])
        # ad-matrix oracle in the 3-element basis, assembled independently here
        B = lg.algebra_basis(SU2)
        flat = np.array([np.concatenate([b.real.ravel(), b.imag.ravel()]) for b in B]).T

        def coords(Y):
            return np.linalg.lstsq(flat, np.concatenate([Y.real.ravel(), Y.imag.ravel()]), rcond=None)[0]

        ad = np.column_stack([coords(X @ b - b @ X) for b in B])
        assert np.trace(ad @ ad) == pytest.approx(-8.0, abs=1e-12)
        assert lg.inner_product(SU2, IPK.KILLING, X, X) == pytest.approx(-8.0, abs=1e-12)
        assert 2 * 2 * np.trace(X @ X).real == pytest.approx(-8.0)

    @pytest.mark.parametrize("n,c", [(3, 1.0), (4, 2.0), (5, 3.0)])
    def test_killing_so_n(self, n, c):
        spec = LieGroupSpec(Family.SPECIAL_ORTHOGONAL, n)
        B = lg.algebra_basis(spec)
        K = np.array([[lg.inner_product(spec, IPK.KILLING, X, Y) for Y in B] for X in B])
        T = np.array([[np.trace(X @ Y) for Y in B] for X in B])
        assert np.allclose(K, c * T, atol=1e-10)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_killing_lorentz(self, n):
        spec = LieGroupSpec(Family.LORENTZ, n)
        B = lg.algebra_basis(spec)
        K = np.array([[lg.inner_product(spec, IPK.KILLING, X, Y) for Y in B] for X in B])
        T = np.array([[np.trace(X @ Y) for Y in B] for X in B])
        assert np.allclose(K, (n - 1) * T, atol=1e-10)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_cartan_positive(self, n):
        spec = LieGroupSpec(Family.LORENTZ, n)
        assert np.linalg.eigvalsh(lg.gram_matrix(spec, IPK.CARTAN)).min() > 0
        for X in lg.algebra_basis(spec):
            assert lg.inner_product(spec, IPK.CARTAN, X, X) > 0

    def test_cartan_involution_fixes_rotations(self):
        B = lg.algebra_basis(SO12)
        rot, boost = B[0], B[-1]
        assert np.allclose(lg.cartan_involution(SO12, rot), rot)
        assert np.allclose(lg.cartan_involution(SO12, boost), -boost)

    def test_trace_forms_positive(self):
        for spec, kind in [(SO3, IPK.TRACE), (SU2, IPK.RE_TRACE), (LieGroupSpec(Family.SPECIAL_UNITARY, 3), IPK.RE_TRACE)]:
            assert np.linalg.eigvalsh(lg.gram_matrix(spec, kind)).min() > 0

    def test_killing_rejected_on_abelian(self):
        X = unit(2, 2, 1) - unit(2, 1, 2)
        with pytest.raises(AlgebraError):
            lg.inner_product(SO2, IPK.KILLING, X, X)

    def test_cartan_rejected_outside_lorentz(self):
        with pytest.raises(AlgebraError):
            lg.inner_product(SO3, IPK.CARTAN, np.zeros((3, 3)), np.zeros((3, 3)))

    @given(specs, seeds)
    def test_symmetry(self, spec, seed):
        rng = np.random.default_rng(seed)
        X, Y = lg.random_algebra(spec, rng), lg.random_algebra(spec, rng)
        for kind in (spec.default_kind(), IPK.KILLING):
            assert lg.inner_product(spec, kind, X, Y) == pytest.approx(lg.inner_product(spec, kind, Y, X), abs=1e-10)

    @given(specs, seeds)
    def test_ad_invariance(self, spec, seed):
        rng = np.random.default_rng(seed)
        X, Y = lg.random_algebra(spec, rng), lg.random_algebra(spec, rng)
        g = lg.group_exp(lg.random_algebra(spec, rng))
        kinds = [IPK.KILLING] + ([spec.default_kind()] if spec.is_compact else [])
        for kind in kinds:
            a = lg.inner_product(spec, kind, lg.adjoint(g, X), lg.adjoint(g, Y))
            assert a == pytest.approx(lg.inner_product(spec, kind, X, Y), abs=1e-8)


class TestExponential:
    def test_zero_is_exact_identity(self):
        for spec in ALL:
            assert np.array_equal(lg.group_exp(np.zeros((spec.size, spec.size), dtype=spec.dtype)), spec.identity())

    def test_quarter_rotation(self):
        assert np.allclose(lg.group_exp(np.pi / 2 * (unit(2, 1, 2) - unit(2, 2, 1))), [[0, 1], [-1, 0]], atol=1e-14)
        assert np.allclose(lg.group_exp(np.pi / 2 * (unit(2, 2, 1) - unit(2, 1, 2))), [[0, -1], [1, 0]], atol=1e-14)

    @given(specs, seeds)
    def test_membership(self, spec, seed):
        g = lg.group_exp(lg.random_algebra(spec, np.random.default_rng(seed)))
        assert lg.group_residual(spec, g) <= 1e-10

    @given(specs, seeds, st.floats(-2, 2))
    def test_commuting_homomorphism(self, spec, seed, s):
        X = lg.random_algebra(spec, np.random.default_rng(seed))
        assert np.allclose(lg.group_exp((1 + s) * X), lg.group_exp(X) @ lg.group_exp(s * X), atol=1e-10)


class TestResiduals:
    def test_identity(self):
        for spec in ALL:
            assert lg.group_residual(spec, spec.identity()) == 0.0

    def test_scaled_identity_in_o2(self):
        assert lg.group_residual(LieGroupSpec(Family.ORTHOGONAL, 2), 2 * np.eye(2)) == pytest.approx(3 * np.sqrt(2))

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            lg.group_residual(SO3, np.eye(2))

    def test_reflection_in_o_not_so(self):
        R = np.diag([1.0, 1.0, -1.0])
        assert lg.in_group(LieGroupSpec(Family.ORTHOGONAL, 3), R)
        assert not lg.in_group(SO3, R)

    def test_lorentz_boost(self):
        a = 0.8
        B = np.array([[np.cosh(a), np.sinh(a), 0], [np.sinh(a), np.cosh(a), 0], [0, 0, 1]])
        assert lg.group_residual(SO12, B) <= 1e-12
        assert not lg.in_group(SO3, B)

    @given(specs, seeds)
    def test_projection_is_idempotent_onto_algebra(self, spec, seed):
        rng = np.random.default_rng(seed)
        M = rng.standard_normal((spec.size, spec.size)).astype(spec.dtype)
        if spec.is_complex:
            M = M + 1j * rng.standard_normal((spec.size, spec.size))
        P = lg.algebra_project(spec, M)
        assert lg.algebra_residual(spec, P) <= 1e-12
        assert np.allclose(lg.algebra_project(spec, P), P)


class TestMaurerCartan:
    @given(specs, seeds, st.floats(-1, 1))
    def test_one_parameter_subgroup(self, spec, seed, t0):
        X = lg.random_algebra(spec, np.random.default_rng(seed))
        theta = lg.maurer_cartan(lambda t: lg.group_exp(t * X), t0)
        assert np.allclose(theta, X, atol=1e-6)

    def test_constant_curve(self):
        g = lg.group_exp(lg.random_algebra(SU2, np.random.default_rng(0)))
        assert np.abs(lg.maurer_cartan(lambda t: g, 0.3)).max() <= 1e-12

    @pytest.mark.parametrize("spec", ALL, ids=str)
    def test_product_rule(self, spec):
        rng = np.random.default_rng(1)
        X, Y = lg.random_algebra(spec, rng), lg.random_algebra(spec, rng)
        theta = lg.maurer_cartan(lambda t: lg.group_exp(t * X) @ lg.group_exp(t * t * Y), 0.0)
        assert np.allclose(theta, X, atol=1e-7)
        assert lg.algebra_residual(spec, theta) <= 1e-7
