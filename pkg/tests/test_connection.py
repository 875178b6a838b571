import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from milnorsph import charts, connection, forms
from milnorsph import liegroup as lg
from milnorsph.chart import ChartError, Plot
from milnorsph.connection import ConnectionField
from milnorsph.forms import DegreeError
from milnorsph.liegroup import Family, LieGroupSpec

SU2 = charts.SU2
SO2 = charts.SO2
SO3 = LieGroupSpec(Family.SPECIAL_ORTHOGONAL, 3)


def exp_batch(spec, X, s):
    s = np.asarray(s)
    return np.asarray([lg.group_exp(t * X) for t in s.ravel()]).reshape(s.shape + X.shape)


def product_plot(spec, X, Y, weights):
    """Two nodes with ``g_1 = exp(u_1 X)`` and ``g_2 = exp(u_2 Y)``."""
    w = np.asarray(weights, float)

    def func(u):
        g = np.stack([exp_batch(spec, X, u[..., 0]), exp_batch(spec, Y, u[..., 1])], -3)
        return np.broadcast_to(w, u.shape[:-1] + (2,)), g

    return Plot(spec, func, -np.ones(2), np.ones(2), (3, 3))


def test_single_node_gives_maurer_cartan():
    X = lg.random_algebra(SU2, np.random.default_rng(2))
    P = charts.single_node_plot(SU2, lambda u: exp_batch(SU2, X, u[..., 0]), 1)
    theta = connection.connection_form(P)
    assert np.allclose(theta(np.array([0.3])), X[None], atol=1e-8)


def test_constant_groups_give_zero():
    g = lg.group_exp(lg.algebra_basis(SO3)[0])
    P = charts.single_node_plot(SO3, lambda u: np.broadcast_to(g, u.shape[:-1] + (3, 3)), 2)
    assert np.abs(connection.connection_form(P)(np.array([0.1, 0.2]))).max() <= 1e-12


def test_equal_weights_average():
    rng = np.random.default_rng(5)
    X, Y = lg.random_algebra(SO3, rng), lg.random_algebra(SO3, rng)
    theta = connection.connection_form(product_plot(SO3, X, Y, [2 ** -0.5, 2 ** -0.5]))
    T = theta(np.array([0.2, -0.4]))
    assert np.allclose(T[0], X / 2, atol=1e-8)
    assert np.allclose(T[1], Y / 2, atol=1e-8)


def test_values_are_in_the_algebra():
    theta = connection.connection_form(charts.su2_two_node_plot(4))
    assert theta.membership_residual(np.random.default_rng(0).uniform(-0.9, 0.9, (10, 3))) <= 1e-12


def test_plot_validation_runs():
    P = charts.single_node_plot(SO3, lambda u: np.broadcast_to(2 * np.eye(3), u.shape[:-1] + (3, 3)), 2)
    with pytest.raises(ChartError):
        connection.connection_form(P)


class TestCurvature:
    @settings(max_examples=10)
    @given(st.integers(0, 2**31 - 1))
    def test_single_node_is_flat(self, seed):
        rng = np.random.default_rng(seed)
        X, Y = lg.random_algebra(SU2, rng), lg.random_algebra(SU2, rng)

        def gmap(u):
            return exp_batch(SU2, X, u[..., 0]) @ exp_batch(SU2, Y, u[..., 1] + 0.5 * u[..., 0] ** 2)

        theta = connection.connection_form(charts.single_node_plot(SU2, gmap, 2))
        assert np.abs(connection.curvature(theta, rng.uniform(-0.5, 0.5, 2))).max() <= 1e-4

    def test_abelian_curvature_is_d_theta(self):
        theta = connection.polynomial_connection(SO2, 3, np.random.default_rng(1))
        u = np.array([0.1, -0.2, 0.3])
        F = connection.curvature(theta, u)
        dT = forms.exterior_derivative(forms.FormField(1, 3, theta, (2, 2)), u, connection.CURVATURE_H)
        for n, (a, b) in enumerate(forms.multi_indices(3, 2)):
            assert np.allclose(F[a, b], dT[n], atol=1e-12, rtol=0)
            assert np.allclose(F[b, a], -dT[n], atol=1e-12, rtol=0)

    def test_constant_connection_is_pure_bracket(self):
        B = np.asarray(lg.algebra_basis(SU2))
        theta = ConnectionField(SU2, 2, lambda u: np.broadcast_to(B[:2], u.shape[:-1] + (2, 2, 2)))
        F = connection.curvature(theta, np.zeros(2))
        bracket = B[0] @ B[1] - B[1] @ B[0]
        assert np.abs(bracket).max() > 0.1
        assert np.array_equal(F[0, 1], bracket)
        assert np.array_equal(F[0, 0], np.zeros((2, 2)))

    def test_needs_two_axes(self):
        theta = ConnectionField(SU2, 1, lambda u: np.zeros(u.shape[:-1] + (1, 2, 2)))
        with pytest.raises(DegreeError):
            connection.curvature(theta, np.zeros(1))


class TestBianchi:
    def test_flat_connection(self):
        rng = np.random.default_rng(3)
        X, Y, Z = (lg.random_algebra(SO3, rng) for _ in range(3))

        def gmap(u):
            return exp_batch(SO3, X, u[..., 0]) @ exp_batch(SO3, Y, u[..., 1]) @ exp_batch(SO3, Z, u[..., 2])

        theta = connection.connection_form(charts.single_node_plot(SO3, gmap, 3))
        assert connection.bianchi_residual(theta, np.array([0.1, 0.2, -0.1])) <= 1e-3

    def test_second_order_in_h(self):
        theta = connection.polynomial_connection(SU2, 3, np.random.default_rng(8))
        u = np.array([0.2, -0.1, 0.3])
        hs = (1e-2, 5e-3, 2.5e-3)
        r = [connection.bianchi_residual(theta, u, h) for h in hs]
        assert all(x <= 10 * h for x, h in zip(r, hs))
        assert 3.5 < r[0] / r[1] < 4.5 and 3.5 < r[1] / r[2] < 4.5

    def test_needs_three_axes(self):
        theta = connection.polynomial_connection(SU2, 2, np.random.default_rng(0))
        with pytest.raises(DegreeError):
            connection.bianchi_residual(theta, np.zeros(2))


class TestChern:
    def test_trace_vanishes_on_su2(self):
        theta = connection.connection_form(charts.su2_two_node_plot(0))
        value, closed = connection.chern_form(theta, 1, np.array([0.1, 0.3, -0.2]))
        assert np.abs(value).max() <= 1e-8
        assert closed is not None and closed <= 1e-8

    def test_abelian_first_form_closed(self):
        theta = connection.polynomial_connection(SO2, 3, np.random.default_rng(4))
        # so(2) is traceless as well, so use the rotation-generator component as a u(1) form
        J = lg.algebra_basis(SO2)[0]
        scalar = ConnectionField(SO2, 3, lambda u: theta(u) @ J.T)
        _, closed = connection.chern_form(scalar, 1, np.array([0.2, 0.1, -0.3]))
        assert closed <= 1e-3

    def test_second_form_closed(self):
        theta = connection.polynomial_connection(SU2, 5, np.random.default_rng(6), scale=0.3)
        value, closed = connection.chern_form(theta, 2, np.full(5, 0.1))
        assert value.shape == (5,)
        assert np.abs(value).max() > 1e-6
        assert closed <= 1e-3

    def test_closedness_skipped_on_top_degree(self):
        theta = connection.polynomial_connection(SU2, 4, np.random.default_rng(6), scale=0.3)
        assert connection.chern_form(theta, 2, np.zeros(4))[1] is None

    def test_dimension_errors(self):
        theta = connection.polynomial_connection(SU2, 3, np.random.default_rng(0))
        with pytest.raises(DegreeError):
            connection.chern_form(theta, 2, np.zeros(3))
        with pytest.raises(DegreeError):
            connection.chern_form(theta, 0, np.zeros(3))
