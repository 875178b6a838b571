import numpy as np
import pytest
from hypothesis import given, strategies as st

from milnorsph import chart, charts, forms
from milnorsph.chart import IndefiniteMetricError, PulledMetric
from milnorsph.forms import DegreeError, FormField, PeriodicGrid

points3 = st.lists(st.floats(-1, 1), min_size=3, max_size=3).map(np.array)


def u1_du2(dim=2):
    # coefficient 1 on du2 scaled by u1, zero elsewhere
    def ev(u):
        out = np.zeros(u.shape[:-1] + (dim,))
        out[..., 1] = u[..., 0]
        return out
    return FormField(1, dim, ev)


def test_multi_indices_order():
    assert forms.multi_indices(3, 2) == ((0, 1), (0, 2), (1, 2))


def test_d_of_constant():
    f = FormField.function(lambda u: np.full(u.shape[:-1], 4.0), 3)
    assert np.abs(forms.exterior_derivative(f, np.array([0.2, 0.4, -0.3]))).max() == 0.0


def test_d_of_u1_du2():
    assert forms.exterior_derivative(u1_du2(), np.array([0.3, -0.8])) == pytest.approx([1.0], abs=1e-6)


def test_d_of_function_is_gradient():
    f = FormField.function(lambda u: np.sin(u[..., 0]) * u[..., 1] ** 2, 2)
    u = np.array([0.4, 0.7])
    assert np.allclose(forms.exterior_derivative(f, u), [np.cos(0.4) * 0.49, 2 * 0.7 * np.sin(0.4)], atol=1e-6)


@given(points3)
def test_dd_vanishes(u):
    f = FormField.function(lambda v: np.sin(v[..., 0] * v[..., 1]) + np.exp(v[..., 2]) * v[..., 0], 3)
    assert np.abs(forms.exterior_derivative(forms.d(f), u)).max() <= 1e-4


@given(points3)
def test_dd_vanishes_on_one_forms(u):
    w = FormField(1, 3, lambda v: np.stack([v[..., 1] * v[..., 2], np.sin(v[..., 0]), v[..., 0] ** 3], -1))
    assert np.abs(forms.exterior_derivative(forms.d(w), u)).max() <= 1e-4


def test_component_antisymmetry():
    w = forms.d(u1_du2(3))
    u = np.array([0.1, 0.2, 0.3])
    assert w.component(0, 1)(u) == pytest.approx(1.0, abs=1e-6)
    assert w.component(1, 0)(u) == pytest.approx(-1.0, abs=1e-6)
    assert w.component(1, 1)(u) == 0.0


def test_wedge_of_differentials():
    du = [FormField(1, 3, lambda v, a=a: np.eye(3)[a] * np.ones(v.shape[:-1] + (1,))) for a in range(3)]
    w = forms.wedge(du[2], du[0])
    assert np.array_equal(w(np.zeros(3)), [0.0, -1.0, 0.0])
    with pytest.raises(DegreeError):
        forms.wedge(forms.wedge(du[0], du[1]), forms.wedge(du[1], du[2]))


def test_degree_errors():
    with pytest.raises(DegreeError):
        FormField(3, 2, lambda u: u)
    with pytest.raises(DegreeError):
        forms.exterior_derivative(FormField(2, 2, lambda u: u[..., :1]), np.zeros(2))
    with pytest.raises(DegreeError):
        u1_du2().component(0, 1)


class TestCodifferential:
    grid = PeriodicGrid((32, 32), (2 * np.pi, 2 * np.pi))

    def test_hodge_identity_on_flat_torus(self):
        flat = chart.pullback_metric(charts.flat_torus_plot())
        f = self.grid.sample(lambda u: np.cos(u[:, 0] - 2 * u[:, 1]) + np.sin(3 * u[:, 1]))
        dd = forms.codifferential_1form(flat, self.grid, forms.grid_d0(self.grid) @ f)
        assert np.abs(dd + forms.grid_laplacian(f, self.grid)).max() <= 1e-6

    def test_constant_form_is_coclosed(self):
        flat = PulledMetric.constant(np.eye(2))
        alpha = np.concatenate([np.full(self.grid.size, 0.7), np.full(self.grid.size, -1.3)])
        assert np.abs(forms.codifferential_1form(flat, self.grid, alpha)).max() <= 1e-12

    @given(st.integers(0, 2**31 - 1))
    def test_adjointness_for_a_curved_metric(self, seed):
        rng = np.random.default_rng(seed)
        M = PulledMetric.from_function(
            lambda u: (2 + np.cos(u[..., 0]) * np.sin(u[..., 1]))[..., None, None] * np.eye(2)
            + 0.4 * np.cos(u[..., 1])[..., None, None] * np.array([[0.0, 1.0], [1.0, 0.0]]), 2)
        g = PeriodicGrid((12, 10), (2 * np.pi, 2 * np.pi))
        assert forms.adjointness_residual(M, g, rng.standard_normal(g.size), rng.standard_normal(2 * g.size)) <= 1e-12

    def test_indefinite_metric_rejected(self):
        with pytest.raises(IndefiniteMetricError):
            forms.codifferential_1form(PulledMetric.constant(np.diag([1.0, -1.0])), self.grid,
                                       np.zeros(2 * self.grid.size))

    def test_d0_kills_constants(self):
        assert np.abs(forms.grid_d0(self.grid) @ np.ones(self.grid.size)).max() == 0.0
