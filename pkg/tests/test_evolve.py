import math

import numpy as np
import pytest

from weakwigner.errors import ContainmentError
from weakwigner.evolve import (
    Free,
    Harmonic,
    Potential,
    TwoStateScenario,
    interference_emergence,
    propagate,
    sweep,
    two_state_weak_value,
)
from weakwigner.grid import (
    GridSpec,
    gaussian_coherent,
    hermite_basis,
    inner_product,
    position_moments,
    random_superposition,
)
from weakwigner.weakval import Observable, weak_value_quadrature
from weakwigner.xwigner import phase_space_integral

HALF_ENERGY = Observable.poly({(2, 0): 0.5, (0, 2): 0.5})
X = Observable.poly({(1, 0): 1.0})


def second_moment(psi):
    g = psi.grid
    return float(np.sum(g.x**2 * np.abs(psi.samples) ** 2) * g.dx / psi.norm_sq())


def fidelity(a, b):
    return abs(inner_product(a, b)) ** 2 / (a.norm_sq() * b.norm_sq())


@pytest.fixture(scope="module")
def oscillator_scenario():
    g = GridSpec(512, 10.0, 1.0)
    return TwoStateScenario(
        psi_in=gaussian_coherent((1.0, 0.0), g),
        phi_fin=gaussian_coherent((0.5, 0.5), g),
        hamiltonian=Harmonic(1.0, 1.0),
        t_in=0.0,
        t_fin=2.0,
        observable=HALF_ENERGY,
        sample_times=tuple(np.linspace(0.0, 2.0, 10)),
    )


class TestHamiltonians:
    @pytest.mark.parametrize("factory", [lambda: Free(0.0), lambda: Harmonic(1.0, -1.0), lambda: Harmonic(math.nan)])
    def test_invalid_parameters(self, factory):
        with pytest.raises(ValueError):
            factory()

    def test_potential_shape_checked(self, small_grid):
        with pytest.raises(ValueError):
            Potential(1.0, np.zeros(5)).potential(small_grid)

    def test_complex_potential_rejected(self):
        with pytest.raises(ValueError):
            Potential(1.0, np.array([1.0 + 1e-3j, 0.0]))


class TestPropagate:
    def test_free_spreading(self, grid):
        xi = gaussian_coherent((0, 0), grid)
        assert second_moment(xi) == pytest.approx(0.5, abs=1e-10)
        out = propagate(xi, 0.0, 1.0, Free(1.0))
        assert second_moment(out) == pytest.approx(1.0, abs=1e-4)

    @pytest.mark.parametrize("mass,t", [(2.0, 1.0), (0.5, 0.8)])
    def test_free_spreading_mass(self, grid, mass, t):
        out = propagate(gaussian_coherent((0, 0), grid), 0.0, t, Free(mass))
        assert second_moment(out) == pytest.approx(0.5 * (1 + (t / mass) ** 2), abs=1e-4)

    @pytest.mark.parametrize("method", ["split", "exact"])
    def test_harmonic_period(self, grid, rng, method):
        psi = random_superposition(grid, rng, spread=2.5)
        out = propagate(psi, 0.0, 2 * math.pi, Harmonic(1.0, 1.0), method=method)
        assert fidelity(psi, out) > 1 - 1e-6

    def test_identity_for_zero_interval(self, grid, rng):
        psi = random_superposition(grid, rng)
        assert propagate(psi, 0.7, 0.7, Free()) is psi

    def test_reversible(self, grid, rng):
        psi = random_superposition(grid, rng, spread=2.0)
        H = Harmonic(1.0, 1.3)
        back = propagate(propagate(psi, 0.0, 0.9, H), 0.9, 0.0, H)
        assert np.max(np.abs(back.samples - psi.samples)) < 1e-10

    def test_unitary(self, grid, rng):
        psi = random_superposition(grid, rng)
        assert propagate(psi, 0.0, 0.5, Free(1.0)).norm() == pytest.approx(1.0, abs=1e-12)

    def test_split_matches_exact_oscillator(self, grid):
        psi = gaussian_coherent((1.5, -0.5), grid)
        H = Harmonic(1.0, 1.0)
        a = propagate(psi, 0.0, 1.0, H, "split")
        b = propagate(psi, 0.0, 1.0, H, "exact")
        assert fidelity(a, b) > 1 - 1e-8

    def test_coherent_state_follows_classical_orbit(self, grid):
        H = Harmonic(1.0, 1.0)
        out = propagate(gaussian_coherent((2.0, 0.0), grid), 0.0, math.pi / 2, H, "exact")
        # (x, p) = (2, 0) rotates to (0, -2) after a quarter period
        assert abs(inner_product(out, gaussian_coherent((0.0, -2.0), grid))) == pytest.approx(1.0, abs=1e-10)

    def test_constant_potential_is_global_phase(self, grid):
        psi = gaussian_coherent((0.3, 0.2), grid)
        v0 = 0.4
        a = propagate(psi, 0.0, 0.5, Potential(1.0, np.full(grid.num_points, v0)))
        b = propagate(psi, 0.0, 0.5, Free(1.0))
        assert np.max(np.abs(a.samples - np.exp(-1j * v0 * 0.5) * b.samples)) < 1e-10

    def test_boundary_hit_reports_time(self, small_grid):
        psi = gaussian_coherent((2.0, 3.0), small_grid)
        with pytest.raises(ContainmentError) as err:
            propagate(psi, 0.0, 3.0, Free(1.0))
        assert 0.0 < err.value.time < 3.0

    def test_exact_only_for_oscillator(self, grid):
        with pytest.raises(ValueError):
            propagate(gaussian_coherent((0, 0), grid), 0.0, 1.0, Free(), method="exact")


class TestEhrenfest:
    def test_position_mean_oscillates(self, grid):
        psi = gaussian_coherent((1.0, 0.5), grid)
        H = Harmonic(1.0, 1.0)
        for t in (0.3, 1.1):
            out = propagate(psi, 0.0, t, H)
            mean, _ = position_moments(out)
            assert mean == pytest.approx(math.cos(t) + 0.5 * math.sin(t), abs=1e-6)


class TestTwoState:
    def test_conserved_quantity(self, oscillator_scenario):
        rows = sweep(oscillator_scenario)
        values = np.array([r.report.value for r in rows])
        assert len(values) == 10
        assert np.max(np.abs(values - values[0])) < 1e-6
        assert all(r.report.residual_vs_alternate < 1e-6 for r in rows)

    def test_endpoint_consistency(self, oscillator_scenario):
        s = oscillator_scenario
        rep = two_state_weak_value(s, s.t_in)
        phi_back = propagate(s.phi_fin, s.t_fin, s.t_in, s.hamiltonian)
        static = weak_value_quadrature(s.observable, phi_back, s.psi_in)
        assert rep.value == pytest.approx(static.value, abs=1e-12)

    def test_overlap_modulus_constant_under_free_evolution(self, grid):
        s = TwoStateScenario(
            psi_in=gaussian_coherent((-1.0, 0.0), grid),
            phi_fin=gaussian_coherent((1.0, 0.0), grid),
            hamiltonian=Free(1.0),
            t_in=0.0,
            t_fin=1.0,
            observable=X,
            sample_times=(0.0, 0.25, 0.5, 1.0),
        )
        mods = [abs(r.overlap) for r in sweep(s)]
        assert np.ptp(mods) < 1e-10

    def test_orthogonal_pair_leaves_gaps(self, grid):
        s = TwoStateScenario(
            psi_in=hermite_basis(0, grid),
            phi_fin=hermite_basis(1, grid),
            hamiltonian=Harmonic(),
            t_in=0.0,
            t_fin=1.0,
            observable=X,
            sample_times=(0.0, 0.5, 1.0),
        )
        rows = sweep(s)
        assert all(r.report is None for r in rows)
        assert all(abs(r.overlap) < 1e-12 for r in rows)

    @pytest.mark.parametrize(
        "kw",
        [{"t_in": 1.0, "t_fin": 0.0}, {"sample_times": (0.5, 0.2)}, {"sample_times": (1.5,)}],
    )
    def test_invalid_schedule(self, grid, kw):
        base = dict(
            psi_in=gaussian_coherent((0, 0), grid),
            phi_fin=gaussian_coherent((0, 0), grid),
            hamiltonian=Free(),
            t_in=0.0,
            t_fin=1.0,
            observable=X,
        )
        with pytest.raises(ValueError):
            TwoStateScenario(**(base | kw))


class TestInterferenceEmergence:
    def test_cross_term_integral(self, oscillator_scenario):
        em = interference_emergence(oscillator_scenario, 0.7)
        assert phase_space_integral(em.cross).real == pytest.approx(2 * em.overlap.real, abs=1e-8)

    def test_orthogonal_pair_nonzero_field(self, grid):
        s = TwoStateScenario(
            psi_in=hermite_basis(0, grid),
            phi_fin=hermite_basis(1, grid),
            hamiltonian=Harmonic(),
            t_in=0.0,
            t_fin=1.0,
            observable=X,
        )
        em = interference_emergence(s, 0.5)
        assert abs(phase_space_integral(em.cross)) < 1e-8
        assert np.max(np.abs(em.cross.values)) > 0.1

    def test_identical_states(self, grid):
        # post-select on the evolved pre-selected state so phi_t = psi_t at every t
        psi = gaussian_coherent((0.5, -0.5), grid)
        s = TwoStateScenario(psi, propagate(psi, 0.0, 1.0, Harmonic()), Harmonic(), 0.0, 1.0, X)
        em = interference_emergence(s, 0.4)
        assert np.allclose(em.cross.values, 2 * em.w_psi.values, atol=1e-12)
