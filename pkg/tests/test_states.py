import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hartree_dm.lattice import build_grid
from hartree_dm.operators import ConstraintError
from hartree_dm.states import (
    EntropyError,
    fermi_sea,
    make_custom_entropy,
    make_entropy,
    reference_state,
    validate_entropy,
)

# f(S'(x)) values frozen from the closed forms 1/(e^z + 1), 1/(e^z - 1), e^{-z}
FERMI_AT_1 = 0.2689414213699951
BOSE_AT_0_MU_M1 = 0.5819767068693265
BOLTZ_AT_1 = 0.36787944117144233


def test_occupations_match_closed_forms():
    fermion = make_entropy("fermion", 1.0, 0.0)
    assert fermion.f(np.array([0.0]))[0] == pytest.approx(0.5, abs=1e-16)
    assert fermion.f(np.array([1.0]))[0] == pytest.approx(FERMI_AT_1, abs=1e-16)
    assert make_entropy("boson", 1.0, -1.0).f(np.array([0.0]))[0] == pytest.approx(BOSE_AT_0_MU_M1, abs=1e-15)
    boltzon = make_entropy("boltzon", 1.0, 0.0)
    assert boltzon.f(np.array([1.0]))[0] == pytest.approx(BOLTZ_AT_1, abs=1e-16)
    assert boltzon.f(np.array([0.0]))[0] == 1.0


def test_occupations_far_tail_do_not_overflow():
    with np.errstate(over="raise", invalid="raise", divide="raise"):
        for spec in (make_entropy("fermion", 0.1, 0.0), make_entropy("boson", 0.1, -1.0), make_entropy("boltzon", 0.1, 0.0)):
            g = spec.occupation(np.array([0.0, 1e3, 1e6]))
            assert np.all(np.isfinite(g)) and g[-1] == 0.0


@pytest.mark.parametrize("family,mu", [("fermion", 0.3), ("fermion", -2.0), ("boson", -1.0), ("boltzon", -0.5)])
def test_derivative_inverts_occupation(family, mu):
    spec = make_entropy(family, 0.7, mu)
    x = np.linspace(0.01, 0.99, 50)
    d = spec.dS(x)
    mask = d >= 0
    np.testing.assert_allclose(spec.f(d[mask]), x[mask], rtol=1e-12)
    validate_entropy(spec)


@pytest.mark.parametrize("family,mu", [("fermion", 0.0), ("boson", -1.0), ("boltzon", 0.0)])
def test_entropy_derivative_matches_finite_difference(family, mu):
    spec = make_entropy(family, 1.3, mu)
    x = np.linspace(0.1, 0.9, 9)
    h = 1e-6
    fd = (spec.S(x + h) - spec.S(x - h)) / (2 * h)
    np.testing.assert_allclose(spec.dS(x), fd, rtol=1e-7, atol=1e-8)
    fd2 = (spec.dS(x + h) - spec.dS(x - h)) / (2 * h)
    np.testing.assert_allclose(spec.d2S(x), fd2, rtol=1e-6)


def test_invalid_chemical_potentials():
    with pytest.raises(EntropyError):
        make_entropy("boson", 1.0, 0.0)
    with pytest.raises(EntropyError):
        make_entropy("boltzon", 1.0, 0.1)
    with pytest.raises(EntropyError):
        make_entropy("fermion", 0.0, 0.0)
    with pytest.raises(EntropyError):
        make_entropy("anyon", 1.0, 0.0)


def test_custom_entropy_validation():
    good = make_entropy("fermion", 1.0, 0.0)
    spec = make_custom_entropy(good.S, good.dS, good.f)
    assert spec.family == "custom"
    with pytest.raises(EntropyError):
        make_custom_entropy(good.S, lambda x: -good.dS(x), good.f)


def test_custom_entropy_outside_unit_interval_rejected():
    good = make_entropy("fermion", 1.0, 0.0)
    spec = make_custom_entropy(good.S, good.dS, good.f)
    bad = type(spec)("custom", 1.0, 0.0, spec.S, spec.dS, lambda r: 1.5 + 0 * r)
    with pytest.raises(ConstraintError):
        reference_state(build_grid(1, 1.0, 4), bad)


def test_fermi_sea():
    grid = build_grid(2, 2 * np.pi, 4)
    ref = fermi_sea(grid, 1.5)
    assert ref.zero_temperature
    assert int(ref.occupations.sum()) == 5
    assert ref.density == pytest.approx(5 / (2 * np.pi) ** 2)
    with pytest.raises(ValueError):
        fermi_sea(grid, 0.0)


def test_reference_state_diagonal():
    grid = build_grid(1, 2 * np.pi, 4)
    ref = reference_state(grid, make_entropy("fermion", 1.0, 0.0))
    np.testing.assert_allclose(np.diag(ref.matrix()).real, 1 / (1 + np.exp(grid.dispersion)))
    assert not ref.zero_temperature


@settings(max_examples=30, deadline=None)
@given(T=st.floats(0.05, 10.0), mu=st.floats(-5.0, 5.0))
def test_fermion_occupations_in_unit_interval(T, mu):
    ref = reference_state(build_grid(1, 2 * np.pi, 8), make_entropy("fermion", T, mu))
    assert np.all((ref.occupations >= 0) & (ref.occupations <= 1))
