import math

import numpy as np
import pytest

from qeswkb import eigensolver
from qeswkb.eigensolver import (
    Mesh,
    count_sign_changes,
    critical_N,
    lowest_eigen,
    morse_bound_count,
    oscillator_mesh,
    uniform_mesh,
)
from qeswkb.errors import (
    ConvergenceError,
    MeshError,
    NodePlacementError,
    SearchError,
    SpectrumExhaustedError,
)
from qeswkb.potentials import EvenPolynomial, Morse, SexticReduced

SQRT2 = math.sqrt(2.0)
SQRT3 = math.sqrt(3.0)

HARMONIC = EvenPolynomial((0.0, 0.5))


def test_harmonic_ladder():
    spectrum = lowest_eigen(HARMONIC, 12, tol=1e-12)
    expected = np.arange(12) + 0.5
    assert np.max(np.abs(spectrum.energies - expected)) < 1e-10


def test_harmonic_ground_state_values():
    spectrum = lowest_eigen(HARMONIC, 3, tol=1e-12)
    x = spectrum.mesh.nodes
    psi0 = np.pi**-0.25 * np.exp(-0.5 * x * x)
    column = spectrum.eigenvectors[:, 0]
    assert np.max(np.abs(column - psi0)) < 1e-10


def test_quadrature_normalization_and_parity():
    spectrum = lowest_eigen(HARMONIC, 6, tol=1e-12)
    h = spectrum.mesh.h
    lam = np.exp(
        eigensolver._hermite_log_weights(spectrum.mesh.nodes / h, spectrum.mesh.size)
    )
    for n in range(6):
        psi = spectrum.eigenvectors[:, n]
        norm = float(np.sum(h * lam * psi * psi))
        assert norm == pytest.approx(1.0, abs=1e-10)
        flipped = psi[::-1] * (-1.0) ** n
        assert np.max(np.abs(flipped - psi)) < 1e-8


def test_node_counts_match_level_index():
    spectrum = lowest_eigen(SexticReduced(0.0), 11, tol=1e-10)
    for n in range(11):
        assert count_sign_changes(spectrum.eigenvectors[:, n]) == n


def test_energies_sorted_and_deltas_cauchy():
    spectrum = lowest_eigen(SexticReduced(0.5), 8, tol=1e-11)
    assert np.all(np.diff(spectrum.energies) > 0)
    deltas = spectrum.refinement_deltas
    if len(deltas) >= 2:
        assert deltas[-1] <= deltas[-2]
    assert np.all(spectrum.converged_digits >= 9)


def test_sextic_qes_levels_n1():
    spectrum = lowest_eigen(SexticReduced(1.0), 4, tol=1e-11)
    assert spectrum.energies[0] == pytest.approx(1.5 - SQRT3, abs=1e-8)
    # 1.5 + sqrt(3) is the second even level: state index 2
    assert spectrum.energies[2] == pytest.approx(1.5 + SQRT3, abs=1e-8)


def test_sextic_qes_levels_n2():
    # the three exactly solvable even levels sit at state indices 0, 2, 4
    spectrum = lowest_eigen(SexticReduced(2.0), 6, tol=1e-11)
    expected = sorted((-1.5, 4.5 - math.sqrt(8.0), 4.5 + math.sqrt(8.0)))
    assert spectrum.energies[0] == pytest.approx(expected[0], abs=1e-8)
    assert spectrum.energies[2] == pytest.approx(expected[1], abs=1e-8)
    assert spectrum.energies[4] == pytest.approx(expected[2], abs=1e-8)


def test_morse_spectrum_matches_closed_form():
    spec = Morse(1.0, 8.0, SQRT2, 0.0)
    assert morse_bound_count(spec) == 6
    spectrum = lowest_eigen(spec, 6, tol=1e-10)
    n = np.arange(6, dtype=float)
    exact = 0.5 * SQRT2 * n * (16.0 - SQRT2 * n)
    assert np.max(np.abs(spectrum.energies - exact)) < 1e-6
    assert spectrum.mesh.kind == eigensolver.UNIFORM
    for idx in range(6):
        assert count_sign_changes(spectrum.eigenvectors[:, idx]) == idx


def test_morse_request_beyond_bound_count():
    spec = Morse(1.0, 8.0, SQRT2, 0.0)
    with pytest.raises(SpectrumExhaustedError):
        lowest_eigen(spec, 7)


def test_mesh_validation():
    with pytest.raises(MeshError):
        Mesh(eigensolver.OSCILLATOR, 4, 0.5, np.linspace(-1, 1, 4))
    with pytest.raises(MeshError):
        Mesh(eigensolver.OSCILLATOR, 16, -0.5, np.linspace(-1, 1, 16))
    with pytest.raises(MeshError):
        Mesh(eigensolver.OSCILLATOR, 16, 0.5, np.zeros(16))
    with pytest.raises(MeshError):
        Mesh("hexagonal", 16, 0.5, np.linspace(-1, 1, 16))
    with pytest.raises(MeshError):
        lowest_eigen(HARMONIC, 0)
    with pytest.raises(MeshError):
        lowest_eigen(HARMONIC, 3, tol=-1.0)


def test_oscillator_mesh_shape():
    mesh = oscillator_mesh(64, 0.3)
    assert mesh.size == 64 and mesh.kind == eigensolver.OSCILLATOR
    assert np.all(np.diff(mesh.nodes) > 0)
    uni = uniform_mesh(32, -1.0, 1.0)
    assert uni.size == 32 and uni.kind == eigensolver.UNIFORM


def test_node_placement_overflow():
    # a mesh node deep under the exponential wall overflows the potential
    spec = Morse(1.0, 8.0, SQRT2, 0.0)
    mesh = uniform_mesh(16, -600.0, 6.0)
    with np.errstate(over="ignore", invalid="ignore"):
        with pytest.raises(NodePlacementError):
            eigensolver.build_hamiltonian(spec, mesh)


def test_convergence_error_carries_best_spectrum():
    with pytest.raises(ConvergenceError) as excinfo:
        lowest_eigen(SexticReduced(0.0), 40, tol=1e-14, m_cap=512)
    best = excinfo.value.best
    assert best is not None
    assert best.energies.shape == (40,)
    assert "refinement stalled" in str(excinfo.value)


def test_critical_index_bracket():
    value = critical_N(tol=1e-3)
    assert abs(value - 0.73295) < 2e-3


def test_critical_index_bad_bracket():
    with pytest.raises(SearchError):
        critical_N(tol=1e-3, lo=0.8, hi=0.9)


def test_count_sign_changes_threshold():
    # tail noise below the relative threshold must not register as nodes
    values = np.array([1.0, 0.5, 1e-12, -1e-13, 1e-12, 0.3, 0.8])
    assert count_sign_changes(values) == 0
    values = np.array([1.0, -1.0, 1.0])
    assert count_sign_changes(values) == 2
