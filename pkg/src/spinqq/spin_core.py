"""Spin-j linear algebra: operators, coherent states, Hilbert-Schmidt geometry.

Angular convention used throughout the package: the polar angle ``theta_bar``
of a :class:`SphereDirection` is measured from the SOUTH pole, so the extremal
state |j,-j> sits at ``theta_bar = 0`` and |j,j> at ``theta_bar = pi``.  The
usual north-pole polar angle is ``theta = pi - theta_bar``; this mapping is
stated here once and nowhere else.

Basis indexing: amplitude index k corresponds to m = k - j, i.e. amplitudes
run over m ascending from -j (index 0) to +j (index 2j).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

NORM_TOL = 1e-12
HERM_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
AXIS_TOL = 1e-10
PHASE_TOL = 1e-10


@dataclass(frozen=True)
class SpinJ:
    """Spin quantum number stored as the integer 2j."""

    two_j: int

    def __post_init__(self):
        if not isinstance(self.two_j, (int, np.integer)) or self.two_j < 1:
            raise ValueError(f"two_j must be a positive integer, got {self.two_j!r}")

    @property
    def j(self) -> float:
        return self.two_j / 2

    @property
    def dim(self) -> int:
        return self.two_j + 1

    def m_values(self) -> np.ndarray:
        """Magnetic quantum numbers, ascending from -j to +j."""
        return np.arange(self.dim) - self.j


@dataclass(frozen=True)
class SphereDirection:
    """Point on the unit sphere: polar angle from the south pole, azimuth."""

    theta_bar: float
    phi: float

    def __post_init__(self):
        tb = float(self.theta_bar)
        if not -1e-12 <= tb <= np.pi + 1e-12:
            raise ValueError(f"theta_bar out of [0, pi]: {tb}")
        tb = min(max(tb, 0.0), np.pi)
        ph = float(self.phi) % (2 * np.pi)
        object.__setattr__(self, "theta_bar", tb)
        object.__setattr__(self, "phi", ph)

    @property
    def unit_vector(self) -> np.ndarray:
        """Cartesian unit vector; south pole (theta_bar=0) maps to (0,0,-1)."""
        st, ct = np.sin(self.theta_bar), np.cos(self.theta_bar)
        return np.array([st * np.cos(self.phi), st * np.sin(self.phi), -ct])

    @staticmethod
    def from_vector(v) -> "SphereDirection":
        v = np.asarray(v, dtype=float)
        n = np.linalg.norm(v)
        if n == 0:
            raise ValueError("zero vector has no direction")
        v = v / n
        theta_bar = np.arccos(np.clip(-v[2], -1.0, 1.0))
        phi = float(np.arctan2(v[1], v[0])) % (2 * np.pi)
        return SphereDirection(float(theta_bar), phi)


def angular_distance(a: SphereDirection, b: SphereDirection) -> float:
    """Great-circle angle between two directions, in [0, pi]."""
    return float(np.arccos(np.clip(np.dot(a.unit_vector, b.unit_vector), -1.0, 1.0)))


def directions_to_vectors(directions) -> np.ndarray:
    """Stack unit vectors of an iterable of SphereDirection into (n, 3)."""
    return np.array([d.unit_vector for d in directions]).reshape(-1, 3)


def vectors_to_directions(vectors) -> tuple:
    return tuple(SphereDirection.from_vector(v) for v in np.atleast_2d(vectors))


@dataclass(frozen=True)
class PureState:
    """Normalized complex amplitude vector over |j,m>, m ascending."""

    spin: SpinJ
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).copy()
        if amps.shape != (self.spin.dim,):
            raise ValueError(f"expected {self.spin.dim} amplitudes, got {amps.shape}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > 1e-8:
            raise ValueError(f"state not normalized: |psi| = {norm}")
        if abs(norm - 1.0) > NORM_TOL:
            amps = amps / norm
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    def inner(self, other: "PureState") -> complex:
        self._check_spin(other.spin)
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def density(self) -> "DensityMatrix":
        return DensityMatrix(self.spin, np.outer(self.amplitudes, self.amplitudes.conj()))

    def equals_up_to_phase(self, other: "PureState", tol: float = PHASE_TOL) -> bool:
        return abs(abs(self.inner(other)) - 1.0) < tol

    def _check_spin(self, spin: SpinJ):
        if spin != self.spin:
            raise ValueError(f"spin mismatch: {self.spin} vs {spin}")

    def to_json_dict(self) -> dict:
        return {
            "two_j": self.spin.two_j,
            "amplitudes": [[float(a.real), float(a.imag)] for a in self.amplitudes],
        }

    @staticmethod
    def from_json_dict(data: dict) -> "PureState":
        spin = SpinJ(int(data["two_j"]))
        amps = np.array([complex(re, im) for re, im in data["amplitudes"]])
        return PureState(spin, amps)


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite matrix of dimension 2j+1."""

    spin: SpinJ
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex).copy()
        d = self.spin.dim
        if m.shape != (d, d):
            raise ValueError(f"expected {d}x{d} matrix, got {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > HERM_TOL:
            raise ValueError("matrix is not Hermitian")
        if abs(np.trace(m).real - 1.0) > 1e-8:
            raise ValueError(f"trace is {np.trace(m).real}, expected 1")
        min_eig = float(np.linalg.eigvalsh(m)[0])
        if min_eig < -PSD_TOL:
            raise ValueError(f"matrix is not positive semidefinite (min eig {min_eig})")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def purity(self) -> float:
        return float(np.sum(np.abs(self.matrix) ** 2))

    def to_json_dict(self) -> dict:
        return {
            "two_j": self.spin.two_j,
            "matrix": [[[float(x.real), float(x.imag)] for x in row] for row in self.matrix],
        }

    @staticmethod
    def from_json_dict(data: dict) -> "DensityMatrix":
        spin = SpinJ(int(data["two_j"]))
        m = np.array([[complex(re, im) for re, im in row] for row in data["matrix"]])
        return DensityMatrix(spin, m)


@dataclass(frozen=True)
class ThermalSpec:
    """Hamiltonian and inverse temperature for a Gibbs state."""

    hamiltonian: np.ndarray
    beta: float

    def __post_init__(self):
        h = np.asarray(self.hamiltonian, dtype=complex)
        if h.ndim != 2 or h.shape[0] != h.shape[1]:
            raise ValueError("hamiltonian must be square")
        if np.max(np.abs(h - h.conj().T)) > HERM_TOL:
            raise ValueError("hamiltonian is not Hermitian")
        if not np.isfinite(self.beta) or self.beta < 0:
            raise ValueError(f"beta must be finite and >= 0, got {self.beta}")
        object.__setattr__(self, "hamiltonian", h)


def load_state_json(path) -> "PureState | DensityMatrix":
    """Load a pure state or density matrix from a JSON file, keyed by content."""
    with open(path) as fh:
        data = json.load(fh)
    if "amplitudes" in data:
        return PureState.from_json_dict(data)
    if "matrix" in data:
        return DensityMatrix.from_json_dict(data)
    raise ValueError(f"{path}: neither 'amplitudes' nor 'matrix' present")


def as_density_matrix(state) -> DensityMatrix:
    return state.density() if isinstance(state, PureState) else state


@lru_cache(maxsize=None)
def spin_operators(spin: SpinJ) -> tuple:
    """Angular momentum matrices (Jx, Jy, Jz) in the ascending-m basis."""
    j = spin.j
    m = spin.m_values()
    jz = np.diag(m).astype(complex)
    # J+ |j,m> = sqrt(j(j+1) - m(m+1)) |j,m+1>
    raising = np.sqrt(j * (j + 1) - m[:-1] * (m[:-1] + 1))
    jp = np.zeros((spin.dim, spin.dim), dtype=complex)
    jp[np.arange(1, spin.dim), np.arange(spin.dim - 1)] = raising
    jm = jp.conj().T
    jx = (jp + jm) / 2
    jy = -0.5j * (jp - jm)
    for op in (jx, jy, jz):
        op.flags.writeable = False
    return jx, jy, jz


@lru_cache(maxsize=None)
def _sqrt_binom(two_j: int) -> np.ndarray:
    return np.sqrt([comb(two_j, k) for k in range(two_j + 1)])


def coherent_amplitudes(spin: SpinJ, theta_bar, phi) -> np.ndarray:
    """Amplitude vectors of coherent states; broadcasts over arrays of angles.

    Returns shape (..., dim) with component k = sqrt(C(2j,k)) sin^k(tb/2)
    cos^(2j-k)(tb/2) exp(-i k phi).
    """
    tb = np.asarray(theta_bar, dtype=float)[..., None]
    ph = np.asarray(phi, dtype=float)[..., None]
    k = np.arange(spin.dim)
    s, c = np.sin(tb / 2), np.cos(tb / 2)
    mag = _sqrt_binom(spin.two_j) * s**k * c ** (spin.two_j - k)
    return mag * np.exp(-1j * k * ph)


def coherent_state(spin: SpinJ, direction: SphereDirection) -> PureState:
    """Spin coherent state whose mean spin points along `direction`."""
    return PureState(spin, coherent_amplitudes(spin, direction.theta_bar, direction.phi))


def coherent_matrix_from_vectors(spin: SpinJ, vectors: np.ndarray) -> np.ndarray:
    """Coherent amplitudes (n, dim) for unit vectors (n, 3)."""
    v = np.atleast_2d(vectors)
    theta_bar = np.arccos(np.clip(-v[:, 2], -1.0, 1.0))
    phi = np.arctan2(v[:, 1], v[:, 0])
    return coherent_amplitudes(spin, theta_bar, phi)


def husimi(rho: DensityMatrix, direction: SphereDirection) -> float:
    """Coherent-state expectation <alpha|rho|alpha>, real in [0, 1]."""
    a = coherent_amplitudes(rho.spin, direction.theta_bar, direction.phi)
    return float(np.real(a.conj() @ rho.matrix @ a))


def husimi_vectorized(rho_matrix: np.ndarray, amp_matrix: np.ndarray) -> np.ndarray:
    """Diagonal coherent expectations for a stack of amplitude rows."""
    return np.einsum("nd,de,ne->n", amp_matrix.conj(), rho_matrix, amp_matrix).real


def hs_distance(a: DensityMatrix, b: DensityMatrix) -> float:
    """Hilbert-Schmidt (Frobenius) distance between density matrices."""
    if a.spin != b.spin:
        raise ValueError(f"dimension mismatch: {a.spin} vs {b.spin}")
    return float(np.linalg.norm(a.matrix - b.matrix))


def rotation_unitary(spin: SpinJ, axis, angle: float) -> np.ndarray:
    """exp(i * angle * axis . J) via eigendecomposition of the generator."""
    axis = np.asarray(axis, dtype=float)
    if abs(np.linalg.norm(axis) - 1.0) > AXIS_TOL:
        raise ValueError(f"axis must be a unit vector, |axis| = {np.linalg.norm(axis)}")
    jx, jy, jz = spin_operators(spin)
    generator = axis[0] * jx + axis[1] * jy + axis[2] * jz
    evals, evecs = np.linalg.eigh(generator)
    return (evecs * np.exp(1j * angle * evals)) @ evecs.conj().T


def rotate(obj, axis, angle: float):
    """Apply exp(i angle n.J) to a PureState or DensityMatrix."""
    if isinstance(obj, PureState):
        u = rotation_unitary(obj.spin, axis, angle)
        return PureState(obj.spin, u @ obj.amplitudes)
    if isinstance(obj, DensityMatrix):
        u = rotation_unitary(obj.spin, axis, angle)
        m = u @ obj.matrix @ u.conj().T
        m = (m + m.conj().T) / 2
        return DensityMatrix(obj.spin, m)
    raise TypeError(f"cannot rotate object of type {type(obj)!r}")


def rotation_matrix_3d(axis, angle: float) -> np.ndarray:
    """SO(3) matrix moving sphere points the same way `rotate` moves states.

    exp(i angle n.J) sends a state with mean spin v to one with mean spin
    R(-angle) v, so the induced point map is the Rodrigues rotation by -angle.
    """
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    k = np.array(
        [[0, -axis[2], axis[1]], [axis[2], 0, -axis[0]], [-axis[1], axis[0], 0]]
    )
    return np.eye(3) - np.sin(angle) * k + (1 - np.cos(angle)) * (k @ k)


def rotate_direction(direction: SphereDirection, axis, angle: float) -> SphereDirection:
    """Image of a sphere direction under the point map induced by `rotate`."""
    return SphereDirection.from_vector(rotation_matrix_3d(axis, angle) @ direction.unit_vector)


def thermal_state(spec: ThermalSpec) -> DensityMatrix:
    """Gibbs state exp(-beta H) / tr exp(-beta H)."""
    h = spec.hamiltonian
    spin = SpinJ(h.shape[0] - 1)
    evals, evecs = np.linalg.eigh(h)
    # shift by the ground energy so the exponentials never overflow
    w = np.exp(-spec.beta * (evals - evals[0]))
    m = (evecs * (w / w.sum())) @ evecs.conj().T
    m = (m + m.conj().T) / 2
    return DensityMatrix(spin, m)


def maximally_mixed(spin: SpinJ) -> DensityMatrix:
    return DensityMatrix(spin, np.eye(spin.dim) / spin.dim)


def basis_state(spin: SpinJ, m) -> PureState:
    """Eigenstate |j,m> of Jz."""
    idx = m + spin.j
    if abs(idx - round(idx)) > 1e-9 or not 0 <= round(idx) < spin.dim:
        raise ValueError(f"m = {m} invalid for j = {spin.j}")
    amps = np.zeros(spin.dim, dtype=complex)
    amps[int(round(idx))] = 1.0
    return PureState(spin, amps)


def random_direction(rng: np.random.Generator) -> SphereDirection:
    z = rng.uniform(-1.0, 1.0)
    phi = rng.uniform(0.0, 2 * np.pi)
    return SphereDirection(float(np.arccos(-z)), float(phi))


def random_pure_state(spin: SpinJ, rng: np.random.Generator) -> PureState:
    amps = rng.normal(size=spin.dim) + 1j * rng.normal(size=spin.dim)
    return PureState(spin, amps / np.linalg.norm(amps))


def random_density_matrix(spin: SpinJ, rng: np.random.Generator, rank=None) -> DensityMatrix:
    """Ginibre-induced random state of the given rank (full rank by default)."""
    d = spin.dim
    r = d if rank is None else rank
    g = rng.normal(size=(d, r)) + 1j * rng.normal(size=(d, r))
    m = g @ g.conj().T
    m = m / np.trace(m).real
    m = (m + m.conj().T) / 2
    return DensityMatrix(spin, m)
