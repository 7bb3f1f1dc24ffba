"""Tests for Lorentz transformations, Wigner phases and wave packets."""

import numpy as np
import pytest
from pydantic import ValidationError

from relativity.utils import (ETA, FourVector, LorentzTransform, WignerAngle, angle_distance, boost, boost_z,
                              direction_rotation, little_group_element, random_light_like, random_lorentz, rotation,
                              stabilizer_residual, standard_transform, wigner_phase)
from relativity.wavepacket_util import (PacketSample, PolarizationState, WavePacket, apply_wigner_phase,
                                        polarization_density, transform_wavepacket)
from utils.utils_basic import InvalidInputError

K = FourVector.standard()


def z_packet():
    return WavePacket(direction=(0, 0, 1),
                      samples=[PacketSample(omega=1.0, weight=0.5, f_plus=1.0, f_minus=0.0),
                               PacketSample(omega=3.0, weight=0.5, f_plus=0.6, f_minus=0.8j)])


class TestLorentzTransform:
    """Tests for the transformation type and its constructors."""

    def test_rejects_non_lorentz(self):
        """Matrices that do not preserve the metric are rejected."""
        with pytest.raises(ValidationError):
            LorentzTransform(m=2 * np.eye(4))

    def test_rejects_time_reversal(self):
        """Non-orthochronous matrices are rejected."""
        with pytest.raises(ValidationError):
            LorentzTransform(m=np.diag([-1.0, 1.0, 1.0, -1.0]))

    def test_inverse(self, rng):
        """eta L^T eta inverts the transformation."""
        lorentz = random_lorentz(rng)
        np.testing.assert_allclose((lorentz @ lorentz.inverse()).m, np.eye(4), atol=1e-12)

    def test_boost_superluminal(self):
        """Velocities at or above c are rejected."""
        with pytest.raises(InvalidInputError):
            boost([0.6, 0.0, 0.8])

    def test_boost_along_z_matches_rapidity(self):
        """A velocity tanh(chi) along z equals boost_z(chi)."""
        np.testing.assert_allclose(boost([0, 0, np.tanh(0.8)]).m, boost_z(0.8).m, atol=1e-14)


class TestDirectionRotation:
    """Tests for direction_rotation."""

    def test_zero_angle(self):
        """theta = 0 is the identity for any azimuth."""
        np.testing.assert_allclose(direction_rotation(0.0, 1.234).m, np.eye(4), atol=1e-15)

    def test_quarter_turn(self):
        """(pi/2, 0) takes (1, 0, 0, 1) to (1, 1, 0, 0)."""
        np.testing.assert_allclose(direction_rotation(np.pi / 2, 0.0).m @ [1, 0, 0, 1], [1, 1, 0, 0], atol=1e-15)

    def test_maps_z_to_direction(self, rng):
        """The z axis goes to (sin t cos p, sin t sin p, cos t)."""
        for _ in range(20):
            theta, phi = rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi)
            image = direction_rotation(theta, phi).m @ [1, 0, 0, 1]
            expected = [1, np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)]
            np.testing.assert_allclose(image, expected, atol=1e-14)

    def test_proper_rotation(self, rng):
        """Rotations are orthogonal with unit determinant."""
        for _ in range(100):
            r = direction_rotation(rng.uniform(-10, 10), rng.uniform(-10, 10)).m[1:, 1:]
            np.testing.assert_allclose(r.T @ r, np.eye(3), atol=1e-14)
            assert abs(np.linalg.det(r) - 1) <= 1e-14


class TestBoostZ:
    """Tests for boost_z."""

    def test_zero_rapidity(self):
        """chi = 0 is the identity."""
        np.testing.assert_array_equal(boost_z(0.0).m, np.eye(4))

    def test_standard_vector_eigenvector(self):
        """k is scaled by exp(chi)."""
        np.testing.assert_allclose(boost_z(0.7).m @ [1, 0, 0, 1], np.exp(0.7) * np.array([1, 0, 0, 1]), atol=1e-14)

    def test_additive_rapidity(self):
        """Rapidities add under composition."""
        np.testing.assert_allclose((boost_z(0.3) @ boost_z(1.1)).m, boost_z(1.4).m, atol=1e-13)

    def test_non_finite(self):
        """Infinite rapidity is rejected."""
        with pytest.raises(InvalidInputError):
            boost_z(np.inf)


class TestStandardTransform:
    """Tests for standard_transform."""

    def test_standard_vector(self):
        """L(k) is the identity."""
        np.testing.assert_allclose(standard_transform(K).m, np.eye(4), atol=1e-15)

    def test_collinear(self):
        """A doubled k needs only a boost by ln 2."""
        np.testing.assert_allclose(standard_transform(FourVector(t=2, x=0, y=0, z=2)).m, boost_z(np.log(2)).m, atol=1e-14)

    def test_perpendicular(self):
        """A momentum along x needs the quarter-turn rotation."""
        p = FourVector(t=1, x=1, y=0, z=0)
        lorentz = standard_transform(p)
        np.testing.assert_allclose(lorentz.m, direction_rotation(np.pi / 2, 0).m, atol=1e-15)
        np.testing.assert_allclose(lorentz.m @ K.as_array(), p.as_array(), atol=1e-15)

    def test_maps_k_to_p(self, rng):
        """L(p) k = p for random momenta, including the -z direction."""
        momenta = [random_light_like(rng) for _ in range(50)] + [FourVector(t=1.5, x=0, y=0, z=-1.5)]
        for p in momenta:
            np.testing.assert_allclose(standard_transform(p).m @ K.as_array(), p.as_array(), atol=1e-9)

    def test_not_light_like(self):
        """Massive momenta are rejected."""
        with pytest.raises(InvalidInputError):
            standard_transform(FourVector(t=2, x=0, y=0, z=1))

    def test_past_pointing(self):
        """Negative frequencies are rejected."""
        with pytest.raises(InvalidInputError):
            standard_transform(FourVector(t=-1, x=0, y=0, z=-1))


class TestWignerPhase:
    """Tests for little-group elements and Wigner phases."""

    def test_identity(self):
        """The identity has the identity as little-group element."""
        np.testing.assert_allclose(little_group_element(LorentzTransform.identity(), K).m, np.eye(4), atol=1e-15)

    def test_collinear_boost(self):
        """A boost along k only changes the frequency, W is trivial."""
        np.testing.assert_allclose(little_group_element(boost_z(1.3), K).m, np.eye(4), atol=1e-12)
        assert angle_distance(wigner_phase(boost_z(1.3), K).theta, 0.0) <= 1e-12

    def test_rotation_about_k(self):
        """R_z(gamma) gives the phase -gamma."""
        for gamma in (0.7, 2.0, 4.5):
            assert angle_distance(wigner_phase(rotation("z", gamma), K).theta, -gamma) <= 1e-12

    def test_normalized_angle(self):
        """The phase lies in [0, 2 pi)."""
        theta = wigner_phase(rotation("z", 0.7), K).theta
        assert 0 <= theta < 2 * np.pi
        assert theta == pytest.approx(2 * np.pi - 0.7, abs=1e-12)

    def test_stabilizer(self, rng):
        """W leaves k invariant."""
        for _ in range(1000):
            w = little_group_element(random_lorentz(rng), random_light_like(rng))
            assert stabilizer_residual(w) <= 1e-8

    def test_cocycle(self, rng):
        """Phases add along composed transformations."""
        for _ in range(1000):
            first, second, p = random_lorentz(rng), random_lorentz(rng), random_light_like(rng)
            combined = wigner_phase(second @ first, p).theta
            chained = wigner_phase(second, first.apply(p)).theta + wigner_phase(first, p).theta
            assert angle_distance(combined, chained) <= 1e-9

    def test_frequency_independent(self, rng):
        """Only the direction of p matters."""
        for _ in range(100):
            lorentz, p = random_lorentz(rng), random_light_like(rng)
            scaled = FourVector.from_array(3.7 * p.as_array())
            assert angle_distance(wigner_phase(lorentz, p).theta, wigner_phase(lorentz, scaled).theta) <= 1e-9

    def test_angle_wraps(self):
        """Angles are reduced modulo 2 pi."""
        assert WignerAngle(theta=-0.5).theta == pytest.approx(2 * np.pi - 0.5)
        assert WignerAngle(theta=2 * np.pi).theta == 0.0


class TestWavePacket:
    """Tests for wave packet transformation and reduction."""

    def test_unnormalized_rejected(self):
        """Packets must be normalized."""
        with pytest.raises(ValidationError):
            WavePacket(direction=(0, 0, 1), samples=[PacketSample(omega=1.0, weight=1.0, f_plus=1.0, f_minus=1.0)])

    def test_non_positive_frequency_rejected(self):
        """Frequencies must be positive."""
        with pytest.raises(ValidationError):
            PacketSample(omega=0.0, weight=1.0, f_plus=1.0, f_minus=0.0)

    def test_identity(self):
        """The identity leaves the packet unchanged."""
        packet = z_packet()
        transformed = transform_wavepacket(LorentzTransform.identity(), packet)
        np.testing.assert_allclose(transformed.direction, packet.direction, atol=1e-15)
        for before, after in zip(packet.samples, transformed.samples):
            assert after.omega == pytest.approx(before.omega)
            assert after.f_plus == pytest.approx(before.f_plus)
            assert after.f_minus == pytest.approx(before.f_minus)

    def test_boost_along_direction(self):
        """A z boost rescales frequencies and leaves the amplitudes alone."""
        packet = z_packet()
        transformed = transform_wavepacket(boost_z(0.4), packet)
        for before, after in zip(packet.samples, transformed.samples):
            assert after.omega == pytest.approx(np.exp(0.4) * before.omega, rel=1e-12)
            assert after.f_plus == pytest.approx(before.f_plus, abs=1e-12)
            assert after.f_minus == pytest.approx(before.f_minus, abs=1e-12)

    def test_rotation_about_direction(self):
        """R_z(gamma) multiplies f+ by exp(-i gamma) and f- by exp(i gamma)."""
        packet, gamma = z_packet(), 0.9
        transformed = transform_wavepacket(rotation("z", gamma), packet)
        for before, after in zip(packet.samples, transformed.samples):
            assert after.omega == pytest.approx(before.omega)
            assert after.f_plus == pytest.approx(np.exp(-1j * gamma) * before.f_plus, abs=1e-12)
            assert after.f_minus == pytest.approx(np.exp(1j * gamma) * before.f_minus, abs=1e-12)

    def test_normalization_preserved(self, rng):
        """Transformations keep the packet norm."""
        packet = z_packet()
        for _ in range(20):
            assert abs(transform_wavepacket(random_lorentz(rng), packet).norm() - 1) <= 1e-10

    def test_reduction_commutes_with_transformation(self, rng):
        """Reducing after transforming equals applying the doubled Wigner phase to the reduced state."""
        packet = WavePacket(direction=(1, 2, -0.5),
                            samples=[PacketSample(omega=0.5, weight=0.5, f_plus=0.6, f_minus=0.8j),
                                     PacketSample(omega=2.0, weight=0.5, f_plus=0.6j, f_minus=0.8)])
        for _ in range(20):
            lorentz = random_lorentz(rng)
            theta = wigner_phase(lorentz, packet.momentum(packet.samples[0]))
            reduced = polarization_density(transform_wavepacket(lorentz, packet)).rho
            expected = apply_wigner_phase(polarization_density(packet), theta).rho
            np.testing.assert_allclose(reduced, expected, atol=1e-10)


class TestPolarization:
    """Tests for polarization_density and apply_wigner_phase."""

    def test_pure_plus(self):
        """A pure + helicity packet reduces to |0><0|."""
        packet = WavePacket(direction=(0, 0, 1), samples=[PacketSample(omega=1.0, weight=1.0, f_plus=1.0, f_minus=0.0)])
        np.testing.assert_allclose(polarization_density(packet).rho, np.diag([1, 0]), atol=1e-15)

    def test_equal_superposition(self):
        """Equal amplitudes give a pure state with coherence 1/2."""
        a = 1 / np.sqrt(2)
        packet = WavePacket(direction=(0, 0, 1), samples=[PacketSample(omega=1.0, weight=1.0, f_plus=a, f_minus=a)])
        state = polarization_density(packet)
        assert state.rho[0, 1] == pytest.approx(0.5)
        assert state.purity() == pytest.approx(1.0)

    def test_disjoint_supports(self):
        """Helicities carried by different frequencies do not interfere."""
        packet = WavePacket(direction=(0, 0, 1),
                            samples=[PacketSample(omega=1.0, weight=0.5, f_plus=1.0, f_minus=0.0),
                                     PacketSample(omega=2.0, weight=0.5, f_plus=0.0, f_minus=1.0)])
        np.testing.assert_allclose(polarization_density(packet).rho, np.eye(2) / 2, atol=1e-15)

    @pytest.mark.parametrize("theta, factor", [(0.0, 1.0), (np.pi, 1.0), (np.pi / 2, -1.0)])
    def test_phase_values(self, theta, factor):
        """exp(2 i theta) multiplies the coherence."""
        state = PolarizationState(rho=[[0.5, 0.3 + 0.1j], [0.3 - 0.1j, 0.5]])
        rotated = apply_wigner_phase(state, WignerAngle(theta=theta))
        assert rotated.rho[0, 1] == pytest.approx(factor * state.rho[0, 1], abs=1e-15)
        np.testing.assert_allclose(np.diag(rotated.rho), np.diag(state.rho))

    def test_purity_invariant(self, rng):
        """The phase does not change the purity."""
        state = PolarizationState(rho=[[0.7, 0.2 - 0.3j], [0.2 + 0.3j, 0.3]])
        for theta in rng.uniform(0, 2 * np.pi, size=20):
            assert abs(apply_wigner_phase(state, theta).purity() - state.purity()) <= 1e-12

    def test_invalid_state(self):
        """Coherences beyond the Cauchy-Schwarz bound are rejected."""
        with pytest.raises(ValidationError):
            PolarizationState(rho=[[0.5, 0.6], [0.6, 0.5]])


def test_metric_preserved_by_random_transforms(rng):
    """Generated transformations are Lorentz."""
    for _ in range(20):
        m = random_lorentz(rng).m
        np.testing.assert_allclose(m.T @ ETA @ m, ETA, atol=1e-10)
