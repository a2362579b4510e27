import numpy as np
import pytest

from remote_coherence import channels as ch
from remote_coherence.linalg import (
    I2,
    KET0,
    KET1,
    KET_MINUS,
    KET_PLUS,
    PAULIS,
    SIGMA_X,
    SIGMA_Y,
    DensityMatrix,
    hermitian_eigenvalues,
    kron,
    partial_trace,
    projector,
)
from remote_coherence.measures import l1_coherence
from remote_coherence.protocols import epr_singlet

from conftest import random_density, random_unitary


def nested_kraus(rho12, *channel_list):
    """Apply channels to Bob's qubit one Kraus operator at a time, first listed acts first."""
    m = rho12.matrix
    for channel in channel_list:
        acc = np.zeros_like(m)
        for k in channel.kraus_ops:
            big = np.kron(I2, k)
            acc = acc + big @ m @ big.conj().T
        m = acc
    return m


def test_complete_depolarizing():
    dep = ch.complete_depolarizing()
    assert dep.completeness_residual() <= 1e-15
    for ket in (KET0, KET_PLUS):
        out = ch.apply_channel(dep, DensityMatrix.from_ket(ket))
        np.testing.assert_allclose(out.matrix, I2 / 2, atol=1e-15)


def test_partial_depolarizing_limits(rng):
    rho = random_density(rng)
    np.testing.assert_allclose(ch.apply_channel(ch.partial_depolarizing(0), rho).matrix, rho.matrix, atol=1e-14)
    full = ch.partial_depolarizing(1)
    for _ in range(5):
        r = random_density(rng)
        np.testing.assert_allclose(
            ch.apply_channel(full, r).matrix,
            ch.apply_channel(ch.complete_depolarizing(), r).matrix,
            atol=1e-14,
        )


def test_partial_depolarizing_values():
    out = ch.apply_channel(ch.partial_depolarizing(0.5), DensityMatrix.from_ket(KET_PLUS))
    np.testing.assert_allclose(out.matrix[0, 1], 0.25, atol=1e-15)
    assert l1_coherence(out) == pytest.approx(0.5, abs=1e-14)
    out = ch.apply_channel(ch.partial_depolarizing(0.4), DensityMatrix.from_ket(KET0))
    np.testing.assert_allclose(out.matrix, np.diag([0.8, 0.2]), atol=1e-15)


@pytest.mark.parametrize("q", [-0.1, 1.01])
def test_partial_depolarizing_range(q):
    with pytest.raises(ValueError):
        ch.partial_depolarizing(q)


def test_incomplete_kraus_rejected():
    with pytest.raises(ValueError):
        ch.KrausChannel((0.5 * I2,))


def test_unitary_u():
    np.testing.assert_allclose(ch.unitary_u(0.0, 1.3), I2, atol=1e-15)
    np.testing.assert_allclose(ch.unitary_u(np.pi, 0.0), [[0, -1], [1, 0]], atol=1e-15)
    np.testing.assert_allclose(ch.unitary_u(np.pi, 0.0), -1j * SIGMA_Y, atol=1e-15)
    for g in np.linspace(0, 2 * np.pi, 10):
        for d in np.linspace(0, 2 * np.pi, 10):
            u = ch.unitary_u(g, d)
            assert np.max(np.abs(u.conj().T @ u - I2)) <= 1e-14


def test_state_unitary(rng):
    np.testing.assert_array_equal(ch.state_unitary(1, 0), I2)
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    a, b = v / np.linalg.norm(v)
    u = ch.state_unitary(a, b)
    np.testing.assert_allclose(u[:, 0], [a, b])
    np.testing.assert_allclose(u[:, 1], [-np.conj(b), np.conj(a)])
    assert abs(np.linalg.det(u) - 1) <= 1e-12
    np.testing.assert_allclose(u.conj().T @ u, I2, atol=1e-14)
    with pytest.raises(ValueError):
        ch.state_unitary(0.7, 0.7)


def test_control_spec():
    assert ch.ControlSpec(0.5).k == 0.5
    assert ch.ControlSpec(0.0).k == 0.0
    for p in np.linspace(0, 1, 101):
        assert 0 <= ch.ControlSpec(p).k <= 0.5
    with pytest.raises(ValueError):
        ch.ControlSpec(1.5)


def test_switch_identity_channels(rng):
    idc = ch.identity_channel()
    sw = ch.switch_channel(idc, idc, ch.ControlSpec(0.3))
    rho = random_density(rng)
    out = sw.apply(rho)
    np.testing.assert_allclose(out.matrix, np.kron(rho.matrix, sw.control.state().matrix), atol=1e-14)
    rho12 = random_density(rng, 4, dims=(2, 2))
    out = ch.apply_switch_to_second_qubit(rho12, sw)
    np.testing.assert_allclose(out.matrix, np.kron(rho12.matrix, sw.control.state().matrix), atol=1e-14)


def test_switch_of_depolarizers_kraus_form():
    dep = ch.complete_depolarizing()
    sw = ch.switch_channel(dep, dep, ch.ControlSpec(0.5))
    expected = [
        (kron(si @ sj, projector(KET0)) + kron(sj @ si, projector(KET1))) / 4
        for si in PAULIS
        for sj in PAULIS
    ]
    for w, e in zip(sw.kraus_ops, expected):
        np.testing.assert_allclose(w, e, atol=1e-15)


def test_switch_completeness_mixed_pair():
    sw = ch.switch_channel(
        ch.partial_depolarizing(0.3), ch.unitary_channel(ch.unitary_u(1.0, 0.5)), ch.ControlSpec(0.4)
    )
    assert sw.completeness_residual() <= 1e-12


def test_switch_dimension_mismatch():
    big = ch.identity_channel(3)
    with pytest.raises(ValueError):
        ch.switch_channel(big, ch.complete_depolarizing(), ch.ControlSpec(0.5))


def test_switch_control_layout_errors():
    dep = ch.complete_depolarizing()
    sw = ch.switch_channel(dep, dep, ch.ControlSpec(0.5))
    with pytest.raises(ValueError):
        ch.apply_switch_to_second_qubit(DensityMatrix(np.eye(8) / 8, (2, 2, 2)), sw)


def _channel_zoo(rng):
    u = ch.unitary_channel(random_unitary(rng))
    return [
        ch.complete_depolarizing(),
        ch.partial_depolarizing(0.37),
        u,
        ch.unitary_channel(ch.unitary_u(0.9, 0.2)),
        ch.identity_channel(),
    ]


def test_switch_at_definite_control_is_sequential(rng):
    zoo = _channel_zoo(rng)
    rho12 = random_density(rng, 4, dims=(2, 2))
    for first in zoo:
        for second in zoo:
            # control |0> (p = 1): second channel acts first
            sw = ch.switch_channel(first, second, ch.ControlSpec(1.0))
            out = partial_trace(ch.apply_switch_to_second_qubit(rho12, sw), [0, 1]).matrix
            assert np.max(np.abs(out - nested_kraus(rho12, second, first))) <= 1e-12
            # control |1> (p = 0): first channel acts first
            sw = ch.switch_channel(first, second, ch.ControlSpec(0.0))
            out = partial_trace(ch.apply_switch_to_second_qubit(rho12, sw), [0, 1]).matrix
            assert np.max(np.abs(out - nested_kraus(rho12, first, second))) <= 1e-12
            assert sw.completeness_residual() <= 1e-10


def test_order_convention_is_observable():
    # two non-commuting unitaries: the definite-order outputs differ
    a = ch.unitary_channel(ch.unitary_u(np.pi / 2, 0.0))
    b = ch.unitary_channel(ch.unitary_u(np.pi / 2, np.pi / 2))
    rho12 = DensityMatrix.from_ket(np.kron(KET0, KET0), (2, 2))
    out = partial_trace(ch.apply_switch_to_second_qubit(rho12, ch.switch_channel(a, b, ch.ControlSpec(1.0))), [1])
    expected = b.kraus_ops[0] @ projector(KET0) @ b.kraus_ops[0].conj().T
    expected = a.kraus_ops[0] @ expected @ a.kraus_ops[0].conj().T
    np.testing.assert_allclose(out.matrix, expected, atol=1e-14)


def test_depolarizing_pair_at_definite_control_gives_maximally_mixed():
    dep = ch.complete_depolarizing()
    for p in (0.0, 1.0):
        out = ch.apply_switch_to_second_qubit(epr_singlet(), ch.switch_channel(dep, dep, ch.ControlSpec(p)))
        np.testing.assert_allclose(partial_trace(out, [0, 1]).matrix, np.eye(4) / 4, atol=1e-14)


def test_self_switch_symmetric_in_arguments(rng):
    rho12 = random_density(rng, 4, dims=(2, 2))
    for q in (0.2, 0.8):
        a, b = ch.partial_depolarizing(q), ch.partial_depolarizing(q)
        out1 = ch.apply_switch_to_second_qubit(rho12, ch.switch_channel(a, b, ch.ControlSpec(0.3)))
        out2 = ch.apply_switch_to_second_qubit(rho12, ch.switch_channel(b, a, ch.ControlSpec(0.3)))
        np.testing.assert_allclose(out1.matrix, out2.matrix, atol=1e-14)


def test_two_depolarizers_output_matches_closed_form():
    p = 0.5
    k = np.sqrt(p * (1 - p))
    dep = ch.complete_depolarizing()
    out = ch.apply_switch_to_second_qubit(epr_singlet(), ch.switch_channel(dep, dep, ch.ControlSpec(p)))
    p0, p1 = projector(KET0), projector(KET1)
    e01 = np.outer(KET0, KET1)
    e10 = np.outer(KET1, KET0)
    xc = e01 + e10
    expected = (
        np.kron(np.kron(I2 / 2, I2 / 2), p * p0 + (1 - p) * p1)
        + 0.5 * np.kron(np.kron(p0, p1) + np.kron(p1, p0), k / 4 * xc)
        - k / 16 * np.kron(np.kron(e01, SIGMA_X - 1j * SIGMA_Y), xc)
        - k / 16 * np.kron(np.kron(e10, SIGMA_X + 1j * SIGMA_Y), xc)
    )
    assert np.max(np.abs(out.matrix - expected)) <= 1e-12


@pytest.mark.parametrize("make", [ch.complete_depolarizing, lambda: ch.partial_depolarizing(0.6)])
def test_apply_channel_is_cptp_on_random_inputs(rng, make):
    channel = make()
    for _ in range(100):
        rho = random_density(rng, rank=int(rng.integers(1, 3)))
        out = ch.apply_channel(channel, rho)
        assert abs(np.trace(out.matrix) - 1) <= 1e-12
        assert np.max(np.abs(out.matrix - out.matrix.conj().T)) <= 1e-14
        assert hermitian_eigenvalues(out.matrix)[0] >= -1e-10


def test_apply_channel_dimension_mismatch():
    with pytest.raises(ValueError):
        ch.apply_channel(ch.complete_depolarizing(), DensityMatrix(np.eye(4) / 4, (2, 2)))


def test_measure_register_control_outcomes():
    p = 0.5
    k = np.sqrt(p * (1 - p))
    dep = ch.complete_depolarizing()
    out = ch.apply_switch_to_second_qubit(epr_singlet(), ch.switch_channel(dep, dep, ch.ControlSpec(p)))
    plus, minus = ch.measure_register(out, 2, [KET_PLUS, KET_MINUS], labels=["+", "-"])
    assert plus.probability == pytest.approx((2 + k) / 4, abs=1e-12)
    assert plus.probability + minus.probability == pytest.approx(1, abs=1e-12)
    assert plus.post_state.dims == (2, 2)
    # unnormalized <+|rho|+> in closed form, then normalized by 4/(2+k)
    p0, p1 = projector(KET0), projector(KET1)
    unnorm = (
        np.eye(4) / 8
        + k / 8 * (np.kron(p0, p1) + np.kron(p1, p0))
        - k / 8 * (np.kron(np.outer(KET0, KET1), np.outer(KET1, KET0)) + np.kron(np.outer(KET1, KET0), np.outer(KET0, KET1)))
    )
    np.testing.assert_allclose(plus.post_state.matrix, 4 / (2 + k) * unnorm, atol=1e-12)


def test_measure_register_definite_control():
    dep = ch.complete_depolarizing()
    out = ch.apply_switch_to_second_qubit(epr_singlet(), ch.switch_channel(dep, dep, ch.ControlSpec(0.0)))
    results = ch.measure_register(out, 2, [KET_PLUS, KET_MINUS])
    for r in results:
        assert r.probability == pytest.approx(0.5, abs=1e-12)


def test_measure_register_null_outcome():
    rho = DensityMatrix.from_ket(np.kron(KET0, KET0), (2, 2))
    zero, one = ch.measure_register(rho, 0, [KET0, KET1])
    assert zero.probability == pytest.approx(1)
    assert one.probability == 0.0 and one.is_null
    with pytest.raises(ch.NullOutcomeError):
        one.post_state


def test_measure_register_bad_basis():
    rho = DensityMatrix(np.eye(4) / 4, (2, 2))
    with pytest.raises(ValueError):
        ch.measure_register(rho, 0, [KET0, KET_PLUS])
    with pytest.raises(IndexError):
        ch.measure_register(rho, 3, [KET0, KET1])


def test_measure_middle_register_keeps_order(rng):
    a, c = random_density(rng), random_density(rng)
    abc = DensityMatrix.product(a, DensityMatrix.from_ket(KET1), c)
    _, one = ch.measure_register(abc, 1, [KET0, KET1])
    np.testing.assert_allclose(one.post_state.matrix, np.kron(a.matrix, c.matrix), atol=1e-14)
