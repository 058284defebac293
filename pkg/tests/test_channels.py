import numpy as np
import pytest

from qcl import channels, matcore
from qcl.errors import CheckFailedError, DimensionMismatchError


def _amplitude_damping(gamma):
    k0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - gamma)]], dtype=np.complex128)
    k1 = np.array([[0.0, np.sqrt(gamma)], [0.0, 0.0]], dtype=np.complex128)
    return channels.kraus_channel((k0, k1), label="ad")


def test_kraus_channel_validates_normalisation():
    bad = (np.eye(2, dtype=np.complex128) * 0.9,)
    with pytest.raises(CheckFailedError):
        channels.kraus_channel(bad)


def test_kraus_channel_rejects_ragged_shapes():
    ops = (np.eye(2, dtype=np.complex128), np.zeros((3, 2), dtype=np.complex128))
    with pytest.raises(DimensionMismatchError):
        channels.KrausChannel(2, 2, ops)


def test_apply_preserves_trace_and_positivity():
    ch = _amplitude_damping(0.3)
    rng = np.random.default_rng(21)
    for _ in range(20):
        rho = matcore.random_density(2, rng)
        out = channels.apply(ch, rho)
        assert abs(np.trace(out) - 1.0) < 1e-12
        assert np.linalg.eigvalsh(out)[0] > -1e-12


def test_apply_checks_dimension():
    ch = _amplitude_damping(0.3)
    with pytest.raises(DimensionMismatchError):
        channels.apply(ch, np.eye(3))


def test_choi_reproduces_action():
    # Phi(rho) = Tr_A[ J (rho^T tensor I) ] with the A factor first.
    ch = _amplitude_damping(0.45)
    j = channels.choi(ch).matrix
    rng = np.random.default_rng(22)
    for _ in range(10):
        rho = matcore.random_density(2, rng)
        lifted = j @ matcore.kron(rho.T, np.eye(2))
        out = matcore.partial_trace(lifted, 2, 2, keep="b")
        assert np.max(np.abs(out - channels.apply(ch, rho))) < 1e-12


def test_choi_trace_equals_input_dimension():
    ch = _amplitude_damping(0.2)
    j = channels.choi(ch)
    assert np.trace(j.matrix).real == pytest.approx(2.0, abs=1e-12)


def test_complement_is_trace_preserving_and_isometric():
    ch = _amplitude_damping(0.6)
    comp = channels.complement(ch)
    assert comp.dim_out == len(ch.kraus)
    assert channels.trace_preservation_defect(comp) < 1e-12
    # For a pure input both marginals of the Stinespring state share entropy.
    vec = np.array([1.0, 1j], dtype=np.complex128) / np.sqrt(2.0)
    pure = np.outer(vec, vec.conj())
    s_out = matcore.von_neumann_entropy(channels.apply(ch, pure))
    s_env = matcore.von_neumann_entropy(channels.apply(comp, pure))
    assert abs(s_out - s_env) < 1e-10


def test_transfer_matrix_matches_apply():
    ch = _amplitude_damping(0.35)
    t = channels.transfer_matrix(ch)
    rng = np.random.default_rng(24)
    for _ in range(10):
        rho = matcore.random_density(2, rng)
        flat = t @ rho.reshape(-1, order="F")
        out = flat.reshape(2, 2, order="F")
        assert np.max(np.abs(out - channels.apply(ch, rho))) < 1e-13


def test_hermitian_basis_spans_and_is_orthogonal():
    basis = channels.hermitian_basis(3)
    assert len(basis) == 9
    for b in basis:
        assert matcore.hermiticity_defect(b) == 0.0
    gram = np.array(
        [[np.trace(a @ b).real for b in basis] for a in basis]
    )
    assert np.linalg.matrix_rank(gram) == 9


def test_covariance_defect_zero_for_conjugation():
    # A unitary conjugation channel is covariant with itself exactly.
    u = matcore.sample_su3(3)
    ch = channels.kraus_channel((u,), label="conj")
    v = matcore.sample_su3(4)
    assert channels.covariance_defect(ch, v, u @ v @ u.conj().T) < 1e-13


def test_omega_defect_identity_relation():
    ch = _amplitude_damping(0.5)
    # u = I with Omega = I holds trivially.
    eye2 = np.eye(2)
    assert channels.omega_defect(ch, eye2, eye2, np.eye(len(ch.kraus))) < 1e-15
    with pytest.raises(DimensionMismatchError):
        channels.omega_defect(ch, eye2, eye2, np.eye(3))


def test_choi_matrix_validates_positivity():
    bad = np.diag([1.0, -0.5, 0.2, 0.3]).astype(np.complex128)
    with pytest.raises(Exception):
        channels.ChoiMatrix(2, 2, bad)
