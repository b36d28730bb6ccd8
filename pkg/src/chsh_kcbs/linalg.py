"""Dense complex linear algebra at the small fixed dimensions used here.

Matrices are plain numpy arrays, states are numpy vectors or a
:class:`JointState`, and every operation is a pure function over
double-precision values.  The joint qubit-qutrit index convention is
``3*j + k`` with ``j`` the qubit level and ``k`` the qutrit level; every
tensor product in the package uses the same left-major block ordering.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, ImaginaryResidue, NotHermitian, NotNormalized

HERMITIAN_TOL = 1e-12
UNITARY_TOL = 1e-12
IMAG_RESIDUE_TOL = 1e-10
STATE_BUILD_TOL = 1e-12
# Looser than the construction tolerance so states deserialized from text
# (9 significant digits) still pass.
STATE_INPUT_TOL = 1e-9


def tensor(a, b) -> np.ndarray:
    """Kronecker product with the left factor as the major block index.

    Entry ((i, k), (j, l)) of the result is ``a[i, j] * b[k, l]``, so a
    qubit (x) qutrit product matches the ``3*j + k`` state indexing.
    """
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def hermiticity_check(m, tol: float = HERMITIAN_TOL) -> bool:
    """True iff ``m`` is square and equals its adjoint within ``tol`` (max norm)."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return float(np.max(np.abs(m - m.conj().T))) <= tol


def unitarity_check(m, tol: float = UNITARY_TOL) -> bool:
    """True iff ``m`` is square and ``m m^dag = I`` within ``tol`` (max norm)."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    eye = np.eye(m.shape[0])
    return float(np.max(np.abs(m @ m.conj().T - eye))) <= tol


@dataclass(frozen=True)
class JointState:
    """Pure state of the qubit (x) qutrit pair.

    ``amplitudes[3*j + k]`` is the amplitude on qubit level ``j`` and
    qutrit level ``k``.  The vector must be normalized to 1 within
    ``STATE_BUILD_TOL``; the stored array is read-only.
    """

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != 6:
            raise DimensionMismatch(f"joint state needs 6 amplitudes, got {amps.size}")
        norm_sq = float(np.sum(np.abs(amps) ** 2))
        if abs(norm_sq - 1.0) > STATE_BUILD_TOL:
            raise NotNormalized(f"|amplitudes|^2 sums to {norm_sq!r}, not 1")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    def amplitude(self, j: int, k: int) -> complex:
        """Amplitude on qubit level j, qutrit level k."""
        return complex(self.amplitudes[3 * j + k])

    @property
    def p2(self) -> float:
        """Total population on the qutrit level 2, i.e. |c02|^2 + |c12|^2."""
        return float(abs(self.amplitudes[2]) ** 2 + abs(self.amplitudes[5]) ** 2)


def state_vector(psi, dim: int | None = None, require_normalized: bool = False,
                 tol: float = STATE_INPUT_TOL) -> np.ndarray:
    """Coerce a JointState or array-like into a complex vector.

    ``dim`` pins the expected length; ``require_normalized`` additionally
    checks the squared norm against 1 within ``tol``.
    """
    if isinstance(psi, JointState):
        vec = np.array(psi.amplitudes, dtype=complex)
    else:
        vec = np.array(psi, dtype=complex).reshape(-1)
    if dim is not None and vec.size != dim:
        raise DimensionMismatch(f"expected a vector of length {dim}, got {vec.size}")
    if require_normalized:
        norm_sq = float(np.sum(np.abs(vec) ** 2))
        if abs(norm_sq - 1.0) > tol:
            raise NotNormalized(f"|psi|^2 = {norm_sq!r} is not 1 within {tol}")
    return vec


def expectation(psi, op) -> float:
    """Expectation value <psi|op|psi> of a Hermitian operator, as a real number.

    Raises NotHermitian if ``op`` fails the 1e-12 Hermiticity tolerance,
    DimensionMismatch on shape problems, and ImaginaryResidue if the raw
    value has an imaginary part above 1e-10 in magnitude.
    """
    if isinstance(op, np.ndarray) or not hasattr(op, "matrix"):
        mat = np.asarray(op, dtype=complex)
    else:
        mat = np.asarray(op.matrix, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise DimensionMismatch(f"operator must be square, got shape {mat.shape}")
    vec = state_vector(psi, dim=mat.shape[0])
    if not hermiticity_check(mat):
        raise NotHermitian("operator is not Hermitian within 1e-12")
    value = complex(vec.conj() @ (mat @ vec))
    if abs(value.imag) > IMAG_RESIDUE_TOL:
        raise ImaginaryResidue(f"imaginary residue {value.imag!r} exceeds 1e-10")
    return float(value.real)
