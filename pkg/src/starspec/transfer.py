"""Transfer matrices, monodromy and the secular function.

On sector ``j`` an eigenfunction of the spin-orbit operator with eigenvalue
``lambda_tilde = lambda + 1/2`` has the form
``(c_{j,1} e^{i lambda theta}, c_{j,2} e^{-i lambda theta})``. The edge
conditions link neighbouring coefficient vectors by unimodular 2x2 matrices
``A_j`` (``c_j -> c_{j-1}``) and the wrap matrix ``B`` (``c_1 -> c_N``). The
monodromy ``T = A_2 ... A_N B`` must fix ``c_1``, so eigenvalues are the zeros
of ``G = Re tr T - 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import IndexOutOfRange, SolverDiverged
from .graph import StarGraph

TWO_PI = 2.0 * math.pi
IMAG_TRACE_TOL = 1e-10


def _cis(phase):
    # wrap before exponentiating to keep precision at large |lambda|
    return np.exp(1j * np.mod(phase, TWO_PI))


@dataclass(frozen=True)
class TransferMatrix:
    entries: np.ndarray
    kind: object  # edge index j or "wrap"

    @property
    def det(self) -> complex:
        return complex(np.linalg.det(self.entries))


@dataclass(frozen=True)
class Monodromy:
    t: np.ndarray
    lam: float
    secular: float
    identity_defect: float


def _edge_entries(graph: StarGraph, j: int, lam):
    lam = np.asarray(lam, dtype=float)
    tau, p, m = graph.tau(j), graph.p(j), graph.m(j)
    e = _cis(graph.omega(j - 1) * (2.0 * lam + 1.0))
    out = np.empty(lam.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = m / p
    out[..., 1, 1] = m / p
    out[..., 0, 1] = tau * np.conj(e) / p
    out[..., 1, 0] = tau * e / p
    return out


def _wrap_entries(graph: StarGraph, lam):
    lam = np.asarray(lam, dtype=float)
    tau, p, m = graph.tau(1), graph.p(1), graph.m(1)
    d = _cis(-TWO_PI * lam)
    e = _cis(graph.omega(1) * (2.0 * lam + 1.0) - TWO_PI * lam)
    out = np.empty(lam.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = m * d / p
    out[..., 1, 1] = m * np.conj(d) / p
    out[..., 0, 1] = tau * e / p
    out[..., 1, 0] = tau * np.conj(e) / p
    return out


def edge_transfer(graph: StarGraph, j: int, lam: float) -> TransferMatrix:
    """Matrix ``A_j(lambda)`` mapping ``c_j`` to ``c_{j-1}``, ``2 <= j <= N``."""
    if not 2 <= j <= graph.n_edges:
        raise IndexOutOfRange(f"edge index {j} outside [2, {graph.n_edges}]")
    return TransferMatrix(_edge_entries(graph, j, float(lam)), j)


def wrap_transfer(graph: StarGraph, lam: float) -> TransferMatrix:
    """Matrix ``B(lambda)`` mapping ``c_1`` to ``c_N`` across the first edge."""
    return TransferMatrix(_wrap_entries(graph, float(lam)), "wrap")


def monodromy_matrix(graph: StarGraph, lam):
    """``T(lambda)`` for scalar or array ``lam`` (shape ``lam.shape + (2, 2)``)."""
    t = _wrap_entries(graph, lam)
    for j in range(graph.n_edges, 1, -1):
        t = _edge_entries(graph, j, lam) @ t
    return t


def secular(graph: StarGraph, lam):
    """Vectorised ``G(lambda) = Re tr T(lambda) - 2``.

    Raises
    ------
    SolverDiverged
        If ``|Im tr T|`` exceeds ``1e-10``, which would break the real
        structure the root finder relies on.
    """
    t = monodromy_matrix(graph, lam)
    tr = t[..., 0, 0] + t[..., 1, 1]
    scale = np.maximum(1.0, np.abs(tr))
    if np.any(np.abs(tr.imag) > IMAG_TRACE_TOL * scale):
        raise SolverDiverged("trace of the monodromy is not real")
    g = tr.real - 2.0
    return float(g) if np.ndim(g) == 0 else g


def identity_defect(graph: StarGraph, lam):
    """Frobenius norm ``||T(lambda) - I||``."""
    t = monodromy_matrix(graph, lam) - np.eye(2)
    d = np.sqrt(np.sum(np.abs(t) ** 2, axis=(-2, -1)))
    return float(d) if np.ndim(d) == 0 else d


def monodromy(graph: StarGraph, lam: float) -> Monodromy:
    """Monodromy record at a single ``lambda``."""
    lam = float(lam)
    t = monodromy_matrix(graph, lam)
    tr = t[0, 0] + t[1, 1]
    if abs(tr.imag) > IMAG_TRACE_TOL * max(1.0, abs(tr)):
        raise SolverDiverged("trace of the monodromy is not real")
    return Monodromy(
        t=t,
        lam=lam,
        secular=float(tr.real - 2.0),
        identity_defect=float(np.linalg.norm(t - np.eye(2))),
    )


def system_matrix(graph: StarGraph, lam) -> np.ndarray:
    """Full ``2N x 2N`` matrix of the matching conditions.

    Unknowns are ordered ``(c_{1,1}, c_{1,2}, ..., c_{N,1}, c_{N,2})``. Block
    row ``j-2`` encodes ``c_{j-1} - A_j c_j = 0`` and the last block row
    encodes ``c_N - B c_1 = 0``. Each row has three non-zero entries. An
    array ``lam`` gives a stack of shape ``lam.shape + (2N, 2N)``.
    """
    lam = np.asarray(lam, dtype=float)
    n = graph.n_edges
    mat = np.zeros(lam.shape + (2 * n, 2 * n), dtype=complex)
    eye = np.eye(2)
    for j in range(2, n + 1):
        r = 2 * (j - 2)
        mat[..., r:r + 2, 2 * (j - 2):2 * (j - 1)] = eye
        mat[..., r:r + 2, 2 * (j - 1):2 * j] = -_edge_entries(graph, j, lam)
    r = 2 * (n - 1)
    mat[..., r:r + 2, 2 * (n - 1):2 * n] = eye
    mat[..., r:r + 2, 0:2] -= _wrap_entries(graph, lam)
    return mat


def secular_det_oracle(graph: StarGraph, lam):
    """Determinant of :func:`system_matrix` via LU with partial pivoting."""
    val = np.linalg.det(system_matrix(graph, lam))
    return complex(val) if np.ndim(val) == 0 else val
