"""Vertex unitary of the momentum-operator picture and its eigenphases.

For a symmetric star-graph the spin-orbit spectrum is read off from the
eigenphases of a ``2N x 2N`` unitary: ``lambda`` is an eigenvalue iff
``exp(-2*pi*i*lambda/N)`` is an eigenvalue of the unitary, with equal
multiplicities. The window ``lambda_tilde in (-1/2, 1/2)`` corresponds to
phases on the open arc ``(0, 2*pi/N)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateConstants, NotSymmetric, NotUnitary, PhaseResolution
from .graph import StarGraph
from .solver import EigenRecord, Spectrum
from .transfer import identity_defect, secular

TWO_PI = 2.0 * math.pi
RANK_TOL = 1e-7
ARC_BAND = 1e-9


@dataclass(frozen=True)
class VertexUnitary:
    u: np.ndarray
    n_edges: int
    unitarity_defect: float


@dataclass(frozen=True)
class EigenphaseRecord:
    theta: float
    z: complex
    multiplicity: int
    on_arc: bool
    arc_boundary: bool = False


def _defect(u: np.ndarray) -> float:
    return float(np.linalg.norm(u @ u.conj().T - np.eye(u.shape[0])))


def build_vertex_unitary(graph: StarGraph) -> VertexUnitary:
    """Assemble the unitary from the per-edge couplings.

    Indices in the defining formulas are 1-based and cyclic with ``0 -> 2N``
    and ``-k -> 2N - k``. For edge ``j`` the rows ``2j-2`` and ``2j-1`` couple
    columns ``2j-3`` and ``2j``.
    """
    n = graph.n_edges
    dim = 2 * n
    u = np.zeros((dim, dim), dtype=complex)
    idx = lambda k: (k - 1) % dim
    for j in range(1, n + 1):
        tau, p, m = graph.tau(j), graph.p(j), graph.m(j)
        w = graph.omega(j - 1)
        r1, r2, ca, cb = idx(2 * j - 2), idx(2 * j - 1), idx(2 * j - 3), idx(2 * j)
        u[r1, ca] = np.exp(1j * w) * tau / m
        u[r1, cb] = p / m
        u[r2, ca] = p / m
        u[r2, cb] = -np.exp(-1j * w) * tau / m
    return VertexUnitary(u, n, _defect(u))


def electrostatic_vertex_n2(eta_l, eta_r, tau_l, tau_r, omega):
    """Broken-line vertex matrix with electrostatic strengths ``eta``.

    With ``epsilon = eta**2 - tau**2``, ``p = 1 + epsilon/4`` and
    ``m = 1 - epsilon/4``. The matrix is unitary iff both ``eta`` vanish.

    Returns
    -------
    matrix : np.ndarray
        4x4 complex matrix.
    defect : float
        ``||U U^* - I||_F``.
    """
    def consts(eta, tau):
        eps = eta * eta - tau * tau
        p, m = 1.0 + eps / 4.0, 1.0 - eps / 4.0
        if m == 0.0 or p == 0.0:
            raise DegenerateConstants(f"epsilon={eps!r} gives a vanishing constant")
        return p, m

    pl, ml = consts(eta_l, tau_l)
    pr, mr = consts(eta_r, tau_r)
    e, ec = np.exp(1j * omega), np.exp(-1j * omega)
    mat = np.array([
        [0, -e * (eta_r - tau_r) / mr, pr / mr, 0],
        [-e * (eta_l + tau_l) / ml, 0, 0, pl / ml],
        [pl / ml, 0, 0, -ec * (eta_l - tau_l) / ml],
        [0, pr / mr, -ec * (eta_r + tau_r) / mr, 0],
    ], dtype=complex)
    return mat, _defect(mat)


def _rayleigh_phase(u, theta, iters=4):
    # nearest eigenvalue of a normal matrix via the smallest singular vector
    eye = np.eye(u.shape[0])
    for _ in range(iters):
        _, _, vh = np.linalg.svd(u - np.exp(1j * theta) * eye)
        v = vh[-1].conj()
        theta = float(np.angle(np.vdot(v, u @ v))) % TWO_PI
    return theta


def eigenphases(vu: VertexUnitary, points_per_edge: int = 8192) -> list:
    """All eigenphases with multiplicities, sorted by ``theta``.

    A scan of ``|det(U - e^{i theta} I)|`` locates candidates, a Rayleigh
    step on the smallest singular vector refines them and the number of
    singular values below ``1e-7`` gives the multiplicity.

    Raises
    ------
    NotUnitary
        Unitarity defect above ``1e-8``.
    PhaseResolution
        Multiplicities fail to add up to ``2N``.
    """
    if vu.unitarity_defect >= 1e-8:
        raise NotUnitary(f"unitarity defect {vu.unitarity_defect:.3e}")
    u = vu.u
    dim = u.shape[0]
    npts = points_per_edge * vu.n_edges
    th = np.arange(npts) * (TWO_PI / npts)
    eye = np.eye(dim)
    mats = u[None, :, :] - np.exp(1j * th)[:, None, None] * eye[None]
    f = np.abs(np.linalg.det(mats))
    left, right = np.roll(f, 1), np.roll(f, -1)
    cand = np.flatnonzero((f <= left) & (f <= right))

    found = []
    for i in cand:
        t = _rayleigh_phase(u, float(th[i]))
        sv = np.linalg.svd(u - np.exp(1j * t) * eye, compute_uv=False)
        mult = int(np.sum(sv < RANK_TOL))
        if mult == 0:
            continue
        if any(min(abs(t - s), TWO_PI - abs(t - s)) < 1e-9 for s, _ in found):
            continue
        found.append((t, mult))
    found.sort()
    total = sum(m for _, m in found)
    if total != dim:
        raise PhaseResolution(f"multiplicities sum to {total}, expected {dim}")
    arc = TWO_PI / vu.n_edges
    out = []
    for t, mult in found:
        near = min(t, abs(t - arc), TWO_PI - t) <= ARC_BAND
        out.append(EigenphaseRecord(t, complex(np.exp(1j * t)), mult,
                                    (ARC_BAND < t < arc - ARC_BAND), near))
    return out


def arc_count(phases) -> int:
    """Multiplicity-weighted number of phases on the open arc."""
    return sum(p.multiplicity for p in phases if p.on_arc)


def spectrum_via_arc(graph: StarGraph, window_lo: float = -0.5, window_hi: float = 0.5,
                     phases=None) -> Spectrum:
    """Spin-orbit spectrum in a ``lambda_tilde`` window from eigenphases.

    Each phase ``theta`` gives ``lambda = -N theta/(2 pi) - N k`` for every
    integer ``k``.

    Raises
    ------
    NotSymmetric
        The sectors are not all of width ``2*pi/N``.
    """
    if not graph.symmetric:
        raise NotSymmetric("arc correspondence needs equal sectors")
    n = graph.n_edges
    if phases is None:
        phases = eigenphases(build_vertex_unitary(graph))
    recs = []
    for ph in phases:
        base = -n * ph.theta / TWO_PI
        kmin = math.floor((base + 0.5 - window_hi) / n)
        kmax = math.ceil((base + 0.5 - window_lo) / n)
        for k in range(kmin, kmax + 1):
            lam = base - n * k
            lt = lam + 0.5
            if window_lo - 1e-9 <= lt <= window_hi + 1e-9:
                bnd = min(abs(lt - window_lo), abs(lt - window_hi)) <= 1e-9
                recs.append(EigenRecord(lt, lam, ph.multiplicity, abs(secular(graph, lam)),
                                        identity_defect(graph, lam), bnd))
    recs.sort(key=lambda r: r.lambda_tilde)
    flags = tuple(r.lambda_tilde for r in recs if r.boundary)
    return Spectrum(tuple(recs), (float(window_lo), float(window_hi)), flags)
