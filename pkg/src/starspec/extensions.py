"""Angular eigenfunctions, the S-map, defect elements and extension data."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid

from .bessel import bessel_k, bessel_k_prime
from .errors import (
    DimensionMismatch,
    DomainError,
    MatchingResidual,
    NoZeroMode,
    NotAnEigenvalue,
    NotUnitary,
)
from .graph import StarGraph
from .solver import SolverOptions, find_eigenvalues
from .transfer import _edge_entries, _wrap_entries, monodromy

MATCH_TOL = 1e-8
MULT_TOL = 1e-8


@dataclass(frozen=True)
class AngularEigenfunction:
    """Piecewise ``(c_{j,1} e^{i lam theta}, c_{j,2} e^{-i lam theta})`` on sector ``j``.

    ``coefficients`` has shape ``(N, 2)``; row ``j-1`` belongs to sector ``j``.
    """

    graph: StarGraph
    lam: float
    coefficients: np.ndarray

    @property
    def lambda_tilde(self) -> float:
        return self.lam + 0.5

    @property
    def norm(self) -> float:
        return math.sqrt(_gram(self, self).real)

    def __call__(self, theta):
        """Evaluate at angles ``theta`` (radians, any real); returns shape ``(..., 2)``."""
        th = np.asarray(theta, dtype=float)
        w0 = self.graph.omega(0)
        t = w0 + np.mod(th - w0, 2.0 * math.pi)
        edges = self.graph.full_angles
        j = np.clip(np.searchsorted(edges, t, side="right") - 1, 0, self.graph.n_edges - 1)
        c = self.coefficients[j]
        out = np.empty(th.shape + (2,), dtype=complex)
        out[..., 0] = c[..., 0] * np.exp(1j * self.lam * t)
        out[..., 1] = c[..., 1] * np.exp(-1j * self.lam * t)
        return out


def _sector_integral(kappa, a, b):
    # int_a^b exp(i kappa theta) d theta
    if abs(kappa) < 1e-14:
        return complex(b - a)
    return (np.exp(1j * kappa * b) - np.exp(1j * kappa * a)) / (1j * kappa)


def _gram(phi: AngularEigenfunction, psi: AngularEigenfunction) -> complex:
    """``<phi, psi>`` in ``L^2`` of the circle, exact per sector."""
    edges = phi.graph.full_angles
    d = phi.lam - psi.lam
    total = 0.0j
    for j in range(phi.graph.n_edges):
        a, b = edges[j], edges[j + 1]
        c, e = phi.coefficients[j], psi.coefficients[j]
        total += c[0] * np.conj(e[0]) * _sector_integral(d, a, b)
        total += c[1] * np.conj(e[1]) * _sector_integral(-d, a, b)
    return complex(total)


def inner_product(phi: AngularEigenfunction, psi: AngularEigenfunction) -> complex:
    """``L^2`` inner product, linear in the first argument."""
    return _gram(phi, psi)


def matching_residual(graph: StarGraph, lam: float, coeffs) -> float:
    """Largest violation of the edge conditions, relative to ``max |c|``."""
    c = np.asarray(coeffs, dtype=complex)
    n = graph.n_edges
    worst = 0.0
    for j in range(2, n + 1):
        worst = max(worst, float(np.linalg.norm(c[j - 2] - _edge_entries(graph, j, lam) @ c[j - 1])))
    worst = max(worst, float(np.linalg.norm(c[n - 1] - _wrap_entries(graph, lam) @ c[0])))
    return worst / max(float(np.max(np.abs(c))), 1e-300)


def kernel_basis(graph: StarGraph, lam: float, tol: float = 1e-9) -> list:
    """Basis of ``ker(T(lam) - I)`` as ``c_1`` vectors.

    Raises
    ------
    NotAnEigenvalue
        If ``|G(lam)|`` exceeds ``tol``.
    """
    mono = monodromy(graph, lam)
    if abs(mono.secular) > tol * max(1.0, float(np.sum(np.abs(mono.t) ** 2)) / 2.0):
        raise NotAnEigenvalue(f"|G|={abs(mono.secular):.3e} at lambda={lam!r}")
    if mono.identity_defect < MULT_TOL:
        return [np.array([1.0, 0.0], dtype=complex), np.array([0.0, 1.0], dtype=complex)]
    _, _, vh = np.linalg.svd(mono.t - np.eye(2))
    return [vh[-1].conj()]


def angular_eigenfunction(graph: StarGraph, lam: float, c1) -> AngularEigenfunction:
    """Propagate ``c_1`` through all sectors and normalise.

    Uses ``c_j = A_j^{-1} c_{j-1}``; since ``A_j`` is unimodular its inverse
    is the adjugate.

    Raises
    ------
    MatchingResidual
        If the wrap condition ``c_N = B c_1`` fails beyond ``1e-8``.
    """
    n = graph.n_edges
    c = np.zeros((n, 2), dtype=complex)
    c[0] = np.asarray(c1, dtype=complex)
    for j in range(2, n + 1):
        a = _edge_entries(graph, j, lam)
        adj = np.array([[a[1, 1], -a[0, 1]], [-a[1, 0], a[0, 0]]])
        c[j - 1] = adj @ c[j - 2]
    res = matching_residual(graph, lam, c)
    if res > MATCH_TOL:
        raise MatchingResidual(f"wrap residual {res:.3e} at lambda={lam!r}")
    phi = AngularEigenfunction(graph, float(lam), c)
    return AngularEigenfunction(graph, float(lam), c / phi.norm)


def _orthonormalise(funcs):
    out = []
    for f in funcs:
        c = f.coefficients.copy()
        for g in out:
            c = c - _gram(AngularEigenfunction(f.graph, f.lam, c), g) * g.coefficients
        h = AngularEigenfunction(f.graph, f.lam, c)
        out.append(AngularEigenfunction(f.graph, f.lam, c / h.norm))
    return out


def eigenspace(graph: StarGraph, lam: float) -> list:
    """Orthonormal eigenfunctions for ``lam`` (Gram-Schmidt for doubles)."""
    return _orthonormalise([angular_eigenfunction(graph, lam, v) for v in kernel_basis(graph, lam)])


def s_map(phi: AngularEigenfunction) -> AngularEigenfunction:
    """Apply ``sigma . e_rad``: swap components, ``lam -> -lam - 1``.

    Raises
    ------
    MatchingResidual
        If the image violates the edge conditions.
    """
    c = phi.coefficients[:, ::-1].copy()
    lam = -phi.lam - 1.0
    res = matching_residual(phi.graph, lam, c)
    if res > MATCH_TOL:
        raise MatchingResidual(f"S-image residual {res:.3e}")
    return AngularEigenfunction(phi.graph, lam, c)


def zero_mode_basis(graph: StarGraph):
    """Orthonormal ``(phi01, phi02)`` spanning ``ker J`` with ``S phi01 = phi02``.

    ``S`` restricted to the kernel is a unitary involution; its ``+1`` and
    ``-1`` eigenvectors ``phi_1, phi_-1`` give
    ``phi01 = (phi_1 + phi_-1)/sqrt 2`` and ``phi02 = (phi_1 - phi_-1)/sqrt 2``.

    Raises
    ------
    NoZeroMode
        If ``T(-1/2)`` is not the identity.
    """
    mono = monodromy(graph, -0.5)
    if mono.identity_defect >= MULT_TOL:
        raise NoZeroMode(f"||T(-1/2) - I|| = {mono.identity_defect:.3e}")
    basis = eigenspace(graph, -0.5)
    smat = np.array([[_gram(s_map(b), a) for b in basis] for a in basis])
    _, vecs = np.linalg.eigh(0.5 * (smat + smat.conj().T))
    # eigh sorts ascending: column 0 is the -1 eigenvector
    combos = [sum(vecs[k, col] * basis[k].coefficients for k in range(2)) for col in (1, 0)]
    plus, minus = (AngularEigenfunction(graph, -0.5, c) for c in combos)
    r2 = math.sqrt(2.0)
    phi01 = AngularEigenfunction(graph, -0.5, (plus.coefficients + minus.coefficients) / r2)
    phi02 = AngularEigenfunction(graph, -0.5, (plus.coefficients - minus.coefficients) / r2)
    return phi01, phi02


def _check_lt(lambda_tilde):
    if not 0.0 <= lambda_tilde < 0.5:
        raise DomainError(f"lambda_tilde must lie in [0, 1/2), got {lambda_tilde!r}")


def defect_element(lambda_tilde: float, sign: int, r):
    """Half-line defect element ``(sqrt(r) K_{lt-1/2}(r), -+ i sqrt(r) K_{lt+1/2}(r))``.

    ``sign=+1`` solves ``(d^* + i) f = 0`` for the half-line operator
    ``d = [[0, -d/dr - lt/r], [d/dr - lt/r, 0]]``; ``sign=-1`` solves
    ``(d^* - i) f = 0``. Returns an array of shape ``r.shape + (2,)``.
    """
    _check_lt(lambda_tilde)
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0.0):
        raise DomainError("r must be positive")
    sq = np.sqrt(r)
    out = np.empty(r.shape + (2,), dtype=complex)
    out[..., 0] = sq * bessel_k(lambda_tilde - 0.5, r)
    out[..., 1] = -sign * 1j * sq * bessel_k(lambda_tilde + 0.5, r)
    return out


def defect_ode_residual(lambda_tilde: float, sign: int, r, h: float = 1e-5):
    """Residual of the first-order system by central differences.

    Equations (with ``s = sign``): ``s i f1 - f2' - lt f2 / r = 0`` and
    ``f1' - lt f1 / r + s i f2 = 0``.
    """
    r = np.asarray(r, dtype=float)
    f = defect_element(lambda_tilde, sign, r)
    df = (defect_element(lambda_tilde, sign, r + h) - defect_element(lambda_tilde, sign, r - h)) / (2.0 * h)
    lt = lambda_tilde
    e1 = sign * 1j * f[..., 0] - df[..., 1] - lt * f[..., 1] / r
    e2 = df[..., 0] - lt * f[..., 0] / r + sign * 1j * f[..., 1]
    return np.maximum(np.abs(e1), np.abs(e2))


def defect_norm_squared(lambda_tilde: float, sign: int = 1, n: int = 400,
                        s_lo: float = -30.0, s_hi: float = 4.0) -> float:
    """``int_0^inf |f|^2 dr`` by the trapezoidal rule after ``r = e^s``."""
    s = np.linspace(s_lo, s_hi, n)
    r = np.exp(s)
    f = defect_element(lambda_tilde, sign, r)
    integrand = np.sum(np.abs(f) ** 2, axis=-1) * r
    return float(trapezoid(integrand, s))


def eigenbasis_for(graph: StarGraph, lambda_tilde: float) -> list:
    """Orthonormal basis used for defect spinors at ``lambda_tilde``.

    At ``lambda_tilde = 0`` this is the zero-mode pair; for a double
    eigenvalue elsewhere it is Gram-Schmidt on the kernel basis.
    """
    lam = lambda_tilde - 0.5
    if abs(lambda_tilde) < 1e-12:
        try:
            return list(zero_mode_basis(graph))
        except NoZeroMode:
            pass
    return eigenspace(graph, lam)


def defect_spinor_2d(graph: StarGraph, lambda_tilde: float, j: int, sign: int, r, theta,
                     basis=None):
    """``K_{lt-1/2}(r) phi^j(theta) + sign * K_{lt+1/2}(r) (S phi^j)(theta)``.

    ``sign=+1`` gives an element of ``ker(D^* - i)`` for the planar Dirac
    expression ``-i sigma . grad`` on each sector, ``sign=-1`` one of
    ``ker(D^* + i)``. ``j`` is the 1-based index into the eigenbasis.
    """
    _check_lt(lambda_tilde)
    basis = basis if basis is not None else eigenbasis_for(graph, lambda_tilde)
    if not 1 <= j <= len(basis):
        raise DomainError(f"basis index {j} outside 1..{len(basis)}")
    phi = basis[j - 1]
    sphi = s_map(phi)
    r = np.asarray(r, dtype=float)
    th = np.asarray(theta, dtype=float)
    k_lo = bessel_k(lambda_tilde - 0.5, r)
    k_hi = bessel_k(lambda_tilde + 0.5, r)
    return k_lo[..., None] * phi(th) + sign * k_hi[..., None] * sphi(th)


@dataclass(frozen=True)
class ExtensionDescriptor:
    n: int
    u_matrix: np.ndarray
    is_distinguished: bool
    regularity_sup: float | None
    zero_mode: bool


def smallest_positive_eigenvalue(graph: StarGraph, opts: SolverOptions | None = None) -> float:
    """``min(sigma(J_N) cap (0, inf))`` by widening the search window."""
    hi = 1.0
    while True:
        spec = find_eigenvalues(graph, 0.0, hi, opts)
        pos = [r.lambda_tilde for r in spec.records if r.lambda_tilde > 1e-9]
        if pos:
            return min(pos)
        hi *= 2.0


def extension_descriptor(graph: StarGraph, u_matrix, n: int | None = None,
                         opts: SolverOptions | None = None) -> ExtensionDescriptor:
    """Von Neumann data for the extension parametrised by ``u_matrix``.

    Raises
    ------
    DimensionMismatch
        ``u_matrix`` is not ``n x n`` with ``n`` the deficiency index.
    NotUnitary
        ``||U U^* - I|| >= 1e-10``.
    """
    from .solver import deficiency_indices

    u = np.atleast_2d(np.asarray(u_matrix, dtype=complex))
    if n is None:
        n = deficiency_indices(graph, opts).n_plus
    if u.shape != (n, n):
        raise DimensionMismatch(f"expected {n}x{n} matrix, got {u.shape}")
    if n and np.linalg.norm(u @ u.conj().T - np.eye(n)) >= 1e-10:
        raise NotUnitary("extension matrix is not unitary")
    dist = bool(np.linalg.norm(u - np.eye(n)) < 1e-12) if n else True
    zero = monodromy(graph, -0.5).identity_defect < MULT_TOL
    reg = None if zero else 0.5 + smallest_positive_eigenvalue(graph, opts)
    return ExtensionDescriptor(n, u, dist, reg, zero)


__all__ = [
    "AngularEigenfunction", "ExtensionDescriptor", "angular_eigenfunction", "bessel_k_prime",
    "defect_element", "defect_norm_squared", "defect_ode_residual", "defect_spinor_2d",
    "eigenbasis_for", "eigenspace", "extension_descriptor", "inner_product", "kernel_basis",
    "matching_residual", "s_map", "smallest_positive_eigenvalue", "zero_mode_basis",
]
