"""Star-graph geometry, coupling strengths and per-edge constants.

A star-graph is the union of ``N`` rays leaving the origin at angles
``omega_1 < ... < omega_{N-1}``; the ray at angle ``-omega_1`` closes the
picture so that ``omega_0 = -omega_1`` and ``omega_N = 2*pi - omega_1``.
Edge ``j`` carries a Lorentz-scalar strength ``tau_j``. Sector ``j`` is the
open angular interval ``(omega_{j-1}, omega_j)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AngleOrdering, AngleRange, Confinement, DegenerateConstants, ValidationError

CONFINEMENT_TOL = 1e-12
SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class EdgeConstants:
    """Derived constants of one edge with vanishing electrostatic part.

    Attributes
    ----------
    epsilon : float
        ``-tau**2``.
    p : float
        ``1 + epsilon/4``.
    m : float
        ``1 - epsilon/4``.
    """

    epsilon: float
    p: float
    m: float


def derive_edge_constants(tau: float) -> EdgeConstants:
    """Return ``(epsilon, p, m)`` for strength ``tau``.

    Raises
    ------
    Confinement
        If ``|tau| = 2`` within ``1e-12``.
    """
    tau = float(tau)
    if not math.isfinite(tau):
        raise ValidationError(f"strength must be finite, got {tau!r}")
    if abs(abs(tau) - 2.0) <= CONFINEMENT_TOL:
        raise Confinement(f"|tau| = 2 is the confinement case (tau={tau!r})")
    eps = -tau * tau
    p = 1.0 + eps / 4.0
    if p == 0.0:
        raise DegenerateConstants("p vanishes")
    return EdgeConstants(epsilon=eps, p=p, m=1.0 - eps / 4.0)


@dataclass(frozen=True)
class StarGraph:
    """Validated star-graph.

    Attributes
    ----------
    n_edges : int
        Number of rays ``N >= 2``.
    omegas : np.ndarray
        Interior angles ``omega_1..omega_{N-1}`` in radians.
    taus : np.ndarray
        Strengths ``tau_1..tau_N``.
    constants : tuple of EdgeConstants
        Derived constants per edge, index ``j-1`` for edge ``j``.
    symmetric : bool
        True when all sectors have width ``2*pi/N``.
    """

    n_edges: int
    omegas: np.ndarray
    taus: np.ndarray
    constants: tuple = field(repr=False)
    symmetric: bool = False

    @property
    def full_angles(self) -> np.ndarray:
        """Angles ``omega_0..omega_N`` including the two conventional ends."""
        w = self.omegas
        return np.concatenate(([-w[0]], w, [2.0 * math.pi - w[0]]))

    @property
    def sector_lengths(self) -> np.ndarray:
        """Widths of sectors ``1..N``; they sum to ``2*pi``."""
        return np.diff(self.full_angles)

    def omega(self, j: int) -> float:
        """Angle ``omega_j`` for ``0 <= j <= N``."""
        return float(self.full_angles[j])

    def p(self, j: int) -> float:
        return self.constants[j - 1].p

    def m(self, j: int) -> float:
        return self.constants[j - 1].m

    def tau(self, j: int) -> float:
        return float(self.taus[j - 1])

    def with_taus(self, taus) -> "StarGraph":
        """Copy with new strengths, same geometry."""
        return make_graph(self.omegas, taus)


def validate(n_edges: int, omegas, taus) -> StarGraph:
    """Check all invariants and return an immutable :class:`StarGraph`.

    Raises
    ------
    AngleRange
        ``omega_1 <= 0`` or ``omega_{N-1} >= 2*pi - omega_1``.
    AngleOrdering
        Angles not strictly increasing.
    Confinement
        Some ``|tau_j| = 2``.
    """
    n = int(n_edges)
    if n < 2:
        raise ValidationError(f"need at least 2 edges, got {n}")
    w = np.atleast_1d(np.asarray(omegas, dtype=float)).copy()
    t = np.atleast_1d(np.asarray(taus, dtype=float)).copy()
    if w.shape != (n - 1,):
        raise ValidationError(f"expected {n - 1} angles, got {w.size}")
    if t.shape != (n,):
        raise ValidationError(f"expected {n} strengths, got {t.size}")
    if not (np.all(np.isfinite(w)) and np.all(np.isfinite(t))):
        raise ValidationError("angles and strengths must be finite")
    if w[0] <= 0.0:
        raise AngleRange(f"omega_1 must be positive, got {w[0]!r}")
    if np.any(np.diff(w) <= 0.0):
        raise AngleOrdering(f"angles must be strictly increasing: {w.tolist()}")
    if w[-1] >= 2.0 * math.pi - w[0]:
        raise AngleRange("omega_{N-1} must be below 2*pi - omega_1")
    consts = tuple(derive_edge_constants(x) for x in t)
    widths = np.diff(np.concatenate(([-w[0]], w, [2.0 * math.pi - w[0]])))
    sym = bool(np.all(np.abs(widths - 2.0 * math.pi / n) <= SYMMETRY_TOL))
    w.flags.writeable = False
    t.flags.writeable = False
    return StarGraph(n_edges=n, omegas=w, taus=t, constants=consts, symmetric=sym)


def make_graph(omegas, taus) -> StarGraph:
    """Validate with ``N`` inferred from the strengths."""
    t = np.atleast_1d(np.asarray(taus, dtype=float))
    return validate(t.size, omegas, t)


def symmetric_graph(n_edges: int, taus) -> StarGraph:
    """Graph with ``omega_j = (2j-1)*pi/N``, i.e. ``N`` equal sectors."""
    n = int(n_edges)
    if n < 2:
        raise ValidationError(f"need at least 2 edges, got {n}")
    w = (2.0 * np.arange(1, n) - 1.0) * math.pi / n
    return validate(n, w, taus)


def convention_map_broken_line(tau_l: float, tau_r: float) -> tuple[float, float]:
    """Map broken-line strengths ``(tau_l, tau_r)`` to star-graph ``(tau_1, tau_2)``.

    The broken line with opening angle ``omega`` is the 2-star with
    ``omega_1 = omega``. Edge 1 is the right ray and edge 2 the left ray;
    reversing the normal on both edges flips both signs, so the map is
    ``(tau_1, tau_2) = (-tau_r, -tau_l)``. Since a global sign flip of all
    strengths leaves the spectrum invariant, ``(tau_r, tau_l)`` yields the
    same spectrum.
    """
    return (-float(tau_r), -float(tau_l))


def inverse_convention_map(tau_1: float, tau_2: float) -> tuple[float, float]:
    """Inverse of :func:`convention_map_broken_line`, returns ``(tau_l, tau_r)``."""
    return (-float(tau_2), -float(tau_1))


def broken_line_graph(tau_l: float, tau_r: float, omega: float) -> StarGraph:
    """2-star equivalent of a broken line with opening angle ``omega``."""
    if not 0.0 < omega < math.pi:
        raise AngleRange(f"broken-line angle must lie in (0, pi), got {omega!r}")
    return validate(2, [omega], convention_map_broken_line(tau_l, tau_r))
