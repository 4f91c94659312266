"""Explicit secular equations and root formulas for two and three edges.

These are independent of the transfer-matrix machinery and serve as
oracles for it. Broken-line quantities use the left/right strengths
``tau_l, tau_r`` and the opening angle ``omega in (0, pi)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import Confinement, ValidationError, ZeroStrength
from .graph import derive_edge_constants

SQRT3 = math.sqrt(3.0)
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class BrokenLineConfig:
    tau_l: float
    tau_r: float
    omega: float

    def __post_init__(self):
        derive_edge_constants(self.tau_l)
        derive_edge_constants(self.tau_r)
        if not 0.0 < self.omega < math.pi:
            raise ValidationError(f"omega must lie in (0, pi), got {self.omega!r}")


def n2_secular(lam, cfg: BrokenLineConfig):
    """Left-hand side of the two-edge secular equation."""
    lam = np.asarray(lam, dtype=float)
    l, r = derive_edge_constants(cfg.tau_l), derive_edge_constants(cfg.tau_r)
    pp = l.p * r.p
    val = (1.0 - l.m * r.m * np.cos(TWO_PI * lam) / pp
           - cfg.tau_l * cfg.tau_r * np.cos(2.0 * cfg.omega * (2.0 * lam + 1.0) - TWO_PI * lam) / pp)
    return float(val) if val.ndim == 0 else val


def _n2_symmetric(lam, tau, omega, sign):
    lam = np.asarray(lam, dtype=float)
    t2 = tau * tau
    val = ((4.0 - t2) ** 2 - (4.0 + t2) ** 2 * np.cos(TWO_PI * lam)
           - sign * 16.0 * t2 * np.cos(TWO_PI * lam - 4.0 * omega * lam - 2.0 * omega))
    return float(val) if val.ndim == 0 else val


def n2_equal_secular(lam, tau, omega):
    """``F(lambda)`` for ``tau_l = tau_r = tau``; equals ``(4 - tau^2)^2`` times :func:`n2_secular`."""
    return _n2_symmetric(lam, tau, omega, 1.0)


def n2_opposite_secular(lam, tau, omega):
    """``G(lambda)`` for ``tau_l = -tau_r = tau``."""
    return _n2_symmetric(lam, tau, omega, -1.0)


def n2_ray_roots(tau_l: float) -> tuple[float, float]:
    """Roots in ``(-1, -1/2)`` and ``(-1/2, 0)`` when only one edge couples.

    Raises
    ------
    ZeroStrength
        For ``tau_l = 0`` (free operator).
    """
    derive_edge_constants(tau_l)
    if tau_l == 0.0:
        raise ZeroStrength("tau_l = 0 is the free operator")
    t2 = tau_l * tau_l
    a = math.acos((4.0 - t2) / (4.0 + t2)) / TWO_PI
    return (-1.0 + a, -a)


@dataclass(frozen=True)
class DoubleFamilies:
    """Angles at which the broken line has a double eigenvalue.

    ``family`` is one of ``"equal"``, ``"opposite"``, ``"product+4"``,
    ``"product-4"`` or ``"none"``. ``lam(k)`` and ``omega(k, s)`` give the
    double eigenvalue and the angle producing it.
    """

    family: str
    has_zero_mode: bool

    def lam(self, k: int) -> float:
        if self.family in ("equal", "opposite"):
            return float(k)
        if self.family in ("product+4", "product-4"):
            return k + 0.5
        raise ValueError("simple spectrum, no double eigenvalues")

    def omega(self, k: int, s: int) -> float | None:
        """Angle for indices ``(k, s)``; None when no constraint exists or it is undefined."""
        pi = math.pi
        if self.family == "equal":
            return pi * (2 * k + 2 * s + 1) / (2 * (2 * k + 1))
        if self.family == "opposite":
            return pi * s / (2 * k + 1)
        if self.family == "product+4":
            return None if k == -1 else (pi + 2 * pi * s) / (4 * k + 4)
        if self.family == "product-4":
            return None if k == -1 else pi * s / (2 * (k + 1))
        raise ValueError("simple spectrum, no double eigenvalues")

    def angles(self, k_range=range(-3, 3), s_range=range(-12, 13)) -> list:
        """``(k, s, omega)`` triples with ``omega`` inside ``(0, pi)``."""
        out = []
        for k in k_range:
            for s in s_range:
                w = self.omega(k, s)
                if w is not None and 0.0 < w < math.pi:
                    out.append((k, s, w))
        return out


def n2_double_eigenvalue_families(tau_l: float, tau_r: float, tol: float = 1e-12) -> DoubleFamilies:
    """Classify which double-eigenvalue family a strength pair belongs to."""
    prod = tau_l * tau_r
    zero = abs(4.0 + prod) <= tol
    if tau_l != 0.0 and abs(tau_l - tau_r) <= tol:
        fam = "equal"
    elif tau_l != 0.0 and abs(tau_l + tau_r) <= tol:
        fam = "opposite"
    elif abs(prod - 4.0) <= tol:
        fam = "product+4"
    elif zero:
        fam = "product-4"
    else:
        fam = "none"
    return DoubleFamilies(fam, zero)


def n3_secular(lam, tau1, tau2, tau3, omega, omega2):
    """Three-edge secular expression; vanishes exactly at eigenvalues."""
    lam = np.asarray(lam, dtype=float)
    c = [derive_edge_constants(t) for t in (tau1, tau2, tau3)]
    p1, p2, p3 = (x.p for x in c)
    m1, m2, m3 = (x.m for x in c)
    a = 2.0 * lam + 1.0
    b = TWO_PI * lam
    val = (p1 * p2 * p3 - m1 * m2 * m3 * np.cos(b)
           - m1 * tau2 * tau3 * np.cos((omega2 - omega) * a - b)
           - m2 * tau1 * tau3 * np.cos(-(omega + omega2) * a + b)
           - m3 * tau1 * tau2 * np.cos(2.0 * omega * a - b))
    return float(val) if val.ndim == 0 else val


def n3_symmetric_residual(lam, tau):
    """Residual of the equal-strength three-edge equation."""
    lam = np.asarray(lam, dtype=float)
    t2 = tau * tau
    val = ((4.0 + t2) ** 3 * np.cos(TWO_PI * lam) - (4.0 - t2) ** 3
           - 48.0 * (4.0 + t2) * t2 * np.cos(math.pi / 3.0 * (2.0 * lam + 1.0)))
    return float(val) if val.ndim == 0 else val


@dataclass(frozen=True)
class RootFamilyMember:
    family: int
    k: int
    lam: float
    residual: float
    in_window: bool  # lambda in (-1, 0)


def _families(tau):
    t2 = tau * tau
    if abs(abs(tau) - 2.0 / SQRT3) <= 1e-12:
        root5 = math.sqrt(5.0)
        return [
            lambda k: 3 * k + 0.5,
            lambda k: 3 * k + 1.5,
            lambda k: 3 * k - 3.0 / math.pi * math.atan((2.0 + root5) / SQRT3),
            lambda k: 3 * k + 3.0 / math.pi * math.atan((root5 - 2.0) / SQRT3),
        ]
    s = math.sqrt(48.0 + 40.0 * t2 + 3.0 * t2 * t2)
    # atan2 keeps the zero-denominator cases finite; any branch shift is a
    # multiple of 3 and is absorbed into k
    return [
        lambda k: 3 * k + 3.0 / math.pi * math.atan2(6.0 - SQRT3 * tau, 3.0 * tau + 2.0 * SQRT3),
        lambda k: 3 * k + 3.0 / math.pi * math.atan2(6.0 + SQRT3 * tau, 2.0 * SQRT3 - 3.0 * tau),
        lambda k: 3 * k - 3.0 / math.pi * math.atan((12.0 + 3.0 * t2 + SQRT3 * s) / (8.0 * SQRT3)),
        lambda k: 3 * k + 3.0 / math.pi * math.atan((-12.0 - 3.0 * t2 + SQRT3 * s) / (8.0 * SQRT3)),
    ]


def n3_symmetric_roots(tau: float, k_range=(-1, 0, 1)) -> list:
    """Members of the four closed-form root families, sorted by ``lambda``.

    Each member carries the residual of the symmetric three-edge equation,
    normalised by ``(4 + tau^2)^3``, and whether it lies in ``(-1, 0)``.
    """
    derive_edge_constants(tau)
    norm = (4.0 + tau * tau) ** 3
    out = []
    for fi, f in enumerate(_families(float(tau)), start=1):
        for k in k_range:
            lam = float(f(k))
            res = abs(n3_symmetric_residual(lam, tau)) / norm
            out.append(RootFamilyMember(fi, k, lam, res, -1.0 < lam < 0.0))
    out.sort(key=lambda r: r.lam)
    return out


def n3_symmetric_deficiency(tau: float) -> tuple[int, int]:
    """Deficiency indices of the equal-strength symmetric 3-star."""
    if abs(abs(tau) - 2.0) <= 1e-12:
        raise Confinement("|tau| = 2")
    n = 1 if abs(tau) > 2.0 * SQRT3 else 0
    return (n, n)
