"""Eigenvalues of the spin-orbit operator from zeros of the secular function.

Simple eigenvalues are sign changes of ``G`` and are bracketed on a uniform
grid. Double eigenvalues (``T = I``) and parabolic points (``tr T = 2`` with
``T != I``) are zeros of even order and never change sign; they are found by
minimising ``s*G`` near every grid extremum that points towards zero.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import OddCount, SolverDiverged, ValidationError
from .graph import StarGraph
from .transfer import identity_defect, monodromy_matrix, secular


@dataclass(frozen=True)
class SolverOptions:
    grid_per_unit: int = 8192
    residual_tol: float = 1e-9
    multiplicity_tol: float = 1e-8
    boundary_tol: float = 1e-9
    touch_tol: float = 1e-13


@dataclass(frozen=True)
class EigenRecord:
    lambda_tilde: float
    lam: float
    multiplicity: int
    residual: float
    identity_defect: float
    boundary: bool = False
    parabolic: bool = False


@dataclass(frozen=True)
class Spectrum:
    records: tuple
    window: tuple
    boundary_flags: tuple = ()

    @property
    def total_with_multiplicity(self) -> int:
        return sum(r.multiplicity for r in self.records)

    @property
    def lambda_tildes(self) -> np.ndarray:
        return np.array([r.lambda_tilde for r in self.records])

    @property
    def multiplicities(self) -> list:
        return [r.multiplicity for r in self.records]


class BoundaryEigenvalue(UserWarning):
    """An eigenvalue sits within tolerance of a window endpoint."""


def _scale(graph: StarGraph, lam: float) -> float:
    t = monodromy_matrix(graph, lam)
    return max(1.0, float(np.sum(np.abs(t) ** 2)) / 2.0)


def _refine_touch(graph, x0, h=1e-6, iters=6):
    """Locate a point where ``T = I`` near ``x0``.

    Near a double eigenvalue ``T - I`` is linear in ``lambda``; Gauss-Newton on
    that linearisation converges to machine precision, unlike a minimiser
    on the quadratic ``G``.
    """
    eye = np.eye(2)
    x = float(x0)
    for _ in range(iters):
        d0 = monodromy_matrix(graph, x) - eye
        dm = (monodromy_matrix(graph, x + h) - monodromy_matrix(graph, x - h)) / (2.0 * h)
        den = float(np.vdot(dm, dm).real)
        if den == 0.0:
            break
        step = float(np.vdot(dm, d0).real) / den
        x -= step
        if abs(step) < 1e-16:
            break
    return x, identity_defect(graph, x)


def _candidates(graph: StarGraph, lo: float, hi: float, opts: SolverOptions):
    npts = max(int(math.ceil((hi - lo) * opts.grid_per_unit)), 64) + 1
    x = np.linspace(lo, hi, npts)
    g = secular(graph, x)
    out = []  # (lam, kind)

    for i in np.flatnonzero(g == 0.0):
        out.append((float(x[i]), "grid"))

    s = np.sign(g)
    for i in np.flatnonzero(s[:-1] * s[1:] < 0):
        r = brentq(lambda t: secular(graph, t), x[i], x[i + 1], xtol=1e-15, rtol=8.9e-16, maxiter=200)
        out.append((float(r), "simple"))

    # interior extrema of G pointing towards zero, with no sign change nearby
    sg = s * g
    mid = slice(1, npts - 1)
    ext = (
        (s[mid] != 0) & (s[:-2] == s[mid]) & (s[2:] == s[mid])
        & (sg[mid] <= s[mid] * g[:-2]) & (sg[mid] <= s[mid] * g[2:])
    )
    for i in np.flatnonzero(ext) + 1:
        si = s[i]
        a, b = float(x[i - 1]), float(x[i + 1])
        res = minimize_scalar(
            lambda t: si * secular(graph, t), bounds=(a, b), method="bounded",
            options={"xatol": 1e-14},
        )
        xm, vm = float(res.x), float(res.fun)
        if abs(vm) <= opts.touch_tol * _scale(graph, xm):
            # even-order zero: double eigenvalue if T = I there, else parabolic
            xd, dd = _refine_touch(graph, xm)
            ok = dd < opts.multiplicity_tol and abs(xd - xm) < (b - a)
            out.append((xd if ok else xm, "touch"))
        elif vm < 0.0:
            f = lambda t: secular(graph, t)
            out.append((float(brentq(f, a, xm, xtol=1e-15, rtol=8.9e-16)), "simple"))
            out.append((float(brentq(f, xm, b, xtol=1e-15, rtol=8.9e-16)), "simple"))

    # rounding can split an even-order zero into a pair of sign changes
    out.sort()
    merged = []
    for lam, kind in out:
        if merged and lam - merged[-1][0] < 1e-7:
            mid = 0.5 * (lam + merged[-1][0])
            if abs(secular(graph, mid)) <= opts.touch_tol * _scale(graph, mid):
                xd, dd = _refine_touch(graph, mid)
                ok = dd < opts.multiplicity_tol and abs(xd - mid) < 1e-6
                merged[-1] = (xd if ok else mid, "touch")
                continue
        merged.append((lam, kind))
    out = merged
    h = (hi - lo) / (npts - 1)
    for k, (lam, kind) in enumerate(out):
        if kind != "touch" and identity_defect(graph, lam) < 1e-5:
            xd, dd = _refine_touch(graph, lam)
            if dd < opts.multiplicity_tol and abs(xd - lam) < h:
                out[k] = (xd, "touch")
    return out


def find_eigenvalues(graph: StarGraph, window_lo: float, window_hi: float,
                     opts: SolverOptions | None = None) -> Spectrum:
    """All eigenvalues ``lambda_tilde`` in ``[window_lo, window_hi]``.

    Parameters
    ----------
    graph : StarGraph
    window_lo, window_hi : float
        Window in ``lambda_tilde``.
    opts : SolverOptions, optional

    Returns
    -------
    Spectrum
        Records sorted by ``lambda_tilde``; roots within ``boundary_tol`` of
        an endpoint carry ``boundary=True`` and trigger a
        :class:`BoundaryEigenvalue` warning.

    Raises
    ------
    SolverDiverged
        A refined root misses the residual tolerance.
    """
    opts = opts or SolverOptions()
    if not window_lo < window_hi:
        raise ValidationError("window_lo must be below window_hi")
    pad = max(4.0 * opts.boundary_tol, 3.0 / opts.grid_per_unit)
    lo, hi = window_lo - 0.5 - pad, window_hi - 0.5 + pad

    cands = sorted(_candidates(graph, lo, hi, opts))
    merged = []
    for lam, kind in cands:
        if merged and abs(lam - merged[-1][0]) <= opts.boundary_tol:
            if kind == "touch":
                merged[-1] = (lam, kind)
            continue
        merged.append((lam, kind))

    records, flags = [], []
    for lam, kind in merged:
        lt = lam + 0.5
        if lt < window_lo - opts.boundary_tol or lt > window_hi + opts.boundary_tol:
            continue
        g = secular(graph, lam)
        if abs(g) > opts.residual_tol * _scale(graph, lam):
            raise SolverDiverged(f"residual {abs(g):.3e} at lambda={lam!r}")
        d = identity_defect(graph, lam)
        mult = 2 if d < opts.multiplicity_tol else 1
        bnd = min(abs(lt - window_lo), abs(lt - window_hi)) <= opts.boundary_tol
        rec = EigenRecord(lt, lam, mult, abs(g), d, bnd, kind == "touch" and mult == 1)
        records.append(rec)
        if bnd:
            flags.append(lt)
            warnings.warn(f"eigenvalue {lt!r} at window boundary", BoundaryEigenvalue, stacklevel=2)
    return Spectrum(tuple(records), (float(window_lo), float(window_hi)), tuple(flags))


@dataclass(frozen=True)
class DeficiencyResult:
    n_plus: int
    n_minus: int
    count: int
    boundary_flags: tuple = ()
    spectrum: Spectrum | None = field(default=None, repr=False)

    def as_tuple(self) -> tuple:
        return (self.n_plus, self.n_minus)


def deficiency_indices(graph: StarGraph, opts: SolverOptions | None = None) -> DeficiencyResult:
    """Deficiency indices as half the eigenvalue count in ``(-1/2, 1/2)``.

    Eigenvalues within ``boundary_tol`` of ``+-1/2`` are excluded and
    reported in ``boundary_flags``.

    Raises
    ------
    OddCount
        The count is odd or exceeds ``2N``.
    """
    opts = opts or SolverOptions()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BoundaryEigenvalue)
        spec = find_eigenvalues(graph, -0.5, 0.5, opts)
    inside = [r for r in spec.records if abs(r.lambda_tilde) < 0.5 - opts.boundary_tol]
    edge = tuple(r.lambda_tilde for r in spec.records if abs(r.lambda_tilde) >= 0.5 - opts.boundary_tol)
    count = sum(r.multiplicity for r in inside)
    if count % 2 or count > 2 * graph.n_edges:
        raise OddCount(f"{count} eigenvalues in (-1/2, 1/2) for N={graph.n_edges}")
    if edge:
        warnings.warn(f"eigenvalues at +-1/2 excluded: {edge}", BoundaryEigenvalue, stacklevel=2)
    inner = Spectrum(tuple(inside), (-0.5, 0.5), edge)
    return DeficiencyResult(count // 2, count // 2, count, edge, inner)


@dataclass(frozen=True)
class SweepRow:
    value: float
    n_plus: int | None
    n_minus: int | None
    eigenvalues: tuple
    error: str | None = None


@dataclass(frozen=True)
class SweepResult:
    rows: tuple
    transitions: tuple  # (value_before, value_after, n_before, n_after)


def sweep(graph: StarGraph, indices, values, opts: SolverOptions | None = None) -> SweepResult:
    """Deficiency indices along a path that ties the strengths ``indices``.

    ``indices`` are 1-based edge numbers; every listed ``tau_j`` is set to the
    sweep value. Failures at a single value are recorded in the row and do
    not abort the sweep.
    """
    idx = [int(k) for k in np.atleast_1d(indices)]
    if any(not 1 <= k <= graph.n_edges for k in idx):
        raise ValidationError(f"sweep indices {idx} outside 1..{graph.n_edges}")
    rows = []
    for v in np.asarray(values, dtype=float):
        taus = np.array(graph.taus, dtype=float)
        taus[[k - 1 for k in idx]] = v
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", BoundaryEigenvalue)
                res = deficiency_indices(graph.with_taus(taus), opts)
            rows.append(SweepRow(float(v), res.n_plus, res.n_minus,
                                 tuple(float(r.lambda_tilde) for r in res.spectrum.records)))
        except Exception as exc:  # noqa: BLE001 - recorded per row by design
            rows.append(SweepRow(float(v), None, None, (), f"{type(exc).__name__}: {exc}"))
    trans = []
    valid = [r for r in rows if r.n_plus is not None]
    for a, b in zip(valid, valid[1:]):
        if a.n_plus != b.n_plus:
            trans.append((a.value, b.value, a.n_plus, b.n_plus))
    return SweepResult(tuple(rows), tuple(trans))
