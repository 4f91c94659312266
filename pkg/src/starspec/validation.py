"""Cross-checks of the general solver against closed-form results.

Each suite returns a list of :class:`Check`. ``perturb`` shifts every
closed-form reference value, which must make the suites fail; it exists
to test the checking machinery itself.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import closed_forms as cf
from .graph import broken_line_graph, inverse_convention_map, symmetric_graph, validate
from .solver import BoundaryEigenvalue, SolverOptions, deficiency_indices, find_eigenvalues
from .transfer import identity_defect, secular


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    passed: bool
    detail: str = ""


def _roots(graph, opts):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BoundaryEigenvalue)
        return find_eigenvalues(graph, -0.5, 0.5, opts).records


def suite_ray(opts, perturb=0.0):
    out = []
    for tau in (0.5, 1.0, 3.0):
        ref = np.array(cf.n2_ray_roots(tau)) + perturb
        for w in (math.pi / 6, math.pi / 2, 3 * math.pi / 4):
            recs = _roots(broken_line_graph(tau, 0.0, w), opts)
            got = np.array([r.lam for r in recs])
            ok = got.size == 2 and np.max(np.abs(got - ref)) < 1e-9 and all(r.multiplicity == 1 for r in recs)
            out.append(Check("ray", f"tau_l={tau} omega={w:.4f}", bool(ok), f"roots={got.tolist()}"))
    return out


def _pair_suite(name, sign, opts, perturb):
    out = []
    for tau in (-3.0, -1.0, 0.5, 3.0):
        for w in (math.pi / 5, math.pi / 2, 2 * math.pi / 3):
            res = deficiency_indices(broken_line_graph(tau, sign * tau, w), opts)
            want = 0 if (sign > 0 and abs(w - math.pi / 2) < 1e-12) else 1
            want += int(round(perturb * 1e6))
            out.append(Check(name, f"tau={tau} omega={w:.4f}", res.n_plus == want,
                             f"indices={res.as_tuple()}"))
    return out


def suite_equal(opts, perturb=0.0):
    return _pair_suite("equal", 1.0, opts, perturb)


def suite_opposite(opts, perturb=0.0):
    return _pair_suite("opposite", -1.0, opts, perturb)


def suite_three(opts, perturb=0.0):
    out = []
    for tau in (-5.0, -4.0, -1.0, 1.0, 3.0, 4.0, 5.0, 2 * math.sqrt(3.0)):
        g = symmetric_graph(3, [tau] * 3)
        res = deficiency_indices(g, opts)
        out.append(Check("three", f"deficiency tau={tau:.4f}",
                         res.as_tuple() == cf.n3_symmetric_deficiency(tau), f"{res.as_tuple()}"))
        ref = sorted(m.lam + perturb for m in cf.n3_symmetric_roots(tau) if m.in_window)
        got = sorted(r.lam for r in res.spectrum.records)
        ok = len(ref) == len(got) and all(abs(a - b) < 1e-9 for a, b in zip(ref, got))
        out.append(Check("three", f"roots tau={tau:.4f}", ok, f"got={got} ref={ref}"))
    return out


def suite_simple(opts, perturb=0.0):
    out = []
    for tl in (1.0, 2.5, -0.8):
        tr = -4.0 / tl
        g = broken_line_graph(tl, tr, 1.1)
        d = identity_defect(g, -0.5 + perturb)
        out.append(Check("simple", f"zero mode tau_l={tl}", d < 1e-8, f"defect={d:.2e}"))
    fam = cf.n2_double_eigenvalue_families(1.0, 1.0)
    for k, s, w in fam.angles(range(-1, 2), range(-3, 4))[:6]:
        g = broken_line_graph(1.0, 1.0, w)
        d = identity_defect(g, fam.lam(k) + perturb)
        out.append(Check("simple", f"equal family k={k} s={s}", d < 1e-8, f"defect={d:.2e}"))
    recs = _roots(broken_line_graph(1.0, 3.0, 0.9), opts)
    out.append(Check("simple", "generic pair simple", all(r.multiplicity == 1 for r in recs)))
    return out


def suite_secular(opts, perturb=0.0):
    out = []
    rng = np.random.default_rng(7)
    for _ in range(10):
        t1, t2 = rng.uniform(-1.7, 1.7, 2)
        w = rng.uniform(0.2, 2.9)
        lam = rng.uniform(-1.0, 0.0)
        g = validate(2, [w], [t1, t2])
        tl, tr = inverse_convention_map(t1, t2)
        c = cf.BrokenLineConfig(tl, tr, w)
        a, b = secular(g, lam), -2.0 * cf.n2_secular(lam, c) + perturb
        out.append(Check("secular", f"n2 lam={lam:.4f}", abs(a - b) < 1e-10, f"{a} vs {b}"))
    for _ in range(10):
        t = rng.uniform(-1.7, 1.7, 3)
        w1, w2 = np.sort(rng.uniform(0.2, 3.0, 2))
        lam = rng.uniform(-1.0, 0.0)
        g = validate(3, [w1, w2], t)
        p = np.prod(1.0 - t ** 2 / 4.0)
        a = secular(g, lam)
        b = -2.0 * cf.n3_secular(lam, *t, w1, w2) / p + perturb
        out.append(Check("secular", f"n3 lam={lam:.4f}", abs(a - b) < 1e-10, f"{a} vs {b}"))
    return out


SUITES = {
    "ray": suite_ray,
    "equal": suite_equal,
    "opposite": suite_opposite,
    "three": suite_three,
    "simple": suite_simple,
    "secular": suite_secular,
}


def run_validation(suites=None, opts: SolverOptions | None = None, perturb: float = 0.0) -> list:
    """Run the named suites (all by default) and return every check."""
    opts = opts or SolverOptions()
    names = list(SUITES) if not suites else list(suites)
    unknown = [s for s in names if s not in SUITES]
    if unknown:
        raise KeyError(f"unknown suite(s): {unknown}")
    checks = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BoundaryEigenvalue)
        for s in names:
            checks.extend(SUITES[s](opts, perturb))
    return checks
