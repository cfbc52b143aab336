"""Named numerical reproductions, one per acceptance check, plus a ``custom`` runner.

Each experiment takes a flat parameter dict (already validated against its
defaults) and returns an :class:`ExperimentResult` with summary checks and
CSV tables. Everything is deterministic given the parameters.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import background, expansion, geometry, horizon, sscmc
from .errors import AccuracyError, ConfigurationError, CMCLabError
from .io import read_snapshot
from .numerics import decay_fit
from .sphere import (
    SphericalField,
    SphericalGrid,
    grad_norm2,
    harmonic,
    laplacian,
    random_field,
    random_rotation,
    resample,
    rotate_field,
)


@dataclass
class Check:
    quantity: str
    expected: float
    got: float
    tolerance: float
    passed: bool
    error: float = 0.0
    note: str = ""

    def row(self):
        return (self.quantity, self.expected, self.got, self.error, self.tolerance, "PASS" if self.passed else "FAIL")

    def line(self):
        got = "%.10g" % self.got
        if self.error:
            got += "±%.1e" % self.error
        tail = f" ({self.note})" if self.note else ""
        return f"{self.quantity}, expected {self.expected:.10g}, got {got}, {'PASS' if self.passed else 'FAIL'}{tail}"


@dataclass
class ExperimentResult:
    name: str
    checks: list = field(default_factory=list)
    tables: dict = field(default_factory=dict)
    metrics: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def summary_rows(self):
        return [c.row() for c in self.checks]


SUMMARY_HEADER = ["quantity", "expected", "got", "error", "tolerance", "status"]


def close(quantity, expected, got, tol, relative=True, error=0.0, note=""):
    scale = max(abs(expected), 1.0) if relative == "floor" else (abs(expected) if relative else 1.0)
    dev = abs(got - expected)
    return Check(quantity, expected, got, tol, bool(dev <= tol * scale), error, note)


def at_least(quantity, threshold, fit, max_stderr=None, note=""):
    ok = fit.at_least(threshold, max_stderr)
    return Check(quantity, threshold, fit.exponent, max_stderr or 0.0, bool(ok), fit.stderr, note)


def below(quantity, bound, got, note=""):
    return Check(quantity, bound, got, bound, bool(got < bound), 0.0, note)


# --------------------------------------------------------------------------
# parameter helpers


def parse_vector(text, n=3):
    v = [float(x) for x in str(text).replace(";", ",").split(",") if x.strip()]
    if len(v) != n:
        raise ConfigurationError(f"expected {n} components, got {text!r}")
    return np.array(v)


def parse_cases(text, width):
    cases = []
    for chunk in str(text).split(";"):
        if chunk.strip():
            vals = [float(x) for x in chunk.split(",")]
            if len(vals) != width:
                raise ConfigurationError(f"each case needs {width} numbers: {chunk!r}")
            cases.append(tuple(vals))
    if not cases:
        raise ConfigurationError("empty case list")
    return cases


def parse_harmonics(text, grid):
    """``"l m coeff; l m coeff"`` as a real field (real harmonics)."""
    out = SphericalField.constant(grid, 0.0)
    for chunk in str(text).split(";"):
        if not chunk.strip():
            continue
        parts = chunk.split()
        if len(parts) != 3:
            raise ConfigurationError(f"harmonic term needs 'l m coeff': {chunk!r}")
        l, m, a = int(parts[0]), int(parts[1]), float(parts[2])
        if l > grid.l_max or abs(m) > l:
            raise ConfigurationError(f"bad harmonic index ({l}, {m}) for l_max={grid.l_max}")
        out = out + a * harmonic(grid, l, m)
    return out


def boundary_field(p, grid):
    """Boundary value from ``boundary`` (snapshot path), ``harmonics`` or a seeded random field."""
    if p.get("boundary"):
        return read_snapshot(p["boundary"])
    if p.get("harmonics"):
        return parse_harmonics(p["harmonics"], grid)
    rng = np.random.default_rng(int(p["seed"]))
    return random_field(grid, int(p["degree"]), rng)


def _grid(p, default):
    return SphericalGrid(int(p.get("l_max") or default))


def geometry_rows(sg):
    return ["s", "node", "H", "L", "normA0", "S"], sg.rows()


def fit_rows(fits):
    return ["quantity", "exponent", "stderr"], [(k, v.exponent, v.stderr) for k, v in fits.items()]


# --------------------------------------------------------------------------
# experiments


def run_sscmc_jets(p):
    """Expansion coefficients of spherically symmetric CMC slices, closed form against Richardson."""
    res = ExperimentResult("sscmc-jets")
    cases = parse_cases(p["cases"], 3)
    rows = []
    for m, H, c in cases:
        par = sscmc.SSCMCParams(m, H, c)
        co = sscmc.expansion_coeffs(par)
        expected = (-0.5 / H**2, 0.0, 0.75 / H**4, (6.0 * c * H - 4.5 * m) / H**4)
        for k, name in enumerate(("P_s", "P_ss", "P_sss", "P_ssss")):
            tag = f"{name} (m={m:g},H={H:g},c={c:g})"
            res.checks.append(close(tag + " closed", expected[k], co.closed[k], 1e-14, "floor"))
            res.checks.append(
                close(tag, expected[k], co.numeric[k], p["tol"], False, error=co.numeric_error[k])
            )
            rows.append((m, H, c, k + 1, expected[k], co.closed[k], co.series[k], co.numeric[k], co.numeric_error[k]))
    res.tables["jets"] = (["m", "H", "c", "order", "expected", "closed", "series", "numeric", "numeric_error"], rows)
    return res


def run_sscmc_scalar(p):
    """Scalar curvature of the SSCMC graph against the closed-form profile."""
    res = ExperimentResult("sscmc-scalar")
    m, c = p["m"], p["c"]
    par = sscmc.SSCMCParams(m, 1.0, c)
    P = geometry.RadialP.from_sscmc(par)
    r = np.linspace(p["r_lo"] * m if m > 0 else p["r_lo"], p["r_hi"] * m if m > 0 else p["r_hi"], int(p["n"]))
    sg = geometry.surface_geometry(P, 1.0 / r)
    S = sg.S[:, 0]
    exp = sscmc.scalar_curvature_profile(par, r)
    rel = np.abs(S / exp - 1.0)
    res.checks.append(below("max relative |S/S_exact - 1|", p["tol"], float(rel.max())))
    res.checks.append(Check("min (S + 6)", -1e-10, float((S + 6.0).min()), 1e-10, bool((S + 6.0).min() >= -1e-10)))
    res.tables["scalar"] = (["r", "S", "expected"], list(zip(r, S, exp)))
    return res


def run_ah_profile(p):
    """Cubic coefficient of the asymptotically hyperbolic profile w^2(tau)."""
    res = ExperimentResult("ah-profile")
    rows = []
    for m, c in parse_cases(p["cases"], 2):
        prof = sscmc.ah_profile(sscmc.SSCMCParams(m, 1.0, c))
        # the expected coefficient vanishes when c = m; use an absolute floor there
        res.checks.append(close(f"tau^3 coefficient (m={m:g},c={c:g})", prof.expected, prof.cubic, p["tol"], "floor"))
        rows.append((m, c, prof.cubic, prof.expected, prof.fit_rms))
    res.tables["ah_profile"] = (["m", "c", "coefficient", "expected", "fit_rms"], rows)
    return res


def run_custom(p):
    """Hyperboloid calibration by default; ``kind = barrier`` runs the geometry on given boundary data."""
    res = ExperimentResult("custom")
    grid = _grid(p, 8)
    s_list = [float(x) for x in str(p["s_list"]).split(",")]
    if p["kind"] == "hyperboloid":
        rows = []
        for a in parse_cases(p["a_list"], 3):
            hyp = geometry.HyperboloidP(np.array(a), grid)
            sg = geometry.surface_geometry(hyp, s_list)
            Hm = geometry.mean_curvature(hyp, s_list[-1])
            tag = f"|a|={np.linalg.norm(a):.3g}"
            res.checks.append(below(f"max|H - 1| {tag}", 1e-9, float(np.abs(sg.H - 1.0).max())))
            res.checks.append(below(f"max|H_identity - 1| {tag}", 1e-9, float(np.abs(Hm - 1.0).max())))
            res.checks.append(below(f"max|A0|_G {tag}", 1e-10, float(sg.norm_a0.max())))
            res.checks.append(below(f"max|S + 6| {tag}", 1e-8, float(np.abs(sg.S + 6.0).max())))
            rows.extend((a[0], a[1], a[2]) + tuple(r) for r in sg.rows())
        res.tables["geometry"] = (["a_x", "a_y", "a_z", "s", "node", "H", "L", "normA0", "S"], rows)
    elif p["kind"] == "barrier":
        f = boundary_field(p, grid)
        data = expansion.BoundaryData(f, p["H0"], p["m"])
        P = expansion.build_barrier(data, f4=p["f4"] if p["f4"] != "" else None)
        sg = geometry.surface_geometry(P, [s for s in s_list if s <= P.s_max])
        res.checks.append(below("max|tr_G A0|", 1e-10, float(np.abs(sg.tr_a0).max())))
        res.checks.append(below("-min L (spacelike)", 0.0, -float(sg.L.min())))
        res.tables["geometry"] = geometry_rows(sg)
        res.metrics["s_max"] = P.s_max
    else:
        raise ConfigurationError(f"unknown custom kind {p['kind']!r}")
    return res


def _barrier_window(P, p):
    s0 = min(p["s0"], P.s_max / 2.0) if P.s_max < p["s0"] else p["s0"]
    return s0 * 2.0 ** -np.arange(int(p["levels"]))


BARRIER_RESIDUAL_LIMIT = 0.25


def run_barrier(p):
    """Decay of the mean-curvature defect of a random cubic barrier."""
    res = ExperimentResult("barrier")
    grid = _grid(p, int(p["degree"]))
    f = boundary_field(p, grid)
    data = expansion.BoundaryData(f, p["H0"], p["m"])
    P = expansion.build_barrier(data, s_max=p["s0"])
    ss = _barrier_window(P, p)
    sg = geometry.surface_geometry(P, ss)
    defect = np.abs(sg.H - p["H0"]).max(axis=1)
    note = f"s in {ss[0]:.4g}*2^-k (spacelike s_max = {P.s_max:.4g})"
    try:
        # the acceptance gate is the stderr; the fit-quality limit only rejects non-power-law data
        fit = decay_fit(ss, defect, residual_limit=BARRIER_RESIDUAL_LIMIT)
        res.checks.append(at_least("sup|H - H0| decay exponent", 2.9, fit, 0.1, note))
        res.tables["fits"] = fit_rows({"H_defect": fit})
    except AccuracyError as exc:
        res.checks.append(Check("sup|H - H0| decay exponent", 2.9, math.nan, 0.1, False, note=str(exc)))
    res.tables["geometry"] = geometry_rows(sg)
    res.metrics.update(s_max=P.s_max, window=ss, defect=defect)
    return res


def run_compat(p):
    """Compatibility residual for constant and linear data, plus relation closure."""
    res = ExperimentResult("compat")
    grid = _grid(p, 8)
    a = parse_vector(p["a"])
    rows = []
    cases = [("f = const", SphericalField.constant(grid, p["const"])), ("f = a.x", SphericalField.linear(grid, a))]
    if p.get("boundary") or p.get("harmonics"):
        cases.append(("f = user", boundary_field(p, grid)))
    for label, f in cases:
        j = expansion.jet_coefficients(expansion.BoundaryData(f, p["H0"], p["m"]))
        r = j.compatibility_residual.sup()
        d1, d2 = j.relation_defects()
        if label != "f = user":
            res.checks.append(below(f"compatibility residual, {label}", p["tol"], r))
            res.checks.append(below(f"closure L_s, {label}", 1e-10, d1))
            res.checks.append(below(f"closure L_ss, {label}", 1e-10, d2))
        rows.append((label, r, d1, d2))
    res.tables["compat"] = (["case", "residual_sup", "closure_Ls", "closure_Lss"], rows)
    return res


def _model_window(p):
    return p["s0_model"] * 2.0 ** -np.arange(int(p["levels"]))


def run_adecay(p):
    """Decay ladder of the traceless second fundamental form."""
    res = ExperimentResult("adecay")
    grid = _grid(p, int(p["degree"]))
    m = p["m"]
    fits = {}
    # generic boundary data (as for the barrier)
    f = boundary_field(p, grid)
    P = expansion.build_barrier(expansion.BoundaryData(f, 1.0, m), s_max=p["s0"])
    ss = _barrier_window(P, p)
    fits["generic"] = decay_fit(ss, geometry.surface_geometry(P, ss).sup("norm_a0"))
    res.checks.append(at_least("|A0|_G exponent, generic f", 0.9, fits["generic"], note=f"s0 = {ss[0]:.4g}"))
    a = parse_vector(p["a"])
    lin = SphericalField.linear(grid, a)
    ss = _model_window(p)
    for mass, thr, label in ((m, 2.9, "f = a.x, hyperboloid f4"), (0.0, 3.9, "f = a.x, hyperboloid f4, m = 0")):
        f4 = geometry.HyperboloidP(-a, grid).boundary_jets(4)[4]
        P = expansion.build_barrier(expansion.BoundaryData(lin, 1.0, mass), f4=f4, s_max=p["s0"])
        fits[label] = decay_fit(ss, geometry.surface_geometry(P, ss).sup("norm_a0"))
        res.checks.append(at_least(f"|A0|_G exponent, {label}", thr, fits[label]))
    zero = SphericalField.constant(grid, 0.0)
    P = expansion.build_barrier(expansion.BoundaryData(zero, 1.0, m), f4=-4.5 * m, s_max=p["s0"])
    fits["f = 0, f4 = -9m/2"] = decay_fit(ss, geometry.surface_geometry(P, ss).sup("norm_a0"))
    res.checks.append(at_least("|A0|_G exponent, f = 0, f4 = -9m/2", 3.9, fits["f = 0, f4 = -9m/2"]))
    res.tables["fits"] = fit_rows(fits)
    res.metrics["fits"] = fits
    return res


def run_ah_check(p):
    """Conformal deviation and hyperbolic-frame decay for linear boundary data."""
    res = ExperimentResult("ah-check")
    grid = _grid(p, 8)
    a = parse_vector(p["a"])
    m = p["m"]
    lin = SphericalField.linear(grid, a)
    f4 = geometry.HyperboloidP(-a, grid).boundary_jets(4)[4]
    P = expansion.build_barrier(expansion.BoundaryData(lin, 1.0, m), f4=f4, s_max=p["s0"])
    ss = p["s0"] * 2.0 ** -np.arange(int(p["levels"]))
    dev = geometry.ah_deviation(P, -a, ss)
    res.checks.append(at_least("|theta|_b decay exponent", 2.9, dev.theta_fit))
    res.checks.append(at_least("frame decay rate tau (in e^-rho)", 2.9, dev.frame_fit))
    res.checks.append(Check("tau > 3/2", 1.5, dev.frame_fit.exponent, 0.0, bool(dev.frame_fit.exponent > 1.5)))
    res.tables["ah"] = (["s", "theta_norm", "exp_minus_rho", "frame_dev"], list(zip(ss, dev.theta_norm, dev.exp_minus_rho, dev.frame_dev)))
    res.tables["fits"] = fit_rows({"theta": dev.theta_fit, "frame": dev.frame_fit})
    res.metrics["deviation"] = dev
    return res


def run_horizon_slope(p):
    """Boundary slope of the horizon branch and chart consistency of H."""
    res = ExperimentResult("horizon-slope")
    m, H = p["m"], p["H"]
    par = sscmc.SSCMCParams.horizon_branch(m, H)
    g = horizon.HorizonGraph.from_sscmc(par)
    est = horizon.boundary_slope(g, eta0=p["eta0"], levels=int(p["levels"]))
    res.checks.append(close("u_eta0", 24.0 * m * m * H, est.u_eta0, p["tol"], "floor", error=est.error))
    R = geometry.RadialP.from_sscmc(par)
    r = np.linspace(p["r_lo"] * m, p["r_hi"] * m, int(p["n"]))
    rows = []
    for ri in r:
        h_eta = float(horizon.mean_curvature_eta(g, math.sqrt(1.0 - 2.0 * m / ri))[0])
        h_null = float(geometry.mean_curvature(R, 1.0 / ri)[0])
        rows.append((ri, h_eta, h_null, abs(h_eta - h_null)))
    worst = max(row[3] for row in rows)
    res.checks.append(below("max |H_eta - H_null| on the overlap", 1e-6, worst))
    res.tables["chart"] = (["r", "H_eta", "H_null", "diff"], rows)
    res.metrics.update(slope=est, chart_gap=worst)
    return res


def random_horizon_graphs(count, seed, l_max=6, etas=(0.05, 0.1, 0.2)):
    """Random spacelike polynomial graphs ``u = sum_k c_k eta^k`` (degree 3) with their masses."""
    rng = np.random.default_rng(seed)
    grid = SphericalGrid(l_max)
    out = []
    while len(out) < count:
        m = float(rng.uniform(0.5, 1.5))
        Hs = float(rng.uniform(0.1, 1.0))
        c = [
            random_field(grid, 3, rng),
            SphericalField.constant(grid, 24.0 * m * m * Hs) + 0.3 * random_field(grid, 3, rng),
            0.3 * random_field(grid, 4, rng),
            0.1 * random_field(grid, 2, rng),
        ]
        g = horizon.HorizonGraph.polynomial(c, m, Hs, eta_max=max(etas))
        if all(horizon.lorentz_norm_eta(g, e).min() > 0.0 for e in etas):
            out.append(g)
    return out


def run_horizon_residual(p):
    """Identity suite: eta series, tracelessness, rotations, Kruskal round trips."""
    res = ExperimentResult("horizon-residual")
    etas = [float(x) for x in str(p["etas"]).split(",")]
    rows = []
    worst = 0.0
    par = sscmc.SSCMCParams.horizon_branch(p["m"], p["H"])
    graphs = [("sscmc", horizon.HorizonGraph.from_sscmc(par))]
    graphs += [(f"random{i}", g) for i, g in enumerate(random_horizon_graphs(int(p["count"]), int(p["seed"]), etas=etas))]
    for label, g in graphs:
        for e in etas:
            H = horizon.mean_curvature_eta(g, e)
            r = horizon.eta_series_residual(g, e, H)
            k = int(np.argmax(np.abs(r)))
            worst = max(worst, float(np.abs(r).max()))
            rows.append((label, e, float(H[k]), float(r[k])))
    res.checks.append(below("max |eta-series residual|", 1e-9, worst))
    res.tables["residual"] = (["graph", "eta", "H", "residual"], rows)
    # the rest of the identity suite
    rng = np.random.default_rng(int(p["seed"]))
    grid = SphericalGrid(6)
    tr = 0.0
    for _ in range(3):
        f = random_field(grid, 3, rng)
        P = expansion.build_barrier(expansion.BoundaryData(f, 1.0, p["m"]), s_max=0.05)
        sg = geometry.surface_geometry(P, P.s_max * 2.0 ** -np.arange(4))
        tr = max(tr, float(np.abs(sg.tr_a0).max()))
    res.checks.append(below("max |tr_G A0|", 1e-10, tr))
    f = random_field(grid, 3, rng)
    rot = max(
        rotation_defect(lambda h: expansion.compatibility_residual(expansion.BoundaryData(h, 1.0, p["m"])), f, int(p["seed"])),
        rotation_defect(lambda h: grad_norm2(h) + laplacian(h), resample(f, SphericalGrid(8)), int(p["seed"]) + 1),
    )
    res.checks.append(below("max rotation-equivariance defect", 1e-8, rot))
    res.checks.append(below("max Kruskal round-trip defect", 1e-10, kruskal_roundtrip_defect(p["m"])))
    return res


def run_boundary_geodesic(p):
    """Decay of the boundary pairings as r approaches the horizon."""
    res = ExperimentResult("boundary-geodesic")
    m = p["m"]
    par = sscmc.SSCMCParams.horizon_branch(m, p["H"])
    g = horizon.HorizonGraph.from_sscmc(par)
    r_list = horizon.geodesic_window(m, p["h0"], int(p["kmax"]))
    tab = horizon.boundary_totally_geodesic(g, r_list)
    for name, fit in tab.fits().items():
        if fit.infinite:
            res.checks.append(Check(f"pairing{name} h-exponent", 1.5, math.inf, 0.05, True, note="identically zero"))
        else:
            res.checks.append(close(f"pairing{name} h-exponent", 1.5, fit.exponent, 0.05, False, error=fit.stderr))
    res.checks.append(below("max |d_t pairing|", 1e-14, float(np.abs(tab.pairing_t).max())))
    res.tables["pairings"] = (["r", "pairing22", "pairing23", "pairing33"], tab.rows())
    # a non-symmetric graph, so that every pairing is non-trivial
    # the mixed pairing carries a sqrt(h) correction here, so the window starts closer to the horizon
    h0 = p["h0_nonsym"]
    g2 = random_horizon_graphs(1, int(p["seed"]), etas=(0.05, 0.1, 0.2, math.sqrt(h0)))[0]
    tab2 = horizon.boundary_totally_geodesic(g2, horizon.geodesic_window(g2.m, h0, int(p["kmax"])))
    for name, fit in tab2.fits().items():
        res.checks.append(close(f"pairing{name} h-exponent (non-symmetric)", 1.5, fit.exponent, 0.05, False, error=fit.stderr))
    res.tables["pairings_nonsymmetric"] = (["r", "pairing22", "pairing23", "pairing33"], tab2.rows())
    res.metrics.update(table=tab, table_nonsymmetric=tab2)
    return res


# name -> (runner, defaults)
REGISTRY = {
    "sscmc-jets": (run_sscmc_jets, {"cases": "1,1,0; 1,1,2; 0,1,0; 1,2,1", "tol": 1e-5}),
    "sscmc-scalar": (run_sscmc_scalar, {"m": 1.0, "c": 2.0, "r_lo": 5.0, "r_hi": 50.0, "n": 46, "tol": 1e-4}),
    "ah-profile": (run_ah_profile, {"cases": "1,0; 1,1; 1,3", "tol": 1e-3}),
    "custom": (
        run_custom,
        {
            "kind": "hyperboloid",
            "a_list": "0,0,0; 0.3,-0.4,0",
            "s_list": "0.1,0.05,0.025",
            "l_max": 8,
            "H0": 1.0,
            "m": 1.0,
            "f4": "",
            "boundary": "",
            "harmonics": "",
            "seed": 2024,
            "degree": 8,
        },
    ),
    "barrier": (
        run_barrier,
        {"seed": 2024, "degree": 8, "l_max": 0, "H0": 1.0, "m": 1.0, "s0": 0.1, "levels": 7, "boundary": "", "harmonics": ""},
    ),
    "compat": (
        run_compat,
        {"a": "0.42,-0.56,0", "const": 0.37, "H0": 1.0, "m": 1.0, "l_max": 8, "tol": 1e-8, "boundary": "", "harmonics": ""},
    ),
    "adecay": (
        run_adecay,
        {
            "seed": 2024,
            "degree": 8,
            "l_max": 0,
            "m": 1.0,
            "a": "0.3,-0.2,0.4",
            "s0": 0.1,
            "s0_model": 0.025,
            "levels": 7,
            "boundary": "",
            "harmonics": "",
        },
    ),
    "ah-check": (run_ah_check, {"a": "0.3,-0.2,0.4", "m": 1.0, "s0": 0.1, "levels": 7, "l_max": 8}),
    "horizon-slope": (
        run_horizon_slope,
        {"m": 1.0, "H": 1.0, "eta0": 0.05, "levels": 6, "tol": 1e-3, "r_lo": 5.0, "r_hi": 20.0, "n": 16},
    ),
    "horizon-residual": (run_horizon_residual, {"m": 1.0, "H": 1.0, "count": 20, "seed": 7, "etas": "0.05,0.1,0.2"}),
    "boundary-geodesic": (run_boundary_geodesic, {"m": 1.0, "H": 1.0, "h0": 0.1, "h0_nonsym": 0.02, "kmax": 8, "seed": 11}),
}


def coerce(defaults, overrides):
    """Merge ``overrides`` (strings) into ``defaults``, casting to each default's type."""
    p = dict(defaults)
    for k, v in overrides.items():
        if k not in defaults:
            raise ConfigurationError(f"unknown parameter {k!r}")
        d = defaults[k]
        try:
            if isinstance(d, bool):
                p[k] = str(v).strip().lower() in ("1", "true", "yes")
            elif isinstance(d, int):
                p[k] = int(v)
            elif isinstance(d, float):
                p[k] = float(v)
            else:
                p[k] = str(v).strip()
        except ValueError as exc:
            raise ConfigurationError(f"bad value for {k!r}: {v!r}") from exc
    return p


def validate(name, p):
    """Cheap checks that need no computation (file existence, domains)."""
    if p.get("boundary"):
        import os

        if not os.path.isfile(p["boundary"]):
            raise ConfigurationError(f"boundary snapshot not found: {p['boundary']}")
    for key in ("m",):
        if key in p and p[key] < 0.0:
            raise ConfigurationError("mass must be non-negative")
    for key in ("H", "H0"):
        if key in p and not p[key] > 0.0:
            raise ConfigurationError(f"{key} must be positive")
    if name in ("horizon-slope", "horizon-residual", "boundary-geodesic") and not p["m"] > 0.0:
        raise ConfigurationError("horizon experiments need m > 0")
    # parse structured fields now so that malformed text fails before any work
    for key, width in (("cases", None), ("a", 3), ("a_list", None)):
        if key in p:
            if key == "a":
                parse_vector(p[key])
            elif key == "a_list":
                parse_cases(p[key], 3)
            else:
                parse_cases(p[key], 3 if name == "sscmc-jets" else 2)


def run(name, overrides=None, l_max=None):
    if name not in REGISTRY:
        raise ConfigurationError(f"unknown experiment {name!r}")
    runner, defaults = REGISTRY[name]
    p = coerce(defaults, overrides or {})
    if l_max is not None and "l_max" in p:
        p["l_max"] = int(l_max)
    validate(name, p)
    t0 = time.perf_counter()
    try:
        res = runner(p)
    except CMCLabError as exc:
        raise type(exc)(f"[{name}] {exc}") from exc
    res.seconds = time.perf_counter() - t0
    return res


def rotation_defect(field_fn, f, seed=0):
    """Max deviation between ``F(rotate(f))`` and ``rotate(F(f))`` for a field map F."""
    R = random_rotation(np.random.default_rng(seed))
    lhs = field_fn(rotate_field(f, R))
    rhs = rotate_field(field_fn(f), R)
    return float(np.max(np.abs(lhs.values - rhs.values)))


def kruskal_roundtrip_defect(m=1.0, n=200, seed=0):
    rng = np.random.default_rng(seed)
    par = background.SchwarzschildParams(m)
    r = 2.0 * m * (1.0 + rng.uniform(1e-3, 50.0, n))
    t = rng.uniform(-30.0, 30.0, n) * m
    T, X = background.kruskal_map(par, t, r)
    t2, r2 = background.kruskal_inverse(par, T, X)
    return float(max(np.max(np.abs(r2 / r - 1.0)), np.max(np.abs(t2 - t) / np.maximum(1.0, np.abs(t)))))
