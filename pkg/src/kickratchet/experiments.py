"""Turn-key figure scenarios and custom sweeps.

Each ``run_*`` writes CSV data, an SVG drawn from that CSV, and a
``manifest.json`` listing every file with its SHA-256.  CSV output is a
deterministic function of the seed.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
import os
import platform
import tempfile
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from . import analytic
from .classical import evolve_ensemble, sample_initial
from .quantum import QuantumRunSpec, run_quantum
from .rng import DEFAULT_SEED
from .stats import (
    fit_exponential_tails,
    fit_sinusoid,
    fit_sinusoid_period,
    saturation_onset,
)
from .svg import Series, plot_csv
from .units import DimensionlessParams

__all__ = [
    "ENGINES",
    "FIGURE_IDS",
    "Scenario",
    "ExperimentResult",
    "RunManifest",
    "classical_rho_scan",
    "run_fig2",
    "run_fig3",
    "run_fig4",
    "run_fig5",
    "run_custom",
    "run_scenario",
    "load_scenario",
]

ENGINES = ("classical", "quantum", "analytic")
FIGURE_IDS = ("fig2", "fig3", "fig4", "fig5", "custom")
GRID_KEYS = ("K", "b", "A", "rho_L", "sigma_p", "hbar", "kicks")


# ----------------------------------------------------------------- plumbing

def _sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for r in rows:
            fh.write(",".join(_cell(v) for v in r) + "\n")
    return path


def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, str):
        return v
    return repr(float(v))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        return f if math.isfinite(f) else str(f)
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def _atomic_write_json(path, payload):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".manifest-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(_jsonable(payload), fh, indent=2, sort_keys=True)
            fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


@dataclass
class RunManifest:
    """Provenance record written last, next to the data it describes."""

    scenario: str
    parameters: dict
    seeds: dict
    engines: dict = field(default_factory=lambda: {
        "kickratchet": __version__, "numpy": np.__version__,
        "scipy": scipy.__version__, "python": platform.python_version()})
    wall_clock_s: float = 0.0
    files: dict = field(default_factory=dict)
    complete: bool = True
    errors: list = field(default_factory=list)
    results: dict = field(default_factory=dict)

    def add_file(self, path, out_dir):
        rel = os.path.relpath(path, out_dir)
        self.files[rel] = _sha256(path)

    def write(self, out_dir) -> Path:
        path = Path(out_dir) / "manifest.json"
        _atomic_write_json(path, asdict(self))
        return path


@dataclass
class ExperimentResult:
    """Paths written by a scenario plus the headline numbers."""

    scenario: str
    out_dir: Path
    files: dict
    summary: dict
    manifest_path: Path | None = None


def _finish(manifest: RunManifest, out_dir, files, summary, t0):
    for p in files.values():
        manifest.add_file(p, out_dir)
    manifest.results = summary
    manifest.wall_clock_s = time.perf_counter() - t0
    mpath = manifest.write(out_dir)
    return ExperimentResult(manifest.scenario, Path(out_dir), files, summary, mpath)


def _out(out_dir, name):
    d = Path(out_dir if out_dir is not None else name)
    d.mkdir(parents=True, exist_ok=True)
    return d


# ---------------------------------------------------------------- helpers

def classical_rho_scan(params: DimensionlessParams, rho_Ls, n_per_point: int,
                       n_kicks: int = 120, sigma_p: float = 0.0,
                       seed: int = DEFAULT_SEED, parity: str = "even-long",
                       workers: int = 1):
    """Saturated classical current at each ``rho_L``.

    Point ``i`` uses random stream ``i``.  Returns ``(mean_shift, sem)``
    arrays evaluated after ``n_kicks``.
    """
    means, sems = [], []
    for i, rl in enumerate(rho_Ls):
        ens = sample_initial(n_per_point, float(rl), sigma_p, params, seed=seed,
                             stream=i, parity=parity)
        st = evolve_ensemble(ens, n_kicks, workers=workers)
        means.append(st.mean_shift[-1])
        sems.append(st.sem[-1])
    return np.array(means), np.array(sems)


def _wrap_phi(phi):
    """Map the plot phase into [-1, 1)."""
    return (np.asarray(phi) + 1.0) % 2.0 - 1.0


def _fit_summary(fit, **extra):
    d = {"amplitude": fit.amplitude, "amplitude_err": fit.amplitude_err,
         "phase": fit.phase, "period": fit.period, "rms_residual": fit.rms_residual}
    d.update(extra)
    return d


# ------------------------------------------------------------------ fig 2

FIG2_DEFAULTS = dict(K=2.6, b=1.0 / 16, hbar=1.0, sigma_p=1.0, n_kicks=120,
                     rho_L=(0.0, 8.0 * math.pi), n_A=13, A_max=0.75 * math.pi,
                     n_samples=2000, parity="even-long")


def run_fig2(seed: int = DEFAULT_SEED, out_dir=None, **overrides) -> ExperimentResult:
    """Final ratchet current against the plot phase ``(2 rho_L b - A)/pi``.

    A is swept over ``[-A_max, A_max]`` for each ``rho_L`` series; the quantum
    engine gives ``<rho>`` after ``n_kicks`` and the analytic curve the
    closed form.  The headline sinusoid (period 2 in the plot phase) is fitted
    to the ``rho_L = 0`` series, the rest-frame ratchet; per-series and
    pooled fits are reported alongside.
    """
    cfg = {**FIG2_DEFAULTS, **overrides}
    t0 = time.perf_counter()
    out = _out(out_dir, "fig2")
    A_values = np.linspace(-cfg["A_max"], cfg["A_max"], cfg["n_A"])
    rows = []
    stream = 0
    for series, rl in enumerate(cfg["rho_L"]):
        for A in A_values:
            p = DimensionlessParams(cfg["K"], cfg["b"], float(A), cfg["hbar"])
            res = run_quantum(QuantumRunSpec(
                p, rho_L=float(rl), sigma_p=cfg["sigma_p"],
                n_samples=cfg["n_samples"], n_kicks=cfg["n_kicks"], seed=seed,
                stream=stream, parity=cfg["parity"]))
            stream += 1
            st = res.stats
            phi = float(_wrap_phi(analytic.plot_phase(p, rl)))
            exact = float(_wrap_phi(-analytic.phase(p, rl) / math.pi))
            ana = float(analytic.current(p, rl, cfg["n_kicks"], cfg["sigma_p"]))
            rows.append([series, float(rl), float(A), phi, exact,
                         float(st.mean_shift[-1]), float(st.sem[-1]), ana])
    rows.sort(key=lambda r: (r[0], r[3]))
    arr = np.array(rows, dtype=float)

    def fit(mask):
        # unweighted: the antithetic A = 0, rho_L = 0 point has a zero SEM
        return fit_sinusoid(np.pi * arr[mask, 3], arr[mask, 5], 2 * np.pi)

    rest = arr[:, 0] == 0
    f_rest = fit(rest)
    f_all = fit(np.ones(len(arr), bool))
    fits = {"rest_frame": f_rest, "pooled": f_all}
    for s in range(1, len(cfg["rho_L"])):
        fits[f"series_{s}"] = fit(arr[:, 0] == s)
    for r in rows:
        r.append(float(f_rest(np.pi * r[3])))

    header = ["series", "rho_L", "A", "Phi", "phase_exact", "quantum_mean",
              "quantum_sem", "analytic", "fit_rest_frame"]
    csv_path = _write_csv(out / "fig2.csv", header, rows)
    svg_series = []
    for s, rl in enumerate(cfg["rho_L"]):
        svg_series.append(Series("Phi", "quantum_mean", f"quantum, rho_L={rl:.4g}",
                                 "markers", where=("series", s)))
    svg_series.append(Series("Phi", "fit_rest_frame", "sinusoid fit (rho_L=0)",
                             "line", where=("series", 0)))
    svg_series.append(Series("Phi", "analytic", "closed form", "line",
                             where=("series", 0)))
    svg_path = plot_csv(csv_path, out / "fig2.svg", svg_series,
                        title=f"Final <rho> after {cfg['n_kicks']} kicks",
                        xlabel="Phi = (2 rho_L b - A)/pi", ylabel="<rho - rho_L>")

    at_half = [r for r in rows if r[0] == 0 and abs(r[3] - 0.5) < 1e-9]
    p0 = DimensionlessParams(cfg["K"], cfg["b"], 0.0, cfg["hbar"])
    summary = {
        "fits": {k: _fit_summary(v) for k, v in fits.items()},
        "amplitude": f_rest.amplitude,
        "value_at_phi_half": at_half[0][5] if at_half else None,
        "sem_at_phi_half": at_half[0][6] if at_half else None,
        "analytic_I0": analytic.max_current(p0),
    }
    manifest = RunManifest("fig2", {k: v for k, v in cfg.items()},
                           {"seed": seed, "streams": stream})
    return _finish(manifest, out, {"csv": csv_path, "svg": svg_path}, summary, t0)


# ------------------------------------------------------------------ fig 3

FIG3_DEFAULTS = dict(K=3.3, bs=(1.0 / 32, 1.0 / 16), hbar=1.0, A=0.0,
                     sigma_p=1.0, n_kicks=120, periods=1.5, n_points=128,
                     n_trajectories=16384, n_samples=400,
                     engines=("classical", "analytic"), parity="even-long")


def run_fig3(seed: int = DEFAULT_SEED, out_dir=None, **overrides) -> ExperimentResult:
    """Current against starting momentum for two values of b at A = 0.

    For each b, ``rho_L`` runs over ``periods`` oscillations of period
    ``pi/b`` and the simulated current is fitted with a sinusoid whose
    period is free.
    """
    cfg = {**FIG3_DEFAULTS, **overrides}
    engines = tuple(cfg["engines"])
    t0 = time.perf_counter()
    out = _out(out_dir, "fig3")
    rows = []
    summary = {"per_b": {}}
    for ib, b in enumerate(cfg["bs"]):
        p = DimensionlessParams(cfg["K"], b, cfg["A"], cfg["hbar"])
        P = math.pi / b
        rho = np.linspace(0.0, cfg["periods"] * P, cfg["n_points"])
        cols = {"analytic": np.asarray(analytic.current(p, rho, cfg["n_kicks"],
                                                        cfg["sigma_p"]))}
        if "classical" in engines:
            m, s = classical_rho_scan(p, rho, cfg["n_trajectories"], cfg["n_kicks"],
                                      cfg["sigma_p"], seed=seed + ib,
                                      parity=cfg["parity"])
            cols["classical"], cols["classical_sem"] = m, s
        if "quantum" in engines:
            qm, qs = [], []
            for i, rl in enumerate(rho):
                r = run_quantum(QuantumRunSpec(
                    p, rho_L=float(rl), sigma_p=cfg["sigma_p"],
                    n_samples=cfg["n_samples"], n_kicks=cfg["n_kicks"],
                    seed=seed + ib, stream=i, parity=cfg["parity"]))
                qm.append(r.stats.mean_shift[-1])
                qs.append(r.stats.sem[-1])
            cols["quantum"], cols["quantum_sem"] = np.array(qm), np.array(qs)
        info = {"period_expected": P,
                "analytic_amplitude": abs(analytic.max_current(p))
                * analytic.width_damping(cfg["sigma_p"], b)}
        for eng in ("classical", "quantum"):
            if eng in cols:
                f = fit_sinusoid_period(rho, cols[eng], P, rel_range=0.3)
                cols[f"{eng}_fit"] = f(rho)
                info[eng] = _fit_summary(f, period_rel_error=f.period / P - 1.0)
        summary["per_b"][repr(b)] = info
        names = [k for k in ("classical", "classical_sem", "classical_fit",
                             "quantum", "quantum_sem", "quantum_fit", "analytic")
                 if k in cols]
        for i in range(len(rho)):
            rows.append([ib, b, float(rho[i])] + [float(cols[k][i]) for k in names])
    header = ["series", "b", "rho_L"] + names
    csv_path = _write_csv(out / "fig3.csv", header, rows)

    b_small, b_large = cfg["bs"]
    for eng in ("classical", "quantum"):
        if eng in summary["per_b"][repr(b_small)]:
            summary[f"{eng}_amplitude_ratio"] = (
                summary["per_b"][repr(b_small)][eng]["amplitude"]
                / summary["per_b"][repr(b_large)][eng]["amplitude"])
    summary["analytic_amplitude_ratio"] = (
        summary["per_b"][repr(b_small)]["analytic_amplitude"]
        / summary["per_b"][repr(b_large)]["analytic_amplitude"])

    svg_series = []
    for ib, b in enumerate(cfg["bs"]):
        for eng in ("classical", "quantum"):
            if eng in engines:
                svg_series.append(Series("rho_L", eng, f"{eng}, b=1/{round(1 / b)}",
                                         "markers", where=("series", ib)))
                svg_series.append(Series("rho_L", f"{eng}_fit", "", "line",
                                         where=("series", ib)))
    svg_path = plot_csv(csv_path, out / "fig3.svg", svg_series,
                        title=f"K={cfg['K']}, A=0, {cfg['n_kicks']} kicks",
                        xlabel="rho_L", ylabel="<rho - rho_L>")
    manifest = RunManifest("fig3", dict(cfg, engines=list(engines)),
                           {"seed": seed, "per_b_seed": [seed + i for i in
                                                         range(len(cfg["bs"]))]})
    return _finish(manifest, out, {"csv": csv_path, "svg": svg_path}, summary, t0)


# ------------------------------------------------------------- fig 4 / 5

FIG4_DEFAULTS = dict(K=2.1, b=1.0 / 8, hbar=0.25, Phi=0.5, rho_L=0.0,
                     sigma_p=1.0, n_kicks=120, n_trajectories=1_000_000,
                     n_samples=1000, parity="even-long")
# alternative hbar for this regime; runs via the hbar override and is
# listed in the manifest
FIG4_ALT_HBAR = 1.4


def _fig4_params(cfg):
    # Phi = (2 rho_L b - A)/pi fixed through A at the chosen rho_L
    A = 2.0 * cfg["rho_L"] * cfg["b"] - math.pi * cfg["Phi"]
    return DimensionlessParams(cfg["K"], cfg["b"], A, cfg["hbar"])


def _fig4_quantum(cfg, seed):
    p = _fig4_params(cfg)
    return run_quantum(QuantumRunSpec(
        p, rho_L=cfg["rho_L"], sigma_p=cfg["sigma_p"], n_samples=cfg["n_samples"],
        n_kicks=cfg["n_kicks"], seed=seed, stream=1, parity=cfg["parity"]))


def run_fig4(seed: int = DEFAULT_SEED, out_dir=None, quantum_result=None,
             **overrides) -> ExperimentResult:
    """Time dependence of the current: classical, quantum and closed form."""
    cfg = {**FIG4_DEFAULTS, **overrides}
    t0 = time.perf_counter()
    out = _out(out_dir, "fig4")
    p = _fig4_params(cfg)
    T = cfg["n_kicks"]
    kicks = np.arange(1, T + 1)
    ens = sample_initial(cfg["n_trajectories"], cfg["rho_L"], cfg["sigma_p"], p,
                         seed=seed, stream=0, parity=cfg["parity"])
    cl = evolve_ensemble(ens, T)
    qr = quantum_result if quantum_result is not None else _fig4_quantum(cfg, seed)
    qs = qr.stats
    ana = analytic.current(p, cfg["rho_L"], kicks, cfg["sigma_p"])
    ana_plain = analytic.current(p, cfg["rho_L"], kicks)
    rows = [[int(k), float(ana_plain[i]), float(ana[i]), float(cl.mean_shift[i]),
             float(cl.sem[i]), float(qs.mean_shift[i]), float(qs.sem[i])]
            for i, k in enumerate(kicks)]
    header = ["kick", "analytic", "analytic_damped", "classical", "classical_sem",
              "quantum", "quantum_sem"]
    csv_path = _write_csv(out / "fig4.csv", header, rows)
    svg_path = plot_csv(csv_path, out / "fig4.svg", [
        Series("kick", "classical", "classical ensemble", "line"),
        Series("kick", "quantum", "quantum", "line"),
        Series("kick", "analytic", "closed form", "line"),
    ], title=f"K={cfg['K']}, b={cfg['b']}, hbar={cfg['hbar']}, Phi={cfg['Phi']}",
        xlabel="kicks", ylabel="<rho - rho_L>")

    ts = analytic.ratchet_time(p)
    summary = {
        "ratchet_time": ts,
        "onset_classical": saturation_onset(kicks, cl.mean_shift),
        "onset_quantum": saturation_onset(kicks, qs.mean_shift),
        "onset_analytic": saturation_onset(kicks, ana_plain),
        "final_classical": float(cl.mean_shift[-1]),
        "final_quantum": float(qs.mean_shift[-1]),
        "analytic_saturation": float(ana_plain[-1]),
        "A": p.A,
    }
    manifest = RunManifest("fig4", dict(cfg, A=p.A, alternative_hbar=FIG4_ALT_HBAR),
                           {"seed": seed, "classical_stream": 0, "quantum_stream": 1},
                           results={})
    manifest.results["quantum_grid"] = qr.manifest.get("grid")
    manifest.results["quantum_grid_events"] = qr.manifest.get("grid_events")
    res = _finish(manifest, out, {"csv": csv_path, "svg": svg_path}, summary, t0)
    res.summary["_classical_stats"] = cl
    res.summary["_quantum_result"] = qr
    return res


def run_fig5(seed: int = DEFAULT_SEED, out_dir=None, quantum_result=None,
             **overrides) -> ExperimentResult:
    """Final quantum momentum distribution of the fig4 quantum run.

    Reports mean, variance and straight-line fits of ``log N`` on each side
    beyond one localisation length (taken as the final rms width).
    """
    cfg = {**FIG4_DEFAULTS, **overrides}
    t0 = time.perf_counter()
    out = _out(out_dir, "fig5")
    qr = quantum_result if quantum_result is not None else _fig4_quantum(cfg, seed)
    st = qr.stats
    centers = st.hist_centers
    counts = st.hist_counts
    mass = float(counts.sum())
    dist_mean = st.final_mean
    variance = float(st.variance[-1])
    width = math.sqrt(variance)
    left, right = fit_exponential_tails(centers, counts, dist_mean, width)
    rows = [[float(lo), float(hi), float(c), float(n), float(n / mass)]
            for lo, hi, c, n in zip(st.hist_edges[:-1], st.hist_edges[1:],
                                    centers, counts)]
    header = ["rho_lo", "rho_hi", "rho_center", "count", "probability"]
    csv_path = _write_csv(out / "fig5.csv", header, rows)
    svg_path = plot_csv(csv_path, out / "fig5.svg", [
        Series("rho_center", "probability", "quantum N(rho)", "line", log_y=True)],
        title=f"N(rho) after {cfg['n_kicks']} kicks", xlabel="rho",
        ylabel="N(rho)")
    summary = {
        "mass": mass,
        "n_samples": st.n_samples,
        "mean": dist_mean,
        "mean_shift": float(st.mean_shift[-1]),
        "rocking_offset": float(st.rocking_offset[-1]),
        "variance": variance,
        "localization_width": width,
        "tail_left": asdict(left),
        "tail_right": asdict(right),
    }
    manifest = RunManifest("fig5", dict(cfg, alternative_hbar=FIG4_ALT_HBAR),
                           {"seed": seed, "quantum_stream": 1})
    return _finish(manifest, out, {"csv": csv_path, "svg": svg_path}, summary, t0)


# ----------------------------------------------------------------- custom

@dataclass
class Scenario:
    """A sweep description, usually loaded from JSON.

    ``grid`` maps any of ``K, b, A, rho_L, sigma_p, hbar, kicks`` to a list of
    values; the Cartesian product is run on each engine in ``engines``.
    ``options`` carries engine knobs (``n_trajectories``, ``n_samples``,
    ``parity``, ``m_max``, ``n_phi``, ``workers``) and, for the figure ids,
    overrides of the figure defaults.
    """

    id: str = "custom"
    engines: tuple = ("analytic",)
    grid: dict = field(default_factory=dict)
    out_dir: str | None = None
    seed: int = DEFAULT_SEED
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.id not in FIGURE_IDS:
            raise ValueError(f"scenario id must be one of {FIGURE_IDS}")
        self.engines = tuple(self.engines)
        bad = [e for e in self.engines if e not in ENGINES]
        if bad or not self.engines:
            raise ValueError(f"engines must be a non-empty subset of {ENGINES}")
        unknown = set(self.grid) - set(GRID_KEYS)
        if unknown:
            raise ValueError(f"unknown grid keys {sorted(unknown)}")
        for k, v in self.grid.items():
            if not isinstance(v, (list, tuple)) or len(v) == 0:
                raise ValueError(f"grid entry {k!r} must be a non-empty list")

    def points(self):
        full = {"K": [2.6], "b": [1.0 / 16], "A": [0.0], "rho_L": [0.0],
                "sigma_p": [1.0], "hbar": [1.0], "kicks": [120]}
        full.update({k: list(v) for k, v in self.grid.items()})
        keys = list(GRID_KEYS)
        for combo in itertools.product(*(full[k] for k in keys)):
            yield dict(zip(keys, combo))


def load_scenario(path) -> Scenario:
    with open(path) as fh:
        data = json.load(fh)
    return Scenario(**data)


def run_custom(scenario: Scenario) -> ExperimentResult:
    """Cartesian sweep over ``scenario.grid`` on the requested engines.

    A failing point is recorded in the manifest (which is then marked
    incomplete) and the sweep carries on; completed outputs are kept.
    """
    t0 = time.perf_counter()
    out = _out(scenario.out_dir, "custom")
    opts = scenario.options
    files = {}
    index_rows = []
    manifest = RunManifest("custom", {"grid": scenario.grid, "options": opts,
                                      "engines": list(scenario.engines)},
                           {"seed": scenario.seed, "streams": {}})
    for i, pt in enumerate(scenario.points()):
        tag = f"p{i:04d}"
        try:
            params = DimensionlessParams(pt["K"], pt["b"], pt["A"], pt["hbar"])
            T = int(pt["kicks"])
            if T < 1:
                raise ValueError("kicks must be >= 1")
            for eng in scenario.engines:
                name = f"{tag}_{eng}"
                if eng == "analytic":
                    t = np.arange(1, T + 1)
                    F = analytic.time_factor(params, t)
                    I = analytic.current(params, pt["rho_L"], t, pt["sigma_p"])
                    path = _write_csv(out / f"{name}.csv", ["t", "F", "I"],
                                      [[int(a), float(b_), float(c)]
                                       for a, b_, c in zip(t, F, I)])
                    files[name] = path
                    continue
                if eng == "classical":
                    ens = sample_initial(int(opts.get("n_trajectories", 100_000)),
                                         pt["rho_L"], pt["sigma_p"], params,
                                         seed=scenario.seed, stream=i,
                                         parity=opts.get("parity", "even-long"))
                    st = evolve_ensemble(ens, T, workers=int(opts.get("workers", 1)))
                else:
                    res = run_quantum(QuantumRunSpec(
                        params, rho_L=pt["rho_L"], sigma_p=pt["sigma_p"],
                        n_samples=int(opts.get("n_samples", 200)), n_kicks=T,
                        m_max=opts.get("m_max"), n_phi=opts.get("n_phi"),
                        seed=scenario.seed, stream=i,
                        parity=opts.get("parity", "even-long"),
                        workers=int(opts.get("workers", 1))))
                    st = res.stats
                    manifest.results.setdefault("grid_events", {})[name] = \
                        res.manifest["grid_events"]
                st.write_csv(out / f"{name}_stats.csv")
                st.write_histogram_csv(out / f"{name}_hist.csv")
                files[f"{name}_stats"] = out / f"{name}_stats.csv"
                files[f"{name}_hist"] = out / f"{name}_hist.csv"
            manifest.seeds["streams"][tag] = i
            index_rows.append([tag] + [pt[k] for k in GRID_KEYS] + ["ok"])
        except Exception as exc:  # keep going, record the failure
            manifest.complete = False
            manifest.errors.append({"point": tag, "params": pt,
                                    "error": f"{type(exc).__name__}: {exc}"})
            index_rows.append([tag] + [pt[k] for k in GRID_KEYS] + ["failed"])
    files["index"] = _write_csv(out / "index.csv",
                                ["point"] + list(GRID_KEYS) + ["status"], index_rows)
    summary = {"n_points": len(index_rows),
               "n_failed": sum(r[-1] == "failed" for r in index_rows)}
    return _finish(manifest, out, files, summary, t0)


def run_scenario(scenario: Scenario) -> ExperimentResult:
    """Dispatch on ``scenario.id``; figure ids take ``options`` as overrides."""
    runners = {"fig2": run_fig2, "fig3": run_fig3, "fig4": run_fig4,
               "fig5": run_fig5}
    if scenario.id == "custom":
        return run_custom(scenario)
    return runners[scenario.id](seed=scenario.seed, out_dir=scenario.out_dir,
                                **scenario.options)
