"""Experiment pipeline: quantize -> solve -> predict -> compare.

Runs are fully deterministic: a fixed config produces byte-identical
CSV/JSON artifacts.  Every report records the canonical config text,
its hash, and the library versions that produced it.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import __version__
from .action import ActionMap, Rectangle, predict_spectrum
from .circle_quantize import quantize_circle
from .compare import PairingSummary, pair_spectra, summarize_pairs
from .eig import eigenvalues_of
from .errors import ConfigError, PipelineError, SemispecError
from .fock_quantize import parity_matrix, quantize_plane
from .grammar import parse_circle, parse_plane
from .symbols import EpsilonPolicy, pt_symmetry_check, pullback_action_angle

INTERIOR_FRACTION = 0.8  # truncation corrupts edge eigenvalues

FIGURE_SYMBOLS = {
    "figure01": ("circle", "I + i*epsilon*(cos(theta) + I^2)", None),
    "figure02": ("circle", "I + i*epsilon*(cos(theta) + I^2)", 0.5),
    "figure03": ("circle", "I + i*epsilon*(cos(theta) + I^3)", None),
    "figure04": ("circle", "I + i*epsilon*(cos(theta) + I^3)", 0.5),
    "figure05": ("line", "x^2 + xi^2 + i*epsilon*x^2", None),
    "figure06": ("line", "x^2 + xi^2 + i*epsilon*x^2", 0.5),
    "figure07": ("line", "x^2 + xi^2 + i*epsilon*(x^2 + x^3)", None),
    "figure08": ("line", "x^2 + xi^2 + i*epsilon*x^4", None),
    "figure09": ("line", "x^2 + xi^2 + i*epsilon*x^4", 0.5),
}


@dataclass(frozen=True)
class ExperimentConfig:
    """Flat, seed-free description of one pipeline run (mirrors the CLI)."""

    model: str
    symbol: str
    N: int = 66
    hbar: float | None = None        # None -> 1/N
    epsilon: float | None = None     # fixed perturbation strength
    delta: float | None = None       # epsilon = hbar**delta
    rect: Rectangle | None = None
    window: tuple | None = None      # interior window on Re(lambda)
    out: str | None = None
    pairing: str = "greedy"
    maslov: bool = True
    floquet_offset: float = 0.0

    def __post_init__(self):
        if self.model not in ("circle", "line"):
            raise ConfigError(f"unknown model {self.model!r}")
        if self.N < 1:
            raise ConfigError("N must be >= 1")
        if self.epsilon is not None and self.delta is not None:
            raise ConfigError("give either epsilon or delta, not both")
        if self.pairing not in ("greedy", "optimal"):
            raise ConfigError(f"unknown pairing {self.pairing!r}")
        if self.window is not None:
            lo, hi = self.window
            if not lo < hi:
                raise ConfigError("window must be lo,hi with lo < hi")
            object.__setattr__(self, "window", (float(lo), float(hi)))

    def hbar_value(self):
        h = 1.0 / self.N if self.hbar is None else float(self.hbar)
        if h <= 0:
            raise ConfigError("hbar must be positive")
        return h

    def epsilon_policy(self):
        if self.epsilon is not None:
            return EpsilonPolicy(mode="fixed", value=float(self.epsilon))
        if self.delta is not None:
            return EpsilonPolicy(mode="hbar_power", delta=float(self.delta))
        return EpsilonPolicy(mode="fixed", value=0.0)

    def epsilon_value(self):
        return self.epsilon_policy().resolve(self.hbar_value())

    def trusted_window(self):
        h = self.hbar_value()
        if self.model == "circle":
            edge = INTERIOR_FRACTION * h * self.N
            return (-edge, edge)
        return (0.0, INTERIOR_FRACTION * h * (2 * self.N + 1))

    def window_value(self):
        trusted = self.trusted_window()
        if self.window is None:
            return trusted
        lo, hi = self.window
        if lo < trusted[0] - 1e-12 or hi > trusted[1] + 1e-12:
            raise ConfigError(
                f"window {self.window} exceeds the trusted interior range "
                f"{trusted}")
        return (lo, hi)

    def canonical_text(self):
        lines = [
            f"model = {self.model}",
            f"symbol = {self.symbol}",
            f"N = {self.N}",
            f"hbar = {self.hbar_value()!r}",
            f"epsilon = {self.epsilon_value()!r}",
            f"window = {self.window_value()[0]!r},{self.window_value()[1]!r}",
            f"pairing = {self.pairing}",
            f"maslov = {'on' if self.maslov else 'off'}",
            f"floquet-offset = {self.floquet_offset!r}",
        ]
        rect = self.rect
        if rect is not None:
            lines.insert(6, "rect = " + ",".join(repr(v) for v in rect.as_tuple()))
        else:
            lines.insert(6, "rect = auto")
        return "\n".join(lines) + "\n"

    def config_hash(self):
        return hashlib.sha256(self.canonical_text().encode()).hexdigest()


def _provenance(cfg):
    import scipy

    return {
        "config_sha256": cfg.config_hash(),
        "versions": {
            "semispec": __version__,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
        },
    }


def build_symbol(cfg: ExperimentConfig):
    eps = cfg.epsilon_value()
    if cfg.model == "circle":
        return parse_circle(cfg.symbol), eps
    return parse_plane(cfg.symbol, epsilon=eps), eps


def build_operator(cfg: ExperimentConfig):
    sym, eps = build_symbol(cfg)
    h = cfg.hbar_value()
    if cfg.model == "circle":
        return sym, quantize_circle(sym, eps, h, cfg.N)
    return sym, quantize_plane(sym, h, cfg.N)


def build_action_map(cfg: ExperimentConfig, sym=None):
    if sym is None:
        sym, _ = build_symbol(cfg)
    if cfg.model == "circle":
        return ActionMap(sym.cylinder_map(cfg.epsilon_value()))
    return ActionMap(pullback_action_angle(sym))


def default_rect(cfg: ExperimentConfig, am: ActionMap):
    """Window on Re from the interior window; Im bounds scaled from the
    averaged predictor over that window (plus padding)."""
    lo, hi = cfg.window_value()
    s_bounds = sorted((am.cyl.seed_action(lo), am.cyl.seed_action(hi)))
    s_lo, s_hi = s_bounds
    if getattr(am.cyl, "min_action", None) is not None:
        s_lo = max(s_lo, 1e-9)
    samples = np.linspace(s_lo, s_hi, 33)
    vals = am.averaged_value(samples.astype(complex))
    im_lo = float(vals.imag.min())
    im_hi = float(vals.imag.max())
    pad = max(0.05, 0.3 * (im_hi - im_lo))
    return Rectangle(lo, hi, im_lo - pad, im_hi + pad)


def prediction_rule(cfg: ExperimentConfig):
    if cfg.model == "line" and cfg.maslov:
        return "line_maslov"
    return "circle_k"


@dataclass(frozen=True)
class ComparisonReport:
    rule: str
    mode: str
    pairs: tuple
    summary: PairingSummary
    provenance: dict

    def to_json_dict(self):
        return {
            "rule": self.rule,
            "mode": self.mode,
            "pairs": [
                {"k": p.k,
                 "computed": [p.computed.real, p.computed.imag],
                 "predicted": [p.predicted.real, p.predicted.imag],
                 "distance": p.distance}
                for p in self.pairs
            ],
            "summary": self.summary.to_json_dict(),
        }


@dataclass(frozen=True)
class ExperimentResult:
    config: ExperimentConfig
    rect: Rectangle
    spectrum: object
    predictions: dict
    reports: dict  # mode -> ComparisonReport
    pt: dict | None

    @property
    def principal_report(self):
        return self.reports["principal_exact"]


def _stage(name):
    class _Ctx:
        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            if exc is not None and isinstance(exc, SemispecError) \
                    and not isinstance(exc, (PipelineError, ConfigError)):
                raise PipelineError(name, exc) from exc
            return False

    return _Ctx()


def run_experiment(cfg: ExperimentConfig, write=True):
    """Full pipeline for one config; writes artifact files when asked.

    Produces the spectrum CSV, prediction CSVs for both modes, the
    comparison report JSON and a plot script under cfg.out.
    """
    if cfg.N < 8:
        raise ConfigError("comparisons need N >= 8")
    with _stage("parse"):
        sym, eps = build_symbol(cfg)
        h = cfg.hbar_value()
        window = cfg.window_value()
    with _stage("quantize"):
        if cfg.model == "circle":
            op = quantize_circle(sym, eps, h, cfg.N)
        else:
            op = quantize_plane(sym, h, cfg.N)
    with _stage("spectrum"):
        spec = eigenvalues_of(op)
    with _stage("predict"):
        am = build_action_map(cfg, sym)
        rect = cfg.rect if cfg.rect is not None else default_rect(cfg, am)
        rule = prediction_rule(cfg)
        predictions = {
            mode: predict_spectrum(am, h, rule, mode, rect,
                                   floquet_offset=cfg.floquet_offset)
            for mode in ("averaged_first_order", "principal_exact")
        }
    with _stage("compare"):
        in_window = [z for z in spec.eigenvalues
                     if window[0] <= z.real <= window[1] and rect.contains(z)]
        prov = _provenance(cfg)
        reports = {}
        for mode, pred in predictions.items():
            pairs = pair_spectra(in_window, pred.points, method=cfg.pairing)
            summary = summarize_pairs(pairs, pred.points, in_window)
            reports[mode] = ComparisonReport(rule=rule, mode=mode,
                                             pairs=tuple(pairs),
                                             summary=summary,
                                             provenance=prov)
        pt = None
        if cfg.model == "line":
            dpar = parity_matrix(op.dimension)
            m = op.matrix
            defect = np.linalg.norm(dpar @ m.conj() @ dpar - m, ord="fro") \
                / max(np.linalg.norm(m, ord="fro"), np.finfo(float).tiny)
            pt = {"symbol_symmetric": pt_symmetry_check(sym),
                  "conjugation_defect": float(defect)}
    result = ExperimentResult(config=cfg, rect=rect, spectrum=spec,
                              predictions=predictions, reports=reports, pt=pt)
    if write and cfg.out is not None:
        with _stage("write"):
            write_result(result)
    return result


def result_report_dict(result: ExperimentResult):
    cfg = result.config
    return {
        "config": {
            "text": cfg.canonical_text(),
            "model": cfg.model,
            "symbol": cfg.symbol,
            "N": cfg.N,
            "hbar": cfg.hbar_value(),
            "epsilon": cfg.epsilon_value(),
            "window": list(cfg.window_value()),
            "rect": list(result.rect.as_tuple()),
            "pairing": cfg.pairing,
            "rule": prediction_rule(cfg),
            "floquet_offset": cfg.floquet_offset,
        },
        "provenance": _provenance(cfg),
        "pt": result.pt,
        "comparisons": {mode: rep.to_json_dict()
                        for mode, rep in result.reports.items()},
    }


PLOT_SCRIPT = """\
#!/usr/bin/env python3
\"\"\"Render computed vs predicted spectra from the CSV files next to this
script.  Requires matplotlib; writes spectra.png.\"\"\"
import csv
import pathlib

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = pathlib.Path(__file__).resolve().parent


def read_xy(name, xcol, ycol):
    xs, ys = [], []
    with open(here / name, newline="") as fh:
        for row in csv.DictReader(fh):
            xs.append(float(row[xcol]))
            ys.append(float(row[ycol]))
    return xs, ys


fig, ax = plt.subplots(figsize=(9, 5))
sx, sy = read_xy("spectrum.csv", "re", "im")
ax.plot(sx, sy, "+", color="tab:blue", label="computed spectrum", ms=9)
px, py = read_xy("predictions_principal_exact.csv", "re", "im")
ax.plot(px, py, "x", color="tab:red", label="predicted (principal exact)", ms=6)
ax_, ay = read_xy("predictions_averaged_first_order.csv", "re", "im")
ax.plot(ax_, ay, ".", color="tab:green", label="predicted (averaged)", ms=4)
ax.set_xlabel("Re")
ax.set_ylabel("Im")
ax.legend(loc="best")
ax.grid(True, alpha=0.3)
fig.tight_layout()
fig.savefig(here / "spectra.png", dpi=150)
print("wrote", here / "spectra.png")
"""


def write_result(result: ExperimentResult):
    out = Path(result.config.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_text(out / "config.txt", result.config.canonical_text())
    _write_text(out / "spectrum.csv", result.spectrum.to_csv())
    for mode, pred in result.predictions.items():
        _write_text(out / f"predictions_{mode}.csv", pred.to_csv())
    _write_text(out / "report.json",
                json.dumps(result_report_dict(result), sort_keys=True,
                           indent=2) + "\n")
    _write_text(out / "plot.py", PLOT_SCRIPT)
    return out


def _write_text(path, text):
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


@dataclass(frozen=True)
class PTReport:
    symbol_symmetric: bool
    conjugation_defect: float
    max_abs_imag_in_window: float
    count_in_window: int

    def to_json_dict(self):
        return {
            "symbol_symmetric": self.symbol_symmetric,
            "conjugation_defect": self.conjugation_defect,
            "max_abs_imag_in_window": self.max_abs_imag_in_window,
            "count_in_window": self.count_in_window,
        }


def pt_verify(cfg: ExperimentConfig, write=True):
    """Three-level PT check: symbol predicate, matrix conjugation symmetry
    D conj(M) D == M with D = diag((-1)^alpha), and the imaginary parts
    of the interior eigenvalues."""
    if cfg.model != "line":
        raise ConfigError("pt-verify applies to the line model")
    sym, _ = build_symbol(cfg)
    flag = pt_symmetry_check(sym)
    _, op = build_operator(cfg)
    dpar = parity_matrix(op.dimension)
    m = op.matrix
    defect = np.linalg.norm(dpar @ m.conj() @ dpar - m, ord="fro") \
        / max(np.linalg.norm(m, ord="fro"), np.finfo(float).tiny)
    spec = eigenvalues_of(op)
    lo, hi = cfg.window_value()
    inside = [z for z in spec.eigenvalues if lo <= z.real <= hi]
    max_imag = max((abs(z.imag) for z in inside), default=0.0)
    report = PTReport(symbol_symmetric=bool(flag),
                      conjugation_defect=float(defect),
                      max_abs_imag_in_window=float(max_imag),
                      count_in_window=len(inside))
    if write and cfg.out is not None:
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        payload = {"config": {"text": cfg.canonical_text()},
                   "provenance": _provenance(cfg),
                   "pt": report.to_json_dict()}
        _write_text(out / "pt_report.json",
                    json.dumps(payload, sort_keys=True, indent=2) + "\n")
    return report


def reproduce_figures(out_root, N=66, delta=0.5):
    """Run the nine standard configurations (five distinct symbols, four of
    them shown twice at a zoomed window) and write one bundle per figure."""
    out_root = Path(out_root)
    results = {}
    for name, (model, symbol, zoom) in FIGURE_SYMBOLS.items():
        cfg = ExperimentConfig(model=model, symbol=symbol, N=N, delta=delta,
                               out=str(out_root / name))
        if zoom is not None:
            lo, hi = cfg.trusted_window()
            if model == "circle":
                window = (lo * zoom, hi * zoom)
            else:
                window = (lo, hi * zoom)
            cfg = replace(cfg, window=window)
        results[name] = run_experiment(cfg)
    return results
