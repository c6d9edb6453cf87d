"""Test-function catalog, degree sweeps comparing P_n, T_n and B_n, and result files."""

import csv
import json
import math
import os
import warnings
import xml.etree.ElementTree as ET
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .bestapprox import remez_best
from .errors import ConvergenceError, DomainError, OutputError
from .projections import (
    Analytic,
    Cm,
    FractionalEndpoint,
    FractionalInterior,
    FunctionSpec,
    assessment_grid,
    chebyshev_coeffs,
    legendre_coeffs,
    locate_max_error,
    max_error,
    pointwise_error,
)
from .rates import rate_fit

MAX_SWEEP_DEGREE = 200
FIGURE_TAGS = ("Fig1", "Fig2", "Fig3", "Fig4", "Fig5")


# --- catalog ----------------------------------------------------------------------


@dataclass(frozen=True)
class FunctionCatalogEntry:
    """A benchmark function with the behaviour it is expected to show.

    ``expected_ratio_window`` maps a ratio name ("P" or "T") to the (lo, hi) interval
    its values should fall in over ``ratio_degrees``; ``provenance`` says where the
    expectations come from.
    """

    key: str
    spec: FunctionSpec
    figure_tag: str
    expected_rate: float | None = None
    expected_ratio_window: dict = field(default_factory=dict)
    ratio_degrees: tuple | None = None
    provenance: str = ""

    def __post_init__(self):
        if self.figure_tag not in FIGURE_TAGS:
            raise DomainError(f"unknown figure tag {self.figure_tag!r}")

    @property
    def label(self):
        return self.spec.label


def _exp_inv_sq(x):
    with np.errstate(divide="ignore", over="ignore"):
        return np.exp(-1.0 / (x * x))


def _entries():
    fig1_window = {"T": (0.55, 0.75)}
    fig4_window = {"P": (0.40, 0.55), "T": (0.40, 0.55)}
    fig5_window = {"P": (0.13, 0.33), "T": (0.40, 0.53)}
    pi5 = math.pi / 5.0
    return [
        FunctionCatalogEntry(
            "exp_x5", FunctionSpec(lambda x: np.exp(x**5), (), Analytic(math.inf), "exp(x^5)"),
            "Fig1", None, fig1_window, (15, 30), "entire; Chebyshev ratio observed in 0.6-0.7",
        ),
        FunctionCatalogEntry(
            "ln", FunctionSpec(lambda x: np.log(1.2 + x), (), Analytic(1.2 + math.sqrt(0.44)), "ln(1.2+x)"),
            "Fig1", None, fig1_window, (15, 30), "branch point at -1.2",
        ),
        FunctionCatalogEntry(
            "runge", FunctionSpec(lambda x: 1.0 / (1.0 + 4.0 * x * x), (), Analytic(0.5 * (1 + math.sqrt(5))), "1/(1+4x^2)"),
            "Fig1", None, fig1_window, (15, 30), "poles at +-i/2",
        ),
        FunctionCatalogEntry(
            "exp_inv_sq", FunctionSpec(_exp_inv_sq, (0.0,), Cm(math.inf), "exp(-1/x^2)"),
            "Fig2", None, {}, None, "infinitely differentiable, not analytic at 0",
        ),
        FunctionCatalogEntry(
            "pospart3", FunctionSpec(lambda x: np.maximum(x - 0.5, 0.0) ** 3, (0.5,), Cm(3), "(x-1/2)_+^3"),
            "Fig2", -3.0, {}, None, "third derivative has bounded variation: O(n^-3)",
        ),
        FunctionCatalogEntry(
            "abs_sin5x", FunctionSpec(lambda x: np.abs(np.sin(5.0 * x)), (-pi5, 0.0, pi5), Cm(1), "|sin 5x|"),
            "Fig2", -1.0, {}, None, "first derivative has bounded variation: O(n^-1)",
        ),
        FunctionCatalogEntry(
            "pospart", FunctionSpec(lambda x: np.maximum(x - 0.5, 0.0), (0.5,), Cm(1), "(x-1/2)_+"),
            "Fig3", -1.0, {}, None, "pointwise error peaks at the kink",
        ),
        FunctionCatalogEntry(
            "interior_5_2", FunctionSpec(lambda x: np.abs(x - 0.5) ** 2.5, (0.5,), FractionalInterior(2.5, 0.5), "|x-1/2|^(5/2)"),
            "Fig4", -2.5, fig4_window, (60, 100), "interior singularity: O(n^-alpha)",
        ),
        FunctionCatalogEntry(
            "interior_5_4", FunctionSpec(lambda x: np.abs(x - 0.8) ** 1.25, (0.8,), FractionalInterior(1.25, 0.8), "|x-4/5|^(5/4)"),
            "Fig4", -1.25, fig4_window, (60, 100), "interior singularity: O(n^-alpha)",
        ),
        FunctionCatalogEntry(
            "interior_2_3", FunctionSpec(lambda x: np.abs(x) ** (2.0 / 3.0), (0.0,), FractionalInterior(2.0 / 3.0, 0.0), "|x|^(2/3)"),
            "Fig4", -2.0 / 3.0, fig4_window, (60, 100), "interior singularity: O(n^-alpha)",
        ),
        FunctionCatalogEntry(
            "endpoint_5_2", FunctionSpec(lambda x: np.maximum(1.0 + x, 0.0) ** 2.5, (), FractionalEndpoint(2.5, "plus"), "(1+x)^(5/2)"),
            "Fig5", -5.0, fig5_window, (60, 100), "endpoint singularity: O(n^-2 alpha)",
        ),
        FunctionCatalogEntry(
            "cap_3_2", FunctionSpec(lambda x: np.maximum(1.0 - x * x, 0.0) ** 1.5, (), FractionalEndpoint(1.5, "both"), "(1-x^2)^(3/2)"),
            "Fig5", -3.0, fig5_window, (60, 100), "endpoint singularities: O(n^-2 alpha)",
        ),
        FunctionCatalogEntry(
            "arccos", FunctionSpec(lambda x: np.arccos(np.clip(x, -1.0, 1.0)), (), FractionalEndpoint(0.5, "both"), "arccos(x)"),
            "Fig5", -1.0, fig5_window, (60, 100), "square-root endpoint singularities: O(n^-2 alpha)",
        ),
    ]


_CATALOG = _entries()


def catalog():
    """The benchmark functions, in figure order."""
    return list(_CATALOG)


def get_entry(name):
    """Catalog entry by key (e.g. ``abs_sin5x``) or by label (e.g. ``|sin 5x|``)."""
    for e in _CATALOG:
        if name in (e.key, e.label):
            return e
    raise DomainError(f"no catalog entry named {name!r}")


# --- sweeps -----------------------------------------------------------------------


@dataclass
class RateReport:
    function_label: str
    degrees: list
    err_P: list
    err_T: list
    err_B: list
    ratio_P: list
    ratio_T: list
    scaled_ratio_P: list
    slope_P: tuple
    slope_T: tuple
    slope_B: tuple
    remez_status: list = field(default_factory=list)
    flagged: list = field(default_factory=list)
    smoothness: str = ""

    def to_dict(self):
        d = asdict(self)
        return {k: _json_safe(v) for k, v in d.items()}

    @classmethod
    def from_dict(cls, d):
        out = {}
        for f in fields(cls):
            v = d[f.name] if f.name in d else f.default_factory() if callable(f.default_factory) else f.default
            if f.name.startswith("slope_"):
                v = tuple(_from_json(x) for x in v)
            elif isinstance(v, list) and f.name not in ("remez_status",):
                v = [_from_json(x) for x in v]
            out[f.name] = v
        return cls(**out)


def _json_safe(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, (list, tuple)):
        return [_json_safe(x) for x in v]
    return v


def _from_json(v):
    return math.nan if v is None else v


def _as_entry(entry):
    if isinstance(entry, FunctionCatalogEntry):
        return entry
    if isinstance(entry, FunctionSpec):
        return FunctionCatalogEntry(entry.label or "custom", entry, "Fig1")
    return get_entry(entry)


def _slope(degrees, errors, window):
    d = np.asarray(degrees, dtype=float)
    e = np.asarray(errors, dtype=float)
    keep = (d >= window[0]) & (d <= window[1]) & (d > 0) & np.isfinite(e) & (e > 0)
    try:
        return rate_fit(d[keep], e[keep])
    except DomainError:
        return (math.nan, math.nan)


def _degree_errors(f, n, leg, cheb, grid):
    err_p = max_error(f, leg.truncate(n), grid)
    err_t = max_error(f, cheb.truncate(n), grid)
    try:
        best = remez_best(f, n, grid)
    except ConvergenceError:
        return err_p, err_t, math.nan, "failed"
    return err_p, err_t, max_error(f, best.poly, grid), best.status


def sweep(entry, n_min, n_max, stride=1, window=None, workers=None):
    """Max errors of P_n, T_n and B_n for n = n_min, n_min + stride, ..., n_max.

    Errors are measured on the entry's assessment grid with local refinement. Slopes
    are fitted over ``window`` (default: the upper half of the degree range). A degree
    whose Remez iteration fails is listed in ``flagged`` with err_B = nan. Degrees are
    independent and run on ``workers`` threads (default: one per CPU).
    """
    if not 0 <= n_min < n_max <= MAX_SWEEP_DEGREE:
        raise DomainError(f"need 0 <= n_min < n_max <= {MAX_SWEEP_DEGREE}, got {n_min}, {n_max}")
    if stride < 1:
        raise DomainError("stride must be positive")
    entry = _as_entry(entry)
    f = entry.spec
    degrees = list(range(n_min, n_max + 1, stride))
    grid = assessment_grid(f.breakpoints)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        leg = legendre_coeffs(f, n_max)
        cheb = chebyshev_coeffs(f, n_max)

    with ThreadPoolExecutor(max_workers=workers or os.cpu_count()) as pool:
        rows = list(pool.map(lambda n: _degree_errors(f, n, leg, cheb, grid), degrees))
    err_p, err_t, err_b, status = (list(c) for c in zip(*rows))
    flagged = [n for n, s in zip(degrees, status) if s == "failed"]

    def ratio(num, den):
        return [b / p if p > 0 else math.nan for b, p in zip(num, den)]

    ratio_p = ratio(err_b, err_p)
    ratio_t = ratio(err_b, err_t)
    scaled = [math.sqrt(n) * r for n, r in zip(degrees, ratio_p)]
    if window is None:
        window = (0.5 * (n_min + n_max), n_max)
    return RateReport(
        f.label,
        degrees,
        err_p,
        err_t,
        err_b,
        ratio_p,
        ratio_t,
        scaled,
        _slope(degrees, err_p, window),
        _slope(degrees, err_t, window),
        _slope(degrees, err_b, window),
        status,
        flagged,
        type(f.smoothness).__name__,
    )


# --- pointwise tables -------------------------------------------------------------


@dataclass
class PointwiseTable:
    function_label: str
    n: int
    x: list
    err_P: list
    err_B: list
    argmax_P: float
    max_P: float
    levelled_B: float

    def to_dict(self):
        return {k: _json_safe(v) for k, v in asdict(self).items()}

    @classmethod
    def from_dict(cls, d):
        return cls(**d)


def pointwise_figure(f_label, n):
    """|f - P_n f| and |f - B_n f| over the assessment grid, plus where P_n errs most."""
    if not 0 <= n <= MAX_SWEEP_DEGREE:
        raise DomainError(f"degree must be in [0, {MAX_SWEEP_DEGREE}], got {n}")
    f = _as_entry(f_label).spec
    grid = assessment_grid(f.breakpoints)
    leg = legendre_coeffs(f, n)
    best = remez_best(f, n, grid)
    max_p, arg_p = locate_max_error(f, leg, grid)
    return PointwiseTable(
        f.label,
        n,
        grid.tolist(),
        pointwise_error(f, leg, grid).tolist(),
        pointwise_error(f, best.poly, grid).tolist(),
        arg_p,
        max_p,
        best.levelled_error,
    )


# --- output -----------------------------------------------------------------------

CSV_COLUMNS = ("n", "err_P", "err_T", "err_B", "ratio_P", "ratio_T", "scaled_ratio_P")


def _fmt(v):
    return "%.17g" % v


def _csv_rows(report):
    if isinstance(report, RateReport):
        cols = [report.degrees, report.err_P, report.err_T, report.err_B,
                report.ratio_P, report.ratio_T, report.scaled_ratio_P]
        return CSV_COLUMNS, [[str(n)] + [_fmt(c[i]) for c in cols[1:]] for i, n in enumerate(report.degrees)]
    header = ("x", "err_P", "err_B")
    rows = zip(report.x, report.err_P, report.err_B)
    return header, [[_fmt(a), _fmt(b), _fmt(c)] for a, b, c in rows]


def _svg(report, log_x):
    width, height, pad = 640, 420, 60
    if isinstance(report, RateReport):
        xs = np.asarray(report.degrees, dtype=float)
        series = {"err_P": report.err_P, "err_T": report.err_T, "err_B": report.err_B}
        title = f"{report.function_label}: max errors"
    else:
        xs = np.asarray(report.x, dtype=float)
        series = {"err_P": report.err_P, "err_B": report.err_B}
        title = f"{report.function_label}: pointwise errors, n = {report.n}"
        log_x = False
    colors = {"err_P": "#1f77b4", "err_T": "#2ca02c", "err_B": "#d62728"}

    usable = xs > 0 if log_x else np.ones_like(xs, dtype=bool)
    tx = np.log10(np.where(usable, xs, 1.0)) if log_x else xs
    allvals = np.concatenate([np.asarray(v, dtype=float) for v in series.values()])
    pos = allvals[np.isfinite(allvals) & (allvals > 0)]
    ylo, yhi = (np.log10(pos.min()), np.log10(pos.max())) if len(pos) else (0.0, 1.0)
    if yhi <= ylo:
        yhi = ylo + 1.0
    xlo, xhi = float(np.min(tx[usable])), float(np.max(tx[usable]))
    if xhi <= xlo:
        xhi = xlo + 1.0

    def px(v):
        return pad + (v - xlo) / (xhi - xlo) * (width - 2 * pad)

    def py(v):
        return height - pad - (v - ylo) / (yhi - ylo) * (height - 2 * pad)

    svg = ET.Element("svg", xmlns="http://www.w3.org/2000/svg", width=str(width), height=str(height),
                     viewBox=f"0 0 {width} {height}")
    ET.SubElement(svg, "title").text = title
    ET.SubElement(svg, "rect", x=str(pad), y=str(pad), width=str(width - 2 * pad),
                  height=str(height - 2 * pad), fill="none", stroke="black")
    ET.SubElement(svg, "text", x=str(width / 2), y=str(pad / 2), **{"text-anchor": "middle"}).text = title
    axis_x = ("log10 " if log_x else "") + ("n" if isinstance(report, RateReport) else "x")
    ET.SubElement(svg, "text", x=str(width / 2), y=str(height - pad / 4), **{"text-anchor": "middle"}).text = axis_x
    ET.SubElement(svg, "text", x=str(pad / 4), y=str(height / 2)).text = "log10 err"
    for k in range(int(math.ceil(ylo)), int(math.floor(yhi)) + 1):
        ET.SubElement(svg, "text", x=str(pad - 30), y=str(py(k) + 4), **{"font-size": "10"}).text = str(k)
    for i, (name, vals) in enumerate(series.items()):
        v = np.asarray(vals, dtype=float)
        ok = usable & np.isfinite(v) & (v > 0)
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(tx[ok], np.log10(v[ok])))
        ET.SubElement(svg, "polyline", points=pts, fill="none", stroke=colors[name],
                      **{"stroke-width": "1.5", "data-series": name})
        ET.SubElement(svg, "text", x=str(width - pad + 5), y=str(pad + 15 * (i + 1)),
                      fill=colors[name], **{"font-size": "11"}).text = name
    return ET.tostring(svg, encoding="unicode")


def emit(report, fmt, path):
    """Write a RateReport or PointwiseTable as csv, json or svg.

    Sweeps of analytic functions get semilog axes in svg, everything else log-log.
    """
    if fmt not in ("csv", "json", "svg"):
        raise DomainError(f"unknown output format {fmt!r}")
    try:
        with open(path, "w", newline="") as fh:
            if fmt == "csv":
                header, rows = _csv_rows(report)
                w = csv.writer(fh)
                w.writerow(header)
                w.writerows(rows)
            elif fmt == "json":
                json.dump(report.to_dict(), fh, indent=1)
            else:
                log_x = getattr(report, "smoothness", "") != "Analytic"
                fh.write('<?xml version="1.0" encoding="UTF-8"?>\n')
                fh.write(_svg(report, log_x))
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc.strerror or exc}") from exc


def load_report(path):
    """Read back a RateReport or PointwiseTable written by ``emit(..., 'json', ...)``."""
    try:
        with open(path) as fh:
            d = json.load(fh)
    except OSError as exc:
        raise OutputError(f"cannot read {path}: {exc.strerror or exc}") from exc
    return PointwiseTable.from_dict(d) if "argmax_P" in d else RateReport.from_dict(d)


# --- figures ----------------------------------------------------------------------

FIGURE_SWEEPS = {
    "Fig1": (1, 30, 1),
    "Fig2": (2, 100, 2),
    "Fig4": (4, 100, 4),
    "Fig5": (4, 100, 4),
}
FIGURE3_DEGREES = (50, 100)


def figure(fig_id, outdir):
    """Write the data (csv + json) and a plot (svg) for every function of a figure.

    Returns the list of files written.
    """
    tag = f"Fig{fig_id}" if not str(fig_id).startswith("Fig") else str(fig_id)
    if tag not in FIGURE_TAGS:
        raise DomainError(f"unknown figure {fig_id!r}")
    try:
        os.makedirs(outdir, exist_ok=True)
    except OSError as exc:
        raise OutputError(f"cannot create {outdir}: {exc.strerror or exc}") from exc
    written = []
    for entry in (e for e in _CATALOG if e.figure_tag == tag):
        if tag == "Fig3":
            items = [(f"{entry.key}_n{n}", pointwise_figure(entry, n)) for n in FIGURE3_DEGREES]
        else:
            items = [(entry.key, sweep(entry, *FIGURE_SWEEPS[tag]))]
        for stem, rep in items:
            for fmt in ("csv", "json", "svg"):
                path = os.path.join(outdir, f"{tag.lower()}_{stem}.{fmt}")
                emit(rep, fmt, path)
                written.append(path)
    return written


__all__ = [
    "FunctionCatalogEntry",
    "PointwiseTable",
    "RateReport",
    "catalog",
    "emit",
    "figure",
    "get_entry",
    "load_report",
    "pointwise_figure",
    "rate_fit",
    "sweep",
]
