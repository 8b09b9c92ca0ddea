"""Experiment orchestration: config ingestion, deterministic dispatch, and
CSV/SVG emission for the five experiment families.

Configs are flat key/value YAML documents; command-line flags override file
values.  Every run embeds its effective configuration (defaults included)
in the result metadata and the emitted CSV, and identical configs produce
byte-identical CSVs for any worker count.
"""

import math
import time
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field

import numpy as np
import yaml

from . import alignment as al
from . import ci_precoding as ci
from . import gic_regions as gic
from . import secrecy as sec
from . import swipt as sw
from .channel_model import RngStream
from .errors import ConfigError, IoError, NotBracketed
from .parallel import run_indexed
from .results import CurveResult, Series

__all__ = [
    "ExperimentConfig",
    "load_config",
    "run",
    "render_csv",
    "emit_csv",
    "emit_svg",
    "read_csv",
]

# Metadata keys excluded from emitted CSVs because they vary between
# otherwise identical runs.
_VOLATILE_METADATA = ("wall_time_s",)


def _floats(value):
    if isinstance(value, str):
        parts = [p for p in value.replace(",", " ").split() if p]
        return [float(p) for p in parts]
    if isinstance(value, (int, float)):
        return [float(value)]
    return [float(v) for v in value]


def _bool(value):
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {value!r}")


_COERCERS = {"int": int, "float": float, "bool": _bool, "str": str, "floats": _floats}

_COMMON_SCHEMA = {
    "seed": ("int", 12345),
    "trials": ("int", None),  # per-experiment default patched in below
    "workers": ("int", 1),
    "out": ("str", None),
    "svg": ("bool", False),
}

_EXPERIMENT_SCHEMAS = {
    "gic": {
        "trials": ("int", 1),  # unused; accepted for a uniform CLI surface
        "p_grid_db": ("floats", [0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0]),
        "p_grid": ("floats", None),  # linear powers, overrides p_grid_db
        "a_grid": ("floats", [round(0.05 * i, 2) for i in range(1, 20)]),
    },
    "alignment": {
        "trials": ("int", 1000),
        "pairs": ("int", 3),
        "source_antennas": ("int", 2),
    },
    "ci-ser": {
        "trials": ("int", 100000),
        "k": ("int", 4),
        "nt": ("int", None),
        "psk_order": ("int", 4),
        "snr_grid_db": ("floats", [0.0, 4.0, 8.0, 12.0, 16.0, 20.0, 24.0, 28.0, 32.0, 36.0, 40.0]),
        "precoder": ("str", "both"),
        "target_ser": ("float", 0.01),
    },
    "swipt": {
        "trials": ("int", 200),
        "k": ("int", 8),
        "gamma_grid_db": ("floats", [0.0, 10.0, 20.0, 30.0]),
        "epsilon_grid": ("floats", [1.0, 3.0]),
        "sigma2": ("float", 1.0),
        "sigmac2": ("float", 1.0),
    },
    "secrecy": {
        "trials": ("int", 10000),
        "scheme": ("str", "all"),
        "antennas": ("str", "single"),
        "snr_grid_db": ("floats", [0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0, 45.0, 50.0]),
        "kli": ("float", 0.15),
        "pj_ratio": ("float", 1.0),
    },
}


@dataclass
class ExperimentConfig:
    """Validated experiment configuration with all defaults applied."""

    experiment: str
    seed: int
    workers: int
    out: str = None
    svg: bool = False
    params: dict = field(default_factory=dict)

    def echo(self):
        """Flat view of every value that affects the run's numbers."""
        flat = {"experiment": self.experiment, "seed": self.seed}
        for key, value in self.params.items():
            flat[key] = value
        return flat


def _schema_for(experiment):
    if experiment not in _EXPERIMENT_SCHEMAS:
        known = ", ".join(sorted(_EXPERIMENT_SCHEMAS))
        raise ConfigError(f"unknown experiment {experiment!r}; expected one of: {known}")
    schema = dict(_COMMON_SCHEMA)
    schema.update(_EXPERIMENT_SCHEMAS[experiment])
    return schema


def load_config(path=None, overrides=None) -> ExperimentConfig:
    """Build a validated config from an optional flat YAML file plus
    overrides (e.g. CLI flags).  Overrides win over file values.

    Raises
    ------
    ConfigError
        On unreadable or malformed documents, a missing experiment name,
        an unknown key (named in the message), or an uncoercible value.
    """
    data = {}
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                loaded = yaml.safe_load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        except yaml.YAMLError as exc:
            raise ConfigError(f"malformed config file {path}: {exc}") from exc
        if loaded is None:
            loaded = {}
        if not isinstance(loaded, dict):
            raise ConfigError("config file must be a flat key/value mapping")
        data.update(loaded)
    for key, value in (overrides or {}).items():
        if value is not None:
            data[key] = value

    experiment = data.pop("experiment", None)
    if experiment is None:
        raise ConfigError("missing required field 'experiment'")
    experiment = str(experiment)
    schema = _schema_for(experiment)

    for key in data:
        if key not in schema:
            raise ConfigError(f"unknown config key {key!r} for experiment {experiment!r}")

    values = {}
    for key, (kind, default) in schema.items():
        if key in data and data[key] is not None:
            try:
                values[key] = _COERCERS[kind](data[key])
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad value for {key!r}: {data[key]!r} ({exc})") from exc
        else:
            values[key] = default

    seed = values.pop("seed")
    workers = values.pop("workers")
    out = values.pop("out")
    svg = values.pop("svg")
    return ExperimentConfig(
        experiment=experiment, seed=seed, workers=workers, out=out, svg=svg, params=values
    )


# ---------------------------------------------------------------------------
# Experiment runners
# ---------------------------------------------------------------------------

def _run_gic(config):
    params = config.params
    if params.get("p_grid") is not None:
        powers = list(params["p_grid"])
    else:
        powers = [10.0 ** (v / 10.0) for v in params["p_grid_db"]]
    a_grid = list(params["a_grid"])
    p_db, a_col, tin, orth, mid, outer, regime = [], [], [], [], [], [], []
    for p in powers:
        for a in a_grid:
            g = gic.GicParams(p=p, a=a)
            p_db.append(10.0 * math.log10(p))
            a_col.append(a)
            tin.append(gic.rate_tin(g))
            orth.append(gic.rate_orthogonal(g))
            if a >= 1.0:
                mid.append(gic.rate_strong_capacity(g))
            elif a == 0.0:
                mid.append(gic.rate_tin(g))
            else:
                mid.append(gic.rate_hk_symmetric(g))
            outer.append(gic.outer_bound_symmetric(g))
            regime.append(gic.classify_regime(g))
    return CurveResult(
        axis_name="p_db",
        axis=p_db,
        series=[
            Series("a", a_col),
            Series("tin", tin),
            Series("orth", orth),
            Series("hk_or_strong", mid),
            Series("outer", outer),
            Series("regime", regime),
        ],
        metadata={"y_label": "rate (bits/channel use)"},
    )


def _alignment_chunk(key, chunk_index, start, count, pairs, source_antennas):
    rng = RngStream(key[0], key[1], key[2])
    rows = np.zeros((count, 5))
    for i in range(count):
        seed_index = start + i
        g = rng.child(seed_index).generator
        root2 = np.sqrt(2.0)

        # 3-user interference alignment instance
        h = (g.standard_normal((3, 3, 2, 2)) + 1j * g.standard_normal((3, 3, 2, 2))) / root2
        triple = al.ia_3user(h)
        v = triple.precoders
        residual = 0.0
        for k in range(3):
            j, l = (k + 1) % 3, (k + 2) % 3
            stacked = np.stack([h[k, j] @ v[j], h[k, l] @ v[l]], axis=1)
            residual = max(residual, abs(np.linalg.det(stacked)))
        leak = al.interference_leakage(v, h, al.ia_receive_filters(h, triple))

        # signal alignment instance, relay rows cycling over 2..6
        r = 2 + seed_index % 5
        n = r // 2 + 1
        h_a = (g.standard_normal((r, n)) + 1j * g.standard_normal((r, n))) / root2
        h_b = (g.standard_normal((r, n)) + 1j * g.standard_normal((r, n))) / root2
        v_a, v_b = al.sa_precoders(h_a, h_b)
        raw = np.linalg.norm(h_a @ v_a - h_b @ v_b)
        sa_res = raw / (np.linalg.norm(h_a) + np.linalg.norm(h_b))

        # relay separability with `pairs` aligned pairs
        up_a, up_b = [], []
        for _ in range(pairs):
            up_a.append(
                (g.standard_normal((pairs, source_antennas))
                 + 1j * g.standard_normal((pairs, source_antennas))) / root2
            )
            up_b.append(
                (g.standard_normal((pairs, source_antennas))
                 + 1j * g.standard_normal((pairs, source_antennas))) / root2
            )
        scenario = al.TwoWayRelayScenario(uplink_a=tuple(up_a), uplink_b=tuple(up_b))
        rank = al.relay_separability(scenario, al.sa_directions(scenario))

        rows[i] = (seed_index, sa_res, residual, leak, rank)
    return rows


def _run_alignment(config):
    params = config.params
    trials = params["trials"]
    pairs = params["pairs"]
    n_src = params["source_antennas"]
    if 2 * n_src <= pairs:
        # surfaces NoAlignmentSpace with the offending dimensions up front
        al.sa_precoders(np.zeros((pairs, n_src)), np.zeros((pairs, n_src)))
    key = (config.seed, 0, ())
    chunk = 200
    n_chunks = (trials + chunk - 1) // chunk
    args = [
        (key, i, i * chunk, min(chunk, trials - i * chunk), pairs, n_src)
        for i in range(n_chunks)
    ]
    rows = np.concatenate(run_indexed(_alignment_chunk, args, config.workers), axis=0)
    return CurveResult(
        axis_name="seed",
        axis=[int(v) for v in rows[:, 0]],
        series=[
            Series("sa_residual", rows[:, 1].tolist()),
            Series("ia_residual", rows[:, 2].tolist()),
            Series("leakage", rows[:, 3].tolist()),
            Series("rank", [int(v) for v in rows[:, 4]]),
        ],
        metadata={"y_label": "residual"},
    )


def _run_ci_ser(config):
    params = config.params
    which = params["precoder"]
    if which not in ("both", "zf", "ci"):
        raise ConfigError(f"precoder must be both/zf/ci, got {which!r}")
    precoders = ("zf", "ci") if which == "both" else (which,)
    k = params["k"]
    nt = params["nt"] if params["nt"] is not None else k
    grid = params["snr_grid_db"]
    curves = {}
    for p in precoders:
        curves[p] = ci.ser_curve(
            p,
            users=k,
            psk_order=params["psk_order"],
            snr_grid_db=grid,
            trials=params["trials"],
            rng=RngStream(config.seed, 0),
            nt=nt,
            workers=config.workers,
        )
    axis, pre_col, ser, lo, hi = [], [], [], [], []
    for p in precoders:
        c = curves[p].column("ser")
        axis.extend(grid)
        pre_col.extend([p] * len(grid))
        ser.extend(c.values)
        lo.extend(c.err_lo)
        hi.extend(c.err_hi)
    meta = {"y_label": "symbol error rate", "yscale": "log", "k": k, "nt": nt,
            "psk_order": params["psk_order"]}
    target = params["target_ser"]
    if target:
        for p in precoders:
            try:
                meta[f"snr_at_target_{p}"] = ci.snr_at_target(curves[p], target)
            except NotBracketed:
                meta[f"snr_at_target_{p}"] = "not-bracketed"
        if which == "both" and all(
            isinstance(meta[f"snr_at_target_{p}"], float) for p in precoders
        ):
            meta["gain_db"] = meta["snr_at_target_zf"] - meta["snr_at_target_ci"]
    return CurveResult(
        axis_name="snr_db",
        axis=axis,
        series=[
            Series("precoder", pre_col),
            Series("ser", ser, err_lo=lo, err_hi=hi),
        ],
        metadata=meta,
    )


def _run_swipt(config):
    from .errors import Infeasible

    params = config.params
    result = sw.power_ratio_experiment(
        gamma_grid_db=params["gamma_grid_db"],
        epsilon_grid=params["epsilon_grid"],
        trials=params["trials"],
        rng=RngStream(config.seed, 0),
        k=params["k"],
        sigma2=params["sigma2"],
        sigmac2=params["sigmac2"],
        workers=config.workers,
    )
    if sum(result.column("feasible_count").values) == 0:
        raise Infeasible("every SWIPT draw was infeasible or degenerate in every cell")
    result.metadata["y_label"] = "ZF/optimal power ratio"
    return result


def _run_secrecy(config):
    params = config.params
    which = params["scheme"]
    if which == "all":
        schemes = (sec.SCHEME_HD, sec.SCHEME_FD_MRC_EVE, sec.SCHEME_FD_MMSE_EVE)
    elif which in (sec.SCHEME_HD, sec.SCHEME_FD_MRC_EVE, sec.SCHEME_FD_MMSE_EVE):
        schemes = (which,)
    else:
        raise ConfigError(f"scheme must be all/hd/fd_mrc_eve/fd_mmse_eve, got {which!r}")
    grid = params["snr_grid_db"]
    axis, scheme_col, mean, err = [], [], [], []
    for scheme in schemes:
        curve = sec.secrecy_curve(
            scheme,
            antennas=params["antennas"],
            snr_grid_db=grid,
            trials=params["trials"],
            rng=RngStream(config.seed, 0),
            k_li=params["kli"],
            pj_ratio=params["pj_ratio"],
            workers=config.workers,
        )
        axis.extend(grid)
        scheme_col.extend([scheme] * len(grid))
        mean.extend(curve.column("mean_rate").values)
        err.extend(curve.column("stderr").values)
    return CurveResult(
        axis_name="snr_db",
        axis=axis,
        series=[
            Series("scheme", scheme_col),
            Series("mean_rate", mean),
            Series("stderr", err),
        ],
        metadata={"y_label": "secrecy rate (bpcu)"},
    )


_RUNNERS = {
    "gic": _run_gic,
    "alignment": _run_alignment,
    "ci-ser": _run_ci_ser,
    "swipt": _run_swipt,
    "secrecy": _run_secrecy,
}


def run(config: ExperimentConfig):
    """Execute the configured experiment; returns a list of results.

    The effective configuration is echoed into each result's metadata, and
    for a fixed config the output is identical for any worker count.
    """
    runner = _RUNNERS[config.experiment]
    started = time.perf_counter()
    result = runner(config)
    results = result if isinstance(result, list) else [result]
    elapsed = time.perf_counter() - started
    for r in results:
        echo = config.echo()
        echo.update(r.metadata)
        r.metadata = echo
        r.metadata["wall_time_s"] = round(elapsed, 3)
    return results


# ---------------------------------------------------------------------------
# Emission
# ---------------------------------------------------------------------------

def _fmt(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def render_csv(result: CurveResult) -> str:
    """CSV text for a result: '#'-prefixed metadata comments, one header
    row, one row per axis point, '.' decimal separator, stable column
    order.  Floats are written in shortest round-trip form."""
    lines = []
    for key in sorted(result.metadata):
        if key in _VOLATILE_METADATA:
            continue
        lines.append(f"# {key}={_fmt(result.metadata[key])}")
    header = [result.axis_name]
    columns = [list(result.axis)]
    for s in result.series:
        header.append(s.name)
        columns.append(list(s.values))
        if s.err_lo is not None and s.err_hi is not None:
            header.extend([f"{s.name}_lo", f"{s.name}_hi"])
            columns.extend([list(s.err_lo), list(s.err_hi)])
    lines.append(",".join(header))
    for i in range(len(result.axis)):
        lines.append(",".join(_fmt(col[i]) for col in columns))
    return "\n".join(lines) + "\n"


def emit_csv(result: CurveResult, path):
    """Write :func:`render_csv` output to ``path`` as UTF-8."""
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(render_csv(result))
    except OSError as exc:
        raise IoError(f"cannot write CSV to {path}: {exc}") from exc


def read_csv(path):
    """Parse a CSV written by :func:`emit_csv`.

    Returns ``(metadata, header, rows)`` with numeric cells converted back
    to floats and everything else kept as strings.
    """
    metadata, header, rows = {}, None, []
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for raw in fh:
                line = raw.rstrip("\n")
                if not line:
                    continue
                if line.startswith("#"):
                    key, _, value = line[1:].strip().partition("=")
                    metadata[key.strip()] = value
                    continue
                cells = line.split(",")
                if header is None:
                    header = cells
                    continue
                parsed = []
                for cell in cells:
                    try:
                        parsed.append(float(cell))
                    except ValueError:
                        parsed.append(cell)
                rows.append(parsed)
    except OSError as exc:
        raise IoError(f"cannot read CSV from {path}: {exc}") from exc
    return metadata, header or [], rows


_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def emit_svg(result: CurveResult, path):
    """Render numeric series as a simple line plot (SVG 1.1).

    Long-format tables with a leading string column (scheme, precoder) are
    split into one line per group.  A ``yscale: log`` metadata hint selects
    a log10 vertical axis; nonpositive points are skipped there.
    """
    width, height = 800, 500
    ml, mr, mt, mb = 70, 30, 30, 55
    log_y = str(result.metadata.get("yscale", "")) == "log"

    groups = []  # (label, xs, ys)
    string_series = [s for s in result.series if not s.is_numeric]
    numeric_series = [s for s in result.series if s.is_numeric]
    axis_vals = [float(v) for v in result.axis]
    if string_series and numeric_series:
        tag = string_series[0]
        main = numeric_series[0]
        for label in dict.fromkeys(tag.values):
            xs = [x for x, t in zip(axis_vals, tag.values) if t == label]
            ys = [float(y) for y, t in zip(main.values, tag.values) if t == label]
            groups.append((f"{main.name} [{label}]", xs, ys))
    else:
        for s in numeric_series:
            groups.append((s.name, axis_vals, [float(v) for v in s.values]))

    def prepare(xs, ys):
        pts = [(x, y) for x, y in zip(xs, ys) if math.isfinite(y) and (not log_y or y > 0)]
        return pts

    cleaned = [(label, prepare(xs, ys)) for label, xs, ys in groups]
    all_pts = [p for _, pts in cleaned for p in pts]
    if all_pts:
        x_lo = min(p[0] for p in all_pts)
        x_hi = max(p[0] for p in all_pts)
        yv = [math.log10(p[1]) if log_y else p[1] for p in all_pts]
        y_lo, y_hi = min(yv), max(yv)
    else:
        x_lo, x_hi, y_lo, y_hi = 0.0, 1.0, 0.0, 1.0
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0

    def sx(x):
        return ml + (x - x_lo) / (x_hi - x_lo) * (width - ml - mr)

    def sy(y):
        yy = math.log10(y) if log_y else y
        return height - mb - (yy - y_lo) / (y_hi - y_lo) * (height - mt - mb)

    svg = ET.Element(
        "svg",
        xmlns="http://www.w3.org/2000/svg",
        width=str(width),
        height=str(height),
        viewBox=f"0 0 {width} {height}",
    )
    ET.SubElement(svg, "rect", x="0", y="0", width=str(width), height=str(height), fill="white")
    axis_style = {"stroke": "black", "stroke-width": "1"}
    ET.SubElement(svg, "line", x1=str(ml), y1=str(height - mb), x2=str(width - mr),
                  y2=str(height - mb), **axis_style)
    ET.SubElement(svg, "line", x1=str(ml), y1=str(mt), x2=str(ml), y2=str(height - mb),
                  **axis_style)

    n_ticks = 5
    for i in range(n_ticks + 1):
        x = x_lo + (x_hi - x_lo) * i / n_ticks
        px = sx(x)
        ET.SubElement(svg, "line", x1=str(px), y1=str(height - mb), x2=str(px),
                      y2=str(height - mb + 5), **axis_style)
        label = ET.SubElement(svg, "text", x=str(px), y=str(height - mb + 18),
                              **{"text-anchor": "middle", "font-size": "11"})
        label.text = f"{x:g}"
        yy = y_lo + (y_hi - y_lo) * i / n_ticks
        py = height - mb - (yy - y_lo) / (y_hi - y_lo) * (height - mt - mb)
        ET.SubElement(svg, "line", x1=str(ml - 5), y1=str(py), x2=str(ml), y2=str(py),
                      **axis_style)
        ylab = ET.SubElement(svg, "text", x=str(ml - 8), y=str(py + 4),
                             **{"text-anchor": "end", "font-size": "11"})
        ylab.text = f"1e{yy:g}" if log_y else f"{yy:g}"

    xlabel = ET.SubElement(svg, "text", x=str((ml + width - mr) / 2), y=str(height - 12),
                           **{"text-anchor": "middle", "font-size": "13"})
    xlabel.text = str(result.axis_name)
    ylabel = ET.SubElement(svg, "text", x="16", y=str((mt + height - mb) / 2),
                           transform=f"rotate(-90 16 {(mt + height - mb) / 2})",
                           **{"text-anchor": "middle", "font-size": "13"})
    ylabel.text = str(result.metadata.get("y_label", "value"))

    for idx, (label, pts) in enumerate(cleaned):
        color = _PALETTE[idx % len(_PALETTE)]
        if pts:
            coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in pts)
            ET.SubElement(svg, "polyline", points=coords, fill="none", stroke=color,
                          **{"stroke-width": "1.6"})
        ly = mt + 16 + 16 * idx
        ET.SubElement(svg, "line", x1=str(width - mr - 150), y1=str(ly - 4),
                      x2=str(width - mr - 120), y2=str(ly - 4),
                      stroke=color, **{"stroke-width": "1.6"})
        text = ET.SubElement(svg, "text", x=str(width - mr - 114), y=str(ly),
                             **{"font-size": "12"})
        text.text = label

    try:
        ET.ElementTree(svg).write(path, encoding="utf-8", xml_declaration=True)
    except OSError as exc:
        raise IoError(f"cannot write SVG to {path}: {exc}") from exc
