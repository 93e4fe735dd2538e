"""Command-line front end.

Every command reads a ``key=value`` config (``--config``), writes its products
into ``--out`` and records the fully resolved configuration in
``manifest.txt`` as well as in the header of each data file.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import warnings
from pathlib import Path
from typing import Callable

import numpy as np

from . import analysis, dynamics_ode, equilibria as eqm, io, pde1d, pde2d, turing
from .errors import HollingTannerError, NoEquilibriumError, ParameterError
from .io import ConfigError, fmt
from .model import Params, derived

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3
REQUIRED = object()


# ---------------------------------------------------------------- value parsers


def _float(s: str) -> float:
    return float(s)


def _int(s: str) -> int:
    return int(s)


def _bool(s: str) -> bool:
    low = s.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def _str(s: str) -> str:
    return s


def _pair(s: str) -> tuple[float, float]:
    parts = [float(x) for x in s.split(",")]
    if len(parts) != 2:
        raise ValueError(f"expected two comma-separated numbers, got {s!r}")
    return parts[0], parts[1]


def _state(s: str):
    """An explicit "u,v" pair or a symbolic equilibrium name."""
    if s.upper() in ("P2", "P1", "0C", "10", "ORIGIN"):
        return s.upper()
    return _pair(s)


def _dt(s: str):
    return "auto" if s == "auto" else float(s)


PARAMS = {
    "params.A": (_float, REQUIRED),
    "params.C": (_float, REQUIRED),
    "params.Q": (_float, REQUIRED),
    "params.S": (_float, REQUIRED),
    "params.d": (_float, 1.0),
}

SCHEMAS: dict[str, dict[str, tuple[Callable, object]]] = {
    "equilibria": dict(PARAMS),
    "dispersion": {
        **PARAMS,
        "dispersion.equilibrium": (_state, "P2"),
        "dispersion.n": (_int, turing.N_SAMPLES),
    },
    "turing-scan": {
        "scan.A": (_float, REQUIRED),
        "scan.C": (_float, REQUIRED),
        "scan.d": (_float, REQUIRED),
        "scan.Q_min": (_float, REQUIRED),
        "scan.Q_max": (_float, REQUIRED),
        "scan.S_min": (_float, REQUIRED),
        "scan.S_max": (_float, REQUIRED),
        "scan.resolution_Q": (_int, 51),
        "scan.resolution_S": (_int, 51),
        "scan.boundaries": (_bool, True),
    },
    "basin": {
        **PARAMS,
        "basin.n_u": (_int, 50),
        "basin.n_v": (_int, 50),
        "basin.t_max": (_float, 5000.0),
    },
    "sim1d": {
        **PARAMS,
        "sim1d.L": (_float, 200.0),
        "sim1d.n": (_int, 1500),
        "sim1d.t_end": (_float, 1000.0),
        "sim1d.dt": (_dt, "auto"),
        "sim1d.ic": (_str, "gaussian_p2"),
        "sim1d.ic.amplitude": (_float, 0.012),
        "sim1d.ic.width": (_float, 7.0),
        "sim1d.ic.center": (_float, 0.0),
        "sim1d.ic.point": (_state, "P2"),
        "sim1d.ic.left": (_state, "0C"),
        "sim1d.ic.right": (_state, "P2"),
        "sim1d.snapshot_stride": (_int, 0),
        "sim1d.record_stride": (_int, 0),
        "sim1d.stop_when_stationary": (_bool, False),
    },
    "sim2d": {
        **PARAMS,
        "sim2d.nx": (_int, 200),
        "sim2d.ny": (_int, 200),
        "sim2d.spacing": (_float, 1.0),
        "sim2d.dt": (_float, 0.2),
        "sim2d.t_end": (_float, 1000.0),
        "sim2d.ic": (_str, "random"),
        "sim2d.ic.point": (_state, "P2"),
        "sim2d.ic.amplitude": (_float, 0.01),
        "sim2d.seed": (_int, 0),
        "sim2d.snapshot_stride": (_int, 0),
        "sim2d.allow_unstable_dt": (_bool, False),
        "sim2d.stop_when_stationary": (_bool, False),
        "sim2d.raster": (_bool, True),
    },
    "analyze": {
        "analyze.inputs": (_str, REQUIRED),
        "analyze.reference": (_state, "P2"),
        "params.A": (_float, None),
        "params.C": (_float, None),
        "params.Q": (_float, None),
        "params.S": (_float, None),
        "params.d": (_float, 1.0),
    },
    "front": {
        **PARAMS,
        "front.left": (_state, "0C"),
        "front.right": (_state, "P2"),
        "front.L": (_float, pde1d.FRONT_DEFAULT_L),
        "front.n": (_int, 0),
        "front.t_end": (_float, 500.0),
        "front.record_interval": (_float, 1.0),
        "front.level": (_float, math.nan),
        "front.species": (_str, "u"),
    },
}


def resolve(command: str, entries: dict[str, io.ConfigEntry]) -> dict[str, object]:
    schema = SCHEMAS[command]
    out: dict[str, object] = {}
    for key, entry in entries.items():
        if key not in schema:
            raise ConfigError(f"unknown key {key!r} for command {command}", entry.line)
        parser, _ = schema[key]
        try:
            out[key] = parser(entry.value)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key}: {exc}", entry.line) from exc
    for key, (_, default) in schema.items():
        if key not in out:
            if default is REQUIRED:
                raise ConfigError(f"missing required key {key!r}")
            out[key] = default
    return {k: out[k] for k in schema}


def _params(cfg: dict) -> Params:
    return Params(A=cfg["params.A"], C=cfg["params.C"], Q=cfg["params.Q"], S=cfg["params.S"], d=cfg["params.d"])


def _point(spec, p: Params) -> tuple[float, float]:
    if isinstance(spec, tuple):
        return spec
    if spec == "P2":
        return eqm.p2(p).point
    if spec == "P1":
        e = eqm.find(eqm.classify_equilibria(p), eqm.Kind.COEXIST_P1)
        if e is None:
            raise NoEquilibriumError("P1 does not exist in Phi")
        return e.point
    if spec == "0C":
        return (0.0, p.C)
    if spec == "10":
        return (1.0, 0.0)
    return (0.0, 0.0)


class Context:
    def __init__(self, command: str, cfg: dict, out: Path, seed: int | None, threads: int):
        self.command = command
        self.cfg = cfg
        self.out = out
        self.seed = seed
        self.threads = threads
        self.manifest = {"command": command, **cfg, "seed": "none" if seed is None else seed, "threads": threads}

    def path(self, name: str) -> Path:
        return self.out / name


# ---------------------------------------------------------------- commands


def cmd_equilibria(ctx: Context) -> list[str]:
    p = _params(ctx.cfg)
    lines = []
    alg = derived(p)
    lines.append(f"H1={fmt(alg.H1)}")
    lines.append(f"H2={fmt(alg.H2)}")
    lines.append(f"Delta={fmt(alg.Delta)}")
    eqs = eqm.classify_equilibria(p)
    rows = [(e.kind.value, e.u, e.v, e.stability.value) for e in eqs]
    if eqm.find(eqs, eqm.Kind.COEXIST_P1) is None and eqm.find(eqs, eqm.Kind.COEXIST_P2) is None:
        lines.append("note=no coexistence equilibria in Phi")
    try:
        lines.append(f"S_H={fmt(eqm.hopf_threshold(p.A, p.C, p.Q))}")
    except NoEquilibriumError:
        lines.append("S_H=none")
    try:
        q_star, s_star = eqm.bt_point(p.A, p.C)
        lines.append(f"Q_star={fmt(q_star)}")
        lines.append(f"BT_point={fmt(q_star)},{fmt(s_star)}")
    except NoEquilibriumError:
        lines.append("Q_star=none")
        lines.append("BT_point=none")
    io.write_rows_csv(ctx.path("equilibria.csv"), ["kind", "u", "v", "stability"], rows, ctx.manifest)
    with open(ctx.path("thresholds.txt"), "w") as fh:
        for line in io.manifest_lines(ctx.manifest):
            fh.write(f"# {line}\n")
        fh.write("".join(line + "\n" for line in lines))
    table = [f"{k:<14s} u={fmt(u)} v={fmt(v)} {s}" for k, u, v, s in rows]
    return table + lines


def cmd_dispersion(ctx: Context) -> list[str]:
    p = _params(ctx.cfg)
    point = _point(ctx.cfg["dispersion.equilibrium"], p)
    J = turing.checked_jacobian(p, point)
    k = turing.k_grid(J, p.d, ctx.cfg["dispersion.n"])
    lp, lm = turing.dispersion_from_jacobian(J, p.d, k)
    rows = zip(k, lp.real, lp.imag, lm.real, lm.imag)
    io.write_rows_csv(
        ctx.path("dispersion.csv"), ["k", "re_plus", "im_plus", "re_minus", "im_minus"], rows, ctx.manifest
    )
    band = turing.unstable_band(J, p.d)
    summary = [f"band={'none' if band is None else fmt(band)}"]
    try:
        summary.append(f"turing={fmt(turing.turing_test(p, point).is_turing)}")
    except HollingTannerError as exc:
        summary.append(f"turing=none ({exc})")
    return summary


def cmd_turing_scan(ctx: Context) -> list[str]:
    c = ctx.cfg
    scan = turing.turing_scan(
        c["scan.A"],
        c["scan.C"],
        c["scan.d"],
        (c["scan.Q_min"], c["scan.Q_max"]),
        (c["scan.S_min"], c["scan.S_max"]),
        (c["scan.resolution_Q"], c["scan.resolution_S"]),
        threads=ctx.threads,
        boundaries=c["scan.boundaries"],
    )
    rows = []
    for row in scan.cells:
        for cell in row:
            k1, k2 = cell.band if cell.band else (math.nan, math.nan)
            rows.append((cell.Q, cell.S, cell.tag.value, cell.lambda0, cell.lambda_d, k1, k2))
    io.write_rows_csv(ctx.path("turing_scan.csv"), ["Q", "S", "tag", "lambda0", "lambda_d", "k1", "k2"], rows, ctx.manifest)
    for name, pts in scan.boundaries.items():
        io.write_rows_csv(ctx.path(f"boundary_{name}.csv"), ["Q", "S"], pts.tolist(), ctx.manifest)
    counts = {}
    for tag in scan.tags().ravel():
        counts[tag] = counts.get(tag, 0) + 1
    return [f"cells_{k}={v}" for k, v in sorted(counts.items())]


def cmd_basin(ctx: Context) -> list[str]:
    p = _params(ctx.cfg)
    scan = dynamics_ode.basin_scan(
        p, ctx.cfg["basin.n_u"], ctx.cfg["basin.n_v"], t_max=ctx.cfg["basin.t_max"], threads=ctx.threads
    )
    rows = []
    for j, v0 in enumerate(scan.v0):
        for i, u0 in enumerate(scan.u0):
            rows.append((u0, v0, scan.classes[j, i], scan.periods[j, i]))
    io.write_rows_csv(ctx.path("basin.csv"), ["u0", "v0", "class", "period"], rows, ctx.manifest)
    codes = np.vectorize(dynamics_ode.CLASS_CODES.get)(scan.classes).astype(np.uint8)
    # top row of the image is the largest v0
    io.write_pgm(ctx.path("basin.pgm"), codes[::-1])
    sidecar = {**ctx.manifest, **{f"code.{k}": v for k, v in dynamics_ode.CLASS_CODES.items()}}
    sidecar["orientation"] = "row 0 = largest v0, column 0 = smallest u0"
    io.write_manifest(ctx.path("basin.pgm.txt"), sidecar)
    return [f"classes={','.join(sorted(scan.class_set()))}"]


def _ic1d(c: dict, p: Params):
    kind = c["sim1d.ic"]
    if kind == "gaussian_p2":
        return pde1d.GaussianBumpAtP2(c["sim1d.ic.amplitude"], c["sim1d.ic.width"], c["sim1d.ic.center"])
    if kind == "gaussian_0c":
        return pde1d.GaussianBumpAt0C(c["sim1d.ic.amplitude"], c["sim1d.ic.width"], c["sim1d.ic.center"])
    if kind == "uniform":
        return pde1d.UniformAt(_point(c["sim1d.ic.point"], p))
    if kind == "step":
        return pde1d.StepFront(_point(c["sim1d.ic.left"], p), _point(c["sim1d.ic.right"], p))
    raise ConfigError(f"unknown sim1d.ic {kind!r} (gaussian_p2, gaussian_0c, uniform, step)")


def _band(p: Params) -> tuple[float, float] | None:
    try:
        return turing.turing_test(p, eqm.p2(p)).band
    except HollingTannerError:
        return None


def cmd_sim1d(ctx: Context) -> list[str]:
    c = ctx.cfg
    p = _params(c)
    cfg = pde1d.Sim1DConfig(
        params=p,
        L=c["sim1d.L"],
        n=c["sim1d.n"],
        t_end=c["sim1d.t_end"],
        dt=c["sim1d.dt"],
        ic=_ic1d(c, p),
        snapshot_stride=c["sim1d.snapshot_stride"],
        record_stride=c["sim1d.record_stride"],
        stop_when_stationary=c["sim1d.stop_when_stationary"],
    )
    res = pde1d.simulate1d(cfg)
    ctx.manifest["resolved.dt"] = res.dt
    ctx.manifest["resolved.dx"] = cfg.dx
    for idx, snap in enumerate(res.snapshots):
        meta = {**ctx.manifest, "time": snap.time, "step": snap.step}
        name = "final.csv" if idx == len(res.snapshots) - 1 else f"snapshot_{idx:05d}.csv"
        io.write_snapshot_csv(ctx.path(name), snap.x, snap.u, snap.v, meta)
    if res.record is not None:
        for sp in ("u", "v"):
            io.write_spacetime_csv(ctx.path(f"spacetime_{sp}.csv"), res.record.times, res.record.x, getattr(res.record, sp), ctx.manifest)
    band = _band(p)
    series = None
    if res.record is not None:
        series = (res.record.times, res.record.u[:, 0])
    rep = analysis.pattern_report(res.final, band=band, series=series)
    meta = {**ctx.manifest, "stationary_at": res.stationary_at, "final_time": res.final.time}
    _write_report(ctx.path("report.txt"), rep, meta)
    return [f"dominant_k={fmt(rep.dominant_k)}", f"k_band_check={fmt(rep.k_band_check)}", f"stationary_at={fmt(res.stationary_at)}"]


def _write_report(path, rep, meta):
    with open(path, "w") as fh:
        for line in io.manifest_lines(meta):
            fh.write(f"# {line}\n")
        fh.write(rep.to_text())


def cmd_sim2d(ctx: Context) -> list[str]:
    c = ctx.cfg
    p = _params(c)
    point = _point(c["sim2d.ic.point"], p)
    seed = ctx.seed if ctx.seed is not None else c["sim2d.seed"]
    ctx.manifest["resolved.seed"] = seed
    if c["sim2d.ic"] == "random":
        ic = pde2d.RandomAround(point, c["sim2d.ic.amplitude"], seed)
    elif c["sim2d.ic"] == "uniform":
        ic = pde2d.Uniform(point)
    else:
        raise ConfigError(f"unknown sim2d.ic {c['sim2d.ic']!r} (random, uniform)")
    cfg = pde2d.Sim2DConfig(
        params=p,
        ic=ic,
        nx=c["sim2d.nx"],
        ny=c["sim2d.ny"],
        spacing=c["sim2d.spacing"],
        dt=c["sim2d.dt"],
        t_end=c["sim2d.t_end"],
        snapshot_stride=c["sim2d.snapshot_stride"],
        allow_unstable_dt=c["sim2d.allow_unstable_dt"],
        stop_when_stationary=c["sim2d.stop_when_stationary"],
    )
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        res = pde2d.simulate2d(cfg)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    ctx.manifest["resolved.dt"] = res.dt
    for idx, snap in enumerate(res.snapshots):
        tag = "final" if idx == len(res.snapshots) - 1 else f"{idx:05d}"
        meta = {**ctx.manifest, "time": snap.time, "step": snap.step}
        for sp in ("u", "v"):
            io.write_matrix(ctx.path(f"{sp}_{tag}.txt"), getattr(snap, sp), snap.spacing, snap.time, meta)
        if c["sim2d.raster"]:
            io.write_field_raster(ctx.path(f"u_{tag}.pgm"), snap.u, {"time": snap.time})
    ref = None
    try:
        ref = eqm.p2(p).u
    except NoEquilibriumError:
        pass
    rep = analysis.pattern_report(res.final, band=_band(p), reference=ref)
    meta = {**ctx.manifest, "stationary_at": res.stationary_at, "final_time": res.final.time}
    _write_report(ctx.path("report.txt"), rep, meta)
    return [f"morphology={fmt(rep.morphology)}", f"amplitude={fmt(rep.amplitude)}", f"stationary_at={fmt(res.stationary_at)}"]


def _load_field(path: Path):
    with open(path) as fh:
        first = next((line for line in fh if not line.startswith("#")), "")
    if first.startswith("x,"):
        _, x, u, v = io.read_snapshot_csv(path)
        return pde1d.Field1D(x, u, v, 0.0)
    data, spacing, time, _ = io.read_matrix(path)
    v_path = path.with_name(path.name.replace("u_", "v_", 1))
    v = io.read_matrix(v_path)[0] if v_path.exists() and v_path != path else np.full_like(data, math.nan)
    ny, nx = data.shape
    return pde2d.Field2D(nx, ny, spacing, data, v, time)


def cmd_analyze(ctx: Context) -> list[str]:
    c = ctx.cfg
    p = None
    if all(c[f"params.{k}"] is not None for k in "ACQS"):
        p = _params(c)
    band = _band(p) if p is not None else None
    ref = None
    if p is not None:
        try:
            ref = _point(c["analyze.reference"], p)[0]
        except NoEquilibriumError:
            ref = None
    reports = []
    for raw in c["analyze.inputs"].split(","):
        path = Path(raw.strip())
        try:
            f = _load_field(path)
        except (OSError, ValueError, IndexError) as exc:
            raise ConfigError(f"cannot read field {path}: {exc}") from exc
        rep = analysis.pattern_report(f, band=band, reference=ref)
        reports.append((str(path), rep))
    if len(reports) == 1:
        _write_report(ctx.path("report.txt"), reports[0][1], ctx.manifest)
    analysis.write_reports_csv(ctx.path("reports.csv"), reports)
    return [f"{name}: dominant_k={fmt(rep.dominant_k)} morphology={fmt(rep.morphology)}" for name, rep in reports]


def cmd_front(ctx: Context) -> list[str]:
    c = ctx.cfg
    p = _params(c)
    left, right = _point(c["front.left"], p), _point(c["front.right"], p)
    cfg = pde1d.front_config(
        p, left, right, c["front.t_end"], L=c["front.L"], n=c["front.n"] or None, record_interval=c["front.record_interval"]
    )
    rec = pde1d.run_front(cfg)
    ctx.manifest["resolved.n"] = cfg.n
    ctx.manifest["resolved.record_stride"] = cfg.record_stride
    for sp in ("u", "v"):
        io.write_spacetime_csv(ctx.path(f"spacetime_{sp}.csv"), rec.times, rec.x, getattr(rec, sp), ctx.manifest)
    level = None if math.isnan(c["front.level"]) else c["front.level"]
    rep = analysis.front_speed(rec, level, species=c["front.species"], allow_no_front=True)
    trains = analysis.wave_train_count(rec, rep.level, c["front.species"]) if rep.found else 0
    meta = {**ctx.manifest, "wave_trains": trains}
    _write_report(ctx.path("front.txt"), rep, meta)
    return [f"speed={fmt(rep.speed)}", f"found={fmt(rep.found)}", f"wave_trains={trains}"]


COMMANDS = {
    "equilibria": cmd_equilibria,
    "dispersion": cmd_dispersion,
    "turing-scan": cmd_turing_scan,
    "basin": cmd_basin,
    "sim1d": cmd_sim1d,
    "sim2d": cmd_sim2d,
    "analyze": cmd_analyze,
    "front": cmd_front,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hollingtanner", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--config", required=True, help="key=value configuration file")
    ap.add_argument("--out", default=".", help="output directory (created if missing)")
    ap.add_argument("--seed", type=int, default=None, help="random seed (unsigned 64-bit)")
    ap.add_argument("--threads", type=int, default=1, help="worker threads for scans (0 = all cores)")
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        if args.seed is not None and not 0 <= args.seed < 2**64:
            raise ConfigError("--seed must be an unsigned 64-bit integer")
        if args.threads < 0:
            raise ConfigError("--threads must be >= 0")
        threads = args.threads or (os.cpu_count() or 1)
        cfg = resolve(args.command, io.parse_config(args.config))
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        ctx = Context(args.command, cfg, out, args.seed, threads)
        lines = COMMANDS[args.command](ctx)
        io.write_manifest(ctx.path("manifest.txt"), ctx.manifest)
    except (ConfigError, ParameterError) as exc:
        print(f"{args.config}: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except HollingTannerError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    for line in lines:
        print(line)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
