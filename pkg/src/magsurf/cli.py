"""Command-line front end: reproducible runs with flat-file exports.

Subcommands
    integrate      integrate one magnetic geodesic, export CSV + manifest
    shoot          find a closed orbit by orientation-flip shooting
    singular       admissible directions at a lightlike point (+ ray fan)
    validate       run the built-in oracle battery
    list-surfaces  print the surface catalog

Every run is driven by a flat key-value configuration (dotted sections
allowed, e.g. ``integrator.rel_tol``) that can live in a file passed
with ``--config``; command-line flags override file values.  The JSON
manifest written by ``integrate`` is itself a valid ``--config`` input,
so a finished run reproduces its own trajectory byte-for-byte.

Trajectory CSV schema: ``t,u,v,x,y,z,speed_sq,drift`` with one row per
accepted step, 17 significant digits, ``.`` decimal separator, LF line
endings.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Optional


from .closure import ShootingFamily, orbit_report, shoot
from .dynamics import ParamState, speed_sq
from .errors import (
    BracketError,
    FlatPointError,
    LostCrossingError,
    MagsurfError,
    NotLightlikeError,
)
from .integrate import IntegratorConfig, StopReason, Trajectory, integrate
from .singular import (
    LightlikePointData,
    approach_fan_experiment,
    direction_report,
    maximal_enneper_lightlike_data,
)
from .surfaces import KappaField, SurfaceSpec, catalog, get_surface
from .validate import run_battery

__all__ = ["main", "parse_kappa", "write_trajectory_csv"]

EXIT_OK = 0
EXIT_VALIDATE_FAIL = 1
EXIT_CONFIG = 2
EXIT_BAD_STOP = 3
EXIT_BRACKET = 4
EXIT_SINGULAR_INPUT = 5


class ConfigError(Exception):
    """Invalid or missing run-configuration value (exit code 2)."""


# ---------------------------------------------------------------------------
# configuration plumbing


def _load_config_file(path: str) -> dict[str, str]:
    """Flat key-value config; JSON manifests are accepted transparently."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    stripped = text.lstrip()
    if stripped.startswith("{"):
        data = json.loads(text)
        return {str(k): _scalar_to_str(v) for k, v in data.items()}
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value, got {raw!r}")
        key, _, value = line.partition("=")
        out[key.strip()] = value.strip()
    return out


def _scalar_to_str(v) -> str:
    if isinstance(v, (list, tuple)):
        return ",".join(_scalar_to_str(x) for x in v)
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


# dotted-section aliases accepted in config files; flags use the bare name
_KEY_ALIASES = {
    "integrator.rel_tol": "rel_tol",
    "integrator.abs_tol": "abs_tol",
    "integrator.method": "method",
    "integrator.h": "h",
    "integrator.t_end": "t_end",
    "integrator.renormalize": "renormalize",
    "run.surface": "surface",
    "run.kappa": "kappa",
    "run.init": "init",
    "initial_state": "init",
    "shoot.family": "family",
    "shoot.horizon": "horizon",
    "shoot.tol": "tol",
    "shoot.track": "track",
}


def _merge_config(args: argparse.Namespace, keys: dict[str, type]) -> dict:
    """File values first, then flags; returns typed values for known keys."""
    raw: dict[str, str] = {}
    if getattr(args, "config", None):
        for k, v in _load_config_file(args.config).items():
            raw[_KEY_ALIASES.get(k, k)] = v
    merged: dict = {}
    for key, typ in keys.items():
        flag_val = getattr(args, key, None)
        if flag_val is not None:
            merged[key] = flag_val
        elif key in raw:
            merged[key] = _coerce(key, raw[key], typ)
    return merged


def _coerce(key: str, value: str, typ: type):
    try:
        if typ is bool:
            return value.lower() in ("1", "true", "yes", "on")
        return typ(value)
    except ValueError as exc:
        raise ConfigError(f"config key {key}: cannot parse {value!r} as {typ.__name__}") from exc


def _parse_floats(text: str, n: int, what: str) -> tuple[float, ...]:
    parts = [p for p in text.replace(" ", "").split(",") if p]
    if len(parts) != n:
        raise ConfigError(f"{what}: expected {n} comma-separated numbers, got {text!r}")
    try:
        vals = tuple(float(p) for p in parts)
    except ValueError as exc:
        raise ConfigError(f"{what}: {exc}") from exc
    if not all(math.isfinite(x) for x in vals):
        raise ConfigError(f"{what}: values must be finite")
    return vals


def parse_kappa(spec_str: str) -> KappaField:
    """Parse a kappa field spec: zero | const:V | sin-u[:SCALE] | table:FILE."""
    s = spec_str.strip()
    if s == "zero":
        return KappaField.zero()
    if s.startswith("const:"):
        return KappaField.constant(_parse_floats(s[6:], 1, "kappa const")[0])
    if s == "sin-u":
        return KappaField.sin_u(1.0)
    if s.startswith("sin-u:"):
        return KappaField.sin_u(_parse_floats(s[6:], 1, "kappa sin-u scale")[0])
    if s.startswith("table:"):
        path = s[6:]
        try:
            with open(path, "r", encoding="utf-8") as fh:
                data = json.load(fh)
            return KappaField.table(data["u_grid"], data["v_grid"], data["values"])
        except (OSError, KeyError, ValueError) as exc:
            raise ConfigError(f"kappa table {path}: {exc}") from exc
    raise ConfigError(
        f"unknown kappa spec {spec_str!r}: use zero, const:V, sin-u[:SCALE], or table:FILE"
    )


def _resolve_surface(name: Optional[str]) -> SurfaceSpec:
    if not name:
        raise ConfigError(
            "no surface given; valid names: " + ", ".join(s.name for s in catalog())
        )
    try:
        return get_surface(name)
    except KeyError:
        raise ConfigError(
            f"unknown surface {name!r}; valid names: "
            + ", ".join(s.name for s in catalog())
        ) from None


# ---------------------------------------------------------------------------
# exports


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_trajectory_csv(path: str, traj: Trajectory) -> None:
    """One row per accepted step: t,u,v,x,y,z,speed_sq,drift (17 sig digits)."""
    spec = get_surface(traj.surface)
    lines = ["t,u,v,x,y,z,speed_sq,drift"]
    for i in range(len(traj)):
        s = traj.state(i)
        ss = speed_sq(spec, s)
        drift = abs(ss - traj.c) / traj.c
        amb = traj.ambient[i]
        lines.append(",".join(_fmt(x) for x in
                              (traj.t[i], s.u, s.v, amb[0], amb[1], amb[2], ss, drift)))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _write_json(path: str, payload: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_gnuplot(path: str, csv_path: str, title: str) -> None:
    script = "\n".join([
        "set datafile separator ','",
        f"set title '{title}'",
        "set ticslevel 0",
        f"splot '{csv_path}' using 4:5:6 every ::1 with lines notitle",
        "pause -1",
    ])
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(script + "\n")


# ---------------------------------------------------------------------------
# subcommands


_INTEGRATE_KEYS = {
    "surface": str,
    "kappa": str,
    "init": str,
    "t_end": float,
    "method": str,
    "rel_tol": float,
    "abs_tol": float,
    "h": float,
    "renormalize": bool,
}


def cmd_integrate(args: argparse.Namespace) -> int:
    cfg = _merge_config(args, _INTEGRATE_KEYS)
    spec = _resolve_surface(cfg.get("surface"))
    kappa = parse_kappa(cfg.get("kappa", "zero"))
    if "init" not in cfg:
        raise ConfigError("missing initial state: --init u,v,du,dv")
    if "t_end" not in cfg:
        raise ConfigError("missing horizon: --t-end T")
    u, v, du, dv = _parse_floats(cfg["init"], 4, "init")
    s0 = ParamState(0.0, u, v, du, dv)
    try:
        icfg = IntegratorConfig(
            t_end=cfg["t_end"],
            method=cfg.get("method", "dp45"),
            rel_tol=cfg.get("rel_tol", 1e-10),
            abs_tol=cfg.get("abs_tol", 1e-12),
            h=cfg.get("h", 1e-2),
            renormalize=cfg.get("renormalize", False),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    traj = integrate(spec, kappa, s0, icfg)

    out = args.out
    csv_path, manifest_path = out + ".csv", out + ".json"
    write_trajectory_csv(csv_path, traj)
    manifest = {
        "surface": spec.name,
        "kappa": cfg.get("kappa", "zero"),
        "init": ",".join(_fmt(x) for x in (u, v, du, dv)),
        "t_end": icfg.t_end,
        "method": icfg.method,
        "rel_tol": icfg.rel_tol,
        "abs_tol": icfg.abs_tol,
        "h": icfg.h,
        "renormalize": icfg.renormalize,
        "c": traj.c,
        "stop_reason": traj.stop_reason.value,
        "drift_max": traj.drift_max,
        "sample_count": len(traj),
    }
    _write_json(manifest_path, manifest)
    if args.gnuplot:
        _write_gnuplot(out + ".gp", csv_path, f"{spec.name} magnetic geodesic")
    print(f"{spec.name}: {len(traj)} samples, stop = {traj.stop_reason.value}, "
          f"drift_max = {traj.drift_max:.3e}")
    print(f"wrote {csv_path}, {manifest_path}" + (f", {out}.gp" if args.gnuplot else ""))
    if traj.stop_reason not in (StopReason.REACHED_END, StopReason.DOMAIN_EXIT):
        return EXIT_BAD_STOP
    return EXIT_OK


_SHOOT_KEYS = {
    "surface": str,
    "kappa": str,
    "family": str,
    "horizon": float,
    "tol": float,
    "rel_tol": float,
    "abs_tol": float,
    "track": str,
}


def _angle_family(spec: SurfaceSpec, u0: float, v0: float,
                  th0: float, th1: float) -> ShootingFamily:
    """Unit-speed launches from (u0, v0) over a bracket of direction angles."""

    def gen(s: float) -> ParamState:
        th = th0 + (th1 - th0) * s
        raw = ParamState(0.0, u0, v0, math.sin(th), math.cos(th))
        scale = 1.0 / math.sqrt(speed_sq(spec, raw))
        return ParamState(0.0, u0, v0, raw.du * scale, raw.dv * scale)

    return ShootingFamily(
        generator=gen,
        description=f"angle family at ({u0}, {v0}), theta in [{th0}, {th1}]",
    )


def cmd_shoot(args: argparse.Namespace) -> int:
    cfg = _merge_config(args, _SHOOT_KEYS)
    spec = _resolve_surface(cfg.get("surface"))
    kappa = parse_kappa(cfg.get("kappa", "zero"))
    fam_spec = cfg.get("family")
    if not fam_spec:
        raise ConfigError("missing family: --family angle:u0,v0,theta0,theta1")
    if not fam_spec.startswith("angle:"):
        raise ConfigError(f"unknown family kind {fam_spec!r}: only angle:... is supported")
    u0, v0, th0, th1 = _parse_floats(fam_spec[6:], 4, "family angle")
    family = _angle_family(spec, u0, v0, th0, th1)
    track = None
    if cfg.get("track"):
        track = _parse_floats(cfg["track"], 2, "track")
    icfg = IntegratorConfig(
        t_end=cfg.get("horizon", 40.0),
        rel_tol=cfg.get("rel_tol", 1e-9),
        abs_tol=cfg.get("abs_tol", 1e-11),
    )
    try:
        orbit = shoot(spec, kappa, family,
                      horizon=cfg.get("horizon"),
                      tol=cfg.get("tol", 1e-6),
                      integrator=icfg,
                      track=track)
    except (BracketError, LostCrossingError) as exc:
        print(f"shooting failed: {exc}", file=sys.stderr)
        return EXIT_BRACKET

    report = orbit_report(spec, orbit)
    report["s_star"] = orbit.s_star
    report["surface"] = spec.name
    report["kappa"] = cfg.get("kappa", "zero")
    report["family"] = family.description
    out = args.out
    write_trajectory_csv(out + ".csv", orbit.trajectory)
    _write_json(out + ".json", report)
    if args.gnuplot:
        _write_gnuplot(out + ".gp", out + ".csv", f"{spec.name} closed orbit")
    print(f"closed orbit: s* = {orbit.s_star:.12g}, period = {orbit.period:.12g}, "
          f"position residual = {orbit.position_residual:.3e}, "
          f"velocity residual = {orbit.velocity_residual:.3e}")
    print(f"wrote {out}.csv, {out}.json" + (f", {out}.gp" if args.gnuplot else ""))
    return EXIT_OK


def cmd_singular(args: argparse.Namespace) -> int:
    if args.hessian is not None:
        h = _parse_floats(args.hessian, 3, "hessian")
        g = _parse_floats(args.gradient, 2, "gradient") if args.gradient else (1.0, 0.0)
        p = _parse_floats(args.point, 2, "point") if args.point else (0.0, 0.0)
        try:
            data = LightlikePointData(point=p, gradient=g, hessian=h)
        except (NotLightlikeError, ValueError) as exc:
            print(f"invalid lightlike data: {exc}", file=sys.stderr)
            return EXIT_SINGULAR_INPUT
    elif args.chart_point is not None:
        cp = _parse_floats(args.chart_point, 2, "chart-point")
        try:
            data = maximal_enneper_lightlike_data(cp)
        except NotLightlikeError as exc:
            print(f"invalid chart point: {exc}", file=sys.stderr)
            return EXIT_SINGULAR_INPUT
    else:
        raise ConfigError("need --hessian a,b,c or --chart-point u,v")

    try:
        rep = direction_report(data)
    except (FlatPointError, NotLightlikeError) as exc:
        print(f"no direction report: {exc}", file=sys.stderr)
        return EXIT_SINGULAR_INPUT

    payload = {
        "point": list(data.point),
        "gradient": list(data.gradient),
        "hessian": list(data.hessian),
        "case": rep.case,
        "angles": list(rep.angles),
        "lightlike_pair": list(rep.lightlike_pair),
        "rotation": rep.rotation,
    }
    out = args.out
    _write_json(out + ".json", payload)
    print(f"case {rep.case}: {len(rep.angles)} admissible angles")
    for a in rep.angles:
        print(f"  {a:.12f}")
    print(f"wrote {out}.json")

    if args.fan:
        if args.chart_point is None:
            raise ConfigError("--fan requires --chart-point (the fan runs in the chart)")
        spec = get_surface("maximal-enneper")
        kappa = parse_kappa(args.kappa or "const:1")
        fan = approach_fan_experiment(spec, tuple(cp), kappa,
                                      n_rays=args.fan, offset=args.offset)
        lines = ["angle,stop_reason,closest_distance,t_closest,"
                 "min_conformal_factor,identity_violation"]
        for r in fan.rays:
            lines.append(",".join([
                _fmt(r.angle), r.stop_reason.value, _fmt(r.closest_distance),
                _fmt(r.t_closest),
                _fmt(r.min_conformal_factor) if r.min_conformal_factor is not None else "",
                _fmt(r.conformal_identity_violation)
                if r.conformal_identity_violation is not None else "",
            ]))
        with open(out + "_fan.csv", "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
        print(f"fan: {len(fan.rays)} rays, closest approach = {fan.closest_overall():.3e}")
        print(f"wrote {out}_fan.csv")
    return EXIT_OK


def cmd_validate(_args: argparse.Namespace) -> int:
    results = run_battery()
    for r in results:
        print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_VALIDATE_FAIL


def cmd_list_surfaces(_args: argparse.Namespace) -> int:
    for s in catalog():
        tags = [s.signature.name.lower()]
        if s.conformal is not None:
            tags.append("conformal")
        pu, pv = s.periods
        if pu or pv:
            tags.append(f"periods ({pu}, {pv})")
        print(f"{s.name:18s} {', '.join(tags)}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="magsurf",
        description="Magnetic geodesics on parametrized surfaces.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("integrate", help="integrate one magnetic geodesic")
    p.add_argument("--config", help="key=value config file or a previous manifest JSON")
    p.add_argument("--surface", help="catalog surface name")
    p.add_argument("--kappa", help="zero | const:V | sin-u[:SCALE] | table:FILE")
    p.add_argument("--init", help="u,v,du,dv")
    p.add_argument("--t-end", dest="t_end", type=float, help="integration horizon")
    p.add_argument("--method", choices=("dp45", "rk4"))
    p.add_argument("--rel-tol", dest="rel_tol", type=float)
    p.add_argument("--abs-tol", dest="abs_tol", type=float)
    p.add_argument("--h", type=float, help="initial (dp45) or fixed (rk4) step")
    p.add_argument("--renormalize", action="store_const", const=True, default=None)
    p.add_argument("--out", default="trajectory", help="output prefix")
    p.add_argument("--gnuplot", action="store_true", help="also write a gnuplot script")
    p.set_defaults(func=cmd_integrate)

    p = sub.add_parser("shoot", help="find a closed orbit by shooting")
    p.add_argument("--config")
    p.add_argument("--surface")
    p.add_argument("--kappa")
    p.add_argument("--family", help="angle:u0,v0,theta0,theta1 (unit-speed launches)")
    p.add_argument("--horizon", type=float)
    p.add_argument("--tol", type=float)
    p.add_argument("--rel-tol", dest="rel_tol", type=float)
    p.add_argument("--abs-tol", dest="abs_tol", type=float)
    p.add_argument("--track", help="t1,t2 seed for crossing continuation")
    p.add_argument("--out", default="orbit", help="output prefix")
    p.add_argument("--gnuplot", action="store_true")
    p.set_defaults(func=cmd_shoot)

    p = sub.add_parser("singular", help="admissible directions at a lightlike point")
    p.add_argument("--hessian", help="f_uu,f_uv,f_vv")
    p.add_argument("--gradient", help="f_u,f_v (unit; default 1,0)")
    p.add_argument("--point", help="graph point x,y (metadata only)")
    p.add_argument("--chart-point", dest="chart_point",
                   help="maximal-enneper chart point u,v on the singular circle")
    p.add_argument("--fan", type=int, help="also launch N rays at the point")
    p.add_argument("--offset", type=float, default=0.1, help="fan launch radius")
    p.add_argument("--kappa", help="kappa spec for the fan (default const:1)")
    p.add_argument("--out", default="singular", help="output prefix")
    p.set_defaults(func=cmd_singular)

    p = sub.add_parser("validate", help="run the oracle battery")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("list-surfaces", help="print the surface catalog")
    p.set_defaults(func=cmd_list_surfaces)

    return ap


def main(argv: Optional[list[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except MagsurfError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
