"""Command line entry point: ``nil3 <subcommand> [flags]``.

Exit codes: 0 all checks pass, 1 a verification failed, 2 invalid usage.
Any flag may instead come from ``--config FILE`` (flat ``key = value``
lines, keys spelled like the flags); flags given on the command line win.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import barrier as bar
from . import core
from . import mesh as meshio
from . import oracle
from . import revolution as rev
from . import sweep as sw

PASS, FAIL, USAGE = 0, 1, 2

DEFAULTS = {
    "tau": 0.0,
    "c": None,
    "rho": 1.0,
    "surface": None,
    "grid": None,
    "eps": None,
    "delta": None,
    "t_min": None,
    "t_max": None,
    "tol": 1e-6,
    "out": None,
    "points": 16,
}


class UsageError(Exception):
    pass


def _grid(text, default):
    if text is None:
        return default
    try:
        a, b = str(text).lower().split("x")
        n, m = int(a), int(b)
    except ValueError:
        raise UsageError(f"--grid expects NxM, got {text!r}") from None
    if n < 1 or m < 1:
        raise UsageError("--grid sizes must be positive")
    return n, m


def _resolve(args) -> dict:
    """Merge defaults < config file < explicit flags."""
    merged = dict(DEFAULTS)
    if getattr(args, "config", None) and args.command != "sweep":
        try:
            text = Path(args.config).read_text(encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from None
        for k, v in sw.parse_config_text(text).items():
            k = k.replace("-", "_")
            if k not in merged:
                raise UsageError(f"unknown config key {k!r}")
            merged[k] = v
    for k in DEFAULTS:
        v = getattr(args, k, None)
        if v is not None:
            merged[k] = v
    for k in ("tau", "c", "rho", "eps", "delta", "t_min", "t_max", "tol"):
        if merged[k] is not None:
            try:
                merged[k] = float(merged[k])
            except ValueError:
                raise UsageError(f"--{k.replace('_', '-')} must be a number") from None
    merged["points"] = int(merged["points"])
    try:
        merged["amb"] = core.AmbientParams(merged["tau"])
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return merged


def _write(out, data: bytes | str, stdout):
    if isinstance(data, str):
        data = data.encode("utf-8")
    if out is None:
        stdout.write(data.decode("utf-8"))
    else:
        Path(out).write_bytes(data)


# -- meridian selection -------------------------------------------------------------


def _meridian(cfg) -> rev.Meridian:
    name = cfg["surface"] or "cosh"
    if name == "cosh":
        return rev.cosh_meridian(-np.inf)
    if name == "exp":
        return rev.exp_meridian(-np.inf)
    if name == "quadratic":
        return rev.quadratic_meridian(-np.inf)
    if name == "cylinder":
        return rev.cylinder_meridian(cfg["rho"], -np.inf)
    if name in ("catenoid", "euclidean_catenoid"):
        if cfg["rho"] <= 0:
            raise UsageError("--rho must be positive")
        return rev.catenoid_meridian(cfg["rho"], -np.inf)
    if name == "barrier":
        if cfg["c"] is None:
            raise UsageError("barrier surfaces need --c")
        try:
            return bar.barrier_meridian(bar.BarrierParams(cfg["c"], cfg["amb"].tau))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    raise UsageError(f"unknown surface {name!r}")


# -- subcommands ----------------------------------------------------------------------


def cmd_verify_frame(cfg, stdout) -> int:
    amb = cfg["amb"]
    rng = np.random.default_rng(0)
    pts = rng.uniform(-3, 3, size=(cfg["points"], 3))
    ortho = max(core.orthonormality_defect(p, amb) for p in pts)
    torsion = max(core.torsion_defect(p, amb) for p in pts)
    compat = core.compatibility_defect(amb)
    kappa = core.bundle_curvature(amb)
    checks = {
        "orthonormality": ortho <= 1e-12,
        "torsion_free": torsion <= 1e-8,
        "metric_compatible": compat <= 1e-8,
        "bundle_curvature": kappa == amb.tau,
    }
    report = {
        "tau": amb.tau,
        "points": cfg["points"],
        "max_orthonormality_defect": ortho,
        "max_torsion_defect": torsion,
        "max_compatibility_defect": compat,
        "bundle_curvature": kappa,
        **{f"check_{k}": v for k, v in checks.items()},
        "pass": all(checks.values()),
    }
    _write(cfg["out"], meshio.emit_report(report), stdout)
    return PASS if report["pass"] else FAIL


def cmd_curvature(cfg, stdout) -> int:
    amb = cfg["amb"]
    m = _meridian(cfg)
    n_t, n_phi = _grid(cfg["grid"], (64, 64))
    t_lo = 0.1 if cfg["t_min"] is None else cfg["t_min"]
    t_hi = 2.0 if cfg["t_max"] is None else cfg["t_max"]
    if m.name.startswith("barrier"):
        t_lo = max(t_lo, 0.0)
        if cfg["t_max"] is None:
            t_hi = min(t_hi, bar.certification_limit(cfg["c"]))
    if not t_hi > t_lo:
        raise UsageError("need t-max > t-min")
    policy = oracle.NumericDiffPolicy(1e-4)
    try:
        m.check_domain(np.array([t_lo, t_hi]))
        t = np.linspace(t_lo, t_hi, n_t)
        phi = np.linspace(0.0, 2 * np.pi, n_phi, endpoint=False)
        T, P = np.meshgrid(t, phi, indexing="ij")
        Hc = rev.mean_curvature(m, T, P, amb)
        _, W = rev.normal(m, T, P, amb)
        srf = oracle.revolution_surface(m, (m.t_min, m.t_max))
        Ho = oracle.numeric_mean_curvature(srf, T, P, policy, amb)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    diff = np.abs(Hc - Ho)
    rel = diff / np.maximum(1.0, np.abs(Hc))
    table = meshio.FieldTable.from_arrays(["t", "phi", "H_closed", "H_oracle", "abs_diff", "W"],
                                          T, P, Hc, Ho, diff, W)
    _write(cfg["out"], meshio.emit_csv(table), stdout)
    ok = bool(np.all(np.isfinite(rel)) and rel.max() <= cfg["tol"])
    if m.name.startswith("barrier"):
        ok = ok and bool(np.all(Hc <= 0))
    return PASS if ok else FAIL


def cmd_certify(cfg, stdout) -> int:
    if cfg["c"] is None:
        raise UsageError("certify needs --c")
    try:
        p = bar.BarrierParams(cfg["c"], cfg["amb"].tau, t_max=cfg["t_max"])
        n_t, n_phi = _grid(cfg["grid"], (256, 256))
        rep = bar.certify(p, n_t, n_phi)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    text = meshio.emit_report(rep)
    stdout.write(text)
    if cfg["out"] is not None:
        s = rep.samples
        table = meshio.FieldTable.from_arrays(["t", "phi", "H"], s["t"], s["phi"], s["H"])
        Path(cfg["out"]).write_bytes(meshio.emit_csv(table))
    return PASS if rep.passed else FAIL


def cmd_sweep(args, stdout) -> int:
    if not args.config:
        raise UsageError("sweep needs --config FILE")
    try:
        items = sw.parse_config_text(Path(args.config).read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(f"cannot read config: {exc}") from None
    for flag, key in (("tau", "tau"), ("eps", "epsilon"), ("delta", "delta"), ("t_max", "t_max")):
        v = getattr(args, flag, None)
        if v is not None:
            items[key] = v
    try:
        cfg = sw.SweepConfig.from_mapping(items)
        S = sw.build_test_surface(cfg)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        rep = sw.run_sweep(cfg, S)
    except sw.NonMinimalSurface as exc:
        stdout.write(f"error: {exc}\n")
        return FAIL
    text = meshio.emit_report(rep)
    if args.out is None:
        stdout.write(text)
        return PASS
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.txt").write_text(text, encoding="utf-8")
    (out / "clearance.csv").write_bytes(meshio.emit_csv(rep.clearance_table()))
    if args.obj:
        param = rep.first_contact if rep.first_contact is not None else rep.clearance_curve[-1][0]
        shifted = sw.shift_toward_plane(S, cfg.epsilon)
        (out / "surface.obj").write_bytes(meshio.emit_obj(shifted.mesh))
        (out / "family.obj").write_bytes(meshio.emit_obj(sw.family_mesh(cfg, param)))
    stdout.write(text)
    return PASS


def cmd_mesh(cfg, stdout) -> int:
    name = cfg["surface"] or "barrier"
    n_t, n_phi = _grid(cfg["grid"], (32, 64))
    try:
        if name == "vertical_plane":
            srf = oracle.vertical_plane(0.0 if cfg["eps"] is None else cfg["eps"],
                                        cfg["t_max"] or 1.0)
            mesh = meshio.mesh_parametric(srf, (n_t, n_phi))
        else:
            m = _meridian(cfg)
            t_lo = 0.0 if cfg["t_min"] is None else cfg["t_min"]
            t_hi = 1.0 if cfg["t_max"] is None else cfg["t_max"]
            if not t_hi > t_lo:
                raise UsageError("need t-max > t-min")
            mesh = meshio.mesh_revolution(m, (t_lo, t_hi), (n_t, n_phi))
        mesh.validate()
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _write(cfg["out"], meshio.emit_obj(mesh), stdout)
    return PASS


# -- parser ----------------------------------------------------------------------------------


def _common(p, *flags):
    spec = {
        "tau": dict(type=str, help="bundle curvature tau >= 0"),
        "c": dict(type=str, help="barrier parameter c > 4 tau^2 + 2 tau + 1"),
        "rho": dict(type=str, help="catenoid necksize / cylinder radius"),
        "surface": dict(help="surface name"),
        "grid": dict(help="sample grid NxM"),
        "eps": dict(type=str, help="shift epsilon (sweep) / plane offset (mesh)"),
        "delta": dict(type=str, help="contact tolerance"),
        "t_min": dict(type=str, help="lower parameter bound"),
        "t_max": dict(type=str, help="upper parameter bound / truncation"),
        "tol": dict(type=str, help="relative tolerance"),
        "out": dict(help="output path (stdout if omitted)"),
        "points": dict(type=str, help="number of random sample points"),
    }
    for f in flags:
        p.add_argument("--" + f.replace("_", "-"), dest=f, default=None, **spec[f])
    p.add_argument("--config", default=None, help="flat key = value file")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nil3", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    _common(sub.add_parser("verify-frame", help="frame and connection self checks"),
            "tau", "points", "out")
    _common(sub.add_parser("curvature", help="closed-form vs oracle mean curvature CSV"),
            "tau", "c", "rho", "surface", "grid", "t_min", "t_max", "tol", "out")
    _common(sub.add_parser("certify", help="certify H <= 0 for a barrier"),
            "tau", "c", "grid", "t_max", "out")
    sp = sub.add_parser("sweep", help="run a barrier sweep from a config file")
    _common(sp, "tau", "eps", "delta", "t_max", "out")
    sp.add_argument("--obj", action="store_true", help="also write contact-time meshes")
    _common(sub.add_parser("mesh", help="write an OBJ mesh"),
            "tau", "c", "rho", "surface", "grid", "eps", "t_min", "t_max", "out")
    return ap


def main(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and USAGE
    try:
        if args.command == "sweep":
            return cmd_sweep(args, stdout)
        cfg = _resolve(args)
        handler = {
            "verify-frame": cmd_verify_frame,
            "curvature": cmd_curvature,
            "certify": cmd_certify,
            "mesh": cmd_mesh,
        }[args.command]
        return handler(cfg, stdout)
    except UsageError as exc:
        sys.stderr.write(f"nil3: error: {exc}\n")
        return USAGE
    except OSError as exc:
        sys.stderr.write(f"nil3: error: {exc}\n")
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
