"""Command-line entry point: ``exactflow COMMAND [--config PATH] [flags]``.

Exit codes: 0 all checks passed, 1 a check failed, 2 bad config or usage,
3 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__, config as cfg
from ._rational import as_rational, rational_str
from .ansatz import (LinearAnsatz, ansatz_of, induced_potential, match_family, reduce_continuity,
                     reduce_momentum)
from .blowup import classify
from .errors import (ConfigError, DomainError, ExactFlowError, InputError, ParameterError,
                     PositivityError, SamplingError, SetupError, StepError,
                     UnsupportedSymbolicError)
from .fields import (ABCFlow, CompressibleIsothermal, CompressiblePoly, IncompressibleA,
                     IncompressibleB, Pressureless, TimeFunction, family_from_dict)
from .fields.diagnostics import integrate_diagnostics
from .fields.families import INCOMPRESSIBLE, _RotationalCompressible
from .residuals import SamplingBox, residual_scan, rows_to_csv
from .solver import GridSpec, run_convergence, simulate, snapshot_fields, write_structured_points
from .symbolic import symbolic_verify

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

_USAGE_ERRORS = (ConfigError, ParameterError, InputError, UnsupportedSymbolicError, DomainError,
                 SamplingError)
_RUN_ERRORS = (SetupError, StepError, PositivityError)


def _tf(*coefficients):
    return TimeFunction.polynomial(*coefficients)


def default_families(command: str) -> list:
    """Families used when the config names none."""
    half = Fraction(1, 2)
    symbolic = [
        CompressiblePoly(gamma=2, K=1, C=1, c0=1, c1=2, c2=0),
        CompressibleIsothermal(K=2, C=1, c0=1, c1=half, c2=1),
        IncompressibleA(C=2, a=(_tf(1, 2, 3), _tf(0, 1), _tf(-1, 0, 1)), b=_tf(1)),
        IncompressibleB(C=1, a=(_tf(1, 1), _tf(2), _tf(0, 0, 1)), b=_tf(0)),
    ]
    if command == "verify-symbolic":
        return symbolic
    if command in ("residual-scan", "eval"):
        return symbolic + [ABCFlow(A=1, B=1, C=1),
                           Pressureless(a0=(1, 2, 1), a1=(half, 1, 2), d=(0, 0, 0),
                                        profile="gaussian")]
    if command == "reduce":
        return symbolic
    if command == "converge":
        return [CompressiblePoly(gamma=2, K=1, C=1, c0=0, c1=half, c2=20)]
    if command == "diagnostics":
        return [CompressiblePoly(gamma=2, K=1, C=1, c0=0, c1=0, c2=0)]
    if command == "blowup":
        zero = TimeFunction.constant(0)
        return [CompressiblePoly(),
                IncompressibleA(C=1, a=(TimeFunction.rational_pole(1, 2, 1), zero, zero), b=zero),
                IncompressibleA(C=1, a=(TimeFunction.power_ramp(1, 1, half), zero, zero), b=zero),
                Pressureless(a0=(1, 1, 1), a1=(-1, 0, 0), d=(0, 0, 0), profile="gaussian")]
    raise ConfigError(f"unknown command {command!r}")


def _families(conf):
    if "families" in conf:
        return [family_from_dict(d) for d in conf["families"]]
    return default_families(conf["command"])


def _json_default(v):
    if isinstance(v, Fraction):
        return rational_str(v)
    if isinstance(v, np.generic):
        return v.item()
    if isinstance(v, np.ndarray):
        return v.tolist()
    raise TypeError(f"cannot serialise {type(v).__name__}")


# -- commands ---------------------------------------------------------------------


def cmd_eval(conf, families):
    sec = conf["eval"]
    pts = np.array(sec["points"], dtype=float)
    results, rows = [], []
    for fam in families:
        entries = []
        for p in pts:
            t, x = float(p[0]), p[1:]
            if sec["jet"]:
                jet = fam.evaluate_jet(t, x)
                st = jet.state
                extra = {"grad_u": jet.grad_u.tolist(), "grad_phi": jet.grad_phi.tolist(),
                         "u_t": jet.u_t.tolist(), "phi_t": float(jet.phi_t),
                         "lap_u": jet.lap_u.tolist(), "div_u": float(jet.div_u),
                         "vorticity": jet.vorticity.tolist()}
            else:
                st, extra = fam.evaluate(t, x), {}
            entry = {"t": t, "x": x.tolist(), "rho": float(st.rho), "u": st.u.tolist(),
                     "phi": float(st.phi), "P": float(st.P), **extra}
            entries.append(entry)
            rows.append({"family": fam.tag, "t": t, "x": x[0], "y": x[1], "z": x[2],
                         "rho": entry["rho"], "ux": entry["u"][0], "uy": entry["u"][1],
                         "uz": entry["u"][2], "phi": entry["phi"], "P": entry["P"]})
        results.append({"family": fam.to_dict(), "points": entries})
    return True, results, {"eval.csv": rows_to_csv(rows)}


def cmd_residual_scan(conf, families):
    sec, tol = conf["sampling"], conf["tolerances"]["residual"]
    box = SamplingBox(tuple(sec["t"]), tuple(tuple(r) for r in sec["x"]))
    results, rows, ok = [], [], True
    for fam in families:
        rep = residual_scan(fam, box, sec["samples"], seed=conf["seed"], mu=sec["viscosity"],
                            threads=conf["threads"])
        passed = rep.passed(tol)
        ok &= passed
        results.append({**rep.to_dict(), "tolerance": tol, "passed": passed})
        rows += rep.csv_rows()
    return ok, results, {"residuals.csv": rows_to_csv(rows)}


def cmd_verify_symbolic(conf, families):
    results, rows, ok = [], [], True
    for fam in families:
        res = symbolic_verify(fam)
        zero = res.all_zero()
        ok &= zero
        results.append({"family": fam.to_dict(), "all_zero": zero, "residual": res.to_dict()})
        polys = res.to_dict()
        rows.append({"family": fam.tag, "continuity": polys["continuity"],
                     **{f"momentum_{c}": m for c, m in zip("xyz", polys["momentum"])}})
    summary = {"residual_polynomials": "all-zero" if ok else "nonzero"}
    return ok, results, {"symbolic.csv": rows_to_csv(rows)}, summary


def _ansatz_from_config(sec):
    a = tuple(TimeFunction.from_dict(d) for d in sec["a"])
    B = tuple(tuple(TimeFunction.from_dict(d) for d in row) for row in sec["B"])
    b = TimeFunction.from_dict(sec["b"]) if "b" in sec else TimeFunction.constant(0)
    gamma = sec.get("gamma")
    return LinearAnsatz(a, B), b, None if gamma is None else as_rational(gamma), {"ansatz": sec}


def _ansatz_from_family(fam):
    if isinstance(fam, _RotationalCompressible):
        return ansatz_of(fam), fam.b_function(), fam.gamma, {"family": fam.to_dict()}
    if fam.regime == INCOMPRESSIBLE and fam.linear_velocity:
        return ansatz_of(fam), fam.b, None, {"family": fam.to_dict()}
    raise ParameterError(f"{fam.tag} has no linear velocity ansatz")


def cmd_reduce(conf, families):
    sec, tol = conf["reduce"], conf["tolerances"]["continuity"]
    times = [as_rational(t) if isinstance(t, str) or float(t).is_integer() else float(t)
             for t in sec["times"]]
    cases = ([_ansatz_from_config(sec["ansatz"])] if "ansatz" in sec
             else [_ansatz_from_family(f) for f in families])
    results, ok = [], True
    for ans, b, gamma, origin in cases:
        match = match_family(ans)
        entries = []
        for t in times:
            mom = reduce_momentum(ans, t)
            entry = {"t": t if isinstance(t, float) else rational_str(t),
                     "momentum": mom.to_dict()}
            good = mom.admits_gradient()
            if good:
                pot = induced_potential(ans, b, t) if gamma is not None else None
                cont = reduce_continuity(ans, pot, gamma, t)
                entry["continuity"] = cont.to_dict()
                good = cont.vanishes(tol)
            entry["exact_solution"] = good
            ok &= good
            entries.append(entry)
        results.append({**origin, "match": None if match is None else match.to_dict(),
                        "times": entries})
    return ok, results, {}


def cmd_converge(conf, families):
    sec, tol = conf["converge"], conf["tolerances"]
    results, ok, tables = [], True, {}
    for k, fam in enumerate(families):
        grids = [GridSpec((n,) * 3, sec["lo"], sec["hi"]) for n in sec["grids"]]
        try:
            table = run_convergence(fam, grids, sec["t_final"], sec["cfl"], t0=sec["t0"],
                                    rho_floor=sec["rho_floor"])
        except _RUN_ERRORS as exc:
            ok = False
            results.append({"family": fam.to_dict(), "error": f"{type(exc).__name__}: {exc}",
                            "passed": False})
            continue
        orders = table.orders("L1")
        finest = orders[-1] if orders else None
        decreasing = table.strictly_decreasing("L1")
        in_band = finest is not None and tol["order_min"] <= finest <= tol["order_max"]
        passed = decreasing and in_band if len(table.rows) > 1 else True
        ok &= passed
        results.append({**table.to_dict(sec["include_timing"]), "finest_L1_order": finest,
                        "L1_strictly_decreasing": decreasing, "passed": passed})
        suffix = "" if len(families) == 1 else f"_{k}"
        tables[f"convergence{suffix}.csv"] = table.to_csv(sec["include_timing"])
        if sec["vtk"]:
            grid = table.rows[-1].grid
            state, _ = simulate(fam, grid, sec["t0"], sec["t_final"], sec["cfl"],
                                sec["rho_floor"])
            tables[f"snapshot{suffix}.vtk"] = (grid, snapshot_fields(state))
    return ok, results, tables


def cmd_blowup(conf, families):
    results, rows = [], []
    for fam in families:
        verdict = classify(fam).to_dict()
        results.append({"family": fam.to_dict(), "verdict": verdict})
        rows.append({"family": fam.tag, **verdict})
    return True, results, {"blowup.csv": rows_to_csv(rows)}


def cmd_diagnostics(conf, families):
    sec, tol = conf["diagnostics"], conf["tolerances"]["exponent"]
    results, rows, ok = [], [], True
    for fam in families:
        ints = integrate_diagnostics(fam, sec["t"], sec["radii"], sec["shells"], sec["polar"],
                                     sec["azimuthal"])
        entry = {"family": fam.to_dict(), "radii": ints.radii.tolist(),
                 "mass": ints.mass.tolist(), "kinetic_energy": ints.kinetic_energy.tolist(),
                 "mass_exponent": ints.mass_exponent(),
                 "energy_exponent": ints.energy_exponent()}
        for kind in ("mass", "energy"):
            want = sec.get(f"expected_{kind}_exponent")
            if want is not None:
                good = abs(entry[f"{kind}_exponent"] - want) <= tol
                entry[f"{kind}_exponent_passed"] = good
                ok &= good
        results.append(entry)
        rows += [{"family": fam.tag, "R": R, "mass": m, "kinetic_energy": e}
                 for R, m, e in zip(entry["radii"], entry["mass"], entry["kinetic_energy"])]
    return ok, results, {"diagnostics.csv": rows_to_csv(rows)}


COMMANDS = {
    "eval": cmd_eval,
    "residual-scan": cmd_residual_scan,
    "verify-symbolic": cmd_verify_symbolic,
    "reduce": cmd_reduce,
    "converge": cmd_converge,
    "blowup": cmd_blowup,
    "diagnostics": cmd_diagnostics,
}
# converge emits its table regardless of --format
_ALWAYS_WRITTEN = ("convergence", "snapshot")


def run(conf: dict) -> tuple[int, dict]:
    """Execute a resolved config; returns ``(exit_code, report)`` without touching disk."""
    outcome = COMMANDS[conf["command"]](conf, _families(conf))
    ok, results, artifacts = outcome[:3]
    summary = outcome[3] if len(outcome) > 3 else {}
    report = {"exactflow": __version__, "command": conf["command"], "passed": bool(ok),
              **summary, "config": {k: v for k, v in conf.items() if k != "out"},
              "results": results}
    return (EXIT_OK if ok else EXIT_FAILED), {"report": report, "artifacts": artifacts}


def write_outputs(out_dir, report: dict, artifacts: dict, fmt: str) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "report.json"
    path.write_text(json.dumps(report, indent=2, default=_json_default, allow_nan=True) + "\n")
    written = [path]
    for name, payload in artifacts.items():
        if fmt != "csv" and not name.startswith(_ALWAYS_WRITTEN):
            continue
        target = out / name
        if isinstance(payload, tuple):
            write_structured_points(target, *payload)
        elif payload:
            target.write_text(payload)
        else:
            continue
        written.append(target)
    return written


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="exactflow", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=cfg.COMMANDS)
    p.add_argument("--config", type=Path, help="JSON run configuration")
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int)
    p.add_argument("--out", help="output directory (default exactflow-out)")
    p.add_argument("--format", choices=cfg.FORMATS)
    p.add_argument("--version", action="version", version=f"exactflow {__version__}")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        doc = cfg.load(args.config) if args.config else {}
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if doc.get("command", args.command) != args.command:
        print(f"error: config is for {doc['command']!r}, not {args.command!r}", file=sys.stderr)
        return EXIT_USAGE
    overrides = {"command": args.command, "seed": args.seed, "threads": args.threads,
                 "out": args.out, "format": args.format}
    try:
        conf = cfg.resolve(doc, overrides)
        code, result = run(conf)
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ExactFlowError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILED
    try:
        written = write_outputs(conf["out"], result["report"], result["artifacts"],
                                conf["format"])
    except OSError as exc:
        print(f"error: cannot write outputs: {exc}", file=sys.stderr)
        return EXIT_IO
    status = "passed" if code == EXIT_OK else "FAILED"
    print(f"{args.command}: {status} ({', '.join(str(p) for p in written)})")
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
