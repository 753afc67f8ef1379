"""Command-line front end.

    gravbose spherical --nodes 0
    gravbose atmosphere --mu 1 --bc adhesion --f1 0.01
    gravbose atmosphere --mu 1 --bc non-adhesion --target-I 1
    gravbose ring --l 1
    gravbose scales --species hydrogen --N 6.02214076e23
    gravbose reproduce tables

The summary goes to stdout (``--format json``, the default) or the main
profile does (``--format csv``). Files are written only when an output
directory is given by ``--output-dir`` or the ``GRAVBOSE_OUTPUT_DIR``
environment variable.

Exit status: 0 success, 2 solver failure, 3 invalid arguments.
"""

from __future__ import annotations

import argparse
import io
import json
import logging
import math
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import reference, scales
from .atmosphere import BC_KINDS, solve_atmosphere, solve_atmosphere_for_mass
from .errors import DomainError, GravBoseError
from .ring import solve_ring
from .ring.solver import RingGrid
from .spherical import MAX_NODES, shoot_spherical

__all__ = ["main", "build_parser", "SCHEMA_VERSION", "SUMMARY_SCHEMAS", "EXIT_OK", "EXIT_SOLVER", "EXIT_USAGE"]

log = logging.getLogger("gravbose")

EXIT_OK = 0
EXIT_SOLVER = 2
EXIT_USAGE = 3
SCHEMA_VERSION = "1"
OUTPUT_ENV = "GRAVBOSE_OUTPUT_DIR"
CSV_FORMAT = "%.12e"
_UMASK = os.umask(0)
os.umask(_UMASK)


def _summary_schema(number_keys, extra=None):
    props = {k: {"type": "number"} for k in number_keys}
    props["schema_version"] = {"const": SCHEMA_VERSION}
    props["command"] = {"type": "string"}
    props.update(extra or {})
    return {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "type": "object",
        "properties": props,
        "required": sorted(props),
        "additionalProperties": False,
    }


SUMMARY_SCHEMAS = {
    "spherical": _summary_schema(
        ["f0", "u0", "eps", "E", "R"], {"n_nodes": {"type": "integer", "minimum": 0}}
    ),
    "atmosphere": _summary_schema(
        ["mu", "bc_value", "u1", "eps", "I", "E", "H", "h_m", "f_m"],
        {"bc_kind": {"enum": list(BC_KINDS)}},
    ),
    "ring": _summary_schema(
        ["eps", "E", "v", "inner_radius", "outer_radius", "height", "max_radius", "residual"],
        {
            "l": {"type": "integer", "minimum": 1},
            "Lz_per_particle": {"type": "integer", "minimum": 1},
            "iterations": {"type": "integer", "minimum": 1},
        },
    ),
    "scales": _summary_schema(
        ["m", "N", "R_tilde", "l0", "R", "mean_density", "energy_prefactor", "body_mass", "body_radius", "mu", "vdw_r0", "vdw_rho0"],
        {"species": {"type": "string"}},
    ),
}


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors with the validation exit code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# --- writers -----------------------------------------------------------
def _csv_text(columns: dict) -> str:
    data = np.column_stack([np.asarray(v, dtype=float) for v in columns.values()])
    buf = io.StringIO()
    np.savetxt(buf, data, fmt=CSV_FORMAT, delimiter=",", header=",".join(columns), comments="")
    return buf.getvalue()


def _json_text(summary: dict) -> str:
    return json.dumps(summary, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _write_atomic(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.chmod(tmp, 0o666 & ~_UMASK)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _output_dir(args) -> Path | None:
    raw = args.output_dir or os.environ.get(OUTPUT_ENV)
    if not raw:
        return None
    path = Path(raw)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _emit(args, stem: str, summary: dict, tables: dict[str, dict], primary: str) -> None:
    """Write artifacts (if an output directory is set) and print to stdout."""
    summary = {**summary, "schema_version": SCHEMA_VERSION, "command": args.command}
    texts = {f"{stem}_{name}.csv": _csv_text(cols) for name, cols in tables.items()}
    texts[f"{stem}_summary.json"] = _json_text(summary)
    out = _output_dir(args)
    if out is not None:
        for name, text in texts.items():
            _write_atomic(out / name, text)
            log.info("wrote %s", out / name)
    if args.format == "csv":
        sys.stdout.write(texts[f"{stem}_{primary}.csv"])
    else:
        sys.stdout.write(texts[f"{stem}_summary.json"])


def _fmt(x) -> str:
    return f"{x:.4g}" if isinstance(x, float) else str(x)


# --- commands ----------------------------------------------------------
def cmd_spherical(args) -> int:
    sol = shoot_spherical(args.nodes, step=args.step, r_max=args.r_max)
    p = sol.profile
    idx = np.r_[0 : len(p.r) : args.stride]
    if idx[-1] != len(p.r) - 1:
        idx = np.r_[idx, len(p.r) - 1]
    f = p.f[idx]
    cols = {"r": p.r[idx], "f": f, "u": p.u[idx], "w": p.w[idx], "density": f * f}
    _emit(args, f"spherical_n{sol.n_nodes}", sol.summary(), {"profile": cols}, "profile")
    return EXIT_OK


def cmd_atmosphere(args) -> int:
    kind = args.bc.replace("-", "_")
    given = {"f1": args.f1, "df1": args.df1, "bc_value": args.bc_value, "target_I": args.target_I}
    given = {k: v for k, v in given.items() if v is not None}
    if len(given) != 1:
        raise DomainError("give exactly one of --f1, --df1, --bc-value, --target-I")
    (key, value), = given.items()
    if key == "f1" and kind != "adhesion":
        raise DomainError("--f1 applies to the adhesion condition; use --df1 for non-adhesion")
    if key == "df1" and kind != "non_adhesion":
        raise DomainError("--df1 applies to the non-adhesion condition; use --f1 for adhesion")
    kwargs = {"step": args.step}
    if key == "target_I":
        sol = solve_atmosphere_for_mass(args.mu, kind, value, **kwargs)
    else:
        sol = solve_atmosphere(args.mu, kind, value, **kwargs)
    p = sol.profile
    idx = np.r_[0 : len(p.r) : args.stride]
    if idx[-1] != len(p.r) - 1:
        idx = np.r_[idx, len(p.r) - 1]
    f = p.f[idx]
    cols = {"r": p.r[idx], "f": f, "u": p.u[idx], "w": p.w[idx], "density": f * f}
    stem = f"atmosphere_{kind}_mu{sol.mu:.6g}_bc{sol.bc_value:.6g}"
    _emit(args, stem, sol.summary(), {"profile": cols}, "profile")
    return EXIT_OK


def cmd_ring(args) -> int:
    if args.l < 1:
        raise DomainError("--l must be a positive integer")
    grid = RingGrid(args.l, K=args.K, n_theta=args.n_theta, n_r=args.n_r, r_max=args.r_max)
    sol = solve_ring(args.l, grid=grid, tol=args.tol, max_iter=args.max_iter)
    r = sol.r
    theta = np.linspace(0.0, np.pi, 2 * args.n_angles + 1)
    theta[args.n_angles] = np.pi / 2
    rr, tt = np.meshgrid(r, theta, indexing="ij")
    f = sol.field(rr, tt)
    grid2d = {"r": rr.ravel(), "theta": tt.ravel(), "f": f.ravel(), "density": (f * f).ravel()}
    f_eq = sol.field(r, np.pi / 2)
    equatorial = {"rho": r, "density": f_eq * f_eq}
    z_max = math.sqrt(max(r[-1] ** 2 - sol.max_radius**2, 0.0))
    z = np.linspace(-z_max, z_max, 2 * args.n_angles + 1)
    vertical = {"z": z, "density": sol.vertical_cut(z)}
    tables = {"density": grid2d, "equatorial": equatorial, "vertical": vertical}
    _emit(args, f"ring_l{sol.l}", sol.summary(), tables, "density")
    return EXIT_OK


def cmd_scales(args) -> int:
    if args.mass is not None:
        m, species = args.mass, "custom"
    else:
        m, species = scales.species_mass(args.species), args.species
    body = scales.CentralBody.from_cgs(args.body_mass_g, args.body_radius_cm)
    unit = scales.PhysicalScale(m, args.N)
    r0, rho0 = scales.vdw_crossover(m)
    summary = {
        "species": species,
        "m": m,
        "N": float(args.N),
        "R_tilde": args.R_tilde,
        "l0": unit.l0,
        "R": scales.radius_estimate(m, args.N, args.R_tilde),
        "mean_density": scales.mean_density(m, args.N, args.R_tilde),
        "energy_prefactor": unit.system_energy_unit,
        "body_mass": body.M0,
        "body_radius": body.R0,
        "mu": scales.mu_parameter(body, m),
        "vdw_r0": r0,
        "vdw_rho0": rho0,
    }
    summary = {**summary, "schema_version": SCHEMA_VERSION, "command": "scales"}
    out = _output_dir(args)
    text = _json_text(summary)
    if out is not None:
        _write_atomic(out / "scales_summary.json", text)
    sys.stdout.write(text)
    return EXIT_OK


def _reproduce_job(job):
    family, row = job
    if family == "spherical":
        return shoot_spherical(row["n_nodes"]).summary()
    return solve_atmosphere(1.0, family, row["bc_value"]).summary()


def reproduce_rows() -> list[tuple[str, dict]]:
    jobs = [("spherical", r) for r in reference.SPHERICAL]
    jobs += [("non_adhesion", r) for r in reference.ATMOSPHERE_NON_ADHESION]
    jobs += [("adhesion", r) for r in reference.ATMOSPHERE_ADHESION]
    return jobs


def compare(published: dict, computed: dict) -> list[dict]:
    rows = []
    for key, ref in published.items():
        if key in ("n_nodes", "bc_value"):
            continue
        got = computed[key]
        rel = abs(got - ref) / abs(ref)
        rows.append(
            {"quantity": key, "published": ref, "computed": got, "rel_error": rel, "ok": rel <= reference.tolerance(key)}
        )
    return rows


def cmd_reproduce(args) -> int:
    jobs = reproduce_rows()
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            results = list(pool.map(_reproduce_job, jobs))
    else:
        results = [_reproduce_job(j) for j in jobs]

    report = []
    for (family, row), computed in zip(jobs, results):
        label = f"n={row['n_nodes']}" if family == "spherical" else f"bc={row['bc_value']:g}"
        for item in compare(row, computed):
            report.append({"family": family, "case": label, **item})

    lines = [f"{'family':<13}{'case':<11}{'qty':<6}{'published':>12}{'computed':>12}{'rel.err':>10}  ok"]
    for item in report:
        lines.append(
            f"{item['family']:<13}{item['case']:<11}{item['quantity']:<6}"
            f"{_fmt(item['published']):>12}{_fmt(item['computed']):>12}{item['rel_error']:>10.2e}  "
            f"{'yes' if item['ok'] else 'NO'}"
        )
    n_bad = sum(not item["ok"] for item in report)
    lines.append(f"{len(report) - n_bad}/{len(report)} values within tolerance")
    text = "\n".join(lines) + "\n"

    out = _output_dir(args)
    if out is not None:
        payload = {"schema_version": SCHEMA_VERSION, "command": "reproduce", "rows": report}
        _write_atomic(out / "reproduce_tables.json", _json_text(payload))
    sys.stdout.write(_json_text({"rows": report}) if args.format == "json" else text)
    return EXIT_OK


# --- parser ------------------------------------------------------------
def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--output-dir", help=f"directory for CSV/JSON artifacts (env: {OUTPUT_ENV})")
    common.add_argument("--format", choices=("json", "csv"), default="json", help="what to print on stdout")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="gravbose", description="Equilibria of self-gravitating Bose condensates.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("spherical", parents=[common], help="spherical structure with a given node count")
    p.add_argument("--nodes", type=int, default=0, choices=range(MAX_NODES + 1), metavar=f"0..{MAX_NODES}")
    p.add_argument("--step", type=float, default=1e-3)
    p.add_argument("--r-max", type=float, default=25.0)
    p.add_argument("--stride", type=_positive_int, default=10, help="write every n-th profile node")
    p.set_defaults(func=cmd_spherical)

    p = sub.add_parser("atmosphere", parents=[common], help="atmosphere captured by a unit-radius body")
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--bc", choices=("adhesion", "non-adhesion", "non_adhesion"), required=True)
    p.add_argument("--f1", type=float, help="surface amplitude (adhesion)")
    p.add_argument("--df1", type=float, help="surface slope (non-adhesion)")
    p.add_argument("--bc-value", type=float, help="surface value for either condition")
    p.add_argument("--target-I", dest="target_I", type=float, help="solve for this atmosphere mass instead")
    p.add_argument("--step", type=float, default=1e-3)
    p.add_argument("--stride", type=_positive_int, default=10)
    p.set_defaults(func=cmd_atmosphere)

    p = sub.add_parser("ring", parents=[common], help="rotating ring with winding number l")
    p.add_argument("--l", type=int, default=1)
    p.add_argument("--K", type=_positive_int, default=32, help="angular truncation")
    p.add_argument("--n-theta", type=_positive_int, default=64)
    p.add_argument("--n-r", type=_positive_int, default=400)
    p.add_argument("--r-max", type=float, default=25.0, help="outer radius in the scaled coordinate")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--max-iter", type=_positive_int, default=3000)
    p.add_argument("--n-angles", type=_positive_int, default=45, help="polar samples per hemisphere in the 2-D output")
    p.set_defaults(func=cmd_ring)

    p = sub.add_parser("scales", parents=[common], help="unit conversions for a species and a body")
    who = p.add_mutually_exclusive_group()
    who.add_argument("--species", default="hydrogen")
    who.add_argument("--mass", type=float, help="particle mass in kg")
    p.add_argument("--N", type=float, default=scales.AVOGADRO)
    p.add_argument("--R-tilde", dest="R_tilde", type=float, default=10.0)
    p.add_argument("--body-mass-g", type=float, default=1.0)
    p.add_argument("--body-radius-cm", type=float, default=1.0)
    p.set_defaults(func=cmd_scales)

    p = sub.add_parser("reproduce", parents=[common], help="rerun the published reference cases")
    p.add_argument("what", choices=("tables",))
    p.add_argument("--workers", type=_positive_int, default=1)
    p.set_defaults(func=cmd_reproduce, format="table")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (DomainError, ValueError, OSError) as exc:
        print(f"gravbose: invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GravBoseError, ArithmeticError) as exc:
        print(f"gravbose: solver failed: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
