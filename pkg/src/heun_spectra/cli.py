"""Batch command-line interface.

Subcommands cover single energies, spectra, Floquet data, wave-function
sampling, quasi-polynomial intensities, reproduction of the four bundled
reference tables, and a quick cross-validation battery.  Output formats:
text (default), json, csv; every float is rendered with 12 significant
digits in lowercase scientific notation so identical invocations produce
byte-identical output.

Exit codes: 0 success, 2 usage error, 3 solver failure, 4 a computed value
fell outside the documented tolerance of a reference value.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .errors import HeunSpectraError
from .floquet import eigen_connection, find_indices, laurent_coefficients
from .model import ProblemParams, coulomb_energy
from .quasipoly import solve_quasipoly, validate_quasipoly
from .series import asym_coeffs_infinity, asym_coeffs_zero, eval_asymptotic
from .shooting import ShootingConfig, find_energy

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_SOLVER = 3
EXIT_TOLERANCE = 4


def fmt(x: float) -> str:
    """12 significant digits, lowercase scientific."""
    return f"{x:.11e}"


def _round12(obj):
    """Round floats to the printed precision so JSON output is stable."""
    if isinstance(obj, float):
        return float(fmt(obj))
    if isinstance(obj, complex):
        return {"re": float(fmt(obj.real)), "im": float(fmt(obj.imag))}
    if isinstance(obj, dict):
        return {k: _round12(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round12(v) for v in obj]
    return obj


def thread_count() -> int:
    """Worker cap from HEUN_SPECTRA_THREADS (default 1)."""
    raw = os.environ.get("HEUN_SPECTRA_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def load_reference(name: str):
    """Rows of a bundled reference CSV ('#' comment lines skipped)."""
    import csv
    import importlib.resources as resources

    with resources.files("heun_spectra.data").joinpath(name).open("r", encoding="utf-8") as f:
        rows = [r for r in csv.reader(line for line in f if not line.startswith("#"))]
    header, body = rows[0], rows[1:]
    return header, body


def _write_output(args, text: str):
    if args.output:
        with open(args.output, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _emit(args, payload: dict, csv_header=None, csv_rows=None, text_lines=None):
    if args.format == "json":
        _write_output(args, json.dumps(_round12(payload), indent=2) + "\n")
    elif args.format == "csv":
        if csv_header is None:
            raise HeunSpectraError("this command has no CSV representation")
        lines = [",".join(csv_header)]
        lines += [",".join(str(c) for c in row) for row in csv_rows]
        _write_output(args, "\n".join(lines) + "\n")
    else:
        _write_output(args, "\n".join(text_lines) + "\n")


def _result(command: str, inputs: dict, outputs: dict, method: str, tolerances: dict) -> dict:
    return {
        "command": command,
        "inputs": inputs,
        "outputs": outputs,
        "method": method,
        "tolerances": tolerances,
        "versions": {"heun_spectra": __version__, "numpy": np.__version__},
    }


# ---------------------------------------------------------------------------
# solver helpers

def _floquet_level(params: ProblemParams, n: int):
    """n-th eigenvalue via the connection solver alone.

    The normalized connection determinant is scanned over the Coulomb-bounded
    range; every root is refined and the roots are indexed in ascending
    energy (Sturm order).
    """
    zsq = params.Z * params.Z
    e_lo = 1.2 * zsq * coulomb_energy(0, params.l)
    e_hi = -1e-4 * zsq
    from .floquet import _ConnectionWorkspace

    ws = _ConnectionWorkspace(params)
    grid = np.linspace(e_lo, e_hi, max(40, int((e_hi - e_lo) / 0.001)))
    dets = []
    for e in grid:
        try:
            dets.append(ws.det_normalized(float(e)))
        except HeunSpectraError:
            dets.append(complex(math.nan))
    dets = np.array(dets)
    phase_src = dets[np.isfinite(dets)]
    if len(phase_src) == 0:
        raise HeunSpectraError("connection determinant failed over the whole scan range")
    phase = phase_src[int(np.argmax(np.abs(phase_src)))]
    phase /= abs(phase)
    r = (dets / phase).real
    roots = []
    for i in range(len(grid) - 1):
        if not (np.isfinite(r[i]) and np.isfinite(r[i + 1])):
            continue
        if r[i] * r[i + 1] < 0.0:
            conn = eigen_connection(params, (float(grid[i]), float(grid[i + 1])))
            if not any(abs(conn.E - e) < 1e-8 for e, _ in roots):
                roots.append((conn.E, conn))
    roots.sort(key=lambda t: t[0])
    if n >= len(roots):
        raise HeunSpectraError(
            f"connection scan found only {len(roots)} levels, requested index {n}"
        )
    return roots[n][1]


def _energy_pair(params: ProblemParams, n: int, method: str):
    """(E_shooting, E_floquet, connection-result) as requested by method."""
    e_sh = e_fl = None
    conn = None
    if method in ("shooting", "both"):
        e_sh = find_energy(params, n).E
    if method in ("floquet", "both"):
        if e_sh is not None:
            conn = eigen_connection(params, (e_sh - 2e-6, e_sh + 2e-6))
        else:
            conn = _floquet_level(params, n)
        e_fl = conn.E
    return e_sh, e_fl, conn


# ---------------------------------------------------------------------------
# subcommands

def cmd_energy(args) -> int:
    params = ProblemParams(A=args.A, Z=args.Z, l=args.l)
    if params.A <= 0:
        raise HeunSpectraError("energy solvers require A > 0")
    e_sh, e_fl, _ = _energy_pair(params, args.n, args.method)
    outputs = {}
    lines = []
    if e_sh is not None:
        outputs["E_shooting"] = e_sh
        lines.append(f"E(shooting) = {fmt(e_sh)}")
    if e_fl is not None:
        outputs["E_floquet"] = e_fl
        lines.append(f"E(floquet)  = {fmt(e_fl)}")
    if args.method == "both":
        outputs["discrepancy"] = abs(e_sh - e_fl)
        lines.append(f"|difference| = {fmt(abs(e_sh - e_fl))}")
    payload = _result(
        "energy",
        {"A": args.A, "Z": args.Z, "l": args.l, "n": args.n, "method": args.method},
        outputs,
        args.method,
        {"cross_method": 1e-9},
    )
    rows = [[k, fmt(v)] for k, v in outputs.items()]
    _emit(args, payload, ["quantity", "value"], rows, lines)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    params = ProblemParams(A=args.A, Z=args.Z, l=args.l)
    levels = []
    for n in range(args.n_max + 1):
        e_sh, e_fl, _ = _energy_pair(params, n, args.method)
        levels.append({"n": n, **({"E_shooting": e_sh} if e_sh is not None else {}),
                       **({"E_floquet": e_fl} if e_fl is not None else {})})
    payload = _result(
        "spectrum",
        {"A": args.A, "Z": args.Z, "l": args.l, "n_max": args.n_max, "method": args.method},
        {"levels": levels},
        args.method,
        {},
    )
    header = ["n"] + [k for k in levels[0] if k != "n"]
    rows = [[lv["n"]] + [fmt(lv[k]) for k in header[1:]] for lv in levels]
    lines = [
        "  ".join([f"n={lv['n']}"] + [f"{k}={fmt(lv[k])}" for k in header[1:]])
        for lv in levels
    ]
    _emit(args, payload, header, rows, lines)
    return EXIT_OK


def _complex_cols(c: complex):
    return [fmt(c.real), fmt(c.imag)]


def cmd_floquet(args) -> int:
    params = ProblemParams(A=args.A, Z=args.Z, l=args.l)
    if (args.E is None) == (args.n is None):
        raise UsageError("exactly one of --E or --n is required")
    conn = None
    if args.n is not None:
        e_sh = find_energy(params, args.n).E
        conn = eigen_connection(params, (e_sh - 2e-6, e_sh + 2e-6))
        E = conn.E
        nu1, nu2 = conn.nu1, conn.nu2
        sol = conn.floquet1
    else:
        E = args.E
        nu1, nu2 = find_indices(E, params)
        sol = laurent_coefficients(nu1, E, params)
    n_report = min(args.N, sol.N)
    coeffs = [(n, sol.coefficient(n)) for n in range(-n_report, n_report + 1)]
    outputs = {
        "E": E,
        "nu1": nu1,
        "nu2": nu2,
        "coefficients": [{"n": n, "re": c.real, "im": c.imag} for n, c in coeffs],
    }
    lines = [f"E = {fmt(E)}", f"nu1 = {fmt(nu1.real)} + {fmt(nu1.imag)} i",
             f"nu2 = {fmt(nu2.real)} + {fmt(nu2.imag)} i"]
    if conn is not None:
        outputs.update(
            {"zeta1": conn.zeta1, "zeta2": conn.zeta2, "a0": conn.a0, "b0": conn.b0}
        )
        lines += [
            f"zeta1 = {fmt(conn.zeta1.real)} + {fmt(conn.zeta1.imag)} i",
            f"zeta2 = {fmt(conn.zeta2.real)} + {fmt(conn.zeta2.imag)} i",
            f"a0 = {fmt(conn.a0.real)} + {fmt(conn.a0.imag)} i",
            f"b0 = {fmt(conn.b0.real)} + {fmt(conn.b0.imag)} i",
        ]
    lines.append("n, re(c_n), im(c_n):")
    lines += [f"  {n:4d}  {fmt(c.real)}  {fmt(c.imag)}" for n, c in coeffs]
    payload = _result(
        "floquet",
        {"A": args.A, "Z": args.Z, "l": args.l, "E": args.E, "n": args.n, "N": args.N},
        outputs,
        "two-sided matching determinant + banded null vector",
        {"index": 1e-9, "coefficients_rel": 1e-6},
    )
    rows = [[n] + _complex_cols(c) for n, c in coeffs]
    _emit(args, payload, ["n", "re", "im"], rows, lines)
    return EXIT_OK


def cmd_wavefunction(args) -> int:
    from ._ivp import integrate_second_order
    from .shooting import _anchors, _force_field, _start_from_infinity, _start_from_zero

    params = ProblemParams(A=args.A, Z=args.Z, l=args.l)
    if args.zmin <= 0 or args.zmax <= args.zmin or args.points < 2:
        raise UsageError("need 0 < zmin < zmax and points >= 2")
    cfg = ShootingConfig()
    state = find_energy(params, args.n, cfg)
    E = state.E
    z_near, z_match, z_far = _anchors(params, E, cfg)
    F = _force_field(params, E)
    flip = 1.0 if state.wave_samples[0, 1] >= 0 else -1.0
    scale_out = flip / state.norm
    grid = np.geomspace(args.zmin, args.zmax, args.points)
    samples = []  # (z, w, method)

    # outward branch values at grid points inside [z_near, z_match]
    inside_out = [z for z in grid if z_near <= z <= z_match]
    w, wp = _start_from_zero(params, E, cfg, z_near)
    z_prev = z_near
    for z in inside_out:
        w, wp = integrate_second_order(F, z_prev, z, w, wp, cfg.rk_tolerance)
        z_prev = z
        samples.append((z, scale_out * w, "ode_outward"))
    w_match_out, _p = integrate_second_order(F, z_prev, z_match, w, wp, cfg.rk_tolerance)

    # inward branch, scaled to join the outward one at z_match
    w, wp = _start_from_infinity(params, E, cfg, z_far)
    w_match_in, _p2 = integrate_second_order(F, z_far, z_match, w, wp, cfg.rk_tolerance)
    if w_match_in == 0.0:
        raise HeunSpectraError("inward branch vanished at the matching point")
    s_in = w_match_out / w_match_in
    inside_in = sorted([z for z in grid if z_match < z <= z_far], reverse=True)
    w, wp = _start_from_infinity(params, E, cfg, z_far)
    z_prev = z_far
    for z in inside_in:
        w, wp = integrate_second_order(F, z_prev, z, w, wp, cfg.rk_tolerance)
        z_prev = z
        samples.append((z, scale_out * s_in * w, "ode_inward"))

    series_zero = asym_coeffs_zero(params, E, 1.0, cfg.series_terms)
    for z in grid:
        if z < z_near:
            ev = eval_asymptotic(series_zero, z, 1e-6)
            samples.append((z, scale_out * ev.value.real, "series_zero"))
    series_inf = asym_coeffs_infinity(params, E, 1.0, cfg.series_terms)
    s_far = scale_out * s_in
    for z in grid:
        if z > z_far:
            ev = eval_asymptotic(series_inf, z, 1e-6)
            samples.append((z, s_far * ev.value.real, "series_infinity"))

    samples.sort(key=lambda t: t[0])
    payload = _result(
        "wavefunction",
        {
            "A": args.A, "Z": args.Z, "l": args.l, "n": args.n,
            "zmin": args.zmin, "zmax": args.zmax, "points": args.points,
        },
        {
            "E": E,
            "samples": [{"z": z, "w": w, "method": m} for z, w, m in samples],
        },
        "two-sided shooting with series tails",
        {"rk_tolerance": cfg.rk_tolerance},
    )
    rows = [[fmt(z), fmt(w), m] for z, w, m in samples]
    lines = [f"E = {fmt(E)}"] + [f"{fmt(z)}  {fmt(w)}  {m}" for z, w, m in samples]
    _emit(args, payload, ["z", "w", "method"], rows, lines)
    return EXIT_OK


def cmd_quasipoly(args) -> int:
    result = solve_quasipoly(args.p, args.l, args.Z if args.Z != 1.0 else 1)
    reports = validate_quasipoly(result)
    outputs = {
        "E": result.E,
        "beta_roots": list(result.beta_roots),
        "A_values": list(result.A_values),
        "xi": [list(x) for x in result.xi],
        "rejected_roots": [{"re": r.real, "im": r.imag} for r in result.rejected_roots],
        "note": result.note,
        "validation": [
            {
                "beta": r.beta,
                "A": r.A,
                "ode_residual": r.ode_residual,
                "shooting_mismatch": r.shooting_mismatch,
                "node_count": r.node_count,
                "physical": r.physical,
            }
            for r in reports
        ],
    }
    lines = [f"E = {fmt(result.E)} (p = {result.p})"]
    if result.note:
        lines.append(f"note: {result.note}")
    for r in reports:
        lines.append(
            f"beta = {fmt(r.beta)}  A = {fmt(r.A)}  ode_residual = {fmt(r.ode_residual)}"
            f"  mismatch = {fmt(r.shooting_mismatch)}  nodes = {r.node_count}"
            f"  physical = {r.physical}"
        )
    if not result.beta_roots and not result.note:
        lines.append("no positive roots")
    payload = _result(
        "quasipoly",
        {"p": args.p, "l": args.l, "Z": args.Z},
        outputs,
        "closed v-recurrence closure polynomial, cross-checked both chains",
        {"roots_rel": 1e-10, "mismatch": 1e-9},
    )
    rows = [
        [fmt(r.beta), fmt(r.A), fmt(r.ode_residual), fmt(r.shooting_mismatch),
         r.node_count, r.physical]
        for r in reports
    ]
    _emit(args, payload, ["beta", "A", "ode_residual", "mismatch", "nodes", "physical"], rows, lines)
    return EXIT_OK


# ---------------------------------------------------------------------------
# tables

def _compute_table1():
    header, body = load_reference("table1_energies.csv")
    jobs = [(int(r[0]), float(r[1]), int(r[2]), float(r[3])) for r in body]

    def solve(job):
        l, A, n, ref = job
        e = find_energy(ProblemParams(A=A, Z=1.0, l=l), n).E
        return (l, A, n, ref, e)

    workers = thread_count()
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(solve, jobs))
    else:
        rows = [solve(j) for j in jobs]
    out_rows = []
    failures = []
    for l, A, n, ref, e in rows:
        tol = 5e-8 if (l, A, n) == (2, 0.0001, 2) else 1e-8
        diff = abs(e - ref)
        out_rows.append([l, repr(A), n, fmt(e), fmt(ref), fmt(diff)])
        if diff > tol:
            failures.append(f"table1 l={l} A={A} n={n}: |diff| = {diff:.3e} > {tol:.0e}")
    return ["l", "A", "n", "E", "E_reference", "abs_diff"], out_rows, failures


def _compute_table2():
    header, body = load_reference("table2_laurent.csv")
    refs = {int(r[0]): complex(float(r[1]), float(r[2])) for r in body}
    params = ProblemParams(A=10.0, Z=1.0, l=0)
    E = -0.093111277969
    nu1, _ = find_indices(E, params)
    sol = laurent_coefficients(nu1, E, params)
    cmax = max(abs(c) for c in refs.values())
    out_rows = []
    failures = []
    for n in sorted(refs):
        got = sol.coefficient(n)
        ref = refs[n]
        diff = abs(got - ref)
        if abs(ref) > 1e-6:
            ok = diff / abs(ref) < 1e-6
        else:
            ok = diff < 1e-12 * cmax
        out_rows.append([n, fmt(got.real), fmt(got.imag), fmt(ref.real), fmt(ref.imag), fmt(diff)])
        if not ok:
            failures.append(f"table2 n={n}: |diff| = {diff:.3e}")
    return ["n", "re", "im", "re_reference", "im_reference", "abs_diff"], out_rows, failures


def _compute_table3():
    header, body = load_reference("table3_indices.csv")
    out_rows = []
    failures = []
    for r in body:
        l, A, E, nre, nim = int(r[0]), float(r[1]), float(r[2]), float(r[3]), float(r[4])
        nu1, _ = find_indices(E, ProblemParams(A=A, Z=1.0, l=l))
        dre = abs(nu1.real - nre)
        dim = abs(nu1.imag - nim)
        out_rows.append(
            [l, repr(A), fmt(E), fmt(nu1.real), fmt(nu1.imag), fmt(nre), fmt(nim), fmt(max(dre, dim))]
        )
        if dre > 1e-9 or dim > 1e-9:
            failures.append(f"table3 l={l} A={A}: |diff| = {max(dre, dim):.3e} > 1e-9")
    return (
        ["l", "A", "E", "nu_re", "nu_im", "nu_re_reference", "nu_im_reference", "abs_diff"],
        out_rows,
        failures,
    )


def _compute_table4():
    header, body = load_reference("table4_quasipoly.csv")
    by_pl: dict[tuple[int, int], list[float]] = {}
    for r in body:
        by_pl.setdefault((int(r[0]), int(r[1])), []).append(float(r[2]))
    out_rows = []
    failures = []
    for (p, l), refs in sorted(by_pl.items()):
        result = solve_quasipoly(p, l, 1)
        for ref in sorted(refs):
            best = min(result.beta_roots, key=lambda b: abs(b - ref)) if result.beta_roots else math.nan
            rel = abs(best - ref) / abs(ref)
            out_rows.append([p, l, fmt(best), fmt(ref), fmt(rel)])
            if not rel < 1e-10:
                failures.append(f"table4 p={p} l={l} beta={ref:.6f}: rel diff {rel:.3e} > 1e-10")
    return ["p", "l", "beta", "beta_reference", "rel_diff"], out_rows, failures


def cmd_tables(args) -> int:
    which = args.which
    wanted = [1, 2, 3, 4] if which == "all" else [int(which)]
    outdir = args.output or "."
    os.makedirs(outdir, exist_ok=True)
    all_failures = []
    report = []
    builders = {1: _compute_table1, 2: _compute_table2, 3: _compute_table3, 4: _compute_table4}
    for k in wanted:
        header, rows, failures = builders[k]()
        path = os.path.join(outdir, f"table{k}.csv")
        with open(path, "w", encoding="utf-8") as f:
            f.write(",".join(header) + "\n")
            for row in rows:
                f.write(",".join(str(c) for c in row) + "\n")
        diffs = [float(r[-1]) for r in rows]
        report.append(
            f"table {k}: {len(rows)} cells, max diff {max(diffs):.3e}, wrote {path}"
        )
        report.extend("  FAIL " + msg for msg in failures)
        all_failures.extend(failures)
    sys.stdout.write("\n".join(report) + "\n")
    return EXIT_TOLERANCE if all_failures else EXIT_OK


def cmd_validate(args) -> int:
    checks = []

    p1 = ProblemParams(A=1.0, Z=1.0, l=0)
    e_sh = find_energy(p1, 0).E
    e_fl = eigen_connection(p1, (e_sh - 2e-6, e_sh + 2e-6)).E
    checks.append(("cross-oracle E(A=1,l=0,n=0)", abs(e_sh - e_fl), 1e-9))

    from .model import rescale

    a_hat, e_hat = rescale(1.0, e_sh, 2.0)
    e_scaled = find_energy(ProblemParams(A=a_hat, Z=2.0, l=0), 0).E
    checks.append(("scale covariance Z=2", abs(e_scaled - e_hat), 1e-8))

    for (p, l) in ((2, 0), (3, 1)):
        res = solve_quasipoly(p, l, 1)
        reports = validate_quasipoly(res)
        worst = max(r.shooting_mismatch for r in reports)
        checks.append((f"quasipoly p={p} l={l} mismatch", worst, 1e-9))

    failures = [(name, val, tol) for name, val, tol in checks if not val < tol]
    lines = [
        f"{'FAIL' if not val < tol else 'ok  '} {name}: {val:.3e} (tol {tol:.0e})"
        for name, val, tol in checks
    ]
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_TOLERANCE if failures else EXIT_OK


# ---------------------------------------------------------------------------
# argument plumbing

class UsageError(Exception):
    pass


_DEFAULTS = {
    "energy": {"Z": 1.0, "method": "shooting"},
    "spectrum": {"Z": 1.0, "method": "shooting", "n_max": 2},
    "floquet": {"Z": 1.0, "N": 20, "E": None, "n": None},
    "wavefunction": {"Z": 1.0, "points": 101},
    "quasipoly": {"Z": 1.0},
    "tables": {"which": "all"},
    "validate": {},
}


def _read_config(path: str) -> dict:
    """Plain key=value lines; '#' starts a comment."""
    out = {}
    with open(path, "r", encoding="utf-8") as f:
        for raw in f:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"bad config line: {raw.strip()!r}")
            key, val = (s.strip() for s in line.split("=", 1))
            out[key] = val
    return out


def _resolve(args, command: str):
    """Fill unset options from config file, then from built-in defaults."""
    config = _read_config(args.config) if args.config else {}
    for key, default in _DEFAULTS.get(command, {}).items():
        if getattr(args, key, None) is None:
            if key in config:
                raw = config[key]
                if isinstance(default, float) or key in ("E", "zmin", "zmax", "Z"):
                    setattr(args, key, float(raw))
                elif isinstance(default, int) or key in ("n", "N", "points", "n_max"):
                    setattr(args, key, int(raw))
                else:
                    setattr(args, key, raw)
            else:
                setattr(args, key, default)
    return args


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--output", help="output file (tables: output directory)")
    common.add_argument("--config", help="key=value configuration file")

    ap = argparse.ArgumentParser(
        prog="heun-spectra",
        description="Bound states of a supersingular-plus-Coulomb potential",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        return sub.add_parser(name, help=help_text, parents=[common])

    pe = add("energy", "one bound-state energy")
    pe.add_argument("--A", type=float, required=True)
    pe.add_argument("--l", type=int, required=True)
    pe.add_argument("--n", type=int, required=True)
    pe.add_argument("--Z", type=float)
    pe.add_argument("--method", choices=("shooting", "floquet", "both"))

    ps = add("spectrum", "lowest levels for one (A, l)")
    ps.add_argument("--A", type=float, required=True)
    ps.add_argument("--l", type=int, required=True)
    ps.add_argument("--n-max", dest="n_max", type=int)
    ps.add_argument("--Z", type=float)
    ps.add_argument("--method", choices=("shooting", "floquet", "both"))

    pf = add("floquet", "Floquet indices and Laurent coefficients")
    pf.add_argument("--A", type=float, required=True)
    pf.add_argument("--l", type=int, required=True)
    pf.add_argument("--E", type=float)
    pf.add_argument("--n", type=int)
    pf.add_argument("--Z", type=float)
    pf.add_argument("--N", type=int)

    pw = add("wavefunction", "sampled normalized wave function")
    pw.add_argument("--A", type=float, required=True)
    pw.add_argument("--l", type=int, required=True)
    pw.add_argument("--n", type=int, required=True)
    pw.add_argument("--zmin", type=float, required=True)
    pw.add_argument("--zmax", type=float, required=True)
    pw.add_argument("--points", type=int)
    pw.add_argument("--Z", type=float)

    pq = add("quasipoly", "exact intensities with polynomial states")
    pq.add_argument("--p", type=int, required=True)
    pq.add_argument("--l", type=int, required=True)
    pq.add_argument("--Z", type=float)

    pt = add("tables", "reproduce bundled reference tables")
    pt.add_argument("--which", choices=("1", "2", "3", "4", "all"))

    add("validate", "cross-validation battery")
    return ap


_HANDLERS = {
    "energy": cmd_energy,
    "spectrum": cmd_spectrum,
    "floquet": cmd_floquet,
    "wavefunction": cmd_wavefunction,
    "quasipoly": cmd_quasipoly,
    "tables": cmd_tables,
    "validate": cmd_validate,
}


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        args = _resolve(args, args.command)
        return _HANDLERS[args.command](args)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except HeunSpectraError as exc:
        sys.stderr.write(f"solver failure ({args.command}): {exc}\n")
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
