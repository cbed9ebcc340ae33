"""Command-line front end.

    heunbound frequency    --case A --m 1 --a 1 --n 1 --l 0
    heunbound spectrum     --case A --m 1 --a 1 --n-max 2 --l-max 1
    heunbound verify       --case B --m 1 --a 4 --chi 0.1 --n 1 --l 0
    heunbound wavefunction --case A --m 1 --a 1 --n 1 --l 0

Exit codes: 0 ok, 2 usage, 3 no physical root, 4 verification mismatch,
5 non-polynomial solution.

Values may also come from ``--config FILE`` (flat ``key = value`` lines,
``#`` comments) or ``--from-json FILE`` (a JSON document previously written
by this tool); explicit flags win over both.  ``HEUNBOUND_THREADS`` caps
the number of sweep cells computed concurrently.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from . import __version__
from .errors import (
    DegenerateOperator,
    InvalidConfig,
    MismatchReport,
    NegativeRadicand,
    NoPhysicalRoot,
    NotTruncated,
    ZeroCoupling,
)
from .oracle import DEFAULT_POINTS, DEFAULT_RHO_SCALE, cross_validate
from .params import PhysicalConfig, truncated_params
from .quantize import permitted_frequencies
from .series import CONVENTION_HEUN, CONVENTIONS, DEFAULT_TOL, frobenius_coeffs
from .spectrum import GridSpec, build_wavefunction, energy_case_a, energy_case_b

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NO_ROOT = 3
EXIT_MISMATCH = 4
EXIT_NOT_POLY = 5

MAX_SWEEP = 64

DEFAULTS = {
    "case": "A",
    "m": 1.0,
    "a": 1.0,
    "chi": 0.0,
    "n": 1,
    "l": 0,
    "tol": None,
    "convention": CONVENTION_HEUN,
    "format": "csv",
    "output": None,
    "omega_min": None,
    "omega_max": None,
    "n_max": 1,
    "l_max": 0,
    "grid_n": DEFAULT_POINTS,
    "rho_max_scale": DEFAULT_RHO_SCALE,
    "force_omega": None,
    "root_index": 0,
    "points": 4001,
    "rho_max": None,
}

# keys that can be set from a config file or JSON document, with their types
_KEY_TYPES = {
    "case": str, "m": float, "a": float, "chi": float, "n": int, "l": int,
    "tol": float, "convention": str, "format": str, "output": str,
    "omega_min": float, "omega_max": float, "n_max": int, "l_max": int,
    "grid_n": int, "rho_max_scale": float, "force_omega": float,
    "root_index": int, "points": int, "rho_max": float,
}


class UsageError(Exception):
    pass


def fmt(x) -> str:
    """Locale-independent 9-significant-digit formatting."""
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, int):
        return str(x)
    return format(float(x), ".9g")


def _csv(header, rows, meta=()):
    buf = io.StringIO()
    for key, value in meta:
        buf.write(f"# {key}={fmt(value)}\n")
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(fmt(row.get(h)).replace(",", ";") for h in header) + "\n")
    return buf.getvalue()


def _json(doc):
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _emit(text, path):
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- option parsing ---------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _common(p, sweep=False):
    S = argparse.SUPPRESS
    p.add_argument("--case", choices=("A", "B", "a", "b"), default=S)
    p.add_argument("--m", type=float, default=S, help="rest mass")
    p.add_argument("--a", type=float, default=S, help="composite coupling g*lambda*B0*kappa")
    p.add_argument("--chi", type=float, default=S, help="linear scalar potential strength")
    if not sweep:
        p.add_argument("--n", type=int, default=S, help="radial quantum number (>= 1)")
        p.add_argument("--l", type=int, default=S, help="angular momentum quantum number")
    p.add_argument("--tol", type=float, default=S)
    p.add_argument("--convention", choices=CONVENTIONS, default=S,
                   help="sign of the Coulomb term in the recurrence (default: heun)")
    p.add_argument("--omega-min", dest="omega_min", type=float, default=S)
    p.add_argument("--omega-max", dest="omega_max", type=float, default=S)
    p.add_argument("--format", choices=("csv", "json", "text"), default=S)
    p.add_argument("--output", default=S)
    p.add_argument("--config", default=S, help="flat key=value file")
    p.add_argument("--from-json", dest="from_json", default=S, help="re-run from a JSON result")


def build_parser():
    parser = _Parser(prog="heunbound", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("frequency", help="permitted oscillator frequencies")
    _common(p)

    p = sub.add_parser("spectrum", help="energy levels over an (n, l) sweep")
    _common(p, sweep=True)
    p.add_argument("--n-max", dest="n_max", type=int, default=argparse.SUPPRESS)
    p.add_argument("--l-max", dest="l_max", type=int, default=argparse.SUPPRESS)

    p = sub.add_parser("verify", help="cross-check frequencies against the finite-difference oracle")
    _common(p)
    p.add_argument("--grid-n", dest="grid_n", type=int, default=argparse.SUPPRESS)
    p.add_argument("--rho-max-scale", dest="rho_max_scale", type=float, default=argparse.SUPPRESS)
    p.add_argument("--force-omega", dest="force_omega", type=float, default=argparse.SUPPRESS)

    p = sub.add_parser("wavefunction", help="normalised radial wavefunction samples")
    _common(p)
    p.add_argument("--root-index", dest="root_index", type=int, default=argparse.SUPPRESS)
    p.add_argument("--force-omega", dest="force_omega", type=float, default=argparse.SUPPRESS)
    p.add_argument("--points", type=int, default=argparse.SUPPRESS)
    p.add_argument("--rho-max", dest="rho_max", type=float, default=argparse.SUPPRESS)
    return parser


def read_config_file(path):
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, value = (t.strip() for t in line.split("=", 1))
            values[key.replace("-", "_")] = value
    return values


def _coerce(values, source):
    out = {}
    for key, value in values.items():
        if key not in _KEY_TYPES:
            raise UsageError(f"unknown key {key!r} in {source}")
        if value is None or value == "":
            out[key] = None
            continue
        try:
            out[key] = _KEY_TYPES[key](value)
        except (TypeError, ValueError):
            raise UsageError(f"bad value for {key!r} in {source}: {value!r}") from None
    return out


def resolve(ns) -> dict:
    """Merge defaults < --from-json < --config < explicit flags."""
    opts = dict(DEFAULTS)
    given = vars(ns).copy()
    command = given.pop("command")
    json_path = given.pop("from_json", None)
    cfg_path = given.pop("config", None)
    if json_path:
        try:
            with open(json_path, encoding="utf-8") as fh:
                doc = json.load(fh)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read {json_path}: {exc}") from None
        stored = doc.get("config", {}) if isinstance(doc, dict) else {}
        stored = {k: v for k, v in stored.items() if k not in ("command", "output")}
        opts.update(_coerce(stored, json_path))
    if cfg_path:
        try:
            opts.update(_coerce(read_config_file(cfg_path), cfg_path))
        except OSError as exc:
            raise UsageError(f"cannot read {cfg_path}: {exc}") from None
    opts.update(given)
    opts["command"] = command
    opts["case"] = str(opts["case"]).upper()
    if opts["case"] not in ("A", "B"):
        raise UsageError(f"case must be A or B, got {opts['case']!r}")
    if opts["convention"] not in CONVENTIONS:
        raise UsageError(f"convention must be one of {CONVENTIONS}")
    if opts["tol"] is not None and not opts["tol"] > 0:
        raise UsageError("tolerances must be > 0")
    if opts["case"] == "A" and opts["chi"] not in (0, 0.0):
        raise UsageError("case A has no linear potential; pass --case B for chi > 0")
    if opts["case"] == "B" and not opts["chi"] > 0:
        raise UsageError("case B needs --chi > 0")
    return opts


def _config_record(opts):
    return {k: opts[k] for k in sorted(_KEY_TYPES) if k != "output"}


def _threads():
    raw = os.environ.get("HEUNBOUND_THREADS", "1")
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"HEUNBOUND_THREADS must be an integer >= 1, got {raw!r}") from None
    if value < 1:
        raise UsageError(f"HEUNBOUND_THREADS must be an integer >= 1, got {raw!r}")
    return value


def _quantize(opts, n=None, l=None):
    return permitted_frequencies(
        opts["case"], opts["m"], opts["a"],
        opts["l"] if l is None else l,
        opts["n"] if n is None else n,
        chi=opts["chi"],
        tol=opts["tol"] or DEFAULT_TOL,
        convention=opts["convention"],
        omega_min=opts["omega_min"],
        omega_max=opts["omega_max"],
    )


def _energy(opts, omega, n, l):
    if opts["case"] == "A":
        return energy_case_a(opts["m"], omega, n, l)
    return energy_case_b(opts["m"], omega, opts["chi"], n, l)


# -- commands ---------------------------------------------------------------

FREQ_COLUMNS = ["case", "n", "l", "root_index", "omega", "provenance", "residual"]
SPECTRUM_COLUMNS = ["case", "n", "l", "root_index", "omega", "E_plus", "E_minus", "residual", "error"]


def cmd_frequency(opts):
    q = _quantize(opts)
    rows = [
        {"case": q.case, "n": q.n, "l": q.l, "root_index": i, "omega": r.omega,
         "provenance": r.provenance, "residual": r.residual}
        for i, r in enumerate(q.roots)
    ]
    if opts["format"] == "json":
        doc = {"command": "frequency", "config": _config_record(opts), "roots": rows,
               "diagnostic": q.diagnostic, "rejected": list(q.rejected)}
        _emit(_json(doc), opts["output"])
    else:
        meta = [("convention", q.convention)]
        _emit(_csv(FREQ_COLUMNS, rows, meta), opts["output"])
    if not q.roots:
        print(q.diagnostic or "no physical root", file=sys.stderr)
        return EXIT_NO_ROOT
    return EXIT_OK


def _spectrum_cell(opts, n, l):
    try:
        q = _quantize(opts, n=n, l=l)
    except (ZeroCoupling, InvalidConfig, DegenerateOperator) as exc:
        return [{"case": opts["case"], "n": n, "l": l, "error": str(exc)}]
    if not q.roots:
        return [{"case": opts["case"], "n": n, "l": l, "error": q.diagnostic or "no physical root"}]
    rows = []
    for i, r in enumerate(q.roots):
        row = {"case": q.case, "n": n, "l": l, "root_index": i, "omega": r.omega, "residual": r.residual}
        try:
            level = _energy(opts, r.omega, n, l)
            row.update(E_plus=level.E_plus, E_minus=level.E_minus)
        except NegativeRadicand as exc:
            row["error"] = str(exc)
        rows.append(row)
    return rows


def cmd_spectrum(opts):
    n_max, l_max = opts["n_max"], opts["l_max"]
    if n_max > MAX_SWEEP or l_max > MAX_SWEEP:
        raise UsageError(f"--n-max and --l-max are capped at {MAX_SWEEP}")
    if l_max < 0:
        raise UsageError("--l-max must be >= 0")
    cells = [(n, l) for n in range(1, n_max + 1) for l in range(-l_max, l_max + 1)]
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        chunks = list(pool.map(lambda c: _spectrum_cell(opts, *c), cells))
    rows = [row for chunk in chunks for row in chunk]
    if opts["format"] == "json":
        _emit(_json({"command": "spectrum", "config": _config_record(opts), "rows": rows}), opts["output"])
    else:
        meta = [("case", opts["case"]), ("m", opts["m"]), ("a", opts["a"]), ("chi", opts["chi"]),
                ("convention", opts["convention"])]
        _emit(_csv(SPECTRUM_COLUMNS, rows, meta), opts["output"])
    return EXIT_OK


def _cfg(opts, omega):
    return PhysicalConfig(opts["m"], omega, opts["a"], opts["chi"], opts["n"], opts["l"])


def cmd_verify(opts):
    tol = opts["tol"] or 2e-3
    if opts["force_omega"] is not None:
        from .quantize import QuantizationResult

        q = QuantizationResult(opts["case"], opts["n"], opts["l"], (), opts["convention"])
        omegas = [opts["force_omega"]]
    else:
        q = _quantize(opts)
        if not q.roots:
            print(q.diagnostic or "no physical root", file=sys.stderr)
            return EXIT_NO_ROOT
        omegas = q.omegas
    report = cross_validate(
        _cfg(opts, omegas[0]), q, tol=tol, n_points=opts["grid_n"],
        rho_scale=opts["rho_max_scale"], omegas=omegas, raise_on_mismatch=False,
    )
    doc = {
        "command": "verify",
        "config": _config_record(opts),
        "passed": report.passed,
        "tol": tol,
        "entries": [
            {"omega": e.omega, "lambda_analytic": e.lambda_analytic, "lambda_oracle": e.lambda_oracle,
             "node_index": e.node_index, "rel_error": e.rel_error,
             "energy_consistent": e.energy_consistent, "passed": e.passed,
             "oracle_error_estimate": e.oracle_error_estimate}
            for e in report.entries
        ],
    }
    if opts["format"] == "json":
        sys.stdout.write(_json(doc))
    else:
        for e in report.entries:
            status = "PASS" if e.passed else "FAIL"
            sys.stdout.write(
                f"{status} omega={fmt(e.omega)} node={e.node_index} "
                f"lambda_analytic={fmt(e.lambda_analytic)} lambda_oracle={fmt(e.lambda_oracle)} "
                f"rel_error={fmt(e.rel_error)}\n"
            )
    if opts["output"]:
        _emit(_json(doc), opts["output"])
    if not report.passed:
        try:
            raise MismatchReport(report)
        except MismatchReport as exc:
            print(str(exc), file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_wavefunction(opts):
    if opts["force_omega"] is not None:
        omega = opts["force_omega"]
    else:
        q = _quantize(opts)
        if not q.roots:
            print(q.diagnostic or "no physical root", file=sys.stderr)
            return EXIT_NO_ROOT
        if not 0 <= opts["root_index"] < len(q.roots):
            raise UsageError(f"--root-index must be in [0, {len(q.roots) - 1}]")
        omega = q.roots[opts["root_index"]].omega
    cfg = _cfg(opts, omega)
    p = truncated_params(cfg)
    s = frobenius_coeffs(p, cfg.n + 10, opts["convention"], tol=opts["tol"] or DEFAULT_TOL)
    wf = build_wavefunction(p, s, grid_spec=GridSpec(opts["rho_max"], opts["points"]))
    rows = [{"rho": r, "f": v} for r, v in zip(wf.grid, wf.values)]
    meta = [("case", opts["case"]), ("m", opts["m"]), ("a", opts["a"]), ("chi", opts["chi"]),
            ("n", cfg.n), ("l", cfg.l), ("omega", omega), ("convention", opts["convention"]),
            ("norm_constant", wf.norm_constant), ("nodes", wf.nodes), ("points", len(wf.grid))]
    if opts["format"] == "json":
        doc = {"command": "wavefunction", "config": _config_record(opts), "omega": omega,
               "norm_constant": wf.norm_constant, "nodes": wf.nodes,
               "rho": wf.grid.tolist(), "f": wf.values.tolist()}
        _emit(_json(doc), opts["output"])
    else:
        _emit(_csv(["rho", "f"], rows, meta), opts["output"])
    return EXIT_OK


COMMANDS = {
    "frequency": cmd_frequency,
    "spectrum": cmd_spectrum,
    "verify": cmd_verify,
    "wavefunction": cmd_wavefunction,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        opts = resolve(ns)
        return COMMANDS[opts["command"]](opts)
    except UsageError as exc:
        print(f"heunbound: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ZeroCoupling, InvalidConfig, DegenerateOperator) as exc:
        print(f"heunbound: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NoPhysicalRoot as exc:
        print(f"heunbound: {exc}", file=sys.stderr)
        return EXIT_NO_ROOT
    except NotTruncated as exc:
        print(f"heunbound: NotTruncated: {exc}", file=sys.stderr)
        return EXIT_NOT_POLY


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
