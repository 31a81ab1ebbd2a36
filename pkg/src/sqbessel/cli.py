"""Command-line front end.

Examples
--------
::

    sqbessel kernel --tau 0 --x 4 --method direct
    sqbessel forward --f builtin:exp3sqrt --tau 0:5:21
    sqbessel invert-forward --f builtin:k0sqrt --x 0.5:5:10 --format json
    sqbessel verify --suite lemma2

Exit status is 0 on success, 1 when a verification suite fails (or a
computation cannot reach its tolerance) and 2 on usage or input errors.
"""

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import catalog, kernel, transform, verify
from .errors import SchemaError, SqBesselError
from .mellin import DECAY_KINDS, SampledFunction
from .pde import WedgeSpec, evaluate_u, pde_residual_polar
from .quad import DEFAULT_QUAD

__all__ = ["RunConfig", "run", "main", "parse_grid", "load_sampled_function",
           "format_number"]

COMMANDS = ("kernel", "forward", "inverse", "invert-forward", "invert-inverse",
            "pde", "verify")
KERNEL_METHODS = {"direct": "direct", "mb": "mellin_barnes",
                  "cosine": "cosine_rep"}
SUITE_NAMES = ("lemma1", "lemma2", "bounds", "theorem1", "theorem3",
               "roundtrip-f", "roundtrip-g", "pde")


class UsageError(SqBesselError, ValueError):
    """Bad command-line arguments."""


def parse_grid(text, name="grid"):
    """``"a:b:n"`` (n equally spaced points) or a single number."""
    parts = str(text).split(":")
    try:
        if len(parts) == 1:
            return np.array([float(parts[0])])
        if len(parts) == 3:
            a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
            if n < 1:
                raise UsageError(f"{name}: count must be >= 1")
            if not (math.isfinite(a) and math.isfinite(b)):
                raise UsageError(f"{name}: bounds must be finite")
            return np.linspace(a, b, n)
    except ValueError as exc:
        if isinstance(exc, UsageError):
            raise
        raise UsageError(f"{name}: cannot parse {text!r}") from None
    raise UsageError(f"{name}: expected a number or start:stop:count, got {text!r}")


def format_number(v):
    """Seventeen significant digits in scientific notation."""
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return f"{v:.16e}"


def _field(obj, key, where):
    if key not in obj:
        raise SchemaError(f"{where}: missing field '{key}'")
    return obj[key]


def _numbers(seq, key, where):
    if not isinstance(seq, list) or not seq:
        raise SchemaError(f"{where}: field '{key}' must be a non-empty list")
    for i, v in enumerate(seq):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise SchemaError(f"{where}: field '{key}'[{i}] is not a number")
    return np.asarray(seq, dtype=float)


def _parse_json(text, where):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{where}: line {exc.lineno} column {exc.colno}: "
                          f"{exc.msg}") from None


def sampled_function_from_dict(obj, where="<input>"):
    """Validate a schema dictionary and build the :class:`SampledFunction`."""
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: top level must be an object")
    domain = _field(obj, "domain", where)
    if domain not in ("half_line", "real_line"):
        raise SchemaError(f"{where}: field 'domain' must be half_line or real_line")
    grid = _numbers(_field(obj, "grid", where), "grid", where)
    values = _numbers(_field(obj, "values", where), "values", where)
    if grid.size != values.size:
        raise SchemaError(f"{where}: 'grid' and 'values' differ in length")
    if grid.size < 2 or np.any(np.diff(grid) <= 0):
        raise SchemaError(f"{where}: field 'grid' must be strictly increasing")
    if domain == "half_line" and grid[0] <= 0:
        raise SchemaError(f"{where}: field 'grid' must be positive on the half line")
    decay = _field(obj, "decay", where)
    if not isinstance(decay, dict):
        raise SchemaError(f"{where}: field 'decay' must be an object")
    kind = _field(decay, "kind", where + ": decay")
    if kind not in DECAY_KINDS:
        raise SchemaError(f"{where}: field 'decay.kind' must be one of {DECAY_KINDS}")
    a = _field(decay, "a", where + ": decay")
    if isinstance(a, bool) or not isinstance(a, (int, float)):
        raise SchemaError(f"{where}: field 'decay.a' is not a number")
    try:
        return SampledFunction(grid, values, (kind, float(a)), domain=domain)
    except SqBesselError as exc:
        raise SchemaError(f"{where}: {exc}") from None


def load_sampled_function(path):
    """Read a function: ``builtin:NAME`` or a JSON file following the schema."""
    if path.startswith("builtin:"):
        try:
            return catalog.builtin(path[len("builtin:"):])
        except KeyError as exc:
            raise UsageError(str(exc.args[0])) from None
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None
    return sampled_function_from_dict(_parse_json(text, path), path)


def _read_table(path):
    """Columns of a CSV (header row) or of this tool's JSON output."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None
    if path.endswith(".json"):
        obj = _parse_json(text, path)
        if isinstance(obj, dict) and "columns" in obj and "rows" in obj:
            cols = obj["columns"]
            rows = np.asarray(obj["rows"], dtype=float)
            return {c: rows[:, i] for i, c in enumerate(cols)}
        return None
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise SchemaError(f"{path}: empty file") from None
    rows = []
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise SchemaError(f"{path}: line {lineno}: expected {len(header)} fields")
        try:
            rows.append([float(v) for v in row])
        except ValueError:
            raise SchemaError(f"{path}: line {lineno}: non-numeric field") from None
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    arr = np.asarray(rows)
    return {c.strip(): arr[:, i] for i, c in enumerate(header)}


@dataclass(frozen=True)
class RunConfig:
    """Everything one invocation needs."""

    command: str
    tau: np.ndarray | None = None
    x: np.ndarray | None = None
    r: np.ndarray | None = None
    theta: np.ndarray | None = None
    beta: float = math.pi
    method: str | None = None
    f: str | None = None
    g: str | None = None
    suite: str | None = None
    abs_tol: float | None = None
    rel_tol: float | None = None
    contour_abscissa: float | None = None
    contour_height: float | None = None
    strict_norm: bool = False
    threads: int = 1
    out: str | None = None
    fmt: str = "csv"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.threads < 1:
            raise UsageError("--threads must be >= 1")
        if self.fmt not in ("csv", "json"):
            raise UsageError("--format must be csv or json")
        for name in ("tau", "x", "r", "theta"):
            v = getattr(self, name)
            if v is not None and np.asarray(v).size == 0:
                raise UsageError(f"--{name} grid is empty")

    def quad(self):
        changes = {}
        if self.abs_tol is not None:
            changes["abs_tol"] = self.abs_tol
        if self.rel_tol is not None:
            changes["rel_tol"] = self.rel_tol
        try:
            return DEFAULT_QUAD.replace(**changes)
        except ValueError as exc:
            raise UsageError(str(exc)) from None


def _pmap(fn, items, threads):
    """Map in a thread pool, results in input order."""
    items = list(items)
    if threads == 1 or len(items) < 2:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _need(value, flag):
    if value is None:
        raise UsageError(f"{flag} is required")
    return value


# ---------------------------------------------------------------------------
# commands


def _cmd_kernel(cfg):
    taus = _need(cfg.tau, "--tau")
    xs = _need(cfg.x, "--x")
    method = KERNEL_METHODS.get(cfg.method or "direct")
    if method is None:
        raise UsageError(f"--method must be one of {sorted(KERNEL_METHODS)}")
    if np.any(xs <= 0):
        raise UsageError("--x must be positive")
    pts = [(t, x) for t in taus for x in xs]

    def one(p):
        t, x = p
        if method == "mellin_barnes":
            spec = kernel.default_contour(
                t, 0.125 if cfg.contour_abscissa is None else cfg.contour_abscissa)
            if cfg.contour_height is not None:
                spec = replace(spec, height=cfg.contour_height)
            quad = None if cfg.abs_tol is None and cfg.rel_tol is None else cfg.quad()
            return kernel.phi_mellin_barnes(t, x, spec, quad)
        return kernel.phi(t, x, method=method)

    vals = _pmap(one, pts, cfg.threads)
    rows = [[t, x, v] for (t, x), v in zip(pts, vals)]
    return ["tau", "x", "value"], rows, {"method": method}


def _cmd_forward(cfg):
    f = load_sampled_function(_need(cfg.f, "--f"))
    taus = _need(cfg.tau, "--tau")
    method = {"direct": "direct", "mb": "mellin", None: "auto"}.get(cfg.method)
    if method is None:
        raise UsageError("forward supports --method direct or mb")
    quad = cfg.quad()
    norm = transform.weighted_norm(f, quad)
    if not math.isfinite(norm):
        if cfg.strict_norm:
            raise UsageError("forward: int |f| e^{2 sqrt x} dx diverges")
        print("warning: forward: int |f| e^{2 sqrt x} dx diverges; the norm "
              "bound is not checked", file=sys.stderr)

    def one(t):
        return transform.forward_F(f, [t], quad, method=method,
                                   enforce_norm=False).values[0]

    vals = _pmap(one, taus, cfg.threads)
    res = transform.ForwardResult(taus, vals, norm, method)
    rows = [[t, v] for t, v in zip(res.tau_grid, res.values)]
    return ["tau", "value"], rows, {"weighted_norm": norm}


def _cmd_inverse(cfg):
    g = load_sampled_function(_need(cfg.g, "--g"))
    xs = _need(cfg.x, "--x")
    if np.any(xs <= 0):
        raise UsageError("--x must be positive")
    quad = cfg.quad()
    norm = transform.l1_norm(g, quad)

    def one(x):
        return transform.inverse_G(g, [x], quad).values[0]

    vals = _pmap(one, xs, cfg.threads)
    res = transform.InverseResult(xs, vals, norm)
    rows = [[x, v] for x, v in zip(res.x_grid, res.values)]
    return ["x", "value"], rows, {"l1_norm_g": norm}


def _forward_input(cfg):
    spec = _need(cfg.f, "--f")
    if spec.startswith("builtin:"):
        f = load_sampled_function(spec)
        taus = cfg.tau if cfg.tau is not None else np.linspace(0.0, 12.0, 241)
        return transform.forward_F(f, taus, cfg.quad(), enforce_norm=False)
    table = _read_table(spec)
    if table is None:
        return load_sampled_function(spec)
    if "tau" not in table or "value" not in table:
        raise SchemaError(f"{spec}: expected columns 'tau' and 'value'")
    return transform.ForwardResult(table["tau"], table["value"], math.inf)


def _cmd_invert_forward(cfg):
    Ff = _forward_input(cfg)
    xs = cfg.x if cfg.x is not None else np.linspace(0.5, 5.0, 19)
    if np.any(xs <= 0):
        raise UsageError("--x must be positive")
    inv = transform.FInverter(Ff, cfg.quad())
    vals = _pmap(lambda x: inv.at(x)[0], xs, cfg.threads)
    return ["x", "value"], [[x, v] for x, v in zip(xs, vals)], {}


def _inverse_input(cfg):
    spec = _need(cfg.g, "--g")
    if spec.startswith("builtin:"):
        # exact Gg on the nodes avoids interpolating a sampled transform
        return transform.G_operator(load_sampled_function(spec), cfg.quad())
    table = _read_table(spec)
    if table is None:
        return load_sampled_function(spec)
    if "x" not in table or "value" not in table:
        raise SchemaError(f"{spec}: expected columns 'x' and 'value'")
    return transform.InverseResult(table["x"], table["value"], math.inf)


def _cmd_invert_inverse(cfg):
    Gg = _inverse_input(cfg)
    taus = cfg.tau if cfg.tau is not None else np.linspace(0.5, 3.0, 11)
    inv = transform.GInverter(Gg, cfg.quad())
    vals = _pmap(inv.at, taus, cfg.threads)
    return ["tau", "value"], [[t, v] for t, v in zip(taus, vals)], {}


def _cmd_pde(cfg):
    g = load_sampled_function(_need(cfg.g, "--g"))
    rs = _need(cfg.r, "--r")
    ths = _need(cfg.theta, "--theta")
    try:
        wedge = WedgeSpec(cfg.beta)
    except SqBesselError as exc:
        raise UsageError(f"--beta: {exc}") from None
    quad = cfg.quad()
    pts = [(r, th) for r in rs for th in ths]

    def one(p):
        r, th = p
        return (evaluate_u(g, r, th, wedge, quad),
                pde_residual_polar(g, r, th, wedge, quad=quad))

    vals = _pmap(one, pts, cfg.threads)
    rows = [[r, th, u, res] for (r, th), (u, res) in zip(pts, vals)]
    return ["r", "theta", "u", "residual"], rows, {"beta": cfg.beta}


def _cmd_verify(cfg):
    names = [cfg.suite] if cfg.suite else list(SUITE_NAMES)
    for n in names:
        if n not in verify.SUITES:
            raise UsageError(f"unknown suite {n!r}; choose from {list(SUITE_NAMES)}")
    reports = _pmap(verify.run_suite, names, cfg.threads)
    rows = []
    for rep in reports:
        for c in rep.checks:
            rows.append([rep.name, c.label, c.value, c.tol, "pass" if c.ok else "fail"])
    failed = [rep.name for rep in reports if not rep.passed]
    notes = {rep.name: rep.notes for rep in reports if rep.notes}
    return (["suite", "check", "value", "tol", "status"], rows,
            {"failed": failed, "notes": notes})


_DISPATCH = {
    "kernel": _cmd_kernel,
    "forward": _cmd_forward,
    "inverse": _cmd_inverse,
    "invert-forward": _cmd_invert_forward,
    "invert-inverse": _cmd_invert_inverse,
    "pde": _cmd_pde,
    "verify": _cmd_verify,
}


# ---------------------------------------------------------------------------
# output


def _cell(v):
    if isinstance(v, str):
        return v
    return format_number(v)


def _json_value(v):
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_json_value(x)}"
                               for k, x in v.items()) + "}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_json_value(x) for x in v) + "]"
    f = float(v)
    return format_number(f) if math.isfinite(f) else "null"


def render(command, columns, rows, meta, fmt):
    """Serialise a result table; numbers use :func:`format_number`."""
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_cell(v) for v in row])
        return buf.getvalue()
    body = ",\n  ".join(_json_value(r) for r in rows)
    return ("{\n"
            f'"command": {json.dumps(command)},\n'
            f'"columns": {_json_value(list(columns))},\n'
            f'"meta": {_json_value(meta)},\n'
            f'"rows": [\n  {body}\n]\n'
            "}\n")


def run(config):
    """Execute ``config``; returns the exit status."""
    try:
        columns, rows, meta = _DISPATCH[config.command](config)
        text = render(config.command, columns, rows, meta, config.fmt)
        if config.out:
            with open(config.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except ArithmeticError as exc:
        # numerical failure: tolerance, integrability or a violated bound
        print(f"error: {config.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {config.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    if config.command == "verify" and meta["failed"]:
        for name in meta["failed"]:
            print(f"verification failed: suite {name}", file=sys.stderr)
        for name, lines in meta["notes"].items():
            for line in lines:
                print(f"note: {name}: {line}", file=sys.stderr)
        return 1
    return 0


def build_parser():
    p = argparse.ArgumentParser(
        prog="sqbessel",
        description="Index transforms with squared Bessel kernels.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--tau", "--tau-grid", dest="tau",
                   help="number or start:stop:count")
    p.add_argument("--x", "--x-grid", dest="x", help="number or start:stop:count")
    p.add_argument("--r", help="number or start:stop:count")
    p.add_argument("--theta", help="number or start:stop:count")
    p.add_argument("--beta", type=float, default=math.pi,
                   help="wedge opening for the pde command (default pi)")
    p.add_argument("--method", choices=sorted(KERNEL_METHODS))
    p.add_argument("--f", help="path to a function file or builtin:NAME")
    p.add_argument("--g", help="path to a function file or builtin:NAME")
    p.add_argument("--suite", choices=SUITE_NAMES)
    p.add_argument("--abs-tol", type=float)
    p.add_argument("--rel-tol", type=float)
    p.add_argument("--contour-abscissa", type=float)
    p.add_argument("--contour-height", type=float)
    p.add_argument("--strict-norm", action="store_true",
                   help="fail when the weighted norm of f diverges")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out")
    p.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    return p


def config_from_args(ns):
    grids = {}
    for name in ("tau", "x", "r", "theta"):
        v = getattr(ns, name)
        grids[name] = None if v is None else parse_grid(v, "--" + name)
    return RunConfig(command=ns.command, beta=ns.beta, method=ns.method,
                     f=ns.f, g=ns.g, suite=ns.suite, abs_tol=ns.abs_tol,
                     rel_tol=ns.rel_tol, contour_abscissa=ns.contour_abscissa,
                     contour_height=ns.contour_height,
                     strict_norm=ns.strict_norm, threads=ns.threads,
                     out=ns.out, fmt=ns.fmt, **grids)


def main(argv=None):
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        cfg = config_from_args(ns)
    except (UsageError, SchemaError) as exc:
        print(f"error: {ns.command}: {exc}", file=sys.stderr)
        return 2
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
