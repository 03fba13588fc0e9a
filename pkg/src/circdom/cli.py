"""Command-line front end.

Every subcommand reads JSON inputs, writes a JSON report (to ``--out`` or
standard output) and exits with 0 on success, 2 on invalid input, 3 on a
numerical failure, 64 on bad usage and 74 on file I/O errors.  Library
errors print their class name on standard error.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys

import numpy as np

from . import blaschke, cauchy, corona, factorization
from .errors import CircdomError, InvalidInput
from .funcrep import ComplexRational, evaluate
from .geometry import CircularDomain

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_USAGE = 64
EXIT_IO = 74


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# --------------------------------------------------------------------------
# serialization


def _format_float(x):
    if not math.isfinite(x):
        raise InvalidInput(f"cannot serialize non-finite value {x}")
    text = format(x, ".17g")
    if "." not in text and "e" not in text and "n" not in text:
        text += ".0"
    return text


def dumps(obj, indent=2, _level=0):
    """Deterministic JSON: sorted keys, floats with 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}"
                 for k, v in sorted(obj.items(), key=lambda kv: str(kv[0]))]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _format_float(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return dumps([float(obj.real), float(obj.imag)], indent, _level)
    if isinstance(obj, np.ndarray):
        return dumps(obj.tolist(), indent, _level)
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _read_json(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path}: not valid JSON ({exc.msg})") from None
    if not isinstance(data, dict):
        raise InvalidInput(f"{path}: expected a JSON object")
    return data


def load_domain(path):
    return CircularDomain.from_dict(_read_json(path))


def load_function(path):
    data = _read_json(path)
    return ComplexRational.from_dict(data.get("function", data))


def _parse_list(text, what):
    try:
        value = json.loads(text)
    except json.JSONDecodeError:
        raise InvalidInput(f"{what} must be a JSON list") from None
    if not isinstance(value, list):
        raise InvalidInput(f"{what} must be a JSON list")
    return value


def _parse_points(text):
    value = _parse_list(text, "--at")
    if value and not isinstance(value[0], list):
        value = [value]
    try:
        return np.array([complex(float(a), float(b)) for a, b in value])
    except (TypeError, ValueError):
        raise InvalidInput("--at expects [[x, y], ...]") from None


def _emit(payload, out, stdout):
    payload = dict(payload)
    payload["schema_version"] = SCHEMA_VERSION
    text = dumps(corona._jsonable(payload)) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name} is required for {args.command}")


# --------------------------------------------------------------------------
# subcommands


def cmd_validate(args, stdout):
    _need(args, "domain")
    domain = load_domain(args.domain)
    return {
        "valid": True,
        "connectivity": domain.connectivity,
        "real_symmetric": corona.conjugate_partners(domain) is not None,
        "domain": domain.to_dict(),
    }


def cmd_decompose(args, stdout):
    _need(args, "domain", "f")
    domain, f = load_domain(args.domain), load_function(args.f)
    parts = cauchy.cauchy_decompose(f, domain, samples=args.samples)
    return {"parts": [p.to_dict() for p in parts.parts]}


def cmd_factorize(args, stdout):
    _need(args, "domain", "f")
    domain, f = load_domain(args.domain), load_function(args.f)
    fac = factorization.multiplicative_factorize(f, domain, samples=args.samples)
    if args.symmetric:
        fac = factorization.symmetrize_factorization(fac, domain, samples=args.samples)
    out = fac.to_dict()
    out["symmetric"] = bool(args.symmetric)
    return out


def cmd_winding(args, stdout):
    _need(args, "f", "circle")
    f = load_function(args.f)
    values = _parse_list(args.circle, "--circle")
    if len(values) != 3:
        raise InvalidInput("--circle expects [cx, cy, r]")
    cx, cy, r = (float(v) for v in values)
    k = blaschke.winding_number(f, blaschke.circle(complex(cx, cy), r, args.samples))
    if not args.out:
        stdout.write(f"{k}\n")
        return None
    return {"winding": k, "circle": [cx, cy, r]}


def cmd_zeros(args, stdout):
    _need(args, "domain", "f")
    domain, f = load_domain(args.domain), load_function(args.f)
    found = blaschke.locate_zeros(f, domain, samples=args.samples)
    flat = [z for z, m in found for _ in range(m)]
    split = blaschke.split_zeros(flat, domain)
    return {
        "zeros": [[z.real, z.imag, m] for z, m in found],
        "components": [[[z.real, z.imag] for z in comp] for comp in split],
    }


def cmd_blaschke_eval(args, stdout):
    _need(args, "at")
    if args.blaschke:
        b = blaschke.GeneralizedBlaschke.from_dict(_read_json(args.blaschke))
    else:
        _need(args, "domain", "zeros")
        domain = load_domain(args.domain)
        zs = _parse_list(args.zeros, "--zeros")
        try:
            zs = [complex(float(a), float(c)) for a, c in zs]
        except (TypeError, ValueError):
            raise InvalidInput("--zeros expects [[x, y], ...]") from None
        if not 0 <= args.component < domain.connectivity:
            raise InvalidInput(f"component {args.component} out of range")
        b = blaschke.component_blaschke(domain, args.component, zs)
    z = _parse_points(args.at)
    vals = b(z)
    return {
        "blaschke": b.to_dict(),
        "points": [[p.real, p.imag] for p in z],
        "values": [[v.real, v.imag] for v in vals],
        "modulus": [float(abs(v)) for v in vals],
    }


def _pair(args):
    _need(args, "domain", "f", "g")
    return load_domain(args.domain), load_function(args.f), load_function(args.g)


def cmd_corona_check(args, stdout):
    domain, f, g = _pair(args)
    lb = corona.lower_bound_detail([f, g], domain, res=args.grid_res)
    return {
        "delta": lb.delta,
        "point": lb.point,
        "grid_resolution": lb.grid_resolution,
        "unimodular": lb.delta > corona.DELTA_MIN,
        "delta_min": corona.DELTA_MIN,
    }


def cmd_bezout(args, stdout):
    domain, f, g = _pair(args)
    cert = corona.bezout_solve([f, g], domain, n=args.series)
    if args.symmetric:
        cert = corona.symmetrize_bezout([f, g], cert, domain)
    out = cert.to_dict()
    out["symmetric"] = bool(args.symmetric)
    return out


def cmd_perturb(args, stdout):
    domain, f, g = _pair(args)
    if args.epsilon is None:
        raise UsageError("--epsilon is required for perturb")
    res = corona.approximate_by_unimodular(
        f, g, domain, args.epsilon, symmetric=args.symmetric, seed=args.seed
    )
    return res.to_dict()


def cmd_grid(args, stdout):
    _need(args, "domain", "f")
    domain = load_domain(args.domain)
    fs = [load_function(args.f)]
    if args.g:
        fs.append(load_function(args.g))
    pts = domain.grid(args.grid_res)
    vals = np.zeros(pts.shape)
    for h in fs:
        vals = vals + np.abs(evaluate(h, pts))
    buf = io.StringIO()
    buf.write("x,y,value\n")
    for p, v in zip(pts, vals):
        buf.write(f"{_format_float(p.real)},{_format_float(p.imag)},{_format_float(float(v))}\n")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(buf.getvalue())
    else:
        stdout.write(buf.getvalue())
    return None


COMMANDS = {
    "validate": cmd_validate,
    "decompose": cmd_decompose,
    "factorize": cmd_factorize,
    "winding": cmd_winding,
    "zeros": cmd_zeros,
    "blaschke-eval": cmd_blaschke_eval,
    "corona-check": cmd_corona_check,
    "bezout": cmd_bezout,
    "perturb": cmd_perturb,
    "grid": cmd_grid,
}


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--domain", help="circular domain JSON")
    common.add_argument("--f", help="function JSON (zeros, poles, scale)")
    common.add_argument("--g", help="second function JSON")
    common.add_argument("--epsilon", type=float, help="approximation budget")
    common.add_argument("--symmetric", action="store_true", help="real-symmetric mode")
    common.add_argument("--samples", type=int, default=256, help="boundary samples per circle")
    common.add_argument("--series", type=int, default=None, help="starting Bezout series order")
    common.add_argument("--seed", type=int, default=0, help="seed for shift directions")
    common.add_argument("--out", help="output path (default: standard output)")
    common.add_argument("--grid-res", type=int, default=32, help="polar grid resolution")
    common.add_argument("--circle", help="'[cx, cy, r]' for winding")
    common.add_argument("--blaschke", help="Blaschke product JSON for blaschke-eval")
    common.add_argument("--zeros", help="'[[x, y], ...]' zeros for blaschke-eval")
    common.add_argument("--component", type=int, default=0, help="component index for blaschke-eval")
    common.add_argument("--at", help="'[[x, y], ...]' evaluation points")

    parser = _Parser(prog="circdom", description="Function theory on circular domains.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def run(argv=None, stdout=None, stderr=None):
    """Run one subcommand and return the process exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
        if args.samples < 16 or args.samples & (args.samples - 1):
            raise UsageError("--samples must be a power of two >= 16")
        if args.grid_res < 2:
            raise UsageError("--grid-res must be at least 2")
        payload = COMMANDS[args.command](args, stdout)
        if payload is not None:
            _emit(payload, args.out, stdout)
    except UsageError as exc:
        stderr.write(f"UsageError: {exc}\n")
        return EXIT_USAGE
    except CircdomError as exc:
        stderr.write(f"{exc.name}: {exc}\n")
        return exc.exit_code
    except OSError as exc:
        stderr.write(f"IOError: {exc}\n")
        return EXIT_IO
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
