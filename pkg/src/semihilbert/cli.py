"""``semihilbert`` command-line front end.

Every subcommand reads matrices in ``shmat v1`` format and prints a report,
as ``key: value`` lines by default or as JSON with ``--json``. Exit codes:

    0  success
    1  numerical failure
    2  unreadable or malformed matrix file
    3  precondition violated or bad arguments
    4  fuzz property violation (counterexample bundle written)
"""

import argparse
import hashlib
import math
import sys

import numpy as np

from . import __version__, core, fuzz
from . import orthogonality as orth
from . import smoothness as sm
from .errors import FormatError, NumericalFailure, PreconditionError
from .matrixfile import emit_matrix, parse_matrix_text
from .tolerances import profile_from_env

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_FORMAT = 2
EXIT_PRECONDITION = 3
EXIT_PROPERTY = 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- report serialization -----------------------------------------------------


def _num(x):
    x = float(x)
    if not math.isfinite(x):
        return "null"
    if x == 0.0:
        return "-0.0" if math.copysign(1.0, x) < 0 else "0.0"
    text = format(x, ".17g")
    if "e" not in text and "." not in text:
        text += ".0"
    return text


def _plain(value):
    """Convert numpy values to builtins; complex numbers become ``{re, im}``."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": float(value.real), "im": float(value.imag)}
    if isinstance(value, (float, np.floating)):
        return float(value)
    return value


def to_json(value, indent=0):
    """JSON text with every float at 17 significant digits."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{pad}{_string(k)}: {to_json(v, indent + 1)}" for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(value, list):
        if not value:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in value):
            return "[" + ", ".join(to_json(v) for v in value) + "]"
        return "[\n" + ",\n".join(pad + to_json(v, indent + 1) for v in value) + "\n" + end + "]"
    if value is None:
        return "null"
    if value is True:
        return "true"
    if value is False:
        return "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return _num(value)
    if isinstance(value, complex):
        return to_json({"re": value.real, "im": value.imag}, indent)
    return _string(str(value))


def _string(s):
    out = ['"']
    for ch in s:
        if ch == '"':
            out.append('\\"')
        elif ch == "\\":
            out.append("\\\\")
        elif ch == "\n":
            out.append("\\n")
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04x}")
        else:
            out.append(ch)
    out.append('"')
    return "".join(out)


def to_text(value, prefix=""):
    lines = []
    for key, v in value.items():
        name = f"{prefix}{key}"
        if isinstance(v, dict) and v and not set(v) <= {"re", "im"}:
            lines.extend(to_text(v, name + "."))
        else:
            lines.append(f"{name}: {_text_value(v)}")
    return lines


def _text_value(v):
    if isinstance(v, dict) and set(v) == {"re", "im"}:
        return f"{v['re']:.17g}{v['im']:+.17g}j"
    if isinstance(v, list):
        return "[" + ", ".join(_text_value(x) for x in v) + "]"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.17g}"
    if v is None:
        return "none"
    return str(v)


# -- inputs -------------------------------------------------------------------


class Context:
    def __init__(self, args):
        try:
            self.profile, tol = profile_from_env()
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        self.tol = tol.updated(
            rank_tol=getattr(args, "rank_tol", None),
            cluster_tol=getattr(args, "cluster_tol", None),
            orth_tol=getattr(args, "orth_tol", None),
            gateaux_tol=getattr(args, "gateaux_tol", None),
        )
        for name, value in self.tol.as_dict().items():
            if not (value > 0 and math.isfinite(value)):
                raise UsageError(f"{name} must be a positive finite number")
        self.inputs = {}

    def load(self, label, path):
        try:
            with open(path, "rb") as fh:
                raw = fh.read()
        except OSError as exc:
            raise FormatError(f"cannot read {label} from {path}: {exc.strerror}") from None
        try:
            m = parse_matrix_text(raw.decode("utf-8"))
        except UnicodeDecodeError:
            raise FormatError(f"{path}: not UTF-8 text") from None
        except FormatError as exc:
            exc.path = path
            raise
        self.inputs[label] = {
            "path": path,
            "sha256": hashlib.sha256(raw).hexdigest(),
            "field": "complex" if np.iscomplexobj(m) else "real",
            "shape": list(m.shape),
        }
        return m

    def space(self, path):
        return core.SemiSpace.from_matrix(self.load("A", path), self.tol.rank_tol)

    def report(self, command, results):
        return {
            "command": command,
            "version": __version__,
            "inputs": self.inputs,
            "tolerance_profile": self.profile,
            "tolerances": self.tol.as_dict(),
            "results": results,
        }


def _data_field(*mats):
    return "complex" if any(np.iscomplexobj(m) for m in mats) else "real"


def _vector(x, field):
    x = np.asarray(x)
    return x.real if field == "real" else x


# -- subcommands --------------------------------------------------------------


def cmd_norm(args, ctx):
    sp = ctx.space(args.a)
    t = ctx.load("T", args.t)
    sigma = core.a_op_norm(t, sp, bounded_tol=ctx.tol.bounded_tol)
    return {
        "a_rank": sp.rank,
        "a_bounded": True,
        "a_op_norm": sigma,
        "a_op_norm_generalized": core.a_op_norm_generalized(t, sp),
    }


def cmd_adjoint(args, ctx):
    sp = ctx.space(args.a)
    t = ctx.load("T", args.t)
    # in finite dimensions the Douglas criterion is equivalent to A-boundedness
    ts = core.a_adjoint(t, sp, ctx.tol.bounded_tol)
    field = _data_field(sp.matrix, t)
    if field == "real":
        ts = ts.real
    lhs = sp.matrix @ ts
    rhs = np.asarray(t).conj().T @ sp.matrix
    return {
        "admits_adjoint": True,
        "adjoint": ts,
        "adjoint_shmat": emit_matrix(ts, field),
        "intertwining_residual": float(np.linalg.norm(lhs - rhs, 2)),
        "a_op_norm": core.a_op_norm(t, sp),
        "adjoint_a_op_norm": core.a_op_norm(ts, sp),
    }


def cmd_attain(args, ctx):
    sp = ctx.space(args.a)
    t = ctx.load("T", args.t)
    att = core.attainment_basis(t, sp, ctx.tol.cluster_tol, ctx.tol.bounded_tol)
    field = _data_field(sp.matrix, t)
    return {
        "a_op_norm": att.norm,
        "dimension": att.dimension,
        "vectors": [_vector(v, field) for v in att.ambient_vectors.T],
    }


def cmd_orth(args, ctx):
    sp = ctx.space(args.a)
    t = ctx.load("T", args.t)
    s = ctx.load("S", args.s)
    v = orth.is_birkhoff_orthogonal(
        t, s, sp, ctx.tol.orth_tol, ctx.tol.cluster_tol, bounded_tol=ctx.tol.bounded_tol
    )
    out = {
        "verdict": "orthogonal" if v.orthogonal else "not orthogonal",
        "orthogonal": v.orthogonal,
        "margin": v.margin,
        "certificate_angle": v.certificate_angle,
    }
    if args.witness and v.orthogonal:
        x = v.witness
        field = _data_field(sp.matrix, t, s)
        out["witness"] = _vector(x, field)
        out["witness_checks"] = {
            "a_norm": core.a_norm_vec(x, sp),
            "t_x_a_norm": core.a_norm_vec(np.asarray(t) @ x, sp),
            "inner_tx_sx": v.witness_value.real if field == "real" else v.witness_value,
        }
    return out


def cmd_smooth(args, ctx):
    sp = ctx.space(args.a)
    t = ctx.load("T", args.t)
    rep = sm.is_a_smooth(t, sp, ctx.tol.cluster_tol, ctx.tol.bounded_tol)
    return {
        "verdict": "smooth" if rep.smooth else "not smooth",
        "smooth": rep.smooth,
        "top_multiplicity": rep.top_multiplicity,
        "a_op_norm": rep.a_norm,
        "spectral_gap": rep.spectral_gap,
        "borderline": rep.borderline,
        "singular_values": rep.singular_values,
        "x0": None if rep.x0 is None else _vector(rep.x0, _data_field(sp.matrix, t)),
    }


def cmd_gateaux(args, ctx):
    sp = ctx.space(args.a)
    t = ctx.load("T", args.t)
    s = ctx.load("S", args.s)
    g = sm.gateaux_derivatives(t, s, sp, ctx.tol.gateaux_tol, ctx.tol.cluster_tol)
    out = {
        "rho_minus": g.rho_minus,
        "rho_plus": g.rho_plus,
        "differentiable": g.differentiable,
    }
    if args.fd:
        f = sm.gateaux_fd(t, s, sp, tol=ctx.tol.gateaux_tol)
        out["fd"] = {
            "rho_minus": f.rho_minus,
            "rho_plus": f.rho_plus,
            "max_deviation": max(abs(f.rho_minus - g.rho_minus), abs(f.rho_plus - g.rho_plus)),
        }
    return out


def cmd_blockdiag(args, ctx):
    sp = ctx.space(args.a)
    m = ctx.load("M", args.m)
    n = ctx.load("N", args.n)
    rep = sm.block_smoothness_check(m, n, sp, ctx.tol.cluster_tol)
    upper, lower, _ = sm.block_norming_components(m, n, sp, ctx.tol.cluster_tol)
    out = {
        "norm_m": rep.norm_m,
        "norm_n": rep.norm_n,
        "branch": rep.branch,
        "predicted_smooth": rep.predicted,
        "computed_smooth": rep.computed,
        "consistent": rep.consistent,
        "norming_upper_a_norms": upper,
        "norming_lower_a_norms": lower,
    }
    if not rep.consistent:
        raise NumericalFailure("block-diagonal prediction disagrees with the direct verdict", out)
    return out


def l2_truncation(n):
    """``A_N = diag(1/k)`` and ``T_N e_k = k^{-3/2} e_1`` for ``k = 1..N``."""
    k = np.arange(1, n + 1, dtype=float)
    a = np.diag(1.0 / k)
    t = np.zeros((n, n))
    t[0] = k**-1.5
    return a, t


def cmd_example_l2(args, ctx):
    if args.n < 1:
        raise UsageError("--n must be at least 1")
    a, t = l2_truncation(args.n)
    sp = core.SemiSpace.from_matrix(a, ctx.tol.rank_tol)
    sigma = core.a_op_norm(t, sp)
    k = np.arange(1, args.n + 1, dtype=float)
    closed = math.sqrt(math.fsum(1.0 / k**2))
    limit = math.pi / math.sqrt(6)
    return {
        "n": args.n,
        "a_op_norm": sigma,
        "a_op_norm_generalized": core.a_op_norm_generalized(t, sp),
        "partial_sum_sqrt": closed,
        "limit": limit,
        "deviation_from_partial_sum": abs(sigma - closed),
        "deviation_from_limit": abs(sigma - limit),
    }


def cmd_fuzz(args, ctx):
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    if not 2 <= args.dim_max <= 8:
        raise UsageError("--dim-max must lie in 2..8")
    if args.corrupt_property is not None and args.corrupt_property not in fuzz.PROPERTIES:
        raise UsageError(f"unknown property {args.corrupt_property!r}")
    res = fuzz.run_fuzz(
        args.trials, args.dim_max, args.seed, args.field, ctx.tol, args.out,
        corrupt=args.corrupt_property,
    )
    out = {
        "trials": args.trials,
        "dim_max": args.dim_max,
        "seed": args.seed,
        "field": args.field or "mixed",
        "pass_counts": res.pass_counts,
        "failures": [
            {"trial": f.trial, "property": f.prop, "detail": f.detail, "bundle": f.bundle}
            for f in res.failures
        ],
        "ok": res.ok,
    }
    return out, (EXIT_OK if res.ok else EXIT_PROPERTY)


# -- argument parsing ---------------------------------------------------------


def _pos_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (value > 0 and math.isfinite(value)):
        raise argparse.ArgumentTypeError("must be a positive finite number")
    return value


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    common.add_argument("--rank-tol", type=_pos_float, help="relative numerical-rank tolerance for A")
    common.add_argument("--cluster-tol", type=_pos_float, help="relative singular-value cluster tolerance")
    common.add_argument("--orth-tol", type=_pos_float, help="orthogonality margin tolerance")
    common.add_argument("--gateaux-tol", type=_pos_float, help="rho_+ - rho_- tolerance")

    p = _Parser(prog="semihilbert", description="Operator geometry on semi-Hilbert spaces.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text, *matrices):
        q = sub.add_parser(name, parents=[common], help=help_text)
        for flag in matrices:
            q.add_argument(f"--{flag}", required=True, metavar="FILE")
        q.set_defaults(func=func)
        return q

    add("norm", cmd_norm, "A-operator seminorm of T", "a", "t")
    add("adjoint", cmd_adjoint, "A-adjoint of T", "a", "t")
    add("attain", cmd_attain, "basis of the A-norm attainment set of T", "a", "t")
    q = add("orth", cmd_orth, "decide whether T is A-orthogonal to S", "a", "t", "s")
    q.add_argument("--witness", action="store_true", help="print a norming witness vector")
    add("smooth", cmd_smooth, "decide A-smoothness of T", "a", "t")
    q = add("gateaux", cmd_gateaux, "one-sided derivatives of the seminorm at T along S", "a", "t", "s")
    q.add_argument("--fd", action="store_true", help="also report finite-difference estimates")
    add("blockdiag", cmd_blockdiag, "smoothness of diag(M, N) under diag(A, A)", "a", "m", "n")
    q = add("example-l2", cmd_example_l2, "truncated weighted l2 example")
    q.add_argument("--n", type=int, required=True, metavar="N")
    q = add("fuzz", cmd_fuzz, "randomized property checks")
    q.add_argument("--trials", type=int, default=200)
    q.add_argument("--dim-max", type=int, default=6)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--field", choices=("real", "complex"))
    q.add_argument("--out", default="fuzz-counterexamples", help="directory for counterexample bundles")
    q.add_argument("--corrupt-property", help=argparse.SUPPRESS)
    return p


def _emit(report, as_json, stream):
    report = _plain(report)
    if as_json:
        stream.write(to_json(report) + "\n")
    else:
        stream.write("\n".join(to_text(report)) + "\n")


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        stderr.write(f"semihilbert: error: {exc}\n")
        return EXIT_PRECONDITION
    as_json = getattr(args, "json", False)
    try:
        ctx = Context(args)
        out = args.func(args, ctx)
        code = EXIT_OK
        if isinstance(out, tuple):
            out, code = out
        _emit(ctx.report(args.command, out), as_json, stdout)
        return code
    except UsageError as exc:
        stderr.write(f"semihilbert: error: {exc}\n")
        return EXIT_PRECONDITION
    except FormatError as exc:
        return _fail(stderr, "format error", exc, EXIT_FORMAT)
    except PreconditionError as exc:
        return _fail(stderr, f"precondition violated ({type(exc).__name__})", exc, EXIT_PRECONDITION)
    except NumericalFailure as exc:
        return _fail(stderr, "numerical failure", exc, EXIT_NUMERICAL)


def _fail(stderr, kind, exc, code):
    message = exc.args[0] if exc.args else ""
    path = getattr(exc, "path", None)
    if path:
        message = f"{path}: {message}"
    stderr.write(f"semihilbert: {kind}: {message or type(exc).__name__}\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
