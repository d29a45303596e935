"""
``qsphere`` command line.

Every subcommand maps onto one library operation. Results go to stdout as JSON lines
(``--format json``, the default) or as plain text; logs and the report digest go to stderr.
Exit codes: 0 success, 1 failed check or domain error, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Callable, Sequence
from fractions import Fraction
from typing import Any

from core.config import SUITE_NAMES, RunConfig, load_run_config
from core.error_handler import handle_cli_error
from core.formatters import format_header, format_kv, format_table
from core.logger import setup_logger
from core.validators import ValidationError, validate_half_integer
from qsphere import cocycle, fodc, spectral
from qsphere.errors import ArityError
from qsphere.expr import CONTEXTS, parse_expression
from qsphere.haar import haar
from qsphere.podles import pod_one
from qsphere.qscalar import EXACT, RationalQ, normalize
from qsphere.reports import CheckResult, exact_check, render_text, render_value, report_digest
from qsphere.suites import run_suite
from qsphere.uq import act_left, act_right, pair, r_action

logger = setup_logger("CLI")

Handler = Callable[[argparse.Namespace, RunConfig], int]


# ==========================================
# Output
# ==========================================


def _numeric(value: Any, q0: Fraction) -> str | None:
    if isinstance(value, RationalQ):
        return render_value(value.evaluate(q0, 64))
    return None


def _emit_record(command: str, fields: dict[str, Any], config: RunConfig) -> None:
    record = {"command": command, "q0": str(config.q0), **fields}
    if config.output_format == "json":
        print(json.dumps(record, sort_keys=True, ensure_ascii=False))
        return
    print(format_header(command))
    for key, value in fields.items():
        if value is not None:
            print(format_kv(key, value))


def _emit_checks(results: Sequence[CheckResult], config: RunConfig) -> int:
    lines = [r.to_json_line() for r in results]
    if config.output_format == "json":
        for line in lines:
            print(line)
    else:
        print(render_text(results))
        print(f"digest sha256:{report_digest(lines)}", file=sys.stderr)
    return 0 if all(r.passed for r in results) else 1


def _value_fields(value: Any, config: RunConfig) -> dict[str, Any]:
    return {"value": render_value(value), "numeric": _numeric(value, config.q0)}


# ==========================================
# Subcommands
# ==========================================


def cmd_verify(args: argparse.Namespace, config: RunConfig) -> int:
    logger.info(f"verify suites={','.join(config.suites)} seed={config.seed} q0={config.q0}")
    _, results = run_suite(config)
    return _emit_checks(results, config)


def cmd_normalize(args: argparse.Namespace, config: RunConfig) -> int:
    value = parse_expression(args.expr, args.context)
    if isinstance(value, RationalQ):
        value = normalize(value)
    _emit_record("normalize", {"expr": args.expr, "context": args.context, **_value_fields(value, config)}, config)
    return 0


def cmd_pair(args: argparse.Namespace, config: RunConfig) -> int:
    value = pair(parse_expression(args.f, "uq"), parse_expression(args.x, "algebra"))
    _emit_record("pair", {"f": args.f, "x": args.x, **_value_fields(value, config)}, config)
    return 0


def cmd_act(args: argparse.Namespace, config: RunConfig) -> int:
    f = parse_expression(args.f, "uq")
    x = parse_expression(args.x, "algebra")
    if args.side == "left":
        value = act_left(f, x)
    elif args.side == "right":
        value = act_right(x, f)
    else:
        value = r_action(f, x)
    _emit_record("act", {"f": args.f, "x": args.x, "side": args.side, "value": value.render()}, config)
    return 0


def cmd_haar(args: argparse.Namespace, config: RunConfig) -> int:
    value = haar(parse_expression(args.expr, "algebra"))
    _emit_record("haar", {"expr": args.expr, **_value_fields(value, config)}, config)
    return 0


def cmd_tau(args: argparse.Namespace, config: RunConfig) -> int:
    x0, x1, x2 = (parse_expression(text, "podles") for text in (args.x0, args.x1, args.x2))
    value = cocycle.tau(x0, x1, x2)
    _emit_record("tau", {"x0": args.x0, "x1": args.x1, "x2": args.x2, **_value_fields(value, config)}, config)
    return 0


def cmd_wedge(args: argparse.Namespace, config: RunConfig) -> int:
    """π(x dy ∧ dz) as a multiple of the volume form."""
    x = parse_expression(args.x, "podles") if args.x else pod_one()
    y, z = parse_expression(args.y, "podles"), parse_expression(args.z, "podles")
    value = fodc.wedge_coeff([(x, y)], [(pod_one(), z)])
    _emit_record("wedge", {"x": args.x or "1", "y": args.y, "z": args.z, "value": value.render()}, config)
    return 0


def cmd_volume_check(args: argparse.Namespace, config: RunConfig) -> int:
    results = [
        exact_check("volume_form", "fodc", fodc.volume_check(), pod_one()),
        exact_check("t2_pairing", "fodc", fodc.t2_pairing_check(), EXACT.one),
    ]
    return _emit_checks(results, config)


def cmd_spectrum(args: argparse.Namespace, config: RunConfig) -> int:
    space = spectral.TruncatedSpace(config.q0, config.cutoff, config.precision_bits)
    rows = spectral.spectrum_table(space)
    check = spectral.dirac_spectrum_check(space, config.tolerance("eigen"))
    if config.output_format == "json":
        for n, plus, minus, mult in rows:
            record = {"command": "spectrum", "q0": str(config.q0), "n": n, "plus": plus, "minus": minus, "mult": mult}
            print(json.dumps(record, sort_keys=True))
        print(check.to_json_line())
    else:
        print(format_header("spectrum", f"q0 = {config.q0}, L = {config.cutoff}"))
        table_rows = [(n, f"{p:.15g}", f"{m:.15g}", k) for n, p, m, k in rows]
        print(format_table(("n", "+[n]", "-[n]", "multiplicity"), table_rows))
        print(render_text([check]))
    return 0 if check.passed else 1


def cmd_trace_check(args: argparse.Namespace, config: RunConfig) -> int:
    space = spectral.TruncatedSpace(config.q0, config.trace_cutoff, config.precision_bits)
    xs = [parse_expression(text, "podles") for text in args.exprs]
    if len(xs) == 1:
        result = spectral.haar_trace_check(xs[0], config.z, space, config.tolerance("haar_trace"))
    elif len(xs) == 3:
        result = spectral.tau_trace_check(*xs, config.z, space, config.tolerance("tau_trace"))
    else:
        raise ArityError(f"trace-check takes one expression (Haar trace) or three (τ trace), got {len(xs)}")
    return _emit_checks([result], config)


def cmd_zeta(args: argparse.Namespace, config: RunConfig) -> int:
    z = config.z
    merom = spectral.zeta_merom(z, args.k_max, config.q0)
    fields: dict[str, Any] = {"z": str(z), "merom": render_value(merom)}
    if z.real > 2:
        fields["series"] = render_value(spectral.zeta_series(z, config.trace_cutoff, config.q0))
        fields["L"] = config.trace_cutoff
        fields["tail_bound"] = spectral.zeta_tail_bound(z, config.trace_cutoff, config.q0)
    _emit_record("zeta", fields, config)
    return 0


def cmd_residue(args: argparse.Namespace, config: RunConfig) -> int:
    results = [spectral.residue_check(config.q0, args.eps, config.tolerance("residue"))]
    if args.exprs:
        if len(args.exprs) != 3:
            raise ArityError(f"residue takes no expressions or three (τ trace), got {len(args.exprs)}")
        xs = [parse_expression(text, "podles") for text in args.exprs]
        space = spectral.TruncatedSpace(config.q0, config.trace_cutoff, config.precision_bits)
        results.append(spectral.tau_residue_check(*xs, space, config.tolerance("residue")))
    return _emit_checks(results, config)


def cmd_ladder(args: argparse.Namespace, config: RunConfig) -> int:
    from qsphere.corep import build_ladder, matrix_to_csv, matrix_to_json, mult_matrix

    l_max = validate_half_integer(args.l).sanitized_value
    if l_max is None:
        raise ValidationError(f"Spin must be a non-negative half-integer, got {args.l!r}", "INVALID_SPIN")
    if args.mult:
        matrix = mult_matrix(parse_expression(args.mult, "podles"), args.source, args.target, l_max)
        print(matrix_to_csv(matrix) if args.csv else matrix_to_json(matrix))
        return 0
    for v in build_ladder(l_max):
        fields = {"l": str(v.l), "j": str(v.j), "k": str(v.k), "elem": v.elem.render(), "norm2": render_value(v.norm2)}
        _emit_record("ladder", fields, config)
    return 0


COMMANDS: dict[str, Handler] = {
    "verify": cmd_verify,
    "normalize": cmd_normalize,
    "pair": cmd_pair,
    "act": cmd_act,
    "haar": cmd_haar,
    "tau": cmd_tau,
    "wedge": cmd_wedge,
    "volume-check": cmd_volume_check,
    "spectrum": cmd_spectrum,
    "trace-check": cmd_trace_check,
    "zeta": cmd_zeta,
    "residue": cmd_residue,
    "ladder": cmd_ladder,
}


# ==========================================
# Argument parsing
# ==========================================


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default=None, help="Output format (default: json)")
    common.add_argument("--config", default=None, help="Flat key = value config file")
    common.add_argument("--seed", default=None, help="Seed for randomized checks")
    common.add_argument("--q", dest="q0", default=None, help='Deformation parameter q0, e.g. "1/2" or "0.3"')
    common.add_argument("--L", dest="cutoff", default=None, help="Level cutoff for spectral commands")
    common.add_argument("--z", default=None, help="Spectral parameter for trace-check and zeta")

    parser = argparse.ArgumentParser(
        prog="qsphere", description="Exact and spectral computations on the Podleś sphere."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", parents=[common], help="Run verification suites")
    verify.add_argument("--suite", default=None, help=f"all or a comma list of: {', '.join(SUITE_NAMES)}")
    verify.add_argument("--samples", default=None, help="Samples per randomized property")

    normalize_p = sub.add_parser("normalize", parents=[common], help="Normal form of an expression")
    normalize_p.add_argument("expr")
    normalize_p.add_argument("--context", choices=CONTEXTS, default="algebra")

    pair_p = sub.add_parser("pair", parents=[common], help="Dual pairing <f, x>")
    pair_p.add_argument("f")
    pair_p.add_argument("x")

    act_p = sub.add_parser("act", parents=[common], help="f acting on x")
    act_p.add_argument("f")
    act_p.add_argument("x")
    act_p.add_argument("--side", choices=("left", "right", "R"), default="left")

    haar_p = sub.add_parser("haar", parents=[common], help="Haar state of an expression")
    haar_p.add_argument("expr")

    tau_p = sub.add_parser("tau", parents=[common], help="The twisted cyclic 2-cocycle")
    for name in ("x0", "x1", "x2"):
        tau_p.add_argument(name)

    wedge_p = sub.add_parser("wedge", parents=[common], help="Coefficient of x dy ∧ dz against the volume form")
    wedge_p.add_argument("y")
    wedge_p.add_argument("z")
    wedge_p.add_argument("--x", default=None, help="Left coefficient (default 1)")

    sub.add_parser("volume-check", parents=[common], help="Volume form normalization checks")
    sub.add_parser("spectrum", parents=[common], help="Truncated Dirac spectrum table")

    trace_p = sub.add_parser("trace-check", parents=[common], help="Trace formula against h or τ")
    trace_p.add_argument("exprs", nargs="+")

    zeta_p = sub.add_parser("zeta", parents=[common], help="ζ series and continuation")
    zeta_p.add_argument("--k-max", dest="k_max", type=int, default=60)

    residue_p = sub.add_parser("residue", parents=[common], help="Residue at z = 2 of ζ and of the τ trace")
    residue_p.add_argument("exprs", nargs="*")
    residue_p.add_argument("--eps", type=float, default=1e-4)

    ladder_p = sub.add_parser("ladder", parents=[common], help="Ladder vectors or multiplication matrices")
    ladder_p.add_argument("l", help="Largest spin, e.g. 7/2")
    ladder_p.add_argument("--mult", default=None, help="Podleś element whose matrix is printed")
    ladder_p.add_argument("--source", choices=("V+", "V-"), default="V+")
    ladder_p.add_argument("--target", choices=("V+", "V-"), default="V+")
    ladder_p.add_argument("--csv", action="store_true")
    return parser


def _overrides(args: argparse.Namespace) -> dict[str, str | None]:
    cutoff_key = "trace_cutoff" if args.command in ("trace-check", "zeta", "residue") else "cutoff"
    return {
        "output_format": args.format,
        "seed": args.seed,
        "q0": args.q0,
        "z": args.z,
        cutoff_key: args.cutoff,
        "suites": getattr(args, "suite", None),
        "samples": getattr(args, "samples", None),
    }


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_run_config(args.config, _overrides(args))
        return COMMANDS[args.command](args, config)
    except Exception as exc:
        return handle_cli_error(exc, logger)


if __name__ == "__main__":
    sys.exit(main())
