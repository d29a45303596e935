"""
Check records emitted by the verification suites.

One ``CheckResult`` per line of the JSON-lines stream; no timestamps, sorted keys,
so identical runs produce byte-identical output.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Sequence
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any

import mpmath

from core.formatters import format_divider, format_header, format_status
from qsphere.errors import QSphereError
from utils.hash_util import generate_stream_hash


@dataclass(frozen=True)
class CheckResult:
    check: str
    suite: str
    inputs: dict[str, Any] = field(default_factory=dict)
    lhs: str = ""
    rhs: str = ""
    abs_err: float | None = None
    rel_err: float | None = None
    L: int | None = None
    q0: str | None = None
    trusted_fraction: float | None = None
    passed: bool = True
    detail: str = ""

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    def to_json_line(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, ensure_ascii=False)


def render_value(value: Any) -> str:
    """Text for exact elements, mpmath numbers and plain numbers alike."""
    if hasattr(value, "render"):
        return value.render()
    if isinstance(value, mpmath.mpf | mpmath.mpc):
        return mpmath.nstr(value, 17)
    if isinstance(value, complex):
        return repr(value.real) if value.imag == 0 else repr(value)
    if isinstance(value, Fraction):
        return str(value)
    return str(value)


def _magnitude(value: Any) -> float:
    return float(abs(mpmath.mpc(value)))


def exact_check(
    check: str, suite: str, lhs: Any, rhs: Any, inputs: dict | None = None, detail: str = ""
) -> CheckResult:
    """Compare two exact values (RationalQ or algebra elements) for equality."""
    passed = bool(lhs == rhs)
    return CheckResult(
        check=check,
        suite=suite,
        inputs=inputs or {},
        lhs=render_value(lhs),
        rhs=render_value(rhs),
        abs_err=0.0 if passed else None,
        passed=passed,
        detail=detail,
    )


def numeric_check(
    check: str,
    suite: str,
    lhs: Any,
    rhs: Any,
    tolerance: float,
    *,
    inputs: dict | None = None,
    relative: bool = False,
    L: int | None = None,
    q0: Fraction | None = None,
    trusted_fraction: float | None = None,
    detail: str = "",
) -> CheckResult:
    """|lhs - rhs| (or the relative error) against ``tolerance``."""
    abs_err = _magnitude(mpmath.mpc(lhs) - mpmath.mpc(rhs))
    scale = _magnitude(rhs)
    rel_err = abs_err / scale if scale else abs_err
    measured = rel_err if relative else abs_err
    return CheckResult(
        check=check,
        suite=suite,
        inputs=inputs or {},
        lhs=render_value(lhs),
        rhs=render_value(rhs),
        abs_err=abs_err,
        rel_err=rel_err,
        L=L,
        q0=str(q0) if q0 is not None else None,
        trusted_fraction=trusted_fraction,
        passed=measured <= tolerance,
        detail=detail,
    )


def residual_check(
    check: str,
    suite: str,
    residual: float,
    tolerance: float,
    *,
    inputs: dict | None = None,
    L: int | None = None,
    q0: Fraction | None = None,
    trusted_fraction: float | None = None,
    detail: str = "",
) -> CheckResult:
    """An operator identity reported as its largest residual entry against zero."""
    return CheckResult(
        check=check,
        suite=suite,
        inputs=inputs or {},
        lhs=repr(float(residual)),
        rhs="0",
        abs_err=float(residual),
        L=L,
        q0=str(q0) if q0 is not None else None,
        trusted_fraction=trusted_fraction,
        passed=float(residual) <= tolerance,
        detail=detail,
    )


def count_check(
    check: str,
    suite: str,
    passed_count: int,
    total: int,
    *,
    inputs: dict | None = None,
    detail: str = "",
) -> CheckResult:
    """A randomized property reported as the number of samples on which it held."""
    return CheckResult(
        check=check,
        suite=suite,
        inputs=inputs or {},
        lhs=f"{passed_count}/{total}",
        rhs=f"{total}/{total}",
        passed=passed_count == total,
        detail=detail,
    )


def failure_check(check: str, suite: str, error: QSphereError, inputs: dict | None = None) -> CheckResult:
    """A library error raised while a check ran; it counts as a failed check."""
    return CheckResult(
        check=check,
        suite=suite,
        inputs=inputs or {},
        lhs=error.error_code,
        rhs="",
        passed=False,
        detail=error.message,
    )


def report_digest(lines: Iterable[str]) -> str:
    return generate_stream_hash(lines)


def render_line(result: CheckResult) -> str:
    """``tau_eta = -1 PASS``; failures also show the expected side and the inputs."""
    word = "PASS" if result.passed else "FAIL"
    line = f"{result.check} = {result.lhs} {word}"
    if not result.passed:
        line += f"\n    expected {result.rhs or '-'}; inputs {json.dumps(result.inputs, sort_keys=True)}"
        if result.detail:
            line += f"\n    {result.detail}"
    return line


def render_text(results: Sequence[CheckResult]) -> str:
    blocks: list[str] = []
    current = None
    for r in results:
        if r.suite != current:
            current = r.suite
            blocks.append(format_header(f"suite {r.suite}"))
        blocks.append(render_line(r))
    passed = sum(r.passed for r in results)
    blocks.append(format_divider())
    blocks.append(format_status(passed == len(results), f"{passed}/{len(results)} checks"))
    return "\n".join(blocks)
