"""
Plain-text layout primitives for the qsphere CLI.
Used by the ``text`` output mode and the spectrum table; JSON output never goes through here.
"""

from collections.abc import Sequence


def format_divider(char: str = "━", length: int = 20) -> str:
    return char * length


def format_header(title: str, subtitle: str = "") -> str:
    lines = [f"✦ {title.upper()} ✦", format_divider("⎯", max(24, len(title) + 4))]
    if subtitle:
        lines.append(subtitle)
    return "\n".join(lines)


def format_kv(key: str, value: object, icon: str = "▫️") -> str:
    """Render a key-value row."""
    return f"{icon} {key}: {value}"


def format_status(passed: bool, label: str = "") -> str:
    """Render a status pill, e.g. ``[ PASS • tau_eta ]``."""
    status = "PASS" if passed else "FAIL"
    if not label:
        return f"[ {status} ]"
    return f"[ {status} • {label} ]"


def format_table(headers: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    """Render a left-aligned column table with a divider under the header."""
    cells = [[str(h) for h in headers]] + [[str(c) for c in row] for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(headers))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(cells[0], widths, strict=True)).rstrip()]
    lines.append(format_divider("─", sum(widths) + 2 * (len(widths) - 1)))
    for row in cells[1:]:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths, strict=True)).rstrip())
    return "\n".join(lines)
