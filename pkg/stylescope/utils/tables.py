"""Aligned plain-text tables for eyeball comparison with published results."""

from typing import Any, List, Sequence


def _cell(value: Any, digits: int) -> str:
    if isinstance(value, float):
        return f"{value:.{digits}f}"
    if value is None:
        return "-"
    return str(value)


def render_table(
    headers: Sequence[str], rows: Sequence[Sequence[Any]], digits: int = 3
) -> str:
    """Render rows under headers; the first column is left-aligned, others right."""
    body: List[List[str]] = [[_cell(v, digits) for v in row] for row in rows]
    widths = [len(h) for h in headers]
    for row in body:
        for i, text in enumerate(row):
            widths[i] = max(widths[i], len(text))

    def line(cells: Sequence[str]) -> str:
        parts = [
            cells[i].ljust(widths[i]) if i == 0 else cells[i].rjust(widths[i])
            for i in range(len(cells))
        ]
        return "  ".join(parts).rstrip()

    rule = "-" * (sum(widths) + 2 * (len(widths) - 1))
    out = [rule, line(list(headers)), rule]
    out.extend(line(row) for row in body)
    out.append(rule)
    return "\n".join(out)


def success_ratio(success: int, total: int) -> str:
    """Format a tally the way the cross-validation tables do: ``133/156 = 0.853``."""
    rate = success / total if total else 0.0
    return f"{success}/{total} = {rate:.3f}"
