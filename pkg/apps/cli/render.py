"""
Plain-text and JSON rendering of tables and run reports.
"""
import json
from typing import List

from schemas.homology import HomologyTable, SpectralReport
from schemas.reports import RunReport


def render_table(table: HomologyTable, title: str = "") -> str:
    header = ["q", "j", "k"] + (["Q"] if table.sl_rank is not None else []) + ["group"]
    rows = []
    for entry in table.entries:
        row = [str(entry.q), str(entry.j), str(entry.k)]
        if table.sl_rank is not None:
            row.append(str(entry.Q))
        row.append(str(entry.group))
        rows.append(row)
    widths = [max(len(r[i]) for r in [header] + rows) for i in range(len(header))]

    lines = [title] if title else []
    lines.append("  ".join(h.rjust(w) for h, w in zip(header, widths)))
    lines.extend("  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in rows)
    if not rows:
        lines.append("(zero)")
    if table.truncated and table.q_window is not None:
        lines.append(f"truncated to q in [{table.q_window[0]}, {table.q_window[1]}]")
    return "\n".join(lines)


def render_spectral(report: SpectralReport) -> List[str]:
    blocks = []
    for page in report.pages:
        nonzero = sum(1 for d in page.differentials if any(any(row) for row in d.matrix))
        blocks.append(render_table(page.table, f"E_{page.index} ({report.potential}), {nonzero} nonzero d_{page.index} blocks"))
    if report.e_infinity is not None:
        blocks.append(render_table(report.e_infinity, f"E_infinity = E_{report.stabilized_at}"))
    else:
        blocks.append("E_infinity: not stabilised by the page limit")
    if report.discrepancies:
        blocks.append("E_infinity vs H(H(H+, d_minus*), d_v*): " + "; ".join(report.discrepancies))
    return blocks


def render_report(report: RunReport) -> str:
    blocks = []
    if report.table is not None:
        kind = "reduced" if report.reduced else "unreduced"
        blocks.append(render_table(
            report.table, f"{kind} HOMFLY-PT homology of [{report.strands}] {report.braid or '(empty)'}"
        ))
    if report.spectral is not None:
        blocks.extend(render_spectral(report.spectral))
    for comparison in report.hochschild:
        status = "MATCH" if comparison.matches else "MISMATCH"
        blocks.append(f"hochschild [{comparison.resolution}]: {status} over {len(comparison.rows)} bidegrees")
    for check in report.checks:
        status = "MATCH" if check.passed else "MISMATCH"
        blocks.append(f"{check.name}: {status}" + (f" ({check.detail})" if check.detail else ""))
    for error in report.errors:
        blocks.append(f"error: {error}")
    return "\n\n".join(blocks)


def render_json(report: RunReport) -> str:
    """
    Bare HomologyTable arrays. A spectral run gives {"pages": {index: array},
    "e_infinity": array or null}; a failed run gives null.
    """
    if report.spectral is not None:
        e_infinity = report.spectral.e_infinity
        payload = {
            "pages": {str(page.index): page.table.to_json_array() for page in report.spectral.pages},
            "e_infinity": e_infinity.to_json_array() if e_infinity is not None else None,
        }
    elif report.table is not None:
        payload = report.table.to_json_array()
    else:
        payload = None
    return json.dumps(payload, indent=2)
