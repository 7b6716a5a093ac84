"""
Rendering of workbench reports as JSON, CSV or rich text.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Any, Optional

from .commands import OutputFormat

# CSV columns per command; the table header is fixed
CSV_COLUMNS = {
    "count": ["i", "formula", "exactness", "a_prime", "brute", "naive", "agree", "degenerate"],
    "enumerate": ["n", "i", "domain", "count", "probability", "size", "representative"],
    "verify": ["suite", "status", "checks", "failures"],
    "table": ["i", "formula", "brute", "naive"],
    "validate-channel": ["channel", "s1", "s2", "degenerate", "distinct_d", "violation"],
}

MISSING = "n/a"


def render_json(report: dict[str, Any]) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _cell(value: Any) -> str:
    if value is None:
        return MISSING
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _csv_rows(report: dict[str, Any]) -> list[list[Any]]:
    command = report["command"]
    results = report["results"]
    if command == "enumerate":
        return [
            [r["n"], r["i"], r["domain"], r["count"], c["probability"], c["size"], " ".join(c["representative"])]
            for r in results
            for c in r["classes"]
        ]
    if command == "verify":
        return [[r["suite"], r["status"], r["checks"], len(r["failures"])] for r in results]
    if command == "validate-channel":
        if not results:
            return [[report["config"]["channel"], None, None, None, None, v] for v in report["failures"]]
        r = results[0]
        return [[r["channel"]["name"], r["s1"], r["s2"], r["degenerate"], r["distinct_d"], ""]]
    columns = CSV_COLUMNS[command]
    return [[r.get(col) for col in columns] for r in results]


def render_csv(report: dict[str, Any]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS[report["command"]])
    for row in _csv_rows(report):
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _approx(prob: str) -> str:
    value = Fraction(prob)
    return f"{prob} (~{float(value):.6g})"


def render_text(report: dict[str, Any], width: Optional[int] = None) -> str:
    """
    Render a report with rich tables for a terminal reader.

    Rationals get a decimal approximation appended.
    """
    from rich.console import Console
    from rich.panel import Panel
    from rich.rule import Rule
    from rich.table import Table
    from rich.text import Text

    console = Console(file=io.StringIO(), width=width or 100, color_system=None)
    command = report["command"]
    config = report["config"]

    head = ", ".join(f"{k}={v}" for k, v in sorted(config.items()))
    console.print(Rule(Text(f"polarsym {command}", style="bold")))
    if head:
        console.print(Text(head, style="dim"))

    if command == "enumerate":
        for r in report["results"]:
            table = Table(title=f"N={r['n']}  i={r['i']}  {r['domain']}  classes={r['count']}")
            table.add_column("probability", justify="right")
            table.add_column("size", justify="right")
            table.add_column("representative")
            for c in r["classes"]:
                table.add_row(_approx(c["probability"]), str(c["size"]), " ".join(c["representative"]))
            console.print(table)
    elif command == "validate-channel" and report["results"]:
        r = report["results"][0]
        ch = r["channel"]
        body = Table.grid(padding=(0, 2))
        body.add_column(style="cyan")
        body.add_column()
        for k, sym in enumerate(ch["symbols"]):
            body.add_row(sym, f"W(.|0)={ch['w0'][k]}  W(.|1)={ch['w1'][k]}  conj={ch['symbols'][ch['conj'][k]]}")
        body.add_row("S1, S2", f"{r['s1']}, {r['s2']}")
        body.add_row("degenerate", _cell(r["degenerate"]))
        body.add_row("distinct D", _cell(r["distinct_d"]))
        console.print(Panel(body, title=Text(ch["name"], style="cyan bold"), border_style="cyan"))
    else:
        columns = CSV_COLUMNS[command]
        table = Table()
        for col in columns:
            table.add_column(col, justify="right" if col != "suite" else "left")
        for row in _csv_rows(report):
            table.add_row(*(_cell(v) for v in row))
        console.print(table)

    failures = report["failures"]
    if failures:
        lines = "\n".join(
            f.get("reason") or json.dumps(f, sort_keys=True) if isinstance(f, dict) else str(f)
            for f in failures
        )
        console.print(Panel(lines, title=Text("Failures", style="red bold"), border_style="red"))
    else:
        console.print(Text("no failures", style="green"))
    return console.file.getvalue()


def render(report: dict[str, Any], fmt: OutputFormat) -> str:
    if fmt is OutputFormat.JSON:
        return render_json(report)
    if fmt is OutputFormat.CSV:
        return render_csv(report)
    return render_text(report)
