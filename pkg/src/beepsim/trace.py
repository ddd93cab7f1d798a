"""Per-period per-node observation records and their CSV form.

The CSV schema is fixed: ``period,node,phase,jitter,interval,colored,
label,beeps_heard``.  Fields that do not apply (e.g. jitter in the
continuous model, phase during a listen-only first period) are left
empty.  Formatting is deterministic so equal runs produce equal bytes.
"""

from __future__ import annotations

from dataclasses import dataclass

COLUMNS = ("period", "node", "phase", "jitter", "interval", "colored", "label", "beeps_heard")


@dataclass(frozen=True)
class TraceRow:
    period: int
    node: int
    phase: float | int | None
    jitter: int | None
    interval: float | int | None
    colored: bool
    label: str
    beeps_heard: int


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def format_rows(rows) -> str:
    lines = [",".join(COLUMNS)]
    for r in rows:
        lines.append(
            ",".join(
                (
                    str(r.period),
                    str(r.node),
                    _fmt(r.phase),
                    _fmt(r.jitter),
                    _fmt(r.interval),
                    _fmt(r.colored),
                    r.label,
                    str(r.beeps_heard),
                )
            )
        )
    return "\n".join(lines) + "\n"


def write_csv(path, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_rows(rows))
