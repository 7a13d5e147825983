"""CSV and Markdown rendering of cross-validation reports."""

from __future__ import annotations

import csv
import io
from typing import Iterable, Sequence

from .experiments import CvReport


def _g(x: float, digits: int = 4) -> str:
    return f"{x:.{digits}f}"


def report_csv(reports: Sequence[CvReport], header: Iterable[str] = ()) -> str:
    """One row per (dataset, system); comparison columns blank for the baseline."""
    buf = io.StringIO()
    for h in header:
        buf.write(f"# {h}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([
        "dataset", "cases", "system", "baseline", "error_mean", "error_se", "size_mean", "size_se",
        "wins", "draws", "losses", "error_ratio", "size_ratio", "repeat_errors", "repeat_sizes",
    ])
    for r in reports:
        base = {c.system: c for c in r.comparisons}
        for s in r.systems:
            c = base.get(s.name)
            row = [r.dataset, r.n_cases, s.name]
            row.append(c.baseline if c else "")
            row += [_g(s.error_mean), _g(s.error_se), _g(s.size_mean), _g(s.size_se)]
            if c:
                row += [c.wins, c.draws, c.losses, _g(c.error_ratio), _g(c.size_ratio)]
            else:
                row += ["", "", "", "", ""]
            row.append(" ".join(_g(e) for e in s.errors))
            row.append(" ".join(_g(z) for z in s.sizes))
            w.writerow(row)
    return buf.getvalue()


def _table(rows: list[list[str]]) -> list[str]:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    out = []
    for k, r in enumerate(rows):
        out.append("| " + " | ".join(c.ljust(wd) for c, wd in zip(r, widths)) + " |")
        if k == 0:
            out.append("|" + "|".join("-" * (wd + 2) for wd in widths) + "|")
    return out


def report_markdown(reports: Sequence[CvReport], header: Iterable[str] = ()) -> str:
    lines = [f"<!-- {h} -->" for h in header]
    for r in reports:
        lines.append(f"## {r.dataset} ({r.n_cases} cases, {r.cv.repeats}x{r.cv.folds}-fold CV, seed {r.cv.seed})")
        lines.append("")
        for note in r.notes:
            lines.append(f"_{note}_")
            lines.append("")
        rows = [["system", "error %", "± se", "size", "± se"]]
        for s in r.systems:
            rows.append([s.name, f"{s.error_mean:.2f}", f"{s.error_se:.2f}", f"{s.size_mean:.1f}", f"{s.size_se:.1f}"])
        lines += _table(rows)
        lines.append("")
        if r.comparisons:
            rows = [["system", "vs", "w/d/l", "error ratio", "size ratio"]]
            for c in r.comparisons:
                rows.append([c.system, c.baseline, f"{c.wins}/{c.draws}/{c.losses}",
                             f"{c.error_ratio:.2f}", f"{c.size_ratio:.2f}"])
            lines += _table(rows)
            lines.append("")
    return "\n".join(lines) + "\n"


def scatter_csv(points: Sequence[tuple[str, int, float]], header: Iterable[str] = ()) -> str:
    """``dataset, cases, ratio`` rows for error ratio against data-set size."""
    buf = io.StringIO()
    for h in header:
        buf.write(f"# {h}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["dataset", "cases", "error_ratio"])
    for name, n, ratio in points:
        w.writerow([name, n, _g(ratio)])
    return buf.getvalue()
