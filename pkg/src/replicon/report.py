"""Post-run analysis of a metrics stream.

The text summary covers the strand census over time, the first replication,
the full replication table and the mirror-pattern breakdown (a template
strand and its negated mirror image both count as descendants of the seed).
With an output directory the same tables are written as CSV next to
rendered figures of the population history.
"""

from __future__ import annotations

import csv
from pathlib import Path

from .output import read_metrics
from .strands import negate, reverse


def _census_rows(records: list[dict]) -> list[dict]:
    return [r for r in records if r.get("event") == "census"]


def _replications(records: list[dict]) -> list[dict]:
    return [r for r in records if r.get("event") == "replication"]


def _spontaneous(records: list[dict]) -> list[dict]:
    return [r for r in records
            if r.get("event") == "red_blue_formed" and r.get("spontaneous")]


def mirror_breakdown(replications: list[dict]) -> dict[str, int]:
    """Counts of every pattern seen among parents and daughters."""
    counts: dict[str, int] = {}
    for r in replications:
        for bits in (r["parent_bits"], r["daughter_bits"]):
            counts[bits] = counts.get(bits, 0) + 1
    return dict(sorted(counts.items()))


def summarize(records: list[dict], history_rows: int = 12) -> str:
    """Human-readable summary of one run's metrics."""
    census = _census_rows(records)
    reps = _replications(records)
    spont = _spontaneous(records)
    lines = []
    if census:
        lines.append("strand census over time:")
        lines.append(f"{'step':>10}  {'strands':>7}  {'complete':>8}  by length")
        stride = max(1, (len(census) - 1) // max(1, history_rows - 1))
        shown = census[::stride]
        if shown[-1] is not census[-1]:
            shown.append(census[-1])
        for row in shown:
            lengths = ", ".join(f"{k}:{v}" for k, v in row["by_length"].items())
            lines.append(f"{row['step']:>10}  {row['strands']:>7}  "
                         f"{row['complete']:>8}  {lengths}")
        last = census[-1]
        interesting = {k: v for k, v in last["by_bits"].items() if len(k) > 1}
        if interesting:
            lines.append("final multi-codon patterns: " + ", ".join(
                f"{k}:{v}" for k, v in sorted(interesting.items())))
    if reps:
        lines.append(f"first replication at step {reps[0]['step']}")
        lines.append(f"replication events: {len(reps)}")
        lines.append(f"{'step':>10}  {'parent':<20} daughter")
        for r in reps:
            lines.append(f"{r['step']:>10}  {r['parent_bits']:<20} {r['daughter_bits']}")
        lines.append("mirror-pattern breakdown:")
        for bits, count in mirror_breakdown(reps).items():
            mirror = reverse(negate(bits))
            tag = "self-mirrored" if mirror == bits else f"mirror of {mirror}"
            lines.append(f"  {bits}: {count}  ({tag})")
    else:
        lines.append("replication events: 0")
    if spont:
        lines.append(f"spontaneous red-blue bonds: {len(spont)} "
                     f"(first at step {spont[0]['step']})")
    else:
        lines.append("spontaneous red-blue bonds: 0")
    return "\n".join(lines)


def write_tables(records: list[dict], out_dir) -> list[Path]:
    """CSV exports: census history and replication table."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    census_path = out / "census.csv"
    with open(census_path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["step", "strands", "complete", "length", "count"])
        for row in _census_rows(records):
            for length, count in row["by_length"].items():
                w.writerow([row["step"], row["strands"], row["complete"], length, count])
    written.append(census_path)

    reps_path = out / "replications.csv"
    with open(reps_path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["step", "parent_bits", "daughter_bits"])
        for r in _replications(records):
            w.writerow([r["step"], r["parent_bits"], r["daughter_bits"]])
    written.append(reps_path)
    return written


def write_figures(records: list[dict], out_dir) -> list[Path]:
    """Render population-history figures to PNG files."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    census = _census_rows(records)
    reps = _replications(records)
    spont = _spontaneous(records)

    if census:
        lengths = sorted({int(k) for row in census for k in row["by_length"]})
        steps = [row["step"] for row in census]
        fig, ax = plt.subplots(figsize=(8, 5))
        for length in lengths:
            series = [row["by_length"].get(str(length), 0) for row in census]
            ax.plot(steps, series, label=f"length {length}")
        ax.set_xlabel("step")
        ax.set_ylabel("strand count")
        ax.set_title("strand census over time")
        ax.legend(loc="best", fontsize=8)
        fig.tight_layout()
        path = out / "census_over_time.png"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)

    fig, ax = plt.subplots(figsize=(8, 4))
    if reps:
        steps = [r["step"] for r in reps]
        ax.step(steps, range(1, len(steps) + 1), where="post", label="replications")
    for i, r in enumerate(spont):
        ax.axvline(r["step"], color="tab:red", linestyle=":",
                   label="spontaneous bond" if i == 0 else None)
    ax.set_xlabel("step")
    ax.set_ylabel("cumulative replications")
    ax.set_title("replication history")
    if reps or spont:
        ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    path = out / "replication_history.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    written.append(path)

    if reps:
        breakdown = mirror_breakdown(reps)
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.bar(range(len(breakdown)), list(breakdown.values()))
        ax.set_xticks(range(len(breakdown)))
        ax.set_xticklabels(list(breakdown.keys()), rotation=45, ha="right", fontsize=8)
        ax.set_ylabel("occurrences")
        ax.set_title("patterns among parents and daughters")
        fig.tight_layout()
        path = out / "pattern_breakdown.png"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)
    return written


def analyze_metrics(metrics_path, out_dir=None) -> str:
    """Summarize a metrics file; optionally export tables and figures."""
    records = read_metrics(metrics_path)
    text = summarize(records)
    if out_dir is not None:
        write_tables(records, out_dir)
        write_figures(records, out_dir)
    return text
