"""File rendering for experiment reports: JSON, delimited rows and figures.

``write_report`` drops four files into the target directory: the JSON form
of the report, a ``words.csv`` with one row per reachable word, and two PNG
figures (words per search depth, word-length distribution).  Output is
deterministic for a fixed report.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

from .nfb import ShapeReport
from .words import format_word


def write_report(report: ShapeReport, outdir: str | Path) -> list[Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []

    json_path = outdir / "report.json"
    json_path.write_text(
        json.dumps(report.to_json(), indent=2, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )
    written.append(json_path)

    bad = {w for w, _ in report.violations}
    csv_path = outdir / "words.csv"
    with csv_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["word", "length", "depth", "matches_shape"])
        for w, depth in report.reachable:
            writer.writerow([format_word(w), len(w), depth, int(w not in bad)])
    written.append(csv_path)

    written.extend(_write_figures(report, outdir))
    return written


def _write_figures(report: ShapeReport, outdir: Path) -> list[Path]:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    title = f"{report.family} under {report.system}"

    depth_path = outdir / "depth_counts.png"
    counts = report.depth_counts
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(range(len(counts)), counts, color="#4878cf")
    ax.set_xlabel("search depth")
    ax.set_ylabel("words first reached")
    ax.set_title(title)
    ax.set_xticks(range(len(counts)))
    fig.tight_layout()
    fig.savefig(depth_path, dpi=100)
    plt.close(fig)

    length_path = outdir / "word_lengths.png"
    lengths = [len(w) for w, _ in report.reachable]
    bins = range(min(lengths), max(lengths) + 2)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.hist(lengths, bins=bins, color="#6acc65", edgecolor="black")
    ax.set_xlabel("word length")
    ax.set_ylabel("reachable words")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(length_path, dpi=100)
    plt.close(fig)

    return [depth_path, length_path]
