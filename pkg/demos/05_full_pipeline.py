#!/usr/bin/env python3
"""Drive the command-line pipeline end to end in a scratch directory:
synth -> ingest -> indicators -> fairness -> correlate.

Usage: python demos/05_full_pipeline.py [workdir]
Defaults to a temporary directory; pass a path to keep the outputs.
"""

import sys
import tempfile
from pathlib import Path

from citefair.cli import main
from citefair.synth import ClusterProfile, SynthProfile, profile_to_json


def run(argv):
    print(f"\n$ citefair {' '.join(argv)}")
    code = main(argv)
    if code != 0:
        raise SystemExit(f"step failed with exit code {code}")


def pipeline(root: Path) -> None:
    profile = SynthProfile(
        clusters=(
            ClusterProfile("1", "Alpha", 60, 3.0, 30.0, 0.5),
            ClusterProfile("2", "Beta", 80, 1.2, 15.0, 0.5),
            ClusterProfile("3", "Gamma", 40, 0.5, 7.0, 0.4),
            ClusterProfile("8", "Micro", 3, 0.5, 7.0, 0.4),  # excluded at ingest
        ),
        items_per_journal=(4, 9),
        years=(2006, 2010),
        seed=42,
    )
    profile_path = root / "profile.json"
    profile_to_json(profile, profile_path)

    raw, bundle = root / "raw", root / "bundle"
    tables, reports = root / "tables", root / "reports"
    run(["synth", "--profile-file", str(profile_path), "--out-dir", str(raw)])
    run(["ingest",
         "--journals", str(raw / "journals.tsv"),
         "--publications", str(raw / "publications.tsv"),
         "--citations", str(raw / "citations.tsv"),
         "--out-dir", str(bundle)])
    run(["indicators", "--dataset", str(bundle), "--out-dir", str(tables)])
    run(["fairness", "--dataset", str(bundle),
         "--table", str(tables / "IF2-IC-RS.tsv"),
         "--table", str(tables / "IF2-FC.tsv"),
         "--out-dir", str(reports), "--stdout"])
    run(["correlate", "--dataset", str(bundle),
         "--table", str(tables / "IF2-IC.tsv"),
         "--table", str(tables / "IF2-IC-RS.tsv"),
         "--table", str(tables / "IF2-FC.tsv"),
         "--out-dir", str(reports)])
    print(f"\nall outputs under {root}")


if __name__ == "__main__":
    if len(sys.argv) > 1:
        pipeline(Path(sys.argv[1]))
    else:
        with tempfile.TemporaryDirectory(prefix="citefair-demo-") as tmp:
            pipeline(Path(tmp))
