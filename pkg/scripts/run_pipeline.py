#!/usr/bin/env python3
"""Run the whole desk-scale experiment end to end and print the report.

Generates fixtures if the target directory lacks them, then drives:
ingest -> triplets -> bench -> train-w2v -> train-dbow -> eval.

Usage:
    python scripts/run_pipeline.py [--dir demo] [--seed 42]
"""

from __future__ import annotations

import argparse
import subprocess
import sys
import time
from pathlib import Path

from patsim.cli import main as patsim_main


def run(argv: list[str]) -> None:
    print(f"$ patsim {' '.join(argv)}")
    code = patsim_main(argv)
    if code != 0:
        sys.exit(code)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dir", default="demo")
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args()

    root = Path(args.dir)
    config = root / "config.txt"
    if not config.exists():
        subprocess.run(
            [sys.executable, str(Path(__file__).parent / "make_fixtures.py"), "--out", str(root)],
            check=True,
        )

    start = time.monotonic()
    for cmd in ("ingest", "triplets", "bench", "train-w2v", "train-dbow"):
        run([cmd, "--config", str(config), "--seed", str(args.seed)])
    run(["eval", "--config", str(config), "--seed", str(args.seed), "--format", "text"])
    print(f"pipeline finished in {time.monotonic() - start:.1f}s; reports in {root}/out/")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
