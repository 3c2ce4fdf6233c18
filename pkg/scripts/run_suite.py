"""Run the acceptance battery and write text and JSON reports.

    python3 scripts/run_suite.py [--seed N] [--out DIR]
"""
import argparse
from pathlib import Path

from pointfree.cli import run


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="reports")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    worst = 0
    for fmt, ext in (("text", "txt"), ("json", "json")):
        code, report = run(["--seed", str(args.seed), "--report", fmt, "suite"])
        (out / f"suite_seed{args.seed}.{ext}").write_text(report + "\n")
        worst = max(worst, code)
    print(report if worst else f"all criteria pass; reports in {out}/")
    return worst


if __name__ == "__main__":
    raise SystemExit(main())
