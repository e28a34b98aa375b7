"""Run the log b0 = 0.2 cos x, bsub = 0.1 b0 fixture and write CSV, JSON and SVG reports.

    python scripts/ratio_fixture.py --out results/ratio
"""

import argparse
from pathlib import Path

from szego_lab.cli import load_config, run_szego_experiment
from szego_lab.cli.report import report_csv, report_json, residual_svg

ROOT = Path(__file__).resolve().parents[1]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config", default=ROOT / "configs" / "ratio_fixture.ini", type=Path)
    ap.add_argument("--out", default=ROOT / "results" / "ratio", type=Path)
    args = ap.parse_args()

    rep = run_szego_experiment(load_config(args.config))
    args.out.mkdir(parents=True, exist_ok=True)
    (args.out / "points.csv").write_text(report_csv(rep))
    (args.out / "report.json").write_text(report_json(rep))
    (args.out / "residual.svg").write_text(residual_svg(rep))
    (args.out / "theorem_residual.svg").write_text(residual_svg(rep, key="theorem_residual"))

    print(f"{'coefficient':>12} {'measured':>20} {'predicted':>20} {'delta':>11}")
    for label, row in rep.coefficients.items():
        print(f"{label:>12} {row['measured']:>20.12g} {row['predicted']:>20.12g} {row['delta']:>11.2e}")
    print(f"{'n':>5} {'residual*n^2':>14} {'theorem*n^2':>14}")
    for p in rep.points:
        n = p["n"]
        print(f"{n:>5} {p['residual'] * n * n:>14.6f} {p['theorem_residual'] * n * n:>14.3e}")
    print(f"reports written to {args.out}")


if __name__ == "__main__":
    main()
