"""Run every acceptance criterion, print one PASS/FAIL line each, and write the reports.

    python3 scripts/run_acceptance.py [--out results/acceptance.json] [--seed N] [--only 7 9]

Exits 1 when any criterion fails.
"""

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from fqlab.acceptance import CRITERIA, AcceptanceConfig, run_criterion


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results/acceptance.json")
    ap.add_argument("--seed", type=int, default=AcceptanceConfig.seed)
    ap.add_argument("--only", type=int, nargs="*", help="criterion numbers to run")
    ap.add_argument("--no-runtime", action="store_true", help="omit runtime_ms in the output")
    args = ap.parse_args()

    cfg = replace(AcceptanceConfig(), seed=args.seed)
    numbers = args.only or [c.number for c in CRITERIA]
    results = []
    for n in numbers:
        res = run_criterion(n, cfg)
        print(res.summary(), flush=True)
        results.append(res)

    payload = {str(r.criterion.number): {
        "title": r.criterion.title,
        "passed": r.passed,
        "seconds": round(r.seconds, 3),
        "reports": [json.loads(rep.to_json(not args.no_runtime)) for rep in r.reports],
    } for r in results}
    if args.no_runtime:
        for v in payload.values():
            v.pop("seconds")
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps({"seed": cfg.seed, "criteria": payload}, indent=1) + "\n")
    print(f"reports written to {out}")
    return 0 if all(r.passed for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())
