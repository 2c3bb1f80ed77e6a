"""Run the first-order schema suite and write a JSON report.

    python3 scripts/run_suite.py --range 1-119 --out suite.json
"""
from __future__ import annotations

import argparse
import json
import time
from dataclasses import asdict, dataclass

from atomic_entailment.fol_engine import run_schema_suite
from atomic_entailment.prover import Budget


@dataclass
class SuiteConfig:
    range: str = "all"
    max_domain: int = 3
    steps: int = 10_000
    out: str | None = None


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    defaults = SuiteConfig()
    ap.add_argument("--range", default=defaults.range)
    ap.add_argument("--max-domain", type=int, default=defaults.max_domain)
    ap.add_argument("--steps", type=int, default=defaults.steps)
    ap.add_argument("--out", default=None)
    cfg = SuiteConfig(**{k.replace("-", "_"): v for k, v in vars(ap.parse_args(argv)).items()})

    t0 = time.perf_counter()
    rep = run_schema_suite(cfg.range, Budget(cfg.max_domain, cfg.steps))
    data = {"config": asdict(cfg), "seconds": round(time.perf_counter() - t0, 3), **rep.to_json()}
    for r in rep.results:
        if r.outcome != "pass":
            print(f"({r.label}) {r.outcome}: {r.template}")
    print(f"{data['pass']}/{data['total']} pass, {data['fail']} fail, "
          f"{data['unknown']} unknown in {data['seconds']} s")
    if rep.converse is not None:
        print(f"converse of (xxviii): {rep.converse.status.value}")
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            json.dump(data, fh, indent=2)
    return 0 if data["fail"] == 0 and data["unknown"] == 0 else 1


if __name__ == "__main__":
    raise SystemExit(main())
