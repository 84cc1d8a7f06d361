"""Run every config in demos/configs and print its frequency table.

Results land in demos/out/<config name>/ (results.csv, trials.csv,
results.json, trials.jsonl, state.json). Re-running resumes: finished trials
are read back from trials.jsonl instead of recomputed.

Run: python3 demos/run_experiments.py [name ...]
"""

import sys
import time
from pathlib import Path

from wronskit.harness import ExperimentConfig, run_experiment, table_rows

here = Path(__file__).parent
wanted = set(sys.argv[1:])
for path in sorted((here / "configs").glob("*.json")):
    if wanted and path.stem not in wanted:
        continue
    cfg = ExperimentConfig.load(path)
    t = time.time()
    rec = run_experiment(cfg, here / "out" / path.stem)
    header, rows = table_rows(rec)
    print(f"{path.stem}  ({cfg.scenario}, {len(rec.trials)} trials, {time.time() - t:.1f}s)")
    print("  " + ",".join(header))
    for row in rows:
        print("  " + ",".join(str(v) for v in row))
    if rec.parity_violations():
        print("  parity violations:", rec.parity_violations())
