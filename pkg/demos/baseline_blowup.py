"""Why not just test the whole cascade?

Treating H and T as one machine P and running the W-method on it needs a
bound of k·|S_H| states for P, which brings many extra states and an
exponential traversal set.  Testing T alone in the context of H's output
language avoids that blow-up.
"""

import statistics

from greybox.bench import BenchmarkConfig, run_experiment

for m in (2, 4, 6):
    cfg = BenchmarkConfig(head_states=5, tail_states=m, head_inputs=4, shared_alphabet=3, tail_outputs=3, seed=m, count=5)
    rows = run_experiment(cfg, ["simple", "baseline"], workers=1)
    line = [f"5x{m}:"]
    for algo in ("simple", "baseline"):
        done = [r["symbols"] for r in rows if r["algo"] == algo and r["status"] == "ok"]
        skipped = sum(1 for r in rows if r["algo"] == algo and r["status"] != "ok")
        med = statistics.median(done) if done else float("nan")
        line.append(f"{algo} median {med:g} symbols" + (f" ({skipped} over the size ceiling)" if skipped else ""))
    print("  ".join(line))
