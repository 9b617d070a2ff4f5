"""Run reports from Python and from the command line.

The same runs are available as ``hyperarena {count,update,verify,bench}``;
the CLI prints one JSON document and exits 0, 2 on a verification failure,
1 on any other error.
"""
import math
import subprocess
import sys

from hyperarena.bench import RunConfig, run

cfg = RunConfig(n_edges=150, n_vertices=150, max_card=6, batches=20,
                batch_size=10, card="uniform:6", t_delta=math.inf, seed=42)
rep = run("verify", cfg)
print("verified batches:", rep.summary["verified_batches"])

rep = run("bench", RunConfig(n_edges=4000, n_vertices=12000, max_card=6,
                             batches=3, batch_size=20, motif="hyperedge"))
print("median speedup over recount:", round(rep.summary["median_speedup"], 1))
print(rep.csv())

out = subprocess.run([sys.executable, "-m", "hyperarena", "count",
                      "--edges", "200", "--vertices", "300", "--motif", "vertex"],
                     capture_output=True, text=True)
print("exit", out.returncode, out.stdout[:200])
