"""``hyperarena`` command-line tool.

Examples::

    hyperarena count --input data.txt --motif hyperedge
    hyperarena verify --edges 150 --vertices 120 --batches 20 --seed 42
    hyperarena bench --edges 100000 --vertices 500000 --batch-size 1000

Exit status: 0 on success, 2 when verification fails, 1 on any other error.
"""

from __future__ import annotations

import argparse
import math
import sys

from .bench import MODES, RunConfig, run
from .errors import HyperarenaError, VerificationFailed
from .io import FORMATS
from .triads import MOTIFS


def _t_delta(text: str) -> float:
    if text.lower() in ("inf", "infinity"):
        return math.inf
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or 'inf', got {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError("t-delta must be >= 0")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="hyperarena",
        description="Count hypergraph triads and maintain them under change batches.")
    p.add_argument("mode", choices=MODES)
    src = p.add_argument_group("input (omit --input to generate a random hypergraph)")
    src.add_argument("--input", help="dataset path (file, or 3-file prefix/directory)")
    src.add_argument("--format", choices=FORMATS, default="edge-lines")
    src.add_argument("--edges", type=int, default=1000, dest="n_edges")
    src.add_argument("--vertices", type=int, default=2000, dest="n_vertices")
    src.add_argument("--max-card", type=int, default=8)

    cnt = p.add_argument_group("counting")
    cnt.add_argument("--motif", choices=MOTIFS + ("all",), default="all")
    cnt.add_argument("--t-delta", type=_t_delta, default=0,
                     help="temporal window; 0 disables temporal triads, 'inf' allowed")

    sch = p.add_argument_group("batch schedule")
    sch.add_argument("--batches", type=int, default=10)
    sch.add_argument("--batch-size", type=int, default=100)
    sch.add_argument("--delete-pct", type=float, default=0.5)
    sch.add_argument("--card", default="uniform:8",
                     help="fixed:k | uniform:k | normal:mu,std")
    sch.add_argument("--vertex-mods", type=int, default=0,
                     help="incident-vertex edits per batch")

    run_ = p.add_argument_group("run")
    run_.add_argument("--seed", type=int, default=0)
    run_.add_argument("--threads", type=int, default=1, help="0 = all cores")
    run_.add_argument("--overprovision", type=float, default=2.0)
    run_.add_argument("--oracle-cap", type=int, default=300)
    run_.add_argument("--out", help="write the JSON report here instead of stdout")
    run_.add_argument("--csv", help="also write a per-batch timing table")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    opts = vars(args)
    out, csv_path = opts.pop("out"), opts.pop("csv")
    mode = opts.pop("mode")
    try:
        report = run(mode, RunConfig(**opts))
    except VerificationFailed as e:
        print(f"hyperarena: verification failed: {e}", file=sys.stderr)
        return 2
    except (HyperarenaError, OSError, ValueError) as e:
        print(f"hyperarena: error: {e}", file=sys.stderr)
        return 1
    text = report.dumps()
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if csv_path:
        with open(csv_path, "w") as fh:
            fh.write(report.csv())
    return 0


if __name__ == "__main__":
    sys.exit(main())
