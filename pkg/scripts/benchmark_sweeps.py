#!/usr/bin/env python3
"""Time the main verification sweeps one by one.

Useful when tuning the Smith-form pivot rule or the enumeration kernels:
run before and after and compare the per-sweep wall times.

    python3 scripts/benchmark_sweeps.py
    python3 scripts/benchmark_sweeps.py --n-max 40 --q-max 5
"""

import argparse
import time

from sandpiles.verify import SweepConfig, run_all


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n-max", type=int, default=SweepConfig.n_max)
    parser.add_argument("--d-max", type=int, default=SweepConfig.d_max)
    parser.add_argument("--q-max", type=int, default=SweepConfig.q_max)
    parser.add_argument("--brute-cap", type=int, default=None)
    args = parser.parse_args()

    config = SweepConfig(
        n_max=args.n_max,
        d_max=args.d_max,
        q_max=args.q_max,
        brute_cap=args.brute_cap,
    )

    marks: list[tuple[str, float]] = [("start", time.perf_counter())]

    def progress(message: str) -> None:
        if message.startswith("["):
            marks.append((message.strip("[]").split("]")[0], time.perf_counter()))
        print(message, flush=True)

    totals = run_all(config, progress=progress)
    marks.append(("end", time.perf_counter()))

    print(f"\n{'sweep':<28} {'checks':>8} {'seconds':>8}")
    print("-" * 46)
    names = [name for name, _ in marks[1:-1]]
    for i, name in enumerate(names):
        # each sweep runs from its own start mark to the next mark
        elapsed = marks[i + 2][1] - marks[i + 1][1]
        print(f"{name:<28} {totals.get(name, 0):>8} {elapsed:>8.2f}")
    total_time = marks[-1][1] - marks[0][1]
    print("-" * 46)
    print(f"{'total':<28} {sum(totals.values()):>8} {total_time:>8.2f}")


if __name__ == "__main__":
    main()
