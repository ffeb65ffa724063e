"""Run the acceptance criteria and print one line per criterion.

    python scripts/run_acceptance.py            # full sizes (about 15 minutes)
    python scripts/run_acceptance.py --scale 0.01   # quick smoke run
"""

import argparse
import os
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--scale", type=float, default=1.0, help="multiplier on sampled instance counts")
    ap.add_argument("-k", dest="select", help="pytest -k expression, e.g. criterion_08")
    a = ap.parse_args()
    env = dict(os.environ, CONVEXMATCH_ACCEPTANCE_SCALE=str(a.scale))
    cmd = [sys.executable, "-m", "pytest", str(ROOT / "tests" / "test_acceptance.py"), "-q", "-s"]
    if a.select:
        cmd += ["-k", a.select]
    return subprocess.call(cmd, env=env, cwd=ROOT)


if __name__ == "__main__":
    raise SystemExit(main())
