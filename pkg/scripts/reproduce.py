#!/usr/bin/env python3
"""Replay every headline number through the CLI and check the results.

Each recipe drives `python -m rankineq` against the input files in repro/
and asserts the expected exit code plus selected machine-block values.
Exit status 0 means every recipe reproduced.
"""

import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
REPRO = ROOT / "repro"

RECIPES = [
    # (description, argv, expected exit, {key: expected value})
    ("t8 inequality violated over GF(3), residual -1",
     ["ineq", "eval", "--ineq", "t8",
      "--assignment", str(REPRO / "t8_char3.sub")],
     1, {"residual": "-1", "verdict": "violated"}),
    ("non-t8 inequality violated over GF(2), residual -1",
     ["ineq", "eval", "--ineq", "non-t8",
      "--assignment", str(REPRO / "nont8_char2.sub")],
     1, {"residual": "-1"}),
    ("non-t8 inequality violated over GF(5), residual -1",
     ["ineq", "eval", "--ineq", "non-t8",
      "--assignment", str(REPRO / "nont8_char5.sub")],
     1, {"residual": "-1"}),
    ("non-t8 inequality violated over GF(7), residual -1",
     ["ineq", "eval", "--ineq", "non-t8",
      "--assignment", str(REPRO / "nont8_char7.sub")],
     1, {"residual": "-1"}),
    ("t8 inequality from text file gives the same residual",
     ["ineq", "eval", "--ineq", str(REPRO / "t8.expr"),
      "--assignment", str(REPRO / "t8_char3.sub")],
     1, {"residual": "-1"}),
    ("ingleton holds with residual 0 on the zero assignment",
     ["ineq", "eval", "--ineq", "ingleton",
      "--assignment", str(REPRO / "zero.sub")],
     0, {"residual": "0", "verdict": "holds"}),
    ("exhaustive sweep finds a t8 violation over GF(3)^4",
     ["ineq", "search", "--ineq", "t8", "--char", "3", "--dim", "4",
      "--strategy", "exhaustive-1dim"],
     1, {"found": "violation"}),
    ("random search finds no t8 violation over GF(2)^4",
     ["ineq", "search", "--ineq", "t8", "--char", "2", "--dim", "4",
      "--strategy", "random", "--seed", "1", "--trials", "2000",
      "--max-dim", "4"],
     0, {"found": "none"}),
    ("random search finds no non-t8 violation over GF(3)^4",
     ["ineq", "search", "--ineq", "non-t8", "--char", "3", "--dim", "4",
      "--strategy", "random", "--seed", "1", "--trials", "2000",
      "--max-dim", "4"],
     0, {"found": "none"}),
    ("GF(3) scalar code solves the t8 network (all 7 demands)",
     ["net", "verify", "--network", str(REPRO / "t8.net"),
      "--code", str(REPRO / "t8_gf3.code")],
     0, {"verified": "true"}),
    ("same literals over GF(5) fail exactly at the 2^-1 demands",
     ["net", "verify", "--network", str(REPRO / "t8.net"),
      "--code", str(REPRO / "t8_gf5.code")],
     1, {"verified": "false", "failing": "n9,n11,n13,n14"}),
    ("non-t8 network solved over GF(5)",
     ["net", "verify", "--network", str(REPRO / "non_t8.net"),
      "--code", str(REPRO / "non_t8_gf5.code")],
     0, {"verified": "true"}),
    ("non-t8 code needs 3^-1, impossible over GF(3)",
     ["net", "verify", "--network", "non-t8", "--code", "non-t8-gf3"],
     1, {"error": "missing-inverse"}),
    ("butterfly z = x+y solves over GF(2)",
     ["net", "verify", "--network", str(REPRO / "butterfly.net"),
      "--code", str(REPRO / "butterfly_gf2.code")],
     0, {"verified": "true"}),
    ("t8 network linear capacity bound 48/49 off characteristic 3",
     ["net", "bound", "--network", "t8", "--ineq", "t8"],
     0, {"bound": "48/49"}),
    ("non-t8 network linear capacity bound 28/29 at characteristic 3",
     ["net", "bound", "--network", "non-t8", "--ineq", "non-t8"],
     0, {"bound": "28/29"}),
    ("dependency cut bounds every network at capacity 1",
     ["net", "bound", "--network", "t8", "--cut"],
     0, {"bound": "1"}),
    ("butterfly cut bound 1",
     ["net", "bound", "--network", "butterfly", "--cut", "--demand", "n6"],
     0, {"bound": "1"}),
    ("2x5 example matroid: rank 2, 5 bases, 4 circuits",
     ["matroid", "info", "--name", "t8-example-2x5", "--char", "2"],
     0, {"rank": "2", "bases": "5",
         "circuits": "{a,b,e};{a,d};{b,d,e};{c}"}),
    ("ingleton violated by the 4-atom distribution",
     ["entropy", "eval", "--dist", str(REPRO / "ingleton.dist"),
      "--expr", "ingleton"],
     1, {"verdict": "violated"}),
]


def machine_block(stdout: str) -> dict:
    pairs = {}
    for line in stdout.splitlines():
        if "=" in line and " " not in line.split("=", 1)[0]:
            key, value = line.split("=", 1)
            pairs[key] = value
    return pairs


def main() -> int:
    failures = 0
    for desc, argv, want_code, want_values in RECIPES:
        proc = subprocess.run([sys.executable, "-m", "rankineq", *argv],
                              capture_output=True, text=True)
        block = machine_block(proc.stdout)
        problems = []
        if proc.returncode != want_code:
            problems.append(f"exit {proc.returncode} != {want_code}")
        for key, want in want_values.items():
            if block.get(key) != want:
                problems.append(f"{key}={block.get(key)!r} != {want!r}")
        status = "ok" if not problems else "FAIL (" + "; ".join(problems) + ")"
        print(f"{status:4s} {desc}")
        if problems:
            failures += 1
            sys.stderr.write(proc.stdout + proc.stderr)
    print(f"\n{len(RECIPES) - failures}/{len(RECIPES)} recipes reproduced")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
