#!/usr/bin/env python3
"""Desk-scale lambda sweep (n=500, lambda 10..150 step 4, mu=lambda/2,
200 runs per setting).  Writes umda500-200.txt next to this script unless
--out is given.  Takes a few minutes on a desktop."""

import sys

from umda.cli import main

if __name__ == "__main__":
    args = sys.argv[1:]
    if "--out" not in args:
        args = ["--out", "umda500-200.txt"] + args
    sys.exit(
        main(
            args
            + [
                "sweep",
                "--n", "500",
                "--lambdas", "10:150:4",
                "--mu-rule", "lam/2",
                "--borders", "restricted",
                "--runs", "200",
            ]
        )
    )
