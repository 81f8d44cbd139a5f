#!/usr/bin/env python3
"""Emit every dataset of the study into out/ (CSV + SVG).

Runs the CLI commands with the default study parameters: the exact spectrum
sweep, both mean-field branch sweeps, the U = 1/2 case study, and the
transmission curves at beta = 0.1.
"""

import pathlib
import sys

from nhmf_dimer.cli import main

OUT = pathlib.Path(__file__).resolve().parent.parent / "out"


def run():
    OUT.mkdir(exist_ok=True)
    jobs = [
        ["exact-sweep", "--u-min", "0", "--u-max", "10", "--u-step", "0.05",
         "--out", str(OUT / "exact_spectrum.csv"), "--plot"],
        ["hmf-sweep", "--u-min", "0.05", "--u-max", "10", "--u-step", "0.1",
         "--out", str(OUT / "hmf_branches.csv"), "--plot"],
        ["nhmf-sweep", "--u-min", "0.05", "--u-max", "10", "--u-step", "0.1",
         "--out", str(OUT / "nhmf_branches.csv"), "--plot"],
        ["case-study", "--u", "0.5", "--out", str(OUT / "case_study_u0.5.json")],
        ["transmission", "--u", "0.5", "--beta", "0.1",
         "--out", str(OUT / "transmission.csv"), "--plot"],
    ]
    for argv in jobs:
        print("+ nhmf-dimer", " ".join(argv))
        code = main(argv)
        if code != 0:
            return code
    print(f"artifacts written to {OUT}/")
    return 0


if __name__ == "__main__":
    sys.exit(run())
