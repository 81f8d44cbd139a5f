#!/usr/bin/env python3
"""Console report: stationary-point census over a few interaction strengths."""

import argparse

import numpy as np

from nhmf_dimer import ModelParams, exact_spectrum
from nhmf_dimer.meanfield import bond_current
from nhmf_dimer.stationary_search import SearchConfig, find_hmf_stationary, find_nhmf_stationary


def run(u_values):
    params = ModelParams()
    cfg = SearchConfig()
    for u in u_values:
        p = params.with_u(u)
        pts = find_nhmf_stationary(p, cfg)
        n_hmf = len(find_hmf_stationary(p, cfg))
        exact = np.sort(exact_spectrum(p).energies.real)
        print(f"\nU = {u}:  {len(pts)} NHMF points, {n_hmf} HMF points")
        print(f"  exact spectrum: {np.round(exact, 6)}")
        for q in pts:
            j_up, j_dn = bond_current(q.orb, p.t)
            print(
                f"  E = {q.nh_energy:+.6f}   E_h = {q.h_energy_at_point:+.6f}   "
                f"{q.point_class:<18} j = ({j_up:+.3f}, {j_dn:+.3f})"
            )


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("u", nargs="*", type=float, default=[0.5, 2.0, 4.0])
    args = ap.parse_args()
    run(args.u or [0.5, 2.0, 4.0])
