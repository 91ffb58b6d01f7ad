"""Ground-energy truncation error against the closed form as n_max grows."""

import argparse
from pathlib import Path

from ncfield.serialize import write_csv
from ncfield.spectra import FockBasisSpec, NumericParams, ground_energy


def exact(p, k1, k2):
    c = p.field_factor * p.l0 / 2
    shift = c * c * (k1 * k1 + k2 * k2) / (2 * p.m_osc * p.omega**2)
    return p.hbar**2 * (k1 * k1 + k2 * k2) / (2 * p.mass) + 1.5 * p.hbar * p.omega - shift


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="ncfield-out/truncation.csv")
    ap.add_argument("--k", type=float, default=2.0)
    ap.add_argument("--n-max", type=int, default=16)
    ap.add_argument("--method", choices=("dense", "sparse"), default="sparse")
    args = ap.parse_args()

    p = NumericParams()
    ref = exact(p, args.k, 0.0)
    rows = []
    for n in range(2, args.n_max + 1, 2):
        g = ground_energy(p, args.k, 0.0, FockBasisSpec(n), method=args.method)
        rows.append({"n_max": n, "ground_energy": g.energy, "error": g.energy - ref,
                     "truncation_delta": g.truncation_delta})
        print(f"n_max={n:2d}  E0={g.energy:.15f}  err={g.energy - ref:.3e}")
    write_csv(Path(args.out), ["n_max", "ground_energy", "error", "truncation_delta"], rows)


if __name__ == "__main__":
    main()
