"""Classify logistic-map orbits over a grid of growth rates."""
import argparse

import numpy as np

from tmchaos.maps import Logistic, iterate_map
from tmchaos.orbits import classify_orbit


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--r-min", type=float, default=2.8)
    ap.add_argument("--r-max", type=float, default=4.0)
    ap.add_argument("--points", type=int, default=25)
    ap.add_argument("--steps", type=int, default=20_000)
    ap.add_argument("--x0", type=float, default=0.3)
    args = ap.parse_args()

    print("r,label,k")
    for r in np.linspace(args.r_min, args.r_max, args.points):
        rep = classify_orbit(iterate_map(Logistic(float(r)), args.x0, args.steps).orbit)
        print(f"{r:.4f},{rep.label},{rep.k if rep.k is not None else ''}")


if __name__ == "__main__":
    main()
