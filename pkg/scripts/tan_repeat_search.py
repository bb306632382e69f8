"""Iterate x -> tan(x) in float64 and look for the first exactly repeated value."""
import argparse

from tmchaos.maps import Tan, iterate_map


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--x0", type=float, default=1.0)
    ap.add_argument("--steps", type=int, default=1_000_000)
    args = ap.parse_args()

    run = iterate_map(Tan(), args.x0, args.steps)
    seen = {}
    for t, x in enumerate(run.orbit.samples.tolist()):
        if x in seen:
            print(f"repeat: step {t} equals step {seen[x]} (value {x!r})")
            break
        seen[x] = t
    else:
        print(f"no repeat among {len(run.orbit)} values")
    print(run.summary())


if __name__ == "__main__":
    main()
