"""Stationary C-T curves at eV = 0.1, kappa = 0.63: death and rebirth analysis."""
from _common import parser, save
from polaron_qdm import analysis as an
from polaron_qdm.experiments import make_spec, run


def main():
    args = parser(__doc__).parse_args()
    spec = make_spec("ct")
    rows = run(spec)
    print(f"wrote {save(rows, args.out, 'ct.csv')}")
    for s, label in enumerate(spec.labels):
        sub = an.series_rows(rows, s)
        T, C = an.column(sub, "temperature"), an.column(sub, "C")
        pattern = an.rebirth_pattern(C)
        zeros = [(round(float(T[a]), 3), round(float(T[b - 1]), 3)) for a, b in an.zero_intervals(C)]
        print(f"{label:12s} peak C={C.max():.3e} at T={T[C.argmax()]:.3f}  zero on T in {zeros}  "
              f"{pattern}")


if __name__ == "__main__":
    main()
