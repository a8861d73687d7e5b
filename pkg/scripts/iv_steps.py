"""Stationary I-V curves for g_ph in {0, 0.1, 0.2}: step positions and smoothing."""
import numpy as np

from _common import parser, save
from polaron_qdm import analysis as an
from polaron_qdm.experiments import make_spec, run


def main():
    args = parser(__doc__).parse_args()
    spec = make_spec("iv")
    rows = run(spec)
    print(f"wrote {save(rows, args.out, 'iv.csv')}")
    I0 = an.column(an.series_rows(rows, 0), "I")
    for s, label in enumerate(spec.labels):
        sub = an.series_rows(rows, s)
        V, I = an.column(sub, "V"), an.column(sub, "I")
        peaks = np.round(an.derivative_peaks(V, I), 2).tolist()
        print(f"{label:24s} I(V=16)={I[-1]:.4f}  max dI/dV={an.discrete_derivative(V, I).max():.4f}  "
              f"steps at V={peaks}  max(I - I_g0)={np.max(I - I0):+.4f}")


if __name__ == "__main__":
    main()
