"""Harmonic bias: I(t), C(t) at omega_ac = 4 and (V, I), (V, C) loops at omega_ac = 0.5."""
import numpy as np

from _common import parser, save
from polaron_qdm import analysis as an
from polaron_qdm.experiments import make_spec, run


def main():
    args = parser(__doc__).parse_args()
    for omega in (4.0, 0.5):
        spec = make_spec("trace", {"omega_ac": omega,
                                   "series": [{"V_ac": a} for a in (1.0, 2.0, 4.0)]})
        rows = run(spec)
        print(f"wrote {save(rows, args.out, f'trace_omega{omega:g}.csv')}")
        for s, label in enumerate(spec.labels):
            sub = an.series_rows(rows, s)
            last = max(r["cycle"] for r in sub) - 1
            cyc = [r for r in sub if r["cycle"] == last]
            V, C = an.column(cyc, "V"), an.column(cyc, "C")
            k = int(np.argmin(V))
            print(f"  omega={omega:g} {label:9s} I amplitude={an.oscillation_amplitude(sub):.4f}  "
                  f"cycle deviation={an.cycle_deviation(sub):.1e}  "
                  f"C in [{C.min():.4f}, {C.max():.4f}]  "
                  f"high-V slope ratio={an.flattening_ratio(V[k:], C[k:]):.3f}")


if __name__ == "__main__":
    main()
