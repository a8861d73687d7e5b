"""Stationary C-V curves at kappa = 0.55: phonon coupling and temperature series."""
import numpy as np

from _common import parser, save
from polaron_qdm import analysis as an
from polaron_qdm.experiments import make_spec, run


def main():
    args = parser(__doc__).parse_args()
    spec = make_spec("cv")
    rows = run(spec)
    print(f"wrote {save(rows, args.out, 'cv.csv')}")
    probes = (2.0, 4.0, 6.0, 10.0, 16.0)
    print("series".ljust(28) + "".join(f"C(V={v:g})".rjust(12) for v in probes))
    for s, label in enumerate(spec.labels):
        sub = an.series_rows(rows, s)
        V, C = an.column(sub, "V"), an.column(sub, "C")
        print(label.ljust(28) + "".join(f"{np.interp(v, V, C):12.5f}" for v in probes))
    local = run(make_spec("cv", {"kappa": 0.0, "cross_coupling_mode": "local", "g_ph": 0.1}))
    print(f"local mode, kappa=0: max C = {an.column(local, 'C').max():.3g}")


if __name__ == "__main__":
    main()
