"""Robin waveguide with a bumped wall: ground state against the two-wall prediction."""

import numpy as np
from _common import parser, write_csv

from robin_spectra.asymptotics import fit_remainder_exponent, waveguide_sweep
from robin_spectra.curve_geometry import line_bump

COLUMNS = ["beta", "lambda", "threshold", "predicted", "residual", "ratio"]


def main():
    p = parser(__doc__, "waveguide.csv")
    p.add_argument("--betas", type=float, nargs="+", default=[10, 20, 40, 80])
    p.add_argument("--amplitude", type=float, default=0.5)
    p.add_argument("--d", type=float, default=1.0)
    p.add_argument("--mesh", type=int, nargs=2, default=[256, 256])
    args = p.parse_args()
    out = waveguide_sweep(line_bump(args.amplitude), args.d, args.betas, 1,
                          n_s=args.mesh[0], n_u=args.mesh[1], s_window=(-6.0, 6.0))
    rows = []
    for b, lam, thr, pred in zip(out["betas"], out["values"][:, 0], out["threshold"], out["predicted"]):
        rows.append({"beta": float(b), "lambda": float(lam), "threshold": float(thr),
                     "predicted": float(pred), "residual": float(lam - pred),
                     "ratio": float((lam - pred) / b ** (2 / 3))})
    write_csv(args.out, rows, COLUMNS)
    fit = fit_remainder_exponent(out["betas"], np.array([r["residual"] for r in rows]))
    print(f"remainder exponent {fit.exponent:.4f} (r2 {fit.r2:.6f})")


if __name__ == "__main__":
    main()
