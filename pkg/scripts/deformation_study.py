"""Existence functional for deformed lines: S_n against n and the n -> infinity limit."""

import math

from _common import parser, write_csv

from robin_spectra.curve_geometry import gaussian_graph, straight_line, wedge_smoothed
from robin_spectra.variational import deformation_functional, deformation_limit, wedge_deformation_limit

COLUMNS = ["curve", "beta", "n", "S_n", "limit", "gradient", "bulk", "boundary"]


def main():
    p = parser(__doc__, "deformation.csv")
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--ns", type=float, nargs="+", default=[8, 16, 32, 64, 128, 256, 512, 1024, 4096])
    args = p.parse_args()
    curves = {"line": straight_line(), "graph_bump": gaussian_graph(0.3),
              "wedge_pi6": wedge_smoothed(math.pi / 6)}
    rows = []
    for name, curve in curves.items():
        lim = deformation_limit(curve, args.beta)
        for n in args.ns:
            r = deformation_functional(curve, args.beta, n)
            rows.append({"curve": name, "beta": args.beta, "n": n, "S_n": r.S_n, "limit": lim, **r.terms})
    write_csv(args.out, rows, COLUMNS)
    print(f"sharp wedge limit {wedge_deformation_limit(math.pi / 6, args.beta):.6f}")


if __name__ == "__main__":
    main()
