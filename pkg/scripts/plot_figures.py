"""Write the support diagrams used in the README as SVG files.

Usage: python3 scripts/plot_figures.py [OUTDIR]   (default: figures/)

* ``standard0.svg``: the standard lattice t2^0 O in V(2);
* ``nonstandard.svg``: a lattice strictly between two standard ones;
* ``twisted_lift.svg``: images of the generators under the negative twist;
* ``open_profile.svg``: a thinning open profile and its cover by products.
"""

from __future__ import annotations

import pathlib
import sys

from tatekit import lattice as lat
from tatekit.basefield import QQ
from tatekit.geometry import OpenProfile, strictness_witnesses
from tatekit.liftings import lift, twisted
from tatekit.plot import plot_support
from tatekit.series import polynomial

RADIUS = 6


def twisted_images():
    spec = twisted("neg-identity", RADIUS)
    images = {}
    for _, d in spec.gens:
        images.update(dict(lift(spec, polynomial(QQ, 1, {(d,): 1})).terms))
    return polynomial(QQ, 2, images)


def main() -> int:
    out = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "figures")
    out.mkdir(parents=True, exist_ok=True)
    box = (range(-6, 7), range(-6, 7))
    nonstandard = strictness_witnesses()["tate_not_standard"][0]
    figures = {
        "standard0.svg": plot_support(lat.standard(2, 0), box, "svg", title="t2^0 O"),
        "nonstandard.svg": plot_support(nonstandard, box, "svg", title=lat.describe(nonstandard)),
        "twisted_lift.svg": plot_support(
            twisted_images(), (range(-RADIUS - 2, RADIUS + 3), range(0, 2)), "svg", title="b_i -> b_i + t1^-i t2"
        ),
        "open_profile.svg": plot_support(
            OpenProfile(threshold=0, base=0, slope=-1), (range(-10, 4), range(-4, 12)), "svg", axes=(2, 1), title="V = sum U_i t2^i"
        ),
    }
    for name, svg in figures.items():
        (out / name).write_text(svg, encoding="utf-8")
        print(out / name)
    return 0


if __name__ == "__main__":
    sys.exit(main())
