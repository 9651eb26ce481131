"""Estimated vs analytic degree-1 angles for unit-disk rotations over a grid of angles.

Prints one row per (relative angle, horizon) with the estimate, the limit and
the gap.  Irrational angles use the Cesaro schedule.
"""

import argparse
import csv
import sys
from dataclasses import dataclass, field

from dsmetric import Angle, KernelSpec, RotationSpec, estimate_Am, geometric_schedule, rotation_orbit
from dsmetric.cli import parse_angle
from dsmetric.rotation import analytic_A1


@dataclass
class Config:
    angles: list = field(default_factory=lambda: ["1/2", "1/3", "1/4", "1/8", "golden", "pi/6"])
    z0: float = 0.9
    horizons: list = field(default_factory=lambda: [250, 500, 1000, 2000])


def run(cfg: Config, out=sys.stdout):
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["angle", "T", "mode", "estimate", "limit", "gap"])
    sz = KernelSpec("szego")
    T_max = max(cfg.horizons)
    ref = rotation_orbit(RotationSpec(1.0, Angle(), cfg.z0), T_max)
    for text in cfg.angles:
        ang = parse_angle(text)
        mode = "direct" if ang.is_rational else "cesaro"
        orb = rotation_orbit(RotationSpec(1.0, ang, cfg.z0), T_max)
        limit = analytic_A1(1.0, 1.0, ang, cfg.z0, cfg.z0)
        for T in cfg.horizons:
            r = estimate_Am(orb, ref, 1, geometric_schedule(T, mode=mode), sz)
            w.writerow([text, T, mode, f"{r.final:.6f}", f"{limit:.6f}", f"{abs(r.final - limit):.2e}"])


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--angles", nargs="+", default=Config().angles)
    p.add_argument("--z0", type=float, default=Config.z0)
    p.add_argument("--horizons", nargs="+", type=int, default=Config().horizons)
    a = p.parse_args(argv)
    run(Config(a.angles, a.z0, a.horizons))


if __name__ == "__main__":
    main()
