"""k-NN classification of noise-free rotation series through the classify command.

Writes the seeded corpus as a UCR file and runs ``dsmetric classify`` on it,
once per degree m.
"""

import argparse
import json
import tempfile
from contextlib import redirect_stdout
from dataclasses import dataclass, field
from io import StringIO
from pathlib import Path

from dsmetric.cli import main as cli_main, parse_angle
from dsmetric.io import write_ucr
from dsmetric.trajectories import rotation_ucr_corpus


@dataclass
class Config:
    angles: list = field(default_factory=lambda: ["1/3", "1/4", "golden"])
    per_class: int = 20
    length: int = 64
    seed: int = 0
    degrees: list = field(default_factory=lambda: [1, 2])
    kernel: str = "gaussian"
    jobs: int = 4


def run(cfg: Config):
    recs = rotation_ucr_corpus([parse_angle(a) for a in cfg.angles], cfg.per_class, cfg.length, cfg.seed)
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "corpus.tsv"
        write_ucr(path, recs)
        for m in cfg.degrees:
            buf = StringIO()
            with redirect_stdout(buf):
                code = cli_main(["classify", str(path), "--kernel", cfg.kernel, "--m", str(m), "--jobs", str(cfg.jobs)])
            cv = json.loads(buf.getvalue())["cv"]
            print(f"m={m} exit={code} mean error {cv['mean_error']:.3f} (sd {cv['sd_error']:.3f})")


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--angles", nargs="+", default=Config().angles)
    p.add_argument("--per-class", type=int, default=Config.per_class)
    p.add_argument("--length", type=int, default=Config.length)
    p.add_argument("--seed", type=int, default=Config.seed)
    p.add_argument("--degrees", nargs="+", type=int, default=Config().degrees)
    p.add_argument("--kernel", default=Config.kernel)
    p.add_argument("--jobs", type=int, default=Config.jobs)
    a = p.parse_args(argv)
    run(Config(a.angles, a.per_class, a.length, a.seed, a.degrees, a.kernel, a.jobs))


if __name__ == "__main__":
    main()
