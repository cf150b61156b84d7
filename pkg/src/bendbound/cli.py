"""Command-line front end: ``eval``, ``table``, ``verify`` and ``lamination``.

Exit codes: 0 success, 1 a verified inequality failed, 2 usage or domain
error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import bounds, oracles
from .errors import BendboundError, DomainError
from .lamination import FiniteLamination, norm_L

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

EVAL_KINDS = ("bL", "cL", "r", "aw", "teich", "fbcy")
TABLE_KINDS = ("bL", "cL")
VERIFY_TARGETS = ("halfplane-lemma", "area-lemma", "bers-kernel", "wedge", "trig")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    kind: str | None = None
    target: str | None = None
    L: float | None = None
    x: float | None = None
    r: float | None = None
    s: float | None = None
    k: float | None = None
    dT: float | None = None
    trials: int | None = None
    seed: int = 0
    tol: float | None = None
    samples: int | None = None
    input: str | None = None
    out: str | None = None
    format: str | None = None
    extra: dict = field(default_factory=dict)

    def need(self, *names):
        missing = [n for n in names if getattr(self, n) is None]
        if missing:
            raise UsageError(f"{self.subcommand}: missing --{', --'.join(missing)}")
        return [getattr(self, n) for n in names]

    def echo(self) -> dict:
        return {k: v for k, v in vars(self).items() if v is not None and k != "extra"}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bendbound", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="subcommand", required=True)

    def numeric(sp, *names):
        for n in names:
            sp.add_argument(f"--{n}", dest=n, type=float)

    ev = sub.add_parser("eval", help="evaluate one bound")
    ev.add_argument("--kind", required=True, choices=EVAL_KINDS)
    numeric(ev, "L", "x", "r", "s", "dT")

    tb = sub.add_parser("table", help="tabulate a bound as CSV")
    tb.add_argument("--kind", default="bL", choices=TABLE_KINDS)
    numeric(tb, "L")
    tb.add_argument("--samples", type=int, default=200)
    tb.add_argument("--out")
    tb.add_argument("--format", default="csv", choices=("csv", "json"))

    vf = sub.add_parser("verify", help="run a verification campaign")
    vf.add_argument("target", choices=VERIFY_TARGETS)
    numeric(vf, "L", "r", "k", "tol")
    vf.add_argument("--trials", type=int)
    vf.add_argument("--seed", type=int, default=0)
    vf.add_argument("--samples", type=int)
    vf.add_argument("--out")
    vf.add_argument("--format", default="json", choices=("json",))

    lm = sub.add_parser("lamination", help="norm of a lamination read from a file")
    lm.add_argument("--input", required=True)
    numeric(lm, "L")
    return p


def _config(ns: argparse.Namespace) -> RunConfig:
    known = set(RunConfig.__dataclass_fields__)
    kw = {k: v for k, v in vars(ns).items() if k in known}
    return RunConfig(**kw)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_eval(cfg: RunConfig, out) -> int:
    kind = cfg.kind
    if kind == "bL":
        ev = bounds.b_L(*cfg.need("L", "x"))
    elif kind == "cL":
        ev = bounds.c_L(*cfg.need("L", "r"))
    elif kind == "teich":
        ev = bounds.bending_from_teich(*cfg.need("L", "dT"))
    elif kind == "r":
        ev = bounds.BoundEvaluation(bounds.r_of_s(*cfg.need("s")), bounds.FIRST)
    elif kind == "aw":
        ev = bounds.BoundEvaluation(bounds.ahlfors_weill(*cfg.need("s")), bounds.FIRST)
    else:
        ev = bounds.BoundEvaluation(bounds.f_bcy(*cfg.need("L")), bounds.FIRST)
    print(f"{ev.value:.15g} {ev.branch}", file=out)
    return EXIT_OK


def table_rows(kind: str, L: float, samples: int) -> list:
    """Rows ``(x, value, branch)`` at uniform abscissae over the full domain."""
    if samples < 2:
        raise UsageError("--samples must be at least 2")
    if kind == "bL":
        bounds.b_L(L, 0.0)
        xs = np.linspace(0.0, bounds.b_L_xmax(L), samples)
        f = lambda x: bounds.b_L(L, x)
    else:
        bounds.c_L(L, 0.0)
        xs = np.linspace(0.0, bounds.c_L_rmax(L), samples)
        f = lambda x: bounds.c_L(L, x)
    rows = []
    for x in xs:
        ev = f(float(x))
        rows.append((float(x), ev.value, ev.branch))
    return rows


def cmd_table(cfg: RunConfig, out) -> int:
    (L,) = cfg.need("L")
    rows = table_rows(cfg.kind, L, cfg.samples)
    if cfg.format == "json":
        text = json.dumps({"config": cfg.echo(),
                           "rows": [{"x": x, "value": v, "branch": b} for x, v, b in rows]}, indent=2)
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "value", "branch"])
        w.writerows((repr(x), repr(v), b) for x, v, b in rows)
        text = buf.getvalue()
    _emit(text, cfg.out, out)
    return EXIT_OK


def run_verify(cfg: RunConfig) -> oracles.VerificationReport:
    t = cfg.target
    if t == "halfplane-lemma":
        L, r = cfg.need("L", "r")
        return oracles.verify_halfplane_lemma(L, r, cfg.trials or 4000, cfg.seed)
    if t == "area-lemma":
        return oracles.verify_area_lemma(cfg.trials or 50, cfg.seed, cfg.tol or 1e-8)
    if t == "bers-kernel":
        return oracles.verify_bers_kernel(cfg.trials or 20, cfg.seed, cfg.tol or 1e-8)
    if t == "wedge":
        k, L = cfg.need("k", "L")
        return oracles.verify_wedge(k, L, cfg.samples or 10_000)
    return oracles.verify_trig(cfg.trials or 10_000, cfg.seed, cfg.tol or 1e-10)


def cmd_verify(cfg: RunConfig, out) -> int:
    if cfg.trials is not None and cfg.trials < 1:
        raise UsageError("--trials must be positive")
    rep = run_verify(cfg)
    d = rep.to_dict()
    d["config"] = {**cfg.echo(), **d["config"]}
    d["passed"] = rep.passed
    _emit(json.dumps(d, indent=2, sort_keys=True) + "\n", cfg.out, out)
    return EXIT_OK if rep.passed else EXIT_VIOLATION


def cmd_lamination(cfg: RunConfig, out) -> int:
    (L,) = cfg.need("L")
    if not L > 0:
        raise DomainError("L must be positive", threshold="L > 0")
    try:
        mu = FiniteLamination.load(cfg.input)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed lamination file: {exc}") from None
    print(f"{norm_L(mu, L):.15g}", file=out)
    return EXIT_OK


def _emit(text: str, path: str | None, out) -> None:
    if path is None:
        out.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


COMMANDS = {"eval": cmd_eval, "table": cmd_table, "verify": cmd_verify, "lamination": cmd_lamination}


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        ns = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    cfg = _config(ns)
    for name in ("L", "x", "r", "s", "k", "dT", "tol"):
        v = getattr(cfg, name)
        if v is not None and not math.isfinite(v):
            print(f"error: --{name} must be finite", file=err)
            return EXIT_USAGE
    try:
        return COMMANDS[cfg.subcommand](cfg, out)
    except OSError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_IO
    except (UsageError, BendboundError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=err)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
