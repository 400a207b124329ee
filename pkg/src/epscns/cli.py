"""Command-line front end.

Exit status: 0 success, 2 a cross-validation mismatch, 3 nothing
mismatched but some requested decision was inconclusive, 64 usage error.
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, fields, replace
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import atlas, cns, report
from .dynamics import SrsParameter, orbit
from .geometry import parse_rational, parse_vector
from .witness import Caps, decide_point

EXIT_OK, EXIT_MISMATCH, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 2, 3, 64
OUT_ENV = "EPSCNS_OUT"


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    witness_cap: int = 10_000
    depth: int = 12
    cycle_length: int = 64
    cycle_count: int = 100_000
    orbit_steps: int = 100_000
    search_radius: int = 6
    box_radius: int = 25
    jobs: int = 1
    out: str = "epscns-out"

    def __post_init__(self):
        for f in fields(self):
            if f.name != "out" and getattr(self, f.name) <= 0:
                raise UsageError(f"{f.name} must be positive")

    def caps(self) -> Caps:
        return Caps(self.witness_cap, self.depth, self.cycle_length, self.cycle_count,
                    self.orbit_steps, self.search_radius)


_INT_KEYS = {f.name for f in fields(RunConfig)} - {"out"}


def read_config(path: Path) -> dict:
    """key=value lines; ``#`` starts a comment."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        key, val = key.strip().replace("-", "_"), val.strip()
        if not sep or key not in _INT_KEYS | {"out"}:
            raise UsageError(f"{path}:{lineno}: unrecognized config line {raw!r}")
        values[key] = val if key == "out" else _int(val, key)
    return values


def _int(text: str, what: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise UsageError(f"{what} must be an integer, got {text!r}") from None


def build_config(args) -> RunConfig:
    values = {}
    if args.config:
        values.update(read_config(args.config))
    if os.environ.get(OUT_ENV):
        values["out"] = os.environ[OUT_ENV]
    for key in _INT_KEYS | {"out"}:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    return replace(RunConfig(), **values)


# ---------------------------------------------------------------------------
# argument types


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _vector(text: str) -> tuple:
    try:
        return parse_vector(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _lattice(text: str) -> tuple:
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer vector: {text!r}") from None


def _eps(text: str) -> Fraction:
    e = _rational(text)
    if not 0 <= e < 1:
        raise argparse.ArgumentTypeError(f"eps must lie in [0, 1), got {text}")
    return e


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# value options whose arguments may begin with "-"
_VALUE_FLAGS = ("--r", "--z", "--eps", "--value", "--poly")


def _glue_negative(argv: list) -> list:
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", type=Path, help="key=value file")
    common.add_argument("--witness-cap", dest="witness_cap", type=int)
    common.add_argument("--depth", type=int)
    common.add_argument("--cycle-length", dest="cycle_length", type=int)
    common.add_argument("--cycle-count", dest="cycle_count", type=int)
    common.add_argument("--orbit-steps", dest="orbit_steps", type=int)
    common.add_argument("--search-radius", dest="search_radius", type=int)
    common.add_argument("--box-radius", dest="box_radius", type=int)
    common.add_argument("--jobs", type=int)
    common.add_argument("--out", help=f"output directory (default ${OUT_ENV} or ./epscns-out)")

    parser = _Parser(prog="epscns", description="eps-shift radix systems and eps-CNS")
    groups = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    srs = groups.add_parser("srs").add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = srs.add_parser("orbit", parents=[common])
    p.add_argument("--r", type=_vector, required=True)
    p.add_argument("--eps", type=_eps, required=True)
    p.add_argument("--z", type=_lattice, required=True)
    p.set_defaults(handler=cmd_srs_orbit)
    p = srs.add_parser("decide", parents=[common])
    p.add_argument("--r", type=_vector, required=True)
    p.add_argument("--eps", type=_eps, required=True)
    p.set_defaults(handler=cmd_srs_decide)

    cn = groups.add_parser("cns").add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = cn.add_parser("expand", parents=[common])
    p.add_argument("--poly", required=True)
    p.add_argument("--eps", type=_eps, required=True)
    p.add_argument("--value", type=_lattice, required=True)
    p.set_defaults(handler=cmd_cns_expand)
    p = cn.add_parser("check", parents=[common])
    p.add_argument("--poly", required=True)
    p.add_argument("--eps", type=_eps, required=True)
    p.add_argument("--algorithmic", action="store_true", help="cross-check with the witness and box routes")
    p.set_defaults(handler=cmd_cns_check)

    rg = groups.add_parser("region").add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = rg.add_parser("sample", parents=[common])
    p.add_argument("--eps", type=_eps, required=True)
    p.add_argument("--grid", type=int, required=True)
    p.add_argument("--conjecture", action="store_true",
                   help="also report where D(eps) and the samples differ for x < 2/3 - eps/3")
    p.set_defaults(handler=cmd_region_sample)

    hs = groups.add_parser("harness").add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = hs.add_parser("lemmas", parents=[common])
    p.add_argument("--which", required=True, help=f"comma list from {', '.join(atlas.SUPPORTED_LEMMAS)}")
    p.add_argument("--eps", type=_eps, required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--s", type=int)
    p.set_defaults(handler=cmd_harness_lemmas)
    p = hs.add_parser("characterize", parents=[common])
    p.add_argument("--p0-max", dest="p0_max", type=int, required=True)
    p.add_argument("--box", choices=cns.BOX_MODES, default="tiebreak",
                   help="when the residue box runs (default: only on inconclusive certificates)")
    p.set_defaults(handler=cmd_harness_characterize)
    return parser


def _emit(obj):
    sys.stdout.write(report.dumps(obj))


def _out_dir(cfg: RunConfig) -> Path:
    path = Path(cfg.out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _slug(q: Fraction) -> str:
    return f"{q.numerator}_{q.denominator}".replace("-", "m")


# ---------------------------------------------------------------------------
# commands


def cmd_srs_orbit(args, cfg: RunConfig) -> int:
    p = SrsParameter(args.r, args.eps)
    if len(args.z) != p.dim:
        raise UsageError(f"--z has {len(args.z)} entries, --r has {p.dim}")
    out = orbit(p, args.z, cfg.orbit_steps)
    _emit({"schema": "epscns.orbit/1", "r": list(p.r), "eps": p.eps, "z": list(args.z), "outcome": out})
    return EXIT_INCONCLUSIVE if out.kind == "cap_exceeded" else EXIT_OK


def cmd_srs_decide(args, cfg: RunConfig) -> int:
    cert = decide_point(SrsParameter(args.r, args.eps), cfg.caps())
    body = cert.to_json()
    body.update(r=list(args.r), eps=args.eps)
    _emit(body)
    return EXIT_OK if cert.conclusive else EXIT_INCONCLUSIVE


def _poly(text: str) -> cns.MonicPolynomial:
    try:
        return cns.MonicPolynomial.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_cns_expand(args, cfg: RunConfig) -> int:
    P = _poly(args.poly)
    if len(args.value) != P.degree:
        raise UsageError(f"--value needs {P.degree} coefficients")
    try:
        ex = cns.expand(P, args.eps, args.value, cfg.orbit_steps)
    except cns.ExpansionCapExceeded:
        _emit({"schema": "epscns.expansion/1", "cap_exceeded": cfg.orbit_steps})
        return EXIT_INCONCLUSIVE
    body = ex.to_json()
    body.update(polynomial=str(P), eps=args.eps, value=list(args.value))
    _emit(body)
    return EXIT_OK


def cmd_cns_check(args, cfg: RunConfig) -> int:
    P = _poly(args.poly)
    body = {"schema": "epscns.cns/1", "polynomial": str(P), "eps": args.eps}
    closed = None
    if P.degree == 2:
        p0, p1 = P.coeffs
        closed = cns.is_eps_cns_closed_form(p0, p1, args.eps)
        body.update(is_cns=closed, route="closed_form", eps_k=cns.reduce_eps(p0, args.eps))
        if args.eps == 0:
            body["classic"] = cns.is_cns_classic(p0, p1)
        if args.eps == Fraction(1, 2):
            body["scns"] = cns.is_scns(p0, p1)
    if not args.algorithmic and closed is not None:
        _emit(body)
        return EXIT_OK
    try:
        verdict = cns.is_eps_cns_algorithmic(P, args.eps, cfg.box_radius, cfg.caps())
    except cns.RouteDisagreement as exc:
        body.update(is_cns=None, agree=False, error=str(exc))
        _emit(body)
        return EXIT_MISMATCH
    body["algorithmic"] = verdict.to_json()
    if closed is None:
        body.update(is_cns=verdict.is_cns, route=verdict.route)
    if verdict.is_cns is None:
        _emit(body)
        return EXIT_INCONCLUSIVE
    if closed is not None:
        body["agree"] = verdict.is_cns == closed
        if not body["agree"]:
            _emit(body)
            return EXIT_MISMATCH
    _emit(body)
    return EXIT_OK


def _expected_verdict(pt, eps, regions) -> Optional[str]:
    """Verdict implied by B(eps) inside D0 inside D(eps) and, at eps = 1/2, the closed form of D0."""
    if eps == Fraction(1, 2):
        return "in" if atlas.srs_pola(*pt) else "out"
    if regions["B"].contains(pt):
        return "in"
    if regions["T"].contains(pt) or not regions["D"].contains(pt):
        return "out"
    return None


def cmd_region_sample(args, cfg: RunConfig) -> int:
    if args.grid < 2:
        raise UsageError("--grid must be at least 2")
    eps = args.eps
    samples = atlas.region_sample(eps, args.grid, cfg.caps(), jobs=cfg.jobs)
    regions = {k: atlas.region(k, eps) for k in ("B", "D", "T")}
    mismatches = []
    for x, y, v in samples:
        want = _expected_verdict((x, y), eps, regions)
        if v != "inconclusive" and want is not None and v != want:
            mismatches.append({"point": [x, y], "observed": v, "expected": want})
    out = _out_dir(cfg)
    stem = f"sample-eps-{_slug(eps)}-grid-{args.grid}"
    csv_path = report.write_csv(out / f"{stem}.csv", ["x", "y", "verdict"], samples)
    overlays = {k: r.realized.closure() for k, r in regions.items()}
    svg_path = report.write_svg(out / f"{stem}.svg", report.sample_svg(eps, args.grid, samples, overlays))
    counts = {k: sum(1 for *_, v in samples if v == k) for k in ("in", "out", "inconclusive")}
    body = {"schema": "epscns.sample/1", "eps": eps, "grid": args.grid, "counts": counts,
            "mismatches": mismatches, "files": [str(csv_path), str(svg_path)]}
    if args.conjecture:
        strip = [(x, y, v) for x, y, v in samples if x < Fraction(2, 3) - eps / 3]
        body["conjecture"] = {
            "points": len(strip),
            "differences": [[x, y, v] for x, y, v in strip
                            if v != "inconclusive" and (v == "in") != regions["D"].contains((x, y))],
        }
    _emit(body)
    if mismatches:
        return EXIT_MISMATCH
    return EXIT_INCONCLUSIVE if counts["inconclusive"] else EXIT_OK


def cmd_harness_lemmas(args, cfg: RunConfig) -> int:
    ids = atlas.SUPPORTED_LEMMAS if args.which == "all" else tuple(args.which.split(","))
    unknown = [i for i in ids if i not in atlas.SUPPORTED_LEMMAS]
    if unknown:
        raise UsageError(f"unknown lemma ids: {', '.join(unknown)}")
    out = _out_dir(cfg)
    summary = []
    for lemma in ids:
        try:
            rep = atlas.reproduce_lemma(lemma, args.eps, n=args.n, s=args.s, caps=cfg.caps())
        except ValueError as exc:
            raise UsageError(f"{lemma}: {exc}") from None
        suffix = f"-n{args.n}" if args.n is not None else ""
        path = report.write_json(out / f"lemma-{lemma}{suffix}-eps-{_slug(args.eps)}.json", rep)
        summary.append({"lemma": lemma, "ok": rep["ok"], "mismatches": len(rep["mismatches"]),
                        "notes": len(rep["notes"]), "file": str(path)})
    _emit({"schema": "epscns.lemmas/1", "eps": args.eps, "reports": summary})
    return EXIT_OK if all(r["ok"] for r in summary) else EXIT_MISMATCH


def characterize_case(task) -> dict:
    p0, p1, eps, box, box_radius, caps = task
    P = cns.MonicPolynomial((p0, p1))
    closed = cns.is_eps_cns_closed_form(p0, p1, eps)
    geometric = atlas.region("D", eps).contains((Fraction(1, p0), Fraction(p1, p0)))
    try:
        verdict = cns.is_eps_cns_algorithmic(P, eps, box_radius, caps, box=box)
        algorithmic, route = verdict.is_cns, verdict.route
    except cns.RouteDisagreement:
        algorithmic, route = None, "route_disagreement"
    return {"p0": p0, "p1": p1, "eps": eps, "eps_k": cns.reduce_eps(p0, eps), "closed_form": closed,
            "geometry_D": geometric, "algorithmic": algorithmic, "route": route,
            "agree": route != "route_disagreement" and closed == geometric
            and (algorithmic is None or algorithmic == closed)}


def characterization_tasks(p0_max: int, box: str, box_radius: int, caps: Caps) -> list:
    tasks = []
    for a in range(2, p0_max + 1):
        for p0 in (a, -a):
            for p1 in range(-a - 3, a + 4):
                for j in range(4 * a):
                    tasks.append((p0, p1, Fraction(j, 4 * a), box, box_radius, caps))
    return tasks


def cmd_harness_characterize(args, cfg: RunConfig) -> int:
    if args.p0_max < 2:
        raise UsageError("--p0-max must be at least 2")
    tasks = characterization_tasks(args.p0_max, args.box, cfg.box_radius, cfg.caps())
    if cfg.jobs > 1:
        from multiprocessing import Pool

        with Pool(cfg.jobs) as pool:
            rows = pool.map(characterize_case, tasks, chunksize=64)
    else:
        rows = [characterize_case(t) for t in tasks]
    cols = ["p0", "p1", "eps", "eps_k", "closed_form", "geometry_D", "algorithmic", "route", "agree"]
    out = _out_dir(cfg)
    csv_path = report.write_csv(out / f"characterize-p0max-{args.p0_max}.csv", cols,
                                ([r[c] for c in cols] for r in rows))
    disagreements = [r for r in rows if not r["agree"]]
    inconclusive = [r for r in rows if r["algorithmic"] is None and r["agree"]]
    body = {"schema": "epscns.characterize/1", "p0_max": args.p0_max, "cases": len(rows),
            "disagreements": disagreements, "inconclusive": len(inconclusive),
            "routes": {k: sum(1 for r in rows if r["route"] == k) for k in sorted({r["route"] for r in rows})},
            "file": str(csv_path)}
    report.write_json(out / f"characterize-p0max-{args.p0_max}.json", body)
    _emit(body)
    if disagreements:
        return EXIT_MISMATCH
    return EXIT_INCONCLUSIVE if inconclusive else EXIT_OK


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(_glue_negative(argv))
    try:
        cfg = build_config(args)
        return args.handler(args, cfg)
    except UsageError as exc:
        print(f"epscns: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, TypeError) as exc:
        print(f"epscns: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
