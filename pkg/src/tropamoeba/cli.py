"""Command-line experiments: ``tropamoeba <command> [flags]``.

Exit codes: 0 ok, 2 input error, 3 numeric degradation (root-finder
failures), 4 empty or degenerate geometry, 5 verification mismatch.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import artifacts
from .dequant_amoeba import (
    archimedean_slack,
    deform_family,
    hausdorff_to_tropical,
    sample_amoeba,
    sample_orthant_curve,
)
from .polyhedral import cells_T, cells_TR, member_TR
from .polynomials import (
    LaurentPoly,
    OrthantSign,
    PolyFormatError,
    TropPoly,
    eval_trop,
    load_poly,
    sign_split,
    tropicalize_trivial,
    tropicalize_valued,
)
from .puiseux import kapranov_check, newton_polygon_roots, parse_series_poly, tropical_roots
from .teichmueller import RAY_PRESETS, Word, boundary_ray_limit, default_params

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERIC = 3
EXIT_EMPTY = 4
EXIT_MISMATCH = 5

MAX_FAILURE_RATE = 0.10


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INPUT):
        super().__init__(message)
        self.code = code


@dataclass
class RunConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    h_values: list[float] = field(default_factory=list)
    grid: tuple[int, int] | None = None
    seed: int = 0
    out_dir: str = "tropamoeba_out"


# --- argument parsing helpers ----------------------------------------------


def _parse_grid(text: str) -> tuple[int, int]:
    try:
        a, b = text.lower().split("x")
        g = (int(a), int(b))
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like 200x64, got {text!r}") from None
    if min(g) < 1:
        raise argparse.ArgumentTypeError("grid sizes must be positive")
    return g


def _parse_floats(text: str) -> list[float]:
    try:
        vals = [float(v) for v in text.replace(" ", "").split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _parse_coord(tok: str):
    tok = tok.strip()
    if any(ch in tok for ch in ".eE") or tok.lower() in ("inf", "-inf", "nan"):
        return float(tok)
    return Fraction(tok)


def _load_points(path: str) -> list[tuple]:
    pts = []
    try:
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                toks = [t for t in line.replace(",", " ").split()]
                try:
                    pts.append(tuple(_parse_coord(t) for t in toks))
                except (ValueError, ZeroDivisionError):
                    if not pts and all(t.isidentifier() for t in toks):
                        continue  # header row
                    raise CliError(f"{path}: cannot read point {line!r}")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None
    return pts


def _load(path: str):
    try:
        return load_poly(path)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None
    except PolyFormatError as exc:
        raise CliError(f"{path}: {exc}") from None


def _need_laurent(p, path: str) -> LaurentPoly:
    if not isinstance(p, LaurentPoly):
        raise CliError(f"{path}: expected a polynomial with rational (string) coefficients")
    return p


def _orthant(text: str | None, n: int) -> OrthantSign:
    if text is None:
        return OrthantSign.positive(n)
    try:
        s = OrthantSign.parse(text)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    if len(s) != n:
        raise CliError(f"orthant {text!r} has {len(s)} signs, polynomial has {n} variables")
    return s


def _out_dir(args) -> Path:
    return Path(args.out) if args.out else artifacts.default_out_dir()


def _warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


# --- commands --------------------------------------------------------------


def cmd_trop_eval(args) -> int:
    p = _load(args.poly)
    P = p if isinstance(p, TropPoly) else tropicalize_trivial(p)
    pts = _load_points(args.points)
    split = None
    if args.orthant is not None:
        f = _need_laurent(p, args.poly)
        fp, fm = sign_split(f, _orthant(args.orthant, f.nvars))
        if fp.is_zero() or fm.is_zero():
            raise CliError("one side of the sign split is empty: no real tropical hypersurface", EXIT_EMPTY)
        split = (tropicalize_trivial(fp), tropicalize_trivial(fm))
    names = [f"x{i + 1}" for i in range(P.nvars)]
    header = names + ["value", "multiplicity"]
    if split:
        header += ["plus", "minus", "on_TR"]
    rows = []
    for x in pts:
        if len(x) != P.nvars:
            raise CliError(f"point {x} has {len(x)} coordinates, polynomial has {P.nvars}")
        val, arg = eval_trop(P, x)
        row = list(x) + [val, len(arg)]
        if split:
            row += [eval_trop(split[0], x)[0], eval_trop(split[1], x)[0], member_TR(*split, x)]
        rows.append(row)
    out = _out_dir(args)
    path = artifacts.write_csv(out / "trop_eval.csv", header, rows)
    for r in rows:
        print(",".join(artifacts.fmt_value(v) for v in r))
    print(f"wrote {path}", file=sys.stderr)
    return EXIT_OK


def cmd_amoeba(args) -> int:
    f = _need_laurent(_load(args.poly), args.poly)
    if f.nvars > 3:
        raise CliError("amoeba sampling supports at most 3 variables")
    if args.svg and f.nvars != 2:
        raise CliError("SVG output is only supported for 2-variable polynomials")
    out = _out_dir(args)
    lo, hi = args.log_radius
    try:
        S = sample_amoeba(f, args.grid, (lo, hi), args.seed)
    except ValueError as exc:
        raise CliError(f"{args.poly}: {exc}") from None
    names = [f"log_abs_x{i + 1}" for i in range(f.nvars)]
    path = artifacts.write_points_csv(out / "amoeba.csv", S.points, names)
    if len(S.points) == 0:
        _warn(S.diagnostics.get("reason", "empty point cloud"))
    slack = float(archimedean_slack(f, S.points).min()) if len(S.points) else math.nan
    summary = {
        "config": asdict(_config(args, "amoeba", [args.poly], grid=list(args.grid))),
        "points": int(len(S.points)),
        "samples": S.n_samples,
        "root_failures": S.n_failed,
        "failure_rate": S.failure_rate,
        "min_slack": slack,
        "log_radius": [lo, hi],
        "diagnostics": S.diagnostics,
    }
    artifacts.write_json(out / "amoeba.json", summary)
    if args.svg:
        box = np.array([[lo, hi], [lo, hi]]) if not args.box else np.asarray(args.box, dtype=float).reshape(2, 2)
        C = cells_T(tropicalize_trivial(f)) if args.overlay and len(f.terms) > 1 else None
        artifacts.plot_svg(out / "amoeba.svg", S.points, box, C, title=str(f))
    print(f"{len(S.points)} points ({S.n_failed}/{S.n_samples} root-finder failures), min slack {slack:.3g}; wrote {path}")
    if S.failure_rate > MAX_FAILURE_RATE:
        print(f"error: root-finder failure rate {S.failure_rate:.1%} exceeds {MAX_FAILURE_RATE:.0%}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_deform(args) -> int:
    f = _need_laurent(_load(args.poly), args.poly)
    if f.nvars != 2:
        raise CliError("deform supports plane curves (2 variables)")
    s = _orthant(args.orthant, 2)
    hs = args.h
    if any(h <= 0 for h in hs):
        raise CliError("h values must be positive")
    box = np.asarray(args.box, dtype=float).reshape(2, 2)
    if not (box[:, 0] < box[:, 1]).all():
        raise CliError("box must be lo1,hi1,lo2,hi2 with lo < hi")
    fp, fm = sign_split(f, s)
    if fp.is_zero() or fm.is_zero():
        raise CliError(f"no points of V(f) in orthant {s}", EXIT_EMPTY)
    C = cells_TR(tropicalize_trivial(fp), tropicalize_trivial(fm))
    out = _out_dir(args)
    table = []
    files = []
    for h in hs:
        span = (float(box.min()) / h - 1.0, float(box.max()) / h + 1.0)
        pos = sample_orthant_curve(f, s, span, args.samples, args.seed)
        if len(pos) == 0:
            raise CliError(f"no points of V(f) in orthant {s}", EXIT_EMPTY)
        D = deform_family(pos, h)
        name = f"deform_h{artifacts.fmt_value(h)}.csv"
        artifacts.write_points_csv(out / name, D.points, ["u1", "u2"])
        files.append(name)
        try:
            d = hausdorff_to_tropical(D, C, box)
        except ValueError as exc:
            raise CliError(f"h={h}: {exc}", EXIT_EMPTY) from None
        table.append((h, d))
    artifacts.write_csv(out / "hausdorff.csv", ["h", "d_H"], table)
    by_h = sorted(table, reverse=True)
    monotone = all(b[1] <= a[1] + 1e-12 for a, b in zip(by_h, by_h[1:]))
    manifest = {
        "config": asdict(_config(args, "deform", [args.poly], h_values=hs)),
        "orthant": str(s),
        "box": box.tolist(),
        "files": files,
        "hausdorff": [{"h": h, "d_H": d} for h, d in table],
        "monotone": monotone,
        "tropical_limit": C.to_json(),
    }
    artifacts.write_json(out / "manifest.json", manifest)
    print("h,d_H")
    for h, d in table:
        print(f"{artifacts.fmt_value(h)},{artifacts.fmt_value(d)}")
    if not monotone:
        _warn("d_H is not monotone in h")
    return EXIT_OK


def _read_text(args) -> str:
    if args.expr:
        return args.expr
    if not args.poly:
        raise CliError("give --poly <file> or --expr <polynomial>")
    try:
        return Path(args.poly).read_text(encoding="utf-8").strip()
    except OSError as exc:
        raise CliError(f"cannot read {args.poly}: {exc.strerror}") from None


def cmd_newton(args) -> int:
    text = _read_text(args)
    try:
        coeffs = parse_series_poly(text, var=args.var, param=args.param)
    except (ValueError, TypeError, SyntaxError) as exc:
        raise CliError(str(exc)) from None
    if not coeffs or all(c.is_zero() for c in coeffs):
        raise CliError("zero polynomial has no Newton polygon")
    try:
        nr = newton_polygon_roots(coeffs)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    ok, lhs, rhs = kapranov_check(coeffs)
    trop = tropical_roots(tropicalize_valued(coeffs))
    rows = []
    for v, m in nr.grouped():
        rows.append(("valuation", v, -v, m))
    for y, m in trop:
        rows.append(("tropical_root", -y, y, m))
    out = _out_dir(args)
    artifacts.write_csv(out / "newton.csv", ["kind", "valuation", "log_point", "multiplicity"], rows)
    artifacts.write_json(
        out / "newton.json",
        {
            "polynomial": text,
            "valuations": [[v, m] for v, m in nr.grouped()],
            "zero_roots": nr.zero_roots,
            "tropical_roots": [[y, m] for y, m in trop],
            "match": ok,
        },
    )
    print("root valuations:", ", ".join(f"{v} (x{m})" for v, m in nr.grouped()) or "none")
    print("tropical roots:", ", ".join(f"{y} (x{m})" for y, m in trop) or "none")
    if nr.zero_roots:
        print(f"roots at 0: {nr.zero_roots}")
    print("match" if ok else "MISMATCH")
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_markov_boundary(args) -> int:
    rays = [r for r in args.ray.split(",") if r]
    for r in rays:
        if r not in RAY_PRESETS:
            raise CliError(f"unknown ray {r!r}; presets: {', '.join(sorted(RAY_PRESETS))}")
    try:
        family = [Word.parse(w) for w in args.words.split(",") if w.strip()]
    except ValueError as exc:
        raise CliError(str(exc)) from None
    params = default_params(args.steps, args.wmin, args.wmax)
    out = _out_dir(args)
    verdicts = {}
    code = EXIT_OK
    for r in rays:
        R = boundary_ray_limit(RAY_PRESETS[r], family, params, tol=args.tol)
        wn = [str(w) for w in family]
        header = ["t", "x", "y", "z"] + [f"log_tr_{w}" for w in wn] + [f"sphere_{w}" for w in wn]
        rows = []
        for t, c, L in zip(R.params, R.characters, R.log_traces):
            nrm = float(np.linalg.norm(L))
            sp = L / nrm if nrm > 0 else L * math.nan
            rows.append([t, c.x, c.y, c.z, *L, *sp])
        artifacts.write_csv(out / f"ray_{r}.csv", header, rows)
        rep = R.report
        verdicts[r] = {
            "status": rep.status,
            "limit": list(rep.limit.coords) if rep.limit else None,
            "tail": rep.tail,
            "log_norm": rep.log_norm,
            "on_tropical_cone": R.on_cone,
            "cone_gap": R.cone_gap,
            "message": rep.message,
        }
        lim = ", ".join(f"{v:.6f}" for v in rep.limit.coords) if rep.limit else "-"
        print(f"{r}: {rep.status} limit=({lim}) on_cone={R.on_cone}")
        if rep.status == "not_escaping":
            code = max(code, EXIT_EMPTY)
        elif rep.status == "divergent" or R.on_cone is False:
            code = max(code, EXIT_MISMATCH)
    artifacts.write_json(
        out / "verdict.json",
        {"config": asdict(_config(args, "markov-boundary", [])), "family": [str(w) for w in family], "rays": verdicts},
    )
    return code


def _config(args, command: str, inputs: list[str], **kw) -> RunConfig:
    return RunConfig(command=command, inputs=inputs, seed=getattr(args, "seed", 0), out_dir=str(_out_dir(args)), **kw)


# --- entry point -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tropamoeba", description="Tropical and dequantized amoeba experiments.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="output directory (default: $TROPAMOEBA_OUT or ./tropamoeba_out)")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("trop-eval", help="evaluate a tropical polynomial at points")
    p.add_argument("--poly", required=True)
    p.add_argument("--points", required=True, help="one point per line, comma or space separated")
    p.add_argument("--orthant", help="also compare the sign-split sides, e.g. +++")
    common(p)
    p.set_defaults(func=cmd_trop_eval)

    p = sub.add_parser("amoeba", help="sample the Archimedean amoeba")
    p.add_argument("--poly", required=True)
    p.add_argument("--grid", type=_parse_grid, default=(200, 64))
    p.add_argument("--log-radius", type=_parse_floats, default=[-5.0, 5.0])
    p.add_argument("--svg", action="store_true")
    p.add_argument("--overlay", action="store_true", help="draw the tropical limit cells on the SVG")
    p.add_argument("--box", type=_parse_floats, help="plot window lo1,hi1,lo2,hi2")
    common(p)
    p.set_defaults(func=cmd_amoeba)

    p = sub.add_parser("deform", help="dequantizing deformation of a real orthant piece")
    p.add_argument("--poly", required=True)
    p.add_argument("--orthant", default=None, help="sign vector such as +- (default all +)")
    p.add_argument("--h", type=_parse_floats, default=[1.0, 0.5, 0.1, 0.01])
    p.add_argument("--box", type=_parse_floats, default=[-4.0, 1.0, -4.0, 1.0])
    p.add_argument("--samples", type=int, default=4001)
    common(p)
    p.set_defaults(func=cmd_deform)

    p = sub.add_parser("newton", help="Newton polygon vs tropical roots over Puiseux series")
    p.add_argument("--poly", help="file containing e.g. Y^2 - t*Y + t^3")
    p.add_argument("--expr", help="polynomial given inline")
    p.add_argument("--var", default="Y")
    p.add_argument("--param", default="t")
    common(p)
    p.set_defaults(func=cmd_newton)

    p = sub.add_parser("markov-boundary", help="boundary rays of the Markov Teichmueller component")
    p.add_argument("--ray", default="diag,y3", help=f"comma list of presets: {', '.join(sorted(RAY_PRESETS))}")
    p.add_argument("--words", default="A,B,AB", help="trace family, e.g. A,B,AB,Ab")
    p.add_argument("--steps", type=int, default=40)
    p.add_argument("--wmin", type=float, default=10.0)
    p.add_argument("--wmax", type=float, default=1e6)
    p.add_argument("--tol", type=float, default=1e-3)
    common(p)
    p.set_defaults(func=cmd_markov_boundary)
    return ap


_LIST_FLAGS = ("--log-radius", "--box", "--h")


def _glue_negative_lists(argv: list[str]) -> list[str]:
    # argparse reads "-5,5" as an option; rewrite "--box -4,1,..." as "--box=-4,1,..."
    out: list[str] = []
    i = 0
    while i < len(argv):
        a = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else ""
        if a in _LIST_FLAGS and len(nxt) > 1 and nxt[0] == "-" and (nxt[1].isdigit() or nxt[1] == "."):
            out.append(f"{a}={nxt}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def main(argv=None) -> int:
    ap = build_parser()
    argv = _glue_negative_lists(list(sys.argv[1:] if argv is None else argv))
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_INPUT
    if getattr(args, "log_radius", None) is not None and len(args.log_radius) != 2:
        print("error: --log-radius takes lo,hi", file=sys.stderr)
        return EXIT_INPUT
    if getattr(args, "box", None) is not None and len(args.box) != 4:
        print("error: --box takes lo1,hi1,lo2,hi2", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
