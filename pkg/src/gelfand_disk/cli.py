"""Batch command line: tables and plots for every capability of the library.

Subcommands: radial, nu1, morse, degeneracy, branch, pohozaev, plane,
sweep.  Ranges are written ``a:b:count`` (``a:b`` takes a default count;
a bare number is a single value).  Output is CSV (17 significant digits,
one full parameter tuple per row) or JSON; ``--plot`` writes an SVG.
Exit codes: 0 success, 2 config error, 3 numerical failure, 4 invariant
violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, bifurcation, conservation, model, morse, plane, spectral
from .conservation import MassBoundError
from .mesh import build_mesh
from .model import Branch, DomainError
from .spectral import EigensolverError, MorseIndexError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_ASSERTION = 4


class ConfigError(ValueError):
    pass


def parse_range(text: str, integer: bool = False, default_count: int = 25) -> list:
    """Parse ``a`` | ``a:b`` | ``a:b:count`` into a list of values.

    ``a:b`` yields consecutive integers for integer ranges and
    ``default_count`` equispaced values otherwise.
    """
    parts = text.split(":")
    try:
        if len(parts) == 1:
            vals = [float(parts[0])]
        elif len(parts) == 2:
            a, b = float(parts[0]), float(parts[1])
            if integer:
                vals = list(np.arange(round(a), round(b) + 1, dtype=float))
            else:
                vals = list(np.linspace(a, b, default_count))
        elif len(parts) == 3:
            vals = list(np.linspace(float(parts[0]), float(parts[1]), int(parts[2])))
        else:
            raise ValueError(text)
    except ValueError as exc:
        raise ConfigError(f"bad range {text!r} (use a, a:b or a:b:count)") from exc
    if integer:
        return [int(round(v)) for v in vals]
    return [float(v) for v in vals]


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def write_rows(columns: list[str], rows: list[dict], args,
               diagnostics: dict | None = None) -> dict:
    """Emit rows as CSV or JSON to --out (or stdout); returns the payload."""
    payload = {"config": {k: v for k, v in vars(args).items() if k != "func"},
               "results": rows,
               "diagnostics": {"n_rows": len(rows), **(diagnostics or {})},
               "version": __version__}
    if args.format == "json":
        text = json.dumps(payload, indent=2, default=_fmt) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(row[c]) for c in columns])
        text = buf.getvalue()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return payload


def emit_plot(series: list[tuple], style: dict, path: str) -> None:
    """Write labelled line series to a standalone SVG file.

    ``series`` entries are (x, y, label); an empty list is an error.
    """
    if not series:
        raise ConfigError("cannot plot an empty series")
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=style.get("figsize", (6.0, 4.2)))
    for x, y, label in series:
        ax.plot(x, y, label=label, lw=1.4)
    ax.set_xlabel(style.get("xlabel", ""))
    ax.set_ylabel(style.get("ylabel", ""))
    if style.get("title"):
        ax.set_title(style["title"])
    if len(series) > 1 or style.get("legend"):
        ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


# ------------------------------------------------------------------ commands

def _lambda_values(args, integer=False) -> list[float]:
    if getattr(args, "lambda_grid", None):
        return parse_range(args.lambda_grid)
    if args.lam is not None:
        return parse_range(args.lam)
    if args.mu is not None and args.alpha is not None:
        alphas = parse_range(args.alpha)
        if len(alphas) != 1:
            raise ConfigError("--mu with an alpha range is ambiguous")
        return [model.lambda_of_mu(m, alphas[0]) for m in parse_range(args.mu)]
    raise ConfigError("need --lambda (or --mu together with --alpha)")


def cmd_radial(args) -> int:
    lams = _lambda_values(args)
    alphas = parse_range(args.alpha) if args.alpha else [2.0]
    n = args.n or 33
    rows = []
    branches = ([Branch.MINIMAL, Branch.BLOWUP] if args.branch == "both"
                else [Branch(args.branch)])
    for lam in lams:
        for alpha in alphas:
            params = model.ProblemParams.from_lambda(lam, alpha)
            for br in branches:
                sol = model.exponential_solution(params, br)
                for r in np.linspace(0.0, 1.0, n):
                    rows.append({"lambda": lam, "alpha": alpha, "mu": params.mu,
                                 "branch": br.value, "delta": sol.delta,
                                 "r": float(r), "u": float(sol.profile(r))})
    write_rows(["lambda", "alpha", "mu", "branch", "delta", "r", "u"], rows, args)
    if args.plot:
        rr = np.linspace(0, 1, 201)
        series = []
        for lam in lams[:1]:
            for alpha in alphas[:1]:
                params = model.ProblemParams.from_lambda(lam, alpha)
                for br in branches:
                    sol = model.exponential_solution(params, br)
                    series.append((rr, sol.profile(rr), f"{br.value} (lambda={lam:g})"))
        emit_plot(series, {"xlabel": "r", "ylabel": "u(r)"}, args.plot)
    return EXIT_OK


def cmd_nu1(args) -> int:
    lams = _lambda_values(args)
    n = args.n or 4096
    mesh = build_mesh(n, "composite")
    rows = []
    for lam in sorted(lams):
        numeric = spectral.nu1(lam, mesh=mesh)
        closed = spectral.nu1_closed_form_exp(lam)
        if numeric is None:
            raise EigensolverError(f"no negative eigenvalue at lambda={lam}")
        rows.append({"lambda": lam, "nu1_numeric": numeric,
                     "nu1_closed": closed, "abs_err": abs(numeric - closed)})
    write_rows(["lambda", "nu1_numeric", "nu1_closed", "abs_err"], rows, args)
    if args.plot:
        xs = [r["lambda"] for r in rows]
        emit_plot([(xs, [r["nu1_numeric"] for r in rows], "nu1 numeric"),
                   (xs, [r["nu1_closed"] for r in rows], "(lambda-2)/2")],
                  {"xlabel": "lambda", "ylabel": "nu1"}, args.plot)
    return EXIT_OK


def cmd_morse(args) -> int:
    lams = _lambda_values(args)
    alphas = parse_range(args.alpha or "2")
    rows = []
    mesh = build_mesh(args.n, "composite") if args.n else None
    for lam in sorted(lams):
        for alpha in alphas:
            row = {"lambda": lam, "alpha": alpha,
                   "mu": model.mu_of_lambda(lam, alpha),
                   "nu1": spectral.nu1_closed_form_exp(lam),
                   "m_formula": morse.morse_index_exp(lam, alpha)}
            if args.direct:
                rep = morse.morse_index_direct(lam, alpha, mesh=mesh)
                row["m_direct"] = rep.m_direct
                row["boundary_flag"] = rep.boundary_flag
            rows.append(row)
    cols = ["lambda", "alpha", "mu", "nu1", "m_formula"]
    if args.direct:
        cols += ["m_direct", "boundary_flag"]
    write_rows(cols, rows, args)
    return EXIT_OK


def cmd_degeneracy(args) -> int:
    ks = parse_range(args.k or "1:4", integer=True)
    alphas = parse_range(args.alpha or "0:12", default_count=49)
    rows = []
    for k in ks:
        for alpha in alphas:
            if alpha <= 0:
                continue
            mu_k = bifurcation.mu_k_exp(alpha, k)
            lam_k = bifurcation.lambda_k_exp(alpha, k)
            if mu_k <= 0:
                continue
            rows.append({"k": k, "alpha": alpha, "lambda_k": lam_k, "mu_k": mu_k,
                         "identity_residual": 2 * mu_k - (2 + alpha) ** 2 + 4 * k * k})
    write_rows(["k", "alpha", "lambda_k", "mu_k", "identity_residual"], rows, args)
    if args.plot:
        series = []
        for k in ks:
            pts = [(r["mu_k"], r["alpha"]) for r in rows if r["k"] == k]
            if pts:
                series.append(([p[0] for p in pts], [p[1] for p in pts],
                               f"gamma_{k}"))
        emit_plot(series, {"xlabel": "mu", "ylabel": "alpha",
                           "title": "degeneracy curves"}, args.plot)
    return EXIT_OK


def cmd_branch(args) -> int:
    alphas = parse_range(args.alpha or "2")
    ks = parse_range(args.k or "1", integer=True)
    if len(alphas) != 1 or len(ks) != 1:
        raise ConfigError("branch takes a single --alpha and a single --k")
    alpha, k = alphas[0], ks[0]
    start = bifurcation.BifurcationPoint.exponential(alpha, k)
    ctl = bifurcation.ContinuationControls(
        mu_stop=args.mu_stop, max_steps=args.steps,
        n_r=args.n or 160, n_modes=args.modes or 8)
    run = bifurcation.continue_branch(start, controls=ctl)
    rows = []
    for s in run.states:
        d = s.diagnostics
        rows.append({"k": k, "alpha": alpha, "step": s.step, "mu": s.mu,
                     "arclength": s.arclength, "max_u": d.max_u,
                     "nonradial_amplitude": d.nonradial_amplitude,
                     "mass": d.mass, "newton_residual": s.newton_residual,
                     "positive": d.positive})
    if not run.states:
        raise EigensolverError("branch continuation produced no states")
    write_rows(["k", "alpha", "step", "mu", "arclength", "max_u",
                "nonradial_amplitude", "mass", "newton_residual", "positive"],
               rows, args, diagnostics={"termination": run.termination,
                                        "folds": run.folds})
    if args.plot:
        mus = [s.mu for s in run.states]
        emit_plot([(mus, [s.diagnostics.max_u for s in run.states], "max u"),
                   (mus, [s.diagnostics.nonradial_amplitude for s in run.states],
                    "nonradial amplitude")],
                  {"xlabel": "mu", "ylabel": "diagnostic",
                   "title": f"branch k={k}, alpha={alpha:g}"}, args.plot)
    return EXIT_OK


def cmd_pohozaev(args) -> int:
    lams = _lambda_values(args)
    alphas = parse_range(args.alpha or "1:4:4")
    rows = []
    for lam in lams:
        for alpha in alphas:
            params = model.ProblemParams.from_lambda(lam, alpha)
            for br in (Branch.MINIMAL, Branch.BLOWUP):
                sol = model.exponential_solution(params, br)
                report = conservation.bounds_check(sol.profile, alpha, params.mu)
                rows.append({"lambda": lam, "alpha": alpha, "mu": params.mu,
                             "branch": br.value, "mass": report.mass,
                             "lower": report.lower, "upper": report.upper,
                             "pohozaev_residual": report.pohozaev_residual})
    write_rows(["lambda", "alpha", "mu", "branch", "mass", "lower", "upper",
                "pohozaev_residual"], rows, args)
    return EXIT_OK


def cmd_plane(args) -> int:
    alphas = parse_range(args.alpha or "0:6", default_count=7)
    rows = []
    for alpha in alphas:
        kb = plane.kernel_basis(alpha)
        negs = plane.plane_negative_modes(alpha)
        count = sum(1 if m == 0 else 2 for m, _ in negs)
        rows.append({"alpha": alpha, "kernel_dimension": kb.dimension,
                     "kernel_modes": " ".join(str(el.mode) for el in kb.basis),
                     "morse_index": morse.plane_morse(alpha),
                     "negative_mode_count": count,
                     "total_mass": plane.plane_mass(alpha)})
    write_rows(["alpha", "kernel_dimension", "kernel_modes", "morse_index",
                "negative_mode_count", "total_mass"], rows, args)
    return EXIT_OK


def cmd_sweep(args) -> int:
    lams = _lambda_values(args)
    alphas = parse_range(args.alpha or "1:10:10")
    rows = []
    for lam in sorted(lams):
        for alpha in alphas:
            nu = spectral.nu1_closed_form_exp(lam)
            rows.append({"lambda": lam, "alpha": alpha,
                         "mu": model.mu_of_lambda(lam, alpha), "nu1": nu,
                         "m_formula": morse.morse_index_exp(lam, alpha),
                         "j_count": bifurcation.count_j(alpha)})
    write_rows(["lambda", "alpha", "mu", "nu1", "m_formula", "j_count"],
               rows, args)
    return EXIT_OK


# --------------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="gelfand-disk",
        description=__doc__.splitlines()[0] if __doc__ else None)
    p.add_argument("--config", help="JSON file of defaults; explicit flags win")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, mu_stop=False):
        sp.add_argument("--lambda", dest="lam", help="load lambda (range ok)")
        sp.add_argument("--lambda-grid", dest="lambda_grid",
                        help="alias of --lambda for grids")
        sp.add_argument("--mu", help="merged load mu (range ok)")
        sp.add_argument("--alpha", help="weight exponent alpha (range ok)")
        sp.add_argument("--k", help="angular mode(s), integer range")
        sp.add_argument("--n", type=int, help="radial resolution")
        sp.add_argument("--modes", type=int, help="number of angular harmonics")
        sp.add_argument("--out", help="output file (default: stdout)")
        sp.add_argument("--plot", help="write an SVG to this path")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        if mu_stop:
            sp.add_argument("--mu-stop", dest="mu_stop", type=float, default=0.55)
            sp.add_argument("--steps", type=int, default=400)

    sp = sub.add_parser("radial", help="closed-form radial solution profiles")
    sp.add_argument("--branch", choices=("minimal", "blowup", "critical", "both"),
                    default="both")
    common(sp)
    sp.set_defaults(func=cmd_radial)

    sp = sub.add_parser("nu1", help="weighted eigenvalue vs closed form")
    common(sp)
    sp.set_defaults(func=cmd_nu1)

    sp = sub.add_parser("morse", help="Morse index over a parameter grid")
    sp.add_argument("--direct", action="store_true",
                    help="also run the mode-counting cross-check")
    common(sp)
    sp.set_defaults(func=cmd_morse)

    sp = sub.add_parser("degeneracy", help="degeneracy curve samples")
    common(sp)
    sp.set_defaults(func=cmd_degeneracy)

    sp = sub.add_parser("branch", help="continue a nonradial branch")
    common(sp, mu_stop=True)
    sp.set_defaults(func=cmd_branch)

    sp = sub.add_parser("pohozaev", help="mass bounds and identity residuals")
    common(sp)
    sp.set_defaults(func=cmd_pohozaev)

    sp = sub.add_parser("plane", help="entire-plane kernel and Morse index")
    common(sp)
    sp.set_defaults(func=cmd_plane)

    sp = sub.add_parser("sweep", help="nu1 / Morse / j-count over a grid")
    common(sp)
    sp.set_defaults(func=cmd_sweep)
    return p


def _apply_config(args, parser) -> None:
    if not args.config:
        return
    try:
        defaults = json.loads(Path(args.config).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
    range_flags = ("lam", "lambda_grid", "mu", "alpha", "k")
    for key, value in defaults.items():
        attr = {"lambda": "lam"}.get(key, key.replace("-", "_"))
        if not hasattr(args, attr) or getattr(args, attr) not in (None, False):
            continue  # flags win on conflict
        if attr in range_flags and isinstance(value, (int, float)):
            value = str(value)
        setattr(args, attr, value)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args, parser)
        return args.func(args)
    except (ConfigError, DomainError, argparse.ArgumentError) as exc:
        print(json.dumps({"error": "config", "message": str(exc)}), file=sys.stderr)
        return EXIT_CONFIG
    except MassBoundError as exc:
        print(json.dumps({"error": "assertion", "message": str(exc),
                          "margin": exc.margin}), file=sys.stderr)
        return EXIT_ASSERTION
    except (EigensolverError, MorseIndexError, model.ShootingError) as exc:
        print(json.dumps({"error": "numerical", "message": str(exc)}), file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
