"""Command-line front end.

Subcommands:

* ``forward`` / ``inverse``: transform a QSIG file.
* ``gabor analyze|synthesize|spectrogram``: windowed analysis to a slice
  directory, reconstruction from it, and squared-modulus exports.
* ``verify <suite>``: run the seeded verification families for one named
  inequality suite (or ``all``) and write JSON + CSV reports.

Exit codes: 0 success, 1 verification invariant violation, 2 I/O or
parse errors, 3 numeric contract violations (non-finite output).
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import families, gabor, report, signal, uncertainty
from .lct1d import LCTParams
from .qlct2d import QLCTParams, qlct_forward_direct, qlct_forward_fast, \
    qlct_inverse, qlct_plancherel_check
from .signal import FormatError, Grid2D, WindowSpec, parse_window_spec

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_IO = 2
EXIT_NUMERIC = 3

VERIFY_NAMES = ["plancherel", "gabor-plancherel", "heisenberg", "log",
                "lemma-log", "lieb", "young", "hausdorff-young",
                "concentration", "eps-concentration", "moment-concentration"]


@dataclass
class VerifyConfig:
    n1: int = 32
    n2: int = 32
    dx: float | None = None
    seed: int = 0
    trials: int | None = None
    method: str = "fast"

    def grid(self, n: int | None = None) -> Grid2D:
        if n is not None:
            return families.default_grid(n)
        dx = self.dx if self.dx is not None else float(np.sqrt(2 * np.pi / self.n1))
        return Grid2D.centered(self.n1, self.n2, dx, dx)


def _parse_matrix(text: str, name: str) -> LCTParams:
    parts = text.split(",")
    if len(parts) != 4:
        raise FormatError(f"{name} needs 4 comma-separated entries, got {text!r}")
    try:
        a, b, c, d = (float(v) for v in parts)
    except ValueError:
        raise FormatError(f"{name} has a non-numeric entry in {text!r}") from None
    det = a * d - b * c
    if abs(det - 1.0) > 1e-9:
        raise FormatError(f"det({name}) != 1 (got {det!r}) for {text!r}")
    return LCTParams(a, b, c, d)


def _parse_params(args) -> QLCTParams:
    return QLCTParams(_parse_matrix(args.a1, "A1"), _parse_matrix(args.a2, "A2"))


def _parse_grid(text: str) -> tuple[int, int]:
    try:
        n1, _, n2 = text.lower().partition("x")
        return int(n1), int(n2 or n1)
    except ValueError:
        raise FormatError(f"bad grid spec {text!r}, expected e.g. 32x32") from None


class NumericError(RuntimeError):
    """Numeric contract violation: non-finite values produced."""


def _finite_or_die(sig: signal.QSignal2D, stage: str) -> None:
    if not np.isfinite(sig.samples).all():
        raise NumericError(f"non-finite output at stage {stage!r}")


# ---------------------------------------------------------------------------
# transform commands

def cmd_qlct(args) -> int:
    p = _parse_params(args)
    f = signal.load(args.input)
    if args.command == "forward":
        out = (qlct_forward_fast if args.method == "fast"
               else qlct_forward_direct)(f, p)
    else:
        out = qlct_inverse(f, p, method=args.method)
    _finite_or_die(out, args.command)
    signal.save(args.output, out)
    if args.check:
        rep = qlct_plancherel_check(f if args.command == "forward" else out, p,
                                    method=args.method)
        print(f"plancherel ratio {rep.ratio!r}")
    return EXIT_OK


def cmd_gabor_analyze(args) -> int:
    p = _parse_params(args)
    f = signal.load(args.input)
    if args.stride == 1 and f.grid.n1 * f.grid.n2 > 32 * 32 and not args.force:
        print(f"error: stride-1 analysis of a {f.grid.n1}x{f.grid.n2} signal "
              f"stores {f.grid.n1 * f.grid.n2}^2 quaternions; pass --force or "
              "use --stride > 1", file=sys.stderr)
        return EXIT_IO
    spec = parse_window_spec(args.window)
    phi = signal.make_window(spec, f.grid)
    G = gabor.gabor_analyze(f, phi, p, args.stride, args.method)
    manifest = gabor.save_coefficients(G, args.output)
    signal.save(os.path.join(args.output, "window.qsig"), phi)
    print(f"wrote {G.y_grid.n1 * G.y_grid.n2} slices to {manifest}")
    return EXIT_OK


def cmd_gabor_synthesize(args) -> int:
    G = gabor.load_coefficients(args.input)
    phi = signal.load(os.path.join(args.input, "window.qsig"))
    out = gabor.gabor_synthesize(G, phi)
    _finite_or_die(out, "synthesize")
    signal.save(args.output, out)
    return EXIT_OK


def cmd_gabor_spectrogram(args) -> int:
    G = gabor.load_coefficients(args.input)
    kind, _, idx = args.slice.partition("=")
    index = None
    if kind in ("fix_y", "fix_omega"):
        try:
            i1, i2 = (int(v) for v in idx.split(","))
        except ValueError:
            raise FormatError(f"slice {args.slice!r} needs =I,J indices") from None
        index = (i1, i2)
    field = gabor.spectrogram(G, kind, index)
    gabor.export_pgm(field, args.output)
    gabor.export_field_csv(field, str(args.output) + ".csv")
    print(f"wrote {args.output} ({field.shape[0]}x{field.shape[1]}), "
          f"sidecar and CSV alongside")
    return EXIT_OK


# ---------------------------------------------------------------------------
# verification suites

def _tag(rep: report.InequalityReport, trial: int | None = None, **extra):
    if trial is not None:
        rep.params["trial"] = trial
    rep.params.update(extra)
    return rep


def suite_plancherel(cfg: VerifyConfig):
    reports, failures = [], []
    rng = np.random.default_rng(cfg.seed)
    grid64 = Grid2D.centered(64, 64, 0.25, 0.25)
    f64 = families.gaussian(grid64, 1.0)
    for name, p in families.PARAM_SETS.items():
        rep = _tag(qlct_plancherel_check(f64, p, cfg.method), family=f"gaussian-{name}")
        rep.seed = cfg.seed
        reports.append(rep)
        if not 0.999 <= rep.ratio <= 1.001:
            failures.append(f"plancherel gaussian {name}: ratio {rep.ratio!r}")
    grid = cfg.grid()
    trials = cfg.trials if cfg.trials is not None else 20
    for k in range(trials):
        f = families.random_smooth(grid, rng)
        for name in ("fourier", "generic"):
            rep = _tag(qlct_plancherel_check(f, families.PARAM_SETS[name], cfg.method),
                       trial=k, family=f"random-smooth-{name}")
            rep.seed = cfg.seed
            reports.append(rep)
            if not 0.99 <= rep.ratio <= 1.01:
                failures.append(f"plancherel random trial {k} {name}: ratio {rep.ratio!r}")
    return reports, failures


def suite_gabor_plancherel(cfg: VerifyConfig):
    reports, failures = [], []
    grid = cfg.grid(32)
    f = families.gaussian(grid, 1.0)
    phi = signal.make_window(WindowSpec("gaussian", (1.0, 1.0)), grid)
    p = families.PARAM_SETS["fourier"]
    rep = _tag(gabor.gabor_plancherel_check(f, phi, p, cfg.method), family="gaussian")
    rep.seed = cfg.seed
    reports.append(rep)
    if not 0.98 <= rep.ratio <= 1.02:
        failures.append(f"gabor-plancherel gaussian: ratio {rep.ratio!r}")
    # single-cell window: the discrete substitution is near-exact
    cell = np.zeros((grid.n1, grid.n2, 4))
    cell[grid.n1 // 2, grid.n2 // 2, 0] = 1.0
    tiny = signal.QSignal2D(grid, cell)
    rep = _tag(gabor.gabor_plancherel_check(f, tiny, p, cfg.method), family="single-cell")
    rep.seed = cfg.seed
    reports.append(rep)
    if not 0.95 <= rep.ratio <= 1.05:
        failures.append(f"gabor-plancherel single-cell: ratio {rep.ratio!r}")
    return reports, failures


def suite_heisenberg(cfg: VerifyConfig):
    reports, failures = [], []
    rng = np.random.default_rng(cfg.seed)
    trials = cfg.trials if cfg.trials is not None else 50
    worst = 0.0
    for _ in range(trials):
        A = float(rng.uniform(0.1, 10.0))
        B = float(rng.uniform(0.1, 10.0))
        s = float(rng.uniform(0.25, 3.0))
        _, _, rel = uncertainty.amgm_dilation_identity(A, B, s)
        worst = max(worst, rel)
    rep = report.upper_bound("heisenberg-amgm", worst, 1e-10,
                             params={"trials": trials}, seed=cfg.seed)
    reports.append(rep)
    if worst > 1e-10:
        failures.append(f"heisenberg AM-GM identity worst residual {worst!r}")
    p = families.PARAM_SETS["fourier"]
    consts = {}
    for n in (32, 64):
        grid = cfg.grid(n)
        f = families.normalized(families.gaussian(grid, 1.0))
        rep = _tag(uncertainty.heisenberg_check(f, f, p, 1.0, cfg.method),
                   family=f"gaussian-{n}")
        rep.seed = cfg.seed
        reports.append(rep)
        consts[n] = rep.empirical_constant
        if not rep.empirical_constant > 0:
            failures.append(f"heisenberg C at {n}: not positive")
    if abs(consts[32] / consts[64] - 1.0) > 0.05:
        failures.append(f"heisenberg C grid stability: {consts[32]!r} vs {consts[64]!r}")
    grid = cfg.grid()
    dil = {}
    for t in (0.5, 1.0, 2.0):
        f = families.normalized(families.dilated_gaussian(grid, t))
        rep = _tag(uncertainty.heisenberg_check(f, f, p, 1.0, cfg.method),
                   family=f"dilated-{t}")
        rep.seed = cfg.seed
        reports.append(rep)
        dil[t] = rep.empirical_constant
    mean = sum(dil.values()) / len(dil)
    if any(abs(v / mean - 1.0) > 0.02 for v in dil.values()):
        failures.append(f"heisenberg C dilation stability: {dil!r}")
    return reports, failures


def suite_log(cfg: VerifyConfig):
    reports, failures = [], []
    grid = cfg.grid(32)
    p = families.PARAM_SETS["fourier"]
    phi = families.normalized(families.gaussian(grid, 1.0))
    cases = [("gaussian", families.normalized(families.gaussian(grid, 1.0)))]
    cases += [(f"dilated-{t}", families.normalized(families.dilated_gaussian(grid, t)))
              for t in (0.5, 2.0)]
    for name, f in cases:
        rep = _tag(uncertainty.log_check(f, phi, p, cfg.method), family=name)
        rep.seed = cfg.seed
        reports.append(rep)
        if rep.margin < -1e-3:
            failures.append(f"log {name}: margin {rep.margin!r}")
    return reports, failures


def suite_lemma_log(cfg: VerifyConfig):
    reports, failures = [], []
    grid = cfg.grid(32)
    p = families.PARAM_SETS["fourier"]
    f = families.gaussian(grid, 1.0)
    phi = signal.make_window(WindowSpec("gaussian", (1.0, 1.0)), grid)
    rep = _tag(uncertainty.lemma_log_identity_check(f, phi, p), family="gaussian")
    rep.seed = cfg.seed
    reports.append(rep)
    if rep.params["rel_gap"] > 2e-2:
        failures.append(f"lemma-log gaussian: rel gap {rep.params['rel_gap']!r}")
    cell = np.zeros((grid.n1, grid.n2, 4))
    cell[grid.n1 // 2, grid.n2 // 2, 0] = 1.0
    rep = _tag(uncertainty.lemma_log_identity_check(
        f, signal.QSignal2D(grid, cell), p), family="single-cell")
    rep.seed = cfg.seed
    reports.append(rep)
    if rep.params["rel_gap"] > 1e-12:
        failures.append(f"lemma-log single cell: rel gap {rep.params['rel_gap']!r}")
    return reports, failures


def suite_lieb(cfg: VerifyConfig):
    reports, failures = [], []
    p = families.PARAM_SETS["fourier"]
    grid = cfg.grid(32)
    f = families.gaussian(grid, 1.0)
    phi = families.gaussian(grid, 1.0)
    base = _tag(uncertainty.lieb_check(f, phi, p, 1.5, cfg.method), family="gaussian")
    base.seed = cfg.seed
    reports.append(base)
    scaled = uncertainty.lieb_check(f.scaled(2.0), phi.scaled(3.0), p, 1.5, cfg.method)
    rel = abs(scaled.empirical_constant / base.empirical_constant - 1.0)
    rep = report.upper_bound("lieb-homogeneity", rel, 1e-10,
                             params={"p_prime": 1.5}, seed=cfg.seed)
    reports.append(rep)
    if rel > 1e-10:
        failures.append(f"lieb homogeneity: relative change {rel!r}")
    consts = {}
    for n in (32, 64):
        g = cfg.grid(n)
        fg = families.gaussian(g, 1.0)
        rep = _tag(uncertainty.lieb_check(fg, fg, p, 1.5, cfg.method),
                   family=f"gaussian-{n}")
        rep.seed = cfg.seed
        reports.append(rep)
        consts[n] = rep.empirical_constant
    if abs(consts[32] / consts[64] - 1.0) > 0.05:
        failures.append(f"lieb stability: {consts!r}")
    rep2 = _tag(uncertainty.lieb_check(f, phi, p, 2.0, cfg.method), family="pprime-2")
    rep2.seed = cfg.seed
    reports.append(rep2)
    plancherel_rhs = f.l2_norm_sq() * phi.l2_norm_sq()
    if abs(rep2.lhs - plancherel_rhs) > 1e-9 * plancherel_rhs:
        failures.append(f"lieb p'=2 does not reproduce Plancherel: "
                        f"{rep2.lhs!r} vs {plancherel_rhs!r}")
    if not rep2.notes:
        failures.append("lieb p'=2 report does not flag the printed constant")
    return reports, failures


def suite_young(cfg: VerifyConfig):
    reports, failures = [], []
    rng = np.random.default_rng(cfg.seed)
    trials = cfg.trials if cfg.trials is not None else 100
    grid = cfg.grid(16)
    phi = signal.make_window(WindowSpec("gaussian", (1.0, 1.0)), grid)
    p = families.PARAM_SETS["fourier"]
    for k in range(trials):
        f = families.random_smooth(grid, rng)
        for hp in (2.0, 4.0):
            rep = _tag(uncertainty.young_sup_check(f, phi, p, hp, cfg.method),
                       trial=k)
            rep.seed = cfg.seed
            reports.append(rep)
            if rep.margin < -1e-6:
                failures.append(f"young trial {k} p={hp}: margin {rep.margin!r}")
    return reports, failures


def suite_hausdorff_young(cfg: VerifyConfig):
    reports, failures = [], []
    grid = cfg.grid(32)
    p = families.PARAM_SETS["fourier"]
    f = families.gaussian_chirp(grid)
    base_ratio = None
    for pp in (2.0, 3.0, 4.0):
        rep = _tag(uncertainty.hausdorff_young_check(f, p, pp, cfg.method),
                   family="gaussian-chirp")
        rep.seed = cfg.seed
        reports.append(rep)
        if pp == 2.0:
            base_ratio = rep.ratio
    scaled = uncertainty.hausdorff_young_check(f.scaled(2.5), p, 2.0, cfg.method)
    rel = abs(scaled.ratio / base_ratio - 1.0)
    rep = report.upper_bound("hausdorff-young-scaling", rel, 1e-10, seed=cfg.seed)
    reports.append(rep)
    if rel > 1e-10:
        failures.append(f"hausdorff-young scaling invariance: {rel!r}")
    return reports, failures


def suite_concentration(cfg: VerifyConfig):
    reports, failures = [], []
    rng = np.random.default_rng(cfg.seed)
    grid = cfg.grid(32)
    p = families.PARAM_SETS["fourier"]
    f = families.normalized(families.gaussian(grid, 1.0))
    G = gabor.gabor_analyze(f, f, p, 1, cfg.method)
    for m in (0.25, 0.5, 0.9):
        mask = uncertainty.random_mask(G, m, rng)
        rep = _tag(uncertainty.concentration_check(G, mask, f.l2_norm(), f.l2_norm()),
                   family=f"random-mask-{m}")
        rep.seed = cfg.seed
        reports.append(rep)
        if rep.margin < -1e-6:
            failures.append(f"concentration measure {m}: margin {rep.margin!r}")
    return reports, failures


def suite_eps_concentration(cfg: VerifyConfig):
    reports, failures = [], []
    grid = cfg.grid(32)
    p = families.PARAM_SETS["fourier"]
    f = families.normalized(families.gaussian(grid, 1.0))
    G = gabor.gabor_analyze(f, f, p, 1, cfg.method)
    measures = {}
    for eps in (0.5, 0.1):
        mask = uncertainty.greedy_minimal_mask(G, 1.0 - eps)
        rep = _tag(uncertainty.epsilon_concentration_check(G, mask, eps),
                   family=f"greedy-{eps}")
        rep.seed = cfg.seed
        reports.append(rep)
        measures[eps] = mask.measure
        if rep.margin < 0:
            failures.append(f"eps-concentration eps={eps}: margin {rep.margin!r}")
    if measures[0.1] < measures[0.5]:
        failures.append(f"greedy mask measure not monotone: {measures!r}")
    return reports, failures


def suite_moment_concentration(cfg: VerifyConfig):
    reports, failures = [], []
    p = families.PARAM_SETS["fourier"]
    consts = {}
    for n in (32, 64):
        grid = cfg.grid(n)
        f = families.normalized(families.gaussian(grid, 1.0))
        rep = _tag(uncertainty.moment_concentration_check(f, f, p, 1.0, cfg.method),
                   family=f"gaussian-{n}")
        rep.seed = cfg.seed
        reports.append(rep)
        consts[n] = rep.empirical_constant
        if not rep.empirical_constant > 0:
            failures.append(f"moment-concentration C at {n} not positive")
    if abs(consts[32] / consts[64] - 1.0) > 0.05:
        failures.append(f"moment-concentration stability: {consts!r}")
    grid = cfg.grid()
    for t in (0.5, 1.0, 2.0):
        f = families.normalized(families.dilated_gaussian(grid, t))
        rep = _tag(uncertainty.moment_concentration_check(f, f, p, 1.0, cfg.method),
                   family=f"dilated-{t}")
        rep.seed = cfg.seed
        reports.append(rep)
        if not rep.empirical_constant > 0:
            failures.append(f"moment-concentration C at t={t} not positive")
    return reports, failures


SUITES = {
    "plancherel": suite_plancherel,
    "gabor-plancherel": suite_gabor_plancherel,
    "heisenberg": suite_heisenberg,
    "log": suite_log,
    "lemma-log": suite_lemma_log,
    "lieb": suite_lieb,
    "young": suite_young,
    "hausdorff-young": suite_hausdorff_young,
    "concentration": suite_concentration,
    "eps-concentration": suite_eps_concentration,
    "moment-concentration": suite_moment_concentration,
}


def cmd_verify(args) -> int:
    cfg = VerifyConfig(seed=args.seed, trials=args.trials, method=args.method)
    if args.grid:
        cfg.n1, cfg.n2 = _parse_grid(args.grid)
    if args.dx:
        cfg.dx = args.dx
    names = VERIFY_NAMES if args.suite == "all" else [args.suite]
    all_reports: list[report.InequalityReport] = []
    all_failures: list[str] = []
    for name in names:
        reports, failures = SUITES[name](cfg)
        for rep in reports:
            extra = ("" if rep.empirical_constant is None
                     else f" C={rep.empirical_constant!r}")
            print(f"report {rep.name}: lhs={rep.lhs!r} rhs={rep.rhs!r} "
                  f"margin={rep.margin!r} ratio={rep.ratio!r}{extra}")
        print(f"suite {name}: {'FAIL' if failures else 'pass'} "
              f"({len(reports)} reports)")
        all_reports.extend(reports)
        all_failures.extend(failures)
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(report.reports_to_json(all_reports))
        csv_path = os.path.splitext(args.report)[0] + ".csv"
        with open(csv_path, "w") as fh:
            fh.write(report.reports_to_csv(all_reports))
        print(f"wrote {len(all_reports)} reports to {args.report} and {csv_path}")
    if all_failures:
        for f in all_failures:
            print(f"FAIL {f}", file=sys.stderr)
        return EXIT_VERIFY_FAIL
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qlct",
        description="Two-sided quaternion linear canonical transform toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_matrices(sp):
        sp.add_argument("--a1", default="0,1,-1,0",
                        help="axis-1 matrix a,b,c,d (default Fourier)")
        sp.add_argument("--a2", default="0,1,-1,0",
                        help="axis-2 matrix a,b,c,d (default Fourier)")
        sp.add_argument("--method", choices=["fast", "direct"], default="fast")

    for name in ("forward", "inverse"):
        sp = sub.add_parser(name, help=f"{name} transform of a QSIG file")
        add_matrices(sp)
        sp.add_argument("-i", "--input", required=True)
        sp.add_argument("-o", "--output", required=True)
        sp.add_argument("--check", action="store_true",
                        help="print the Plancherel ratio")
        sp.set_defaults(func=cmd_qlct)

    gp = sub.add_parser("gabor", help="windowed analysis and synthesis")
    gsub = gp.add_subparsers(dest="gabor_command", required=True)
    sp = gsub.add_parser("analyze")
    add_matrices(sp)
    sp.add_argument("-i", "--input", required=True)
    sp.add_argument("-o", "--output", required=True, help="output directory")
    sp.add_argument("--window", default="gaussian:sigma=1.0,1.0",
                    help="window spec, e.g. gaussian:sigma=1.0,1.0")
    sp.add_argument("--stride", type=int, default=1)
    sp.add_argument("--force", action="store_true",
                    help="allow stride-1 analysis above 32x32")
    sp.set_defaults(func=cmd_gabor_analyze)
    sp = gsub.add_parser("synthesize")
    sp.add_argument("-i", "--input", required=True, help="coefficient directory")
    sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(func=cmd_gabor_synthesize)
    sp = gsub.add_parser("spectrogram")
    sp.add_argument("-i", "--input", required=True, help="coefficient directory")
    sp.add_argument("-o", "--output", required=True, help="PGM output path")
    sp.add_argument("--slice", default="max_over_y",
                    help="max_over_y | max_over_omega | fix_y=I,J | fix_omega=I,J")
    sp.set_defaults(func=cmd_gabor_spectrogram)

    sp = sub.add_parser("verify", help="run a verification suite")
    sp.add_argument("suite", choices=VERIFY_NAMES + ["all"])
    sp.add_argument("--grid", default=None, help="e.g. 32x32")
    sp.add_argument("--dx", type=float, default=None)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--trials", type=int, default=None)
    sp.add_argument("--method", choices=["fast", "direct"], default="fast")
    sp.add_argument("--report", default=None, help="JSON report path")
    sp.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "input", None) and getattr(args, "output", None):
        if os.path.abspath(args.input) == os.path.abspath(args.output):
            print("error: input and output paths must differ", file=sys.stderr)
            return EXIT_IO
    try:
        return args.func(args)
    except NumericError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (FormatError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
