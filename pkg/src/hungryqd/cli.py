"""Batch entry point: ``hungryqd verify | eigen | dump``.

Exit codes: 0 all pass, 1 identity failure (or eigen tolerance missed),
2 degenerate input or moment budget exceeded, 64 malformed configuration.
"""

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import List, Optional

from hungryqd.errors import BudgetExceeded, InvalidMeasure, LatticeBreakdown, LaxConstructionError, OutOfDomain
from hungryqd.exact.scalar import EXACT, FLOAT, format_scalar, parse_scalar
from hungryqd.measures import (DiscreteMeasure, EllipticMeasure, GramMatrix, MomentSequence, moments_from_measure,
                               parse_measure_spec, random_measure, random_point_measure)
from hungryqd.report import ResidualReport, SuiteReport

EXIT_OK, EXIT_FAIL, EXIT_DEGENERATE, EXIT_USAGE = 0, 1, 2, 64
WORKERS_ENV = "HUNGRYQD_WORKERS"

QD_SUITES = ("biorth", "recurrence", "linear", "dhlv", "dhqd", "evolution", "telescoping", "lax", "wave",
             "toda", "rhombus")
ELLIPTIC_SUITES = ("relations", "hhadt", "xy-telescoping", "hqqd", "reductions", "elliptic-wave", "elliptic-lax")
M1_ONLY = ("toda", "rhombus")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    command: str
    suites: List[str] = field(default_factory=lambda: ["all"])
    m: List[int] = field(default_factory=lambda: [1])
    n: Optional[int] = None
    l: Optional[int] = None
    seed: int = 0
    measure: Optional[dict] = None
    mode: str = EXACT
    tol: Optional[float] = None
    out: Optional[str] = None
    variable: str = "vt"
    elliptic: bool = False

    def to_json(self) -> dict:
        out = asdict(self)
        out.pop("out")
        return out


# ------------------------------------------------------------------ config

def _split(values) -> list:
    out = []
    for v in values or []:
        out.extend(x for x in str(v).split(",") if x)
    return out


def _suite_ids() -> set:
    from hungryqd.elliptic.relations import RELATION_IDS
    return set(QD_SUITES) | set(ELLIPTIC_SUITES) | set(RELATION_IDS) | {"all", "qd", "elliptic"}


def validate(cfg: RunConfig) -> RunConfig:
    if cfg.command not in ("verify", "eigen", "dump"):
        raise UsageError(f"unknown command {cfg.command!r}")
    if not cfg.m:
        raise UsageError("at least one m is required")
    try:
        cfg.m = sorted({int(x) for x in cfg.m})
    except (TypeError, ValueError) as exc:
        raise UsageError(f"m must be integers: {exc}") from None
    if any(x < 1 for x in cfg.m):
        raise UsageError("hunger parameter m must be >= 1")
    for name in ("n", "l"):
        v = getattr(cfg, name)
        if v is not None and (not isinstance(v, int) or v < 1):
            raise UsageError(f"window bound {name} must be a positive integer")
    if cfg.mode not in (EXACT, FLOAT):
        raise UsageError("mode must be 'exact' or 'float'")
    if cfg.tol is not None and (not isinstance(cfg.tol, (int, float)) or cfg.tol < 0):
        raise UsageError("tolerance must be a non-negative number")
    if cfg.mode == EXACT:
        cfg.tol = None
    if cfg.command == "verify":
        known = _suite_ids()
        bad = [s for s in cfg.suites if s not in known]
        if bad or not cfg.suites:
            raise UsageError(f"unknown suite(s) {bad}; choose from {sorted(known)}")
        if cfg.mode == FLOAT:
            raise UsageError("verification suites run in exact mode only")
    if cfg.variable not in ("vt", "v"):
        raise UsageError("variable must be 'vt' or 'v'")
    if cfg.measure is not None and not isinstance(cfg.measure, dict):
        raise UsageError("measure must be a JSON object")
    return cfg


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hungryqd", description="Exact verification of hungry QD lattices and their elliptic analogues.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    for name, help_ in (("verify", "run identity suites"), ("eigen", "node convergence traces"),
                        ("dump", "write a lattice window as JSON")):
        s = sub.add_parser(name, help=help_)
        s.add_argument("--config", help="JSON file with RunConfig fields; flags override it")
        s.add_argument("--suite", nargs="+", help="suite ids, comma or space separated, or 'all'")
        s.add_argument("--m", nargs="+", help="hunger parameters, e.g. --m 1 2 3 or --m 1,2")
        s.add_argument("--n", type=int, help="n_max / k_max (dump: number of rows)")
        s.add_argument("--l", type=int, help="l_max (dump: number of columns)")
        s.add_argument("--seed", type=int)
        s.add_argument("--measure", help="inline JSON measure spec")
        s.add_argument("--mode", choices=(EXACT, FLOAT))
        s.add_argument("--tol", type=float)
        s.add_argument("--out", help="output directory")
        s.add_argument("--variable", choices=("vt", "v"), help="eigen: which variable to trace")
        s.add_argument("--elliptic", action="store_true", default=None, help="dump: elliptic families")
    return p


def config_from_args(argv) -> RunConfig:
    args = build_parser().parse_args(argv)
    if not args.command:
        raise UsageError("a command is required: verify, eigen or dump")
    base = {}
    if args.config:
        try:
            base = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config: {exc}") from None
        if not isinstance(base, dict):
            raise UsageError("config file must hold a JSON object")
        unknown = set(base) - set(RunConfig.__dataclass_fields__) - {"command"}
        if unknown:
            raise UsageError(f"unknown config keys {sorted(unknown)}")
        if "suite" in base:
            raise UsageError("use 'suites' in config files")
    base["command"] = args.command
    if args.suite:
        base["suites"] = _split(args.suite)
    elif isinstance(base.get("suites"), str):
        base["suites"] = _split([base["suites"]])
    if args.m:
        base["m"] = _split(args.m)
    elif isinstance(base.get("m"), int):
        base["m"] = [base["m"]]
    for name in ("n", "l", "seed", "mode", "tol", "out", "variable", "elliptic"):
        v = getattr(args, name)
        if v is not None:
            base[name] = v
    if args.measure is not None:
        try:
            base["measure"] = json.loads(args.measure)
        except json.JSONDecodeError as exc:
            raise UsageError(f"--measure is not valid JSON: {exc}") from None
    try:
        cfg = RunConfig(**base)
    except TypeError as exc:
        raise UsageError(str(exc)) from None
    return validate(cfg)


# ------------------------------------------------------------------ measures

def _moment_sequence(spec: dict, m: int) -> Optional[MomentSequence]:
    if "moments" not in spec:
        return None
    try:
        return MomentSequence([parse_scalar(v) for v in spec["moments"]], m, source=spec)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InvalidMeasure(f"malformed moments: {exc}") from None


def qd_lattice_for(cfg: RunConfig, m: int, size: int, count: int):
    from hungryqd.qd.tau import TauLattice
    if cfg.measure is not None:
        seq = _moment_sequence(cfg.measure, m)
        if seq is not None:
            return TauLattice(seq)
        mu = parse_measure_spec(cfg.measure)
        if not isinstance(mu, DiscreteMeasure):
            raise InvalidMeasure("this suite needs a one-variable measure")
    else:
        mu = random_measure(cfg.seed, size)
    return TauLattice(moments_from_measure(mu, count, m))


def elliptic_lattice_for(cfg: RunConfig, m: int, k_max: int, l_max: int):
    from hungryqd.elliptic.families import EllipticLattice
    if cfg.measure is not None and "points" in cfg.measure:
        mu = parse_measure_spec(cfg.measure)
    elif cfg.measure is not None and cfg.measure.get("elliptic"):
        mu = parse_measure_spec(cfg.measure)
    else:
        mu = random_point_measure(cfg.seed, max(16, 2 * k_max + 4))
    if not isinstance(mu, EllipticMeasure):
        raise InvalidMeasure("elliptic suites need a point measure")
    return EllipticLattice(GramMatrix(mu, elliptic_gram_size(k_max, l_max, m)), m)


def elliptic_gram_size(k_max: int, l_max: int, m: int) -> int:
    """Largest Gram index any elliptic suite touches for k <= k_max, l <= l_max (with shifts)."""
    return l_max + (k_max + 4) * m + k_max + 8


# ------------------------------------------------------------------ verify

def expand_suites(cfg: RunConfig) -> List[tuple]:
    """(suite, m) jobs in a fixed order, plus notes about what was left out."""
    chosen = []
    for s in cfg.suites:
        if s == "all":
            chosen.extend(QD_SUITES + ELLIPTIC_SUITES)
        elif s == "qd":
            chosen.extend(QD_SUITES)
        elif s == "elliptic":
            chosen.extend(ELLIPTIC_SUITES)
        else:
            chosen.append(s)
    seen, ordered = set(), []
    for s in chosen:
        if s not in seen:
            seen.add(s)
            ordered.append(s)
    auto = any(s in ("all", "qd", "elliptic") for s in cfg.suites)
    jobs, notes = [], []
    for s in ordered:
        for m in cfg.m:
            if auto and s in M1_ONLY and m != 1:
                continue
            if auto and s in ("elliptic-lax", "elliptic-wave") and m < 2:
                notes.append(f"{s} skipped at m={m}: the block Lax pairs need m >= 2")
                continue
            jobs.append((s, m))
    return jobs, notes


def run_job(job: tuple, cfg_json: dict) -> List[ResidualReport]:
    """One (suite, m) job.  Pure function of its arguments, so it can run in a worker process."""
    from hungryqd.elliptic import hadt
    from hungryqd.elliptic import lax as elax
    from hungryqd.elliptic.relations import RELATION_IDS, relation_suite
    from hungryqd.qd import lax as qlax
    from hungryqd.qd import polys, schemes

    suite, m = job
    cfg = RunConfig(**cfg_json)
    reports: List[ResidualReport] = []

    if suite in QD_SUITES:
        n = cfg.n if cfg.n is not None else 4
        l = cfg.l if cfg.l is not None else 3 * m + 6
        size = n + 3
        if suite == "evolution":
            size = schemes.evolution_headroom(n, l) + 3
        count = l + 2 * m + (m + 1) * (size + 2) + 4
        lat = qd_lattice_for(cfg, m, size, count)
        if suite == "biorth":
            rep = ResidualReport("biorthogonality", m=m, coords=("k", "n", "l"))
            for ll in range(l + 1):
                rep.merge(polys.biorthogonality_report(lat, n + 1, ll))
            reports.append(rep)
        elif suite == "recurrence":
            rep = ResidualReport("recurrence", m=m, coords=("n", "l", "family"))
            for fam in polys.FAMILIES:
                for nn in range(n + 3):
                    if fam == "Q" and nn < m - 1:
                        continue
                    for ll in range(l + 1):
                        exp = polys.recurrence_coeffs(lat, fam, nn, ll)
                        rep.record((nn, ll, fam), exp.vanishing_violations(), detail="vanishing coefficients")
                        rep.record((nn, ll, fam), exp.reconstruction, detail="reconstruction")
            reports.append(rep)
        elif suite == "linear":
            for which in ("P-pair", "Q-pair"):
                rep = ResidualReport(which, m=m, coords=("n", "l"))
                for nn in range(n + 1):
                    for ll in range(l + 1):
                        if which == "Q-pair" and nn == 0:
                            continue
                        rep.merge(polys.verify_linear_relations(lat, (nn, ll), which))
                reports.append(rep)
        elif suite in schemes.SCHEMES:
            reports.append(schemes.verify_scheme(lat, suite, n, l))
        elif suite == "evolution":
            for s in schemes.SCHEMES:
                reports.append(schemes.verify_evolution(lat, s, n, l))
        elif suite == "telescoping":
            rep = ResidualReport("sum-telescoping", m=m, coords=("n", "l"))
            for nn in range(n + 1):
                for ll in range(l + 1):
                    rep.record((nn, ll), schemes.telescoping_residual(lat, nn, ll))
            reports.append(rep)
        elif suite in ("lax", "wave"):
            for s in schemes.SCHEMES:
                name = f"{s}-lax" if suite == "lax" else f"{s}-wave"
                rep = ResidualReport(name, m=m, coords=("n", "l"))
                for nn in range(min(n, 3) + 1):
                    for ll in range(min(l, 8) + 1):
                        try:
                            if suite == "lax":
                                rep.record((nn, ll), qlax.lax_compatibility_residual(lat, s, nn, ll))
                            else:
                                from fractions import Fraction
                                for x0 in (Fraction(0), Fraction(3, 7), Fraction(-5, 2)):
                                    rep.merge(qlax.wave_vector_check(lat, s, nn, ll, x0))
                        except (LaxConstructionError, OutOfDomain):
                            rep.skip((nn, ll))
                reports.append(rep)
        elif suite == "toda":
            if m != 1:
                raise UsageError("the Toda bilinear identity is the m = 1 case")
            rep = schemes.hirota_check(lat, n, l)
            rep.notes.append("m=1 reduction: discrete Toda bilinear form")
            reports.append(rep)
        elif suite == "rhombus":
            if m != 1:
                raise UsageError("the rhombus rules are the m = 1 case")
            rep = schemes.verify_qd_rhombus(lat, n, l)
            rep.notes.append("m=1 reduction: classical qd rhombus rules")
            reports.append(rep)
        return reports

    k = cfg.n if cfg.n is not None else 6
    l = cfg.l if cfg.l is not None else 10
    lat = elliptic_lattice_for(cfg, m, k, l)
    if suite == "relations" or suite in RELATION_IDS:
        ids = RELATION_IDS if suite == "relations" else (suite,)
        reports.extend(relation_suite(lat, ids, k, 2, l).values())
    elif suite == "hhadt":
        reports.append(hadt.hhadt_suite(lat, k, 2, l))
    elif suite == "xy-telescoping":
        reports.append(hadt.telescoping_suite(lat, k, 2, l))
    elif suite == "hqqd":
        reports.append(hadt.hqqd_suite(lat, k, 2, l))
    elif suite == "reductions":
        rep = ResidualReport("reductions", m=m, coords=("check",))
        rep.record(("hHADT->HADT",), 0 if hadt.hhadt_reduces_to_hadt_symbolically() else 1)
        rep.record(("hQQD->QQD",), 0 if hadt.hqqd_reduces_to_qqd() else 1)
        if m == 1:
            link = ResidualReport("hadt-termwise", m=1, coords=("k", "l"))
            for kk in range(3, k + 1):
                for ll in range(2, l + 1):
                    try:
                        link.record((kk, ll), hadt.hadt_termwise_residuals(lat, kk, ll))
                    except OutOfDomain:
                        link.skip((kk, ll))
            rep.merge(link)
            rep.notes.append("m=1 reductions exercised: hHADT to HADT term by term, hQQD to QQD")
        reports.append(rep)
    elif suite in ("elliptic-wave", "elliptic-lax"):
        from fractions import Fraction
        points = [(Fraction(3, 7), Fraction(-2, 5)), (Fraction(-1, 3), Fraction(5, 2)), (Fraction(2), Fraction(1, 9)),
                  (Fraction(-4, 5), Fraction(-7, 3)), (Fraction(5, 6), Fraction(3))]
        for s in elax.SCHEMES:
            if suite == "elliptic-lax":
                reports.append(elax.elliptic_lax_suite(lat, s, range(0, min(k, 4) + 1), range(2, min(l, 6) + 1)))
                continue
            rep = ResidualReport(f"{s}-wave", m=m, coords=("n", "l"))
            for nn in range(3, min(k, 4) + 1):
                for ll in range(2, min(l, 6) + 1):
                    try:
                        for pt in points:
                            rep.merge(elax.wave_vector_check_elliptic(lat, s, nn, ll, pt))
                    except (LaxConstructionError, OutOfDomain) as exc:
                        rep.skip((nn, ll))
                        if str(exc) not in rep.notes and len(rep.notes) < 4:
                            rep.notes.append(str(exc))
            reports.append(rep)
    return reports


def _workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"{WORKERS_ENV} must be an integer") from None


def cmd_verify(cfg: RunConfig) -> tuple:
    t0 = time.perf_counter()
    jobs, notes = expand_suites(cfg)
    cfg_json = asdict(cfg)
    workers = _workers()
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_job, jobs, [cfg_json] * len(jobs)))
    else:
        results = [run_job(j, cfg_json) for j in jobs]
    report = SuiteReport(cfg.to_json())
    for reps in results:
        for r in reps:
            report.add(r)
    report.wall_time = time.perf_counter() - t0
    out = report.to_json(with_time=True)
    if notes:
        out["notes"] = notes
    reduction_notes = sorted({n for r in report.reports for n in r.notes if n.startswith("m=1 reduction")})
    out["m1_reductions_exercised"] = bool(reduction_notes)
    if reduction_notes:
        out["m1_reductions"] = reduction_notes
    return report.exit_code(), out


# ------------------------------------------------------------------ eigen

def cmd_eigen(cfg: RunConfig) -> tuple:
    from hungryqd.eigen import convergence_report, qd_eigen, traces_to_csv
    spec = cfg.measure if cfg.measure is not None else {"nodes": [4, 2, 1], "weights": [1, 1, 1]}
    mu = parse_measure_spec(spec)
    if not isinstance(mu, DiscreteMeasure):
        raise InvalidMeasure("eigen needs a one-variable measure")
    mode = cfg.mode
    tol = cfg.tol if cfg.tol is not None else 1e-6
    l_max = cfg.l if cfg.l is not None else 60
    summaries, csvs = [], {}
    ok = True
    for m in cfg.m:
        traces = qd_eigen(mu, m, l_max, cfg.variable, mode)
        rep = convergence_report(traces, tol, mu.nodes)
        rep["m"] = m
        ok = ok and rep["passed"]
        summaries.append(rep)
        csvs[f"eigen_m{m}_{cfg.variable}.csv"] = traces_to_csv(traces)
    conf = cfg.to_json()
    conf["tol"] = tol
    out = {"config": conf, "passed": ok, "summaries": summaries}
    return (EXIT_OK if ok else EXIT_FAIL), out, csvs


# ------------------------------------------------------------------ dump

def _fmt(v):
    return None if v is None else format_scalar(v)


def _grid(fn, rows, cols, breakdowns):
    out = []
    for r in rows:
        row = []
        for c in cols:
            try:
                row.append(_fmt(fn(r, c)))
            except (LatticeBreakdown, OutOfDomain) as exc:
                if isinstance(exc, LatticeBreakdown):
                    breakdowns.append({"site": [r, c], "what": exc.what})
                row.append(None)
        out.append(row)
    return out


def cmd_dump(cfg: RunConfig) -> tuple:
    n_rows = cfg.n if cfg.n is not None else 4
    n_cols = cfg.l if cfg.l is not None else 8
    m = cfg.m[0]
    if len(cfg.m) > 1:
        raise UsageError("dump takes a single m")
    elliptic = bool(cfg.elliptic) or (cfg.measure is not None and ("points" in cfg.measure or cfg.measure.get("elliptic")))
    breakdowns: list = []
    if elliptic:
        k_max, l_max = n_rows - 1, n_cols + 1
        lat = elliptic_lattice_for(cfg, m, k_max, l_max)
        rows, cols = range(n_rows), range(2, 2 + n_cols)
        fams = {f: _grid(lambda k, l, f=f: lat.det(f, k, l), rows, cols, breakdowns)
                for f in ("Delta", "Theta", "Pi", "Sigma")}
        from hungryqd.elliptic.relations import Guarded
        g = Guarded(lat)
        derived = {name: _grid(getattr(g, name), rows, cols, breakdowns) for name in ("U", "V", "W")}
        out = {"m": m, "kind": "elliptic", "k": list(rows), "l": list(cols), "families": fams, "vars": derived,
               "origin": "oracle", "config": cfg.to_json()}
    else:
        size = n_rows + 3
        count = n_cols + (m + 1) * (n_rows + 2) + 2
        lat = qd_lattice_for(cfg, m, size, count)
        rows, cols = range(n_rows), range(n_cols)
        out = {"m": m, "n": list(rows), "l": list(cols),
               "tau": _grid(lat.tau, rows, cols, breakdowns),
               "vars": {name: _grid(getattr(lat, name), rows, cols, breakdowns) for name in ("vt", "wt", "v", "w")},
               "origin": "oracle", "config": cfg.to_json()}
    if breakdowns:
        out["breakdowns"] = breakdowns
    return EXIT_OK, out


# ------------------------------------------------------------------ main

def _write(out_dir: Optional[str], name: str, text: str) -> None:
    if out_dir is None:
        return
    path = Path(out_dir)
    path.mkdir(parents=True, exist_ok=True)
    (path / name).write_text(text)


def run(argv=None) -> int:
    try:
        cfg = config_from_args(argv)
        if cfg.command == "verify":
            code, out = cmd_verify(cfg)
            csvs = {}
        elif cfg.command == "eigen":
            code, out, csvs = cmd_eigen(cfg)
        else:
            code, out = cmd_dump(cfg)
            csvs = {}
    except (UsageError, InvalidMeasure) as exc:
        print(f"hungryqd: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"hungryqd: moment budget exceeded: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    text = json.dumps(out, indent=2, sort_keys=True)
    _write(cfg.out, f"{cfg.command}.json", text + "\n")
    for name, body in csvs.items():
        _write(cfg.out, name, body)
    print(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
