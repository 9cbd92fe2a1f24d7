"""Command-line interface.

Exit codes: 0 separable, 3 entangled, 4 boundary, 1 input error,
2 usage error or failed self-test.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .criteria import Verdict, chsh_max, concurrence, expectation_identity_check, hefei_margins, ppt_test
from .dirac_frame import LocalFrame, expansion_coefficients, verify_algebra
from .errors import HefeiError
from .frame_search import CriterionReport, SearchConfig, certify
from .states import (
    DEFAULT_TOL,
    PureState,
    make_rng,
    pure_to_density,
    random_mixed,
    random_pure,
    random_separable,
    schmidt_decompose,
    validate_density,
    werner,
)

EXIT_SEPARABLE = 0
EXIT_INPUT_ERROR = 1
EXIT_ENTANGLED = 3
EXIT_BOUNDARY = 4
EXIT_VERIFY_FAILED = 2

VERDICT_EXIT = {
    Verdict.SEPARABLE: EXIT_SEPARABLE,
    Verdict.ENTANGLED: EXIT_ENTANGLED,
    Verdict.BOUNDARY: EXIT_BOUNDARY,
}

VERIFY_LIMIT = 1e-9


class StateFileError(HefeiError):
    pass


def fmt(x: float) -> str:
    """Round-trip-exact decimal for a double."""
    return format(float(x), ".17g")


# ---------------------------------------------------------------------------
# state documents


def _complex_pair(obj, where: str) -> complex:
    if (
        not isinstance(obj, list)
        or len(obj) != 2
        or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in obj)
    ):
        raise StateFileError(f"{where}: expected a [re, im] pair of numbers, got {json.dumps(obj)}")
    return complex(obj[0], obj[1])


def parse_state_document(text: str, tol: float = DEFAULT_TOL):
    """Parse a JSON state document into a validated ``DensityMatrix``.

    ``{"kind": "pure", "data": [[re, im] x 4]}`` or
    ``{"kind": "density", "data": [[[re, im] x 4] x 4]}``.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFileError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise StateFileError("top level: expected an object with fields 'kind' and 'data'")
    for key in ("kind", "data"):
        if key not in doc:
            raise StateFileError(f"missing field '{key}'")
    kind = doc["kind"]
    data = doc["data"]
    if kind == "pure":
        if not isinstance(data, list) or len(data) != 4:
            raise StateFileError("field 'data': a pure state needs 4 complex pairs")
        amps = np.array([_complex_pair(x, f"data[{i}]") for i, x in enumerate(data)])
        return pure_to_density(PureState(amps))
    if kind == "density":
        if not isinstance(data, list) or len(data) != 4:
            raise StateFileError("field 'data': a density matrix needs 4 rows")
        rows = []
        for i, row in enumerate(data):
            if not isinstance(row, list) or len(row) != 4:
                raise StateFileError(f"data[{i}]: expected 4 complex pairs")
            rows.append([_complex_pair(x, f"data[{i}][{j}]") for j, x in enumerate(row)])
        return validate_density(np.array(rows), tol)
    raise StateFileError(f"field 'kind': expected \"pure\" or \"density\", got {json.dumps(kind)}")


def state_document(rho) -> dict:
    m = np.asarray(rho)
    return {"kind": "density", "data": [[[float(z.real), float(z.imag)] for z in row] for row in m]}


# ---------------------------------------------------------------------------
# reports


@dataclass
class ReportDocument:
    verdict: str
    margins: dict
    witness_frame: dict
    ppt: dict
    concurrence: float
    chsh_max: float
    agreement: bool
    converged: bool
    tool: str = "hefei"
    version: str = __version__
    seed: int = 0
    config: dict = field(default_factory=dict)

    @classmethod
    def from_report(cls, report: CriterionReport, rho, seed: int, cfg: SearchConfig) -> "ReportDocument":
        return cls(
            verdict=str(report.verdict),
            margins={
                "min_m_plus": report.min_m_plus,
                "m_minus_at_witness": report.margins.m_minus,
                "m_plus_all_at_witness": report.margins.m_plus_all,
                "min_m_minus_observed": report.min_m_minus_observed,
                "grid_min_m_plus": report.grid_min_m_plus,
            },
            witness_frame={
                "angles_u": list(report.witness_frame.angles_u),
                "angles_v": list(report.witness_frame.angles_v),
            },
            ppt={
                "min_eigenvalue": report.ppt.min_eigenvalue,
                "spectrum": list(report.ppt.spectrum),
                "verdict": str(report.ppt.verdict),
            },
            concurrence=concurrence(rho),
            chsh_max=chsh_max(rho),
            agreement=report.agreement,
            converged=report.converged,
            seed=seed,
            config=asdict(cfg),
        )

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "ReportDocument":
        return cls(**json.loads(text))


def _print_report(doc: ReportDocument, out) -> None:
    m = doc.margins
    lines = [
        f"verdict              {doc.verdict}",
        f"min m_plus           {m['min_m_plus']:.12g}",
        f"m_minus at witness   {m['m_minus_at_witness']:.12g}",
        f"min m_minus seen     {m['min_m_minus_observed']:.12g}",
        f"witness frame u      ({', '.join(f'{x:.9f}' for x in doc.witness_frame['angles_u'])})",
        f"witness frame v      ({', '.join(f'{x:.9f}' for x in doc.witness_frame['angles_v'])})",
        f"PPT min eigenvalue   {doc.ppt['min_eigenvalue']:.12g} ({doc.ppt['verdict']})",
        f"PPT spectrum         [{', '.join(f'{x:.9g}' for x in doc.ppt['spectrum'])}]",
        f"agreement with PPT   {'yes' if doc.agreement else 'NO'}",
        f"refinement converged {'yes' if doc.converged else 'no'}",
        f"concurrence          {doc.concurrence:.12g}",
        f"CHSH max             {doc.chsh_max:.12g}",
    ]
    if doc.verdict == "separable":
        lines.append("note: 'separable' means no violating frame was found; it is certified by the PPT agreement")
    print("\n".join(lines), file=out)


def _config(args) -> SearchConfig:
    return SearchConfig(grid_points_per_angle=args.grid, ppt_tol=args.tol)


def _analyze_state(rho, args) -> int:
    cfg = _config(args)
    report = certify(rho, cfg)
    doc = ReportDocument.from_report(report, rho, args.seed, cfg)
    if args.json:
        print(doc.to_json())
    elif not args.quiet:
        _print_report(doc, sys.stdout)
    return VERDICT_EXIT[report.verdict]


def cmd_analyze(args) -> int:
    try:
        with open(args.path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read {args.path}: {exc.strerror}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    try:
        rho = parse_state_document(text, args.tol)
    except HefeiError as exc:
        print(f"error: {args.path}: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    return _analyze_state(rho, args)


# ---------------------------------------------------------------------------
# werner


WERNER_COLUMNS = ["beta", "m_plus_identity_frame", "ppt_min_eig", "verdict", "concurrence", "chsh_max"]


def werner_row(beta: float, threshold: float, tol: float) -> dict:
    rho = werner(beta)
    mp = hefei_margins(rho).m_plus
    if mp < -threshold:
        verdict = Verdict.ENTANGLED
    elif mp <= threshold:
        verdict = Verdict.BOUNDARY
    else:
        verdict = Verdict.SEPARABLE
    return {
        "beta": beta,
        "m_plus_identity_frame": mp,
        "ppt_min_eig": ppt_test(rho, tol).min_eigenvalue,
        "verdict": verdict,
        "concurrence": concurrence(rho),
        "chsh_max": chsh_max(rho),
    }


def find_flip(rows) -> tuple[float, float] | None:
    """First ``(last non-entangled β, first entangled β)`` pair along the scan."""
    for prev, cur in zip(rows, rows[1:]):
        if prev["verdict"] != Verdict.ENTANGLED and cur["verdict"] == Verdict.ENTANGLED:
            return prev["beta"], cur["beta"]
    return None


def _parse_scan(text: str):
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError("--scan expects FROM,TO,STEPS")
    lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    if steps < 2:
        raise ValueError("--scan needs at least 2 steps")
    return lo, hi, steps


def cmd_werner(args) -> int:
    threshold = SearchConfig().violation_threshold
    if args.scan is None:
        try:
            rho = werner(args.beta)
        except HefeiError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT_ERROR
        return _analyze_state(rho, args)

    try:
        lo, hi, steps = _parse_scan(args.scan)
        betas = np.linspace(lo, hi, steps)
        rows = [werner_row(float(b), threshold, args.tol) for b in betas]
    except (ValueError, HefeiError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    flip = find_flip(rows)
    if args.json:
        print(
            json.dumps(
                {
                    "columns": WERNER_COLUMNS,
                    "rows": [[str(r[c]) if c == "verdict" else r[c] for c in WERNER_COLUMNS] for r in rows],
                    "flip": None if flip is None else {"last_not_entangled": flip[0], "first_entangled": flip[1]},
                },
                indent=2,
            )
        )
        return 0
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(WERNER_COLUMNS)
    for r in rows:
        writer.writerow([str(r[c]) if c == "verdict" else fmt(r[c]) for c in WERNER_COLUMNS])
    if not args.quiet:
        if flip is None:
            print("no separable->entangled flip in scan range", file=sys.stderr)
        else:
            print(f"verdict flip: separable->entangled between beta={flip[0]:.6g} and beta={flip[1]:.6g}", file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# bench


ENSEMBLES = ("pure", "mixed", "separable")
BENCH_COLUMNS = [
    "index",
    "ppt_min_eig",
    "ppt_verdict",
    "hefei_verdict",
    "min_m_plus",
    "min_m_minus_observed",
    "excluded",
    "agreement",
    "seconds",
]


def bench_state(ensemble: str, seed: int, index: int):
    ss = np.random.SeedSequence([seed, index])
    if ensemble == "pure":
        return pure_to_density(random_pure(ss))
    if ensemble == "mixed":
        return random_mixed(ss, 4)
    return random_separable(ss, 1 + index % 4)


def _bench_one(job):
    ensemble, seed, index, cfg, band = job
    rho = bench_state(ensemble, seed, index)
    t0 = time.perf_counter()
    rep = certify(rho, cfg)
    dt = time.perf_counter() - t0
    excluded = abs(rep.ppt.min_eigenvalue) <= band
    return {
        "index": index,
        "ppt_min_eig": rep.ppt.min_eigenvalue,
        "ppt_verdict": rep.ppt.verdict,
        "hefei_verdict": rep.verdict,
        "min_m_plus": rep.min_m_plus,
        "min_m_minus_observed": rep.min_m_minus_observed,
        "excluded": excluded,
        "agreement": rep.verdict == rep.ppt.verdict,
        "seconds": dt,
    }


def bench_summary(rows, threshold: float) -> dict:
    kept = [r for r in rows if not r["excluded"]]
    secs = [r["seconds"] for r in rows]
    return {
        "count": len(rows),
        "boundary_band_exclusions": len(rows) - len(kept),
        "agreement_rate": (sum(r["agreement"] for r in kept) / len(kept)) if kept else None,
        "hefei_violations": sum(r["min_m_plus"] < -threshold for r in rows),
        "entangled_by_ppt": sum(r["ppt_verdict"] == Verdict.ENTANGLED for r in rows),
        "seconds_mean": float(np.mean(secs)),
        "seconds_max": float(np.max(secs)),
        "seconds_total": float(np.sum(secs)),
    }


def cmd_bench(args) -> int:
    if args.count < 1:
        print("error: --count must be at least 1", file=sys.stderr)
        return EXIT_INPUT_ERROR
    if args.ensemble not in ENSEMBLES:
        print(f"error: unknown ensemble {args.ensemble!r}; choose from {', '.join(ENSEMBLES)}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    cfg = _config(args)
    jobs = [(args.ensemble, args.seed, i, cfg, args.band) for i in range(args.count)]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            rows = list(pool.map(_bench_one, jobs, chunksize=8))
    else:
        rows = [_bench_one(j) for j in jobs]
    summary = bench_summary(rows, cfg.violation_threshold)
    if args.json:
        print(
            json.dumps(
                {
                    "columns": BENCH_COLUMNS,
                    "rows": [[_cell(r[c]) for c in BENCH_COLUMNS] for r in rows],
                    "summary": summary,
                    "seed": args.seed,
                    "ensemble": args.ensemble,
                    "config": asdict(cfg),
                },
                indent=2,
            )
        )
        return 0
    writer = csv.writer(sys.stdout, lineterminator="\n")
    if not args.quiet:
        writer.writerow(BENCH_COLUMNS)
        for r in rows:
            writer.writerow([_csv_cell(r[c]) for c in BENCH_COLUMNS])
    for key, value in summary.items():
        print(f"# {key}={_csv_cell(value)}")
    return 0


def _cell(x):
    if isinstance(x, Verdict):
        return str(x)
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    return x


def _csv_cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, Verdict):
        return str(x)
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return fmt(x)


# ---------------------------------------------------------------------------
# verify


def run_verify(trials: int, seed: int, identity_only: bool = False) -> dict[str, float]:
    """Max residual per identity class over random frames and states."""
    rng = make_rng(seed)
    worst: dict[str, float] = {}

    def note(key, value):
        worst[key] = max(worst.get(key, 0.0), float(value))

    for _ in range(trials):
        if identity_only:
            frame = LocalFrame.identity()
        else:
            frame = LocalFrame.from_angles(
                rng.uniform(0, 2 * np.pi, 3) * [1, 0.5, 1], rng.uniform(0, 2 * np.pi, 3) * [1, 0.5, 1]
            )
        for key, value in verify_algebra(frame).items():
            note(key, value)
        rho = random_mixed(rng, int(rng.integers(1, 5)))
        theta, phi = rng.uniform(0, 2 * np.pi, 2)
        direct, pt = expectation_identity_check(rho, frame, theta, phi)
        note("expectation_direct", direct)
        note("expectation_partial_time_reversal", pt)
        psi = random_pure(rng)
        sf = schmidt_decompose(psi)
        note("schmidt_fidelity_defect", 1.0 - abs(np.vdot(psi.amplitudes, sf.reconstruct())) ** 2)
        a1, a2, a3, res = expansion_coefficients(pure_to_density(psi), LocalFrame.from_unitaries(sf.u, sf.v))
        note("expansion_norm", abs(a1 * a1 + a2 * a2 + a3 * a3 - 1.0))
        note("expansion_residual", res)
    return worst


def cmd_verify(args) -> int:
    if args.trials < 1:
        print("error: --trials must be at least 1", file=sys.stderr)
        return EXIT_INPUT_ERROR
    worst = run_verify(args.trials, args.seed, args.identity_only)
    ok = all(v < VERIFY_LIMIT for v in worst.values())
    if args.json:
        print(json.dumps({"trials": args.trials, "seed": args.seed, "limit": VERIFY_LIMIT, "max_residuals": worst, "pass": ok}, indent=2))
    elif not args.quiet:
        width = max(len(k) for k in worst)
        for key, value in worst.items():
            print(f"{key:<{width}}  {value:.3e}  {'PASS' if value < VERIFY_LIMIT else 'FAIL'}")
    return 0 if ok else EXIT_VERIFY_FAILED


# ---------------------------------------------------------------------------
# argument parsing


def _common(suppress: bool) -> argparse.ArgumentParser:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--json", action="store_true", default=d(False), help="machine-readable JSON output")
    p.add_argument("--seed", type=int, default=d(0), help="root seed for all randomness (default 0)")
    p.add_argument("--tol", type=float, default=d(DEFAULT_TOL), help="validation / PPT tolerance (default 1e-9)")
    p.add_argument("--grid", type=int, default=d(8), help="grid points per Euler angle (default 8)")
    p.add_argument("--quiet", action="store_true", default=d(False), help="suppress human-readable output")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hefei",
        parents=[_common(False)],
        description="Certify entanglement of two-qubit states with the chiral frame inequalities.",
        epilog="exit codes: 0 separable, 3 entangled, 4 boundary, 1 input error, 2 usage error / failed verify",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common(True)

    p = sub.add_parser("analyze", parents=[common], help="analyze a state file")
    p.add_argument("path", help='JSON state file: {"kind": "pure"|"density", "data": ...}')
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("werner", parents=[common], help="analyze or scan the Werner family")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--beta", type=float, help="single mixing parameter in [-1/3, 1]")
    g.add_argument("--scan", metavar="FROM,TO,STEPS", help="CSV scan over an inclusive beta grid")
    p.set_defaults(func=cmd_werner)

    p = sub.add_parser("bench", parents=[common], help="random-ensemble agreement benchmark")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--ensemble", default="mixed", help="pure | mixed | separable")
    p.add_argument("--band", type=float, default=1e-3, help="exclude states with |PPT min eigenvalue| <= band")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (rows stay in input order)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("verify", parents=[common], help="numerical self-test of the algebraic identities")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--identity-only", action="store_true", help="use the identity frame in every trial")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.grid < 2:
        print("error: --grid must be at least 2", file=sys.stderr)
        return EXIT_INPUT_ERROR
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
