"""Command-line front end: ``fwexact <verb> [flags]``.

Exit codes: 0 when every authoritative check passes, 1 on a verification
failure, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from . import __version__
from .fwsolve import (
    closed_form_dirac,
    closed_form_pauli,
    compare_series,
    field_sectors,
    solve_dirac,
    solve_pauli,
)
from .hamio import (
    HamiltonianSeries,
    assemble_h_dirac,
    assemble_h_pauli,
    closed_form_h,
    compare_hamiltonians,
    compare_quantum_classical,
    dimensionless_failures,
    energy_dimension_failures,
    hermiticity_residues,
    pauli_antihermitian_breakdown,
)
from .opalg import format_text
from .sequences import (
    IDENTITIES,
    SERIES_NAMES,
    check_identity,
    seq_table,
    verify_series,
)

DEFAULT_ORDER = 10
MAX_ORDER = 30
DEFAULT_JMAX = 200
DEFAULT_SERIES_ORDER = 100
# printed forms that exact evaluation contradicts; reported but never fatal
INFORMATIONAL_SERIES = frozenset({"c"})

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass
class RunConfig:
    command: str
    order: int = DEFAULT_ORDER
    theory: str = "dirac"
    phi_sign: str = "minus"
    format: str = "text"
    out: Path | None = None
    jmax: int = DEFAULT_JMAX
    series_order: int = DEFAULT_SERIES_ORDER
    expanded: bool = True
    timing: bool = True

    @property
    def sign(self) -> int:
        return -1 if self.phi_sign == "minus" else 1

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "order": self.order,
            "theory": self.theory,
            "phi_sign": self.phi_sign,
            "jmax": self.jmax,
            "series_order": self.series_order,
            "expanded": self.expanded,
        }


@dataclass
class CheckResult:
    check: str
    order_max: int
    passed: bool
    informational: bool = False
    first_failure: dict | None = None
    detail: str = ""
    elapsed_s: float | None = None

    @property
    def status(self) -> str:
        if self.passed:
            return "pass"
        return "printed-inconsistent" if self.informational else "fail"

    def to_json(self) -> dict:
        return {
            "check": self.check,
            "order_max": self.order_max,
            "status": self.status,
            "informational": self.informational,
            "first_failure": self.first_failure,
            "detail": self.detail,
            "elapsed_s": self.elapsed_s,
        }


@dataclass
class VerificationReport:
    config: RunConfig
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def overall_pass(self) -> bool:
        return all(c.passed or c.informational for c in self.checks)

    def run(self, name: str, order_max: int, fn: Callable[[], CheckResult]) -> CheckResult:
        t0 = time.perf_counter()
        res = fn()
        res.check, res.order_max = name, order_max
        if self.config.timing:
            res.elapsed_s = round(time.perf_counter() - t0, 4)
        self.checks.append(res)
        return res

    def to_json(self) -> dict:
        return {
            "version": __version__,
            "config": self.config.to_json(),
            "overall_pass": self.overall_pass,
            "checks": [c.to_json() for c in self.checks],
        }

    def to_text(self) -> str:
        lines = []
        for c in self.checks:
            line = f"[{c.status.upper():>20}] {c.check} (order <= {c.order_max})"
            if c.elapsed_s is not None:
                line += f" {c.elapsed_s:.3f}s"
            lines.append(line)
            if c.detail:
                lines.append(f"{'':23}{c.detail}")
            if c.first_failure and not c.passed:
                lines.append(f"{'':23}first failure: {_locator(c.first_failure)}")
        lines.append(f"overall: {'PASS' if self.overall_pass else 'FAIL'}")
        return "\n".join(lines)


def _locator(ff: dict) -> str:
    return ", ".join(f"{k}={v}" for k, v in ff.items())


# ---------------------------------------------------------------------------
# individual checks

def _diff_result(diff) -> CheckResult:
    return CheckResult("", 0, diff.passed, first_failure=diff.first_failure())


def _identity_checks(rep: VerificationReport, jmax: int) -> None:
    for id in IDENTITIES:
        def fn(id=id):
            r = check_identity(id, jmax)
            ff = r.first_failure
            return CheckResult(
                "", 0, r.passed, r.informational,
                None if ff is None else {"j": ff[0], "lhs": ff[1], "rhs": ff[2]},
                r.form,
            )
        rep.run(f"identity-{id}", jmax, fn)


def _series_checks(rep: VerificationReport, order: int) -> None:
    for name in SERIES_NAMES:
        def fn(name=name):
            r = verify_series(name, order)
            fm = r.first_mismatch
            detail = "" if r.ratio is None else f"lhs/rhs = {r.ratio} at every order"
            return CheckResult(
                "", 0, r.passed, name in INFORMATIONAL_SERIES,
                None if fm is None else {"power": fm[0], "lhs": str(fm[1]), "rhs": str(fm[2])},
                detail,
            )
        rep.run(f"series-{name}", order, fn)


def _structure_check(X, Xp) -> CheckResult:
    """X' is B-linear at even orders and E-linear at odd orders; X is E-linear or field-free."""
    for k, expr in Xp.terms.items():
        want = {"B"} if k % 2 == 0 else {"E"}
        got = field_sectors(expr)
        if expr and not got <= want:
            return CheckResult("", 0, False, first_failure={"order": k, "sectors": sorted(got)})
    for k, expr in X.terms.items():
        got = field_sectors(expr)
        if not got <= {"", "E"} or (k % 2 == 0 and expr):
            return CheckResult("", 0, False, first_failure={"order": k, "sectors": sorted(got)})
    return CheckResult("", 0, True)


def _hermiticity_check(hs: Sequence[tuple[str, HamiltonianSeries]]) -> CheckResult:
    for name, h in hs:
        res = hermiticity_residues(h)
        if res:
            k = min(res)
            return CheckResult(
                "", 0, False,
                first_failure={"hamiltonian": name, "order": k, "residue": format_text(res[k])},
            )
    return CheckResult("", 0, True)


def _breakdown_check(N: int, sign: int) -> CheckResult:
    rows = pauli_antihermitian_breakdown(N, sign)
    bad = [r for r in rows if r["sum"] != 0]
    detail = "computed (E.pi) combination per order: " + ", ".join(
        f"j={r['j']}: {r['from_sigma_pi_Xp']} + ({r['from_sigma_E_X']}) (printed b-d+a = {r['printed']})"
        for r in rows
    )
    ff = None
    if bad:
        r = bad[0]
        ff = {"j": r["j"], "sum": str(r["sum"])}
    return CheckResult("", 0, not bad, first_failure=ff, detail=detail)


def _dimension_check(X, Xp, hs) -> CheckResult:
    for name, bad in (
        ("X", dimensionless_failures(X)),
        ("X'", dimensionless_failures(Xp)),
        *((n, energy_dimension_failures(h)) for n, h in hs),
    ):
        if bad:
            k, m, u = bad[0]
            return CheckResult("", 0, False, first_failure={"series": name, "order": k, "units": str(u)})
    return CheckResult("", 0, True)


def run_verify(cfg: RunConfig) -> VerificationReport:
    rep = VerificationReport(cfg)
    N, s = cfg.order, cfg.sign
    _identity_checks(rep, cfg.jmax)
    _series_checks(rep, cfg.series_order)

    X = solve_dirac(N + 2, s)
    Xp = solve_pauli(N + 2, X, s)
    rep.run("closed-form-X", N, lambda: _diff_result(compare_series(X, closed_form_dirac(N), N)))
    rep.run("closed-form-X'", N, lambda: _diff_result(compare_series(Xp, closed_form_pauli(N), N)))
    rep.run("structure-X-X'", N, lambda: _structure_check(X.truncate(N), Xp.truncate(N)))

    H = assemble_h_dirac(X, N, "conjugation", s)
    Hp = assemble_h_pauli(X, Xp, N)
    rep.run(
        "route-equivalence",
        N,
        lambda: _diff_result(compare_series(H.series, assemble_h_dirac(X, N, "commutator", s).series, N)),
    )
    rep.run("hermiticity", N, lambda: _hermiticity_check([("H", H), ("H'", Hp)]))
    rep.run("pauli-antihermitian-combination", N, lambda: _breakdown_check(N, s))
    rep.run("resummation-dirac", N, lambda: _diff_result(compare_hamiltonians(H, closed_form_h("dirac", N), N)))
    rep.run("resummation-pauli", N, lambda: _diff_result(compare_hamiltonians(Hp, closed_form_h("pauli", N), N)))
    rep.run(
        "resummation-total", N, lambda: _diff_result(compare_hamiltonians(H + Hp, closed_form_h("total", N), N))
    )
    for theory in ("dirac", "dirac-pauli"):
        rep.run(
            f"quantum-classical-{theory}",
            N,
            lambda theory=theory: _diff_result(compare_quantum_classical(N, theory, s)),
        )
    rep.run("dimensions", N, lambda: _dimension_check(X, Xp, [("H", H), ("H'", Hp)]))
    return rep


# ---------------------------------------------------------------------------
# rendering

LATEX_PREAMBLE = "\\documentclass{article}\n\\usepackage{amsmath,amssymb}\n\\begin{document}\n"
LATEX_END = "\\end{document}\n"


def _latex_doc(body: str) -> str:
    return LATEX_PREAMBLE + body.rstrip("\n") + "\n" + LATEX_END


def _latex_escape(s: str) -> str:
    return s.replace("_", r"\_").replace("%", r"\%").replace("#", r"\#")


def _dump_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False, default=_json_default) + "\n"


def _json_default(o):
    if isinstance(o, Fraction):
        return str(o)
    return str(o)


def _report_latex(rep: VerificationReport) -> str:
    rows = [
        f"{_latex_escape(c.check)} & {c.order_max} & {_latex_escape(c.status)} \\\\"
        for c in rep.checks
    ]
    body = (
        "\\begin{tabular}{llr}\n\\hline\ncheck & order & status \\\\\n\\hline\n"
        + "\n".join(rows)
        + f"\n\\hline\n\\end{{tabular}}\n\n\\noindent overall: {'PASS' if rep.overall_pass else 'FAIL'}\n"
    )
    return _latex_doc(body)


def _coeffs_doc(cfg: RunConfig):
    table = seq_table(cfg.jmax)
    reports = [check_identity(id, cfg.jmax) for id in IDENTITIES]
    ok = all(r.passed or r.informational for r in reports)
    if cfg.format == "json":
        out = _dump_json(
            {
                "version": __version__,
                "jmax": cfg.jmax,
                "sequences": table,
                "identities": [r.to_json() for r in reports],
                "overall_pass": ok,
            }
        )
    elif cfg.format == "latex":
        head = " & ".join(["$j$", *(f"${n}_j$" for n in "abcd")])
        rows = [
            " & ".join(str(v) for v in (j, *(table[n][j] for n in "abcd"))) + r" \\"
            for j in range(cfg.jmax + 1)
        ]
        idl = [_latex_escape(r.describe()) + r" \\" for r in reports]
        out = _latex_doc(
            "\\begin{tabular}{rrrrr}\n" + head + " \\\\\n\\hline\n" + "\n".join(rows) + "\n\\end{tabular}\n\n"
            + "\\noindent\n" + "\n".join(idl) + "\n"
        )
    else:
        lines = [f"{'j':>4} {'a':>12} {'b':>12} {'c':>12} {'d':>12}"]
        for j in range(cfg.jmax + 1):
            lines.append(f"{j:>4} " + " ".join(f"{table[n][j]:>12}" for n in "abcd"))
        lines.append("")
        lines.extend(r.describe() for r in reports)
        out = "\n".join(lines) + "\n"
    return out, ok


def _series_doc(cfg: RunConfig):
    reports = [verify_series(n, cfg.series_order) for n in SERIES_NAMES]
    ok = all(r.passed or r.name in INFORMATIONAL_SERIES for r in reports)
    if cfg.format == "json":
        docs = []
        for r in reports:
            d = r.to_json()
            d["informational"] = r.name in INFORMATIONAL_SERIES
            docs.append(d)
        out = _dump_json({"version": __version__, "order": cfg.series_order, "series": docs, "overall_pass": ok})
    elif cfg.format == "latex":
        out = _latex_doc("\n".join(_latex_escape(r.describe()) + r" \\" for r in reports))
    else:
        out = "\n".join(r.describe() for r in reports) + "\n"
    return out, ok


def _solve_doc(cfg: RunConfig):
    N, s = cfg.order, cfg.sign
    X = solve_dirac(N, s)
    parts = [("X", X)]
    if cfg.theory == "dirac-pauli":
        parts.append(("X'", solve_pauli(N, X, s)))
    if cfg.format == "json":
        out = _dump_json(
            {
                "version": __version__,
                "theory": cfg.theory,
                "order": N,
                "phi_sign": cfg.phi_sign,
                "series": {name: ser.to_json() for name, ser in parts},
            }
        )
    elif cfg.format == "latex":
        out = _latex_doc("\n".join(ser.to_latex(name) for name, ser in parts))
    else:
        out = "\n".join(ser.to_text(name) for name, ser in parts) + "\n"
    return out, True


def _hamiltonian_doc(cfg: RunConfig):
    N, s = cfg.order, cfg.sign
    X = solve_dirac(N + 2, s)
    H = assemble_h_dirac(X, N, "conjugation", s)
    if cfg.theory == "dirac-pauli":
        H = H + assemble_h_pauli(X, solve_pauli(N + 2, X, s), N)
    if cfg.expanded:
        H = H.physical()
    if cfg.format == "json":
        doc = {"version": __version__, "theory": cfg.theory, "representation": "expanded" if cfg.expanded else "compact"}
        doc.update(H.to_json())
        out = _dump_json(doc)
    elif cfg.format == "latex":
        out = _latex_doc(H.to_latex())
    else:
        out = H.to_text() + "\n"
    return out, True


def _verify_doc(cfg: RunConfig):
    rep = run_verify(cfg)
    if cfg.format == "json":
        out = _dump_json(rep.to_json())
    elif cfg.format == "latex":
        out = _report_latex(rep)
    else:
        out = rep.to_text() + "\n"
    return out, rep.overall_pass


def _report_doc(cfg: RunConfig):
    """Verification report plus the sequence table and the computed (E.pi) combinations."""
    rep = run_verify(cfg)
    rows = pauli_antihermitian_breakdown(cfg.order, cfg.sign)
    table = seq_table(min(cfg.jmax, 12))
    if cfg.format == "json":
        doc = rep.to_json()
        doc["sequences"] = table
        doc["antihermitian_combination"] = [
            {k: (str(v) if k != "j" else v) for k, v in r.items()} for r in rows
        ]
        out = _dump_json(doc)
    elif cfg.format == "latex":
        out = _report_latex(rep)
    else:
        lines = [rep.to_text(), "", "sequences:"]
        lines += [f"  {n}: {', '.join(map(str, table[n]))}" for n in "abcd"]
        lines += ["", "antihermitian (E.pi) content of H' per order, normalised:"]
        lines.append(f"  {'j':>3} {'c sp.X':>8} {'i sE.X':>8} {'sum':>6} {'b-d':>6} {'a':>6} {'printed b-d+a':>14}")
        for r in rows:
            lines.append(
                f"  {r['j']:>3} {str(r['from_sigma_pi_Xp']):>8} {str(r['from_sigma_E_X']):>8} {str(r['sum']):>6}"
                f" {r['b_minus_d']:>6} {r['a']:>6} {r['printed']:>14}"
            )
        out = "\n".join(lines) + "\n"
    return out, rep.overall_pass


COMMANDS = {
    "coeffs": _coeffs_doc,
    "series-check": _series_doc,
    "solve": _solve_doc,
    "verify": _verify_doc,
    "hamiltonian": _hamiltonian_doc,
    "report": _report_doc,
}


# ---------------------------------------------------------------------------
# argument handling

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-n", "--order", type=int, default=None, help=f"series order (default {DEFAULT_ORDER}, max {MAX_ORDER})")
    common.add_argument("--theory", choices=["dirac", "dirac-pauli"], default="dirac")
    common.add_argument("--phi-sign", choices=["minus", "plus"], default="minus", help="sign s in [phi, pi] = s i hbar E")
    common.add_argument("--format", choices=["text", "json", "latex"], default="text")
    common.add_argument("--out", type=Path, default=None, help="write output here instead of stdout")
    common.add_argument("--jmax", type=int, default=None, help="largest sequence index for identity checks")
    common.add_argument("--series-order", type=int, default=DEFAULT_SERIES_ORDER, help="x power for the series checks")
    common.add_argument("--no-timing", action="store_true", help="omit wall-clock timings (byte-stable JSON)")
    rep = common.add_mutually_exclusive_group()
    rep.add_argument("--expanded", dest="expanded", action="store_true", default=True, help="pi-basis, physical grading")
    rep.add_argument("--compact", dest="expanded", action="store_false", help="(sigma.pi)^k atoms, recursion grading")

    parser = argparse.ArgumentParser(prog="fwexact", description="Exact Foldy-Wouthuysen series verifier.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "coeffs": "sequence table and combinatorial identities",
        "series-check": "Taylor series of the closed forms against the sequences",
        "solve": "solve the X (and X') recursions",
        "verify": "run the full verification pipeline",
        "hamiltonian": "print the block-diagonal Hamiltonian",
        "report": "verification plus sequence and hermiticity tables",
    }
    for name, h in helps.items():
        sub.add_parser(name, parents=[common], help=h)
    return parser


def parse_config(argv: Sequence[str] | None = None) -> RunConfig:
    parser = build_parser()
    ns = parser.parse_args(argv)
    order = DEFAULT_ORDER if ns.order is None else ns.order
    if not 1 <= order <= MAX_ORDER:
        parser.error(f"--order must be between 1 and {MAX_ORDER}")
    if ns.command in ("verify", "report", "hamiltonian") and order < 2:
        parser.error(f"{ns.command} needs --order >= 2")
    jmax = ns.jmax
    if jmax is None:
        jmax = 10 if ns.command == "coeffs" else DEFAULT_JMAX
    if jmax < 2:
        parser.error("--jmax must be >= 2")
    if ns.series_order < 4:
        parser.error("--series-order must be >= 4")
    return RunConfig(
        command=ns.command,
        order=order,
        theory=ns.theory,
        phi_sign=ns.phi_sign,
        format=ns.format,
        out=ns.out,
        jmax=jmax,
        series_order=ns.series_order,
        expanded=ns.expanded,
        timing=not ns.no_timing,
    )


def main(argv: Sequence[str] | None = None) -> int:
    try:
        cfg = parse_config(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors and 0 on --help
        return int(e.code or 0)
    out, ok = COMMANDS[cfg.command](cfg)
    if cfg.out is not None:
        cfg.out.write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)
    return EXIT_OK if ok else EXIT_FAIL


def main_exit() -> None:
    sys.exit(main())


def schema_path(command: str) -> Path:
    """Location of the JSON schema for ``command``'s JSON output."""
    return Path(__file__).with_name("schemas") / f"{command}.schema.json"


if __name__ == "__main__":
    main_exit()
