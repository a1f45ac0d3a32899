"""Command-line front end.

Exit codes: 0 accepted / feasible / winning, 1 clean rejection (any library
error), 2 usage or I/O error.  Reports are ``key: value`` lines on stdout;
artifacts go to ``-o`` or follow the report after a blank line.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from typing import Any, Callable

from .cert import Certificate, format_certificate, parse_certificate, qsa_to_qsos, qsos_to_qsa, verify
from .errors import Infeasible, NotWinning, NotWinningEval, QbfAlgError
from .extract import extract, format_countermodel, validate_countermodel
from .game import (check_winning, compile_v1_to_qsa, compile_v2_to_qns, complete_from_countermodel,
                   parse_eval_strategy, parse_strategy, play_eval, winning_countermodel)
from .pexp import audit, format_audit
from .poly import ZERO
from .proofs import (check_qpc, check_qures, check_wres, format_qpc, format_wres, parse_qpc,
                     parse_qures, parse_wres, proof_kind, qns_to_qpc, qpc_to_qsos, qsa_to_wres,
                     qures_to_wres, wres_to_qsa)
from .qbf import DEFAULT_CAP, FAMILIES, Qbf, parse_qdimacs, write_qdimacs
from .search import DEFAULT_VAR_CAP, SearchBudget, min_qdeg, ns_search, sa_search


class UsageError(Exception):
    pass


class Report:
    def __init__(self, verdict: str):
        self.verdict = verdict
        self.fields: dict[str, Any] = {}
        self.counterexample: dict[int, int] | None = None
        self.timings: dict[str, float] = {}
        self.artifact: str | None = None

    def text(self, timings: bool) -> str:
        lines = ["verdict: %s" % self.verdict]
        lines += ["%s: %s" % (k, v) for k, v in self.fields.items()]
        if self.counterexample is not None:
            lines.append("counterexample: %s" % _assignment_text(self.counterexample))
        if timings:
            lines += ["time_%s: %.3fs" % (k, v) for k, v in self.timings.items()]
        return "\n".join(lines) + "\n"

    def data(self, timings: bool) -> dict:
        out: dict[str, Any] = {"verdict": self.verdict}
        out.update({k: (str(v) if isinstance(v, Fraction) else v) for k, v in self.fields.items()})
        if self.counterexample is not None:
            out["counterexample"] = {str(k): v for k, v in sorted(self.counterexample.items())}
        if timings:
            out["timings"] = self.timings
        return out


def _assignment_text(alpha: dict[int, int]) -> str:
    return " ".join("%s%d" % ("" if b else "-", v) for v, b in sorted(alpha.items()))


class _Timer:
    def __init__(self, report: Report, name: str):
        self.report, self.name = report, name

    def __enter__(self):
        self.t = time.perf_counter()

    def __exit__(self, *exc):
        self.report.timings[self.name] = time.perf_counter() - self.t


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path) as f:
            return f.read()
    except OSError as e:
        raise UsageError("cannot read %s: %s" % (path, e.strerror))


def _load_qbf(path: str) -> Qbf:
    return parse_qdimacs(_read(path))


def _measures(rep: Report, m) -> None:
    rep.fields.update(size=m.size, degree=m.degree, qsize=m.qsize, qdeg=m.qdeg)


def _load_cert(path: str) -> Certificate:
    return parse_certificate(_read(path))


def _as_qsa(c: Certificate) -> Certificate:
    if c.system == "QNS":
        return Certificate("QSA", c.multipliers, c.universal, ZERO)
    return c


# subcommands -------------------------------------------------------------------------

def cmd_gen(a) -> Report:
    if a.n < 1:
        raise UsageError("--n must be positive")
    phi = FAMILIES[a.family](a.n)
    rep = Report("generated")
    rep.fields.update(family=a.family, n=a.n, variables=len(phi.variables), clauses=len(phi.clauses))
    rep.artifact = write_qdimacs(phi)
    return rep


def cmd_check(a) -> Report:
    phi = _load_qbf(a.qbf)
    text = _read(a.file)
    rep = Report("accepted")
    with _Timer(rep, "check"):
        kind = "cert" if text.lstrip().startswith("qcert") else proof_kind(text)
        if kind == "cert":
            c = parse_certificate(text)
            rep.fields["kind"] = c.system
            _measures(rep, verify(phi, c))
        elif kind is None:
            raise UsageError("cannot recognise the format of %s" % a.file)
        else:
            parse, check = {"qures": (parse_qures, check_qures), "wres": (parse_wres, check_wres),
                            "qpc": (parse_qpc, check_qpc)}[kind]
            st = check(phi, parse(text))
            rep.fields.update(kind=kind, size=st.size, qsize=st.qsize)
    return rep


def cmd_play(a) -> Report:
    phi = _load_qbf(a.qbf)
    text = _read(a.strategy)
    if a.eval:
        alpha = play_eval(phi, parse_eval_strategy(text), a.cap)
        rep = Report("winning" if alpha is None else "losing")
        rep.fields["game"] = "evaluation"
        rep.counterexample = alpha
        return rep
    r = check_winning(phi, parse_strategy(text), a.variant, a.cap)
    rep = Report("winning" if r.winning else "losing")
    rep.fields["variant"] = a.variant
    if not r.winning:
        rep.counterexample = r.counterexample
        rep.fields["score"] = r.score
    return rep


def cmd_compile(a) -> Report:
    phi = _load_qbf(a.qbf)
    sigma = parse_strategy(_read(a.strategy))
    rep = Report("accepted")
    with _Timer(rep, "compile"):
        if a.variant == 2:
            c = compile_v2_to_qns(phi, sigma, a.cap)
        else:
            c = compile_v1_to_qsa(phi, sigma, as_qsos=a.qsos, cap=a.cap)
    with _Timer(rep, "verify"):
        _measures(rep, verify(phi, c))
    rep.fields = {"kind": c.system, **rep.fields}
    rep.artifact = format_certificate(c)
    return rep


def cmd_complete(a) -> Report:
    phi = _load_qbf(a.qbf)
    if a.solve:
        tau = winning_countermodel(phi, a.cap)
    elif a.tables:
        tau = parse_eval_strategy(_read(a.tables))
    else:
        raise UsageError("give a decision-table file or --solve")
    rep = Report("accepted")
    with _Timer(rep, "complete"):
        c = complete_from_countermodel(phi, tau, a.cap)
    _measures(rep, verify(phi, c))
    rep.fields = {"kind": c.system, **rep.fields}
    rep.artifact = format_certificate(c)
    return rep


def cmd_extract(a) -> Report:
    phi = _load_qbf(a.qbf)
    m = extract(phi, _load_cert(a.cert))
    ok, cex = validate_countermodel(phi, m, a.cap)
    rep = Report("accepted" if ok else "rejected")
    rep.fields.update(size=m.size, degree=m.degree)
    rep.counterexample = cex
    rep.artifact = format_countermodel(m, a.tables)
    return rep


_TRANSLATIONS: dict[tuple[str, str], Callable] = {
    ("qures", "wres"): lambda phi, t: format_wres(qures_to_wres(phi, parse_qures(t))),
    ("wres", "qsa"): lambda phi, t: format_certificate(wres_to_qsa(phi, parse_wres(t))),
    ("qsa", "wres"): lambda phi, t: format_wres(qsa_to_wres(phi, _as_qsa(parse_certificate(t)))),
    ("qns", "qpc"): lambda phi, t: format_qpc(qns_to_qpc(phi, parse_certificate(t))),
    ("qpc", "qsos"): lambda phi, t: format_certificate(qpc_to_qsos(phi, parse_qpc(t))),
    ("qsa", "qsos"): lambda phi, t: format_certificate(qsa_to_qsos(_as_qsa(parse_certificate(t)))),
    ("qsos", "qsa"): lambda phi, t: format_certificate(qsos_to_qsa(phi, parse_certificate(t))),
}


def cmd_translate(a) -> Report:
    fn = _TRANSLATIONS.get((a.src, a.dst))
    if fn is None:
        pairs = ", ".join("%s->%s" % p for p in _TRANSLATIONS)
        raise UsageError("no translation %s->%s (available: %s)" % (a.src, a.dst, pairs))
    phi = _load_qbf(a.qbf)
    text = _read(a.file)
    rep = Report("translated")
    with _Timer(rep, "translate"):
        rep.artifact = fn(phi, text)
    rep.fields.update({"from": a.src, "to": a.dst})
    return rep


def cmd_search(a) -> Report:
    phi = _load_qbf(a.qbf)
    system = a.system.upper()
    rep = Report("feasible")
    with _Timer(rep, "search"):
        try:
            if a.min_qdeg:
                k, c = min_qdeg(phi, system, a.deg, a.qdeg, a.var_cap)
                rep.fields["min_qdeg"] = k
            else:
                fn = sa_search if system == "QSA" else ns_search
                c = fn(phi, SearchBudget(a.deg, a.qdeg, a.var_cap))
        except Infeasible as e:
            rep.verdict = "infeasible"
            rep.fields.update(system=system, degree_cap=a.deg if a.deg is not None else len(phi.variables),
                              qdeg_cap=a.qdeg if a.qdeg is not None else "none")
            rep.fields["reason"] = str(e)
            return rep
    rep.fields = {"system": system, **rep.fields}
    _measures(rep, verify(phi, c))
    text = format_certificate(c)
    if a.emit:
        _write(a.emit, text)
    else:
        rep.artifact = text
    return rep


def cmd_pexp(a) -> Report:
    phi = _load_qbf(a.qbf)
    r = audit(phi, _load_cert(a.pieces), a.cap)
    rep = Report("not-a-refutation" if r.ok else "inconclusive")
    rep.artifact = format_audit(r).split("\n", 1)[1]
    return rep


def _write(path: str, text: str) -> None:
    try:
        with open(path, "w") as f:
            f.write(text)
    except OSError as e:
        raise UsageError("cannot write %s: %s" % (path, e.strerror))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qbfalg", description="Algebraic refutations of false QBFs.")
    p.add_argument("--timings", action="store_true", help="append wall-clock timings to the report")
    p.add_argument("--json", metavar="FILE", help="also write the report as JSON")
    sub = p.add_subparsers(dest="command", required=True)

    def cmd(name, fn, help_):
        s = sub.add_parser(name, help=help_)
        s.set_defaults(fn=fn)
        if name != "gen":
            s.add_argument("qbf", help="QDIMACS file ('-' for stdin)")
        s.add_argument("-o", "--output", metavar="FILE", help="write the artifact here")
        return s

    s = cmd("gen", cmd_gen, "write a family instance as QDIMACS")
    s.add_argument("--family", required=True, choices=sorted(FAMILIES))
    s.add_argument("--n", type=int, required=True)

    s = cmd("check", cmd_check, "verify a certificate or a proof trace")
    s.add_argument("file")

    s = cmd("play", cmd_play, "check whether a strategy wins")
    s.add_argument("strategy")
    s.add_argument("--variant", type=int, choices=(1, 2), default=1)
    s.add_argument("--eval", action="store_true", help="strategy is a decision table for the evaluation game")
    s.add_argument("--cap", type=int, default=DEFAULT_CAP)

    s = cmd("compile", cmd_compile, "compile a winning score strategy into a certificate")
    s.add_argument("strategy")
    s.add_argument("--variant", type=int, choices=(1, 2), default=2)
    s.add_argument("--qsos", action="store_true", help="emit the sum-of-squares form (variant 1)")
    s.add_argument("--cap", type=int, default=DEFAULT_CAP)

    s = cmd("complete", cmd_complete, "certificate from a winning countermodel decision table")
    s.add_argument("tables", nargs="?")
    s.add_argument("--solve", action="store_true", help="compute a winning countermodel by minimax")
    s.add_argument("--cap", type=int, default=DEFAULT_CAP)

    s = cmd("extract", cmd_extract, "threshold countermodel of an accepted certificate")
    s.add_argument("cert")
    s.add_argument("--tables", action="store_true", help="include truth tables")
    s.add_argument("--cap", type=int, default=DEFAULT_CAP)

    s = cmd("translate", cmd_translate, "translate between proof systems")
    s.add_argument("file")
    s.add_argument("--from", dest="src", required=True, choices=("qures", "wres", "qsa", "qns", "qpc", "qsos"))
    s.add_argument("--to", dest="dst", required=True, choices=("wres", "qsa", "qpc", "qsos"))

    s = cmd("search", cmd_search, "degree-bounded certificate search")
    s.add_argument("--system", choices=("qns", "qsa"), default="qsa")
    s.add_argument("--deg", type=int, default=None, help="total degree cap (default: number of variables)")
    s.add_argument("--qdeg", type=int, default=None, help="existential degree cap for the q_u")
    s.add_argument("--min-qdeg", action="store_true", help="sweep the qdeg cap upward from 0")
    s.add_argument("--var-cap", type=int, default=DEFAULT_VAR_CAP)
    s.add_argument("--emit", metavar="FILE", help="write the certificate here")

    s = cmd("pexp", cmd_pexp, "pseudo-expectation audit of candidate pieces (Equality family)")
    s.add_argument("pieces")
    s.add_argument("--cap", type=int, default=DEFAULT_CAP)
    return p


_OK = {"accepted", "feasible", "winning", "generated", "translated", "not-a-refutation"}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    try:
        rep = a.fn(a)
    except UsageError as e:
        print("error: %s" % e, file=sys.stderr)
        return 2
    except (NotWinning, NotWinningEval) as e:
        rep = Report("losing")
        rep.fields["error"] = type(e).__name__
        rep.fields["message"] = str(e)
        rep.counterexample = e.counterexample
    except QbfAlgError as e:
        rep = Report("rejected")
        rep.fields["error"] = type(e).__name__
        rep.fields["message"] = str(e)
    try:
        if rep.artifact is not None and getattr(a, "output", None):
            _write(a.output, rep.artifact)
        sys.stdout.write(rep.text(a.timings))
        if rep.artifact is not None and not getattr(a, "output", None):
            sys.stdout.write("\n" + rep.artifact)
        if a.json:
            _write(a.json, json.dumps(rep.data(a.timings), indent=2, sort_keys=False) + "\n")
    except UsageError as e:
        print("error: %s" % e, file=sys.stderr)
        return 2
    return 0 if rep.verdict in _OK else 1


if __name__ == "__main__":
    sys.exit(main())
