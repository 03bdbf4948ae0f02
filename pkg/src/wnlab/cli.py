"""Command-line front end: ``wn run FILE`` plus one-shot subcommands.

Every one-shot subcommand builds a tiny session from its flags and runs it
through the same executor as ``wn run``, so verdicts and JSON agree.  With
``--session FILE`` a subcommand instead runs FILE and shows only the entries
for its verb.

Exit codes: 0 success, 1 failed check or unmet expectation, 2 parse error,
3 a certificate or Groebner basis failed re-verification.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .session import Report, SessionError, certificate_from_json, run_session_text

SESSIONS_DIR = Path(__file__).with_name("sessions")


def _resolve_session(path: str) -> Path:
    p = Path(path)
    if not p.exists() and (SESSIONS_DIR / p.name).exists():
        return SESSIONS_DIR / p.name
    return p


def _opts(**kw) -> str:
    items = [f"{k} = {v};" for k, v in kw.items() if v is not None]
    return " { " + " ".join(items) + " }" if items else ""


def _bracket(v: str | None, open_="[", close="]") -> str | None:
    if v is None:
        return None
    v = v.strip()
    return v if v.startswith(open_) else f"{open_}{v}{close}"


def _map_decls(a) -> str:
    images = [s.strip() for s in a.images.split(",")]
    from .session import parse_ring

    src = parse_ring(a.source)
    if len(images) != len(src.vars):
        raise SessionError(f"{len(images)} images for {len(src.vars)} source variables")
    body = ", ".join(f"{v} -> {im}" for v, im in zip(src.vars, images))
    return f"ring R = {a.source};\nring S = {a.target};\nmap phi : R -> S {{ {body} }};\n"


def _spot(name: str, ring: str, text: str) -> str:
    t = text.strip()
    if not t.startswith("("):
        t = f"({t})"
    return f"primespot {name} in {ring} = {t};\n"


def build_session(a) -> str:
    """Session text equivalent to a one-shot invocation."""
    v = a.verb
    exp = getattr(a, "expect", None)
    if v in ("gb", "member", "radmember", "fiberdim"):
        out = f"ring R = {a.ring};\n"
        target = "R"
        if getattr(a, "ideal", None):
            out += f"ideal I in R = ({a.ideal});\n"
            target = "I"
        kw = {}
        if v in ("member", "radmember"):
            kw["elem"] = a.elem
        if v == "fiberdim":
            kw["primes"] = _bracket(a.primes)
        return out + f"{v} {target}{_opts(**kw, expect=exp)};\n"
    if v == "satpow":
        spot = f"primespot P in R = ({a.prime}) sat ({a.sat});\n"
        return f"ring R = {a.ring};\n{spot}satpow P{_opts(n=a.n, elem=a.elem, expect=exp)};\n"
    if v == "swan":
        return f"ring R = {a.ring} domain;\nswan R{_opts(b=a.b, c=a.c, expect=exp)};\n"
    if v == "yanagihara":
        return f"ring R = {a.ring} domain;\nyanagihara R{_opts(p=a.p, b=a.b, c=a.c, d=a.d, e=a.e, expect=exp)};\n"
    if v == "manaresi":
        return _map_decls(a) + f"manaresi phi{_opts(s=a.s, expect=exp)};\n"
    if v == "equalizer":
        return _map_decls(a) + f"equalizer phi{_opts(degree=a.degree, probes=_bracket(a.probes), expect=exp)};\n"
    if v == "search":
        kw = dict(kinds=_bracket(a.kinds), degree=a.degree, height=a.height, primes=_bracket(a.primes))
        return _map_decls(a) + f"search phi{_opts(**kw, expect=exp)};\n"
    if v == "conductor":
        return _map_decls(a) + f"conductor phi{_opts(gens=_bracket(a.gens), primes=_bracket(a.primes), expect=exp)};\n"
    if v == "unramified":
        return _map_decls(a) + _spot("P", "R", a.at) + f"unramified phi{_opts(at='P', expect=exp)};\n"
    if v == "kernel":
        return _map_decls(a) + f"kernel phi{_opts(expect=exp)};\n"
    if v in ("pullback", "gpi", "certify"):
        kw = dict(ring="S", ideal=_bracket(a.ideal, "(", ")"), b=_bracket(a.b), p=a.p, gens=_bracket(a.gens), names=_bracket(a.names))
        out = f"ring S = {a.ring};\npullback B{_opts(**kw)};\n"
        if v == "pullback":
            return out
        return out + f"{v} B{_opts(expect=exp)};\n"
    if v == "scan":
        out = f"ring R = {a.ring};\n"
        wn, bad = [], []
        for i, s in enumerate(a.wn or []):
            out += _spot(f"W{i}", "R", s)
            wn.append(f"W{i}")
        for i, s in enumerate(a.bad or []):
            out += _spot(f"B{i}", "R", s)
            bad.append(f"B{i}")
        out += f"scan ctx on R{_opts(xs=_bracket(a.xs), q=a.q, wn='[' + ', '.join(wn) + ']', bad='[' + ', '.join(bad) + ']')};\n"
        return out + f"scan ctx{_opts(expect=exp)};\n"
    raise SessionError(f"unknown subcommand {v}")


# ---------------------------------------------------------------- output


def _print_entry(entry, verb: str, verbose: bool, out) -> None:
    if verb == "satpow":
        print(f"member: {entry.verdict}", file=out)
        if "ordinary_power_member" in entry.details:
            print(f"ordinary power member: {entry.details['ordinary_power_member']}", file=out)
    elif verb == "scan" and "total" in entry.details:
        d = entry.details
        print(f"{entry.command}\n  q={d['q']}  good {d['good']}/{d['total']}  failed {d['failed']}", file=out)
        if verbose:
            for v in d["verdicts"]:
                tag = "good" if v["good"] else "fail"
                print(f"    {v['point']:<12} {v['element']:<16} {tag} {'; '.join(v['reasons'])}", file=out)
    else:
        print(entry.verdict, file=out)
    if entry.error:
        print(f"error: {entry.error}", file=sys.stderr)
    if verbose and verb != "scan":
        for c in entry.certificates:
            print(f"certificate: {c}", file=out)
        for k, val in sorted(entry.details.items()):
            print(f"{k}: {val}", file=out)


def _write_json(report: Report, path: str | None, timing: bool) -> None:
    if path:
        Path(path).write_text(report.dumps(timing), encoding="utf-8")


def _run_text(text: str):
    try:
        return run_session_text(text), None
    except SessionError as exc:
        return None, exc


def cmd_run(a) -> int:
    path = _resolve_session(a.file)
    text = path.read_text(encoding="utf-8")
    report, err = _run_text(text)
    if err is not None:
        print(f"{path}: parse error: {err}", file=sys.stderr)
        return 2
    sys.stdout.write(report.text(verbose=a.verbose))
    _write_json(report, a.json, a.timing)
    return report.exit_code


def cmd_verify(a) -> int:
    """Re-check every certificate in a JSON report without the session file."""
    data = json.loads(Path(a.report).read_text(encoding="utf-8"))
    bad = 0
    for entry in data.get("entries", []):
        for c in entry.get("certificates", []):
            ok = certificate_from_json(c).verify()
            bad += not ok
            if a.verbose or not ok:
                print(f"{'ok' if ok else 'FAILED'}  {c['kind']}  {entry['command']}")
    print(f"{'all certificates verified' if not bad else f'{bad} certificate(s) failed'}")
    return 3 if bad else 0


def cmd_oneshot(a) -> int:
    verb = a.verb
    if a.session:
        path = _resolve_session(a.session)
        report, err = _run_text(path.read_text(encoding="utf-8"))
        if err is not None:
            print(f"{path}: parse error: {err}", file=sys.stderr)
            return 2
        entries = [e for e in report.entries if e.command.split(" ", 1)[0] == verb]
        for e in entries:
            _print_entry(e, verb, a.verbose, sys.stdout)
        _write_json(report, a.json, a.timing)
        return max((e.status for e in entries), default=report.exit_code)
    try:
        text = build_session(a)
    except (SessionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if a.verbose:
        print(text, end="", file=sys.stderr)
    report, err = _run_text(text)
    if err is not None:
        print(f"parse error: {err}", file=sys.stderr)
        return 2
    if report.entries:
        _print_entry(report.entries[-1], verb, a.verbose, sys.stdout)
    _write_json(report, a.json, a.timing)
    return report.exit_code


# ---------------------------------------------------------------- parser


def _map_flags(p):
    p.add_argument("--source", help='source ring, e.g. "ZZ[X,Y]/(Y^2-4*X)"')
    p.add_argument("--target", help='target ring, e.g. "ZZ[T]"')
    p.add_argument("--images", help='images of the source variables, e.g. "T^2, 2*T"')


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wn", description="Weak normality lab: certificates for seminormal and weakly normal rings.")
    ap.add_argument("--log", default="WARNING", help="logging level")
    sub = ap.add_subparsers(dest="verb", required=True)

    r = sub.add_parser("run", help="run a session file")
    r.add_argument("file")
    r.add_argument("--json", metavar="OUT")
    r.add_argument("--verbose", "-v", action="store_true")
    r.add_argument("--timing", action="store_true", help="include per-entry seconds in the JSON")
    r.set_defaults(fn=cmd_run)

    v = sub.add_parser("verify", help="re-verify the certificates in a JSON report")
    v.add_argument("report")
    v.add_argument("--verbose", "-v", action="store_true")
    v.set_defaults(fn=cmd_verify)

    def one(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--session", metavar="FILE", help="run FILE and show only this verb's entries")
        p.add_argument("--expect")
        p.add_argument("--json", metavar="OUT")
        p.add_argument("--timing", action="store_true")
        p.add_argument("--verbose", "-v", action="store_true")
        p.set_defaults(fn=cmd_oneshot)
        return p

    for name, help_ in (("gb", "Groebner basis"), ("member", "ideal membership"), ("radmember", "radical membership"), ("fiberdim", "dimension over QQ and each GF(p)")):
        p = one(name, help_)
        p.add_argument("--ring", required=False)
        p.add_argument("--ideal", help="comma-separated generators")
        if name in ("member", "radmember"):
            p.add_argument("--elem")
        if name == "fiberdim":
            p.add_argument("--primes", default="2, 3")

    p = one("satpow", "membership in a symbolic power")
    p.add_argument("--ring")
    p.add_argument("--prime", help="generators of the prime")
    p.add_argument("--sat", help="element outside the prime to saturate by")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--elem")

    p = one("swan", "Swan's seminormality condition for one pair (b, c)")
    p.add_argument("--ring")
    p.add_argument("--b")
    p.add_argument("--c")

    p = one("yanagihara", "Yanagihara's condition for one tuple (p, b, c, d, e)")
    p.add_argument("--ring")
    for k in "pbcde":
        p.add_argument(f"--{k}")

    p = one("manaresi", "nilpotency of s(x)1 - 1(x)s in the tensor square")
    _map_flags(p)
    p.add_argument("--s")

    p = one("equalizer", "probe the equalizer condition on small elements")
    _map_flags(p)
    p.add_argument("--degree", type=int, default=3)
    p.add_argument("--probes")

    p = one("search", "bounded search for Swan / Yanagihara violations")
    _map_flags(p)
    p.add_argument("--degree", type=int, default=3)
    p.add_argument("--height", type=int, default=3)
    p.add_argument("--kinds", default="swan, yanagihara")
    p.add_argument("--primes", default="2, 3")

    p = one("conductor", "conductor of a finite birational extension")
    _map_flags(p)
    p.add_argument("--gens", default="1", help="module generators of the target over the source")
    p.add_argument("--primes")

    p = one("unramified", "is the extension unramified at a prime of the source")
    _map_flags(p)
    p.add_argument("--at", help="generators of the prime")

    p = one("kernel", "kernel of a ring map")
    _map_flags(p)

    for name, help_ in (("pullback", "present a fiber product"), ("gpi", "generic pure inseparability"), ("certify", "find a weak normality failure of a fiber product")):
        p = one(name, help_)
        p.add_argument("--ring")
        p.add_argument("--ideal")
        p.add_argument("--b")
        p.add_argument("--p", type=int)
        p.add_argument("--gens")
        p.add_argument("--names")

    p = one("scan", "scan hyperplane sections over P^d(F_q)")
    p.add_argument("--ring")
    p.add_argument("--xs")
    p.add_argument("--q", type=int)
    p.add_argument("--wn", action="append", help='prime spot, e.g. "(2, x) sat (x+1)"; repeatable')
    p.add_argument("--bad", action="append", help="bad prime generators; repeatable")
    return ap


def main(argv=None) -> int:
    a = build_parser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, str(a.log).upper(), logging.WARNING), format="%(levelname)s %(name)s: %(message)s")
    return a.fn(a)


if __name__ == "__main__":
    sys.exit(main())
