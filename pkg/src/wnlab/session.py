"""Session files: declarations plus commands, executed in order into a Report.

Syntax (one statement per ``;``, ``#`` starts a comment)::

    ring A = ZZ[X,Y] / (Y^2 - 4*X) order grevlex;
    ring S = ZZ[T];
    map f : A -> S { X -> T^2, Y -> 2*T };
    primespot P in A = (2, Y) sat (X) regular;
    ideal J in A = (2, Y);
    pullback B { ring = S; ideal = (2); b = [T^2]; p = 2; };
    scan H on A { xs = [2, X, Y]; q = 3; wn = [P]; bad = []; };
    yanagihara A { p = 2; b = X; c = Y; d = 2; e = Y; expect = YanagiharaViolation; };

A command is ``VERB TARGET [{ key = value; ... }];``.
"""

from __future__ import annotations

import hashlib
import json
import re
import time
from dataclasses import dataclass, field

from sympy import factorint, isprime

from . import __version__
from .bertini import SectionContext, bertini_scan, symbolic_power
from .coeffs import GF, QQ, ZZ, ZZmod
from .criteria import (
    Certificate,
    bounded_violation_search,
    equalizer_probe,
    manaresi_witness,
    swan_check,
    yanagihara_check,
)
from .fpring import FPRing, PrimeSpot, RingMap, conductor, unramified_at
from .groebner import Ideal, certify, dim_fiberwise, ideal_power, radical_member
from .poly import GREVLEX, LEX, ParseError, PolyRing, block, split_top, _matching_close
from .pullback import PullbackSpec, certify_not_wn, fiber_product, gpi_check

SCHEMA = 1


class SessionError(ValueError):
    """Syntax or name-resolution error in a session file (exit code 2)."""

    def __init__(self, msg: str, line: int | None = None):
        super().__init__(f"line {line}: {msg}" if line else msg)
        self.line = line


# ---------------------------------------------------------------- rings


def parse_base(text: str):
    t = text.strip()
    if t == "ZZ":
        return ZZ
    if t == "QQ":
        return QQ
    m = re.fullmatch(r"GF\(\s*(\d+)\s*\)", t)
    if m:
        if not isprime(int(m.group(1))):
            raise ParseError(f"GF({m.group(1)}): only prime fields are supported")
        return GF(int(m.group(1)))
    m = re.fullmatch(r"ZZ\s*/\s*(\d+)(?:\s*\^\s*(\d+))?", t)
    if m:
        if m.group(2):
            if not isprime(int(m.group(1))):
                raise ParseError(f"ZZ/{m.group(1)}^{m.group(2)}: the base must be prime")
            return ZZmod(int(m.group(1)), int(m.group(2)))
        n = int(m.group(1))
        f = factorint(n)
        if len(f) != 1:
            raise ParseError(f"ZZ/{n}: only prime-power moduli are supported")
        (p, k), = f.items()
        return ZZmod(p, k)
    raise ParseError(f"unknown coefficient ring {t!r}")


def parse_order(text: str):
    t = text.strip()
    if t == "grevlex":
        return GREVLEX
    if t == "lex":
        return LEX
    m = re.fullmatch(r"block\(\s*(\d+)\s*(?:,\s*(lex|grevlex)\s*)?\)", t)
    if m:
        return block(int(m.group(1)), m.group(2) or "grevlex")
    raise ParseError(f"unknown monomial order {t!r}")


def _strip_group(t: str, opening: str) -> tuple[str, str]:
    """Split ``t`` (starting with ``opening``) into the group's inside and the rest."""
    t = t.strip()
    if not t.startswith(opening):
        raise ParseError(f"expected {opening!r} in {t!r}")
    end = _matching_close(t)
    if end < 0:
        raise ParseError(f"unbalanced brackets in {t!r}")
    return t[1:end], t[end + 1 :].strip()


def split_ring_text(text: str) -> tuple[str, tuple, tuple, str]:
    """``BASE[v1,...] [/ (r1, ...)] [order ORD]`` -> (base, vars, relations, order)."""
    t = " ".join(text.split())
    i = t.find("[")
    if i < 0:
        raise ParseError(f"ring {t!r} lacks a variable list")
    base = t[:i].strip()
    inside, rest = _strip_group(t[i:], "[")
    vars_ = tuple(v for v in (s.strip() for s in inside.split(",")) if v)
    rels: tuple = ()
    if rest.startswith("/"):
        inside, rest = _strip_group(rest[1:], "(")
        rels = tuple(split_top(inside))
    order = "grevlex"
    if rest:
        m = re.fullmatch(r"order\s+(.+)", rest)
        if not m:
            raise ParseError(f"unexpected {rest!r} after ring presentation")
        order = m.group(1).strip()
    return base, vars_, rels, order


def parse_ring(text: str, name: str | None = None, domain: bool = False) -> FPRing:
    base, vars_, rels, order = split_ring_text(text)
    for v in vars_:
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", v):
            raise ParseError(f"bad variable name {v!r}")
    if len(set(vars_)) != len(vars_):
        raise ParseError("duplicate variable names")
    ambient = PolyRing(parse_base(base), vars_, parse_order(order))
    return FPRing(ambient, list(rels), name=name, asserted_domain=domain)


# ---------------------------------------------------------------- statements


def _norm(text: str) -> str:
    return " ".join(text.split())


def _parse_options(body: str, line: int) -> tuple:
    opts = []
    for item in split_top(body, ";"):
        if "=" not in item:
            raise SessionError(f"expected key = value, got {item!r}", line)
        k, v = item.split("=", 1)
        k = k.strip()
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", k):
            raise SessionError(f"bad option name {k!r}", line)
        if k in dict(opts):
            raise SessionError(f"option {k!r} given twice", line)
        opts.append((k, _norm(v)))
    return tuple(opts)


def _format_options(opts: tuple) -> str:
    if not opts:
        return ""
    return " { " + " ".join(f"{k} = {v};" for k, v in opts) + " }"


def as_list(v: str) -> list[str]:
    t = v.strip()
    if t[:1] in "([" and _matching_close(t) == len(t) - 1:
        t = t[1:-1]
    return split_top(t)


@dataclass(frozen=True)
class RingDecl:
    name: str
    text: str
    domain: bool = False
    line: int = field(default=0, compare=False)

    declares = property(lambda self: [self.name])
    refs = property(lambda self: [])

    def __str__(self):
        base, vars_, rels, order = split_ring_text(self.text)
        s = f"ring {self.name} = {base}[{','.join(vars_)}]"
        if rels:
            s += " / (" + ", ".join(rels) + ")"
        if order != "grevlex":
            s += f" order {order}"
        return s + (" domain" if self.domain else "") + ";"


@dataclass(frozen=True)
class MapDecl:
    name: str
    source: str
    target: str
    images: tuple
    line: int = field(default=0, compare=False)

    declares = property(lambda self: [self.name])
    refs = property(lambda self: [self.source, self.target])

    def __str__(self):
        body = ", ".join(f"{v} -> {im}" for v, im in self.images)
        return f"map {self.name} : {self.source} -> {self.target} {{ {body} }};"


@dataclass(frozen=True)
class SpotDecl:
    name: str
    ring: str
    gens: tuple
    sat: str | None = None
    regular: bool = False
    line: int = field(default=0, compare=False)

    declares = property(lambda self: [self.name])
    refs = property(lambda self: [self.ring])

    def __str__(self):
        s = f"primespot {self.name} in {self.ring} = ({', '.join(self.gens)})"
        if self.sat is not None:
            s += f" sat ({self.sat})"
        return s + (" regular" if self.regular else "") + ";"


@dataclass(frozen=True)
class IdealDecl:
    name: str
    ring: str
    gens: tuple
    line: int = field(default=0, compare=False)

    declares = property(lambda self: [self.name])
    refs = property(lambda self: [self.ring])

    def __str__(self):
        return f"ideal {self.name} in {self.ring} = ({', '.join(self.gens)});"


@dataclass(frozen=True)
class PullbackDecl:
    name: str
    options: tuple
    line: int = field(default=0, compare=False)

    declares = property(lambda self: [self.name, f"{self.name}_incl"])
    refs = property(lambda self: [dict(self.options).get("ring", "")])

    def __str__(self):
        return f"pullback {self.name}{_format_options(self.options)};"


@dataclass(frozen=True)
class ScanDecl:
    name: str
    ring: str
    options: tuple
    line: int = field(default=0, compare=False)

    declares = property(lambda self: [self.name])

    @property
    def refs(self):
        o = dict(self.options)
        return [self.ring] + as_list(o.get("wn", "[]")) + as_list(o.get("bad", "[]"))

    def __str__(self):
        return f"scan {self.name} on {self.ring}{_format_options(self.options)};"


@dataclass(frozen=True)
class Command:
    verb: str
    target: str
    options: tuple = ()
    line: int = field(default=0, compare=False)

    declares = property(lambda self: [])

    @property
    def refs(self):
        out = [self.target]
        o = dict(self.options)
        if self.verb == "unramified" and "at" in o:
            out.append(o["at"])
        return out

    def __str__(self):
        return f"{self.verb} {self.target}{_format_options(self.options)};"

    def opt(self, key, default=None):
        return dict(self.options).get(key, default)


VERBS = (
    "gb", "member", "radmember", "satpow", "swan", "yanagihara", "manaresi",
    "equalizer", "search", "conductor", "unramified", "gpi", "certify",
    "fiberdim", "kernel", "scan",
)

_NAME = r"[A-Za-z_][A-Za-z0-9_]*"


def _split_statements(text: str) -> list[tuple[str, int]]:
    """Statements with their starting line; a ``}`` closing to depth 0 also ends one."""
    out, cur, depth, line, start = [], [], 0, 1, None
    for raw in text.splitlines():
        code = raw.split("#", 1)[0]
        for ch in code:
            if start is None and not ch.isspace() and ch != ";":
                start = line
            if ch in "([{":
                depth += 1
            elif ch in ")]}":
                depth -= 1
                if depth < 0:
                    raise SessionError("unbalanced closing bracket", line)
            if ch == ";" and depth == 0:
                if "".join(cur).strip():
                    out.append(("".join(cur).strip(), start))
                cur, start = [], None
                continue
            cur.append(ch)
            if ch == "}" and depth == 0:
                out.append(("".join(cur).strip(), start))
                cur, start = [], None
        cur.append(" ")
        line += 1
    if depth:
        raise SessionError("unclosed bracket", start)
    if "".join(cur).strip():
        raise SessionError("missing ';' at end of statement", start)
    return out


def _trailing_block(rest: str, line: int) -> tuple[str, str | None]:
    rest = rest.strip()
    i = rest.find("{")
    if i < 0:
        return rest, None
    if not rest.endswith("}") or _matching_close(rest[i:]) != len(rest) - i - 1:
        raise SessionError("text after closing brace", line)
    return rest[:i].strip(), rest[i + 1 : -1]


def parse_statement(text: str, line: int = 0):
    t = _norm(text)
    m = re.match(rf"({_NAME})\s*(.*)$", t)
    if not m:
        raise SessionError(f"cannot parse {t!r}", line)
    head, rest = m.group(1), m.group(2)
    try:
        if head == "ring":
            m = re.fullmatch(rf"({_NAME})\s*=\s*(.+)", rest)
            if not m:
                raise SessionError("expected: ring NAME = BASE[vars] ...", line)
            body, domain = m.group(2), False
            if body.endswith(" domain"):
                body, domain = body[: -len(" domain")], True
            split_ring_text(body)
            return RingDecl(m.group(1), _norm(body), domain, line)
        if head == "map":
            header, block_ = _trailing_block(rest, line)
            m = re.fullmatch(rf"({_NAME})\s*:\s*({_NAME})\s*->\s*({_NAME})", header)
            if not m or block_ is None:
                raise SessionError("expected: map NAME : SRC -> DST { v -> f, ... }", line)
            images = []
            for item in split_top(block_):
                if "->" not in item:
                    raise SessionError(f"expected v -> f, got {item!r}", line)
                v, im = item.split("->", 1)
                images.append((v.strip(), _norm(im)))
            return MapDecl(m.group(1), m.group(2), m.group(3), tuple(images), line)
        if head == "primespot":
            m = re.fullmatch(rf"({_NAME})\s+in\s+({_NAME})\s*=\s*(\(.*)", rest)
            if not m:
                raise SessionError("expected: primespot NAME in RING = (gens) [sat (s)] [regular]", line)
            gens, tail = _strip_group(m.group(3), "(")
            sat, regular = None, False
            if tail.startswith("sat"):
                sat, tail = _strip_group(tail[3:], "(")
                sat = _norm(sat)
            if tail == "regular":
                regular, tail = True, ""
            if tail:
                raise SessionError(f"unexpected {tail!r}", line)
            return SpotDecl(m.group(1), m.group(2), tuple(split_top(gens)), sat, regular, line)
        if head == "ideal":
            m = re.fullmatch(rf"({_NAME})\s+in\s+({_NAME})\s*=\s*(\(.*\))", rest)
            if not m:
                raise SessionError("expected: ideal NAME in RING = (gens)", line)
            return IdealDecl(m.group(1), m.group(2), tuple(as_list(m.group(3))), line)
        if head == "pullback":
            header, block_ = _trailing_block(rest, line)
            if not re.fullmatch(_NAME, header) or block_ is None:
                raise SessionError("expected: pullback NAME { ring = ...; ideal = (...); b = [...]; p = ...; }", line)
            opts = _parse_options(block_, line)
            for k in ("ring", "ideal", "b", "p"):
                if k not in dict(opts):
                    raise SessionError(f"pullback needs {k!r}", line)
            return PullbackDecl(header, opts, line)
        if head == "scan" and re.match(rf"{_NAME}\s+on\s", rest):
            header, block_ = _trailing_block(rest, line)
            m = re.fullmatch(rf"({_NAME})\s+on\s+({_NAME})", header)
            if not m or block_ is None:
                raise SessionError("expected: scan NAME on RING { xs = [...]; q = ...; }", line)
            opts = _parse_options(block_, line)
            if "xs" not in dict(opts):
                raise SessionError("scan needs xs", line)
            return ScanDecl(m.group(1), m.group(2), opts, line)
        if head in VERBS:
            header, block_ = _trailing_block(rest, line)
            if not re.fullmatch(_NAME, header):
                raise SessionError(f"expected: {head} TARGET [{{ ... }}]", line)
            opts = _parse_options(block_, line) if block_ is not None else ()
            return Command(head, header, opts, line)
    except ParseError as exc:
        raise SessionError(str(exc), line) from exc
    raise SessionError(f"unknown statement {head!r}", line)


def parse_session(text: str) -> list:
    """Parse and resolve names; raises SessionError on the first problem."""
    stmts = [parse_statement(s, line) for s, line in _split_statements(text)]
    known: set = set()
    for st in stmts:
        for r in st.refs:
            if r not in known:
                raise SessionError(f"undefined name {r!r}", st.line)
        for d in st.declares:
            if d in known:
                raise SessionError(f"name {d!r} declared twice", st.line)
            known.add(d)
    return stmts


def format_session(stmts) -> str:
    return "".join(str(s) + "\n" for s in stmts)


# ---------------------------------------------------------------- report


@dataclass
class Entry:
    command: str
    verdict: str
    status: int = 0  # 0 ok, 1 failure, 2 parse, 3 invariant breach
    certificates: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    error: str | None = None
    seconds: float = 0.0
    ideal_ring: tuple | None = field(default=None, repr=False)  # (ring, modulo relations?)

    def to_json(self, timing: bool = False) -> dict:
        out = {"command": self.command, "verdict": self.verdict, "ok": self.status == 0}
        if self.certificates:
            out["certificates"] = [c.to_json() for c in self.certificates]
        if self.details:
            out["details"] = self.details
        if self.error:
            out["error"] = self.error
        if timing:
            out["seconds"] = round(self.seconds, 4)
        return out

    def text(self) -> str:
        tag = "ok" if self.status == 0 else "FAIL"
        s = f"[{tag}] {self.command}\n      -> {self.verdict}"
        if self.error:
            s += f"\n      error: {self.error}"
        return s


@dataclass
class Report:
    digest: str
    entries: list = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return max((e.status for e in self.entries), default=0)

    def to_json(self, timing: bool = False) -> dict:
        return {
            "schema": SCHEMA,
            "tool": "wnlab",
            "version": __version__,
            "input_sha256": self.digest,
            "entries": [e.to_json(timing) for e in self.entries],
        }

    def dumps(self, timing: bool = False) -> str:
        return json.dumps(self.to_json(timing), sort_keys=True, indent=2) + "\n"

    def text(self, verbose: bool = False) -> str:
        lines = []
        for e in self.entries:
            lines.append(e.text())
            if verbose:
                for c in e.certificates:
                    lines.append(f"      certificate: {c}")
                for k, v in sorted(e.details.items()):
                    lines.append(f"      {k}: {v}")
        lines.append(f"{len(self.entries)} entries, exit code {self.exit_code}")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- execution


class CommandFailed(Exception):
    def __init__(self, msg: str, status: int = 1):
        super().__init__(msg)
        self.status = status


@dataclass
class NamedIdeal:
    ring: FPRing
    ideal: Ideal


@dataclass
class ScanSetup:
    ctx: SectionContext
    q: int | None


def _tf(b: bool) -> str:
    return "true" if b else "false"


class Session:
    def __init__(self):
        self.env: dict = {}
        self.ideal_valued: list = []  # ring of the last ideal-valued verdict

    # -- lookup
    def ring(self, name: str) -> FPRing:
        x = self.env[name]
        if isinstance(x, FPRing):
            return x
        if hasattr(x, "ring") and isinstance(x.ring, FPRing):
            return x.ring
        raise CommandFailed(f"{name} is not a ring", 2)

    def get(self, name: str, kind, what: str):
        x = self.env[name]
        if not isinstance(x, kind):
            raise CommandFailed(f"{name} is not a {what}", 2)
        return x

    def ideal_of(self, name: str) -> tuple[FPRing, Ideal]:
        x = self.env[name]
        if isinstance(x, NamedIdeal):
            return x.ring, x.ideal
        if isinstance(x, PrimeSpot):
            return x.ring, x.ideal()
        R = self.ring(name)
        return R, R.defining

    # -- declarations
    def declare(self, st) -> Entry | None:
        if isinstance(st, RingDecl):
            self.env[st.name] = parse_ring(st.text, st.name, st.domain)
        elif isinstance(st, MapDecl):
            src, dst = self.ring(st.source), self.ring(st.target)
            given = dict(st.images)
            missing = [v for v in src.vars if v not in given]
            extra = [v for v in given if v not in src.vars]
            if missing or extra:
                raise CommandFailed(f"map {st.name}: missing {missing} / unknown {extra} source variables", 2)
            self.env[st.name] = RingMap(src, dst, [dst(given[v]) for v in src.vars], name=st.name)
        elif isinstance(st, SpotDecl):
            R = self.ring(st.ring)
            self.env[st.name] = PrimeSpot(R, list(st.gens), sat=st.sat, name=st.name, regular=st.regular)
        elif isinstance(st, IdealDecl):
            R = self.ring(st.ring)
            self.env[st.name] = NamedIdeal(R, R.ideal(list(st.gens)))
        elif isinstance(st, PullbackDecl):
            return self._pullback(st)
        elif isinstance(st, ScanDecl):
            o = dict(st.options)
            R = self.ring(st.ring)
            wn = [self.get(n, PrimeSpot, "prime spot") for n in as_list(o.get("wn", "[]"))]
            bad = [self.get(n, PrimeSpot, "prime spot") for n in as_list(o.get("bad", "[]"))]
            maximal = as_list(o["maximal"]) if "maximal" in o else None
            ctx = SectionContext(R, as_list(o["xs"]), bad, wn, maximal)
            self.env[st.name] = ScanSetup(ctx, int(o.get("q", "0")) or None)
        return None

    def _pullback(self, st: PullbackDecl) -> Entry:
        o = dict(st.options)
        R = self.ring(o["ring"])
        spec = PullbackSpec(R, as_list(o["ideal"]), as_list(o["b"]), int(o["p"]), int(o.get("e_bound", "3")))
        gens = as_list(o["gens"]) if "gens" in o else None
        names = as_list(o["names"]) if "names" in o else None
        probe = int(o["probe"]) if "probe" in o else None
        pb = fiber_product(spec, gens=gens, names=names, probe_degree=probe)
        pb.ring.name = st.name
        pb.inclusion.name = f"{st.name}_incl"
        self.env[st.name] = pb
        self.env[f"{st.name}_incl"] = pb.inclusion
        details = {"generators": [str(g) for g in pb.gens], "map": str(pb.inclusion), "transcript": list(pb.transcript)}
        return Entry(str(st), pb.ring.presentation(), details=details)

    # -- commands
    def command(self, c: Command) -> Entry:
        fn = getattr(self, f"_cmd_{c.verb}")
        verdict, certs, details = fn(c)
        for cert in certs:
            if not cert.verify():
                raise CommandFailed(f"certificate {cert} failed re-verification", 3)
        ideal_ring = self.ideal_valued.pop() if self.ideal_valued else None
        return Entry(str(c), verdict, certificates=certs, details=details, ideal_ring=ideal_ring)

    def _elem(self, c: Command, R: FPRing, key: str = "elem"):
        v = c.opt(key)
        if v is None:
            raise CommandFailed(f"{c.verb} needs {key} = ...", 2)
        return R(v)

    def _cmd_gb(self, c):
        R, I = self.ideal_of(c.target)
        G = I.gb()
        ok = certify(G)
        self.ideal_valued.append((R, False))
        if not ok:
            raise CommandFailed("Groebner basis failed its S/G-pair certificate", 3)
        return "{" + ", ".join(str(g) for g in G.basis) + "}", [], {"basis": [str(g) for g in G.basis], "certified": ok}

    def _cmd_member(self, c):
        R, I = self.ideal_of(c.target)
        return _tf(I.contains(self._elem(c, R))), [], {}

    def _cmd_radmember(self, c):
        R, I = self.ideal_of(c.target)
        return _tf(radical_member(self._elem(c, R), I)), [], {}

    def _cmd_satpow(self, c):
        P = self.get(c.target, PrimeSpot, "prime spot")
        n = int(c.opt("n", "2"))
        sp = symbolic_power(P, n)
        x = self._elem(c, P.ring)
        ordinary = P.ring.ideal(ideal_power(Ideal(P.ring.ambient, P.gens), n).gens)
        details = {
            "symbolic_power": [str(g) for g in sp.ideal.gb().basis],
            "ordinary_power_member": _tf(ordinary.contains(x)),
            "saturation_steps": sp.steps,
        }
        return _tf(sp.ideal.contains(x)), [], details

    def _cmd_swan(self, c):
        R = self.ring(c.target)
        cert = swan_check(R, self._elem(c, R, "b"), self._elem(c, R, "c"))
        return cert.kind, [cert], {}

    def _cmd_yanagihara(self, c):
        R = self.ring(c.target)
        p = int(c.opt("p", "0"))
        args = [self._elem(c, R, k) for k in "bcde"]
        cert = yanagihara_check(R, p, *args)
        return cert.kind, [cert], {}

    def _cmd_manaresi(self, c):
        phi = self.get(c.target, RingMap, "map")
        cert = manaresi_witness(phi, self._elem(c, phi.target, "s"))
        return cert.kind, [cert], {}

    def _cmd_equalizer(self, c):
        phi = self.get(c.target, RingMap, "map")
        gens = as_list(c.opt("gens")) if c.opt("gens") else None
        probes = as_list(c.opt("probes")) if c.opt("probes") else None
        cert = equalizer_probe(phi, probes, degree=int(c.opt("degree", "3")), module_gens=gens)
        return cert.kind, [cert], {}

    def _cmd_search(self, c):
        phi = self.get(c.target, RingMap, "map")
        kinds = tuple(as_list(c.opt("kinds", "[swan, yanagihara]")))
        primes = tuple(int(p) for p in as_list(c.opt("primes", "[2, 3]")))
        found = bounded_violation_search(phi.source, phi, int(c.opt("degree", "3")), int(c.opt("height", "3")), kinds, primes)
        return ("empty" if not found else f"{len(found)} violations"), found, {"count": len(found)}

    def _cmd_conductor(self, c):
        phi = self.get(c.target, RingMap, "map")
        gens = as_list(c.opt("gens", "[1]"))
        cd = conductor(phi, gens, int(c.opt("degree", "2")), int(c.opt("height", "4")))
        basis = cd.ideal.gb().basis
        self.ideal_valued.append((phi.source, True))
        details = {"generators": [str(g) for g in basis], "denominator": str(cd.denominator), "exact": cd.exact}
        if c.opt("primes"):
            primes = [int(p) for p in as_list(c.opt("primes"))]
            R = phi.source
            dR, fR = dim_fiberwise(R.defining, primes)
            dC, fC = dim_fiberwise(R.ideal(basis), primes)
            details["codim_QQ"] = dR - dC
            details["codim_mod_p"] = {str(p): fR[p] - fC[p] for p in primes}
        return "(" + ", ".join(str(g) for g in basis) + ")", [], details

    def _cmd_unramified(self, c):
        phi = self.get(c.target, RingMap, "map")
        at = c.opt("at")
        if at is None:
            raise CommandFailed("unramified needs at = PRIMESPOT", 2)
        return _tf(unramified_at(phi, self.get(at, PrimeSpot, "prime spot"))), [], {}

    def _pullback_obj(self, name):
        from .pullback import Pullback

        return self.get(name, Pullback, "pullback")

    def _cmd_gpi(self, c):
        pb = self._pullback_obj(c.target)
        g = gpi_check(pb.spec)
        return ("true" if g.verdict else "indeterminate"), [], {"exponents": {k: v for k, v in g.exponents.items()}}

    def _cmd_certify(self, c):
        pb = self._pullback_obj(c.target)
        cert = certify_not_wn(pb.ring, pb.inclusion, pb.spec.p, int(c.opt("degree", "3")), int(c.opt("height", "1")))
        return cert.kind, [cert], {}

    def _cmd_fiberdim(self, c):
        R, I = self.ideal_of(c.target)
        primes = [int(p) for p in as_list(c.opt("primes", "[2, 3]"))]
        d0, dp = dim_fiberwise(I, primes)
        verdict = f"QQ: {d0}; " + "; ".join(f"GF({p}): {dp[p]}" for p in primes)
        return verdict, [], {"QQ": d0, **{f"GF({p})": dp[p] for p in primes}}

    def _cmd_kernel(self, c):
        phi = self.get(c.target, RingMap, "map")
        R = phi.source
        self.ideal_valued.append((R, True))
        # generators of the kernel modulo the source's own relations
        basis = [g for g in (R.nf(g) for g in phi.kernel().gb().basis) if not g.is_zero()]
        return "(" + (", ".join(str(g) for g in basis) or "0") + ")", [], {}

    def _cmd_scan(self, c):
        setup = self.get(c.target, ScanSetup, "scan context")
        q = int(c.opt("q", "0")) or setup.q
        if not q:
            raise CommandFailed("scan needs q", 2)
        rep = bertini_scan(setup.ctx, q)
        return f"{rep.good_count}/{rep.total} good", [], rep.to_json()


def _expect_ok(entry: Entry, expected: str) -> bool:
    """String match, or ideal equality (modulo relations) for ideal verdicts."""
    if entry.ideal_ring is not None and expected.strip()[:1] in "({":
        from .groebner import same_ideal

        R, modulo = entry.ideal_ring

        def build(text):
            gens = [R.ambient(g) for g in as_list(text.replace("{", "(").replace("}", ")"))]
            return R.ideal(gens) if modulo else Ideal(R.ambient, gens)

        return same_ideal(build(entry.verdict), build(expected))
    return _norm(entry.verdict).lower() == _norm(expected).lower()


def execute(stmts, digest: str = "", on_entry=None) -> Report:
    """Run parsed statements in order.  A failing declaration stops the run."""
    from .fpring import IllDefinedMapError, PresentationError
    from .pullback import IncompleteGeneratorsError, Indeterminate

    sess = Session()
    report = Report(digest)
    for st in stmts:
        t0 = time.perf_counter()
        try:
            if isinstance(st, Command):
                entry = sess.command(st)
                exp = st.opt("expect")
                if exp is not None and not _expect_ok(entry, exp):
                    entry.status, entry.error = 1, f"expected {exp}"
            else:
                entry = sess.declare(st)
        except CommandFailed as exc:
            entry = Entry(str(st), "error", exc.status, error=str(exc))
        except (ParseError, SessionError) as exc:
            entry = Entry(str(st), "error", 2, error=str(exc))
        except (ValueError, RuntimeError, ArithmeticError, IllDefinedMapError, PresentationError, IncompleteGeneratorsError, Indeterminate) as exc:
            entry = Entry(str(st), "error", 1, error=f"{type(exc).__name__}: {exc}")
        if entry is not None:
            entry.seconds = time.perf_counter() - t0
            report.entries.append(entry)
            if on_entry:
                on_entry(entry)
            if entry.status and not isinstance(st, Command):
                break
    return report


def run_session_text(text: str, on_entry=None) -> Report:
    digest = hashlib.sha256(text.encode()).hexdigest()
    return execute(parse_session(text), digest, on_entry)


def run_session(path, on_entry=None) -> Report:
    with open(path, encoding="utf-8") as fh:
        return run_session_text(fh.read(), on_entry)


# ---------------------------------------------------------------- reloading


def _ring_key_elements(kind: str, has_map: bool) -> tuple:
    """Payload keys whose values live in the target ring S."""
    if kind in ("ManaresiWitness", "NotAWitness"):
        return ("s",)
    return ("a",) if has_map else ()


def certificate_from_json(d: dict) -> Certificate:
    """Rebuild a certificate from its JSON form alone, ready for ``verify()``."""
    phi = None
    if "map" in d:
        m = d["map"]
        src, dst = parse_ring(m["source"]), parse_ring(m["target"])
        phi = RingMap(src, dst, [dst(m["images"][v]) for v in src.vars])
        R = src
    else:
        R = parse_ring(d["ring"])
    in_s = _ring_key_elements(d["kind"], phi is not None)
    payload = {}
    for k, v in d["payload"].items():
        if isinstance(v, int):
            payload[k] = v
        elif k == "difference":
            payload[k] = v
        else:
            payload[k] = (phi.target if k in in_s else R)(v)
    tested = tuple(phi.target(t) for t in d.get("tested", ())) if phi else ()
    return Certificate(d["kind"], R, payload, phi=phi, assumptions=tuple(d.get("assumptions", ())), tested=tested, flags=dict(d.get("flags", {})))
