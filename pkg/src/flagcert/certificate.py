"""Certificates for the N - 3E identity over F_7: data, file format and verifier.

A certificate supplies six positive definite matrices ``Q_i``, six
projections ``I_i``, three tight-path weights ``c`` and one weight per
codegree expression.  The verifier computes

    S = (N - 3E) - sum_D u_D D - sum_i c_i P_i - sum_i [[ (I_i e)^T Q_i (I_i e) ]]

coordinatewise over F_7 and checks that S is non-negative, zero exactly on
the tournament-realisable graphs and positive elsewhere.

Flags and graphs in a certificate are identified by their text encodings,
not by position, so a certificate written against any enumeration order is
accepted once its fingerprints are matched against the local lists.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import TextIO

import numpy as np

from . import _bits
from .errors import CertificateError, InputError
from .exact import RationalMatrix, is_positive_definite
from .expressions import (
    TOP,
    codegree_table,
    iota_size,
    iota_table,
    root_swap_partners,
    target_vector,
    tight_path_expressions,
)
from .flags import IOTAS, TAU, flag_family
from .formats import flag_from_text, flag_to_text, fmt_q, graph_from_text, graph_to_text, header, parse_q
from .hypergraph import basis, induced_subgraph
from .lincomb import LinComb

N_IOTA = 6


def iota_dims() -> list[int]:
    from .tournaments import iota_dimensions

    return [d.dimension for d in iota_dimensions()]


@dataclass
class Certificate:
    Q: list[RationalMatrix]
    I: list[RationalMatrix]
    c: tuple[Fraction, Fraction, Fraction]
    u: dict[str, Fraction]
    flag_fingerprints: dict[str, list[str]] = field(default_factory=dict)
    graph_fingerprints: list[str] = field(default_factory=list)

    def combined(self, other: "Certificate") -> "Certificate":
        """Add Q, c and u entrywise; projections and fingerprints must coincide."""
        if self.I != other.I or self.flag_fingerprints != other.flag_fingerprints \
                or self.graph_fingerprints != other.graph_fingerprints:
            raise CertificateError("certificates differ in projections or fingerprints")
        u = dict(self.u)
        for k, v in other.u.items():
            u[k] = u.get(k, Fraction(0)) + v
        return Certificate([a + b for a, b in zip(self.Q, other.Q)], list(self.I),
                           tuple(a + b for a, b in zip(self.c, other.c)), u,
                           dict(self.flag_fingerprints), list(self.graph_fingerprints))


def local_fingerprints() -> tuple[dict[str, list[str]], list[str]]:
    flags = {t.name: [flag_to_text(f) for f in flag_family(t, 6).flags] for t in IOTAS}
    graphs = [graph_to_text(g) for g in basis(TOP).graphs]
    return flags, graphs


def zero_certificate() -> Certificate:
    """Correctly shaped certificate with every entry zero."""
    ks = [iota_size(i) for i in range(1, N_IOTA + 1)]
    ds = iota_dims()
    flags, graphs = local_fingerprints()
    Q = [RationalMatrix.zeros(k - d, k - d) if k > d else RationalMatrix.zeros(1, 1) for k, d in zip(ks, ds)]
    I = [RationalMatrix.zeros(k - d, k) for k, d in zip(ks, ds)]
    u = {ident: Fraction(0) for ident in codegree_table().identifiers}
    return Certificate(Q, I, (Fraction(0),) * 3, u, flags, graphs)


# --- serialisation -------------------------------------------------------

def _write_matrix(out: TextIO, name: str, m: RationalMatrix) -> None:
    out.write(f"[{name}]\n{m.rows} {m.cols}\n")
    for row in m.to_rows():
        out.write(" ".join(fmt_q(x) for x in row) + "\n")


def serialize_certificate(cert: Certificate, out: TextIO) -> None:
    out.write(header("certificate") + "\n")
    for i, q in enumerate(cert.Q, 1):
        _write_matrix(out, f"Q{i}", q)
    for i, m in enumerate(cert.I, 1):
        _write_matrix(out, f"I{i}", m)
    out.write("[c]\n" + "".join(fmt_q(x) + "\n" for x in cert.c))
    out.write("[u]\n")
    for k, v in cert.u.items():
        out.write(f"{k} {fmt_q(v)}\n")
    for name, fl in cert.flag_fingerprints.items():
        out.write(f"[flags:{name}]\n" + "".join(s + "\n" for s in fl))
    out.write("[graphs:F7]\n" + "".join(s + "\n" for s in cert.graph_fingerprints))


def _sections(text: str) -> dict[str, list[str]]:
    lines = text.splitlines()
    if not lines or lines[0].strip() != header("certificate"):
        raise CertificateError(f"missing header {header('certificate')!r}")
    out: dict[str, list[str]] = {}
    cur = None
    for ln in lines[1:]:
        s = ln.strip()
        if not s or s.startswith("#"):
            continue
        if s.startswith("[") and s.endswith("]"):
            cur = s[1:-1]
            if cur in out:
                raise CertificateError(f"duplicate section [{cur}]")
            out[cur] = []
        elif cur is None:
            raise CertificateError("data before the first section")
        else:
            out[cur].append(s)
    return out


def _read_matrix(name: str, body: list[str]) -> RationalMatrix:
    if not body:
        raise CertificateError(f"section [{name}] is empty")
    try:
        r, c = (int(x) for x in body[0].split())
    except ValueError:
        raise CertificateError(f"section [{name}]: bad dimension line {body[0]!r}") from None
    ents = [parse_q(x) for ln in body[1:] for x in ln.split()]
    if len(ents) != r * c:
        raise CertificateError(f"section [{name}]: expected {r * c} entries, found {len(ents)}")
    return RationalMatrix(r, c, tuple(ents))


def parse_certificate(src) -> Certificate:
    text = src.decode() if isinstance(src, (bytes, bytearray)) else (src if isinstance(src, str) else src.read())
    sec = _sections(text)
    required = [f"Q{i}" for i in range(1, 7)] + [f"I{i}" for i in range(1, 7)] + ["c", "u"] \
        + [f"flags:{t.name}" for t in IOTAS] + ["graphs:F7"]
    for name in required:
        if name not in sec:
            raise CertificateError(f"missing section [{name}]")
    Q = [_read_matrix(f"Q{i}", sec[f"Q{i}"]) for i in range(1, 7)]
    I = [_read_matrix(f"I{i}", sec[f"I{i}"]) for i in range(1, 7)]
    c = [parse_q(x) for ln in sec["c"] for x in ln.split()]
    if len(c) != 3:
        raise CertificateError(f"section [c] must hold three rationals, found {len(c)}")
    u = {}
    for ln in sec["u"]:
        parts = ln.split()
        if len(parts) != 2:
            raise CertificateError(f"section [u]: malformed line {ln!r}")
        if parts[0] in u:
            raise CertificateError(f"section [u]: duplicate identifier {parts[0]!r}")
        u[parts[0]] = parse_q(parts[1])
    flags = {t.name: list(sec[f"flags:{t.name}"]) for t in IOTAS}
    return Certificate(Q, I, tuple(c), u, flags, list(sec["graphs:F7"]))


# --- matching against local enumerations ---------------------------------

def _match_flags(sigma, texts: list[str]) -> list[int]:
    """Local index for each certificate flag (a bijection is required)."""
    fam = flag_family(sigma, 6)
    codes = []
    for s in texts:
        try:
            f = flag_from_text(s).normalized()
        except InputError as e:
            raise CertificateError(f"flags:{sigma.name}: {e}") from None
        if f.graph.n != 6:
            raise CertificateError(f"flags:{sigma.name}: {s!r} does not have 6 vertices")
        root_graph = induced_subgraph(f.graph, range(1, 6))
        g = f.graph
        if root_graph != sigma.graph:
            # the file may label the type differently; map it onto ours
            perm = next((p for p in itertools.permutations(range(1, 6))
                         if root_graph.relabel(p) == sigma.graph), None)
            if perm is None:
                raise CertificateError(f"flags:{sigma.name}: {s!r} has a root of a different type")
            g = g.relabel(list(perm) + [6])
        codes.append(g.code)
    out = fam.lookup(np.array(codes, dtype=np.uint64)).tolist() if codes else []
    if sorted(out) != list(range(len(fam))):
        raise CertificateError(f"flags:{sigma.name}: fingerprints do not match the {len(fam)} local flags")
    return out


def _match_graphs(texts: list[str]) -> list[int]:
    B = basis(TOP)
    codes = []
    for s in texts:
        try:
            g = graph_from_text(s)
        except InputError as e:
            raise CertificateError(f"graphs:F7: {e}") from None
        if g.n != TOP:
            raise CertificateError(f"graphs:F7: {s!r} does not have {TOP} vertices")
        codes.append(g.code)
    canon = _bits.canonical_codes(np.array(codes, dtype=np.uint64), TOP) if codes else []
    out = []
    for s, c in zip(texts, canon):
        try:
            out.append(B.index_of_code(int(c)))
        except KeyError:
            raise CertificateError(f"graphs:F7: {s!r} is not K4^- -free") from None
    if sorted(out) != list(range(len(B))):
        raise CertificateError(f"graphs:F7: fingerprints do not match the {len(B)} local graphs")
    return out


def _match_codegree(u: dict[str, Fraction]) -> np.ndarray:
    """Weights indexed by local codegree expression; missing ones are 0."""
    tab = codegree_table()
    fam = flag_family(TAU, 6)
    partner = root_swap_partners(fam)
    row_of = {}
    for r, a in enumerate(tab.representatives):
        row_of[a] = r
        row_of[int(partner[a])] = r
    w = [Fraction(0)] * len(tab.identifiers)
    seen = set()
    for ident, val in u.items():
        try:
            f = flag_from_text(ident, TAU)
            a = fam.index_of(f)
        except (InputError, KeyError):
            raise CertificateError(f"[u]: {ident!r} is not a 6-vertex tau-flag") from None
        r = row_of[a]
        if r in seen:
            raise CertificateError(f"[u]: {ident!r} repeats a codegree expression")
        seen.add(r)
        w[r] = val
    return np.array(w, dtype=object)


@dataclass
class Prepared:
    """A certificate translated to local indices."""

    M: list[tuple[np.ndarray, int]]
    c: tuple[Fraction, Fraction, Fraction]
    u: np.ndarray
    graph_order: list[int]


def prepare(cert: Certificate) -> Prepared:
    ks = [iota_size(i) for i in range(1, 7)]
    ds = iota_dims()
    if len(cert.Q) != 6 or len(cert.I) != 6:
        raise CertificateError("a certificate needs six Q and six I matrices")
    Ms = []
    for i, (q, m, k, d) in enumerate(zip(cert.Q, cert.I, ks, ds), 1):
        side = k - d
        if (m.rows, m.cols) != (side, k):
            raise CertificateError(f"I{i} is {m.rows}x{m.cols}, expected {side}x{k}")
        if (q.rows, q.cols) != (side, side):
            raise CertificateError(f"Q{i} is {q.rows}x{q.cols}, expected {side}x{side}")
        if not q.is_symmetric():
            raise CertificateError(f"Q{i} is not symmetric")
        pos = _match_flags(IOTAS[i - 1], cert.flag_fingerprints.get(IOTAS[i - 1].name, []))
        In, dI = m.scaled_integers()
        Qn, dQ = q.scaled_integers()
        Mc = In.T.dot(Qn).dot(In)
        local = np.empty((k, k), dtype=object)
        p = np.asarray(pos)
        local[np.ix_(p, p)] = Mc
        Ms.append((local, dI * dI * dQ))
    order = _match_graphs(cert.graph_fingerprints)
    return Prepared(Ms, tuple(Fraction(x) for x in cert.c), _match_codegree(cert.u), order)


def assemble_rhs(cert: Certificate | Prepared) -> LinComb:
    """Slack S over F_7 in local graph order."""
    p = cert if isinstance(cert, Prepared) else prepare(cert)
    S = target_vector()
    tab = codegree_table()
    nz = [r for r, x in enumerate(p.u) if x]
    if nz:
        den = lcm(*(p.u[r].denominator for r in nz))
        coef = np.array([int(p.u[r] * den) for r in nz], dtype=object)
        num = coef.dot(tab.rows[nz].astype(object))
        S = S - LinComb.from_int_array(S.basis_id, num, den * tab.denominator)
    for ci, P in zip(p.c, tight_path_expressions()):
        if ci:
            S = S - ci * P
    for i, (M, d) in enumerate(p.M, 1):
        if any(x != 0 for x in M.flat):
            S = S - iota_table(i).quadratic(M, d)
    return S


@dataclass
class Verdict:
    psd_ok: bool
    positivity_ok: bool
    slack_ok: bool
    support_ok: bool
    zero: list[int]
    positive: list[int]
    negative: list[int]
    slack: LinComb
    messages: list[str]

    @property
    def passed(self) -> bool:
        return self.psd_ok and self.positivity_ok and self.slack_ok and self.support_ok

    def summary(self) -> dict:
        B = basis(TOP)
        worst = None
        if self.negative:
            j = min(self.negative, key=lambda g: self.slack[g])
            worst = {"graph": graph_to_text(B[j]), "index": j, "slack": fmt_q(self.slack[j])}
        return {
            "pass": self.passed,
            "psd_ok": self.psd_ok,
            "positivity_ok": self.positivity_ok,
            "slack_ok": self.slack_ok,
            "support_ok": self.support_ok,
            "zero_slack": len(self.zero),
            "positive_slack": len(self.positive),
            "negative_slack": len(self.negative),
            "most_negative": worst,
            "messages": list(self.messages),
        }


def verify_certificate(cert: Certificate) -> Verdict:
    from .tournaments import realizable_indices

    msgs = []
    psd = True
    for i, q in enumerate(cert.Q, 1):
        if not (q.rows == q.cols and q.is_symmetric() and is_positive_definite(q)):
            psd = False
            msgs.append(f"Q{i} is not positive definite")
    p = prepare(cert)
    pos = all(x > 0 for x in p.c) and all(x > 0 for x in p.u)
    if not pos:
        bad_c = [i for i, x in enumerate(p.c) if not x > 0]
        bad_u = sum(1 for x in p.u if not x > 0)
        msgs.append(f"non-positive weights: c indices {bad_c}, {bad_u} codegree weights")
    S = assemble_rhs(p)
    n = len(basis(TOP))
    vals = S.to_dense(n)
    zero = [g for g in range(n) if vals[g] == 0]
    positive = [g for g in range(n) if vals[g] > 0]
    negative = [g for g in range(n) if vals[g] < 0]
    slack_ok = not negative
    if negative:
        msgs.append(f"negative slack on {len(negative)} graphs")
    real = set(realizable_indices(TOP))
    support_ok = set(zero) == real and len(positive) == n - len(real)
    if not support_ok:
        msgs.append(f"slack vanishes on {len(zero)} graphs; expected exactly the {len(real)} realisable ones")
    return Verdict(psd, pos, slack_ok, support_ok, zero, positive, negative, S, msgs)
