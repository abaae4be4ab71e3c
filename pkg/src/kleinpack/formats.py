"""Text formats: packing files, Schottky group configurations and CSV tables.

Packing file, version 1::

    #kleinpack-packing 1
    source apollonian
    backing exact
    root -1 2 2 3
    cutoff 10
    period none
    circles 8
    generators 1
    adjacency 13
    checksum <sha256 of the normalized body>
    end
    curv cocurv mx my word        (one line per circle, then per generator)
    i j shift                      (one line per tangent pair)

Exact numbers are written as ``p/q`` (or plain integers), floats with
``repr``.  Empty words are written as ``.``.  The checksum covers the body
with runs of whitespace collapsed, so re-spaced files still verify.
"""

from __future__ import annotations

import csv
import hashlib
import io
import math
from fractions import Fraction

from .apollonian import Packing
from .inversive import InversiveCircle, MobiusMap
from .schottky import Disk, SchottkyGroup, standard_pairing

MAGIC = "#kleinpack-packing"
VERSION = "1"


class FormatError(ValueError):
    """Malformed input; the message names the offending line."""


def format_number(x) -> str:
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return repr(float(x))


def parse_number(tok: str, exact: bool):
    if "/" in tok:
        num, den = tok.split("/")
        return Fraction(int(num), int(den))
    if exact:
        try:
            return int(tok)
        except ValueError:
            pass
    return float(tok)


def _body_lines(p: Packing):
    out = []
    for c, w in zip(p.circles, p.words):
        out.append(_circle_record(c, w or "."))
    for c in p.generators:
        out.append(_circle_record(c, "."))
    for i, j, s in p.adjacency:
        out.append(f"{i} {j} {s}")
    return out


def _circle_record(c: InversiveCircle, word: str) -> str:
    return " ".join(format_number(v) for v in (c.curv, c.cocurv, c.mx, c.my)) + " " + word


def _checksum(lines) -> str:
    h = hashlib.sha256()
    for line in lines:
        h.update((" ".join(line.split()) + "\n").encode())
    return h.hexdigest()


def dumps_packing(p: Packing) -> str:
    body = _body_lines(p)
    root = "none" if p.root is None else " ".join(format_number(x) for x in p.root)
    period = "none" if p.period is None else " ".join(format_number(x) for x in p.period)
    cutoff = "inf" if p.cutoff == math.inf else format_number(p.cutoff)
    header = [
        f"{MAGIC} {VERSION}",
        f"source {p.source}",
        f"backing {p.backing}",
        f"root {root}",
        f"cutoff {cutoff}",
        f"period {period}",
        f"circles {len(p.circles)}",
        f"generators {len(p.generators)}",
        f"adjacency {len(p.adjacency)}",
        f"checksum {_checksum(body)}",
        "end",
    ]
    return "\n".join(header + body) + "\n"


def write_packing(p: Packing, path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(dumps_packing(p))


def loads_packing(text: str, name: str = "<string>") -> Packing:
    lines = text.splitlines()

    def fail(lineno, msg):
        raise FormatError(f"{name}: line {lineno}: {msg}")

    if not lines or not lines[0].split() or lines[0].split()[0] != MAGIC:
        fail(1, "not a kleinpack packing file")
    head = lines[0].split()
    if len(head) != 2 or head[1] != VERSION:
        fail(1, f"unsupported format version {head[1:]} (expected {VERSION})")

    header = {}
    i = 1
    while True:
        if i >= len(lines):
            fail(i + 1, "header is not terminated by 'end'")
        toks = lines[i].split()
        i += 1
        if not toks:
            continue
        if toks[0] == "end":
            break
        header[toks[0]] = (toks[1:], i)

    def field(key):
        if key not in header:
            fail(i, f"header is missing '{key}'")
        return header[key]

    backing = field("backing")[0]
    if backing not in (["exact"], ["float"]):
        fail(field("backing")[1], f"unknown backing {backing}")
    exact = backing == ["exact"]
    try:
        counts = {k: int(field(k)[0][0]) for k in ("circles", "generators", "adjacency")}
    except (ValueError, IndexError):
        fail(i, "bad record counts in header")
    numbered = [(n + 1, ln) for n, ln in enumerate(lines) if n >= i and ln.strip()]
    need = sum(counts.values())
    if len(numbered) < need:
        fail(len(lines) + 1, f"unexpected end of file: {need - len(numbered)} "
             "records missing (truncated file?)")
    if len(numbered) > need:
        fail(numbered[need][0], "unexpected data after the last record")
    body = [ln for _, ln in numbered]
    want = field("checksum")[0]
    if not want or want[0] != _checksum(body):
        fail(field("checksum")[1], "checksum mismatch")

    def circle(lineno, line):
        toks = line.split()
        if len(toks) != 5:
            fail(lineno, f"expected 'curv cocurv mx my word', got {len(toks)} fields")
        try:
            curv, cocurv, mx, my = (parse_number(t, exact) for t in toks[:4])
        except (ValueError, ZeroDivisionError):
            fail(lineno, "malformed number")
        word = "" if toks[4] == "." else toks[4]
        return InversiveCircle(cocurv, curv, mx, my), word

    circles, words, gens, adj = [], [], [], []
    n_c, n_g = counts["circles"], counts["generators"]
    for k, (lineno, line) in enumerate(numbered):
        if k < n_c:
            c, w = circle(lineno, line)
            circles.append(c)
            words.append(w)
        elif k < n_c + n_g:
            gens.append(circle(lineno, line)[0])
        else:
            toks = line.split()
            try:
                a, b, s = (int(t) for t in toks)
            except ValueError:
                fail(lineno, "expected adjacency record 'i j shift'")
            if not (0 <= a < n_c and 0 <= b < n_c):
                fail(lineno, "adjacency index out of range")
            adj.append((a, b, s))

    def numbers(key):
        toks, lineno = field(key)
        if toks == ["none"]:
            return None
        try:
            return tuple(parse_number(t, exact) for t in toks)
        except (ValueError, ZeroDivisionError):
            fail(lineno, f"malformed '{key}'")

    cutoff_tok = field("cutoff")[0]
    cutoff = math.inf if cutoff_tok == ["inf"] else parse_number(cutoff_tok[0], exact)
    source = field("source")[0][0] if "source" in header else "apollonian"
    return Packing(
        circles=tuple(circles),
        words=tuple(words),
        adjacency=tuple(adj),
        generators=tuple(gens),
        root=numbers("root"),
        cutoff=cutoff,
        period=numbers("period"),
        backing="exact" if exact else "float",
        source=source,
    )


def read_packing(path) -> Packing:
    with open(path, newline=None) as fh:
        return loads_packing(fh.read(), str(path))


# ----------------------------------------------------------------------------
# Schottky configurations
#
#   genus 2
#   pair cx cy r  cx' cy' r'  [twist t | matrix a b c d]
#
# '#' starts a comment.  Without 'matrix' the generator is the standard pairing.


def parse_schottky_config(text: str, name: str = "<string>") -> SchottkyGroup:
    genus = None
    pairs, gens = [], []
    last = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        last = lineno
        toks = line.split()
        try:
            if toks[0] == "genus":
                if genus is not None or len(toks) != 2:
                    raise FormatError("expected a single 'genus k' line")
                genus = int(toks[1])
                if genus < 1:
                    raise FormatError("genus must be at least 1")
            elif toks[0] == "pair":
                if len(toks) < 7:
                    raise FormatError("expected 'pair cx cy r cx' cy' r' ...'")
                cx, cy, r, cx2, cy2, r2 = (float(t) for t in toks[1:7])
                D, Dp = Disk(complex(cx, cy), r), Disk(complex(cx2, cy2), r2)
                rest = toks[7:]
                if not rest:
                    gam = standard_pairing(D, Dp)
                elif rest[0] == "twist" and len(rest) == 2:
                    gam = standard_pairing(D, Dp, float(rest[1]))
                elif rest[0] == "matrix" and len(rest) == 5:
                    gam = MobiusMap(*(complex(t) for t in rest[1:]))
                else:
                    raise FormatError("trailing fields must be 'twist t' or 'matrix a b c d'")
                pairs.append((D, Dp))
                gens.append(gam)
            else:
                raise FormatError(f"unknown keyword '{toks[0]}'")
        except (FormatError, ValueError) as exc:
            raise FormatError(f"{name}: line {lineno}: {exc}") from None
    if genus is None:
        raise FormatError(f"{name}: line {last + 1}: missing 'genus k' line")
    if len(pairs) != genus:
        raise FormatError(
            f"{name}: line {last + 1}: genus {genus} but {len(pairs)} pair lines"
        )
    return SchottkyGroup(tuple(pairs), tuple(gens))


def read_schottky_config(path) -> SchottkyGroup:
    with open(path) as fh:
        return parse_schottky_config(fh.read(), str(path))


def dumps_schottky_config(g: SchottkyGroup) -> str:
    lines = [f"genus {g.genus}"]
    for (D, Dp), gam in zip(g.pairs, g.generators):
        disks = " ".join(
            repr(v) for v in (D.center.real, D.center.imag, D.radius,
                              Dp.center.real, Dp.center.imag, Dp.radius)
        )
        mat = " ".join(repr(v).strip("()") for v in (gam.a, gam.b, gam.c, gam.d))
        lines.append(f"pair {disks} matrix {mat}")
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------------
# CSV


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format_number(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def count_series_csv(series) -> str:
    return csv_text(["T", "count"], series.rows())


def fit_csv(fit) -> str:
    return csv_text(
        ["exponent", "intercept", "T_min", "T_max", "n_points", "rms_residual"],
        [[fit.exponent, fit.intercept, fit.window[0], fit.window[1],
          fit.n_points, fit.rms_residual]],
    )


def prime_table_csv(rows) -> str:
    """Rows of ``(T, pi, twin_pi, distinct)``."""
    return csv_text(["T", "pi", "twin_pi", "distinct"], rows)


def write_text(text: str, path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(text)
