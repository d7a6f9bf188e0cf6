"""Braid and slice encodings of decorated virtual link diagrams.

A word is a sequence of tokens on N ordinary ("alpha") strands together with
a palette of surface colors x1,y1,...,xg,yg (plus the reserved color ``om``).
Tokens are classical crossings, virtual crossings, and decorated over-arcs
recording where a colored surface strand passes over an alpha strand.  The
token list read left to right is the top-to-bottom slice order of the braid
and the left-to-right factor order of any matrix representation; closure is
on the right.

The module also provides the move calculus (each move is sound: it never
changes a downstream invariant), signed over-crossing counts, the first
homology class of a diagram, and the two decoration constructions that turn
a plain virtual braid into a decorated one (single-color and fresh-handle
versions).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Union

from .symplectic import H1Vector

OMEGA = "om"
ALPHA = "a"


# ---------------------------------------------------------------------------
# palette and tokens
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SymplecticPalette:
    """Ordered surface colors x1,y1,...,xg,yg plus the reserved color om."""

    genus: int

    def __post_init__(self):
        if self.genus < 0:
            raise ValueError("genus must be >= 0")

    @property
    def colors(self) -> tuple[str, ...]:
        out = []
        for i in range(1, self.genus + 1):
            out.append("x%d" % i)
            out.append("y%d" % i)
        return tuple(out)

    @property
    def all_colors(self) -> tuple[str, ...]:
        return self.colors + (OMEGA,)

    def check(self, color: str) -> str:
        if color not in self.all_colors:
            raise ValueError("color %r not in palette of genus %d"
                             % (color, self.genus))
        return color


@dataclass(frozen=True)
class Sigma:
    """Classical crossing between alpha strands index, index+1."""

    index: int
    sign: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("crossing sign must be +1 or -1")

    @property
    def support(self) -> frozenset[int]:
        return frozenset((self.index, self.index + 1))


@dataclass(frozen=True)
class Chi:
    """Virtual crossing between alpha strands index, index+1."""

    index: int

    @property
    def support(self) -> frozenset[int]:
        return frozenset((self.index, self.index + 1))


@dataclass(frozen=True)
class Lambda:
    """Surface strand of the given color passing over alpha strand."""

    strand: int
    color: str
    sign: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("over-arc sign must be +1 or -1")

    @property
    def support(self) -> frozenset[int]:
        return frozenset((self.strand,))


Token = Union[Sigma, Chi, Lambda]


@dataclass(frozen=True)
class PrismaticBraidWord:
    n_alpha: int
    palette: SymplecticPalette
    tokens: tuple[Token, ...]

    def __post_init__(self):
        if self.n_alpha < 1:
            raise ValueError("need at least one alpha strand")
        for k, tok in enumerate(self.tokens):
            if isinstance(tok, (Sigma, Chi)):
                if not 1 <= tok.index <= self.n_alpha - 1:
                    raise ValueError(
                        "token %d: crossing index %d out of range 1..%d"
                        % (k, tok.index, self.n_alpha - 1))
            elif isinstance(tok, Lambda):
                if not 1 <= tok.strand <= self.n_alpha:
                    raise ValueError(
                        "token %d: strand %d out of range 1..%d"
                        % (k, tok.strand, self.n_alpha))
                self.palette.check(tok.color)
            else:
                raise ValueError("token %d: unknown token %r" % (k, tok))

    @property
    def genus(self) -> int:
        return self.palette.genus

    def writhe(self) -> int:
        return sum(t.sign for t in self.tokens if isinstance(t, Sigma))

    def virtual_count(self) -> int:
        return sum(1 for t in self.tokens if isinstance(t, Chi))

    def permutation(self) -> tuple[int, ...]:
        """Where each initial strand position ends up at the bottom.

        Entry p[i] (0-indexed) is the final position of the strand that
        starts at position i+1.
        """
        pos = list(range(self.n_alpha))  # pos[strand] = current position
        for tok in self.tokens:
            if isinstance(tok, (Sigma, Chi)):
                i = tok.index - 1
                for s in range(self.n_alpha):
                    if pos[s] == i:
                        pos[s] = i + 1
                    elif pos[s] == i + 1:
                        pos[s] = i
        return tuple(pos)

    def closure_components(self) -> tuple[int, ...]:
        """Component id (1-based) of each initial strand position under the
        right closure; components are numbered by least member position."""
        perm = self.permutation()
        n = self.n_alpha
        comp = [0] * n
        next_id = 0
        for start in range(n):
            if comp[start]:
                continue
            next_id += 1
            s = start
            while not comp[s]:
                comp[s] = next_id
                s = perm[s]  # closing arc joins bottom position back to top
        return tuple(comp)

    def to_text(self) -> str:
        parts = ["N=%d g=%d ;" % (self.n_alpha, self.genus)]
        for tok in self.tokens:
            if isinstance(tok, Sigma):
                parts.append("S(%d)" % tok.index if tok.sign > 0
                             else "S'(%d)" % tok.index)
            elif isinstance(tok, Chi):
                parts.append("V(%d)" % tok.index)
            else:
                parts.append("O(%d,%s)" % (tok.strand, tok.color)
                             if tok.sign > 0
                             else "O'(%d,%s)" % (tok.strand, tok.color))
        return " ".join(parts)

    def to_json(self) -> dict:
        toks = []
        for tok in self.tokens:
            if isinstance(tok, Sigma):
                toks.append(["S" if tok.sign > 0 else "S'", tok.index])
            elif isinstance(tok, Chi):
                toks.append(["V", tok.index])
            else:
                toks.append(["O" if tok.sign > 0 else "O'",
                             tok.strand, tok.color])
        return {"n": self.n_alpha, "g": self.genus, "tokens": toks}

    @classmethod
    def from_json(cls, data: dict) -> "PrismaticBraidWord":
        palette = SymplecticPalette(int(data["g"]))
        tokens = []
        for row in data["tokens"]:
            head = row[0]
            if head == "S":
                tokens.append(Sigma(int(row[1]), 1))
            elif head == "S'":
                tokens.append(Sigma(int(row[1]), -1))
            elif head == "V":
                tokens.append(Chi(int(row[1])))
            elif head == "O":
                tokens.append(Lambda(int(row[1]), str(row[2]), 1))
            elif head == "O'":
                tokens.append(Lambda(int(row[1]), str(row[2]), -1))
            else:
                raise ValueError("unknown token head %r" % head)
        return cls(int(data["n"]), palette, tuple(tokens))

    def replaced(self, tokens) -> "PrismaticBraidWord":
        return PrismaticBraidWord(self.n_alpha, self.palette, tuple(tokens))


# ---------------------------------------------------------------------------
# text grammar
# ---------------------------------------------------------------------------

_HEADER_RE = re.compile(r"^N=(\d+)\s+g=(\d+)\s*;")
_TOKEN_RE = re.compile(r"(S'|S|V|O'|O)\(\s*(\d+)\s*(?:,\s*([A-Za-z]\w*)\s*)?\)")


def parse_braid(text: str) -> PrismaticBraidWord:
    """Parse the braid DSL.

    Grammar: header ``N=<int> g=<int> ;`` then tokens ``S(i)`` positive
    crossing, ``S'(i)`` negative, ``V(i)`` virtual, ``O(j,c)``/``O'(j,c)``
    over-arcs with color c in {x1..xg, y1..yg, om}.  ``#`` starts a comment.
    """
    body = " ".join(line.split("#", 1)[0] for line in text.splitlines())
    body = body.strip()
    m = _HEADER_RE.match(body)
    if not m:
        raise ValueError("expected header 'N=<int> g=<int> ;' at position 0")
    n_alpha, genus = int(m.group(1)), int(m.group(2))
    palette = SymplecticPalette(genus)
    tokens: list[Token] = []
    pos = m.end()
    while pos < len(body):
        if body[pos].isspace():
            pos += 1
            continue
        t = _TOKEN_RE.match(body, pos)
        if not t:
            raise ValueError("syntax error at position %d: %r"
                             % (pos, body[pos:pos + 12]))
        head, idx, color = t.group(1), int(t.group(2)), t.group(3)
        if head in ("S", "S'", "V"):
            if color is not None:
                raise ValueError("position %d: %s takes no color"
                                 % (pos, head))
            if head == "V":
                tokens.append(Chi(idx))
            else:
                tokens.append(Sigma(idx, 1 if head == "S" else -1))
        else:
            if color is None:
                raise ValueError("position %d: %s needs a color" % (pos, head))
            tokens.append(Lambda(idx, color, 1 if head == "O" else -1))
        pos = t.end()
    return PrismaticBraidWord(n_alpha, palette, tuple(tokens))


def recolor(word: PrismaticBraidWord, mapping: dict,
            palette: Optional[SymplecticPalette] = None) -> PrismaticBraidWord:
    """Rename over-arc colors; colors not in the mapping pass through."""
    palette = palette if palette is not None else word.palette
    out = []
    for tok in word.tokens:
        if isinstance(tok, Lambda):
            out.append(Lambda(tok.strand, mapping.get(tok.color, tok.color),
                              tok.sign))
        else:
            out.append(tok)
    return PrismaticBraidWord(word.n_alpha, palette, tuple(out))


def strand_flip(word: PrismaticBraidWord) -> PrismaticBraidWord:
    """Reverse the strand order: position i becomes position N+1-i.

    Crossings at index i move to index N-i (same sign), over-arcs on strand
    j move to strand N+1-j.  This is the relabeling automorphism of the
    prismatic braid group induced by reversing the strand numbering.  Note
    that closure invariants normalized at the first strand (the based
    closure used by the quantum evaluation) need not be preserved: the flip
    moves the base point to the other end of the braid.
    """
    n = word.n_alpha
    out: list[Token] = []
    for tok in word.tokens:
        if isinstance(tok, Sigma):
            out.append(Sigma(n - tok.index, tok.sign))
        elif isinstance(tok, Chi):
            out.append(Chi(n - tok.index))
        else:
            out.append(Lambda(n + 1 - tok.strand, tok.color, tok.sign))
    return word.replaced(out)


# ---------------------------------------------------------------------------
# slice words
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PId:
    orient: int
    color: str


@dataclass(frozen=True)
class PCross:
    sign: int


@dataclass(frozen=True)
class PVirtual:
    pass


@dataclass(frozen=True)
class PCup:
    color: str
    left_up: bool


@dataclass(frozen=True)
class PCap:
    color: str
    left_up: bool


@dataclass(frozen=True)
class POmega:
    color: str
    sign: int


Primitive = Union[PId, PCross, PVirtual, PCup, PCap, POmega]

_ARITY = {PId: (1, 1), PCross: (2, 2), PVirtual: (2, 2),
          PCup: (0, 2), PCap: (2, 0), POmega: (1, 1)}


def _prim_out(prim: Primitive, ins: tuple) -> tuple:
    """Codomain symbols of one primitive given its domain symbols."""
    if isinstance(prim, PId):
        if ins[0] != (prim.orient, prim.color):
            raise ValueError("identity mismatch: %r vs %r"
                             % (ins[0], (prim.orient, prim.color)))
        return ins
    if isinstance(prim, PCross):
        if ins[0][1] != ALPHA or ins[1][1] != ALPHA:
            raise ValueError("classical crossings join alpha strands only")
        return (ins[1], ins[0])
    if isinstance(prim, PVirtual):
        return (ins[1], ins[0])
    if isinstance(prim, PCup):
        a, b = (1, prim.color), (-1, prim.color)
        return (a, b) if prim.left_up else (b, a)
    if isinstance(prim, PCap):
        want = ((1, prim.color), (-1, prim.color))
        if not prim.left_up:
            want = (want[1], want[0])
        if ins != want:
            raise ValueError("cap mismatch: %r vs %r" % (ins, want))
        return ()
    if isinstance(prim, POmega):
        if ins[0][1] != ALPHA:
            raise ValueError("over-arcs decorate alpha strands")
        return ins
    raise ValueError("unknown primitive %r" % (prim,))


@dataclass(frozen=True)
class SliceWord:
    """Stacked horizontal tensors of primitives with matching boundaries."""

    domain: tuple[tuple[int, str], ...]
    slices: tuple[tuple[Primitive, ...], ...]
    boundaries: tuple = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        bnds = [self.domain]
        cur = self.domain
        for k, sl in enumerate(self.slices):
            need = sum(_ARITY[type(p)][0] for p in sl)
            if need != len(cur):
                raise ValueError(
                    "slice %d consumes %d symbols but boundary has %d"
                    % (k, need, len(cur)))
            out: list = []
            at = 0
            for p in sl:
                take = _ARITY[type(p)][0]
                out.extend(_prim_out(p, tuple(cur[at:at + take])))
                at += take
            cur = tuple(out)
            bnds.append(cur)
        object.__setattr__(self, "boundaries", tuple(bnds))

    @property
    def codomain(self) -> tuple:
        return self.boundaries[-1]

    def writhe(self) -> int:
        return sum(p.sign for sl in self.slices for p in sl
                   if isinstance(p, PCross))


def braid_to_slices(word: PrismaticBraidWord) -> SliceWord:
    """One slice per token; surface strands ride along as identity columns.

    The boundary is N upward alpha symbols followed by one upward column per
    palette color x1,y1,...,xg,yg, plus a single om column when the word uses
    the reserved color.
    """
    n = word.n_alpha
    tail_colors = list(word.palette.colors)
    if any(isinstance(t, Lambda) and t.color == OMEGA for t in word.tokens):
        tail_colors.append(OMEGA)
    domain = tuple([(1, ALPHA)] * n + [(1, c) for c in tail_colors])
    tail = tuple(PId(1, c) for c in tail_colors)
    slices = []
    for tok in word.tokens:
        row: list[Primitive] = []
        i = 1
        while i <= n:
            if isinstance(tok, (Sigma, Chi)) and i == tok.index:
                row.append(PCross(tok.sign) if isinstance(tok, Sigma)
                           else PVirtual())
                i += 2
            elif isinstance(tok, Lambda) and i == tok.strand:
                row.append(POmega(tok.color, tok.sign))
                i += 1
            else:
                row.append(PId(1, ALPHA))
                i += 1
        slices.append(tuple(row) + tail)
    return SliceWord(domain, tuple(slices))


def slices_to_braid(sw: SliceWord) -> PrismaticBraidWord:
    """Inverse of braid_to_slices for braid-shaped slice words."""
    n = sum(1 for (o, c) in sw.domain if c == ALPHA)
    tail = [c for (o, c) in sw.domain if c != ALPHA]
    genus = sum(1 for c in tail if c != OMEGA) // 2
    tokens: list[Token] = []
    for k, sl in enumerate(sw.slices):
        at = 1
        found = None
        for p in sl:
            if isinstance(p, PId):
                at += 1
                continue
            if found is not None:
                raise ValueError("slice %d is not braid-shaped" % k)
            if isinstance(p, PCross):
                found = Sigma(at, p.sign)
                at += 2
            elif isinstance(p, PVirtual):
                found = Chi(at)
                at += 2
            elif isinstance(p, POmega):
                found = Lambda(at, p.color, p.sign)
                at += 1
            else:
                raise ValueError("slice %d: cups/caps are not braid tokens"
                                 % k)
        if found is not None:
            tokens.append(found)
    return PrismaticBraidWord(n, SymplecticPalette(genus), tuple(tokens))


# ---------------------------------------------------------------------------
# writhe, vlk, homology class
# ---------------------------------------------------------------------------

Word = Union[PrismaticBraidWord, SliceWord]


def _as_braid(d: Word) -> PrismaticBraidWord:
    return slices_to_braid(d) if isinstance(d, SliceWord) else d


def writhe(d: Word) -> int:
    return d.writhe()


ALL_ALPHA = 0


def vlk(d: Word, over, under) -> int:
    """Signed count of classical crossings of `over` passing over `under`.

    Components are named by palette color (a surface component) or by alpha
    closure-component index 1..c; index 0 stands for the whole alpha diagram.
    Surface strands are never crossed under, so any count with a color in
    under position is 0.
    """
    word = _as_braid(d)
    comp = word.closure_components()
    ncomp = max(comp)

    def check(c):
        if isinstance(c, str):
            word.palette.check(c)
        elif isinstance(c, int):
            if not 0 <= c <= ncomp:
                raise ValueError("unknown alpha component %d" % c)
        else:
            raise ValueError("component must be a color or an index")

    check(over)
    check(under)
    if isinstance(under, str):
        return 0
    if isinstance(over, str):
        total = 0
        strand_at = list(range(word.n_alpha))  # position -> initial strand
        for tok in word.tokens:
            if isinstance(tok, Lambda):
                s = strand_at[tok.strand - 1]
                if tok.color == over and (under == ALL_ALPHA
                                          or comp[s] == under):
                    total += tok.sign
            elif isinstance(tok, (Sigma, Chi)):
                i = tok.index - 1
                strand_at[i], strand_at[i + 1] = strand_at[i + 1], \
                    strand_at[i]
        return total
    total = 0
    strand_at = list(range(word.n_alpha))
    for tok in word.tokens:
        if isinstance(tok, Sigma):
            i = tok.index - 1
            a, b = strand_at[i], strand_at[i + 1]
            if tok.sign > 0:
                ov, un = a, b
            else:
                ov, un = b, a
            if ((over == ALL_ALPHA or comp[ov] == over)
                    and (under == ALL_ALPHA or comp[un] == under)):
                total += tok.sign
            strand_at[i], strand_at[i + 1] = b, a
        elif isinstance(tok, Chi):
            i = tok.index - 1
            strand_at[i], strand_at[i + 1] = strand_at[i + 1], strand_at[i]
    return total


def homology_class(d: Word) -> H1Vector:
    """First homology class of the alpha diagram on the decorated surface:
    the x_i coordinate is -vlk(x_i, D) and the y_i coordinate -vlk(y_i, D).
    """
    word = _as_braid(d)
    g = word.genus
    coords = []
    for i in range(1, g + 1):
        coords.append(-vlk(word, "x%d" % i, ALL_ALPHA))
        coords.append(-vlk(word, "y%d" % i, ALL_ALPHA))
    return H1Vector(g, tuple(coords))


# ---------------------------------------------------------------------------
# decoration constructions
# ---------------------------------------------------------------------------

def _require_plain(vb: PrismaticBraidWord, what: str):
    if any(isinstance(t, Lambda) for t in vb.tokens):
        raise ValueError("%s expects an undecorated virtual braid" % what)


def homology_zh(vb: PrismaticBraidWord) -> PrismaticBraidWord:
    """Single-color decoration: each virtual crossing V(i) is preceded by an
    om-colored arc pair O'(i,om) O(i+1,om), joining all decorations into one
    surface component."""
    _require_plain(vb, "homology_zh")
    out: list[Token] = []
    for tok in vb.tokens:
        if isinstance(tok, Chi):
            out.append(Lambda(tok.index, OMEGA, -1))
            out.append(Lambda(tok.index + 1, OMEGA, 1))
        out.append(tok)
    return PrismaticBraidWord(vb.n_alpha, vb.palette, tuple(out))


def homotopy_zh_from_braid(vb: PrismaticBraidWord
                           ) -> tuple[int, PrismaticBraidWord]:
    """Fresh-handle decoration: the k-th virtual crossing V(i) is preceded by
    O'(i,x_k) O(i+1,y_k); the output genus is the number of virtual
    crossings.  Identifying x_k,y_k -> om recovers homology_zh token-wise."""
    _require_plain(vb, "homotopy_zh_from_braid")
    g = vb.virtual_count()
    out: list[Token] = []
    k = 0
    for tok in vb.tokens:
        if isinstance(tok, Chi):
            k += 1
            out.append(Lambda(tok.index, "x%d" % k, -1))
            out.append(Lambda(tok.index + 1, "y%d" % k, 1))
        out.append(tok)
    return g, PrismaticBraidWord(vb.n_alpha, SymplecticPalette(g), tuple(out))


# ---------------------------------------------------------------------------
# move calculus
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MoveSpec:
    """One rewriting move.

    kind: R2, R3, VT2..VT7, semi-welded, commutator, virtual-R1,
    classical-R1.  site: index into the token list where the pattern is
    anchored.  direction: "apply" rewrites/deletes the matched pattern,
    "reverse" inserts one (R2, VT2, commutator) or (de)stabilizes (R1 kinds:
    "apply" adds a strand, "reverse" removes one).  args carry insertion
    parameters.
    """

    kind: str
    site: int
    direction: str = "apply"
    args: tuple = ()

    @property
    def rotational_safe(self) -> bool:
        return self.kind not in ("virtual-R1", "classical-R1")


def _vt_kind(a: Token, b: Token) -> str:
    if isinstance(a, Lambda) and isinstance(b, Lambda):
        return "VT6"
    if isinstance(a, Lambda) or isinstance(b, Lambda):
        return "VT7"
    return "VT4"


def find_moves(word: PrismaticBraidWord,
               include_r1: bool = False) -> list[MoveSpec]:
    """Every move applicable to the word, deletions and insertions alike."""
    toks = word.tokens
    n, g = word.n_alpha, word.genus
    moves: list[MoveSpec] = []

    for k in range(len(toks) - 1):
        a, b = toks[k], toks[k + 1]
        # cancelling pairs
        if (isinstance(a, Sigma) and isinstance(b, Sigma)
                and a.index == b.index and a.sign == -b.sign):
            moves.append(MoveSpec("R2", k))
        if (isinstance(a, Lambda) and isinstance(b, Lambda)
                and a.strand == b.strand and a.color == b.color
                and a.sign == -b.sign):
            moves.append(MoveSpec("R2", k))
        if isinstance(a, Chi) and isinstance(b, Chi) and a.index == b.index:
            moves.append(MoveSpec("VT2", k))
        # far commutation
        if a.support.isdisjoint(b.support):
            moves.append(MoveSpec(_vt_kind(a, b), k))
        # over-arc sliding through its own virtual crossing
        if (isinstance(a, Lambda) and isinstance(b, Chi)
                and a.strand in b.support):
            moves.append(MoveSpec("semi-welded", k))
        if (isinstance(a, Chi) and isinstance(b, Lambda)
                and b.strand in a.support):
            moves.append(MoveSpec("semi-welded", k))

    for k in range(len(toks) - 2):
        a, b, c = toks[k], toks[k + 1], toks[k + 2]
        if (isinstance(a, Sigma) and isinstance(b, Sigma)
                and isinstance(c, Sigma)
                and a.sign == b.sign == c.sign
                and a.index == c.index
                and abs(a.index - b.index) == 1):
            moves.append(MoveSpec("R3", k))
        if (isinstance(a, Chi) and isinstance(b, Chi) and isinstance(c, Chi)
                and a.index == c.index and abs(a.index - b.index) == 1):
            moves.append(MoveSpec("VT3", k))
        if (isinstance(a, Sigma) and isinstance(b, Chi) and isinstance(c, Chi)
                and b.index == a.index + 1 and c.index == a.index):
            moves.append(MoveSpec("VT5", k))
        if (isinstance(a, Chi) and isinstance(b, Chi) and isinstance(c, Sigma)
                and a.index == b.index + 1 and c.index == b.index + 1):
            moves.append(MoveSpec("VT5", k))
        if (isinstance(a, Chi) and isinstance(b, Chi) and isinstance(c, Sigma)
                and b.index == a.index + 1 and c.index == a.index):
            moves.append(MoveSpec("VT5", k))
        if (isinstance(a, Sigma) and isinstance(b, Chi) and isinstance(c, Chi)
                and b.index == a.index - 1 and c.index == a.index):
            moves.append(MoveSpec("VT5", k))

    # commutator deletions
    pat = _commutator_pattern(g)
    if pat:
        for k in range(len(toks) - len(pat) + 1):
            for j in range(1, n + 1):
                if all(_lambda_matches(toks[k + t], j, pat[t])
                       for t in range(len(pat))):
                    moves.append(MoveSpec("commutator", k, "apply", (j,)))

    # insertions at every site
    for k in range(len(toks) + 1):
        for i in range(1, n):
            for s in (1, -1):
                moves.append(MoveSpec("R2", k, "reverse", ("S", i, s)))
            moves.append(MoveSpec("VT2", k, "reverse", (i,)))
        for j in range(1, n + 1):
            for c in word.palette.all_colors:
                for s in (1, -1):
                    moves.append(MoveSpec("R2", k, "reverse", ("O", j, c, s)))
            if g:
                moves.append(MoveSpec("commutator", k, "reverse", (j,)))

    if include_r1:
        for s in (1, -1):
            moves.append(MoveSpec("classical-R1", len(toks), "apply", (s,)))
        moves.append(MoveSpec("virtual-R1", len(toks), "apply"))
        if toks and n >= 2:
            last = toks[-1]
            rest_clear = all(n not in t.support for t in toks[:-1])
            if rest_clear and isinstance(last, Chi) and last.index == n - 1:
                moves.append(MoveSpec("virtual-R1", len(toks) - 1, "reverse"))
            if rest_clear and isinstance(last, Sigma) and last.index == n - 1:
                moves.append(MoveSpec("classical-R1", len(toks) - 1,
                                      "reverse", (last.sign,)))
    return moves


def _commutator_pattern(g: int) -> tuple[tuple[str, int], ...]:
    """(color, sign) sequence of the surface-relation arc package."""
    out: list[tuple[str, int]] = []
    for i in range(1, g + 1):
        out.extend([("x%d" % i, -1), ("y%d" % i, -1),
                    ("x%d" % i, 1), ("y%d" % i, 1)])
    return tuple(out)


def _lambda_matches(tok: Token, strand: int, spec: tuple[str, int]) -> bool:
    return (isinstance(tok, Lambda) and tok.strand == strand
            and (tok.color, tok.sign) == spec)


def apply_move(d: Word, move: MoveSpec) -> Word:
    if isinstance(d, SliceWord):
        return braid_to_slices(apply_move(slices_to_braid(d), move))
    word: PrismaticBraidWord = d
    toks = list(word.tokens)
    k = move.site
    n = word.n_alpha

    def bad(msg):
        return ValueError("%s move does not match at site %d: %s"
                          % (move.kind, k, msg))

    if k < 0:
        raise bad("site out of range")

    if move.kind in ("R2", "VT2") and move.direction == "reverse":
        if not 0 <= k <= len(toks):
            raise bad("site out of range")
        if move.kind == "VT2":
            (i,) = move.args
            ins = [Chi(i), Chi(i)]
        elif move.args[0] == "S":
            _, i, s = move.args
            ins = [Sigma(i, s), Sigma(i, -s)]
        else:
            _, j, c, s = move.args
            ins = [Lambda(j, c, s), Lambda(j, c, -s)]
        return word.replaced(toks[:k] + ins + toks[k:])

    if move.kind == "commutator" and move.direction == "reverse":
        (j,) = move.args
        ins = [Lambda(j, c, s) for (c, s) in _commutator_pattern(word.genus)]
        if not ins:
            raise bad("palette has genus 0")
        return word.replaced(toks[:k] + ins + toks[k:])

    if move.kind == "commutator":
        (j,) = move.args
        pat = _commutator_pattern(word.genus)
        if not pat or k + len(pat) > len(toks):
            raise bad("no room for the arc package")
        if not all(_lambda_matches(toks[k + t], j, pat[t])
                   for t in range(len(pat))):
            raise bad("tokens do not form the arc package")
        return word.replaced(toks[:k] + toks[k + len(pat):])

    if move.kind == "classical-R1":
        if move.direction == "apply":
            (s,) = move.args
            grown = PrismaticBraidWord(n + 1, word.palette,
                                       tuple(toks) + (Sigma(n, s),))
            return grown
        last = toks[-1] if toks else None
        if (k != len(toks) - 1 or not isinstance(last, Sigma)
                or last.index != n - 1
                or any(n in t.support for t in toks[:-1])):
            raise bad("word is not a stabilization")
        return PrismaticBraidWord(n - 1, word.palette, tuple(toks[:-1]))

    if move.kind == "virtual-R1":
        if move.direction == "apply":
            return PrismaticBraidWord(n + 1, word.palette,
                                      tuple(toks) + (Chi(n),))
        last = toks[-1] if toks else None
        if (k != len(toks) - 1 or not isinstance(last, Chi)
                or last.index != n - 1
                or any(n in t.support for t in toks[:-1])):
            raise bad("word is not a virtual stabilization")
        return PrismaticBraidWord(n - 1, word.palette, tuple(toks[:-1]))

    # the remaining kinds rewrite in place
    if move.kind in ("R2", "VT2"):
        if k + 1 >= len(toks):
            raise bad("needs two tokens")
        a, b = toks[k], toks[k + 1]
        ok = ((isinstance(a, Sigma) and isinstance(b, Sigma)
               and a.index == b.index and a.sign == -b.sign)
              or (isinstance(a, Lambda) and isinstance(b, Lambda)
                  and a.strand == b.strand and a.color == b.color
                  and a.sign == -b.sign)) if move.kind == "R2" else \
            (isinstance(a, Chi) and isinstance(b, Chi) and a.index == b.index)
        if not ok:
            raise bad("tokens do not cancel")
        return word.replaced(toks[:k] + toks[k + 2:])

    if move.kind in ("VT4", "VT6", "VT7"):
        if k + 1 >= len(toks):
            raise bad("needs two tokens")
        a, b = toks[k], toks[k + 1]
        if not a.support.isdisjoint(b.support):
            raise bad("supports overlap")
        if _vt_kind(a, b) != move.kind:
            raise bad("wrong token classes for %s" % move.kind)
        toks[k], toks[k + 1] = b, a
        return word.replaced(toks)

    if move.kind == "R3":
        if k + 2 >= len(toks):
            raise bad("needs three tokens")
        a, b, c = toks[k], toks[k + 1], toks[k + 2]
        if not (isinstance(a, Sigma) and isinstance(b, Sigma)
                and isinstance(c, Sigma) and a.sign == b.sign == c.sign
                and a.index == c.index and abs(a.index - b.index) == 1):
            raise bad("not a braid-relation triple")
        toks[k], toks[k + 1], toks[k + 2] = \
            Sigma(b.index, a.sign), Sigma(a.index, a.sign), Sigma(b.index,
                                                                  a.sign)
        return word.replaced(toks)

    if move.kind == "VT3":
        if k + 2 >= len(toks):
            raise bad("needs three tokens")
        a, b, c = toks[k], toks[k + 1], toks[k + 2]
        if not (isinstance(a, Chi) and isinstance(b, Chi)
                and isinstance(c, Chi) and a.index == c.index
                and abs(a.index - b.index) == 1):
            raise bad("not a virtual triple")
        toks[k], toks[k + 1], toks[k + 2] = Chi(b.index), Chi(a.index), \
            Chi(b.index)
        return word.replaced(toks)

    if move.kind == "VT5":
        if k + 2 >= len(toks):
            raise bad("needs three tokens")
        a, b, c = toks[k], toks[k + 1], toks[k + 2]
        if (isinstance(a, Sigma) and isinstance(b, Chi) and isinstance(c, Chi)
                and b.index == a.index + 1 and c.index == a.index):
            toks[k:k + 3] = [Chi(a.index + 1), Chi(a.index),
                             Sigma(a.index + 1, a.sign)]
        elif (isinstance(a, Chi) and isinstance(b, Chi)
              and isinstance(c, Sigma)
              and a.index == b.index + 1 and c.index == b.index + 1):
            toks[k:k + 3] = [Sigma(b.index, c.sign), Chi(b.index + 1),
                             Chi(b.index)]
        elif (isinstance(a, Chi) and isinstance(b, Chi)
              and isinstance(c, Sigma)
              and b.index == a.index + 1 and c.index == a.index):
            toks[k:k + 3] = [Sigma(a.index + 1, c.sign), Chi(a.index),
                             Chi(a.index + 1)]
        elif (isinstance(a, Sigma) and isinstance(b, Chi)
              and isinstance(c, Chi)
              and b.index == a.index - 1 and c.index == a.index):
            toks[k:k + 3] = [Chi(a.index - 1), Chi(a.index),
                             Sigma(a.index - 1, a.sign)]
        else:
            raise bad("not a mixed triple")
        return word.replaced(toks)

    if move.kind == "semi-welded":
        if k + 1 >= len(toks):
            raise bad("needs two tokens")
        a, b = toks[k], toks[k + 1]
        if (isinstance(a, Lambda) and isinstance(b, Chi)
                and a.strand in b.support):
            other = b.index + 1 if a.strand == b.index else b.index
            toks[k], toks[k + 1] = b, Lambda(other, a.color, a.sign)
        elif (isinstance(a, Chi) and isinstance(b, Lambda)
              and b.strand in a.support):
            other = a.index + 1 if b.strand == a.index else a.index
            toks[k], toks[k + 1] = Lambda(other, b.color, b.sign), a
        else:
            raise bad("no over-arc at a virtual crossing")
        return word.replaced(toks)

    raise ValueError("unknown move kind %r" % move.kind)
