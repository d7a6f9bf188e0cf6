"""Worked-example catalog: frozen reference values and regression checks.

The catalog pins the package against a fixed collection of hand-transcribed
reference values: the virtual trefoil family (all four gl(m|n) evaluations,
the determinant pipeline, the two-variable specialization), the one-crossing
torus presentation in both operator bases, the Kishino-type families, and
the printed polynomials of knots whose diagrams are only available as
figures.  Entries come in two tiers:

* tier 1 (default): everything runs from data bundled here — small braid
  words evaluated directly, plus ring-level identities and symplectic ranks
  computed from transcribed polynomial text.  No figure is needed.
* tier 2 (disabled by default): entries that require a hand-encoded diagram
  transcription and heavy contraction work.  They are skipped unless
  explicitly enabled, and report "skip" when no transcription is bundled.

Each entry is a :class:`CatalogEntry` with an ``expected`` map from check
names to expected values.  Recognized check keys:

``f(m|n)``            exact polynomial text of the closure invariant
``rank`` / ``bound``  symplectic rank / genus bound of the f(1|1) value
``gap``               canonical two-variable specialization
``csw-det``           exact det(rho - I) over the t-ring
``csw-det-scaled``    the q^(-2N)-scaled determinant after t -> q^-2
``f(m|n)-contains``   monomial texts that must appear verbatim in f(m|n)
``printed-f(m|n)``    transcribed polynomial text (parsed, rank input)
``rank-of-printed``   symplectic rank each printed-f value must have
``bound-of-printed``  genus bound each printed-f value must give

Entries may also name an ``identity`` — a built-in verification routine for
relations that go beyond compare-by-key (basis bridges, substitution
identities, the Kishino rank sweep).  Identity routines are code, so they
are not available to file-loaded entries.

Catalog file format (JSON, for ``prism catalog --file``): a list of entry
objects ``{"name": str, "dsl": str, "genus": int, "tier": int,
"expected": {check: value}}``.  ``dsl`` is a braid word in the text grammar
of :mod:`prism.diagram`; it may be empty for entries whose checks need no
diagram.  Values are polynomial text, integers, or lists of monomial text
for the ``-contains`` keys.

Entries run independently; ``PRISM_THREADS`` sets the worker count, and the
result order never depends on it.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

from .bracket import _worker_count
from .burau import RingMatrix, csw_det, csw_from_presentation, parse_presentation
from .diagram import PrismaticBraidWord, SymplecticPalette, parse_braid
from .ring import (LaurentPoly, RingContext, UnitSpec, canonical_form,
                   eq_up_to_unit, parse)
from .rt import GAP_CONTEXT, GAP_UNITS, f_polynomial, gap, tangle_closure
from .symplectic import coefficient_vectors, genus_lower_bound, symplectic_rank

# ---------------------------------------------------------------------------
# reference data (the test suite keeps an independent copy and cross-checks)
# ---------------------------------------------------------------------------

TREFOIL_DSL = "N=2 g=1 ; O'(2,y1) O(1,x1) V(1) S'(1) S'(1)"
CLASSICAL_TREFOIL_DSL = "N=2 g=0 ; S'(1) S'(1) S'(1)"
UNKNOT_DSL = "N=1 g=0 ;"
# the same virtual trefoil as a bare virtual braid (no decorations), the
# form the two-variable specialization expects
GAP_TREFOIL_DSL = "N=2 g=0 ; V(1) S'(1) S'(1)"

TREFOIL_F11 = "-q^2*x1*y1^-1 - q^-2*x1 + q^2*y1^-1 + q^-2 + x1 - y1^-1"
TREFOIL_F21 = ("q^6*y1^-1 - q^5 - q^4*x1*y1^-1 + q^3 + q^2*x1 - q^-2*x1"
               " - q^2*y1^-1 - q + q^-1 + 2")
TREFOIL_F31 = ("q^10*y1^-1 - q^9 - q^7 - q^6*x1*y1^-1 + 2*q^5 + q^4*x1"
               " - q^4*y1^-1 - 2*q^3 - q^-2*x1 + 3*q^2 + q + q^-1")
TREFOIL_F22 = ("-q^-4*x1 + q^4*y1^-1 - q^3*x1*y1^-1 + q^-3*x1*y1^-1 - q^3"
               " + q^-3 - 2*q^2*x1*y1^-1 + q^2*x1 - q^-2*x1 + q^2*y1^-1"
               " - q^-2*y1^-1 + 2*q^-2 + q*x1*y1^-1 - q^-1*x1*y1^-1 + q"
               " - q^-1 + x1 - y1^-1")

TREFOIL_CSW_DET_T = "1 - t^-1*x1 + t^-2*x1 - y1^-1 + t^-1*y1^-1 - t^-2*x1*y1^-1"
TREFOIL_CSW_SCALED = "-q^-4*y1^-1 + q^-4 - q^-2*x1 + q^-2*y1^-1 - x1*y1^-1 + x1"

TREFOIL_GAP = "q^-4*w^-1 - q^-4 + q^-2*w - q^-2*w^-1 - w + 1"
TREFOIL_GAP_TABLE = "-s^2*t^2 + s^2*t + s*t^2 - s - t + 1"

# one classical crossing on a torus, written in the operator bases {x, w}
# and {x, y}; the two Alexander-type polynomials are bridged by w -> x*y
PRES2_DELTA_FIRST = "t^2 - t^2*x^-1*w + t*x^-1*w - t*x^-1 + x^-1 - w*x^-2"
PRES2_DELTA_SECOND = "t^2 - t^2*y + t*y - t*x^-1 + x^-1 - x^-1*y"
PRES2_FIRST_TEXT = (
    "gens: a, b ;\n"
    "rel: b[x^-1] a b[x^-1]~ b[x^-1 w x^-1]~ ;\n"
    "rel: b[x^-1 w] b b[x^-1 w]~ a~ ;\n"
    "omega: x = x1, w = y1 ;\n"
)
PRES2_SECOND_TEXT = (
    "gens: a, b ;\n"
    "rel: b a b~ b[y]~ ;\n"
    "rel: b[y] b b[y]~ a[x^-1]~ ;\n"
    "omega: x = x1, y = y1 ;\n"
)

# Kishino-type families: each fly contributes one diagonal 2x2 matrix,
# keyed by its two crossing signs; "{i}" is the 1-based fly index
KISHINO_BLOCKS: dict[tuple[int, int], tuple[str, str]] = {
    (1, -1): ("-q^3*x{i}^-1 + q*x{i}^-1 + q",
              "-q^3*x{i}^-1 + q*y{i}*x{i}^-1 + q*x{i}^-1"),
    (1, 1): ("q^-1",
             "q^3*y{i}*x{i}^-1 - q^3*x{i}^-1 + q*x{i}^-1 - q*y{i} + q^-1*y{i}"),
    (-1, 1): ("-q^3*x{i}^-1 + q^3 + q*x{i}^-1 - q*y{i} + q^-1*y{i}",
              "q^-1*y{i}*x{i}^-1"),
    (-1, -1): ("-q*y{i} + q^-1*y{i} + q",
               "q*y{i}*x{i}^-1 - q*y{i} + q^-1*y{i}"),
}

# genus-1 cable of the virtual trefoil: the Alexander-type polynomial and
# the gl(1|1) value agree after t -> q^-2, x1 -> x1^-1, y1 -> y1^-1 and a
# -q*x1*y1 rescale; both equal (q-1)(q+1)(x1*y1-1)^2 / (q*x1*y1)
SATELLITE_DELTA_FACTORS = ("t - 1", "1 - x1*y1", "1 - x1*y1")
SATELLITE_DELTA = "t*x1^2*y1^2 - x1^2*y1^2 - 2*t*x1*y1 + 2*x1*y1 + t - 1"
SATELLITE_F11 = ("q*x1*y1 + q*x1^-1*y1^-1 - q^-1*x1^-1*y1^-1 - q^-1*x1*y1"
                 " - 2*q + 2*q^-1")
SATELLITE_F11_FACTORS = ("q - 1", "q + 1", "x1*y1 - 1", "x1*y1 - 1")
SATELLITE_F11_SCALE = "q^-1*x1^-1*y1^-1"

# knot 3.5: its Alexander specialization is not realizable at genus 1 —
# the stabilized identity below is the witness
K35_F11 = ("-q^-3*x1^2*y1^2 + q^-3*x1^2*y1 - q^3*y1 + q^3 - q^-1*x1^2*y1"
           " - q*x1*y1 + q^-1*x1*y1 + q*y1")
K35_STABILIZED = "-p^2*z^2 + w^4"
K35_GAP_TABLE = ("-s^-3*t^-3 + s^-3*t^-1 + s^-2*t^-2 - s^-2 + s^-1*t^-3"
                 " - s^-1*t^-1 - t^-2 + 1")
K35_GAP_FACTORS = ("q - 1", "q + 1", "w - 1", "w + 1", "q^2*w - 1", "q^2*w + 1")
K35_GAP_SCALE = "q^3*w^-2"

# knot 6.70394 on a genus-2 surface: printed values with symplectic rank 4
K670394_F11 = (
    "q^-9*x1^-2*y1^-2*x2*y2^-2 - q^-9*x1^-2*y1^-1*x2*y2^-2"
    " - q^-7*x1^-2*y1^-2*x2^2*y2^-2 + q^-7*x1^-2*y1^-1*x2^2*y2^-2"
    " - q^-7*x1^-2*y1^-2*x2*y2^-2 + q^-7*x1^-2*y1^-2*x2*y2^-1"
    " + 2*q^-7*x1^-2*y1^-1*x2*y2^-2 - q^-7*x1^-2*y1^-1*x2*y2^-1"
    " - q^-7*x1^-1*y1^-1*x2*y2^-2 - q^-5*x1^-2*y1^-1*x2^2*y2^-2"
    " - q^-5*x1^-2*y1^-2*x2*y2^-1 - q^-5*x1^-2*y1^-1*x2*y2^-2"
    " + 2*q^-5*x1^-2*y1^-1*x2*y2^-1 + q^-5*x1^-1*y1^-1*x2^2*y2^-2"
    " + 2*q^-5*x1^-1*y1^-1*x2*y2^-2 - q^-5*x1^-1*y1^-1*x2*y2^-1"
    " - q^-5*y1^-1*x2*y2^-2 - q^-3*x1^-2*y1^-1*x2*y2^-1"
    " - q^-3*x1^-1*y1^-1*x2^2*y2^-2 - q^-3*x1^-1*y1^-1*x2*y2^-2"
    " + 2*q^-3*x1^-1*y1^-1*x2*y2^-1 + q^-3*y1^-1*x2^2*y2^-2"
    " + 2*q^-3*y1^-1*x2*y2^-2 - q^-3*y1^-1*x2*y2^-1 - q^-3*x2*y2^-2"
    " - q^-1*x1^-1*y1^-1*x2*y2^-1 - q^-1*y1^-1*x2^2*y2^-2"
    " - q^-1*y1^-1*x2*y2^-2 - q*y1^-1*x2*y2^-1 + 2*q^-1*y1^-1*x2*y2^-1"
    " + q^-1*x2*y2^-2 + q"
)
K670394_F21 = (
    "q^-16*x1^-2*y1^-2*x2*y2^-2 - q^-16*x1^-2*y1^-1*x2*y2^-2 + q^-16*x2*y2^-2"
    " - q^-14*x1^-2*y1^-2*x2^2*y2^-2 + q^-14*x1^-2*y1^-1*x2^2*y2^-2"
    " + q^-14*x1^-2*y1^-2*x2*y2^-1 - q^-14*x1^-2*y1^-1*x2*y2^-1"
    " - 2*q^-14*x1^-1*y1^-1*x2*y2^-2 - q^-14*y1^-1*x2*y2^-2 - q^-14*x2*y2^-2"
    " - q^-12*x1^-2*y1^-2*x2*y2^-2 - q^-12*x1^-2*y1^-2*x2*y2^-1"
    " + 2*q^-12*x1^-2*y1^-1*x2*y2^-2 + q^-12*x1^-2*y1^-1*x2*y2^-1"
    " + 2*q^-12*x1^-1*y1^-1*x2^2*y2^-2 + 2*q^-12*x1^-1*y1^-1*x2*y2^-2"
    " - 2*q^-12*x1^-1*y1^-1*x2*y2^-1 + q^-12*y1^-1*x2^2*y2^-2"
    " - q^-12*y1^-1*x2*y2^-1 - q^-10*x1^-2*y1^-1*x2^2*y2^-2"
    " + q^-10*x1^-2*y1^-2*x2*y2^-1 - 2*q^-10*x1^-1*y1^-1*x2^2*y2^-2"
    " + 2*q^-10*x1^-1*y1^-1*x2*y2^-2 + 4*q^-10*x1^-1*y1^-1*x2*y2^-1"
    " + 2*q^-10*y1^-1*x2*y2^-2 + q^-10*y1^-1*x2*y2^-1 - 3*q^-10*x2*y2^-2"
    " - q^-8*x1^-2*y1^-2*x2*y2^-1 - q^-8*x1^-2*y1^-1*x2*y2^-2"
    " - 2*q^-8*x1^-1*y1^-1*x2*y2^-2 - 4*q^-8*x1^-1*y1^-1*x2*y2^-1"
    " - q^-8*y1^-1*x2^2*y2^-2 + 3*q^-8*x2*y2^-2 + q^-6*x1^-2*y1^-1*x2*y2^-1"
    " + 4*q^-6*x1^-1*y1^-1*x2*y2^-1 - q^-6*y1^-1*x2*y2^-2 - q^-6"
    " - q^-4*x1^-2*y1^-1*x2*y2^-1 - 2*q^-4*x1^-1*y1^-1*x2*y2^-1"
    " + q^-4*y1^-1*x2*y2^-1 - q^-2*y1^-1*x2*y2^-1 + 2*q^-2 + 1"
)

# knot 4.99 (slice; the determinant tests are all trivial on it)
K499_F11 = "q^3*x1 - q^3*y1 - 2*q*x1 + q^-1*x1 + 2*q*y1 - q^-1*y1"
K499_F21 = "q^4*x1 - 3*q^4*y1 + 2*q^-2*x1 + 6*q^2*y1 - 3*x1 - 3*y1 + 1"

# 20-crossing connected sum of unknots: the gl(1|1) value vanishes and the
# gl(2|1) value has 698 terms; only a sample of those terms is transcribed
K20_F11 = "0"
K20_F21_PARTIAL_TERMS = (
    "2*q^-16", "-6*q^-14", "8*q^-12", "-14*q^-10", "22*q^-8", "-22*q^-6",
    "25*q^-4", "25*q^2", "-15*q^-2", "-14",
    "-q^-13*x2", "4*q^-11*x2", "-8*q^-9*x2", "13*q^-7*x2", "-28*q^5*x2",
    "-19*q^-5*x2", "2*q^3*x2", "24*q^-3*x2",
    "-q^-14*x2*y2^-1", "6*q^-12*x2*y2^-1", "-q^-11*x2*y2^-1",
    "-17*q^-10*x2*y2^-1", "5*q^-9*x2*y2^-1", "34*q^-8*x2*y2^-1",
    "-12*q^-7*x2*y2^-1", "-59*q^-6*x2*y2^-1",
    "q^-10*x1^-1*x2", "15*q^8*x1^-1*x2", "-5*q^-8*x1^-1*x2",
    "-20*q^6*x1^-1*x2", "11*q^-6*x1^-1*x2", "14*q^4*x1^-1*x2",
    "-15*q^-4*x1^-1*x2", "-q^2*x1^-1*x2",
    "29*q^-10*x1^-1*y1*x2*y2^-1", "49*q^-9*x1^-1*y1*x2*y2^-1",
    "-68*q^-8*x1^-1*y1*x2*y2^-1", "-91*q^-7*x1^-1*y1*x2*y2^-1",
    "126*q^-6*x1^-1*y1*x2*y2^-1", "-255*x1^-1*y1*x2*y2^-1",
)

_CTX_T1 = RingContext(("t", "x1", "y1"), genus=1)
_CTX_Q1 = RingContext(("q", "x1", "y1"), genus=1)
_CTX_ST = RingContext(("s", "t"))
_CTX_ZPW = RingContext(("z", "p", "w"))
_CTX_TXYW = RingContext(("t", "x", "y", "w"))


def _printed_ctx(genus: int) -> RingContext:
    return RingContext(("q",) + SymplecticPalette(genus).colors, genus=genus)


# ---------------------------------------------------------------------------
# entries and results
# ---------------------------------------------------------------------------

_F_KEY = re.compile(r"^f\((\d+)\|(\d+)\)$")
_PRINTED_F_KEY = re.compile(r"^printed-f\((\d+)\|(\d+)\)$")
_CONTAINS_KEY = re.compile(r"^f\((\d+)\|(\d+)\)-contains$")
_SIMPLE_KEYS = ("rank", "bound", "gap", "csw-det", "csw-det-scaled",
                "rank-of-printed", "bound-of-printed")

# extra expected-map keys each identity routine consumes
_IDENTITY_CLAIMS: dict[str, tuple[str, ...]] = {
    "gap-table-specialization": ("gap-table",),
    "presentation-bases": ("delta-first", "delta-second"),
    "satellite-substitution": (),
    "alexander-specialization-obstruction": (),
    "kishino-rank-sweep": ("rank-all-signs",),
}


def _generic_key(key: str) -> bool:
    return (key in _SIMPLE_KEYS or bool(_F_KEY.match(key))
            or bool(_PRINTED_F_KEY.match(key)) or bool(_CONTAINS_KEY.match(key)))


@dataclass(frozen=True)
class CatalogEntry:
    """One catalog item: a name, an optional braid word, a declared genus,
    and an expected map stored as (key, value) pairs (``expected_map`` gives
    it back as a dict).  ``identity`` names a built-in verification routine;
    tier-2 entries are skipped unless explicitly enabled."""

    name: str
    dsl: str
    genus: int
    expected: tuple[tuple[str, object], ...]
    tier: int = 1
    identity: Optional[str] = None

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("catalog entry needs a name")
        if self.genus < 0:
            raise ValueError("genus must be non-negative")
        if self.tier not in (1, 2):
            raise ValueError("tier must be 1 or 2")
        if self.identity is not None and self.identity not in _IDENTITY_CLAIMS:
            raise ValueError("unknown identity routine %r" % (self.identity,))
        claimed = _IDENTITY_CLAIMS.get(self.identity or "", ())
        seen = set()
        for key, _ in self.expected:
            if key in seen:
                raise ValueError("duplicate expected key %r" % key)
            seen.add(key)
            if not (_generic_key(key) or key in claimed):
                raise ValueError("unrecognized expected key %r" % key)

    @property
    def expected_map(self) -> dict[str, object]:
        return dict(self.expected)


def entry(name: str, dsl: str, genus: int, expected: Mapping[str, object],
          tier: int = 1, identity: Optional[str] = None) -> CatalogEntry:
    """Build a CatalogEntry from a plain expected dict."""
    frozen = tuple((k, tuple(v) if isinstance(v, list) else v)
                   for k, v in expected.items())
    return CatalogEntry(name, dsl, genus, frozen, tier, identity)


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one check: status is "pass", "fail", or "skip"."""

    entry: str
    check: str
    status: str
    computed: str = ""
    expected: str = ""


def _ok(entry_name: str, check: str, ok: bool, computed: str,
        expected: str) -> CheckResult:
    return CheckResult(entry_name, check, "pass" if ok else "fail",
                       computed, expected)


def _skip(entry_name: str, check: str, why: str) -> CheckResult:
    return CheckResult(entry_name, check, "skip", why)


# ---------------------------------------------------------------------------
# generic checks
# ---------------------------------------------------------------------------

def _f_value(word: PrismaticBraidWord, m: int, n: int,
             cache: dict[tuple[int, int], LaurentPoly]) -> LaurentPoly:
    if (m, n) not in cache:
        cache[(m, n)] = f_polynomial(word, (m, n))
    return cache[(m, n)]


def _run_generic(e: CatalogEntry, key: str, want,
                 word: Optional[PrismaticBraidWord],
                 cache: dict[tuple[int, int], LaurentPoly],
                 printed: dict[str, LaurentPoly]) -> Optional[CheckResult]:
    fm = _F_KEY.match(key)
    cm = _CONTAINS_KEY.match(key)
    pm = _PRINTED_F_KEY.match(key)
    needs_word = fm or cm or key in ("rank", "bound", "gap",
                                     "csw-det", "csw-det-scaled")
    if needs_word and word is None:
        return _skip(e.name, key, "no braid transcription bundled")

    if fm:
        value = _f_value(word, int(fm.group(1)), int(fm.group(2)), cache)
        target = parse(value.ctx, want)
        return _ok(e.name, key, value == target, value.to_text(), want)
    if key in ("rank", "bound"):
        f11 = _f_value(word, 1, 1, cache)
        got = (symplectic_rank(coefficient_vectors(f11)) if key == "rank"
               else genus_lower_bound(f11))
        return _ok(e.name, key, got == want, str(got), str(want))
    if key == "gap":
        value = gap(word)
        target = canonical_form(parse(GAP_CONTEXT, want), GAP_UNITS)
        return _ok(e.name, key, value == target, value.to_text(), want)
    if key == "csw-det":
        value = csw_det(word)
        return _ok(e.name, key, value == parse(value.ctx, want),
                   value.to_text(), want)
    if key == "csw-det-scaled":
        det = csw_det(word, "q^-2")
        value = det * LaurentPoly.monomial(det.ctx, 1,
                                           {"q": -2 * word.n_alpha})
        return _ok(e.name, key, value == parse(value.ctx, want),
                   value.to_text(), want)
    if cm:
        value = _f_value(word, int(cm.group(1)), int(cm.group(2)), cache)
        missing = []
        for text in want:
            term = parse(value.ctx, text)
            (ev, c), = term.terms.items()
            if value.terms.get(ev, 0) != c:
                missing.append(text)
        return _ok(e.name, key, not missing,
                   "all %d terms present" % len(want) if not missing
                   else "missing: %s" % ", ".join(missing),
                   "%d printed terms" % len(want))
    if pm:
        value = parse(_printed_ctx(e.genus), want)
        printed[key] = value
        return _ok(e.name, key, True,
                   "parses, %d terms" % len(value.terms), "parses")
    if key in ("rank-of-printed", "bound-of-printed"):
        fn = (lambda p: symplectic_rank(coefficient_vectors(p))) \
            if key == "rank-of-printed" else genus_lower_bound
        got = {name: fn(p) for name, p in sorted(printed.items())}
        return _ok(e.name, key, all(v == want for v in got.values()),
                   ", ".join("%s=%d" % kv for kv in got.items()),
                   str(want))
    return None


# ---------------------------------------------------------------------------
# identity routines
# ---------------------------------------------------------------------------

def _product(ctx: RingContext, texts: Iterable[str]) -> LaurentPoly:
    out = LaurentPoly.one(ctx)
    for text in texts:
        out = out * parse(ctx, text)
    return out


def _check_gap_table(e: CatalogEntry) -> list[CheckResult]:
    exp = e.expected_map
    table = parse(_CTX_ST, exp["gap-table"])
    spec = table.substitute({"s": "q^-2*w^-1", "t": "w"}, GAP_CONTEXT)
    got = canonical_form(spec, GAP_UNITS)
    want = canonical_form(parse(GAP_CONTEXT, exp["gap"]), GAP_UNITS)
    return [_ok(e.name, "gap-table", got == want, got.to_text(),
                want.to_text())]


def _check_presentation_bases(e: CatalogEntry) -> list[CheckResult]:
    exp = e.expected_map
    d1 = parse(_CTX_TXYW, exp["delta-first"])
    d2 = parse(_CTX_TXYW, exp["delta-second"])
    f1 = csw_from_presentation(parse_presentation(PRES2_FIRST_TEXT))
    f2 = csw_from_presentation(parse_presentation(PRES2_SECOND_TEXT))
    remap = {"x": "x1", "w": "y1", "y": "y1"}
    out = [
        _ok(e.name, "delta-first", f1 == d1.substitute(remap, ctx=_CTX_T1),
            f1.to_text(), exp["delta-first"]),
        _ok(e.name, "delta-second", f2 == d2.substitute(remap, ctx=_CTX_T1),
            f2.to_text(), exp["delta-second"]),
        _ok(e.name, "bases-bridge",
            d1.substitute({"w": "x*y"}) == d2
            and f1.substitute({"y1": "x1*y1"}) == f2,
            "w -> x*y maps first onto second", "exact equality"),
    ]
    return out


def _check_satellite(e: CatalogEntry) -> list[CheckResult]:
    exp = e.expected_map
    delta = parse(_CTX_T1, SATELLITE_DELTA)
    f11 = parse(_CTX_Q1, exp["printed-f(1|1)"])
    sub = delta.substitute({"t": "q^-2", "x1": "x1^-1", "y1": "y1^-1"},
                           ctx=_CTX_Q1)
    lhs = sub * LaurentPoly.monomial(_CTX_Q1, -1, {"q": 1, "x1": 1, "y1": 1})
    factored = (_product(_CTX_Q1, SATELLITE_F11_FACTORS)
                * parse(_CTX_Q1, SATELLITE_F11_SCALE))
    return [
        _ok(e.name, "delta-factors",
            _product(_CTX_T1, SATELLITE_DELTA_FACTORS) == delta,
            "product of %d factors" % len(SATELLITE_DELTA_FACTORS),
            SATELLITE_DELTA),
        _ok(e.name, "substitution-identity", lhs == f11, lhs.to_text(),
            exp["printed-f(1|1)"]),
        _ok(e.name, "factored-form", factored == f11, factored.to_text(),
            exp["printed-f(1|1)"]),
    ]


def _check_alexander_obstruction(e: CatalogEntry) -> list[CheckResult]:
    exp = e.expected_map
    table = parse(_CTX_ST, K35_GAP_TABLE)
    spec = table.substitute({"s": "q^-2*w^-1", "t": "w"}, GAP_CONTEXT)
    factored = (_product(GAP_CONTEXT, K35_GAP_FACTORS)
                * parse(GAP_CONTEXT, K35_GAP_SCALE))
    unit = eq_up_to_unit(factored, spec, UnitSpec(("q", "w")))
    q3 = LaurentPoly.monomial(GAP_CONTEXT, 1, {"q": 3})
    f = parse(_CTX_Q1, exp["printed-f(1|1)"])
    sub = f.substitute({"q": 1, "x1": "z*w^-1", "y1": "p*w^-1"},
                       ctx=_CTX_ZPW)
    lhs = sub * LaurentPoly.monomial(_CTX_ZPW, 1, {"w": 4})
    return [
        _ok(e.name, "specialization-unit", unit == q3,
            "none" if unit is None else unit.to_text(), q3.to_text()),
        _ok(e.name, "stabilized-identity",
            lhs == parse(_CTX_ZPW, K35_STABILIZED), lhs.to_text(),
            K35_STABILIZED),
    ]


def kishino_rank_sweep(flies: int) -> dict[tuple[tuple[int, int], ...], int]:
    """Symplectic rank of every sign assignment of a Kishino-type product.

    Each of the ``flies`` factors picks one of the four diagonal blocks;
    the diagonal product is closed by the q*(a1 - a2) rule and the rank of
    its coefficient classes is recorded per assignment.
    """
    ctx = _printed_ctx(flies)
    one = LaurentPoly.one(ctx)
    out: dict[tuple[tuple[int, int], ...], int] = {}
    for assignment in itertools.product(sorted(KISHINO_BLOCKS),
                                        repeat=flies):
        top, bottom = one, one
        for i, signs in enumerate(assignment, start=1):
            a, b = KISHINO_BLOCKS[signs]
            top = top * parse(ctx, a.format(i=i))
            bottom = bottom * parse(ctx, b.format(i=i))
        closed = tangle_closure(RingMatrix.diagonal(ctx, [top, bottom]),
                                (1, 1))
        out[assignment] = symplectic_rank(coefficient_vectors(closed))
    return out


def _check_kishino(e: CatalogEntry) -> list[CheckResult]:
    want = e.expected_map["rank-all-signs"]
    ranks = kishino_rank_sweep(e.genus)
    got = sorted(set(ranks.values()))
    return [_ok(e.name, "rank-all-signs",
                all(v == want for v in ranks.values()),
                "ranks %s over %d assignments" % (got, len(ranks)),
                str(want))]


_IDENTITIES = {
    "gap-table-specialization": _check_gap_table,
    "presentation-bases": _check_presentation_bases,
    "satellite-substitution": _check_satellite,
    "alexander-specialization-obstruction": _check_alexander_obstruction,
    "kishino-rank-sweep": _check_kishino,
}


# ---------------------------------------------------------------------------
# running
# ---------------------------------------------------------------------------

def run_entry(e: CatalogEntry) -> tuple[CheckResult, ...]:
    """All check results of one entry, in expected-map order (identity
    results last).  Compute errors become fail results, never exceptions."""
    try:
        word = parse_braid(e.dsl) if e.dsl else None
    except ValueError as err:
        return (CheckResult(e.name, "parse", "fail", "error: %s" % err,
                            "well-formed braid word"),)
    out: list[CheckResult] = []
    cache: dict[tuple[int, int], LaurentPoly] = {}
    printed: dict[str, LaurentPoly] = {}
    claimed = _IDENTITY_CLAIMS.get(e.identity or "", ())
    for key, want in e.expected:
        if key in claimed:
            continue
        try:
            result = _run_generic(e, key, want, word, cache, printed)
        except Exception as err:  # surfaced as a catalog failure
            result = CheckResult(e.name, key, "fail", "error: %s" % err,
                                 str(want))
        if result is not None:
            out.append(result)
    if e.identity is not None:
        try:
            out.extend(_IDENTITIES[e.identity](e))
        except Exception as err:
            out.append(CheckResult(e.name, e.identity, "fail",
                                   "error: %s" % err, "identity holds"))
    return tuple(out)


def run_catalog(entries: Optional[Iterable[CatalogEntry]] = None,
                include_tier2: bool = False) -> tuple[CheckResult, ...]:
    """Run entries (default: the built-ins) and return results in entry
    order.  Tier-2 entries report a single skip unless enabled.  Workers
    come from PRISM_THREADS; the output never depends on the count."""
    todo = tuple(BUILTIN_ENTRIES if entries is None else entries)

    def one(e: CatalogEntry) -> tuple[CheckResult, ...]:
        if e.tier == 2 and not include_tier2:
            return (_skip(e.name, "tier-2", "disabled by default"),)
        return run_entry(e)

    workers = min(_worker_count(), max(1, len(todo)))
    if workers <= 1:
        parts = [one(e) for e in todo]
    else:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(one, todo))
    return tuple(r for part in parts for r in part)


def entries_from_json(text: str) -> tuple[CatalogEntry, ...]:
    """Parse the documented JSON catalog file format."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as err:
        raise ValueError("catalog file is not valid JSON: %s" % err)
    if not isinstance(raw, list):
        raise ValueError("catalog file must hold a list of entries")
    out = []
    for item in raw:
        if not isinstance(item, dict):
            raise ValueError("catalog entries must be objects")
        unknown = set(item) - {"name", "dsl", "genus", "tier", "expected",
                               "identity"}
        if unknown:
            raise ValueError("unknown entry fields: %s" % sorted(unknown))
        expected = item.get("expected", {})
        if not isinstance(expected, dict):
            raise ValueError("expected must be a map")
        out.append(entry(item.get("name", ""), item.get("dsl", ""),
                         item.get("genus", 0), expected,
                         tier=item.get("tier", 1),
                         identity=item.get("identity")))
    return tuple(out)


# ---------------------------------------------------------------------------
# built-in entries
# ---------------------------------------------------------------------------

BUILTIN_ENTRIES: tuple[CatalogEntry, ...] = (
    entry("unknot", UNKNOT_DSL, 0,
          {"f(1|1)": "0", "rank": 0, "bound": 0}),
    entry("virtual trefoil f(1|1)", TREFOIL_DSL, 1,
          {"f(1|1)": TREFOIL_F11, "rank": 2, "bound": 1}),
    entry("virtual trefoil f(2|1)", TREFOIL_DSL, 1,
          {"f(2|1)": TREFOIL_F21}),
    entry("virtual trefoil f(3|1)", TREFOIL_DSL, 1,
          {"f(3|1)": TREFOIL_F31}),
    entry("virtual trefoil f(2|2)", TREFOIL_DSL, 1,
          {"f(2|2)": TREFOIL_F22}),
    entry("virtual trefoil determinant", TREFOIL_DSL, 1,
          {"csw-det": TREFOIL_CSW_DET_T,
           "csw-det-scaled": TREFOIL_CSW_SCALED}),
    entry("virtual trefoil two-variable specialization", GAP_TREFOIL_DSL, 0,
          {"gap": TREFOIL_GAP, "gap-table": TREFOIL_GAP_TABLE},
          identity="gap-table-specialization"),
    entry("classical trefoil specialization vanishes",
          CLASSICAL_TREFOIL_DSL, 0, {"gap": "0"}),
    entry("one-crossing torus presentation", "", 1,
          {"delta-first": PRES2_DELTA_FIRST,
           "delta-second": PRES2_DELTA_SECOND},
          identity="presentation-bases"),
    entry("kishino family r=1", "", 2, {"rank-all-signs": 4},
          identity="kishino-rank-sweep"),
    entry("kishino family r=2", "", 3, {"rank-all-signs": 6},
          identity="kishino-rank-sweep"),
    entry("kishino family r=3", "", 4, {"rank-all-signs": 8},
          identity="kishino-rank-sweep"),
    entry("trefoil satellite substitution", "", 1,
          {"printed-f(1|1)": SATELLITE_F11, "rank-of-printed": 0,
           "bound-of-printed": 0},
          identity="satellite-substitution"),
    entry("knot 3.5 non-realizable specialization", "", 1,
          {"printed-f(1|1)": K35_F11, "rank-of-printed": 2,
           "bound-of-printed": 1},
          identity="alexander-specialization-obstruction"),
    entry("knot 6.70394 rank from printed values", "", 2,
          {"printed-f(1|1)": K670394_F11, "printed-f(2|1)": K670394_F21,
           "rank-of-printed": 4, "bound-of-printed": 2}),
    entry("knot 4.99 rank from printed values", "", 1,
          {"printed-f(1|1)": K499_F11, "printed-f(2|1)": K499_F21,
           "rank-of-printed": 2, "bound-of-printed": 1}),
    entry("20-crossing connected sum (needs figure transcription)", "", 2,
          {"f(1|1)": K20_F11, "f(2|1)-contains": K20_F21_PARTIAL_TERMS},
          tier=2),
)
