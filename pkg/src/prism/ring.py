"""Exact sparse multivariate Laurent-polynomial arithmetic over the integers.

Every invariant computed by this package is a Laurent polynomial with
arbitrary-precision integer coefficients; there is no floating point and no
rational-function arithmetic anywhere.  The conventions:

* A :class:`RingContext` fixes an ordered tuple of variable names.  By
  convention the quantum variable ``q``, when present, comes first; the
  symplectic block ``x1, y1, ..., xg, yg`` (the surface-homology variables)
  is identified by name, and auxiliary letters (``t``, ``A``, ``w``, arc
  generators, ...) may appear anywhere in the order.

* Exponents of ``q`` are stored pre-scaled by ``ctx.q_denominator`` (default
  2), so a stored exponent ``k`` means ``q^(k/2)``.  Half-integer powers of
  ``q`` therefore stay exact integers internally; all text/JSON I/O divides
  back out, printing e.g. ``q^(1/2)`` for odd stored exponents.

* Term order is lexicographic on exponent vectors in context-variable order
  (``q`` first).  Text output lists terms in descending order, e.g.
  ``-q^2*x1*y1^-1 + 3``.

* Units of the ring are ``±(monomial)``.  :func:`eq_up_to_unit` and
  :func:`canonical_form` compare and normalize modulo a caller-chosen unit
  subgroup (:class:`UnitSpec`).

Values are immutable after construction; every operation returns a new
polynomial, so everything here is safe to share across threads.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import cached_property


@dataclass(frozen=True)
class RingContext:
    """An ordered variable universe for Laurent polynomials.

    ``genus`` identifies the symplectic block: for genus g the variables
    ``x1, y1, ..., xg, yg`` must all be present (in that pair order by name;
    their positions in ``variables`` may be anywhere).  ``q_denominator``
    is the exponent scale for ``q`` only.
    """

    variables: tuple[str, ...]
    genus: int = 0
    q_denominator: int = 2

    def __post_init__(self) -> None:
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names: %r" % (self.variables,))
        if self.genus < 0:
            raise ValueError("genus must be non-negative")
        if self.q_denominator < 1:
            raise ValueError("q_denominator must be positive")
        for name in self.symplectic_names:
            if name not in self.variables:
                raise ValueError("missing symplectic variable %r" % name)

    @property
    def symplectic_names(self) -> tuple[str, ...]:
        names: list[str] = []
        for i in range(1, self.genus + 1):
            names.append("x%d" % i)
            names.append("y%d" % i)
        return tuple(names)

    @cached_property
    def _index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.variables)}

    def var_index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ValueError("unknown variable %r (context has %r)" % (name, self.variables))

    @cached_property
    def q_index(self) -> int | None:
        return self._index.get("q")

    def scale(self, index: int) -> int:
        """Exponent storage scale of variable ``index`` (q_denominator for q)."""
        return self.q_denominator if index == self.q_index else 1

    def with_variables(self, extra: tuple[str, ...]) -> "RingContext":
        """A context extended by ``extra`` variables (appended in order)."""
        new = tuple(v for v in extra if v not in self.variables)
        return RingContext(self.variables + new, self.genus, self.q_denominator)


@dataclass(frozen=True)
class ExponentVector:
    """Sparse exponent vector: sorted tuple of (variable-index, exponent).

    Zero exponents are never stored.  The q exponent, when present, is in
    stored (pre-scaled) units.
    """

    exps: tuple[tuple[int, int], ...] = ()

    @staticmethod
    def from_dict(d: dict[int, int]) -> "ExponentVector":
        return ExponentVector(tuple(sorted((i, e) for i, e in d.items() if e != 0)))

    def as_dict(self) -> dict[int, int]:
        return dict(self.exps)

    def get(self, index: int) -> int:
        for i, e in self.exps:
            if i == index:
                return e
            if i > index:
                break
        return 0

    @property
    def is_zero(self) -> bool:
        return not self.exps

    def __mul__(self, other: "ExponentVector") -> "ExponentVector":
        if not self.exps:
            return other
        if not other.exps:
            return self
        merged = dict(self.exps)
        for i, e in other.exps:
            v = merged.get(i, 0) + e
            if v:
                merged[i] = v
            else:
                del merged[i]
        return ExponentVector(tuple(sorted(merged.items())))

    def inverse(self) -> "ExponentVector":
        return ExponentVector(tuple((i, -e) for i, e in self.exps))

    def __pow__(self, k: int) -> "ExponentVector":
        if k == 0:
            return ExponentVector()
        return ExponentVector(tuple((i, e * k) for i, e in self.exps))

    def lex_key(self, nvars: int) -> tuple[int, ...]:
        dense = [0] * nvars
        for i, e in self.exps:
            dense[i] = e
        return tuple(dense)


class LaurentPoly:
    """A Laurent polynomial: finite map ExponentVector -> nonzero integer."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: RingContext, terms: dict[ExponentVector, int]):
        self.ctx = ctx
        self.terms = {ev: c for ev, c in terms.items() if c != 0}

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, ctx: RingContext) -> "LaurentPoly":
        return cls(ctx, {})

    @classmethod
    def one(cls, ctx: RingContext) -> "LaurentPoly":
        return cls(ctx, {ExponentVector(): 1})

    @classmethod
    def integer(cls, ctx: RingContext, n: int) -> "LaurentPoly":
        return cls(ctx, {ExponentVector(): n})

    @classmethod
    def monomial(cls, ctx: RingContext, coeff: int = 1,
                 exps: dict[str, int] | None = None,
                 q_half: int = 0) -> "LaurentPoly":
        """coeff * prod(v^e) * q^(q_half/q_denominator).

        ``exps`` exponents are in integer units for every variable (the q
        scaling is applied here); ``q_half`` adds raw stored q-steps on top,
        which is how half-integer powers are constructed.
        """
        stored: dict[int, int] = {}
        for name, e in (exps or {}).items():
            i = ctx.var_index(name)
            stored[i] = stored.get(i, 0) + e * ctx.scale(i)
        if q_half:
            qi = ctx.q_index
            if qi is None:
                raise ValueError("context has no q variable")
            stored[qi] = stored.get(qi, 0) + q_half
        return cls(ctx, {ExponentVector.from_dict(stored): coeff})

    @classmethod
    def variable(cls, ctx: RingContext, name: str, power: int = 1) -> "LaurentPoly":
        return cls.monomial(ctx, 1, {name: power})

    # -- basic queries -----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    @property
    def is_unit_monomial(self) -> bool:
        """True iff invertible in the integer Laurent ring: one term, coeff +-1."""
        if len(self.terms) != 1:
            return False
        (c,) = self.terms.values()
        return c in (1, -1)

    def sorted_terms(self, reverse: bool = True) -> list[tuple[ExponentVector, int]]:
        n = len(self.ctx.variables)
        return sorted(self.terms.items(), key=lambda t: t[0].lex_key(n), reverse=reverse)

    def least_term(self) -> tuple[ExponentVector, int]:
        if self.is_zero:
            raise ValueError("zero polynomial has no least term")
        n = len(self.ctx.variables)
        ev = min(self.terms, key=lambda e: e.lex_key(n))
        return ev, self.terms[ev]

    def coefficient(self, exps: dict[str, int], q_half: int = 0) -> int:
        """Coefficient of the given monomial (integer-unit exponents)."""
        stored: dict[int, int] = {}
        for name, e in exps.items():
            i = self.ctx.var_index(name)
            stored[i] = stored.get(i, 0) + e * self.ctx.scale(i)
        if q_half:
            qi = self.ctx.q_index
            stored[qi] = stored.get(qi, 0) + q_half
        return self.terms.get(ExponentVector.from_dict(stored), 0)

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.ctx != self.ctx:
                raise ValueError("context mismatch: %r vs %r"
                                 % (self.ctx.variables, other.ctx.variables))
            return other
        if isinstance(other, int):
            return LaurentPoly.integer(self.ctx, other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        acc = dict(self.terms)
        for ev, c in other.terms.items():
            v = acc.get(ev, 0) + c
            if v:
                acc[ev] = v
            else:
                acc.pop(ev, None)
        return LaurentPoly(self.ctx, acc)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.ctx, {ev: -c for ev, c in self.terms.items()})

    def __sub__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "LaurentPoly":
        return (-self) + other

    def __mul__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero or other.is_zero:
            return LaurentPoly.zero(self.ctx)
        # convolve over the smaller factor for sparse speed
        a, b = (self, other) if len(self.terms) <= len(other.terms) else (other, self)
        acc: dict[ExponentVector, int] = {}
        for ev1, c1 in a.terms.items():
            for ev2, c2 in b.terms.items():
                ev = ev1 * ev2
                v = acc.get(ev, 0) + c1 * c2
                if v:
                    acc[ev] = v
                else:
                    del acc[ev]
        return LaurentPoly(self.ctx, acc)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            inv = self.monomial_inverse()
            return inv ** (-k)
        result = LaurentPoly.one(self.ctx)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def monomial_inverse(self) -> "LaurentPoly":
        if not self.is_unit_monomial:
            raise ValueError("only +-monomials are invertible: %s" % self)
        ((ev, c),) = self.terms.items()
        return LaurentPoly(self.ctx, {ev.inverse(): c})

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.integer(self.ctx, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.ctx == other.ctx and self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    # -- substitution ------------------------------------------------------

    def substitute(self, mapping: dict[str, "LaurentPoly | str | int"],
                   ctx: RingContext | None = None) -> "LaurentPoly":
        """Simultaneous substitution, exactly expanded.

        Variables absent from ``mapping`` map to themselves (and must exist
        in the target context).  An image is raised to negative powers only
        if it is invertible (a ±monomial); otherwise ValueError.  The target
        context defaults to the context of the first polynomial image, else
        to ``self.ctx``.
        """
        images: dict[str, LaurentPoly] = {}
        target = ctx
        for name, img in mapping.items():
            self.ctx.var_index(name)  # validate source variable
            if isinstance(img, LaurentPoly):
                images[name] = img
                if target is None:
                    target = img.ctx
        if target is None:
            target = self.ctx
        for name, img in mapping.items():
            if not isinstance(img, LaurentPoly):
                if isinstance(img, int):
                    images[name] = LaurentPoly.integer(target, img)
                else:
                    images[name] = parse(target, img)
            elif images[name].ctx != target:
                raise ValueError("substitution images live in different contexts")

        qi = self.ctx.q_index
        qden = self.ctx.q_denominator
        # variable index -> image polynomial (None = rename to same name)
        img_by_index: dict[int, LaurentPoly | None] = {}
        for i, name in enumerate(self.ctx.variables):
            img_by_index[i] = images.get(name)

        power_cache: dict[tuple[int, int], LaurentPoly] = {}

        def image_power(i: int, stored: int) -> LaurentPoly:
            key = (i, stored)
            hit = power_cache.get(key)
            if hit is not None:
                return hit
            img = img_by_index[i]
            assert img is not None
            if i == qi:
                if stored % qden:
                    raise ValueError(
                        "cannot substitute q in a polynomial with half-integer q-exponents")
                e = stored // qden
            else:
                e = stored
            if e < 0 and not img.is_unit_monomial:
                raise ValueError(
                    "image of %r is not invertible but occurs with a negative exponent"
                    % self.ctx.variables[i])
            val = img ** e
            power_cache[key] = val
            return val

        out = LaurentPoly.zero(target)
        for ev, c in self.terms.items():
            term = LaurentPoly.integer(target, c)
            passthrough: dict[int, int] = {}
            for i, e in ev.exps:
                if img_by_index[i] is None:
                    j = target.var_index(self.ctx.variables[i])
                    # exponents carry over in stored units; rescale if the
                    # two contexts disagree on the scale of this variable
                    s_from, s_to = self.ctx.scale(i), target.scale(j)
                    if s_from == s_to:
                        passthrough[j] = passthrough.get(j, 0) + e
                    else:
                        if (e * s_to) % s_from:
                            raise ValueError("exponent scale mismatch for %r"
                                             % self.ctx.variables[i])
                        passthrough[j] = passthrough.get(j, 0) + (e * s_to) // s_from
                else:
                    term = term * image_power(i, e)
            if passthrough:
                mono = LaurentPoly(target, {ExponentVector.from_dict(passthrough): 1})
                term = term * mono
            out = out + term
        return out

    # -- rendering ---------------------------------------------------------

    def _format_exponent(self, i: int, stored: int) -> str:
        name = self.ctx.variables[i]
        s = self.ctx.scale(i)
        if stored % s == 0:
            e = stored // s
            return name if e == 1 else "%s^%d" % (name, e)
        return "%s^(%d/%d)" % (name, stored, s)

    def to_text(self) -> str:
        if self.is_zero:
            return "0"
        pieces: list[str] = []
        for ev, c in self.sorted_terms():
            factors = [self._format_exponent(i, e) for i, e in ev.exps]
            if not factors:
                body = str(abs(c))
            elif abs(c) == 1:
                body = "*".join(factors)
            else:
                body = "%d*%s" % (abs(c), "*".join(factors))
            if not pieces:
                pieces.append(("-" if c < 0 else "") + body)
            else:
                pieces.append(("- " if c < 0 else "+ ") + body)
        return " ".join(pieces)

    __str__ = to_text

    def __repr__(self) -> str:
        return "LaurentPoly(%s)" % self.to_text()

    def to_json(self) -> str:
        items = []
        for ev, c in self.sorted_terms():
            exps: dict[str, int] = {}
            for i, e in ev.exps:
                name = self.ctx.variables[i]
                s = self.ctx.scale(i)
                if e % s == 0:
                    exps[name] = e // s
                else:
                    # rare path: half-integer q power, stored units, documented
                    exps["%s^(1/%d)" % (name, s)] = e
            items.append({"coeff": str(c), "exps": exps})
        return json.dumps(items)

    @classmethod
    def from_json(cls, ctx: RingContext, text: str) -> "LaurentPoly":
        acc: dict[ExponentVector, int] = {}
        for item in json.loads(text):
            stored: dict[int, int] = {}
            for key, e in item["exps"].items():
                m = re.fullmatch(r"(\w+)\^\(1/(\d+)\)", key)
                if m:
                    i = ctx.var_index(m.group(1))
                    if ctx.scale(i) != int(m.group(2)):
                        raise ValueError("exponent scale mismatch in JSON for %r" % key)
                    stored[i] = stored.get(i, 0) + e
                else:
                    i = ctx.var_index(key)
                    stored[i] = stored.get(i, 0) + e * ctx.scale(i)
            ev = ExponentVector.from_dict(stored)
            c = acc.get(ev, 0) + int(item["coeff"])
            if c:
                acc[ev] = c
            else:
                acc.pop(ev, None)
        return cls(ctx, acc)


# ---------------------------------------------------------------------------
# module-level operation names
# ---------------------------------------------------------------------------

def add(p: LaurentPoly, r: LaurentPoly) -> LaurentPoly:
    return p + r


def mul(p: LaurentPoly, r: LaurentPoly) -> LaurentPoly:
    return p * r


def substitute(p: LaurentPoly, mapping: dict[str, LaurentPoly | str | int],
               ctx: RingContext | None = None) -> LaurentPoly:
    return p.substitute(mapping, ctx)


def divide_exact(num: LaurentPoly, den: LaurentPoly) -> LaurentPoly:
    """Quotient num/den when den divides num exactly; ValueError otherwise.

    Least-term elimination: the ring is a domain and lex order is
    multiplicative, so if den | num every step cancels the least remaining
    term with an integer coefficient quotient.
    """
    if den.is_zero:
        raise ValueError("division by zero polynomial")
    if num.is_zero:
        return LaurentPoly.zero(num.ctx)
    if num.ctx != den.ctx:
        raise ValueError("context mismatch in division")
    nvars = len(num.ctx.variables)
    den_lo, den_lo_c = den.least_term()
    den_hi = den.sorted_terms(reverse=True)[0][0]
    num_hi = num.sorted_terms(reverse=True)[0][0].lex_key(nvars)
    quotient: dict[ExponentVector, int] = {}
    rem = num
    while not rem.is_zero:
        ev, c = rem.least_term()
        if c % den_lo_c:
            raise ValueError("polynomials do not divide exactly")
        q_ev = ev * den_lo.inverse()
        if (q_ev * den_hi).lex_key(nvars) > num_hi:
            raise ValueError("polynomials do not divide exactly")
        q_c = c // den_lo_c
        quotient[q_ev] = q_c
        rem = rem - LaurentPoly(num.ctx, {q_ev: q_c}) * den
    return LaurentPoly(num.ctx, quotient)


@dataclass(frozen=True)
class UnitSpec:
    """Which units ±(monomial) are allowed in comparisons.

    ``variables``: names allowed to appear in the unit monomial.
    ``allow_sign``: whether −1 is an allowed unit.
    ``allow_half_q``: whether the unit may carry odd stored q-exponents
    (i.e. half-integer powers like q^(1/2)).
    """

    variables: tuple[str, ...]
    allow_sign: bool = True
    allow_half_q: bool = False

    @staticmethod
    def full(ctx: RingContext, allow_half_q: bool = False) -> "UnitSpec":
        return UnitSpec(ctx.variables, True, allow_half_q)


def eq_up_to_unit(p: LaurentPoly, r: LaurentPoly,
                  unit_spec: UnitSpec) -> LaurentPoly | None:
    """A monomial u with p == u*r and u inside the allowed unit group, or None.

    Found by dividing the lexicographically least terms and verifying.
    """
    if p.ctx != r.ctx:
        raise ValueError("context mismatch")
    ctx = p.ctx
    if p.is_zero and r.is_zero:
        return LaurentPoly.one(ctx)
    if p.is_zero or r.is_zero:
        return None
    (ev_p, c_p) = p.least_term()
    (ev_r, c_r) = r.least_term()
    if abs(c_p) != abs(c_r):
        return None
    sign = 1 if (c_p > 0) == (c_r > 0) else -1
    if sign < 0 and not unit_spec.allow_sign:
        return None
    u_ev = ev_p * ev_r.inverse()
    allowed = {ctx.var_index(name) for name in unit_spec.variables}
    for i, e in u_ev.exps:
        if i not in allowed:
            return None
        if i == ctx.q_index and e % ctx.q_denominator and not unit_spec.allow_half_q:
            return None
    u = LaurentPoly(ctx, {u_ev: sign})
    return u if (u * r) == p else None


def canonical_form(p: LaurentPoly, unit_spec: UnitSpec) -> LaurentPoly:
    """The unique representative of p's orbit under the allowed unit group.

    Divides by the allowed-variable part of the lexicographically least
    exponent vector (q is only shifted by multiples of its allowed step) and
    normalizes the least term's sign positive when signs are allowed units.
    Translation by a unit monomial preserves lex order, so this is constant
    on unit orbits and idempotent.
    """
    if p.is_zero:
        return p
    ctx = p.ctx
    (ev, _) = p.least_term()
    allowed = {ctx.var_index(name) for name in unit_spec.variables}
    divisor: dict[int, int] = {}
    for i, e in ev.exps:
        if i not in allowed:
            continue
        step = 1
        if i == ctx.q_index and not unit_spec.allow_half_q:
            step = ctx.q_denominator
        divisor[i] = e - (e % step)  # largest allowed multiple below e
    shift = ExponentVector.from_dict(divisor).inverse()
    terms = {t * shift: c for t, c in p.terms.items()}
    out = LaurentPoly(ctx, terms)
    if unit_spec.allow_sign:
        (_, c0) = out.least_term()
        if c0 < 0:
            out = -out
    return out


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(\d+|[A-Za-z][A-Za-z0-9_]*|\^|\*|\(|\)|/|\+|\-)")


def _tokenize(text: str) -> list[str]:
    out: list[str] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ValueError("syntax error at %r" % text[pos:pos + 10])
            break
        out.append(m.group(1))
        pos = m.end()
    return out


def parse(ctx: RingContext, text: str) -> LaurentPoly:
    """Parse the text grammar: terms like ``-q^2*x1*y1^-1 + 3``.

    Exponents are integers or parenthesized fractions whose denominator is
    the variable's exponent scale (``q^(1/2)``).
    """
    toks = _tokenize(text)
    if not toks:
        raise ValueError("empty polynomial text")
    pos = 0

    def peek() -> str | None:
        return toks[pos] if pos < len(toks) else None

    def take() -> str:
        nonlocal pos
        if pos >= len(toks):
            raise ValueError("unexpected end of polynomial text")
        tok = toks[pos]
        pos += 1
        return tok

    def parse_int() -> int:
        sign = 1
        while peek() in ("+", "-"):
            if take() == "-":
                sign = -sign
        tok = take()
        if not tok.isdigit():
            raise ValueError("expected integer, got %r" % tok)
        return sign * int(tok)

    def parse_exponent(i: int) -> int:
        # returns a stored-unit exponent for variable index i
        if peek() == "(":
            take()
            num = parse_int()
            if take() != "/":
                raise ValueError("malformed fractional exponent")
            den = parse_int()
            if take() != ")":
                raise ValueError("malformed fractional exponent")
            s = ctx.scale(i)
            if (num * s) % den:
                raise ValueError("exponent %d/%d not representable for %r"
                                 % (num, den, ctx.variables[i]))
            return (num * s) // den
        return parse_int() * ctx.scale(i)

    def parse_term(lead_sign: int) -> tuple[ExponentVector, int]:
        coeff = lead_sign
        stored: dict[int, int] = {}
        saw_factor = False
        while True:
            tok = peek()
            if tok is None or tok in ("+", "-"):
                break
            if tok == "*":
                take()
                continue
            if tok.isdigit():
                coeff *= int(take())
                saw_factor = True
                continue
            if re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", tok):
                name = take()
                i = ctx.var_index(name)
                if peek() == "^":
                    take()
                    e = parse_exponent(i)
                else:
                    e = ctx.scale(i)
                stored[i] = stored.get(i, 0) + e
                saw_factor = True
                continue
            raise ValueError("unexpected token %r" % tok)
        if not saw_factor:
            raise ValueError("empty term")
        return ExponentVector.from_dict(stored), coeff

    acc: dict[ExponentVector, int] = {}
    while pos < len(toks):
        sign = 1
        while peek() in ("+", "-"):
            if take() == "-":
                sign = -sign
        if peek() is None:
            raise ValueError("trailing sign")
        ev, c = parse_term(sign)
        v = acc.get(ev, 0) + c
        if v:
            acc[ev] = v
        else:
            acc.pop(ev, None)
    return LaurentPoly(ctx, acc)
