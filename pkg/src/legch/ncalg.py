"""Exact arithmetic in free noncommutative graded algebras over Z[t,1/t] or F_p[t,1/t].

An element is a finite sum  sum c * t^k * w  where w is a word in the chord
generators, written as a tuple of generator names.  Coefficients are central
(words commute with t), words multiply by concatenation, and everything is
exact: Python integers in characteristic 0, residues in {0,...,p-1} in
characteristic p.

The grading of a generator is an integer; when the rotation number is nonzero
all gradings live in Z/(2*rot) and t has grading -2*rot (which is 0 in the
quotient).  Parities are still well defined because the modulus is even.

Canonical form: words are ordered length-lexicographically and t-exponents
ascend within a word; serialization of a canonical element is byte-identical
across runs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .errors import InputError, InvalidMoveError, SignatureError, ValidationError

Word = tuple  # tuple of generator names; () is the empty word


def _norm_scalar(c: int, char: int) -> int:
    return c % char if char else c


class LaurentCoeff:
    """A Laurent polynomial in t with integer (or F_p) coefficients.

    Stored as a map exponent -> nonzero scalar.  Instances are treated as
    immutable; all operations return fresh objects.
    """

    __slots__ = ("char", "terms")

    def __init__(self, char: int, terms: Mapping[int, int] | None = None):
        self.char = char
        clean = {}
        if terms:
            for e, c in terms.items():
                c = _norm_scalar(c, char)
                if c:
                    clean[int(e)] = c
        self.terms = clean

    @classmethod
    def zero(cls, char: int) -> "LaurentCoeff":
        return cls(char, {})

    @classmethod
    def one(cls, char: int) -> "LaurentCoeff":
        return cls(char, {0: 1})

    @classmethod
    def t_power(cls, char: int, k: int, scalar: int = 1) -> "LaurentCoeff":
        return cls(char, {k: scalar})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "LaurentCoeff") -> "LaurentCoeff":
        if self.char != other.char:
            raise SignatureError("cannot add Laurent coefficients of different characteristic")
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentCoeff(self.char, out)

    def __neg__(self) -> "LaurentCoeff":
        return LaurentCoeff(self.char, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "LaurentCoeff") -> "LaurentCoeff":
        return self + (-other)

    def __mul__(self, other: "LaurentCoeff") -> "LaurentCoeff":
        if self.char != other.char:
            raise SignatureError("cannot multiply Laurent coefficients of different characteristic")
        out: dict[int, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentCoeff(self.char, out)

    def scale(self, c: int) -> "LaurentCoeff":
        return LaurentCoeff(self.char, {e: v * c for e, v in self.terms.items()})

    def eval_t(self, value: int, char: int) -> int:
        """Evaluate at t = value in F_char (char a prime, value a unit)."""
        acc = 0
        inv = pow(value, -1, char)
        for e, c in self.terms.items():
            p = pow(value, e, char) if e >= 0 else pow(inv, -e, char)
            acc = (acc + c * p) % char
        return acc

    def exponents(self) -> list[int]:
        return sorted(self.terms)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LaurentCoeff)
            and self.char == other.char
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.char, tuple(sorted(self.terms.items()))))

    def __repr__(self):
        return f"LaurentCoeff({self.char}, {dict(sorted(self.terms.items()))})"


@dataclass(frozen=True)
class ChordGenerator:
    """A Reeb chord generator: name, integer grading, positive rational action."""

    name: str
    grading: int
    action: Fraction

    def __post_init__(self):
        if self.action <= 0:
            raise ValidationError(f"generator {self.name} has non-positive action {self.action}")
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", self.name):
            raise ValidationError(f"generator name {self.name!r} is not an identifier")


class Algebra:
    """The ambient algebra signature: characteristic, rotation number, generators."""

    def __init__(self, char: int, rot: int, generators: Iterable[ChordGenerator]):
        if char < 0 or char == 1:
            raise ValidationError(f"characteristic must be 0 or a prime, got {char}")
        self.char = char
        self.rot = rot
        self.generators = tuple(generators)
        self.by_name = {g.name: g for g in self.generators}
        if len(self.by_name) != len(self.generators):
            raise ValidationError("generator names are not unique")
        self.modulus = 2 * abs(rot)  # 0 means Z-grading

    def signature(self):
        return (self.char, self.rot, tuple((g.name, g.grading, g.action) for g in self.generators))

    def reduce_degree(self, d: int) -> int:
        return d % self.modulus if self.modulus else d

    def degrees_equal(self, d1: int, d2: int) -> bool:
        return self.reduce_degree(d1 - d2) == 0

    def word_grading(self, word: Word) -> int:
        total = 0
        for name in word:
            g = self.by_name.get(name)
            if g is None:
                raise SignatureError(f"unknown generator {name!r} in word")
            total += g.grading
        return self.reduce_degree(total)

    def t_grading(self) -> int:
        return -2 * self.rot

    # -- element constructors -------------------------------------------------

    def zero(self) -> "Element":
        return Element(self, {})

    def one(self) -> "Element":
        return Element(self, {(): LaurentCoeff.one(self.char)})

    def scalar(self, c: int, texp: int = 0) -> "Element":
        return Element(self, {(): LaurentCoeff.t_power(self.char, texp, c)})

    def t(self, k: int = 1) -> "Element":
        return self.scalar(1, k)

    def gen(self, name: str) -> "Element":
        if name not in self.by_name:
            raise SignatureError(f"unknown generator {name!r}")
        return Element(self, {(name,): LaurentCoeff.one(self.char)})

    def word(self, letters: Iterable[str], coeff: int = 1, texp: int = 0) -> "Element":
        w = tuple(letters)
        for name in w:
            if name not in self.by_name:
                raise SignatureError(f"unknown generator {name!r}")
        return Element(self, {w: LaurentCoeff.t_power(self.char, texp, coeff)})


class Element:
    """A finite Z[t,1/t]-linear (or F_p[t,1/t]-linear) combination of words."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: Algebra, terms: Mapping[Word, LaurentCoeff]):
        self.alg = alg
        clean = {}
        for w, c in terms.items():
            if not c.is_zero():
                for name in w:
                    if name not in alg.by_name:
                        raise SignatureError(f"unknown generator {name!r} in word")
                clean[tuple(w)] = c
        self.terms = clean

    # -- ring structure -------------------------------------------------------

    def _check(self, other: "Element"):
        if self.alg.signature() != other.alg.signature():
            raise SignatureError("elements live in different algebras")

    def __add__(self, other: "Element") -> "Element":
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            acc = out.get(w)
            out[w] = c if acc is None else acc + c
        return Element(self.alg, out)

    def __neg__(self) -> "Element":
        return Element(self.alg, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def __mul__(self, other: "Element") -> "Element":
        self._check(other)
        out: dict[Word, LaurentCoeff] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                c = c1 * c2
                acc = out.get(w)
                out[w] = c if acc is None else acc + c
        return Element(self.alg, out)

    def scale(self, c: int, texp: int = 0) -> "Element":
        f = LaurentCoeff.t_power(self.alg.char, texp, c)
        return Element(self.alg, {w: coeff * f for w, coeff in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Element)
            and self.alg.signature() == other.alg.signature()
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.alg.signature(), tuple(sorted(self.terms.items(), key=lambda kv: _word_key(kv[0])))))

    # -- grading ---------------------------------------------------------------

    def term_gradings(self) -> set:
        """The set of total gradings over all monomials (t-degree included)."""
        alg = self.alg
        out = set()
        for w, c in self.terms.items():
            base = alg.word_grading(w)
            for e in c.terms:
                out.add(alg.reduce_degree(base + e * alg.t_grading()))
        return out

    def is_homogeneous(self) -> bool:
        return len(self.term_gradings()) <= 1

    def grading(self) -> int | None:
        gs = self.term_gradings()
        if len(gs) != 1:
            return None
        return next(iter(gs))

    # -- structure helpers ------------------------------------------------------

    def canonicalize(self) -> "Element":
        """Return an equal element with terms stored in canonical order."""
        items = sorted(self.terms.items(), key=lambda kv: _word_key(kv[0]))
        return Element(self.alg, dict(items))

    def substitute(self, name: str, replacement: "Element") -> "Element":
        """Replace every occurrence of the letter `name` by `replacement`."""
        self._check(replacement)
        alg = self.alg
        out = alg.zero()
        for w, c in self.terms.items():
            factor = Element(alg, {(): c})
            for letter in w:
                factor = factor * (replacement if letter == name else alg.gen(letter))
            out = out + factor
        return out

    def words(self) -> list[Word]:
        return sorted(self.terms, key=_word_key)

    def max_word_length(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def __repr__(self):
        return f"<Element {serialize_element(self)}>"


def _word_key(w: Word):
    return (len(w), w)


# ---------------------------------------------------------------------------
# DGA
# ---------------------------------------------------------------------------


class DGA:
    """A finitely generated DGA over Z[t,1/t] or F_p[t,1/t].

    The differential is stored on generators and extended by linearity and the
    graded Leibniz rule with sign (-1)^{|v|} on the left factor.
    """

    def __init__(
        self,
        generators: Iterable[ChordGenerator],
        rot: int,
        char: int,
        diff: Mapping[str, Element],
        check_actions: bool = True,
        check_d_squared_now: bool = False,
    ):
        self.alg = Algebra(char, rot, generators)
        self.generators = self.alg.generators
        self.rot = rot
        self.char = char
        self.diff = {}
        for g in self.generators:
            d = diff.get(g.name)
            if d is None:
                raise ValidationError(f"differential missing for generator {g.name}")
            if d.alg.signature() != self.alg.signature():
                d = Element(self.alg, d.terms)
            self.diff[g.name] = d.canonicalize()
        self._validate_degrees()
        if check_actions:
            self.check_action_filtration()
        if check_d_squared_now:
            rep = check_d_squared(self)
            if not rep.passed:
                raise ValidationError(f"d^2 != 0: {rep.failures}")

    def _validate_degrees(self):
        for g in self.generators:
            d = self.diff[g.name]
            gs = d.term_gradings()
            want = self.alg.reduce_degree(g.grading - 1)
            if gs and gs != {want}:
                raise ValidationError(
                    f"differential of {g.name} is not homogeneous of degree |{g.name}|-1: "
                    f"got gradings {sorted(gs)}, want {want}"
                )

    def check_action_filtration(self):
        """Every term of d(g) must have total letter action strictly below action(g)."""
        for g in self.generators:
            for w in self.diff[g.name].terms:
                total = sum((self.alg.by_name[x].action for x in w), Fraction(0))
                if total >= g.action:
                    raise ValidationError(
                        f"action filtration violated: d({g.name}) contains {'·'.join(w) or '1'} "
                        f"with action sum {total} >= {g.action}"
                    )

    def d(self, x: Element) -> Element:
        return extend_derivation(self)(x)

    def reduce(self, char: int) -> "DGA":
        """Reduce coefficients mod a prime (or return self when char matches)."""
        if char == self.char:
            return self
        if self.char != 0:
            raise ValidationError(f"cannot change characteristic {self.char} -> {char}")
        alg = Algebra(char, self.rot, self.generators)
        new_diff = {
            name: Element(alg, {w: LaurentCoeff(char, c.terms) for w, c in d.terms.items()})
            for name, d in self.diff.items()
        }
        return DGA(self.generators, self.rot, char, new_diff, check_actions=False)

    def __repr__(self):
        return f"<DGA char={self.char} rot={self.rot} gens={[g.name for g in self.generators]}>"


def extend_derivation(dga: DGA) -> Callable[[Element], Element]:
    """The graded derivation extending the generator differentials.

    d(c) = 0 for coefficients, d(vw) = d(v) w + (-1)^{|v|} v d(w); parities are
    well defined even for Z/(2 rot) gradings because the modulus is even.
    """

    alg = dga.alg

    def d(x: Element) -> Element:
        if x.alg.signature() != alg.signature():
            raise SignatureError("element does not belong to this DGA")
        out = alg.zero()
        for w, c in x.terms.items():
            prefix_deg = 0
            for i, letter in enumerate(w):
                dg = dga.diff[letter]
                if not dg.is_zero():
                    left = Element(alg, {w[:i]: LaurentCoeff.one(alg.char)})
                    right = Element(alg, {w[i + 1:]: LaurentCoeff.one(alg.char)})
                    sign = -1 if prefix_deg % 2 else 1
                    term = (left * dg * right).scale(sign)
                    term = Element(alg, {ww: cc * c for ww, cc in term.terms.items()})
                    out = out + term
                prefix_deg += alg.by_name[letter].grading
        return out

    return d


@dataclass
class D2Report:
    passed: bool
    failures: list  # list of (generator name, residue Element)

    def render(self) -> str:
        if self.passed:
            return "check-d2 PASS"
        lines = ["check-d2 FAIL"]
        for name, residue in self.failures:
            lines.append(f"fail {name} residue = {serialize_element(residue)}")
        return "\n".join(lines)


def check_d_squared(dga: DGA) -> D2Report:
    """Verify d(d(g)) = 0 for every generator, reporting nonzero residues."""
    d = extend_derivation(dga)
    failures = []
    for g in dga.generators:
        residue = d(dga.diff[g.name])
        if not residue.is_zero():
            failures.append((g.name, residue.canonicalize()))
    return D2Report(passed=not failures, failures=failures)


def apply_tame_automorphism(dga: DGA, gen: str, u: Element) -> DGA:
    """Conjugate the differential by the elementary automorphism gen -> gen + u.

    u must be homogeneous of the same grading as gen and must not contain gen.
    The action filtration is not re-imposed on the image: algebraic moves leave
    the geometric action data behind, so only degrees and d^2 are re-checked.
    """
    if gen not in dga.alg.by_name:
        raise InvalidMoveError(f"unknown generator {gen!r}")
    if u.alg.signature() != dga.alg.signature():
        u = Element(dga.alg, u.terms)
    for w in u.terms:
        if gen in w:
            raise InvalidMoveError(f"substitution element contains {gen}")
    gdeg = dga.alg.reduce_degree(dga.alg.by_name[gen].grading)
    if not u.is_zero():
        gs = u.term_gradings()
        if gs != {gdeg}:
            raise InvalidMoveError(
                f"substitution element is not homogeneous of degree {gdeg}: gradings {sorted(gs)}"
            )
    # phi(gen) = gen + u, phi fixes the others; new d = phi o d o phi^{-1}
    alg = dga.alg
    new_diff = {}
    for g in dga.generators:
        if g.name == gen:
            pre = dga.diff[gen] - dga.d(u)  # d(phi^{-1}(gen)) = d(gen) - d(u)
        else:
            pre = dga.diff[g.name]
        new_diff[g.name] = pre.substitute(gen, alg.gen(gen) + u)
    out = DGA(dga.generators, dga.rot, dga.char, new_diff, check_actions=False)
    rep = check_d_squared(out)
    if not rep.passed:
        raise ValidationError("tame automorphism broke d^2 = 0 (internal error)")
    return out


def stabilize(dga: DGA, j: int) -> DGA:
    """Add generators e (grading j) and e' (grading j-1) with d(e) = e', d(e') = 0."""
    used = set(dga.alg.by_name)
    n = 1
    while f"e{n}" in used or f"e{n + 1}" in used:
        n += 2
    name1, name2 = f"e{n}", f"e{n + 1}"
    max_action = max((g.action for g in dga.generators), default=Fraction(0))
    gens = dga.generators + (
        ChordGenerator(name1, j, max_action + 2),
        ChordGenerator(name2, j - 1, max_action + 1),
    )
    alg = Algebra(dga.char, dga.rot, gens)
    new_diff = {g.name: Element(alg, dga.diff[g.name].terms) for g in dga.generators}
    new_diff[name1] = alg.gen(name2)
    new_diff[name2] = alg.zero()
    return DGA(gens, dga.rot, dga.char, new_diff, check_actions=False)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------
#
# Element grammar (canonical form, byte-deterministic):
#   element  := "0" | term (" + " term | " - " term)*   (first term may start "-")
#   term     := [scalar] [tpart] ("·" name)*            pieces joined by "·"
#   tpart    := "t" | "t^" int
# The scalar is omitted when it is 1 and the term has a t-part or letters; the
# empty word with t-exponent 0 renders as the bare scalar.


def _render_monomial(scalar: int, texp: int, word: Word) -> str:
    pieces = []
    if scalar != 1 or (texp == 0 and not word):
        pieces.append(str(scalar))
    if texp == 1:
        pieces.append("t")
    elif texp != 0:
        pieces.append(f"t^{texp}")
    pieces.extend(word)
    return "·".join(pieces)


def serialize_element(x: Element) -> str:
    x = x.canonicalize()
    if x.is_zero():
        return "0"
    chunks = []
    for w in x.words():
        c = x.terms[w]
        for e in c.exponents():
            v = c.terms[e]
            if x.alg.char:
                chunks.append(("+", _render_monomial(v, e, w)))
            else:
                chunks.append(("+" if v > 0 else "-", _render_monomial(abs(v), e, w)))
    first_sign, first = chunks[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in chunks[1:]:
        out += f" {sign} {body}"
    return out


_TERM_PIECE = re.compile(r"^(?:(\d+))?$|^t(?:\^(-?\d+))?$")


def parse_element(alg: Algebra, text: str) -> Element:
    """Parse the element grammar above (whitespace-tolerant, exact)."""
    text = text.strip()
    if text == "0" or not text:
        return alg.zero()
    parts = re.split(r"\s*([+-])\s*", text)
    if parts[0] == "":
        parts = parts[1:]  # leading sign
    else:
        parts = ["+"] + parts  # implicit leading +
    tokens = parts
    if len(tokens) % 2 != 0:
        raise InputError(f"malformed element: {text!r}")
    out = alg.zero()
    for i in range(0, len(tokens), 2):
        sign = 1 if tokens[i] == "+" else -1
        body = tokens[i + 1].strip()
        if not body:
            raise InputError(f"malformed element near term {i // 2 + 1}: {text!r}")
        scalar, texp = 1, 0
        letters = []
        for piece in body.split("·"):
            piece = piece.strip()
            if re.fullmatch(r"\d+", piece):
                scalar = int(piece)
            elif piece == "t":
                texp += 1
            elif re.fullmatch(r"t\^-?\d+", piece):
                texp += int(piece[2:])
            elif re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", piece):
                letters.append(piece)
            else:
                raise InputError(f"bad term piece {piece!r} in element {text!r}")
        out = out + alg.word(letters, coeff=sign * scalar, texp=texp)
    return out


def serialize_dga(dga: DGA) -> str:
    """Canonical text form: header comment, one gen line and one d line per generator."""
    lines = [f"# char={dga.char} rot={dga.rot}"]
    for g in dga.generators:
        a = Fraction(g.action)
        lines.append(f"gen {g.name} deg {g.grading} action {a.numerator}/{a.denominator}")
    for g in dga.generators:
        lines.append(f"d {g.name} = {serialize_element(dga.diff[g.name])}")
    return "\n".join(lines) + "\n"


def parse_dga(text: str, char: int | None = None, check_actions: bool = True) -> DGA:
    """Parse the canonical DGA serialization; `char` overrides/reduces if given."""
    file_char, rot = 0, 0
    gens = []
    raw_diffs = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = re.search(r"char=(\d+)\s+rot=(-?\d+)", line)
            if m:
                file_char, rot = int(m.group(1)), int(m.group(2))
            continue
        if line.startswith("gen "):
            m = re.fullmatch(r"gen\s+(\w+)\s+deg\s+(-?\d+)\s+action\s+(\d+)/(\d+)", line)
            if not m:
                raise InputError("malformed gen line", line=lineno)
            gens.append(ChordGenerator(m.group(1), int(m.group(2)),
                                       Fraction(int(m.group(3)), int(m.group(4)))))
        elif line.startswith("d "):
            m = re.fullmatch(r"d\s+(\w+)\s*=\s*(.*)", line)
            if not m:
                raise InputError("malformed differential line", line=lineno)
            raw_diffs[m.group(1)] = m.group(2)
        else:
            raise InputError(f"unrecognized line {line!r}", line=lineno)
    alg = Algebra(file_char, rot, gens)
    diffs = {}
    for g in gens:
        if g.name not in raw_diffs:
            raise InputError(f"missing differential for generator {g.name}")
        diffs[g.name] = parse_element(alg, raw_diffs[g.name])
    dga = DGA(gens, rot, file_char, diffs, check_actions=check_actions)
    if char is not None and char != dga.char:
        dga = dga.reduce(char)
    return dga
