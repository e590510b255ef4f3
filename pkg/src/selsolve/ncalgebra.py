"""Reduced words over two invertible generators and their Laurent polynomials.

The alphabet is u, v and the inverses u^-1, v^-1.  Words are freely reduced
(no letter stands next to its inverse) and multiply by cancelling across the
junction.  Polynomials map words to coefficients that are affine in symbolic
unknowns; products and derivations keep every coefficient linear, so the
conditions built from them split into linear equations.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from .errors import NonlinearProductError, NotInvertibleError
from .linsys import AffineForm, Rational, format_affine

U, V, U_INV, V_INV = 0, 1, 2, 3

LETTER_NAMES = ("u", "v", "u^-1", "v^-1")
_LETTER_BY_NAME = {name: g for g, name in enumerate(LETTER_NAMES)}


def inverse_letter(g: int) -> int:
    """The inverse generator; an involution."""
    return g ^ 2


class Word(tuple):
    """A freely reduced word; the empty word is the identity.

    Words sort degree-lexicographically through :func:`deglex_key` with the
    letter order u < v < u^-1 < v^-1.
    """

    __slots__ = ()

    def __new__(cls, letters: Iterable[int] = ()):
        seq = tuple(letters)
        for g in seq:
            if not 0 <= g <= 3:
                raise ValueError(f"invalid letter {g!r}")
        for a, b in zip(seq, seq[1:]):
            if b == (a ^ 2):
                raise ValueError(f"word {seq!r} is not reduced")
        return tuple.__new__(cls, seq)

    @classmethod
    def parse(cls, text: str) -> "Word":
        text = text.strip()
        if text in ("", "1"):
            return EMPTY_WORD
        return reduce_letters(_LETTER_BY_NAME[tok]
                              for tok in text.replace("*", " ").split())

    @property
    def degree(self) -> int:
        """Length counting inverses, e.g. degree(u v^-1) = 2."""
        return len(self)

    def inverse(self) -> "Word":
        return _raw_word(tuple((g ^ 2) for g in reversed(self)))

    def __mul__(self, other: "Word") -> "Word":
        if not isinstance(other, tuple):
            return NotImplemented
        return word_mul(self, other)

    def __pow__(self, k: int) -> "Word":
        return word_pow(self, k)

    def __str__(self) -> str:
        if not self:
            return "1"
        return " ".join(LETTER_NAMES[g] for g in self)

    def __repr__(self) -> str:
        return f"Word({self})"


def _raw_word(seq: tuple) -> Word:
    # Trusted constructor: caller guarantees the sequence is reduced.
    return tuple.__new__(Word, seq)


EMPTY_WORD = _raw_word(())


def reduce_letters(letters: Iterable[int]) -> Word:
    """Freely reduce an arbitrary letter sequence."""
    stack: list[int] = []
    for g in letters:
        if stack and stack[-1] == (g ^ 2):
            stack.pop()
        else:
            stack.append(g)
    return _raw_word(tuple(stack))


def word_mul(a: tuple, b: tuple) -> Word:
    """Reduced concatenation of two reduced words.

    Cancellation can only happen across the junction, so one scan from the
    middle suffices.
    """
    la, lb = len(a), len(b)
    k = 0
    limit = la if la < lb else lb
    while k < limit and a[la - 1 - k] == (b[k] ^ 2):
        k += 1
    if k == 0:
        if not la:
            return b if isinstance(b, Word) else _raw_word(tuple(b))
        if not lb:
            return a if isinstance(a, Word) else _raw_word(tuple(a))
    return _raw_word(tuple(a[:la - k]) + tuple(b[k:]))


def word_pow(w: tuple, k: int) -> Word:
    if k < 0:
        base = Word(w).inverse()
        k = -k
    else:
        base = w
    out: tuple = ()
    for _ in range(k):
        out = word_mul(out, base)
    return out if isinstance(out, Word) else _raw_word(out)


def deglex_key(word: tuple) -> tuple:
    return (len(word), word)


def _as_affine(value) -> AffineForm:
    if isinstance(value, AffineForm):
        return value
    return AffineForm.constant(value)


def affine_product(a: AffineForm, b: AffineForm) -> AffineForm:
    """Product of two coefficients, at most one of which carries unknowns."""
    if a.coeffs:
        if b.coeffs:
            raise NonlinearProductError(
                "product would be quadratic in the unknowns")
        return a.scaled(b.const)
    return b.scaled(a.const)


class NCPoly:
    """Laurent polynomial: map from reduced words to affine coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Word, AffineForm | Rational] | None = None):
        clean: dict[Word, AffineForm] = {}
        for w, c in (terms or {}).items():
            aff = _as_affine(c)
            if not aff.is_zero:
                clean[w if isinstance(w, Word) else Word(w)] = aff
        self.terms = clean

    @classmethod
    def _from_acc(cls, acc: dict) -> "NCPoly":
        poly = object.__new__(cls)
        poly.terms = {w: c for w, c in acc.items() if not c.is_zero}
        return poly

    @classmethod
    def zero(cls) -> "NCPoly":
        return cls._from_acc({})

    @classmethod
    def one(cls) -> "NCPoly":
        return cls.from_word(EMPTY_WORD)

    @classmethod
    def from_word(cls, word: Word, coeff: AffineForm | Rational = 1) -> "NCPoly":
        aff = _as_affine(coeff)
        if aff.is_zero:
            return cls.zero()
        return cls._from_acc({word: aff})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def has_unknowns(self) -> bool:
        return any(c.coeffs for c in self.terms.values())

    def unknowns(self) -> set:
        out: set = set()
        for c in self.terms.values():
            out.update(c.coeffs)
        return out

    def max_degree(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def sorted_words(self) -> list[Word]:
        return sorted(self.terms, key=deglex_key)

    def scaled(self, r: Rational) -> "NCPoly":
        if r == 0:
            return NCPoly.zero()
        return NCPoly._from_acc({w: c.scaled(r) for w, c in self.terms.items()})

    def __add__(self, other: "NCPoly") -> "NCPoly":
        acc = dict(self.terms)
        for w, c in other.terms.items():
            cur = acc.get(w)
            acc[w] = c if cur is None else cur + c
        return NCPoly._from_acc(acc)

    def __sub__(self, other: "NCPoly") -> "NCPoly":
        return self + other.scaled(-1)

    def __neg__(self) -> "NCPoly":
        return self.scaled(-1)

    def __mul__(self, other):
        if isinstance(other, NCPoly):
            return poly_mul(self, other)
        return self.scaled(other)

    def __rmul__(self, other):
        return self.scaled(other)

    def __eq__(self, other) -> bool:
        return isinstance(other, NCPoly) and self.terms == other.terms

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for w in self.sorted_words():
            c = self.terms[w]
            if c.coeffs:
                negative = False
                coeff = f"({format_affine(c)})"
            else:
                negative = c.const < 0
                mag = -c.const if negative else c.const
                coeff = "" if mag == 1 and w else format_affine(
                    AffineForm.constant(mag))
            body = (coeff + " " + (str(w) if w else "")).strip()
            if not out:
                out.append(f"-{body}" if negative else body)
            else:
                out.append(f" - {body}" if negative else f" + {body}")
        return "".join(out)

    def __repr__(self) -> str:
        return f"NCPoly({len(self.terms)} terms)"


def poly_mul(a: NCPoly, b: NCPoly) -> NCPoly:
    """Distribute word multiplication; the result stays linear in unknowns."""
    if a.has_unknowns and b.has_unknowns:
        raise NonlinearProductError(
            "both factors carry unknowns; product would not be linear")
    acc: dict[Word, AffineForm] = {}
    for wa, ca in a.terms.items():
        for wb, cb in b.terms.items():
            w = word_mul(wa, wb)
            piece = affine_product(ca, cb)
            cur = acc.get(w)
            acc[w] = piece if cur is None else cur + piece
    return NCPoly._from_acc(acc)


def poly_pow(p: NCPoly, k: int) -> NCPoly:
    """p**k; negative k only for a single word with unit coefficient."""
    if k == 0:
        return NCPoly.one()
    if k > 0:
        out = p
        for _ in range(k - 1):
            out = poly_mul(out, p)
        return out
    if len(p.terms) != 1:
        raise NotInvertibleError(
            "negative power of a multi-term polynomial")
    (word, coeff), = p.terms.items()
    if coeff.coeffs or coeff.const != 1:
        raise NotInvertibleError(
            "negative power requires unit coefficient")
    return NCPoly.from_word(word_pow(word, k))


class Derivation:
    """A derivation of the algebra, determined by its images of u and v.

    Images of the inverses are derived, never stored independently:
    d(g^-1) = -g^-1 d(g) g^-1, forced by d(g g^-1) = 0.
    """

    __slots__ = ("image_u", "image_v", "name", "_letter_images")

    def __init__(self, image_u: NCPoly, image_v: NCPoly, name: str = ""):
        self.image_u = image_u
        self.image_v = image_v
        self.name = name
        self._letter_images = (
            image_u,
            image_v,
            _inverse_image(image_u, U_INV),
            _inverse_image(image_v, V_INV),
        )

    def letter_image(self, g: int) -> NCPoly:
        return self._letter_images[g]

    @property
    def has_unknowns(self) -> bool:
        return self.image_u.has_unknowns or self.image_v.has_unknowns

    def __repr__(self) -> str:
        return f"Derivation({self.name or 'unnamed'})"


def _inverse_image(image: NCPoly, inv_letter: int) -> NCPoly:
    # -g^-1 * image * g^-1; sandwiching by a fixed word is injective, so the
    # terms never collide.
    g = (inv_letter,)
    return NCPoly._from_acc({
        word_mul(word_mul(g, w), g): c.scaled(-1)
        for w, c in image.terms.items()
    })


def apply_derivation(d: Derivation, p: NCPoly) -> NCPoly:
    """Leibniz rule over every letter of every word of ``p``.

    At most one of the derivation's images and ``p``'s coefficients may
    carry unknowns, keeping the result affine.
    """
    if d.has_unknowns and p.has_unknowns:
        raise NonlinearProductError(
            "derivation images and polynomial both carry unknowns")
    images = d._letter_images
    acc: dict[Word, AffineForm] = {}
    for word, coeff in p.terms.items():
        for i, g in enumerate(word):
            prefix = word[:i]
            suffix = word[i + 1:]
            for iw, ic in images[g].terms.items():
                w = word_mul(word_mul(prefix, iw), suffix)
                piece = affine_product(coeff, ic)
                cur = acc.get(w)
                acc[w] = piece if cur is None else cur + piece
    return NCPoly._from_acc(acc)
