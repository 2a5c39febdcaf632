"""Graded algebras presented by skew-commutation and square-zero rules.

Generators are written ``x1 .. xn`` in text and stored as 0-based letters
inside words (tuples of ints).  Two presentation shapes are supported:

* ``skew``: ``x_j x_i = -alpha[i][j] x_i x_j`` for ``i < j`` plus ``x_i^2 = 0``
  for ``i`` in the square-zero set.  Normal words are weakly increasing words
  in which no square-zero letter repeats.
* ``free``: only the square-zero rules.  Normal words are those in which no
  square-zero letter occurs twice in a row.

Both rewriting systems are confluent, so a normal form is computed word by
word and cached.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement, product
from typing import Iterable

from . import linalg
from .errors import (
    BadAlpha,
    InhomogeneousInput,
    MixedAlgebras,
    NotInvertible,
    NotNormal,
    NotRegularInWindow,
    RelationNotPreserved,
)
from .scalar import Field, FieldElem

__all__ = [
    "PresentedAlgebra",
    "AlgebraElement",
    "GradedAutomorphism",
    "NormalElement",
    "normal_form",
    "multiply",
    "basis_of_degree",
    "hilbert_window",
    "quotient_hilbert_window",
    "ideal_echelon",
    "apply_automorphism",
    "normalizing_automorphism",
    "is_regular_window",
    "opposite_algebra",
    "format_word",
    "format_element",
    "skew_alpha",
]

DEFAULT_WINDOW = 8


def skew_alpha(field: Field, n: int, pairs: dict, default=None):
    """Full alpha matrix from ``{(i, j): value}`` with 1-based ``i < j``.

    Entries below the diagonal are the inverses of those above it.  Pairs not
    listed take ``default`` (an error when ``default`` is None).
    """
    M = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if (i + 1, j + 1) in pairs:
                v = field.convert(pairs[(i + 1, j + 1)])
            elif (j + 1, i + 1) in pairs:
                v = field.inv(field.convert(pairs[(j + 1, i + 1)]))
            elif default is not None:
                v = field.convert(default)
            else:
                raise BadAlpha(f"alpha_{i + 1}{j + 1} missing")
            if v == 0:
                raise BadAlpha(f"alpha_{i + 1}{j + 1} is zero")
            M[i][j] = v
            M[j][i] = field.inv(v)
    return M


class PresentedAlgebra:
    """A connected graded algebra generated in degree one.

    ``alpha`` is an n x n matrix (0-based rows/columns, diagonal ignored) for
    the skew shape.  ``square_zero`` holds 1-based generator indices.
    """

    def __init__(self, field: Field, n: int, commutation: str = "skew", alpha=None,
                 square_zero: Iterable[int] = ()):
        if n < 1:
            raise ValueError("need at least one generator")
        if commutation not in ("skew", "free"):
            raise ValueError(f"unknown commutation shape {commutation!r}")
        self.field = field
        self.n = n
        self.commutation = commutation
        Z = frozenset(int(i) for i in square_zero)
        if not all(1 <= i <= n for i in Z):
            raise ValueError(f"square-zero index out of range: {sorted(Z)}")
        self.square_zero = Z
        self._Z = frozenset(i - 1 for i in Z)
        if commutation == "skew":
            if alpha is None:
                raise BadAlpha("skew presentation needs an alpha matrix")
            if len(alpha) != n or any(len(row) != n for row in alpha):
                raise BadAlpha("alpha must be n x n")
            M = [[None] * n for _ in range(n)]
            for i in range(n):
                for j in range(n):
                    if i != j:
                        M[i][j] = field.convert(alpha[i][j])
            for i in range(n):
                for j in range(i + 1, n):
                    if field.mul(M[i][j], M[j][i]) != field.one:
                        raise BadAlpha(
                            f"alpha_{i + 1}{j + 1} * alpha_{j + 1}{i + 1} != 1"
                        )
            self.alpha = tuple(tuple(r) for r in M)
        else:
            if alpha is not None:
                raise BadAlpha("free presentation takes no alpha")
            self.alpha = None
        self._nf_cache: dict = {}
        self._basis_cache: dict = {}
        self._index_cache: dict = {}

    # construction helpers
    @classmethod
    def skew(cls, field: Field, alpha, square_zero=()):
        return cls(field, len(alpha), "skew", alpha, square_zero)

    @classmethod
    def free(cls, field: Field, n: int, square_zero=()):
        return cls(field, n, "free", None, square_zero)

    @classmethod
    def polynomial(cls, field: Field, n: int):
        """Commutative polynomial ring k[x1..xn] (skew with alpha = -1)."""
        return cls.skew(field, skew_alpha(field, n, {}, default=-1))

    @classmethod
    def exterior(cls, field: Field, n: int, alpha=None):
        """Skew exterior algebra; plain exterior algebra when alpha is None."""
        if alpha is None:
            alpha = skew_alpha(field, n, {}, default=1)
        return cls.skew(field, alpha, range(1, n + 1))

    def key(self):
        return (self.field, self.n, self.commutation, self.alpha, self.square_zero)

    def __eq__(self, other):
        return isinstance(other, PresentedAlgebra) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        Z = sorted(self.square_zero)
        if self.commutation == "free":
            return f"PresentedAlgebra(free, n={self.n}, {self.field!r}, square_zero={Z})"
        a = {
            f"{i + 1}{j + 1}": self.field.fmt(self.alpha[i][j])
            for i in range(self.n)
            for j in range(i + 1, self.n)
        }
        return f"PresentedAlgebra(skew, n={self.n}, {self.field!r}, alpha={a}, square_zero={Z})"

    # rewriting
    def reduce_word(self, w: tuple):
        """Normal form of a single word as ``(coeff, word)``, or None for zero."""
        try:
            return self._nf_cache[w]
        except KeyError:
            pass
        F = self.field
        Z = self._Z
        if self.commutation == "free":
            res = (F.one, w)
            for a, b in zip(w, w[1:]):
                if a == b and a in Z:
                    res = None
                    break
        else:
            c = F.one
            al = self.alpha
            for p in range(len(w)):
                wp = w[p]
                for q in range(p + 1, len(w)):
                    if w[q] < wp:
                        c = F.mul(c, F.neg(al[w[q]][wp]))
            s = tuple(sorted(w))
            res = (c, s)
            for a, b in zip(s, s[1:]):
                if a == b and a in Z:
                    res = None
                    break
        self._nf_cache[w] = res
        return res

    def is_normal_word(self, w: tuple) -> bool:
        r = self.reduce_word(w)
        return r is not None and r[1] == w and r[0] == self.field.one

    # bases
    def basis(self, e: int) -> list:
        try:
            return self._basis_cache[e]
        except KeyError:
            pass
        if e < 0:
            words: list = []
        elif self.commutation == "skew":
            Z = self._Z
            words = [
                w for w in combinations_with_replacement(range(self.n), e)
                if not any(a == b and a in Z for a, b in zip(w, w[1:]))
            ]
        else:
            Z = self._Z
            words = [
                w for w in product(range(self.n), repeat=e)
                if not any(a == b and a in Z for a, b in zip(w, w[1:]))
            ]
        self._basis_cache[e] = words
        return words

    def index(self, e: int) -> dict:
        try:
            return self._index_cache[e]
        except KeyError:
            idx = {w: i for i, w in enumerate(self.basis(e))}
            self._index_cache[e] = idx
            return idx

    def dim(self, e: int) -> int:
        return len(self.basis(e))

    # elements
    def element(self, terms, degree: int | None = None) -> "AlgebraElement":
        """Normal form of a formal sum given as a dict or (coeff, word) pairs."""
        items = terms.items() if isinstance(terms, dict) else ((w, c) for c, w in terms)
        F = self.field
        out: dict = {}
        for w, c in items:
            w = tuple(w)
            c = F.convert(c)
            if c == 0:
                continue
            if degree is None:
                degree = len(w)
            elif len(w) != degree:
                raise InhomogeneousInput(f"word of length {len(w)} in degree {degree} sum")
            if any(not 0 <= x < self.n for x in w):
                raise ValueError(f"letter out of range in {w}")
            r = self.reduce_word(w)
            if r is None:
                continue
            k, nw = r
            v = F.add(out.get(nw, F.zero), F.mul(c, k))
            if v == 0:
                out.pop(nw, None)
            else:
                out[nw] = v
        return AlgebraElement(self, 0 if degree is None else degree, out)

    def monomial(self, w: tuple, coeff=None) -> "AlgebraElement":
        return self.element({tuple(w): self.field.one if coeff is None else coeff}, len(w))

    def zero(self, degree: int = 0) -> "AlgebraElement":
        return AlgebraElement(self, degree, {})

    def one(self) -> "AlgebraElement":
        return AlgebraElement(self, 0, {(): self.field.one})

    def scalar(self, c) -> "AlgebraElement":
        return self.element({(): c}, 0)

    def gen(self, i: int) -> "AlgebraElement":
        """The generator x_i (1-based)."""
        if not 1 <= i <= self.n:
            raise IndexError(f"no generator x{i}")
        return AlgebraElement(self, 1, {(i - 1,): self.field.one})

    def gens(self) -> list:
        return [self.gen(i) for i in range(1, self.n + 1)]

    def linear_form(self, coeffs) -> "AlgebraElement":
        F = self.field
        return self.element({(j,): F.convert(c) for j, c in enumerate(coeffs)}, 1)

    def multiply(self, a: "AlgebraElement", b: "AlgebraElement") -> "AlgebraElement":
        if a.algebra is not self and a.algebra != self or b.algebra is not self and b.algebra != self:
            raise MixedAlgebras("operands belong to different algebras")
        F = self.field
        out: dict = {}
        red = self.reduce_word
        for w1, c1 in a.terms.items():
            for w2, c2 in b.terms.items():
                r = red(w1 + w2)
                if r is None:
                    continue
                k, nw = r
                v = F.add(out.get(nw, F.zero), F.mul(F.mul(c1, c2), k))
                if v == 0:
                    out.pop(nw, None)
                else:
                    out[nw] = v
        return AlgebraElement(self, a.degree + b.degree, out)

    def coords(self, a: "AlgebraElement") -> list:
        idx = self.index(a.degree)
        v = [self.field.zero] * len(idx)
        for w, c in a.terms.items():
            v[idx[w]] = c
        return v

    def from_coords(self, v, e: int) -> "AlgebraElement":
        return AlgebraElement(self, e, {w: c for w, c in zip(self.basis(e), v) if c != 0})

    def lift(self, a: "AlgebraElement") -> "AlgebraElement":
        return a

    def reduce(self, a: "AlgebraElement") -> "AlgebraElement":
        return a

    @property
    def root(self) -> "PresentedAlgebra":
        return self

    # defining relations, as (word, coeff) dicts of length two
    def relations(self) -> list:
        F = self.field
        rels = []
        if self.commutation == "skew":
            for i in range(self.n):
                for j in range(i + 1, self.n):
                    rels.append({(j, i): F.one, (i, j): self.alpha[i][j]})
        for i in sorted(self._Z):
            rels.append({(i, i): F.one})
        return rels


class AlgebraElement:
    """Homogeneous element: a dict from normal words to nonzero raw scalars."""

    __slots__ = ("algebra", "degree", "terms")

    def __init__(self, algebra, degree: int, terms: dict):
        self.algebra = algebra
        self.degree = degree
        self.terms = terms

    @property
    def field(self):
        return self.algebra.field

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def _check(self, other: "AlgebraElement"):
        if other.algebra is not self.algebra and other.algebra != self.algebra:
            raise MixedAlgebras("operands belong to different algebras")

    def _combine(self, other: "AlgebraElement", sign: int) -> "AlgebraElement":
        self._check(other)
        if not other.terms:
            return self
        if not self.terms:
            return other if sign > 0 else -other
        if self.degree != other.degree:
            raise InhomogeneousInput(f"adding degrees {self.degree} and {other.degree}")
        F = self.field
        out = dict(self.terms)
        op = F.add if sign > 0 else F.sub
        for w, c in other.terms.items():
            v = op(out.get(w, F.zero), c)
            if v == 0:
                out.pop(w, None)
            else:
                out[w] = v
        return AlgebraElement(self.algebra, self.degree, out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        F = self.field
        return AlgebraElement(self.algebra, self.degree, {w: F.neg(c) for w, c in self.terms.items()})

    def scale(self, c) -> "AlgebraElement":
        F = self.field
        c = F.convert(c)
        if c == 0:
            return AlgebraElement(self.algebra, self.degree, {})
        return AlgebraElement(self.algebra, self.degree, {w: F.mul(c, v) for w, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            self._check(other)
            return self.algebra.multiply(self, other)
        if isinstance(other, (int, Fraction, FieldElem, str)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, FieldElem, str)):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        if other.algebra is not self.algebra and other.algebra != self.algebra:
            return False
        if self.terms != other.terms:
            return False
        return self.degree == other.degree or not self.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def coeff(self, word) -> object:
        return self.terms.get(tuple(word), self.field.zero)

    def coords(self) -> list:
        return self.algebra.coords(self)

    def is_scalar(self) -> bool:
        return self.degree == 0

    def scalar_value(self):
        """The constant coefficient of a degree-0 element."""
        return self.terms.get((), self.field.zero)

    def __repr__(self):
        return f"<{format_element(self)} in degree {self.degree}>"

    def __str__(self):
        return format_element(self)


def format_word(w: tuple) -> str:
    """``(0, 0, 1)`` -> ``x1^2*x2``."""
    parts = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        k = j - i
        parts.append(f"x{w[i] + 1}" + (f"^{k}" if k > 1 else ""))
        i = j
    return "*".join(parts)


def format_element(a: AlgebraElement) -> str:
    """Text form in the polynomial grammar; terms in basis order."""
    if not a.terms:
        return "0"
    F = a.field
    idx = a.algebra.index(a.degree)
    pieces = []
    for w in sorted(a.terms, key=lambda w: idx.get(w, len(idx))):
        c = a.terms[w]
        neg = False
        text = F.fmt(c)
        if text.startswith("-"):
            neg, text = True, text[1:]
        if not w:
            body = text
        elif text == "1":
            body = format_word(w)
        else:
            body = f"{text}*{format_word(w)}"
        if not pieces:
            pieces.append(("-" if neg else "") + body)
        else:
            pieces.append(("- " if neg else "+ ") + body)
    return " ".join(pieces)


def normal_form(A: PresentedAlgebra, terms, degree: int | None = None) -> AlgebraElement:
    """Reduce a formal sum of words (dict or ``(coeff, word)`` pairs)."""
    return A.element(terms, degree)


def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return a * b


def basis_of_degree(A, e: int) -> list:
    return list(A.basis(e))


def hilbert_window(A, N: int) -> list:
    return [A.dim(e) for e in range(N + 1)]


def ideal_echelon(A: PresentedAlgebra, f: AlgebraElement, e: int) -> linalg.Echelon:
    """Echelon basis of the degree-e part of the two-sided ideal (f)."""
    F = A.field
    ech = linalg.Echelon(F, A.dim(e))
    d = f.degree
    if f.is_zero() or e < d:
        return ech
    for a in range(e - d + 1):
        for u in A.basis(a):
            uf = A.multiply(A.monomial(u), f)
            if uf.is_zero():
                continue
            for v in A.basis(e - d - a):
                ech.add(A.coords(A.multiply(uf, A.monomial(v))))
                if len(ech) == ech.ncols:
                    return ech
    return ech


def quotient_hilbert_window(A: PresentedAlgebra, f: AlgebraElement, N: int) -> list:
    return [A.dim(e) - len(ideal_echelon(A, f, e)) for e in range(N + 1)]


class GradedAutomorphism:
    """Degree-preserving algebra automorphism given on generators.

    Row ``j`` of ``matrix`` lists the coefficients of ``sigma(x_{j+1})``.
    """

    def __init__(self, algebra: PresentedAlgebra, matrix, check: bool = True):
        F = algebra.field
        n = algebra.n
        if len(matrix) != n or any(len(r) != n for r in matrix):
            raise ValueError("automorphism matrix must be n x n")
        self.algebra = algebra
        self.matrix = tuple(tuple(F.convert(x) for x in row) for row in matrix)
        self._inv_matrix = linalg.inverse(F, [list(r) for r in self.matrix])
        if self._inv_matrix is None:
            raise NotInvertible("automorphism matrix is singular")
        self._gen_images = [
            algebra.element({(k,): self.matrix[j][k] for k in range(n)}, 1) for j in range(n)
        ]
        self._word_cache: dict = {(): algebra.one()}
        self._powers: dict = {1: self}
        if check:
            for rel in algebra.relations():
                img = algebra.zero(2)
                for w, c in rel.items():
                    img = img + self.apply_word(w).scale(c)
                if not img.is_zero():
                    raise RelationNotPreserved(f"relation image {img} is not zero")

    @classmethod
    def identity(cls, algebra: PresentedAlgebra) -> "GradedAutomorphism":
        return cls(algebra, linalg.identity(algebra.field, algebra.n), check=False)

    @classmethod
    def diagonal(cls, algebra: PresentedAlgebra, entries) -> "GradedAutomorphism":
        F = algebra.field
        n = algebra.n
        vals = [F.convert(x) for x in entries]
        return cls(algebra, [[vals[i] if i == j else F.zero for j in range(n)] for i in range(n)])

    def __eq__(self, other):
        return (
            isinstance(other, GradedAutomorphism)
            and self.algebra == other.algebra
            and self.matrix == other.matrix
        )

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        F = self.algebra.field
        rows = [[F.fmt(x) for x in r] for r in self.matrix]
        return f"GradedAutomorphism({rows})"

    def is_identity(self) -> bool:
        F = self.algebra.field
        return all(
            x == (F.one if i == j else F.zero)
            for i, r in enumerate(self.matrix)
            for j, x in enumerate(r)
        )

    def is_diagonal(self) -> bool:
        return all(x == 0 for i, r in enumerate(self.matrix) for j, x in enumerate(r) if i != j)

    def apply_word(self, w: tuple) -> AlgebraElement:
        try:
            return self._word_cache[w]
        except KeyError:
            pass
        img = self.algebra.multiply(self.apply_word(w[:-1]), self._gen_images[w[-1]])
        self._word_cache[w] = img
        return img

    def apply(self, a: AlgebraElement) -> AlgebraElement:
        A = self.algebra
        if a.algebra is not A and a.algebra != A:
            base = getattr(a.algebra, "base", None)
            if base is not None and base == A:
                return a.algebra.reduce(self.apply(a.algebra.lift(a)))
            raise MixedAlgebras("automorphism applied to an element of another algebra")
        F = A.field
        out: dict = {}
        for w, c in a.terms.items():
            for nw, v in self.apply_word(w).terms.items():
                s = F.add(out.get(nw, F.zero), F.mul(c, v))
                if s == 0:
                    out.pop(nw, None)
                else:
                    out[nw] = s
        return AlgebraElement(A, a.degree, out)

    __call__ = apply

    def compose(self, other: "GradedAutomorphism") -> "GradedAutomorphism":
        """``self`` after ``other``."""
        F = self.algebra.field
        M = linalg.matmul(F, [list(r) for r in other.matrix], [list(r) for r in self.matrix])
        return GradedAutomorphism(self.algebra, M, check=False)

    def inverse(self) -> "GradedAutomorphism":
        return self.power(-1)

    def power(self, k: int) -> "GradedAutomorphism":
        try:
            return self._powers[k]
        except KeyError:
            pass
        if k == 0:
            res = GradedAutomorphism.identity(self.algebra)
        elif k == -1:
            res = GradedAutomorphism(self.algebra, self._inv_matrix, check=False)
        elif k < 0:
            res = self.power(-1).power(-k)
        else:
            half = self.power(k // 2)
            res = half.compose(half)
            if k % 2:
                res = res.compose(self)
        self._powers[k] = res
        return res


def apply_automorphism(sigma: GradedAutomorphism, a: AlgebraElement) -> AlgebraElement:
    return sigma.apply(a)


def _mult_matrix(A, f: AlgebraElement, e: int, left: bool):
    """Matrix of S_e -> S_{e+d}, u -> f u (left) or u f (right), columns = u."""
    cols = []
    for u in A.basis(e):
        m = A.monomial(u)
        prod_ = A.multiply(f, m) if left else A.multiply(m, f)
        cols.append(A.coords(prod_) if not prod_.is_zero() else [A.field.zero] * A.dim(e + f.degree))
    return linalg.transpose(cols, A.dim(e + f.degree)) if cols else []


def is_regular_window(A: PresentedAlgebra, f: AlgebraElement, N: int = DEFAULT_WINDOW) -> bool:
    """Left and right multiplication by f are injective on degrees 0..N."""
    F = A.field
    if f.is_zero():
        return False
    for e in range(N + 1):
        de = A.dim(e)
        if de == 0:
            continue
        for left in (True, False):
            M = _mult_matrix(A, f, e, left)
            if linalg.rank(F, M) != de:
                return False
    return True


@dataclass(frozen=True)
class NormalElement:
    """A regular normal element together with its normalizing automorphism."""

    f: AlgebraElement
    d: int
    nu: GradedAutomorphism
    window: int = DEFAULT_WINDOW

    @property
    def algebra(self):
        return self.f.algebra


def normalizing_automorphism(A: PresentedAlgebra, f: AlgebraElement,
                             N: int = DEFAULT_WINDOW) -> NormalElement:
    """Solve ``x_j f = f nu(x_j)`` in degree d+1 and certify regularity up to N."""
    if f.algebra != A:
        raise MixedAlgebras("f is not an element of this algebra")
    if f.is_zero() or f.degree < 1:
        raise NotNormal("f must be nonzero of positive degree")
    F = A.field
    d = f.degree
    cols = [A.coords(A.multiply(f, x)) for x in A.gens()]
    M = linalg.transpose(cols, A.dim(d + 1))
    rows = []
    for x in A.gens():
        sol = linalg.solve(F, M, A.coords(A.multiply(x, f)), A.n)
        if sol is None:
            raise NotNormal(f"{x} f is not in f S_1")
        rows.append(sol)
    try:
        nu = GradedAutomorphism(A, rows)
    except (NotInvertible, RelationNotPreserved) as exc:
        raise NotNormal(f"conjugation by f is not an automorphism: {exc}") from None
    if not is_regular_window(A, f, N):
        raise NotRegularInWindow(f"f is a zero divisor in degrees <= {N}")
    return NormalElement(f, d, nu, N)


def opposite_algebra(A: PresentedAlgebra):
    """Return ``(A_op, reverse)``; ``reverse`` maps elements of A or A_op across."""
    if A.commutation == "skew":
        n = A.n
        alpha = [[A.alpha[j][i] if i != j else None for j in range(n)] for i in range(n)]
        Aop = PresentedAlgebra(A.field, n, "skew", alpha, A.square_zero)
    else:
        Aop = PresentedAlgebra(A.field, A.n, "free", None, A.square_zero)

    def reverse(a: AlgebraElement) -> AlgebraElement:
        target = Aop if a.algebra == A else A
        if a.algebra != A and a.algebra != Aop:
            raise MixedAlgebras("element of an unrelated algebra")
        return target.element({w[::-1]: c for w, c in a.terms.items()}, a.degree)

    return Aop, reverse
