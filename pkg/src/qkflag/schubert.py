"""Weyl-group combinatorics and divided-difference Schubert representatives.

Schubert classes are represented by polynomials in the subbundle generators
e_l(X^(i)) with coefficients Laurent in the torus characters T_i, and never
involving the Novikov variables.  The top class (the Schubert point) is the
explicit product

    prod_{i=1}^{k} prod_{j=r_i}^{r_{i+1}-1} prod_{l=1}^{r_i} (1 - T_{n-j}^{-1} X^(i)_l),

and every other class is reached by the divided-difference operators

    rho_i(f) = (T_i f - T_{i+1} s_i(f)) / (T_i - T_{i+1}),

acting on T-coefficients only (s_i swaps T_i and T_{i+1}) and extended
linearly over generator monomials.  The division is always exact, which the
implementation checks on every application.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .errors import IndexOutOfRange, InvalidShape
from .polycore import LaurentPoly, VarRegistry
from .presentations import FlagShape, whitney_registry

# -- permutations (one-line notation, values 1..n) -----------------------------


def identity_perm(n: int) -> tuple:
    return tuple(range(1, n + 1))


def compose(u: tuple, v: tuple) -> tuple:
    """(uv)(i) = u(v(i))."""
    return tuple(u[v[i] - 1] for i in range(len(u)))


def inverse_perm(w: tuple) -> tuple:
    out = [0] * len(w)
    for i, v in enumerate(w):
        out[v - 1] = i + 1
    return tuple(out)


def simple_reflection(i: int, n: int) -> tuple:
    if not 1 <= i <= n - 1:
        raise IndexOutOfRange(f"s_{i} undefined for n={n}")
    w = list(range(1, n + 1))
    w[i - 1], w[i] = w[i], w[i - 1]
    return tuple(w)


def perm_length(w: tuple) -> int:
    """Number of inversions."""
    n = len(w)
    return sum(1 for i in range(n) for j in range(i + 1, n) if w[i] > w[j])


def longest_element(n: int) -> tuple:
    return tuple(range(n, 0, -1))


def lex_least_reduced_word(w: tuple) -> tuple:
    """Greedy left-descent peeling gives the lexicographically least word."""
    word = []
    w = tuple(w)
    inv = inverse_perm(w)
    while True:
        for i in range(1, len(w)):
            if inv[i - 1] > inv[i]:  # i appears after i+1, so s_i w < w
                word.append(i)
                w = compose(simple_reflection(i, len(w)), w)
                inv = inverse_perm(w)
                break
        else:
            return tuple(word)


def all_reduced_words(w: tuple):
    """Every reduced word of w, by recursive left-descent peeling."""
    if perm_length(w) == 0:
        yield ()
        return
    inv = inverse_perm(w)
    for i in range(1, len(w)):
        if inv[i - 1] > inv[i]:
            for rest in all_reduced_words(compose(simple_reflection(i, len(w)), w)):
                yield (i,) + rest


def word_to_perm(word, n: int) -> tuple:
    w = identity_perm(n)
    for i in word:
        w = compose(w, simple_reflection(i, n))
    return w


class WeylElement:
    """A permutation with cached length and lex-least reduced word."""

    __slots__ = ("perm", "length", "_word")

    def __init__(self, perm):
        self.perm = tuple(perm)
        self.length = perm_length(self.perm)
        self._word = None

    @property
    def reduced_word(self) -> tuple:
        if self._word is None:
            self._word = lex_least_reduced_word(self.perm)
        return self._word

    @property
    def n(self) -> int:
        return len(self.perm)

    def __mul__(self, other):
        return WeylElement(compose(self.perm, other.perm))

    def __eq__(self, other):
        return isinstance(other, WeylElement) and self.perm == other.perm

    def __hash__(self):
        return hash(self.perm)

    def __repr__(self):
        return f"WeylElement{self.perm}"


def descent_positions(shape: FlagShape) -> frozenset:
    """Positions i where descents are allowed for minimal coset representatives."""
    return frozenset(shape.ranks)


def is_minimal_rep(w: tuple, shape: FlagShape) -> bool:
    allowed = descent_positions(shape)
    return all(w[i - 1] < w[i] for i in range(1, len(w)) if i not in allowed)


def coset_min(w: tuple, shape: FlagShape) -> tuple:
    """Sort within each rank block: the minimal representative of w W_r."""
    r = shape.extended_ranks
    out = []
    for a, b in zip(r, r[1:]):
        out.extend(sorted(w[a:b]))
    return tuple(out)


def minimal_coset_reps(shape: FlagShape) -> list[WeylElement]:
    """All of W^r, ordered by (length, one-line notation)."""
    r = shape.extended_ranks
    values = set(range(1, shape.n + 1))
    reps = []

    def build(prefix, remaining, block):
        if block == len(r) - 1:
            reps.append(tuple(prefix))
            return
        size = r[block + 1] - r[block]
        for chosen in itertools.combinations(sorted(remaining), size):
            build(prefix + list(chosen), remaining - set(chosen), block + 1)

    build([], values, 0)
    out = [WeylElement(w) for w in reps]
    out.sort(key=lambda e: (e.length, e.perm))
    return out


# -- Grassmannian partition dictionary ------------------------------------------


def partition_to_perm(shape: FlagShape, partition) -> WeylElement:
    """Grassmannian shapes only: the minimal representative indexed by a
    partition inside the r x (n-r) rectangle."""
    if shape.k != 1:
        raise InvalidShape("partition indexing needs a Grassmannian shape")
    r, n = shape.ranks[0], shape.n
    lam = tuple(partition) + (0,) * (r - len(partition))
    if len(lam) > r or any(a < b for a, b in zip(lam, lam[1:])) or lam[0] > n - r:
        raise IndexOutOfRange(f"partition {partition} not in {r}x{n-r}")
    first = [lam[r - i] + i for i in range(1, r + 1)]
    rest = sorted(set(range(1, n + 1)) - set(first))
    return WeylElement(tuple(first + rest))


def perm_to_partition(shape: FlagShape, w: WeylElement) -> tuple:
    if shape.k != 1:
        raise InvalidShape("partition indexing needs a Grassmannian shape")
    r = shape.ranks[0]
    lam = tuple(w.perm[r - i] - i for i in range(1, r + 1))
    return tuple(p for p in lam if p)


def parse_partition(text: str) -> tuple:
    """Accepts "(2,1)", "2,1", "()" and the empty-set names "", "0", "empty"."""
    t = text.strip().strip("()")
    if t in ("", "0", "empty", "∅"):
        return ()
    return tuple(int(p) for p in t.split(","))


# -- divided-difference operators ------------------------------------------------


class SchubertPoly:
    """A Schubert-class representative tagged with its flag shape."""

    __slots__ = ("shape", "poly")

    def __init__(self, shape: FlagShape, poly: LaurentPoly):
        self.shape = shape
        self.poly = poly

    def __eq__(self, other):
        return (isinstance(other, SchubertPoly)
                and self.shape == other.shape and self.poly == other.poly)

    def is_q_free(self) -> bool:
        return all(
            e[i] == 0
            for e in self.poly.terms
            for i, v in enumerate(self.poly.reg.vars) if v.sort == "Q"
        )

    def __repr__(self):
        return f"SchubertPoly({self.shape}, {self.poly})"


def _t_positions(reg: VarRegistry, i: int):
    return reg.t_position(i), reg.t_position(i + 1)


def rho_poly(i: int, f: LaurentPoly) -> LaurentPoly:
    """(T_i f - T_{i+1} s_i f) / (T_i - T_{i+1}); the division is exact because
    the numerator is s_i-antisymmetric, and exactness is verified."""
    reg = f.reg
    pi, pj = _t_positions(reg, i)
    swapped = f.apply_permutation({pi: pj, pj: pi})
    ti = reg.monomial({f"T{i}": 1})
    tj = reg.monomial({f"T{i+1}": 1})
    return (ti * f - tj * swapped).divexact(ti - tj)


def rho(i: int, f: SchubertPoly) -> SchubertPoly:
    if not 1 <= i <= f.shape.n - 1:
        raise IndexOutOfRange(f"rho_{i} undefined for n={f.shape.n}")
    return SchubertPoly(f.shape, rho_poly(i, f.poly))


def delta_on_exp(i: int, chi: LaurentPoly) -> LaurentPoly:
    """Closed form of the divided difference on a T-Laurent monomial e^chi:

    fixed by s_i -> itself; otherwise e^chi (1 - t^{1+m})/(1-t) with
    t = T_{i+1}/T_i and m = <chi, alpha_i^vee> = exp_i - exp_{i+1}, i.e. a
    geometric sum for m >= 0, zero at m = -1, minus a sum for m <= -2.
    """
    reg = chi.reg
    if len(chi.terms) != 1:
        raise ValueError("expected a single monomial")
    (exps, coeff), = chi.terms.items()
    pi, pj = _t_positions(reg, i)
    m = exps[pi] - exps[pj]
    if m == 0:
        return chi
    t = reg.monomial({f"T{i}": -1, f"T{i+1}": 1})  # e^{-alpha_i}
    out = reg.zero()
    if m > 0:
        step = reg.one()
        for _ in range(m + 1):
            out = out + step
            step = step * t
    elif m == -1:
        return reg.zero()
    else:
        tinv = t.inverse()
        step = tinv
        for _ in range(-m - 1):
            out = out - step
            step = step * tinv
    return chi * out


def point_class(shape: FlagShape, reg: VarRegistry | None = None) -> SchubertPoly:
    """Representative of the Schubert point, expanded in the e_l(X^(i))."""
    if reg is None:
        reg = whitney_registry(shape)
    r = shape.extended_ranks
    out = reg.one()
    for i in range(1, shape.k + 1):
        for j in range(r[i], r[i + 1]):
            factor = reg.one()
            for ell in range(1, r[i] + 1):
                factor = factor + reg.monomial(
                    {f"T{shape.n - j}": -ell, f"e{ell}X{i}": 1},
                    (-1) ** ell,
                )
            out = out * factor
    return SchubertPoly(shape, out)


def schubert_representative(shape: FlagShape, word, reg: VarRegistry | None = None) -> SchubertPoly:
    """Apply the divided differences along `word`, first entry first, to the
    point class.  Q-free by construction."""
    f = point_class(shape, reg)
    for i in word:
        f = rho(i, f)
    return f


def word_for_class_via_ww0(shape: FlagShape, w: WeylElement) -> tuple:
    """Operator word reaching O^w from the point class: the reduced word of
    w w_0, applied right-to-left (so reversed for sequential application)."""
    ww0 = WeylElement(compose(w.perm, longest_element(shape.n)))
    return tuple(reversed(ww0.reduced_word))


def word_for_class_via_w(shape: FlagShape, w: WeylElement) -> tuple:
    """The literal rho_w reading: reduced word of w itself, rightmost first.

    Pinned against printed data this convention does NOT reproduce the
    Schubert classes; it is shipped so the discrepancy stays visible.  Use
    ``word_for_class_via_ww0``.
    """
    return tuple(reversed(w.reduced_word))


def class_representative(shape: FlagShape, w: WeylElement, reg=None) -> SchubertPoly:
    return schubert_representative(shape, word_for_class_via_ww0(shape, w), reg)


@lru_cache(maxsize=None)
def _basis_cached(shape_key):
    shape = FlagShape(*shape_key)
    reps = minimal_coset_reps(shape)
    return [(w, class_representative(shape, w)) for w in reps]


def schubert_basis(shape: FlagShape):
    """All (WeylElement, representative) pairs for W^r, by increasing length."""
    return _basis_cached((shape.ranks, shape.n))


def sl_specialize(f: LaurentPoly) -> LaurentPoly:
    """Impose T_1 ... T_n = 1 by eliminating T_n (canonical SL_n form)."""
    reg = f.reg
    n = max(v.j for v in reg.vars if v.sort == "T")
    pn = reg.t_position(n)
    others = [reg.t_position(i) for i in range(1, n)]
    out = reg.zero()
    for exps, c in f.terms.items():
        e = list(exps)
        k = e[pn]
        if k:
            e[pn] = 0
            for p in others:
                e[p] -= k
        out = out + LaurentPoly(reg, {tuple(e): c})
    return out


def schubert_to_json(shape: FlagShape, w: WeylElement | None, word, rep: SchubertPoly) -> dict:
    from .polycore import poly_to_json_terms

    return {
        "shape": {"ranks": list(shape.ranks), "n": shape.n},
        "weyl_element": list(w.perm) if w is not None else None,
        "word": list(word),
        "representative": poly_to_json_terms(rep.poly),
    }
