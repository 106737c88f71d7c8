"""Toda-type and Whitney presentations of quantum K rings of flag varieties.

A flag shape (r_1, ..., r_k; n) fixes alphabets

* Y^(j), j = 0..k, of size r_{j+1} - r_j   (quotient bundles S_{j+1}/S_j),
* X^(j), j = 1..k, of size r_j             (subbundles S_j),

which only ever appear through their elementary symmetric pieces; those pieces
are the registry generators e_l(Y^(j)), e_l(X^(j)).  The Toda-type relations
are the y-coefficients of

    prod_l (1 + y T_l)  -  det(tridiagonal quantum matrix),

the Whitney relations quantize lambda_y(S_j) * lambda_y(S_{j+1}/S_j) =
lambda_y(S_{j+1}), and eliminating the X-generators from the latter recovers
the former.  The full-flag case also has a presentation on the determinant
line bundles P_j, tied to the finite-difference Toda chain through the
polynomials built by ``toda_polynomials``.
"""

from __future__ import annotations

import itertools
import json

from .errors import EliminationFailure, IndexOutOfRange, InvalidShape
from .polycore import (
    LaurentPoly,
    QLocalized,
    VarRegistry,
    elem_sym,
    poly_to_latex,
    qloc_to_json,
    qloc_to_latex,
    registry,
    y_coefficients,
)


class FlagShape:
    """A partial flag shape: n and strictly increasing ranks r_1 < ... < r_k."""

    __slots__ = ("n", "ranks")

    def __init__(self, ranks, n):
        ranks = tuple(ranks)
        if not ranks or n < 2:
            raise InvalidShape(f"need k >= 1 and n >= 2, got {ranks}, {n}")
        if ranks[0] < 1 or ranks[-1] > n - 1:
            raise InvalidShape(f"ranks {ranks} out of range for n={n}")
        if any(a >= b for a, b in zip(ranks, ranks[1:])):
            raise InvalidShape(f"ranks {ranks} not strictly increasing")
        self.ranks = ranks
        self.n = n

    @classmethod
    def parse(cls, text: str) -> "FlagShape":
        """Parse "r1,r2,...;n", e.g. "1,2;3"."""
        try:
            rtext, ntext = text.split(";")
            ranks = tuple(int(r) for r in rtext.split(","))
            return cls(ranks, int(ntext))
        except (ValueError, AttributeError) as exc:
            raise InvalidShape(f"cannot parse shape {text!r}") from exc

    @classmethod
    def full_flag(cls, n: int) -> "FlagShape":
        return cls(tuple(range(1, n)), n)

    @property
    def k(self) -> int:
        return len(self.ranks)

    @property
    def extended_ranks(self):
        """(r_0, ..., r_{k+1}) with r_0 = 0 and r_{k+1} = n."""
        return (0,) + self.ranks + (self.n,)

    def size(self, j: int) -> int:
        """Rank of S_{j+1}/S_j, i.e. r_{j+1} - r_j, for 0 <= j <= k."""
        r = self.extended_ranks
        return r[j + 1] - r[j]

    @property
    def is_full(self) -> bool:
        return self.ranks == tuple(range(1, self.n))

    def __eq__(self, other):
        return isinstance(other, FlagShape) and (self.ranks, self.n) == (other.ranks, other.n)

    def __hash__(self):
        return hash((self.ranks, self.n))

    def __repr__(self):
        return f"FlagShape({','.join(map(str, self.ranks))};{self.n})"

    def __str__(self):
        return f"{','.join(map(str, self.ranks))};{self.n}"


def all_shapes(max_n: int, min_n: int = 2):
    """Every shape with min_n <= n <= max_n, in deterministic order."""
    out = []
    for n in range(min_n, max_n + 1):
        for k in range(1, n):
            for ranks in itertools.combinations(range(1, n), k):
                out.append(FlagShape(ranks, n))
    return out


# -- registries ----------------------------------------------------------------


def toda_registry(shape: FlagShape) -> VarRegistry:
    sizes = {j: shape.size(j) for j in range(shape.k + 1)}
    return registry(("EY", sizes), ("y",), ("Q", shape.k), ("T", shape.n))


def whitney_registry(shape: FlagShape) -> VarRegistry:
    xsizes = {j: shape.ranks[j - 1] for j in range(1, shape.k + 1)}
    ysizes = {j: shape.size(j) for j in range(1, shape.k + 1)}
    return registry(("EX", xsizes), ("EY", ysizes), ("y",), ("Q", shape.k), ("T", shape.n))


def fln_p_registry(n: int) -> VarRegistry:
    return registry(("P", n), ("y",), ("Q", n - 1), ("T", n))


def pq_registry(n: int) -> VarRegistry:
    return registry(("P", n), ("Q", n - 1))


# -- lambda_y assembly ----------------------------------------------------------


def lambda_y_alphabet(reg: VarRegistry, letter: str, j: int, size: int) -> LaurentPoly:
    """sum_l y^l e_l(alphabet) with e_0 = 1, in the registry generators."""
    out = reg.one()
    for ell in range(1, size + 1):
        out = out + reg.monomial({"y": ell, f"e{ell}{letter}{j}": 1})
    return out


def lambda_y_cn(reg: VarRegistry, n: int) -> LaurentPoly:
    """prod_{l=1}^{n} (1 + y T_l)."""
    y = reg.gen("y")
    out = reg.one()
    for i in range(1, n + 1):
        out = out * (1 + y * reg.gen(f"T{i}"))
    return out


# -- tridiagonal determinant ------------------------------------------------------


class TridiagMatrix:
    """Tridiagonal matrix with subdiagonal 1: diagonal A_0..A_k, super B_1..B_k."""

    __slots__ = ("A", "B")

    def __init__(self, A, B):
        if len(A) != len(B) + 1:
            raise ValueError("need one more diagonal entry than superdiagonal")
        self.A = [QLocalized.wrap(a) for a in A]
        self.B = [QLocalized.wrap(b) for b in B]

    @classmethod
    def from_lambda_parts(cls, diag_parts, B):
        """Quantum matrix with A_j = (lambda_y part)_j + B_j, B_0 = 0 implied.

        Each B_j must carry denominator exponent at most 1 in its own (1-Q_j).
        """
        B = [QLocalized.wrap(b) for b in B]
        for j, b in enumerate(B, start=1):
            if any(jj != j or m > 1 for jj, m in b.den.items()):
                raise ValueError(f"B_{j} denominator must be (1-Q_{j})^<=1")
        A = [QLocalized.wrap(diag_parts[0])]
        A += [QLocalized.wrap(d) + b for d, b in zip(diag_parts[1:], B)]
        return cls(A, B)

    @property
    def size(self) -> int:
        return len(self.A)


def tridiag_det(M: TridiagMatrix) -> QLocalized:
    """Determinant via the last-row expansion U_{j+1} = A_j U_j - B_j U_{j-1}."""
    u_prev = QLocalized.from_poly(M.A[0].reg.one())  # U_0
    u = M.A[0]  # U_1
    for j in range(1, M.size):
        u, u_prev = M.A[j] * u - M.B[j - 1] * u_prev, u
    return u


# -- presentations ------------------------------------------------------------------


class Presentation:
    """A named generating set plus relations for one quantum K ring."""

    __slots__ = ("shape", "flavor", "reg", "generators", "relations", "keys")

    def __init__(self, shape, flavor, reg, generators, relations, keys):
        self.shape = shape
        self.flavor = flavor
        self.reg = reg
        self.generators = list(generators)
        self.relations = list(relations)
        self.keys = list(keys)  # (y-exponent, block index) per relation

    def cleared_relations(self) -> list[LaurentPoly]:
        """Relations multiplied by their (1-Q_j)^m denominators and, for
        Laurent generators, by enough generator monomials to clear inverses."""
        out = []
        gen_positions = [
            i for i, v in enumerate(self.reg.vars) if v.sort in ("P", "EX", "EY")
        ]
        for rel in self.relations:
            num, _ = rel.clear_denominators()
            shift = {}
            for i in gen_positions:
                m = min((e[i] for e in num.terms), default=0)
                if m < 0:
                    shift[self.reg.names[i]] = -m
            if shift:
                num = num * self.reg.monomial(shift)
            out.append(num)
        return out

    def classical(self) -> list[LaurentPoly]:
        """The Q -> 0 specialization of every relation."""
        zero = {f"Q{j}": self.reg.zero() for j in range(1, self.shape.k + 1)}
        out = []
        for rel in self.relations:
            s = rel.substitute(zero, target=self.reg)
            assert s.is_polynomial()
            out.append(s.num)
        return out

    def to_json(self) -> dict:
        return {
            "shape": {"ranks": list(self.shape.ranks), "n": self.shape.n},
            "flavor": self.flavor,
            "generators": list(self.generators),
            "relations": [qloc_to_json(r) for r in self.relations],
        }

    def to_json_str(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=True)

    def to_latex(self) -> str:
        lines = [f"0 &= {qloc_to_latex(r)} \\\\" for r in self.relations]
        return "\\begin{aligned}\n" + "\n".join(lines) + "\n\\end{aligned}"

    def __repr__(self):
        return f"Presentation({self.shape}, {self.flavor}, {len(self.relations)} relations)"


def _toda_matrix(shape: FlagShape, reg: VarRegistry) -> TridiagMatrix:
    k = shape.k
    diag = [lambda_y_alphabet(reg, "Y", j, shape.size(j)) for j in range(k + 1)]
    B = []
    for j in range(1, k + 1):
        s = shape.size(j)
        top = reg.monomial({"y": s, f"e{s}Y{j}": 1, f"Q{j}": 1})
        B.append(QLocalized(top, {j: 1}, reduce=False))
    return TridiagMatrix.from_lambda_parts(diag, B)


def toda_presentation(shape: FlagShape) -> Presentation:
    """Relations = y-coefficients of prod(1 + y T_l) minus the quantum determinant."""
    reg = toda_registry(shape)
    det = tridiag_det(_toda_matrix(shape, reg))
    diff = QLocalized.wrap(lambda_y_cn(reg, shape.n)) - det
    coeffs = y_coefficients(diff)
    if coeffs and not coeffs[0].is_zero():
        raise EliminationFailure("constant y-coefficient should vanish")
    relations = coeffs[1:]
    while len(relations) < shape.n:
        relations.append(QLocalized.from_poly(reg.zero()))
    gens = [v.name for v in reg.vars if v.sort == "EY"]
    keys = [(ell, 0) for ell in range(1, len(relations) + 1)]
    return Presentation(shape, "toda", reg, gens, relations, keys)


def whitney_presentation(shape: FlagShape) -> Presentation:
    """One block of relations per step S_j subset S_{j+1}, j = 1..k."""
    reg = whitney_registry(shape)
    r = shape.extended_ranks
    k = shape.k
    lam_x = {0: reg.one(), k + 1: lambda_y_cn(reg, shape.n)}
    for j in range(1, k + 1):
        lam_x[j] = lambda_y_alphabet(reg, "X", j, shape.ranks[j - 1])
    tagged = []
    for j in range(1, k + 1):
        s = shape.size(j)
        lam_y = lambda_y_alphabet(reg, "Y", j, s)
        quantum = QLocalized(
            reg.monomial({"y": s, f"e{s}Y{j}": 1, f"Q{j}": 1}) * (lam_x[j] - lam_x[j - 1]),
            {j: 1},
            reduce=False,
        )
        rel = QLocalized.wrap(lam_x[j] * lam_y - lam_x[j + 1]) + quantum
        coeffs = y_coefficients(rel)
        if not coeffs[0].is_zero() or len(coeffs) - 1 > r[j + 1]:
            raise EliminationFailure("unexpected y-support in Whitney relation")
        for ell in range(1, r[j + 1] + 1):
            c = coeffs[ell] if ell < len(coeffs) else QLocalized.from_poly(reg.zero())
            tagged.append(((ell, j), c))
    tagged.sort(key=lambda t: t[0])
    gens = [v.name for v in reg.vars if v.sort in ("EX", "EY")]
    return Presentation(
        shape, "whitney", reg,
        gens, [c for _, c in tagged], [key for key, _ in tagged],
    )


def toda_polynomials(n: int) -> list[QLocalized]:
    """Symbols of the finite-difference Toda Hamiltonians, k = 1..n.

    T^(n)_k sums P_{i_s}/P_{i_s - 1} over increasing chains 0 = i_0 < ... <
    i_k <= n, with a factor (1 - Q_{i_s - 1}) whenever the chain jumps by
    more than one (P_0 = 1, Q_0 = 0).
    """
    if n < 1:
        raise IndexOutOfRange("need n >= 1")
    reg = pq_registry(n)
    out = []
    for k in range(1, n + 1):
        total = reg.zero()
        for chain in itertools.combinations(range(1, n + 1), k):
            exps: dict = {}
            term = reg.one()
            prev = 0
            for i in chain:
                exps[f"P{i}"] = exps.get(f"P{i}", 0) + 1
                if i - 1 >= 1:
                    exps[f"P{i-1}"] = exps.get(f"P{i-1}", 0) - 1
                if i - prev > 1 and i - 1 >= 1:
                    term = term * reg.one_minus_q(i - 1)
                prev = i
            total = total + term * reg.monomial({a: e for a, e in exps.items() if e})
        out.append(QLocalized.from_poly(total))
    return out


def fln_p_matrix(n: int, reg: VarRegistry) -> TridiagMatrix:
    """Full-flag quantum matrix on the determinant line bundles P_j (P_0 = 1)."""
    y = reg.gen("y")
    A, B = [], []
    for j in range(n):
        ratio = reg.monomial({f"P{j+1}": 1, **({f"P{j}": -1} if j >= 1 else {})})
        A.append(QLocalized.wrap(1 + y * ratio))
        if j >= 1:
            B.append(QLocalized.wrap(y * ratio * reg.gen(f"Q{j}")))
    return TridiagMatrix(A, B)


def toda_presentation_fln_P(n: int) -> Presentation:
    if n < 2:
        raise IndexOutOfRange("need n >= 2")
    shape = FlagShape.full_flag(n)
    reg = fln_p_registry(n)
    det = tridiag_det(fln_p_matrix(n, reg))
    diff = QLocalized.wrap(lambda_y_cn(reg, n)) - det
    coeffs = y_coefficients(diff)
    relations = coeffs[1:]
    gens = [f"P{j}" for j in range(1, n + 1)]
    keys = [(ell, 0) for ell in range(1, len(relations) + 1)]
    return Presentation(shape, "toda-p", reg, gens, relations, keys)


def cor_fln_y_to_p_binding(n: int, target: VarRegistry | None = None) -> dict:
    """Bindings e_1(Y^(j)) -> (1-Q_j) P_{j+1}/P_j transporting full-flag Toda
    relations into the P-generators (Q_0 = 0, P_0 = 1)."""
    reg = target if target is not None else fln_p_registry(n)
    out = {}
    for j in range(n):
        mono = reg.monomial({f"P{j+1}": 1, **({f"P{j}": -1} if j >= 1 else {})})
        val = QLocalized.wrap(mono)
        if j >= 1:
            val = val * QLocalized.wrap(reg.one_minus_q(j))
        out[f"e1Y{j}"] = val
    return out


def fln_p_to_y_binding(n: int, target: VarRegistry) -> dict:
    """Inverse transport: P_j -> prod_{i<j} Y^(i)/(1-Q_i)."""
    out = {}
    for j in range(1, n + 1):
        num = target.one()
        den: dict = {}
        for i in range(j):
            num = num * target.gen(f"e1Y{i}")
            if i >= 1:
                den[i] = den.get(i, 0) + 1
        out[f"P{j}"] = QLocalized(num, den, reduce=False)
    return out


def rename_generators(f: LaurentPoly, name_map: dict, target: VarRegistry) -> LaurentPoly:
    """Re-express f over target, renaming variables through name_map first."""
    out: dict = {}
    width = len(target)
    positions = []
    for name in f.reg.names:
        name = name_map.get(name, name)
        positions.append(target.index.get(name, -1))
    for exps, c in f.terms.items():
        vec = [0] * width
        for i, e in enumerate(exps):
            if e == 0:
                continue
            if positions[i] < 0:
                raise EliminationFailure(f"variable {f.reg.names[i]} did not eliminate")
            vec[positions[i]] = e
        out[tuple(vec)] = out.get(tuple(vec), 0) + c
    return LaurentPoly(target, {e: c for e, c in out.items() if c})


def eliminate_whitney_to_toda(shape: FlagShape):
    """Solve the Whitney relations for the e_l(X^(j)), 2 <= j <= k, substitute,
    and return the residual presentation (in Toda form) plus a proof log.

    The recursion direction follows the last-row determinant expansion: block
    j expresses lambda_y(X^(j+1)) through lower data, so substitution in
    increasing j eliminates every X-alphabet above the first.
    """
    wpres = whitney_presentation(shape)
    reg = wpres.reg
    k = shape.k
    log = []

    def lam_y(j):
        return QLocalized.wrap(lambda_y_alphabet(reg, "Y", j, shape.size(j)))

    def b(j):
        s = shape.size(j)
        return QLocalized(reg.monomial({"y": s, f"e{s}Y{j}": 1, f"Q{j}": 1}), {j: 1},
                          reduce=False)

    u_prev = QLocalized.from_poly(reg.one())          # U_0 = 1
    u = QLocalized.wrap(lambda_y_alphabet(reg, "X", 1, shape.ranks[0]))  # U_1
    bindings: dict = {}
    for j in range(1, k):
        u, u_prev = (lam_y(j) + b(j)) * u - b(j) * u_prev, u
        coeffs = y_coefficients(u)
        for ell in range(1, shape.ranks[j] + 1):
            bindings[f"e{ell}X{j+1}"] = coeffs[ell]
        log.append(
            f"block {j}: solved e_l(X^({j+1})), l=1..{shape.ranks[j]}, "
            f"from the degree-{shape.ranks[j]} recursion step"
        )

    # the solved generators reduce every lower block relation to zero
    by_block: dict = {}
    for (ell, j), rel in zip(wpres.keys, wpres.relations):
        by_block.setdefault(j, []).append((ell, rel))
    y = QLocalized.from_poly(reg.gen("y"))
    for j in range(1, k):
        rel = QLocalized.from_poly(reg.zero())
        for ell, c in by_block[j]:
            rel = rel + c * y.pow(ell)
        sub = rel.substitute(bindings, target=reg) if bindings else rel
        if not sub.is_zero():
            raise EliminationFailure(f"block {j} did not vanish after substitution")
        log.append(f"block {j}: relation reduces to 0 under the solved generators")

    rel_k = QLocalized.from_poly(reg.zero())
    for ell, c in by_block[k]:
        rel_k = rel_k + c * y.pow(ell)
    residual = rel_k.substitute(bindings, target=reg) if bindings else rel_k
    # sign convention: relations are lambda_y(C^n) - det, the negative of the
    # substituted block-k relation U_{k+1} - lambda_y(C^n)
    residual = -residual
    coeffs = y_coefficients(residual)
    if not coeffs[0].is_zero():
        raise EliminationFailure("residual constant term nonzero")
    log.append(f"block {k}: residual relation in X^(1), Y^(1..{k}) only")

    treg = toda_registry(shape)
    name_map = {f"e{ell}X1": f"e{ell}Y0" for ell in range(1, shape.ranks[0] + 1)}
    relations = []
    for c in coeffs[1:]:
        relations.append(QLocalized(rename_generators(c.num, name_map, treg),
                                    dict(c.den), reduce=False))
    while len(relations) < shape.n:
        relations.append(QLocalized.from_poly(treg.zero()))
    gens = [v.name for v in treg.vars if v.sort == "EY"]
    keys = [(ell, 0) for ell in range(1, len(relations) + 1)]
    return Presentation(shape, "toda", treg, gens, relations, keys), log


def wedge_expansion_rhs(n: int, k: int, p: int) -> QLocalized:
    """Quantum expansion of wedge^p(S_k) in the full-flag Whitney generators:
    a sum over p-subsets J of {1..k} of the quotient line bundles S_j/S_{j-1}
    with a 1/(1-Q_j) correction for each consecutive pair in J."""
    if not (0 <= p <= k <= n):
        raise IndexOutOfRange(f"need 0 <= p <= k <= n, got p={p}, k={k}, n={n}")
    shape = FlagShape.full_flag(n)
    reg = whitney_registry(shape)
    total = QLocalized.from_poly(reg.zero())
    for J in itertools.combinations(range(1, k + 1), p):
        exps: dict = {}
        for j in J:
            name = "e1X1" if j == 1 else f"e1Y{j-1}"
            exps[name] = exps.get(name, 0) + 1
        den = {j: 1 for j in J if j + 1 in J}
        total = total + QLocalized(reg.monomial(exps), den, reduce=False)
    return total


def wedge_lhs(n: int, k: int, p: int) -> LaurentPoly:
    """The class wedge^p(S_k) itself: a generator for k < n, e_p(T) for k = n."""
    shape = FlagShape.full_flag(n)
    reg = whitney_registry(shape)
    if p == 0:
        return reg.one()
    if k == n:
        ts = [reg.gen(f"T{i}") for i in range(1, n + 1)]
        return elem_sym(ts, p)
    if k == 0:
        return reg.zero()
    return reg.gen(f"e{p}X{k}")
