"""Exact multivariate Laurent polynomial arithmetic over big rationals.

Everything in this package is carried by two value types defined here:

* ``LaurentPoly`` -- a sparse term map {exponent vector: rational} over a
  fixed, ordered ``VarRegistry``.  Variables come in sorts; sorts T, P, x, q
  admit negative exponents, sorts Q, y, EX, EY do not.
* ``QLocalized`` -- a fraction whose numerator is a ``LaurentPoly`` and whose
  denominator is a monomial in the factors (1 - Q_j).  This is the smallest
  ring containing every relation we need to write down; general rational
  functions are deliberately not supported.

All values are immutable after construction and all operations are pure.
Coefficients are exact rationals (gmpy2.mpq, falling back to Fraction); no
floating point is used anywhere.
"""

from __future__ import annotations

import json
from typing import Iterable, Mapping

from .errors import (
    ExponentOverflow,
    IndexOutOfRange,
    InexactDivision,
    NonInvertibleBinding,
    RegistryMismatch,
)

try:
    from gmpy2 import mpq as QQ
except ImportError:  # pragma: no cover
    from fractions import Fraction as QQ

_ZERO = QQ(0)
_ONE = QQ(1)
_EXP_LIMIT = 1 << 62

# Sorts admitting negative exponents.
LAURENT_SORTS = frozenset({"T", "P", "x", "q"})
ALL_SORTS = frozenset({"T", "Q", "y", "q", "x", "P", "EX", "EY"})


class Var:
    """A registered variable: name, sort, and (j, ell) index data."""

    __slots__ = ("name", "sort", "j", "ell")

    def __init__(self, name, sort, j=0, ell=0):
        if sort not in ALL_SORTS:
            raise ValueError(f"unknown sort {sort!r}")
        self.name = name
        self.sort = sort
        self.j = j
        self.ell = ell

    def __repr__(self):
        return f"Var({self.name!r}, {self.sort!r}, j={self.j}, ell={self.ell})"


class VarRegistry:
    """An ordered, immutable namespace of variables.

    The total variable order is fixed at construction; exponent vectors of
    every polynomial over the registry are tuples in this order.
    """

    __slots__ = ("vars", "names", "index", "laurent", "_q_pos", "_t_pos")

    def __init__(self, variables: Iterable[Var]):
        self.vars = tuple(variables)
        self.names = tuple(v.name for v in self.vars)
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")
        self.index = {v.name: i for i, v in enumerate(self.vars)}
        self.laurent = tuple(v.sort in LAURENT_SORTS for v in self.vars)
        self._q_pos = {v.j: i for i, v in enumerate(self.vars) if v.sort == "Q"}
        self._t_pos = {v.j: i for i, v in enumerate(self.vars) if v.sort == "T"}

    def __len__(self):
        return len(self.vars)

    def __eq__(self, other):
        return self is other or (
            isinstance(other, VarRegistry)
            and self.names == other.names
            and tuple(v.sort for v in self.vars) == tuple(v.sort for v in other.vars)
        )

    def __repr__(self):
        return f"VarRegistry({', '.join(self.names)})"

    def q_position(self, j):
        try:
            return self._q_pos[j]
        except KeyError:
            raise IndexOutOfRange(f"no Novikov variable Q{j} in registry") from None

    def t_position(self, i):
        try:
            return self._t_pos[i]
        except KeyError:
            raise IndexOutOfRange(f"no torus variable T{i} in registry") from None

    @property
    def q_subscripts(self):
        return sorted(self._q_pos)

    def zero(self) -> "LaurentPoly":
        return LaurentPoly(self, {})

    def one(self) -> "LaurentPoly":
        return self.const(1)

    def const(self, c) -> "LaurentPoly":
        c = QQ(c)
        if c == 0:
            return LaurentPoly(self, {})
        return LaurentPoly(self, {(0,) * len(self.vars): c})

    def gen(self, name) -> "LaurentPoly":
        return self.monomial({name: 1})

    def monomial(self, exps: Mapping[str, int], coeff=1) -> "LaurentPoly":
        """Build coeff * prod(var^e); validates sort sign restrictions."""
        coeff = QQ(coeff)
        if coeff == 0:
            return self.zero()
        vec = [0] * len(self.vars)
        for name, e in exps.items():
            if name not in self.index:
                raise RegistryMismatch(f"unknown variable {name!r}")
            if abs(e) > _EXP_LIMIT:
                raise ExponentOverflow(name)
            i = self.index[name]
            if e < 0 and not self.laurent[i]:
                raise ValueError(f"negative exponent on non-Laurent variable {name}")
            vec[i] = e
        return LaurentPoly(self, {tuple(vec): coeff})

    def one_minus_q(self, j) -> "LaurentPoly":
        """The distinguished localization factor 1 - Q_j."""
        return self.one() - self.gen(f"Q{j}")


def _check_valid(reg: VarRegistry, terms: dict) -> None:
    laurent = reg.laurent
    for exps in terms:
        for e, ok in zip(exps, laurent):
            if e < 0 and not ok:
                raise ValueError("negative exponent on non-Laurent variable")


class LaurentPoly:
    """Sparse exact Laurent polynomial; canonical form is the term map itself."""

    __slots__ = ("reg", "terms")

    def __init__(self, reg: VarRegistry, terms: dict, *, validate: bool = False):
        self.reg = reg
        self.terms = terms
        if validate:
            _check_valid(reg, terms)

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return len(self.terms) == 1 and self.terms.get((0,) * len(self.reg)) == 1

    def is_constant(self) -> bool:
        return not self.terms or (
            len(self.terms) == 1 and next(iter(self.terms)) == (0,) * len(self.reg)
        )

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, type(_ONE))):
            other = self.reg.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.reg == other.reg and self.terms == other.terms

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.reg != self.reg:
                raise RegistryMismatch("operands over different registries")
            return other
        return self.reg.const(other)

    def __add__(self, other):
        if isinstance(other, QLocalized):
            return NotImplemented
        other = self._coerce(other)
        out = dict(self.terms)
        for exps, c in other.terms.items():
            s = out.get(exps, _ZERO) + c
            if s:
                out[exps] = s
            elif exps in out:
                del out[exps]
        return LaurentPoly(self.reg, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.reg, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, QLocalized):
            return NotImplemented
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, QLocalized):
            return NotImplemented
        other = self._coerce(other)
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out: dict = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(map(int.__add__, ea, eb))
                s = out.get(e, _ZERO) + ca * cb
                if s:
                    out[e] = s
                elif e in out:
                    del out[e]
        return LaurentPoly(self.reg, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            inv = self.inverse()
            return inv ** (-n)
        if n > _EXP_LIMIT:
            raise ExponentOverflow("power")
        result = self.reg.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base_needed = n >> 1
            if base_needed:
                base = base * base
            n = base_needed
        return result

    def scale(self, c) -> "LaurentPoly":
        c = QQ(c)
        if c == 0:
            return self.reg.zero()
        return LaurentPoly(self.reg, {e: c * v for e, v in self.terms.items()})

    def is_unit(self) -> bool:
        """True iff the polynomial is a single term in Laurent sorts only."""
        if len(self.terms) != 1:
            return False
        exps = next(iter(self.terms))
        return all(e == 0 or ok for e, ok in zip(exps, self.reg.laurent))

    def inverse(self) -> "LaurentPoly":
        """Monomial inverse in the ambient Laurent ring.

        Sign restrictions are a data-entry contract; an inverse may carry a
        transient negative exponent on a restricted sort, which every public
        entry point re-validates.
        """
        if len(self.terms) != 1:
            raise NonInvertibleBinding("not a unit monomial")
        (exps, c), = self.terms.items()
        return LaurentPoly(self.reg, {tuple(-e for e in exps): _ONE / c})

    # -- structure ----------------------------------------------------------

    def sorted_terms(self):
        """Terms in descending lexicographic exponent order (canonical)."""
        return sorted(self.terms.items(), key=lambda t: t[0], reverse=True)

    def leading(self):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms)
        return e, self.terms[e]

    def degree_in(self, name: str) -> int:
        """Largest exponent of the named variable (0 for the zero poly)."""
        i = self.reg.index[name]
        return max((e[i] for e in self.terms), default=0)

    def min_degree_in(self, name: str) -> int:
        i = self.reg.index[name]
        return min((e[i] for e in self.terms), default=0)

    def total_degree_in_sort(self, sort: str) -> int:
        pos = [i for i, v in enumerate(self.reg.vars) if v.sort == sort]
        return max((sum(e[i] for i in pos) for e in self.terms), default=0)

    def coefficients_in(self, name: str) -> dict:
        """Split into {power: polynomial} with the named variable removed."""
        i = self.reg.index[name]
        out: dict = {}
        for exps, c in self.terms.items():
            k = exps[i]
            rest = exps[:i] + (0,) + exps[i + 1:]
            bucket = out.setdefault(k, {})
            bucket[rest] = bucket.get(rest, _ZERO) + c
        return {
            k: LaurentPoly(self.reg, {e: c for e, c in bucket.items() if c})
            for k, bucket in out.items()
        }

    def apply_permutation(self, positions: Mapping[int, int]) -> "LaurentPoly":
        """Permute exponents between variable positions (e.g. swap T_i, T_i+1)."""
        out: dict = {}
        for exps, c in self.terms.items():
            vec = list(exps)
            for a, b in positions.items():
                vec[a] = exps[b]
            e = tuple(vec)
            s = out.get(e, _ZERO) + c
            if s:
                out[e] = s
            elif e in out:
                del out[e]
        return LaurentPoly(self.reg, out)

    def convert(self, target: VarRegistry) -> "LaurentPoly":
        """Re-express over another registry, matching variables by name."""
        if target == self.reg:
            return self
        mapping = []
        for i, name in enumerate(self.reg.names):
            mapping.append(target.index.get(name, -1))
        out: dict = {}
        width = len(target)
        for exps, c in self.terms.items():
            vec = [0] * width
            for i, e in enumerate(exps):
                if e == 0:
                    continue
                t = mapping[i]
                if t < 0:
                    raise RegistryMismatch(
                        f"variable {self.reg.names[i]} missing from target registry"
                    )
                vec[t] = e
            e2 = tuple(vec)
            s = out.get(e2, _ZERO) + c
            if s:
                out[e2] = s
        return LaurentPoly(target, out)

    # -- division -----------------------------------------------------------

    def divexact(self, g: "LaurentPoly") -> "LaurentPoly":
        """Exact division; raises InexactDivision if the remainder is nonzero.

        Termination for Laurent input uses the Newton-polytope box bound: in an
        exact quotient q = f/g each exponent of q lies between min(f)-min(g)
        and max(f)-max(g) coordinatewise.
        """
        g = self._coerce(g)
        if g.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero():
            return self
        if g.is_monomial():
            q = self * g.inverse()
            try:
                _check_valid(self.reg, q.terms)
            except ValueError:
                raise InexactDivision("quotient leaves the restricted ring") from None
            return q
        n = len(self.reg)
        lo = tuple(
            min(e[i] for e in self.terms) - min(e[i] for e in g.terms)
            for i in range(n)
        )
        hi = tuple(
            max(e[i] for e in self.terms) - max(e[i] for e in g.terms)
            for i in range(n)
        )
        ge, gc = g.leading()
        rem = dict(self.terms)
        quo: dict = {}
        while rem:
            fe = max(rem)
            qe = tuple(map(int.__sub__, fe, ge))
            if any(q < l or q > h for q, l, h in zip(qe, lo, hi)):
                raise InexactDivision("nonzero remainder")
            qc = rem[fe] / gc
            quo[qe] = qc
            for e, c in g.terms.items():
                t = tuple(map(int.__add__, qe, e))
                s = rem.get(t, _ZERO) - qc * c
                if s:
                    rem[t] = s
                elif t in rem:
                    del rem[t]
        try:
            _check_valid(self.reg, quo)
        except ValueError:
            raise InexactDivision("quotient leaves the restricted ring") from None
        return LaurentPoly(self.reg, quo)

    def divides(self, f: "LaurentPoly") -> bool:
        try:
            f.divexact(self)
            return True
        except InexactDivision:
            return False

    # -- substitution -------------------------------------------------------

    def substitute(self, bindings: Mapping[str, "QLocalized | LaurentPoly"],
                   target: VarRegistry | None = None) -> "QLocalized":
        """Simultaneous substitution of values for variables.

        Unbound variables must exist (by name) in the target registry.
        Negative exponents require the bound value to be invertible.
        """
        vals = {}
        for name, v in bindings.items():
            if name not in self.reg.index:
                raise RegistryMismatch(f"unknown variable {name!r}")
            vals[self.reg.index[name]] = QLocalized.wrap(v)
        if target is None:
            if vals:
                target = next(iter(vals.values())).num.reg
            else:
                target = self.reg
        inverses = {}
        total = QLocalized.from_poly(target.zero())
        for exps, c in self.terms.items():
            term = QLocalized.from_poly(target.const(c))
            plain: dict = {}
            for i, e in enumerate(exps):
                if e == 0:
                    continue
                if i in vals:
                    v = vals[i]
                    if e < 0:
                        if i not in inverses:
                            inverses[i] = v._formal_inverse()
                        v = inverses[i]
                        e = -e
                    term = term * v.pow(e)
                else:
                    name = self.reg.names[i]
                    if name not in target.index:
                        raise RegistryMismatch(
                            f"unbound variable {name} missing from target registry"
                        )
                    plain[name] = e
            if plain:
                term = term * QLocalized.from_poly(target.monomial(plain))
            total = total + term
        try:
            _check_valid(target, total.num.terms)
        except ValueError:
            raise NonInvertibleBinding(
                "substitution result leaves the restricted ring"
            ) from None
        return total

    # -- display ------------------------------------------------------------

    def __repr__(self):
        return f"LaurentPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps, c in self.sorted_terms():
            factors = []
            for i, e in enumerate(exps):
                if e == 0:
                    continue
                name = self.reg.names[i]
                factors.append(name if e == 1 else f"{name}^{e}")
            mono = "*".join(factors)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        s = " + ".join(parts)
        return s.replace("+ -", "- ")


class QLocalized:
    """A fraction num / prod_j (1-Q_j)^{m_j}, kept reduced.

    Reduced means: for every j with m_j > 0 the numerator is not divisible by
    (1 - Q_j).  Sums and products of these fractions stay in the class, which
    is what makes it the right carrier for the quantum relations.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly, den: Mapping[int, int] | None = None,
                 *, reduce: bool = True):
        self.num = num
        d = {j: m for j, m in (den or {}).items() if m}
        for j, m in d.items():
            if m < 0:
                raise ValueError("negative denominator exponent")
            num.reg.q_position(j)
        self.den = d
        if reduce and self.den:
            self._reduce()

    @classmethod
    def from_poly(cls, p: LaurentPoly) -> "QLocalized":
        return cls(p, None, reduce=False)

    @classmethod
    def wrap(cls, v) -> "QLocalized":
        return v if isinstance(v, QLocalized) else cls.from_poly(v)

    def registry_zero(self) -> "QLocalized":
        return QLocalized.from_poly(self.num.reg.zero())

    @property
    def reg(self) -> VarRegistry:
        return self.num.reg

    def _reduce(self):
        if self.num.is_zero():
            self.den = {}
            return
        for j in list(self.den):
            factor = self.num.reg.one_minus_q(j)
            while self.den.get(j, 0) > 0:
                try:
                    self.num = self.num.divexact(factor)
                except InexactDivision:
                    break
                self.den[j] -= 1
            if self.den.get(j) == 0:
                del self.den[j]

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return not self.den

    def is_one(self) -> bool:
        return not self.den and self.num.is_one()

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if isinstance(other, (LaurentPoly, int, type(_ONE))):
            other = QLocalized.wrap(self.num._coerce(other))
        if not isinstance(other, QLocalized):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "QLocalized":
        if isinstance(other, QLocalized):
            if other.num.reg != self.num.reg:
                raise RegistryMismatch("operands over different registries")
            return other
        return QLocalized.from_poly(self.num._coerce(other))

    def _den_poly(self, exps: Mapping[int, int]) -> LaurentPoly:
        p = self.num.reg.one()
        for j, m in exps.items():
            if m:
                p = p * self.num.reg.one_minus_q(j) ** m
        return p

    def __add__(self, other):
        other = self._coerce(other)
        if not self.den and not other.den:
            return QLocalized.from_poly(self.num + other.num)
        js = set(self.den) | set(other.den)
        lcm = {j: max(self.den.get(j, 0), other.den.get(j, 0)) for j in js}
        a = self.num * self._den_poly(
            {j: lcm[j] - self.den.get(j, 0) for j in js})
        b = other.num * self._den_poly(
            {j: lcm[j] - other.den.get(j, 0) for j in js})
        return QLocalized(a + b, lcm)

    __radd__ = __add__

    def __neg__(self):
        return QLocalized(-self.num, dict(self.den), reduce=False)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        den = dict(self.den)
        for j, m in other.den.items():
            den[j] = den.get(j, 0) + m
        return QLocalized(self.num * other.num, den)

    __rmul__ = __mul__

    def pow(self, n: int) -> "QLocalized":
        if n < 0:
            return self.inverse().pow(-n)
        out = QLocalized.from_poly(self.num.reg.one())
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    __pow__ = pow

    def is_unit(self) -> bool:
        return self.num.is_unit()

    def inverse(self) -> "QLocalized":
        """Inverse; only unit numerators (Laurent monomials) are invertible."""
        if not self.num.is_unit():
            raise NonInvertibleBinding("numerator is not a unit monomial")
        return QLocalized.from_poly(self.num.inverse() * self._den_poly(self.den))

    def _formal_inverse(self) -> "QLocalized":
        # intermediate-only: permits transient negative exponents on
        # restricted sorts, which cancel within each substituted term
        return QLocalized.from_poly(self.num.inverse() * self._den_poly(self.den))

    def divexact(self, other) -> "QLocalized":
        other = self._coerce(other)
        if other.num.is_unit():
            return self * other.inverse()
        num = self.num * self._den_poly(other.den)
        q = num.divexact(other.num)
        return QLocalized(q, dict(self.den))

    def try_divexact(self, other) -> "QLocalized | None":
        try:
            return self.divexact(other)
        except InexactDivision:
            return None

    # -- structure ----------------------------------------------------------

    def clear_denominators(self) -> tuple[LaurentPoly, dict]:
        """Return (num, den map); num is the fraction times prod (1-Q_j)^m."""
        return self.num, dict(self.den)

    def q_degree(self) -> int:
        return self.num.total_degree_in_sort("Q")

    def convert(self, target: VarRegistry) -> "QLocalized":
        return QLocalized(self.num.convert(target), dict(self.den), reduce=False)

    def substitute(self, bindings, target=None) -> "QLocalized":
        """Substitute into the fraction; each touched (1-Q_j) must stay a unit."""
        num = self.num.substitute(bindings, target)
        for j, m in self.den.items():
            qname = f"Q{j}"
            if qname in bindings:
                factor = self.num.reg.one_minus_q(j).substitute(bindings, target)
                num = num * factor.inverse().pow(m)
            else:
                num = num * QLocalized(num.num.reg.one(), {j: m}, reduce=False)
        return num

    def __repr__(self):
        return f"QLocalized({self})"

    def __str__(self):
        if not self.den:
            return str(self.num)
        den = "*".join(
            f"(1-Q{j})" if m == 1 else f"(1-Q{j})^{m}"
            for j, m in sorted(self.den.items())
        )
        return f"({self.num}) / ({den})"


# -- module-level operations -------------------------------------------------


def elem_sym(values: list, ell: int, reg: VarRegistry | None = None):
    """Elementary symmetric polynomial e_ell of the given ring elements.

    e_0 = 1; computed by the generating-product recurrence, no symmetrization.
    """
    if ell < 0 or ell > len(values):
        raise IndexOutOfRange(f"e_{ell} of {len(values)} values")
    if reg is None:
        if not values:
            raise IndexOutOfRange("cannot infer registry from an empty list")
        v0 = values[0]
        reg = v0.reg if isinstance(v0, LaurentPoly) else v0.num.reg
    # row[k] holds e_k of the prefix processed so far
    row = [reg.one()] + [reg.zero()] * ell
    for v in values:
        for k in range(ell, 0, -1):
            row[k] = row[k] + row[k - 1] * v
    return row[ell]


def y_coefficients(f) -> list:
    """Coefficient list [c_0, ..., c_d] with f = sum c_k y^k, each c_k y-free."""
    f = QLocalized.wrap(f)
    split = f.num.coefficients_in("y")
    d = max(split, default=0)
    out = []
    for k in range(d + 1):
        num = split.get(k)
        if num is None:
            out.append(f.registry_zero())
        else:
            out.append(QLocalized(num, dict(f.den)))
    return out


def substitute(f, bindings, target=None) -> QLocalized:
    """Simultaneous substitution on a LaurentPoly or QLocalized."""
    return QLocalized.wrap(f).substitute(bindings, target)


# -- registry constructors ----------------------------------------------------


def registry(*groups) -> VarRegistry:
    """Build a registry from (sort, spec) groups, in the order given.

    Specs:  ("T", n) -> T1..Tn;  ("Q", k) -> Q1..Qk;  ("y",) ; ("q",);
    ("x", n); ("P", n); ("EX", sizes dict {j: size}); ("EY", sizes dict).
    """
    vs: list[Var] = []
    for g in groups:
        sort = g[0]
        if sort in ("T", "Q", "x", "P"):
            n = g[1]
            start = 1 if len(g) < 3 else g[2]
            vs.extend(Var(f"{sort}{i}", sort, j=i) for i in range(start, start + n))
        elif sort in ("y", "q"):
            vs.append(Var(sort, sort))
        elif sort in ("EX", "EY"):
            letter = "X" if sort == "EX" else "Y"
            for j, size in g[1].items():
                vs.extend(
                    Var(f"e{ell}{letter}{j}", sort, j=j, ell=ell)
                    for ell in range(1, size + 1)
                )
        else:
            raise ValueError(f"unknown group sort {sort!r}")
    return VarRegistry(vs)


# -- serialization -------------------------------------------------------------


def poly_to_json_terms(f: LaurentPoly) -> list:
    out = []
    for exps, c in f.sorted_terms():
        e = {f.reg.names[i]: exps[i] for i in range(len(exps)) if exps[i]}
        out.append({
            "exponents": e,
            "num": str(c.numerator),
            "den": str(c.denominator),
        })
    return out


def poly_from_json_terms(reg: VarRegistry, terms: list) -> LaurentPoly:
    out = reg.zero()
    for t in terms:
        c = QQ(int(t["num"]), int(t["den"]))
        out = out + reg.monomial(t["exponents"], c)
    return out


def qloc_to_json(f: QLocalized) -> dict:
    return {
        "terms": poly_to_json_terms(f.num),
        "denominator": {str(j): m for j, m in sorted(f.den.items())},
    }


def qloc_from_json(reg: VarRegistry, data: dict) -> QLocalized:
    num = poly_from_json_terms(reg, data["terms"])
    den = {int(j): m for j, m in data.get("denominator", {}).items()}
    return QLocalized(num, den, reduce=False)


def poly_to_json(f: LaurentPoly) -> str:
    return json.dumps(poly_to_json_terms(f), separators=(",", ":"))


_LATEX_NAMES = {"y": "y", "q": "q"}


def _latex_var(v: Var) -> str:
    if v.sort in ("T", "Q", "x", "P"):
        return f"{v.sort}_{{{v.j}}}"
    if v.sort == "EX":
        return f"e_{{{v.ell}}}(X^{{({v.j})}})"
    if v.sort == "EY":
        return f"e_{{{v.ell}}}(Y^{{({v.j})}})"
    return _LATEX_NAMES[v.sort]


def poly_to_latex(f: LaurentPoly) -> str:
    if f.is_zero():
        return "0"
    parts = []
    for exps, c in f.sorted_terms():
        factors = []
        for i, e in enumerate(exps):
            if e == 0:
                continue
            v = _latex_var(f.reg.vars[i])
            factors.append(v if e == 1 else f"{v}^{{{e}}}")
        mono = " ".join(factors)
        if c.denominator == 1:
            cs = str(c.numerator)
        else:
            sign = "-" if c < 0 else ""
            cs = f"{sign}\\tfrac{{{abs(c.numerator)}}}{{{c.denominator}}}"
        if not mono:
            parts.append(cs)
        elif cs == "1":
            parts.append(mono)
        elif cs == "-1":
            parts.append(f"-{mono}")
        else:
            parts.append(f"{cs} {mono}")
    s = " + ".join(parts)
    return s.replace("+ -", "- ")


def qloc_to_latex(f: QLocalized) -> str:
    if not f.den:
        return poly_to_latex(f.num)
    den = " ".join(
        f"(1-Q_{{{j}}})" if m == 1 else f"(1-Q_{{{j}}})^{{{m}}}"
        for j, m in sorted(f.den.items())
    )
    return f"\\frac{{{poly_to_latex(f.num)}}}{{{den}}}"
