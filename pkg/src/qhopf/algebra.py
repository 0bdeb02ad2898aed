"""Labeled bases, sparse elements, finite-dimensional algebras, linear maps.

Everything is exact: coefficients are CycNum values over a fixed cyclotomic
order, elements are sparse {label: coefficient} maps with no stored zeros,
and multiplication is the bilinear extension of sparse structure constants
c^k_{ij}.  Tensor-product bases are kept flat (labels are tuples, one entry
per tensor factor) so that maps like comultiplications can splice slots.
"""

from __future__ import annotations

import itertools
from typing import Callable, Iterable, Optional, Sequence, Union

from .cyclotomic import CycNum
from .linalg import SparseEchelon
from .reports import CheckRecord, VerificationReport, timed


class NonInvertibleError(ValueError):
    pass


# ---------------------------------------------------------------------------
# bases
# ---------------------------------------------------------------------------

class Basis:
    """Ordered, labeled basis of a finite-dimensional space."""

    def __init__(self, labels: Iterable, name: str = "", render: Optional[Callable] = None):
        self.labels = tuple(labels)
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        if len(self._index) != len(self.labels):
            raise ValueError("basis labels must be distinct")
        self.name = name
        self._render = render

    def __len__(self):
        return len(self.labels)

    def __contains__(self, label):
        return label in self._index

    def index_of(self, label) -> int:
        return self._index[label]

    def render(self, label) -> str:
        return self._render(label) if self._render else str(label)

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, Basis) and not isinstance(other, TensorBasis) and self.labels == other.labels

    def __hash__(self):
        return hash(self.labels)

    def __repr__(self):
        return f"Basis({self.name or len(self.labels)})"


class TensorBasis(Basis):
    """Flat tensor-product basis; labels are tuples, lexicographic order.

    Label enumeration is lazy so that large tensor powers can host sparse
    elements without ever materializing their full label list.
    """

    def __init__(self, factors: Sequence[Basis], name: str = ""):
        flat: list[Basis] = []
        for f in factors:
            if isinstance(f, TensorBasis):
                flat.extend(f.factors)
            else:
                flat.append(f)
        self.factors = tuple(flat)
        self.name = name
        self._render = None
        self._labels = None
        self._index = None

    @property
    def labels(self):
        if self._labels is None:
            self._labels = tuple(itertools.product(*(f.labels for f in self.factors)))
        return self._labels

    def __len__(self):
        n = 1
        for f in self.factors:
            n *= len(f)
        return n

    def __contains__(self, label):
        return len(label) == len(self.factors) and all(
            part in f for part, f in zip(label, self.factors)
        )

    def index_of(self, label) -> int:
        idx = 0
        for part, f in zip(label, self.factors):
            idx = idx * len(f) + f.index_of(part)
        return idx

    def render(self, label) -> str:
        return "(" + " # ".join(f.render(p) for f, p in zip(self.factors, label)) + ")"

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, TensorBasis) and self.factors == other.factors

    def __hash__(self):
        return hash(self.factors)

    def __repr__(self):
        return f"TensorBasis({len(self.factors)} factors)"


def factors_of(basis: Basis) -> tuple[Basis, ...]:
    return basis.factors if isinstance(basis, TensorBasis) else (basis,)


def label_parts(basis: Basis, label) -> tuple:
    return label if isinstance(basis, TensorBasis) else (label,)


def join_label(basis: Basis, parts: tuple):
    return parts if isinstance(basis, TensorBasis) else parts[0]


# ---------------------------------------------------------------------------
# elements
# ---------------------------------------------------------------------------

class Element:
    """Sparse vector over a labeled basis; immutable by convention."""

    __slots__ = ("basis", "terms")

    def __init__(self, basis: Basis, terms: dict):
        self.basis = basis
        self.terms = {lab: c for lab, c in terms.items() if not c.is_zero()}

    # construction helpers -------------------------------------------------

    @staticmethod
    def zero(basis: Basis) -> "Element":
        return Element(basis, {})

    @staticmethod
    def monomial(basis: Basis, label, coeff: CycNum) -> "Element":
        return Element(basis, {label: coeff})

    # linear structure ------------------------------------------------------

    def _check(self, other: "Element"):
        if self.basis is not other.basis and self.basis != other.basis:
            raise ValueError("elements live over different bases")

    def __add__(self, other: "Element") -> "Element":
        self._check(other)
        out = dict(self.terms)
        for lab, c in other.terms.items():
            cur = out.get(lab)
            new = c if cur is None else cur + c
            if new.is_zero():
                out.pop(lab, None)
            else:
                out[lab] = new
        return Element(self.basis, out)

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def __neg__(self) -> "Element":
        return Element(self.basis, {lab: -c for lab, c in self.terms.items()})

    def scale(self, coeff) -> "Element":
        if isinstance(coeff, CycNum) and coeff.is_zero():
            return Element.zero(self.basis)
        if coeff == 0:
            return Element.zero(self.basis)
        return Element(self.basis, {lab: c * coeff for lab, c in self.terms.items()})

    def coefficient(self, label) -> Optional[CycNum]:
        return self.terms.get(label)

    def is_zero(self) -> bool:
        return not self.terms

    def support(self):
        return self.terms.keys()

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        if self.basis is not other.basis and self.basis != other.basis:
            return False
        return self.terms == other.terms

    def __hash__(self):
        raise TypeError("Elements are not hashable")

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: self.basis.index_of(kv[0]))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for lab, c in self.sorted_terms():
            cs = str(c)
            if "+" in cs or ("-" in cs[1:]) or "/" in cs.replace("-", ""):
                cs = f"({cs})"
            parts.append(f"{cs}*{self.basis.render(lab)}")
        return " + ".join(parts)

    def __repr__(self):
        return f"<{self}>"


def tensor_elements(xs: Sequence[Element]) -> Element:
    """Tensor product of elements over the flat tensor-product basis."""
    basis = TensorBasis([x.basis for x in xs])
    terms: dict = {}
    for combo in itertools.product(*(x.terms.items() for x in xs)):
        label: tuple = ()
        coeff = None
        for (lab, c), x in zip(combo, xs):
            label = label + label_parts(x.basis, lab)
            coeff = c if coeff is None else coeff * c
        if not coeff.is_zero():
            cur = terms.get(label)
            terms[label] = coeff if cur is None else cur + coeff
    return Element(basis, terms)


def tensor(a: Element, b: Element) -> Element:
    """Bilinear tensor product of two elements."""
    return tensor_elements([a, b])


def transform_labels(x: Element, fn: Callable, target: Basis) -> Element:
    """Relabel every term by ``fn`` (must be injective on the support)."""
    out: dict = {}
    for lab, c in x.terms.items():
        new = fn(lab)
        cur = out.get(new)
        out[new] = c if cur is None else cur + c
    return Element(target, out)


# ---------------------------------------------------------------------------
# linear maps and functionals
# ---------------------------------------------------------------------------

class LinMap:
    """Linear map given sparse column-wise on every source basis label."""

    def __init__(self, source: Basis, target: Basis, cols: dict, name: str = ""):
        self.source = source
        self.target = target
        self.cols = cols
        self.name = name

    def col(self, label) -> dict:
        return self.cols[label]

    def apply(self, x: Element) -> Element:
        if x.basis is not self.source and x.basis != self.source:
            raise ValueError(f"map {self.name or ''} applied to wrong basis")
        out: dict = {}
        for lab, c in x.terms.items():
            for tlab, tc in self.cols[lab].items():
                add = tc * c
                cur = out.get(tlab)
                new = add if cur is None else cur + add
                if new.is_zero():
                    out.pop(tlab, None)
                else:
                    out[tlab] = new
        return Element(self.target, out)

    def __call__(self, x: Element) -> Element:
        return self.apply(x)

    def after(self, other: "LinMap") -> "LinMap":
        """Composition self o other."""
        cols = {}
        for lab in other.source.labels:
            cols[lab] = self.apply(Element(other.target, other.cols[lab])).terms
        return LinMap(other.source, self.target, cols, name=f"{self.name}*{other.name}")

    def matrix_rank(self) -> int:
        ech = SparseEchelon()
        for lab in self.source.labels:
            ech.insert({self.target.index_of(t): c for t, c in self.cols[lab].items()})
        return ech.rank

    @staticmethod
    def identity(basis: Basis) -> "LinMap":
        one_cache: dict = {}

        def one_for(c: CycNum):
            return c

        cols = {}
        for lab in basis.labels:
            cols[lab] = None
        return _IdentityMap(basis)


class _IdentityMap(LinMap):
    def __init__(self, basis: Basis):
        self.source = basis
        self.target = basis
        self.name = "id"
        self.cols = _IdentityCols(basis)

    def apply(self, x: Element) -> Element:
        return x


class _IdentityCols:
    def __init__(self, basis: Basis):
        self.basis = basis
        self._one: Optional[CycNum] = None

    def __getitem__(self, label):
        raise KeyError("identity columns require a scalar order; use apply()")


class Functional:
    """Scalar-valued linear map (a row vector), e.g. a counit or dual label."""

    def __init__(self, source: Basis, values: dict, order: int, name: str = ""):
        self.source = source
        self.values = {lab: c for lab, c in values.items() if not c.is_zero()}
        self.order = order
        self.name = name

    def value(self, label) -> Optional[CycNum]:
        return self.values.get(label)

    def apply(self, x: Element) -> CycNum:
        total = CycNum.zero(self.order)
        for lab, c in x.terms.items():
            v = self.values.get(lab)
            if v is not None:
                total = total + v * c
        return total

    def __call__(self, x: Element) -> CycNum:
        return self.apply(x)


SlotMap = Union[None, LinMap, Functional]


def apply_slots(x: Element, slots: Sequence[SlotMap]):
    """Apply per-slot maps to an element of a (tensor) basis.

    ``None`` leaves a slot untouched, a LinMap transforms it (its target's
    factors are spliced in place), and a Functional contracts it to a
    scalar.  Returns an Element, or a CycNum when every slot is contracted.
    """
    src_factors = factors_of(x.basis)
    if len(slots) != len(src_factors):
        raise ValueError(f"{len(slots)} slot maps for {len(src_factors)} factors")
    out_factors: list[Basis] = []
    scalar_only = True
    for s, f in zip(slots, src_factors):
        if s is None:
            out_factors.append(f)
            scalar_only = False
        elif isinstance(s, Functional):
            pass
        else:
            out_factors.extend(factors_of(s.target))
            scalar_only = False

    order = None
    for s in slots:
        if isinstance(s, Functional):
            order = s.order
            break

    if scalar_only:
        total = CycNum.zero(order)
        for lab, c in x.terms.items():
            parts = label_parts(x.basis, lab)
            coeff = c
            for s, p in zip(slots, parts):
                v = s.value(p)
                if v is None:
                    coeff = None
                    break
                coeff = coeff * v
            if coeff is not None:
                total = total + coeff
        return total

    target = out_factors[0] if len(out_factors) == 1 else TensorBasis(out_factors)
    out: dict = {}
    for lab, c in x.terms.items():
        parts = label_parts(x.basis, lab)
        options: list = []  # per slot: list of (sub-parts tuple, coeff or None)
        coeff = c
        dead = False
        for s, p in zip(slots, parts):
            if s is None:
                options.append(((( p,), None),))
            elif isinstance(s, Functional):
                v = s.value(p)
                if v is None:
                    dead = True
                    break
                coeff = coeff * v
                options.append(())
            else:
                col = s.cols[p]
                if not col:
                    dead = True
                    break
                opt = tuple(
                    (label_parts(s.target, tl), tc) for tl, tc in col.items()
                )
                options.append(opt)
        if dead:
            continue
        live = [o for o in options if o != ()]
        for combo in itertools.product(*live):
            label: tuple = ()
            cc = coeff
            for sub, tc in combo:
                label = label + sub
                if tc is not None:
                    cc = cc * tc
            if cc.is_zero():
                continue
            final = label if len(out_factors) > 1 else label[0]
            cur = out.get(final)
            new = cc if cur is None else cur + cc
            if new.is_zero():
                out.pop(final, None)
            else:
                out[final] = new
    return Element(target, out)


# ---------------------------------------------------------------------------
# finite-dimensional algebras
# ---------------------------------------------------------------------------

class FinAlgebra:
    """Unital associative algebra via sparse structure constants.

    ``mul`` may be a full {(i,j): {k: c}} table or a callable computing one
    pair on demand (cached); tensor-product algebras use the lazy form.
    """

    def __init__(
        self,
        basis: Basis,
        scalar_order: int,
        mul,
        unit_label,
        name: str = "",
    ):
        self.basis = basis
        self.scalar_order = scalar_order
        self.name = name
        self.unit_label = unit_label
        if callable(mul):
            self._table: dict = {}
            self._mul_fn = mul
        else:
            self._table = mul
            self._mul_fn = None

    # -- element constructors ----------------------------------------

    @property
    def dim(self) -> int:
        return len(self.basis)

    def zero(self) -> Element:
        return Element.zero(self.basis)

    def one(self) -> Element:
        return Element(self.basis, {self.unit_label: CycNum.one(self.scalar_order)})

    def basis_element(self, label) -> Element:
        if label not in self.basis:
            raise KeyError(f"{label!r} is not a basis label of {self.name}")
        return Element(self.basis, {label: CycNum.one(self.scalar_order)})

    def element(self, terms: dict) -> Element:
        out = {}
        for lab, c in terms.items():
            if lab not in self.basis:
                raise KeyError(f"{lab!r} is not a basis label of {self.name}")
            if not isinstance(c, CycNum):
                c = CycNum.from_rational(self.scalar_order, c)
            if not c.is_zero():
                out[lab] = c
        return Element(self.basis, out)

    def scalar(self, value) -> CycNum:
        if isinstance(value, CycNum):
            return value
        return CycNum.from_rational(self.scalar_order, value)

    # -- multiplication ------------------------------------------------

    def mul_basis(self, l1, l2) -> dict:
        key = (l1, l2)
        got = self._table.get(key)
        if got is None:
            if self._mul_fn is None:
                return {}
            got = self._mul_fn(l1, l2)
            self._table[key] = got
        return got

    def multiply(self, x: Element, y: Element) -> Element:
        out: dict = {}
        mul_basis = self.mul_basis
        for lx, cx in x.terms.items():
            for ly, cy in y.terms.items():
                c = cx * cy
                for lz, cz in mul_basis(lx, ly).items():
                    add = cz * c
                    cur = out.get(lz)
                    new = add if cur is None else cur + add
                    if new.is_zero():
                        out.pop(lz, None)
                    else:
                        out[lz] = new
        return Element(self.basis, out)

    def product(self, *xs: Element) -> Element:
        acc = xs[0]
        for x in xs[1:]:
            acc = self.multiply(acc, x)
        return acc

    def power(self, x: Element, k: int) -> Element:
        acc = self.one()
        for _ in range(k):
            acc = self.multiply(acc, x)
        return acc

    def precompute(self) -> None:
        if self._mul_fn is None:
            return
        for l1 in self.basis.labels:
            for l2 in self.basis.labels:
                self.mul_basis(l1, l2)


def tensor_algebra(algebras: Sequence[FinAlgebra], name: str = "") -> FinAlgebra:
    """Tensor product algebra with componentwise multiplication."""
    flat: list[FinAlgebra] = []
    for a in algebras:
        sub = getattr(a, "_tensor_factors", None)
        flat.extend(sub if sub else [a])
    order = flat[0].scalar_order
    for a in flat:
        if a.scalar_order != order:
            raise ValueError("tensor factors must share the scalar order")
    basis = TensorBasis([a.basis for a in flat])
    unit_label = tuple(a.unit_label for a in flat)

    def mul(l1, l2):
        factor_products = [
            a.mul_basis(p1, p2) for a, p1, p2 in zip(flat, l1, l2)
        ]
        out: dict = {}
        for combo in itertools.product(*(fp.items() for fp in factor_products)):
            label = tuple(k for k, _ in combo)
            coeff = None
            for _, c in combo:
                coeff = c if coeff is None else coeff * c
            if not coeff.is_zero():
                cur = out.get(label)
                out[label] = coeff if cur is None else cur + coeff
        return out

    alg = FinAlgebra(basis, order, mul, unit_label, name=name or "(" + "⊗".join(a.name for a in flat) + ")")
    alg._tensor_factors = flat
    return alg


# ---------------------------------------------------------------------------
# verification and inversion
# ---------------------------------------------------------------------------

def verify_algebra(A: FinAlgebra) -> VerificationReport:
    """Exhaustive unit and associativity check over all basis tuples."""
    report = VerificationReport()
    labels = A.basis.labels
    one = A.one()

    rec = report.add(CheckRecord("unit-laws", "pass"))
    with timed(rec):
        for lab in labels:
            e = A.basis_element(lab)
            left = A.multiply(one, e)
            right = A.multiply(e, one)
            if left != e or right != e:
                rec.status = "fail"
                rec.witness = A.basis.render(lab)
                rec.lhs = str(left)
                rec.rhs = str(e)
                break

    rec = report.add(CheckRecord("associativity", "pass"))
    with timed(rec):
        mul_basis = A.mul_basis
        done = False
        for li in labels:
            if done:
                break
            for lj in labels:
                if done:
                    break
                pij = mul_basis(li, lj)
                for lk in labels:
                    lhs: dict = {}
                    for lab, c in pij.items():
                        for lz, cz in mul_basis(lab, lk).items():
                            add = cz * c
                            cur = lhs.get(lz)
                            new = add if cur is None else cur + add
                            if new.is_zero():
                                lhs.pop(lz, None)
                            else:
                                lhs[lz] = new
                    rhs: dict = {}
                    for lab, c in mul_basis(lj, lk).items():
                        for lz, cz in mul_basis(li, lab).items():
                            add = cz * c
                            cur = rhs.get(lz)
                            new = add if cur is None else cur + add
                            if new.is_zero():
                                rhs.pop(lz, None)
                            else:
                                rhs[lz] = new
                    if lhs != rhs:
                        rec.status = "fail"
                        rec.witness = "(" + ", ".join(
                            A.basis.render(l) for l in (li, lj, lk)
                        ) + ")"
                        rec.lhs = str(Element(A.basis, lhs))
                        rec.rhs = str(Element(A.basis, rhs))
                        done = True
                        break
    return report


def invert_element(A: FinAlgebra, u: Element) -> Element:
    """Two-sided inverse of ``u``.

    Solves the left-multiplication linear system on the subalgebra k[u]
    spanned by the powers of ``u`` (the inverse, when it exists, is a
    polynomial in ``u``), then rechecks both product laws.  Raises
    NonInvertibleError when no inverse exists.
    """
    basis = A.basis
    ech = SparseEchelon(track=True)
    powers = [A.one()]
    ech.insert({basis.index_of(l): c for l, c in powers[0].terms.items()})
    current = powers[0]
    while True:
        current = A.multiply(current, u)
        vec = {basis.index_of(l): c for l, c in current.terms.items()}
        coords = ech.coordinates(vec)
        if coords is not None:
            # u^r = sum_i coords[i] u^i with r = len(powers)
            a0 = coords.get(0)
            if a0 is None or a0.is_zero():
                raise NonInvertibleError(
                    f"element is a zero divisor (minimal polynomial has zero constant term): {u}"
                )
            inv_a0 = a0.inv()
            v = powers[-1].scale(inv_a0)
            for i, c in coords.items():
                if i >= 1:
                    v = v + powers[i - 1].scale(-c * inv_a0)
            if A.multiply(u, v) != A.one() or A.multiply(v, u) != A.one():
                raise NonInvertibleError("inverse verification failed")
            return v
        ech.insert(vec)
        powers.append(current)
        if len(powers) > A.dim + 1:
            raise NonInvertibleError("power iteration exceeded the dimension bound")
