"""Lie algebras over Q given by structure constants, and their invariants.

An algebra is a dimension plus the antisymmetric tensor c[i][j][k] with
[e_i, e_j] = sum_k c[i][j][k] e_k, stored sparsely for i < j (0-based).
Construction validates the Jacobi identity, so every value of this type is a
genuine Lie algebra.

The invariant suite (series dimensions, center, Killing inertia, generic
coadjoint-orbit rank, derivation dimension, unimodularity, abelian-ideal
data) is exactly the fingerprint used to obstruct degenerations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .linalg import (
    congruence_signature,
    field_nullspace,
    field_rank,
    in_span,
    mat_mul,
    polymatrix_rank,
    row_space_basis,
)
from .multipoly import MultiPoly

BracketSpec = dict[tuple[int, int], dict[int, Fraction]]


class JacobiViolation(ValueError):
    """Structure constants that fail Jacobi; carries the first bad triple."""

    def __init__(self, triple: tuple[int, int, int], residual: list[Fraction]):
        self.triple = triple
        self.residual = residual
        i, j, l = triple
        super().__init__(
            f"Jacobi fails on (e{i + 1}, e{j + 1}, e{l + 1}): residual {residual}"
        )


class LieAlgebra:
    """Immutable structure-constant tensor with a name."""

    __slots__ = ("name", "dim", "_table", "_hash")

    def __init__(self, name: str, dim: int, table: BracketSpec, *, _validated=False):
        clean: dict[tuple[int, int], tuple[tuple[int, Fraction], ...]] = {}
        for (i, j), comps in table.items():
            if not (0 <= i < j < dim):
                raise ValueError(f"bad bracket indices ({i}, {j}) for dim {dim}")
            entries = tuple(
                sorted((int(k), Fraction(c)) for k, c in comps.items() if c != 0)
            )
            for k, _ in entries:
                if not 0 <= k < dim:
                    raise ValueError(f"bad component index {k} for dim {dim}")
            if entries:
                clean[(i, j)] = entries
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "_table", clean)
        object.__setattr__(
            self, "_hash", hash((dim, tuple(sorted(clean.items()))))
        )
        if not _validated:
            _check_jacobi(self)

    def __setattr__(self, name, value):
        raise AttributeError("LieAlgebra is immutable")

    def __eq__(self, other) -> bool:
        """Exact tensor equality in the given bases (names are labels only)."""
        return (
            isinstance(other, LieAlgebra)
            and self.dim == other.dim
            and self._table == other._table
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"LieAlgebra({self.name!r}, dim={self.dim})"

    # -- brackets ------------------------------------------------------------

    def pairs(self):
        """Sorted nonzero bracket pairs (i, j) with i < j, 0-based."""
        return sorted(self._table)

    def structure(self, i: int, j: int, k: int) -> Fraction:
        """c^k_{ij} for any i, j (antisymmetry applied)."""
        if i == j:
            return Fraction(0)
        sign = 1
        if i > j:
            i, j, sign = j, i, -1
        for kk, c in self._table.get((i, j), ()):
            if kk == k:
                return sign * c
        return Fraction(0)

    def bracket_basis(self, i: int, j: int) -> list[Fraction]:
        """[e_i, e_j] as a dense coordinate vector."""
        out = [Fraction(0)] * self.dim
        if i == j:
            return out
        sign = 1
        if i > j:
            i, j, sign = j, i, -1
        for k, c in self._table.get((i, j), ()):
            out[k] = sign * c
        return out

    def bracket(self, x: list, y: list) -> list:
        """Bilinear antisymmetric expansion; works for Fraction or Q(r) vectors."""
        if len(x) != self.dim or len(y) != self.dim:
            raise ValueError("vector length must equal the algebra dimension")
        zero = x[0] * 0 if self.dim else 0
        out = [zero] * self.dim
        for (i, j), comps in self._table.items():
            coeff = x[i] * y[j] - x[j] * y[i]
            if coeff == 0:
                continue
            for k, c in comps:
                out[k] = out[k] + coeff * c
        return out

    def ad(self, i: int) -> list[list[Fraction]]:
        """Matrix of ad(e_i) acting on coordinates."""
        cols = [self.bracket_basis(i, j) for j in range(self.dim)]
        return [[cols[j][k] for j in range(self.dim)] for k in range(self.dim)]

    def ad_vector(self, x: list[Fraction]) -> list[list[Fraction]]:
        n = self.dim
        out = [[Fraction(0)] * n for _ in range(n)]
        for i, xi in enumerate(x):
            if xi == 0:
                continue
            adi = self.ad(i)
            for r in range(n):
                for c in range(n):
                    out[r][c] += xi * adi[r][c]
        return out

    def rename(self, name: str) -> LieAlgebra:
        return LieAlgebra(name, self.dim, dict(self.table_dict()), _validated=True)

    def table_dict(self) -> BracketSpec:
        return {pair: dict(comps) for pair, comps in self._table.items()}


@dataclass(frozen=True)
class Subspace:
    """Echelonized basis of a subspace of the coordinate space."""

    ambient_dim: int
    basis: tuple[tuple[Fraction, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: list[Fraction]) -> bool:
        return in_span([list(b) for b in self.basis], v)

    @staticmethod
    def from_vectors(ambient_dim: int, vectors: list[list[Fraction]]) -> Subspace:
        basis = row_space_basis(vectors)
        return Subspace(ambient_dim, tuple(tuple(v) for v in basis))


def _check_jacobi(g: LieAlgebra):
    n = g.dim
    for i in range(n):
        for j in range(i + 1, n):
            for l in range(j + 1, n):
                residual = [Fraction(0)] * n
                for a, b, c in ((i, j, l), (j, l, i), (l, i, j)):
                    w = g.bracket_basis(a, b)
                    for k, wk in enumerate(w):
                        if wk == 0:
                            continue
                        inner = g.bracket_basis(k, c)
                        for m in range(n):
                            residual[m] += wk * inner[m]
                if any(x != 0 for x in residual):
                    raise JacobiViolation((i, j, l), residual)


def make_algebra(name: str, dim: int, brackets: BracketSpec) -> LieAlgebra:
    """Build and Jacobi-validate an algebra from {(i, j): {k: coeff}} (0-based)."""
    return LieAlgebra(name, dim, brackets)


def abelian(n: int) -> LieAlgebra:
    return LieAlgebra(f"a{n}", n, {}, _validated=True)


def direct_sum(g: LieAlgebra, h: LieAlgebra, name: str | None = None) -> LieAlgebra:
    """Block-diagonal sum; h's basis vectors follow g's."""
    table: BracketSpec = g.table_dict()
    off = g.dim
    for (i, j), comps in h.table_dict().items():
        table[(i + off, j + off)] = {k + off: c for k, c in comps.items()}
    label = name if name is not None else f"{g.name}+{h.name}"
    return LieAlgebra(label, g.dim + h.dim, table, _validated=True)


def pad_with_abelian(g: LieAlgebra, k: int) -> LieAlgebra:
    if k < 0:
        raise ValueError("padding must be nonnegative")
    return direct_sum(g, abelian(k)) if k else g


# ---------------------------------------------------------------------------
# invariants


def _span_brackets(g: LieAlgebra, left: list[list[Fraction]], right: list[list[Fraction]]):
    vectors = []
    for x in left:
        for y in right:
            v = g.bracket(x, y)
            if any(c != 0 for c in v):
                vectors.append(v)
    return row_space_basis(vectors)


def _series_dims(g: LieAlgebra, step) -> tuple[int, ...]:
    dims: list[int] = []
    current = [list(v) for v in _basis_vectors(g.dim)]
    prev = None
    while True:
        current = step(current)
        d = len(current)
        if d == prev:
            break
        dims.append(d)
        if d == 0:
            break
        prev = d
    return tuple(dims)


def _basis_vectors(n: int) -> list[list[Fraction]]:
    return [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]


@lru_cache(maxsize=None)
def derived_series_dims(g: LieAlgebra) -> tuple[int, ...]:
    """Dims of [g,g], [[g,g],[g,g]], ... until the sequence stabilizes."""
    return _series_dims(g, lambda cur: _span_brackets(g, cur, cur))


@lru_cache(maxsize=None)
def lower_central_dims(g: LieAlgebra) -> tuple[int, ...]:
    full = _basis_vectors(g.dim)
    return _series_dims(g, lambda cur: _span_brackets(g, full, cur))


def series_value(dims: tuple[int, ...], j: int) -> int:
    """dims extended by repeating its last entry (series stabilize)."""
    if not dims:
        return 0
    return dims[min(j, len(dims) - 1)]


def derived_subalgebra(g: LieAlgebra) -> Subspace:
    basis = _span_brackets(g, _basis_vectors(g.dim), _basis_vectors(g.dim))
    return Subspace(g.dim, tuple(tuple(v) for v in basis))


@lru_cache(maxsize=None)
def center(g: LieAlgebra) -> Subspace:
    """Exact nullspace of the stacked adjoint maps."""
    n = g.dim
    if n == 0:
        return Subspace(0, ())
    stacked = []
    for i in range(n):
        stacked.extend(g.ad(i))
    kernel = field_nullspace(stacked, ncols=n)
    return Subspace.from_vectors(n, kernel)


def is_solvable(g: LieAlgebra) -> bool:
    dims = derived_series_dims(g)
    return dims[-1] == 0


def nilpotent_class(g: LieAlgebra) -> int | None:
    """Nilpotency class, with class(abelian) = 1; None when not nilpotent."""
    dims = lower_central_dims(g)
    if dims[-1] != 0:
        return None
    return len(dims)


@lru_cache(maxsize=None)
def unimodular(g: LieAlgebra) -> bool:
    for i in range(g.dim):
        adi = g.ad(i)
        if sum((adi[k][k] for k in range(g.dim)), Fraction(0)) != 0:
            return False
    return True


@lru_cache(maxsize=None)
def killing_matrix(g: LieAlgebra) -> tuple[tuple[Fraction, ...], ...]:
    n = g.dim
    ads = [g.ad(i) for i in range(n)]
    K = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            prod = mat_mul(ads[i], ads[j])
            tr = sum((prod[k][k] for k in range(n)), Fraction(0))
            K[i][j] = K[j][i] = tr
    return tuple(tuple(row) for row in K)


def killing_signature(g: LieAlgebra) -> tuple[int, int, int]:
    """(positives, negatives, zeros) of the Killing form, by congruence."""
    K = [list(row) for row in killing_matrix(g)]
    if not K:
        return (0, 0, 0)
    return congruence_signature(K)


def coadjoint_form(g: LieAlgebra) -> list[list[MultiPoly]]:
    """The skew matrix B[i][j] = <xi, [e_i, e_j]> with linear-form entries."""
    n = g.dim
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            terms = {}
            for k in range(n):
                c = g.structure(i, j, k)
                if c != 0:
                    exp = [0] * n
                    exp[k] = 1
                    terms[tuple(exp)] = c
            row.append(MultiPoly(n, terms))
        rows.append(row)
    return rows


@lru_cache(maxsize=None)
def coadjoint_rank(g: LieAlgebra) -> int:
    """Maximal rank of B_xi over all functionals, as a rank over Q(xi_1..xi_n)."""
    if g.dim == 0:
        return 0
    return polymatrix_rank(coadjoint_form(g))


@lru_cache(maxsize=None)
def derivation_dim(g: LieAlgebra) -> int:
    """Dimension of the derivation algebra, by exact rank of the Leibniz system."""
    n = g.dim
    if n == 0:
        return 0
    # unknowns D[a][b] flattened as a*n + b, meaning D e_b = sum_a D[a][b] e_a
    rows = []
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                row = [Fraction(0)] * (n * n)
                for m in range(n):
                    c = g.structure(i, j, m)
                    if c != 0:
                        row[k * n + m] += c
                for a in range(n):
                    c = g.structure(a, j, k)
                    if c != 0:
                        row[a * n + i] -= c
                for b in range(n):
                    c = g.structure(i, b, k)
                    if c != 0:
                        row[b * n + j] -= c
                if any(x != 0 for x in row):
                    rows.append(row)
    return n * n - field_rank(rows)


def is_abelian(g: LieAlgebra) -> bool:
    return not g.pairs()


def is_abelian_ideal(g: LieAlgebra, s: Subspace) -> bool:
    """Exact check that [S,S] = 0 and [g,S] is contained in S."""
    if s.ambient_dim != g.dim:
        raise ValueError("subspace must live in the algebra's coordinate space")
    vs = [list(v) for v in s.basis]
    for a in range(len(vs)):
        for b in range(a + 1, len(vs)):
            if any(c != 0 for c in g.bracket(vs[a], vs[b])):
                return False
    for i in range(g.dim):
        ei = [Fraction(1) if t == i else Fraction(0) for t in range(g.dim)]
        for v in vs:
            if not s.contains(g.bracket(ei, v)):
                return False
    return True


def _complement_basis(n: int, sub: list[list[Fraction]]) -> list[list[Fraction]]:
    """Standard basis vectors completing `sub` to all of Q^n."""
    out = []
    current = [list(v) for v in sub]
    for i in range(n):
        e = [Fraction(1) if t == i else Fraction(0) for t in range(n)]
        if not in_span(current, e):
            out.append(e)
            current.append(e)
    return out


@lru_cache(maxsize=None)
def has_codim1_abelian_ideal(g: LieAlgebra) -> bool | None:
    """Existence of an abelian ideal of codimension <= 1; None when undecided.

    A codimension-1 ideal necessarily contains [g,g], so candidates are the
    preimages of hyperplanes W in V = g/[g,g].  Decidable by exact kernel
    computations when dim V <= 3 (in dim 3 every 2-form is decomposable);
    larger V is left undecided.
    """
    n = g.dim
    if is_abelian(g):
        return True
    derived = derived_subalgebra(g)
    dvecs = [list(v) for v in derived.basis]
    for a in range(len(dvecs)):
        for b in range(a + 1, len(dvecs)):
            if any(c != 0 for c in g.bracket(dvecs[a], dvecs[b])):
                return False  # every candidate contains a nonabelian [g,g]
    dim_v = n - derived.dim
    if dim_v == 0:
        return False
    if dim_v >= 4:
        return None
    lifts = _complement_basis(n, dvecs)
    if dim_v == 1:
        return True  # H = [g,g] itself is abelian of codimension 1
    # stack the maps v -> [v, d] over all d in [g,g]
    columns = []
    for u in lifts:
        col = []
        for d in dvecs:
            col.extend(g.bracket(u, d))
        columns.append(col)
    if dim_v == 2:
        rows = [[columns[0][t], columns[1][t]] for t in range(len(columns[0]))]
        kernel = field_nullspace(rows, ncols=2)
        return bool(kernel)
    # dim_v == 3
    rows = [[columns[0][t], columns[1][t], columns[2][t]] for t in range(len(columns[0]))]
    k1 = field_nullspace(rows, ncols=3)
    if len(k1) <= 1:
        return False
    if len(k1) == 2:
        w1 = _combine(lifts, k1[0])
        w2 = _combine(lifts, k1[1])
        return all(c == 0 for c in g.bracket(w1, w2))
    # K1 = V: scan the kernel of the induced map on 2-vectors
    pairs = [(0, 1), (0, 2), (1, 2)]
    bcols = [g.bracket(lifts[a], lifts[b]) for a, b in pairs]
    brows = [[bcols[0][t], bcols[1][t], bcols[2][t]] for t in range(n)]
    return bool(field_nullspace(brows, ncols=3))


def _combine(vectors: list[list[Fraction]], coeffs: list[Fraction]) -> list[Fraction]:
    n = len(vectors[0])
    out = [Fraction(0)] * n
    for c, v in zip(coeffs, vectors):
        if c != 0:
            for t in range(n):
                out[t] += c * v[t]
    return out


def flat_generic_orbits(g: LieAlgebra) -> bool:
    """Center is a line and the generic orbit has full codimension one."""
    return center(g).dim == 1 and coadjoint_rank(g) == g.dim - 1


# ---------------------------------------------------------------------------
# fingerprint


@dataclass(frozen=True)
class InvariantReport:
    dim: int
    derived_series_dims: tuple[int, ...]
    lower_central_dims: tuple[int, ...]
    center_dim: int
    solvable: bool
    nilpotent_class: int | None
    unimodular: bool
    killing_signature: tuple[int, int, int]
    coadjoint_rank: int
    derivation_dim: int
    has_codim1_abelian_ideal: bool | None
    flat_generic_orbits: bool

    def as_dict(self) -> dict:
        return {
            "dim": self.dim,
            "derived_series_dims": list(self.derived_series_dims),
            "lower_central_dims": list(self.lower_central_dims),
            "center_dim": self.center_dim,
            "solvable": self.solvable,
            "nilpotent_class": self.nilpotent_class,
            "unimodular": self.unimodular,
            "killing_signature": list(self.killing_signature),
            "coadjoint_rank": self.coadjoint_rank,
            "derivation_dim": self.derivation_dim,
            "has_codim1_abelian_ideal": self.has_codim1_abelian_ideal,
            "flat_generic_orbits": self.flat_generic_orbits,
        }


@lru_cache(maxsize=None)
def fingerprint(g: LieAlgebra) -> InvariantReport:
    report = InvariantReport(
        dim=g.dim,
        derived_series_dims=derived_series_dims(g),
        lower_central_dims=lower_central_dims(g),
        center_dim=center(g).dim,
        solvable=is_solvable(g),
        nilpotent_class=nilpotent_class(g),
        unimodular=unimodular(g),
        killing_signature=killing_signature(g),
        coadjoint_rank=coadjoint_rank(g),
        derivation_dim=derivation_dim(g),
        has_codim1_abelian_ideal=has_codim1_abelian_ideal(g),
        flat_generic_orbits=flat_generic_orbits(g),
    )
    assert report.coadjoint_rank % 2 == 0, "skew forms have even rank"
    assert sum(report.killing_signature) == g.dim
    return report
