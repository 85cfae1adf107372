"""Limit brackets, verification of scaling families, searches and obstructions.

A family is a square matrix C_r over Q(r) mapping target coordinates into
source coordinates; the induced bracket is  lim_{r->0} C_r^{-1}[C_r x, C_r y]
computed exactly.  Verification is exact tensor equality against the target
in its given basis; producing an isomorphic copy is the caller's job via an
explicit base change.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import (
    InvariantReport,
    LieAlgebra,
    fingerprint,
    make_algebra,
    pad_with_abelian,
    series_value,
)
from .linalg import (
    field_inverse,
    field_rank,
    frac_matrix,
    mat_mul,
    ratfun_matrix_inverse,
)
from .ratfun import PoleAtZero, RatFun


class LimitDoesNotExist(ArithmeticError):
    """Some component of the limit bracket has a pole at r=0."""

    def __init__(self, i: int, j: int, component: int, order: int):
        self.pair = (i, j)
        self.component = component
        self.order = order
        super().__init__(
            f"limit of [e{i + 1}, e{j + 1}] has a pole of order {order} "
            f"in component e{component + 1}"
        )


class DimensionBookkeeping(ValueError):
    """Padding sizes that violate k + dim(source) = k0 + dim(target)."""


class ReductionFailed(ArithmeticError):
    """No perturbation in the finite schedule produced a reducible family."""


class ContractionFamily:
    """Invertible-over-Q(r) family from target coordinates to source coordinates."""

    __slots__ = ("source", "target", "matrix", "_hash")

    def __init__(self, source: LieAlgebra, target: LieAlgebra, matrix):
        rows = tuple(
            tuple(x if isinstance(x, RatFun) else RatFun.parse(str(x)) for x in row)
            for row in matrix
        )
        n = source.dim
        if target.dim != n:
            raise ValueError("source and target must have equal dimension")
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ValueError(f"family matrix must be {n}x{n}")
        if field_rank([list(r) for r in rows]) != n:
            raise ValueError("family matrix is singular over Q(r)")
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "matrix", rows)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("ContractionFamily is immutable")

    def column(self, j: int) -> list[RatFun]:
        return [self.matrix[i][j] for i in range(len(self.matrix))]

    def inverse_matrix(self) -> list[list[RatFun]]:
        return ratfun_matrix_inverse([list(r) for r in self.matrix])

    def max_exponent(self) -> int:
        """Largest |exponent| appearing in any entry's normal form."""
        worst = 0
        for row in self.matrix:
            for entry in row:
                for poly in (entry.num, entry.den):
                    for e in poly.terms:
                        worst = max(worst, abs(e))
        return worst

    def __eq__(self, other):
        return (
            isinstance(other, ContractionFamily)
            and self.source == other.source
            and self.target == other.target
            and self.matrix == other.matrix
        )

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(
                self, "_hash", hash((self.source, self.target, self.matrix))
            )
        return self._hash

    def __repr__(self):
        return (
            f"ContractionFamily({self.source.name!r} ~> {self.target.name!r}, "
            f"dim={self.source.dim})"
        )


def scaling_family(
    source: LieAlgebra,
    target: LieAlgebra,
    exponents: list[int],
    base_change=None,
) -> ContractionFamily:
    """The family P * diag(r^k1, .., r^kn) (P rational, identity if absent)."""
    n = source.dim
    if base_change is None:
        rows = [
            [RatFun.monomial(exponents[j]) if i == j else RatFun.zero() for j in range(n)]
            for i in range(n)
        ]
    else:
        rows = [
            [RatFun.monomial(exponents[j], base_change[i][j]) for j in range(n)]
            for i in range(n)
        ]
    return ContractionFamily(source, target, rows)


# ---------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class RuleViolation:
    rule: str
    invariant: str
    source_value: str
    target_value: str

    def __str__(self):
        return (
            f"{self.rule} ({self.invariant}): source {self.source_value}, "
            f"target {self.target_value}"
        )


@dataclass(frozen=True)
class Verdict:
    """Outcome of a verification or decision.

    VERIFIED carries a family that re-verifies; BLOCKED carries the violated
    rules; REFUTED refutes one particular family (not the relation); UNKNOWN
    asserts nothing.
    """

    status: str
    family: ContractionFamily | None = None
    violations: tuple[RuleViolation, ...] = ()
    detail: str = ""

    @staticmethod
    def verified(family: ContractionFamily, detail: str = "") -> Verdict:
        return Verdict("VERIFIED", family=family, detail=detail)

    @staticmethod
    def refuted(detail: str) -> Verdict:
        return Verdict("REFUTED", detail=detail)

    @staticmethod
    def blocked(violations: list[RuleViolation]) -> Verdict:
        if not violations:
            raise ValueError("BLOCKED requires at least one violated rule")
        return Verdict("BLOCKED", violations=tuple(violations))

    @staticmethod
    def unknown(detail: str = "") -> Verdict:
        return Verdict("UNKNOWN", detail=detail)


# ---------------------------------------------------------------------------
# limit brackets


def contracted_brackets(fam: ContractionFamily) -> dict[tuple[int, int], dict[int, Fraction]]:
    """The limiting structure tensor of the family, exactly."""
    n = fam.source.dim
    inverse = fam.inverse_matrix()
    cols = [fam.column(j) for j in range(n)]
    table: dict[tuple[int, int], dict[int, Fraction]] = {}
    for i in range(n):
        for j in range(i + 1, n):
            w = fam.source.bracket(cols[i], cols[j])
            comps: dict[int, Fraction] = {}
            for k in range(n):
                z = sum((inverse[k][t] * w[t] for t in range(n)), RatFun.zero())
                try:
                    value = z.limit0()
                except PoleAtZero as exc:
                    raise LimitDoesNotExist(i, j, k, exc.order) from None
                if value != 0:
                    comps[k] = value
            if comps:
                table[(i, j)] = comps
    return table


def limit_algebra(fam: ContractionFamily, name: str = "limit") -> LieAlgebra:
    """The limit as a Lie algebra (Jacobi re-asserted: a true limit of brackets)."""
    return make_algebra(name, fam.source.dim, contracted_brackets(fam))


def verify_contraction(fam: ContractionFamily) -> Verdict:
    """VERIFIED iff the limit tensor exists and equals the target's exactly."""
    try:
        table = contracted_brackets(fam)
    except LimitDoesNotExist as exc:
        return Verdict.refuted(str(exc))
    n = fam.source.dim
    for i in range(n):
        for j in range(i + 1, n):
            got = table.get((i, j), {})
            for k in range(n):
                expected = fam.target.structure(i, j, k)
                if got.get(k, Fraction(0)) != expected:
                    return Verdict.refuted(
                        f"bracket mismatch at [e{i + 1}, e{j + 1}]: component "
                        f"e{k + 1} is {got.get(k, Fraction(0))}, target has {expected}"
                    )
    return Verdict.verified(fam)


def verify_stabilized(
    g: LieAlgebra, g0: LieAlgebra, k: int, k0: int, matrix
) -> Verdict:
    """Verify after padding source with a_k and target with a_k0."""
    if k < 0 or k0 < 0 or k + g.dim != k0 + g0.dim:
        raise DimensionBookkeeping(
            f"need k + dim g = k0 + dim g0, got {k} + {g.dim} != {k0} + {g0.dim}"
        )
    fam = ContractionFamily(pad_with_abelian(g, k), pad_with_abelian(g0, k0), matrix)
    return verify_contraction(fam)


# ---------------------------------------------------------------------------
# base changes and composition


def conjugate_family(
    fam: ContractionFamily,
    new_source: LieAlgebra | None = None,
    source_iso=None,
    new_target: LieAlgebra | None = None,
    target_iso=None,
) -> ContractionFamily:
    """Rewrite a family along isomorphisms given as coordinate matrices.

    ``source_iso`` maps new-source coordinates to old-source coordinates (and
    must be an algebra isomorphism onto fam.source); likewise for the target.
    The rewritten family is source_iso^-1 * C_r * target_iso.
    """
    rows = [list(r) for r in fam.matrix]
    src = fam.source
    tgt = fam.target
    if source_iso is not None:
        q = [[RatFun.const(x) for x in row] for row in frac_matrix(source_iso)]
        qinv = field_inverse(q)
        rows = mat_mul(qinv, rows)
        src = new_source
    if target_iso is not None:
        q = [[RatFun.const(x) for x in row] for row in frac_matrix(target_iso)]
        rows = mat_mul(rows, q)
        tgt = new_target
    return ContractionFamily(src, tgt, rows)


def compose_families(
    outer: ContractionFamily, inner: ContractionFamily, max_power: int = 6
) -> ContractionFamily:
    """A verifying family for source(outer) ~> target(inner) built from a
    verified chain source(outer) ~> target(outer) = source(inner) ~> target(inner).

    Tries C_outer(r^N) * C_inner(r) for N = 1.. and returns the first
    composition that verifies; raises ReductionFailed when none does.
    """
    if outer.target != inner.source:
        raise ValueError("families do not chain")
    for power in range(1, max_power + 1):
        reparam = [
            [_substitute_power(entry, power) for entry in row] for row in outer.matrix
        ]
        candidate = ContractionFamily(
            outer.source, inner.target, mat_mul(reparam, [list(r) for r in inner.matrix])
        )
        if verify_contraction(candidate).status == "VERIFIED":
            return candidate
    raise ReductionFailed("no power reparameterization makes the composition verify")


def _substitute_power(f: RatFun, power: int) -> RatFun:
    num = {e * power: c for e, c in f.num.terms.items()}
    den = {e * power: c for e, c in f.den.terms.items()}
    from .laurent import LaurentPoly

    return RatFun(LaurentPoly(num), LaurentPoly(den))


# ---------------------------------------------------------------------------
# stabilization reduction


def reduce_stabilized(fam: ContractionFamily) -> ContractionFamily:
    """Strip one abelian padding line off a verifying (n+1)-family.

    Writing C_r in blocks (A_r, b_r; c_r, d_r), a verifying family whose A_r
    block is invertible over Q(r) reduces to A_r; otherwise high-order
    perturbations C_r + m*r^N*id are tried (N beyond every exponent of the
    family, so the existing limit is undisturbed), and ReductionFailed is
    raised when the schedule is exhausted.

    The padding line is located automatically on each side (a coordinate no
    bracket touches), so permuted paddings are accepted; the reduced family
    lives on the remaining coordinates in their original order.
    """
    fam = _padding_to_last(fam)
    n = fam.source.dim - 1
    source = _strip_line(fam.source)
    target = _strip_line(fam.target)
    exponent = fam.max_exponent() + 1
    candidates = [[list(row) for row in fam.matrix]]
    for m in range(1, 9):
        eps = RatFun.monomial(exponent, m)
        candidates.append(
            [
                [fam.matrix[i][j] + (eps if i == j else 0) for j in range(n + 1)]
                for i in range(n + 1)
            ]
        )
    for index, rows in enumerate(candidates):
        padded = ContractionFamily(fam.source, fam.target, rows)
        if verify_contraction(padded).status != "VERIFIED":
            continue
        block = [[padded.matrix[i][j] for j in range(n)] for i in range(n)]
        if field_rank(block) != n:
            continue
        reduced = ContractionFamily(source, target, block)
        if verify_contraction(reduced).status == "VERIFIED":
            return reduced
    raise ReductionFailed(
        "no candidate in the perturbation schedule yields an invertible, "
        "verifying leading block"
    )


def _padding_line(g: LieAlgebra) -> int:
    """Last coordinate no bracket touches (an abelian direct-summand line)."""
    used = set()
    for (i, j), comps in g.table_dict().items():
        used.update((i, j))
        used.update(comps)
    free = [k for k in range(g.dim) if k not in used]
    if not free:
        raise ValueError(f"{g.name} has no abelian padding line to strip")
    return free[-1]


def _move_to_last(g: LieAlgebra, line: int) -> tuple[LieAlgebra, list[list[Fraction]]]:
    """Reorder so `line` is last; returns (algebra, iso from reordered to g)."""
    n = g.dim
    order = [k for k in range(n) if k != line] + [line]
    position = {old: new for new, old in enumerate(order)}
    table = {}
    for (i, j), comps in g.table_dict().items():
        a, b = position[i], position[j]
        moved = {position[k]: c for k, c in comps.items()}
        if a > b:
            a, b = b, a
            moved = {k: -c for k, c in moved.items()}
        table[(a, b)] = moved
    reordered = LieAlgebra(g.name, n, table, _validated=True)
    iso = [[Fraction(1) if order[j] == i else Fraction(0) for j in range(n)] for i in range(n)]
    return reordered, iso


def _padding_to_last(fam: ContractionFamily) -> ContractionFamily:
    src_line = _padding_line(fam.source)
    tgt_line = _padding_line(fam.target)
    if src_line == fam.source.dim - 1 and tgt_line == fam.target.dim - 1:
        return fam
    new_source, src_iso = _move_to_last(fam.source, src_line)
    new_target, tgt_iso = _move_to_last(fam.target, tgt_line)
    return conjugate_family(
        fam,
        new_source=new_source,
        source_iso=src_iso,
        new_target=new_target,
        target_iso=tgt_iso,
    )


def _strip_line(g: LieAlgebra) -> LieAlgebra:
    """Drop the final coordinate, which must be central and unused."""
    n = g.dim - 1
    table = {}
    for (i, j), comps in g.table_dict().items():
        if i >= n or j >= n or any(k >= n for k in comps):
            raise ValueError("final coordinate is not an abelian direct factor")
        table[(i, j)] = comps
    return LieAlgebra(g.name, n, table, _validated=True)


# ---------------------------------------------------------------------------
# diagonal search


def search_diagonal(
    g: LieAlgebra,
    g0: LieAlgebra,
    exponent_bound: int,
    base_change=None,
) -> ContractionFamily | None:
    """First (lexicographically) verifying P*diag(r^k) family, or None.

    Exponents range over [-bound, bound]^n in lex order; the limit of such a
    family is the base-changed tensor filtered by exponent signs, so the
    search walks a DFS with sound partial-assignment pruning.  A found family
    is re-verified through the general machinery before being returned.
    """
    if g.dim != g0.dim:
        raise ValueError("search requires equal dimensions")
    n = g.dim
    if base_change is not None:
        base_change = frac_matrix(base_change)
        conjugated = _conjugated_tensor(g, base_change)
        if conjugated is None:
            raise ValueError("base change matrix is singular")
    else:
        conjugated = {
            (i, j): dict(g.table_dict().get((i, j), {}))
            for i in range(n)
            for j in range(i + 1, n)
        }
        conjugated = {p: c for p, c in conjugated.items() if c}
    # constraints: for each nonzero conjugated entry b at (i, j, k), the
    # exponent s = a_i + a_j - a_k must satisfy s > 0 (target entry 0),
    # or s = 0 with b equal to the target entry.
    constraints: list[tuple[int, int, int, Fraction, Fraction]] = []
    for i in range(n):
        for j in range(i + 1, n):
            bvals = conjugated.get((i, j), {})
            for k in range(n):
                b = bvals.get(k, Fraction(0))
                t = g0.structure(i, j, k)
                if b == 0 and t != 0:
                    return None  # a zero component can never grow a limit
                if b == 0:
                    continue
                if t != 0 and b != t:
                    return None  # surviving coefficients are never rescaled
                constraints.append((i, j, k, b, t))
    by_depth: list[list[tuple[int, int, int, Fraction, Fraction]]] = [
        [] for _ in range(n)
    ]
    for c in constraints:
        by_depth[max(c[0], c[1], c[2])].append(c)

    exponents = [0] * n

    def admissible(depth: int) -> bool:
        for i, j, k, b, t in by_depth[depth]:
            s = exponents[i] + exponents[j] - exponents[k]
            if t != 0:
                if s != 0:
                    return False
            elif s <= 0:
                return False
        return True

    def dfs(depth: int) -> bool:
        if depth == n:
            return True
        for a in range(-exponent_bound, exponent_bound + 1):
            exponents[depth] = a
            if admissible(depth) and dfs(depth + 1):
                return True
        return False

    if not dfs(0):
        return None
    fam = scaling_family(g, g0, list(exponents), base_change)
    verdict = verify_contraction(fam)
    if verdict.status != "VERIFIED":
        raise AssertionError(
            f"diagonal search produced a non-verifying family: {verdict.detail}"
        )
    return fam


def _conjugated_tensor(g: LieAlgebra, P) -> dict | None:
    """Structure constants of g in the basis given by P's columns."""
    n = g.dim
    pinv = field_inverse(P)
    if pinv is None:
        return None
    cols = [[P[i][j] for i in range(n)] for j in range(n)]
    out: dict[tuple[int, int], dict[int, Fraction]] = {}
    for i in range(n):
        for j in range(i + 1, n):
            w = g.bracket(cols[i], cols[j])
            comps = {}
            for k in range(n):
                v = sum((pinv[k][t] * w[t] for t in range(n)), Fraction(0))
                if v != 0:
                    comps[k] = v
            if comps:
                out[(i, j)] = comps
    return out


# ---------------------------------------------------------------------------
# the obstruction rule table


RULE_TABLE: tuple[tuple[str, str], ...] = (
    ("R1", "derived series dimensions are non-increasing"),
    ("R2", "lower central dimensions non-increasing; nilpotency with class non-increasing"),
    ("R3", "solvability is preserved"),
    ("R4", "center dimension is non-decreasing"),
    ("R5", "unimodularity is preserved"),
    ("R6", "Killing positives and negatives are each non-increasing"),
    ("R7", "generic coadjoint-orbit rank is non-increasing"),
    ("R8", "derivation dimension is non-decreasing; equality forces isomorphism"),
    ("R9", "codim-<=1 abelian ideal existence is non-decreasing (when decidable)"),
)


def _definitely_distinct(fs: InvariantReport, ft: InvariantReport) -> bool:
    """Fingerprint inequality that never leans on an undecided field."""
    a, b = fs.as_dict(), ft.as_dict()
    if (
        fs.has_codim1_abelian_ideal is None
        or ft.has_codim1_abelian_ideal is None
    ):
        a.pop("has_codim1_abelian_ideal")
        b.pop("has_codim1_abelian_ideal")
    return a != b


def _series_violation(src: tuple[int, ...], tgt: tuple[int, ...]) -> int | None:
    for j in range(max(len(src), len(tgt))):
        if series_value(tgt, j) > series_value(src, j):
            return j
    return None


def obstruct(g: LieAlgebra, g0: LieAlgebra) -> list[RuleViolation]:
    """All rule-table violations for the ordered pair g ~> g0."""
    if g.dim != g0.dim:
        raise ValueError("obstruction rules compare equal dimensions")
    fs, ft = fingerprint(g), fingerprint(g0)
    out: list[RuleViolation] = []

    j = _series_violation(fs.derived_series_dims, ft.derived_series_dims)
    if j is not None:
        out.append(
            RuleViolation(
                "R1",
                f"derived series dim at step {j + 1}",
                str(series_value(fs.derived_series_dims, j)),
                str(series_value(ft.derived_series_dims, j)),
            )
        )

    j = _series_violation(fs.lower_central_dims, ft.lower_central_dims)
    if j is not None:
        out.append(
            RuleViolation(
                "R2",
                f"lower central dim at step {j + 1}",
                str(series_value(fs.lower_central_dims, j)),
                str(series_value(ft.lower_central_dims, j)),
            )
        )
    elif fs.nilpotent_class is not None and (
        ft.nilpotent_class is None or ft.nilpotent_class > fs.nilpotent_class
    ):
        out.append(
            RuleViolation(
                "R2",
                "nilpotency class",
                str(fs.nilpotent_class),
                str(ft.nilpotent_class),
            )
        )

    if fs.solvable and not ft.solvable:
        out.append(RuleViolation("R3", "solvability", "solvable", "not solvable"))

    if ft.center_dim < fs.center_dim:
        out.append(
            RuleViolation("R4", "center dim", str(fs.center_dim), str(ft.center_dim))
        )

    if fs.unimodular and not ft.unimodular:
        out.append(RuleViolation("R5", "unimodularity", "unimodular", "not unimodular"))

    sp, sn, _ = fs.killing_signature
    tp, tn, _ = ft.killing_signature
    if tp > sp or tn > sn:
        out.append(
            RuleViolation(
                "R6",
                "Killing inertia (pos, neg)",
                f"({sp}, {sn})",
                f"({tp}, {tn})",
            )
        )

    if ft.coadjoint_rank > fs.coadjoint_rank:
        out.append(
            RuleViolation(
                "R7",
                "coadjoint rank",
                str(fs.coadjoint_rank),
                str(ft.coadjoint_rank),
            )
        )

    if ft.derivation_dim < fs.derivation_dim:
        out.append(
            RuleViolation(
                "R8",
                "derivation dim",
                str(fs.derivation_dim),
                str(ft.derivation_dim),
            )
        )
    elif ft.derivation_dim == fs.derivation_dim and _definitely_distinct(fs, ft):
        out.append(
            RuleViolation(
                "R8",
                "derivation dim equal with distinct fingerprints",
                str(fs.derivation_dim),
                str(ft.derivation_dim),
            )
        )

    if (
        fs.has_codim1_abelian_ideal is True
        and ft.has_codim1_abelian_ideal is False
    ):
        out.append(
            RuleViolation(
                "R9", "codim-<=1 abelian ideal", "exists", "does not exist"
            )
        )

    return out


# ---------------------------------------------------------------------------
# decision


@dataclass
class WitnessStore:
    """Read-only collection of known verifying families."""

    families: list[ContractionFamily] = field(default_factory=list)

    def lookup(self, g: LieAlgebra, g0: LieAlgebra) -> ContractionFamily | None:
        for fam in self.families:
            if fam.source == g and fam.target == g0:
                return fam
        return None


def decide(
    g: LieAlgebra,
    g0: LieAlgebra,
    witness_store: WitnessStore | None = None,
    exponent_bound: int = 4,
) -> Verdict:
    """VERIFIED with a witness, else BLOCKED by rules, else UNKNOWN."""
    if g.dim != g0.dim:
        raise ValueError("decide requires equal dimensions; pad with abelian factors")
    if witness_store is not None:
        stored = witness_store.lookup(g, g0)
        if stored is not None:
            verdict = verify_contraction(stored)
            if verdict.status == "VERIFIED":
                return verdict
    if g == g0:
        identity_fam = scaling_family(g, g0, [0] * g.dim)
        return verify_contraction(identity_fam)
    found = search_diagonal(g, g0, exponent_bound)
    if found is not None:
        return Verdict.verified(found)
    violations = obstruct(g, g0)
    if violations:
        return Verdict.blocked(violations)
    return Verdict.unknown("no witness found and no rule violated")
