"""Degree-d PC derivability oracle by iterated exact linear algebra.

The degree-d closure of an equation set is the vector space spanned by
everything PC can derive without any line exceeding degree d: seed with
the axioms of degree <= d, then close under linear combination and under
multiplication by single variables while the product stays within d.
Membership in the span is equivalent to degree-d PC derivability, and
each basis row carries a provenance record so a membership witness can
be replayed into an explicit derivation that the checker accepts.

Rows are kept in echelon form with graded-lex pivoting over the exact
coefficient field (rationals or GF(p)).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .algebra import EquationSet, Monomial, Polynomial, Ring
from .proofcheck import Derivation, DerivationBuilder

DEFAULT_MONOMIAL_CAP = 200_000


class ClosureTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class RowSource:
    """How a row's raw polynomial arose: axiom k, Boolean axiom, or x*row."""

    kind: str  # "axiom" | "bool" | "mul"
    index: int = -1  # axiom index or parent row id
    var: int = -1


@dataclass
class BasisRow:
    poly: Polynomial
    lead: Monomial
    source: RowSource
    reductions: tuple[tuple[object, int], ...]  # poly = raw - sum coeff*rows[i].poly


@dataclass
class ClosureBasis:
    ring: Ring
    degree_bound: int
    variables: tuple[int, ...]
    axioms: EquationSet
    rows: list[BasisRow]

    def span_dimension(self) -> int:
        return len(self.rows)

    def reduce(self, p: Polynomial):
        """Reduce p against the basis; returns (remainder, eliminations)."""
        by_lead = {row.lead: i for i, row in enumerate(self.rows)}
        used: list[tuple[object, int]] = []
        while not p.is_zero:
            lead = min(p.terms, key=lambda m: m.sort_key())
            i = by_lead.get(lead)
            if i is None:
                break
            row = self.rows[i]
            factor = self.ring.mul(p.coefficient(lead), self.ring.inv(row.poly.coefficient(lead)))
            p = p - row.poly.scale(factor)
            used.append((factor, i))
        return p, tuple(used)

    def contains(self, p: Polynomial) -> bool:
        remainder, _ = self.reduce(p)
        return remainder.is_zero


def pc_closure(
    axioms: EquationSet,
    degree_bound: int,
    monomial_cap: int = DEFAULT_MONOMIAL_CAP,
    extra_variables=(),
) -> ClosureBasis:
    """Fixpoint of linear span plus degree-capped variable multiplication.

    Multiplication ranges over the variables occurring in the axioms plus
    any caller-supplied extras (a derivation may introduce fresh ones).
    """
    ring = axioms.ring
    variables = tuple(sorted(axioms.variables() | set(extra_variables)))
    count = comb(len(variables) + degree_bound, degree_bound) if variables else 1
    if count > monomial_cap:
        raise ClosureTooLarge(
            f"{count} monomials of degree <= {degree_bound} exceeds the cap {monomial_cap}"
        )

    basis = ClosureBasis(ring, degree_bound, variables, axioms, [])

    def try_insert(raw: Polynomial, source: RowSource) -> int | None:
        if raw.is_zero or raw.degree > degree_bound:
            return None
        remainder, used = basis.reduce(raw)
        if remainder.is_zero:
            return None
        lead = min(remainder.terms, key=lambda m: m.sort_key())
        basis.rows.append(BasisRow(remainder, lead, source, used))
        return len(basis.rows) - 1

    queue: list[int] = []
    for k, p in enumerate(axioms):
        rid = try_insert(p, RowSource("axiom", index=k))
        if rid is not None:
            queue.append(rid)
    if axioms.boolean_axioms:
        for v in variables:
            x = Polynomial.variable(ring, v)
            rid = try_insert(x * x - x, RowSource("bool", var=v))
            if rid is not None:
                queue.append(rid)

    head = 0
    while head < len(queue):
        rid = queue[head]
        head += 1
        row_poly = basis.rows[rid].poly
        if row_poly.degree >= degree_bound:
            continue
        for v in variables:
            product = row_poly * Polynomial.variable(ring, v)
            new_id = try_insert(product, RowSource("mul", index=rid, var=v))
            if new_id is not None:
                queue.append(new_id)
    return basis


def extract_derivation(basis: ClosureBasis, target: Polynomial) -> Derivation | None:
    """Replay provenance into an explicit PC derivation of target, or None.

    The output cites the closure's original axioms, uses only degree-bound
    admissible lines, and verifies under check_derivation.
    """
    if target.degree > basis.degree_bound:
        raise ValueError(
            f"target degree {target.degree} exceeds the closure bound {basis.degree_bound}"
        )
    remainder, used = basis.reduce(target)
    if not remainder.is_zero:
        return None

    builder = DerivationBuilder(
        "pc", basis.ring, basis.axioms, boolean_axioms=basis.axioms.boolean_axioms
    )
    emitted: dict[int, int] = {}

    def emit_row(rid: int) -> int:
        if rid in emitted:
            return emitted[rid]
        row = basis.rows[rid]
        if row.source.kind == "axiom":
            line = builder.axiom(row.source.index)
        elif row.source.kind == "bool":
            line = builder.bool_axiom(row.source.var)
        else:
            parent = emit_row(row.source.index)
            line = builder.mul_var(parent, row.source.var)
        for coeff, other in row.reductions:
            line = builder.add(line, emit_row(other), 1, basis.ring.neg(coeff))
        emitted[rid] = line
        return line

    if target.is_zero:
        builder.zero()
    else:
        parts = [(emit_row(rid), coeff) for coeff, rid in used]
        final = builder.combination(parts)
        assert builder.poly(final) == target
    return builder.build()
