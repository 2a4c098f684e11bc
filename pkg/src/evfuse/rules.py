"""The conjunctive core and the catalog of conflict-transfer operators.

Every rule here is the same two-stage pipeline: multiply the sources
pointwise under intersection (the conjunctive stage), then apply a
transfer operator that decides where mass on model-empty propositions
goes.  The conjunctive stage never collapses conflicting terms, so
distinct partial conflicts such as A&B and A&B|B&C stay separate until
a transfer runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import TotalConflictError, ValidationError
from .lattice import Proposition
from .mass import SUM_TOLERANCE, ColumnSums, MassFunction, column_sums


class Rule(str, Enum):
    """Named combination rules: conjunctive core plus a transfer policy."""

    CONJUNCTIVE = "conjunctive"
    DEMPSTER = "dempster"
    SMETS = "smets"
    YAGER = "yager"
    DUBOIS_PRADE = "dubois_prade"
    DSM_CLASSIC = "dsm_classic"
    DSM_HYBRID = "dsm_hybrid"
    SDLI = "sdli"


# Rules whose transfer stage is the identity (pre-transfer masses are the
# decision output): dsm_classic is the conjunctive rule on the free lattice.
_NO_TRANSFER = frozenset({Rule.CONJUNCTIVE, Rule.DSM_CLASSIC})
# Both of these move each conflicting term to the union of its atoms.
_UNION_TRANSFER = frozenset({Rule.DUBOIS_PRADE, Rule.DSM_HYBRID})


@dataclass(frozen=True)
class ConjunctiveResult:
    """Product-of-sources masses kept on free-form propositions.

    Terms the model considers empty are retained as distinct entries;
    a transfer operator decides later what happens to them.
    """

    model: object
    terms: dict[Proposition, float]
    source_count: int

    def __post_init__(self):
        merged: dict[Proposition, float] = {}
        for prop, value in self.terms.items():
            if prop.frame != self.model.frame:
                raise ValidationError("term belongs to a different frame")
            value = float(value)
            if value < 0.0:
                raise ValidationError(f"negative term mass {value!r} on {prop.text()}")
            if value > 0.0:
                merged[prop] = merged.get(prop, 0.0) + value
        total = sum(merged.values())
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise ValidationError(
                f"conjunctive terms sum to {total!r}, expected 1 within {SUM_TOLERANCE}"
            )
        ordered = {p: merged[p] / total for p in sorted(merged, key=lambda q: q.bits)}
        object.__setattr__(self, "terms", ordered)

    def items(self):
        return self.terms.items()

    def as_dict(self) -> dict[Proposition, float]:
        return dict(self.terms)


def _term_view(x):
    if isinstance(x, MassFunction):
        return x.model, x.items(), 1
    if isinstance(x, ConjunctiveResult):
        return x.model, x.items(), x.source_count
    raise TypeError(f"cannot combine {type(x).__name__}")


def conjunctive(a, b) -> ConjunctiveResult:
    """Pointwise product combination: mass of X from one operand and Y
    from the other lands on X & Y, with no emptiness collapse.

    Operands may be mass functions or previously stored results.
    """
    model_a, items_a, count_a = _term_view(a)
    model_b, items_b, count_b = _term_view(b)
    if model_a != model_b:
        raise ValidationError("operands use different models")
    out: dict[Proposition, float] = {}
    for x, mx in items_a:
        for y, my in items_b:
            z = x & y
            out[z] = out.get(z, 0.0) + mx * my
    return ConjunctiveResult(model_a, out, count_a + count_b)


def conflict_of(result: ConjunctiveResult) -> float:
    """Total conjunctive mass on propositions empty under the model."""
    return sum(v for p, v in result.terms.items() if result.model.is_empty(p))


def _split(result: ConjunctiveResult):
    kept: dict[Proposition, float] = {}
    conflicting: dict[Proposition, float] = {}
    for p, v in result.terms.items():
        (conflicting if result.model.is_empty(p) else kept)[p] = v
    return kept, conflicting


def transfer_dempster(result: ConjunctiveResult) -> MassFunction:
    """Drop conflicting terms and rescale the survivors by 1/(1-k)."""
    kept, conflicting = _split(result)
    k = sum(conflicting.values())
    if not kept or 1.0 - k <= 0.0:
        raise TotalConflictError(
            f"conflict k={k!r}: Dempster combination is undefined"
        )
    scale = 1.0 / (1.0 - k)
    return MassFunction(result.model, {p: v * scale for p, v in kept.items()})


def transfer_smets(result: ConjunctiveResult) -> MassFunction:
    """Pool all conflicting mass on the empty proposition (open world)."""
    kept, conflicting = _split(result)
    out = dict(kept)
    if conflicting:
        out[result.model.frame.empty()] = sum(conflicting.values())
    return MassFunction(result.model, out, allow_conflict=True)


def transfer_yager(result: ConjunctiveResult) -> MassFunction:
    """Move all conflicting mass to total ignorance."""
    kept, conflicting = _split(result)
    out = dict(kept)
    if conflicting:
        top = result.model.frame.total_ignorance()
        out[top] = out.get(top, 0.0) + sum(conflicting.values())
    return MassFunction(result.model, out)


def transfer_union(result: ConjunctiveResult) -> MassFunction:
    """Move each conflicting term to the union of the atoms it mentions.

    Serves both the Dubois-Prade and the hybrid DSm rules.  Falls back
    to total ignorance when even that union is empty under the model.
    """
    kept, conflicting = _split(result)
    top = result.model.frame.total_ignorance()
    out = dict(kept)
    for p, v in conflicting.items():
        target = top if p.is_void else p.atoms_union()
        if result.model.is_empty(target):
            target = top
        out[target] = out.get(target, 0.0) + v
    return MassFunction(result.model, out)


def transfer_sdli(result: ConjunctiveResult, columns: ColumnSums) -> MassFunction:
    """Redistribute each conflicting term over its conflict parties,
    proportionally to the parties' accumulated column sums.

    Parties with zero column sum get nothing; if no party has any
    column mass the term falls back to the union transfer.  The column
    sums must cover exactly the sources whose product is ``result``.
    """
    if columns.model != result.model:
        raise ValidationError("column sums use a different model")
    kept, conflicting = _split(result)
    top = result.model.frame.total_ignorance()
    out = dict(kept)
    for p, v in conflicting.items():
        if p.is_void:
            out[top] = out.get(top, 0.0) + v
            continue
        parties = p.conflict_parties()
        weights = [columns.value(g) for g in parties]
        total = sum(weights)
        if total > 0.0:
            for g, w in zip(parties, weights):
                if w:
                    out[g] = out.get(g, 0.0) + v * (w / total)
        else:
            target = p.atoms_union()
            if result.model.is_empty(target):
                target = top
            out[target] = out.get(target, 0.0) + v
    return MassFunction(result.model, out)


def sdli2(m1: MassFunction, m2: MassFunction) -> MassFunction:
    """Direct two-source evaluation of the proportional partial-conflict
    rule from its closed formula.

    Each conflicting product m1(X)m2(A) + m1(A)m2(X) with X∩A empty is
    split between A and X in the ratio of their column sums.  Must match
    ``transfer_sdli(conjunctive(m1, m2), column_sums([m1, m2]))`` to
    within 1e-12; the test suite holds the two routes together.
    """
    if m1.model != m2.model:
        raise ValidationError("operands use different models")
    model = m1.model
    focal = sorted(set(m1.focal()) | set(m2.focal()), key=lambda p: p.bits)
    col = {p: m1.mass(p) + m2.mass(p) for p in focal}
    out: dict[Proposition, float] = {}
    for x, mx in m1.items():
        for y, my in m2.items():
            z = x & y
            if not model.is_empty(z):
                out[z] = out.get(z, 0.0) + mx * my
    for a in focal:
        share = 0.0
        for x in focal:
            if model.is_empty(a & x):
                num = m1.mass(x) * m2.mass(a) + m1.mass(a) * m2.mass(x)
                if num:
                    # num > 0 forces both columns > 0, so the denominator
                    # is never zero here
                    share += num / (col[a] + col[x])
        if share:
            out[a] = out.get(a, 0.0) + col[a] * share
    return MassFunction(model, out)


def apply_transfer(rule: Rule | str, result: ConjunctiveResult,
                   columns: ColumnSums | None = None) -> MassFunction:
    """Apply only the transfer stage of a rule to a stored result."""
    rule = Rule(rule)
    if rule in _NO_TRANSFER:
        return MassFunction(result.model, result.terms, allow_conflict=True)
    if rule is Rule.DEMPSTER:
        return transfer_dempster(result)
    if rule is Rule.SMETS:
        return transfer_smets(result)
    if rule is Rule.YAGER:
        return transfer_yager(result)
    if rule in _UNION_TRANSFER:
        return transfer_union(result)
    if columns is None:
        raise ValidationError("the sdli transfer needs column sums")
    return transfer_sdli(result, columns)


def combine2(rule: Rule | str, m1: MassFunction, m2: MassFunction):
    """Combine two sources under a rule: conjunctive stage, then transfer.

    The no-transfer rules return the raw :class:`ConjunctiveResult`; all
    others return a :class:`MassFunction`.
    """
    rule = Rule(rule)
    product = conjunctive(m1, m2)
    if rule in _NO_TRANSFER:
        return product
    if rule is Rule.SDLI:
        return transfer_sdli(product, column_sums([m1, m2]))
    return apply_transfer(rule, product)
