"""Shared fixture data, expected values, and random-case generators.

All expected numbers below were frozen from independent computations:
either exact rational arithmetic over a set-of-minterms representation
(for the combination fixtures) or hand enumeration (for beliefs and
parties).  Tests compare the package against these constants, never
against values the package itself produced.
"""

from __future__ import annotations

import random
from pathlib import Path

from evfuse import Frame, MassFunction, Model, Proposition

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"

# Worked three-hypothesis example used across the suite: frame {A, B, C},
# all hypotheses exclusive, four sources over the columns A, B, A|C.
ROWS_M1 = {"A": 0.4, "B": 0.5, "A|C": 0.1}
ROWS_M2 = {"A": 0.6, "B": 0.2, "A|C": 0.2}
ROWS_M3 = {"A": 0.7, "B": 0.2, "A|C": 0.1}
ROWS_M4 = {"A": 0.5, "B": 0.5}

# Conjunctive products (free-form terms, conflicts kept separate).
CONJ_12 = {"A": 0.38, "B": 0.10, "A|C": 0.02, "A&B": 0.38, "A&B|B&C": 0.12}
CONJ_123 = {"A": 0.318, "B": 0.020, "A|C": 0.002, "A&B": 0.610, "A&B|B&C": 0.050}
CONJ_23 = {"A": 0.62, "B": 0.04, "A|C": 0.02, "A&B": 0.26, "A&B|B&C": 0.06}
CONJ_1234 = {"A": 0.160, "B": 0.010, "A&B": 0.804, "A&B|B&C": 0.026}

CONFLICT_12 = 0.50
CONFLICT_123 = 0.66
CONFLICT_1234 = 0.83

# Union (Dubois-Prade / hybrid) transfers of the products above.
UNION_12 = {"A": 0.38, "B": 0.10, "A|C": 0.02, "A|B": 0.38, "A|B|C": 0.12}
UNION_123 = {"A": 0.318, "B": 0.020, "A|C": 0.002, "A|B": 0.610, "A|B|C": 0.050}
UNION_1234 = {"A": 0.160, "B": 0.010, "A|B": 0.804, "A|B|C": 0.026}

DEMPSTER_12 = {"A": 0.76, "B": 0.20, "A|C": 0.04}
SMETS_12 = {"A": 0.38, "B": 0.10, "A|C": 0.02, "∅": 0.50}
YAGER_12 = {"A": 0.38, "B": 0.10, "A|C": 0.02, "A|B|C": 0.50}

# Proportional partial-conflict transfers; exact values are the
# rationals 513/850, 1447/4250, 7/125 and 9319/13000, 691/2600, 113/6500.
SDLI_12 = {"A": 0.603529, "B": 0.340471, "A|C": 0.056000}
SDLI_12_EXACT = {"A": 513 / 850, "B": 1447 / 4250, "A|C": 7 / 125}
SDLI_123 = {"A": 0.716846, "B": 0.265769, "A|C": 0.017385}
SDLI_123_EXACT = {"A": 9319 / 13000, "B": 691 / 2600, "A|C": 113 / 6500}

COLUMNS_12 = {"A": 1.0, "B": 0.7, "A|C": 0.3}
COLUMNS_123 = {"A": 1.7, "B": 0.9, "A|C": 0.4}

# Chained-transfer reference (transfer after every step) showing why the
# stored-state engine is needed: differs from UNION/YAGER snapshots.
YAGER_CHAINED_123 = {"A": 0.668, "B": 0.12, "A|C": 0.052, "A|B|C": 0.16}


def abc_model() -> Model:
    return Model.exclusive(Frame(("A", "B", "C")))


def mass_from_rows(model: Model, rows: dict[str, float]) -> MassFunction:
    frame = model.frame
    return MassFunction(model, [(frame.parse(expr), v) for expr, v in rows.items()])


def as_text_dict(mass_like) -> dict[str, float]:
    return {p.text(): v for p, v in mass_like.items()}


def assert_masses(mass_like, expected: dict[str, float], tol: float = 1e-9) -> None:
    actual = as_text_dict(mass_like)
    assert set(actual) == set(expected), (sorted(actual), sorted(expected))
    for key, want in expected.items():
        assert abs(actual[key] - want) <= tol, (key, actual[key], want)


# random-case generation ----------------------------------------------------

_NAMES = ("A", "B", "C", "D", "E")


def random_model(rng: random.Random, n: int | None = None,
                 kinds=("exclusive", "free")) -> Model:
    if n is None:
        n = rng.randint(2, 4)
    frame = Frame(_NAMES[:n])
    kind = rng.choice(kinds)
    return Model.exclusive(frame) if kind == "exclusive" else Model.free(frame)


def union_of_atoms(model: Model, atom_mask: int) -> Proposition:
    frame = model.frame
    p = frame.empty()
    for i in range(frame.n):
        if atom_mask >> i & 1:
            p = p | frame.atom(i)
    return p


def random_prop(rng: random.Random, model: Model) -> Proposition:
    """A random valid focal element for the model's proposition space.

    Exclusive models only admit unions of atoms; free models admit any
    union of intersections.
    """
    frame = model.frame
    if model.kind == "exclusive":
        return union_of_atoms(model, rng.randrange(1, 1 << frame.n))
    p = None
    for _ in range(rng.randint(1, 3)):
        mask = rng.randrange(1, 1 << frame.n)
        term = None
        for i in range(frame.n):
            if mask >> i & 1:
                atom = frame.atom(i)
                term = atom if term is None else term & atom
        p = term if p is None else p | term
    return p


def random_mass(rng: random.Random, model: Model, max_focal: int = 3) -> MassFunction:
    count = rng.randint(1, max_focal)
    props = [random_prop(rng, model) for _ in range(count)]
    weights = [rng.uniform(0.05, 1.0) for _ in props]
    total = sum(weights)
    return MassFunction(model, [(p, w / total) for p, w in zip(props, weights)])


def random_sources(rng: random.Random, model: Model, count: int,
                   max_focal: int = 3) -> list[MassFunction]:
    return [random_mass(rng, model, max_focal) for _ in range(count)]
