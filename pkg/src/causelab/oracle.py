"""Unpruned brute-force reference implementations, for tests only.

These re-derive cause verdicts and responsibility scores by enumerating every
partition, every setting, and every subset pair literally, with no memoization
and no search-order shortcuts.  They share only the model and formula layers
with the main engine, so agreement between the two is evidence rather than
tautology.

A hard guard keeps the enumeration at toy scale.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .formula import CausalFormula, EventFormula, NotF, holds
from .hp import CandidateCause
from .model import Context, Intervention
from .normality import ExtendedModel

ORACLE_MAX_VARS = 5


class OracleGuardError(RuntimeError):
    """Raised when a model is too large for literal enumeration."""


@dataclass(frozen=True)
class OracleWitness:
    w_set: frozenset[str]
    w_setting: tuple[tuple[str, int], ...]
    x_prime: tuple[tuple[str, int], ...]
    changes: int


@dataclass(frozen=True)
class OracleVerdict:
    is_cause: bool
    min_changes: int | None
    witnesses: tuple[OracleWitness, ...]
    failed_condition: str | None = None


def _ac1(ext: ExtendedModel, context: Context, cause: CandidateCause, outcome: EventFormula) -> bool:
    model = ext.model
    empty = Intervention()
    return holds(model, context, CausalFormula(empty, cause.event_formula())) and holds(
        model, context, CausalFormula(empty, outcome)
    )


def _all_witnesses(
    ext: ExtendedModel,
    context: Context,
    cause: CandidateCause,
    outcome: EventFormula,
) -> list[OracleWitness]:
    model = ext.model
    ranges = model.signature.ranges
    endo = model.signature.endogenous_names
    x_vars = [v for v in endo if v in cause.variables()]
    rest = [v for v in endo if v not in cause.variables()]
    actual = model.solve(context)
    not_outcome = NotF(outcome)
    x_actual = {v: cause.settings[v] for v in x_vars}

    found: list[OracleWitness] = []
    for r in range(len(rest) + 1):
        for w_vars in itertools.combinations(rest, r):
            z_minus_x = [v for v in rest if v not in w_vars]
            for w_combo in itertools.product(*(ranges[v] for v in w_vars)):
                w = dict(zip(w_vars, w_combo))
                for x_combo in itertools.product(*(ranges[v] for v in x_vars)):
                    xp = dict(zip(x_vars, x_combo))
                    pins_a = Intervention({**xp, **w})
                    if not holds(model, context, CausalFormula(pins_a, not_outcome)):
                        continue
                    world = model.intervene(pins_a).solve(context)
                    if not ext.at_least_as_normal(world, actual):
                        continue
                    ok = True
                    for wr in range(len(w_vars) + 1):
                        for w_prime in itertools.combinations(w_vars, wr):
                            for zr in range(len(z_minus_x) + 1):
                                for z_prime in itertools.combinations(z_minus_x, zr):
                                    pins_b = dict(x_actual)
                                    pins_b.update({v: w[v] for v in w_prime})
                                    pins_b.update({v: actual[v] for v in z_prime})
                                    f = CausalFormula(Intervention(pins_b), outcome)
                                    if not holds(model, context, f):
                                        ok = False
                                        break
                                if not ok:
                                    break
                            if not ok:
                                break
                        if not ok:
                            break
                    if ok:
                        changes = sum(1 for v in w_vars if w[v] != actual[v])
                        found.append(
                            OracleWitness(
                                frozenset(w_vars),
                                tuple(sorted(w.items())),
                                tuple(sorted(xp.items())),
                                changes,
                            )
                        )
    found.sort(key=lambda wt: (wt.changes, sorted(wt.w_set), wt.w_setting, wt.x_prime))
    return found


def _guard(ext: ExtendedModel, max_vars: int) -> None:
    n = len(ext.model.signature.endogenous_names)
    if n > max_vars:
        raise OracleGuardError(f"{n} endogenous variables exceed the oracle guard of {max_vars}")


def oracle_cause(
    ext: ExtendedModel,
    context: Context,
    cause: CandidateCause,
    outcome: EventFormula,
    max_vars: int = ORACLE_MAX_VARS,
) -> OracleVerdict:
    """Literal cause decision by full enumeration."""
    _guard(ext, max_vars)
    cause.validate(ext.model)
    outcome.validate(ext.model)
    if not _ac1(ext, context, cause, outcome):
        return OracleVerdict(False, None, (), "AC1")
    witnesses = _all_witnesses(ext, context, cause, outcome)
    if not witnesses:
        return OracleVerdict(False, None, (), "AC2")
    for sub in cause.strict_subsets():
        if _ac1(ext, context, sub, outcome) and _all_witnesses(ext, context, sub, outcome):
            return OracleVerdict(False, None, (), "AC3")
    return OracleVerdict(True, witnesses[0].changes, tuple(witnesses))


def oracle_responsibility(
    ext: ExtendedModel,
    context: Context,
    cause: CandidateCause,
    outcome: EventFormula,
    max_vars: int = ORACLE_MAX_VARS,
) -> Fraction:
    """Literal 1/(k+1) responsibility by exhaustive minimization of k."""
    verdict = oracle_cause(ext, context, cause, outcome, max_vars)
    if not verdict.is_cause:
        return Fraction(0)
    assert verdict.min_changes is not None
    return Fraction(1, verdict.min_changes + 1)
