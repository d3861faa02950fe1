"""Actual-cause decisions with certifying witnesses.

A candidate cause is a true conjunction of primitive events; it is an actual
cause of an outcome when three conditions hold:

  AC1  the conjunction and the outcome both hold in the solved world;
  AC2  some contingency certifies counterfactual dependence: partition the
       endogenous variables into Z (containing the candidate X) and W, and
       find settings x' of X and w of W such that
         (a) the outcome is false under [X <- x', W <- w], and the resulting
             witness world is at least as normal as the actual world, and
         (b) the outcome stays true under [X <- x, W' <- w, Z' <- z*] for
             every W' subset of W and every Z' subset of Z minus X, where z*
             are the actual solved values;
  AC3  no strict nonempty sub-conjunction satisfies AC1 and AC2.

The search enumerates contingencies by increasing change count (the number of
W variables whose setting differs from the actual world), so the witnesses it
reports are exactly the minimal-change ones that responsibility scoring needs.

Two pruning devices keep desk-scale queries fast without giving up exactness:
solve results are memoized per intervention, and pins of variables that never
deviate from their actual values are skipped (pinning a variable at the value
it already takes cannot change any solution, so such pins are no-ops both in
the witness search and inside the AC2(b) subset sweep).
"""

from __future__ import annotations

import itertools
import random
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from .formula import AndF, Atom, EventFormula, PrimitiveEvent
from .model import Assignment, CausalModel, Context, Intervention, World
from .normality import ExtendedModel

DEFAULT_MAX_VARS = 12


class CapExceededError(RuntimeError):
    """Raised in exact mode when a model exceeds the variable cap."""


@dataclass
class EngineStats:
    """Work counters for one query; wall time is tracked by callers."""

    solves: int = 0
    subset_checks: int = 0


@dataclass(frozen=True)
class EngineOptions:
    max_vars: int = DEFAULT_MAX_VARS
    sampled: bool = False
    seed: int = 0
    samples: int = 5000


@dataclass(frozen=True)
class CandidateCause:
    """A nonempty conjunction of primitive events over distinct variables."""

    settings: Assignment

    def __post_init__(self) -> None:
        if len(self.settings) == 0:
            raise ValueError("candidate cause must be nonempty")

    @classmethod
    def of(cls, mapping: Mapping[str, int]) -> CandidateCause:
        return cls(Assignment(mapping))

    def validate(self, model: CausalModel) -> None:
        for name, value in self.settings.items():
            if not model.signature.is_endogenous(name):
                raise ValueError(f"cause variable {name!r} is not endogenous")
            model.signature.check_value(name, value)

    def variables(self) -> frozenset[str]:
        return frozenset(self.settings)

    def event_formula(self) -> EventFormula:
        items = self.settings.items_sorted()
        node: EventFormula = Atom(PrimitiveEvent(*items[-1]))
        for name, value in reversed(items[:-1]):
            node = AndF(Atom(PrimitiveEvent(name, value)), node)
        return node

    def strict_subsets(self) -> Iterator[CandidateCause]:
        items = self.settings.items_sorted()
        for r in range(1, len(items)):
            for combo in itertools.combinations(items, r):
                yield CandidateCause(Assignment(dict(combo)))


@dataclass(frozen=True)
class Witness:
    """A contingency certifying AC2 for a candidate cause."""

    w_set: frozenset[str]
    w_setting: Assignment
    x_prime: Assignment
    changes: int


@dataclass(frozen=True)
class Ac2bFailure:
    """An AC2(a)-passing attempt rejected by a specific AC2(b) instance."""

    w_set: frozenset[str]
    w_setting: Assignment
    x_prime: Assignment
    w_prime: frozenset[str]
    z_prime: frozenset[str]


@dataclass(frozen=True)
class CauseVerdict:
    is_cause: bool
    witnesses: tuple[Witness, ...] = ()
    failed_condition: str | None = None  # "AC1" | "AC2" | "AC3" when not a cause
    ac2b_failures: tuple[Ac2bFailure, ...] = ()
    sampled: bool = False


_AC2B_FAILURE_CAP = 32


def _subsets(items: Sequence[str]) -> Iterator[tuple[str, ...]]:
    """All subsets, increasing size, lexicographic by position within size."""
    for r in range(len(items) + 1):
        yield from itertools.combinations(items, r)


class _Search:
    """Witness search for one (extended model, context, cause, outcome)."""

    def __init__(
        self,
        ext: ExtendedModel,
        context: Context,
        cause: CandidateCause,
        outcome: EventFormula,
        stats: EngineStats,
    ):
        self.ext = ext
        self.model = ext.model
        self.context = context
        self.cause = cause
        self.outcome = outcome
        self.stats = stats
        self._cache: dict[frozenset, World] = {}
        self.actual = self._solve({})
        sig = self.model.signature
        self.decl_index = sig.endogenous_index
        self.x_vars = sorted(cause.variables(), key=self.decl_index.__getitem__)
        self.others = [v for v in sig.endogenous_names if v not in cause.variables()]
        self.x_actual = {v: cause.settings[v] for v in self.x_vars}
        self.ac2b_failures: list[Ac2bFailure] = []

    # -- solving ------------------------------------------------------------

    def _solve(self, pins: Mapping[str, int]) -> World:
        key = frozenset(pins.items())
        world = self._cache.get(key)
        if world is None:
            world = self.model.solve_pinned(self.context, pins)
            self._cache[key] = world
            self.stats.solves += 1
        return world

    # -- pruning helper -----------------------------------------------------

    def _relevant_fixpoint(self, base_pins: dict[str, int], candidates: list[str]) -> list[str]:
        """Variables whose actual-value pins can matter on top of base_pins.

        A candidate enters the set once it deviates from its actual value in
        any world reachable by pinning a subset of the set so far; pins of
        never-deviating variables are provably no-ops.
        """
        relevant: list[str] = []
        while True:
            new: set[str] = set()
            for sub in _subsets(relevant):
                pins = dict(base_pins)
                for v in sub:
                    pins[v] = self.actual[v]
                world = self._solve(pins)
                for v in candidates:
                    if v not in relevant and world[v] != self.actual[v]:
                        new.add(v)
            if not new:
                return relevant
            relevant = sorted(set(relevant) | new, key=self.decl_index.__getitem__)

    # -- AC2 ----------------------------------------------------------------

    def ac2b(self, w_set: Sequence[str], w_setting: Mapping[str, int]):
        """Check AC2(b); return None if it holds, else the first failing (W', Z')."""
        w_sorted = sorted(w_set, key=self.decl_index.__getitem__)
        z_minus_x = [v for v in self.others if v not in w_set]
        for w_prime in _subsets(w_sorted):
            base = dict(self.x_actual)
            for v in w_prime:
                base[v] = w_setting[v]
            relevant = self._relevant_fixpoint(base, z_minus_x)
            for z_prime in _subsets(relevant):
                pins = dict(base)
                for v in z_prime:
                    pins[v] = self.actual[v]
                self.stats.subset_checks += 1
                if not self.outcome.satisfied_by(self._solve(pins)):
                    return frozenset(w_prime), frozenset(z_prime)
        return None

    def check_witness(self, w_set: Iterable[str], w_setting: Mapping[str, int], x_prime: Mapping[str, int]):
        """Full AC2 check of an explicit witness; returns (ok, ac2b_failure)."""
        w_set = frozenset(w_set)
        pins = dict(x_prime)
        pins.update({v: w_setting[v] for v in w_set})
        world = self._solve(pins)
        if self.outcome.satisfied_by(world):
            return False, None  # AC2(a) fails
        if not self.ext.at_least_as_normal(world, self.actual):
            return False, None  # witness world is not admissible
        failure = self.ac2b(sorted(w_set, key=self.decl_index.__getitem__), w_setting)
        return failure is None, failure

    # -- witness enumeration --------------------------------------------------

    def _x_alternatives(self) -> list[dict[str, int]]:
        ranges = self.model.signature.ranges
        actual_combo = tuple(self.x_actual[v] for v in self.x_vars)
        out = []
        for combo in itertools.product(*(ranges[v] for v in self.x_vars)):
            if combo != actual_combo:
                out.append(dict(zip(self.x_vars, combo)))
        return out

    def _change_assignments(self, weights: Mapping[str, Fraction] | None):
        """(measure, C, c) triples sorted by measure, then size, then position."""
        ranges = self.model.signature.ranges
        triples = []
        for c_vars in _subsets(self.others):
            if weights is None:
                measure: Fraction | int = len(c_vars)
            else:
                measure = sum((weights[v] for v in c_vars), Fraction(0))
            alt_values = [
                [val for val in ranges[v] if val != self.actual[v]] for v in c_vars
            ]
            key = (measure, len(c_vars), tuple(self.decl_index[v] for v in c_vars))
            triples.append((key, c_vars, alt_values))
        triples.sort(key=lambda t: t[0])
        for key, c_vars, alt_values in triples:
            for combo in itertools.product(*alt_values):
                yield key[0], c_vars, dict(zip(c_vars, combo))

    def find_minimal_witnesses(
        self,
        weights: Mapping[str, Fraction] | None = None,
        existence_only: bool = False,
        record_failures: bool = False,
    ):
        """Minimal-measure admissible witnesses.

        Returns (measure, witnesses); (None, ()) when AC2 is unsatisfiable.
        With uniform weights the measure is the change count k.
        """
        x_alts = self._x_alternatives()
        found: list[Witness] = []
        found_measure = None
        for measure, c_vars, c in self._change_assignments(weights):
            if found_measure is not None and measure > found_measure:
                break
            for x_prime in x_alts:
                witness = self._first_witness_for(c_vars, c, x_prime, record_failures)
                if witness is not None:
                    found.append(witness)
                    found_measure = measure
                    if existence_only:
                        return found_measure, tuple(found)
                    break  # one canonical witness per change assignment
        return found_measure, tuple(found)

    def _first_witness_for(
        self,
        c_vars: tuple[str, ...],
        c: dict[str, int],
        x_prime: dict[str, int],
        record_failures: bool,
    ) -> Witness | None:
        """Smallest-W witness for a fixed change assignment, or None."""
        base = dict(x_prime)
        base.update(c)
        e_candidates = [v for v in self.others if v not in c]
        relevant = self._relevant_fixpoint(base, e_candidates)
        for e_sub in _subsets(relevant):
            pins = dict(base)
            for v in e_sub:
                pins[v] = self.actual[v]
            world = self._solve(pins)
            if self.outcome.satisfied_by(world):
                continue  # AC2(a) fails for this W
            if not self.ext.at_least_as_normal(world, self.actual):
                continue  # inadmissible contingency under the normality order
            w_set = frozenset(c_vars) | frozenset(e_sub)
            w_setting = dict(c)
            for v in e_sub:
                w_setting[v] = self.actual[v]
            failure = self.ac2b(sorted(w_set, key=self.decl_index.__getitem__), w_setting)
            if failure is None:
                return Witness(
                    w_set=w_set,
                    w_setting=Assignment(w_setting),
                    x_prime=Assignment(x_prime),
                    changes=len(c_vars),
                )
            if record_failures and len(self.ac2b_failures) < _AC2B_FAILURE_CAP:
                self.ac2b_failures.append(
                    Ac2bFailure(
                        w_set=w_set,
                        w_setting=Assignment(w_setting),
                        x_prime=Assignment(x_prime),
                        w_prime=failure[0],
                        z_prime=failure[1],
                    )
                )
        return None

    def sampled_witnesses(self, options: EngineOptions):
        """Randomized witness sampling for models above the cap.

        Unsound for negative verdicts: a miss does not prove there is no
        witness.  Found witnesses are still fully verified.
        """
        rng = random.Random(options.seed)
        ranges = self.model.signature.ranges
        x_alts = self._x_alternatives()
        if not x_alts:
            return None, ()
        best: Witness | None = None
        for _ in range(options.samples):
            w_vars = tuple(v for v in self.others if rng.random() < 0.5)
            w_setting = {v: rng.choice(ranges[v]) for v in w_vars}
            x_prime = rng.choice(x_alts)
            ok, _failure = self.check_witness(w_vars, w_setting, x_prime)
            if ok:
                changes = sum(1 for v in w_vars if w_setting[v] != self.actual[v])
                witness = Witness(frozenset(w_vars), Assignment(w_setting), Assignment(x_prime), changes)
                if best is None or witness.changes < best.changes:
                    best = witness
        if best is None:
            return None, ()
        return best.changes, (best,)


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------


def check_ac1(
    model: CausalModel,
    context: Context,
    cause: CandidateCause,
    outcome: EventFormula,
) -> bool:
    """AC1: the candidate conjunction and the outcome both actually hold."""
    cause.validate(model)
    outcome.validate(model)
    world = model.solve(context)
    return (
        all(world[v] == x for v, x in cause.settings.items())
        and outcome.satisfied_by(world)
    )


def check_ac2(
    ext: ExtendedModel,
    context: Context,
    cause: CandidateCause,
    outcome: EventFormula,
    witness: Witness,
    stats: EngineStats | None = None,
) -> bool:
    """Re-verify AC2 (both clauses plus the normality gate) for a witness."""
    if witness.w_set & cause.variables():
        raise ValueError("witness W set overlaps the candidate cause")
    if not witness.w_set <= set(witness.w_setting):
        raise ValueError("witness setting must cover its W set")
    if set(witness.x_prime) != cause.variables():
        raise ValueError("witness x' must set exactly the cause variables")
    search = _Search(ext, context, cause, outcome, stats or EngineStats())
    ok, _ = search.check_witness(witness.w_set, witness.w_setting, witness.x_prime)
    return ok


def _enforce_cap(ext: ExtendedModel, options: EngineOptions) -> None:
    n = len(ext.model.signature.endogenous_names)
    if n > options.max_vars and not options.sampled:
        raise CapExceededError(
            f"model has {n} endogenous variables, above the exact-mode cap of"
            f" {options.max_vars}; raise --max-vars or use sampled mode"
        )


def is_actual_cause(
    ext: ExtendedModel,
    context: Context,
    cause: CandidateCause,
    outcome: EventFormula,
    options: EngineOptions = EngineOptions(),
    stats: EngineStats | None = None,
) -> CauseVerdict:
    """Decide actual causation, reporting minimal-change witnesses."""
    stats = stats if stats is not None else EngineStats()
    cause.validate(ext.model)
    outcome.validate(ext.model)
    _enforce_cap(ext, options)
    over_cap = len(ext.model.signature.endogenous_names) > options.max_vars

    if not check_ac1(ext.model, context, cause, outcome):
        return CauseVerdict(False, failed_condition="AC1", sampled=over_cap)

    search = _Search(ext, context, cause, outcome, stats)
    if over_cap:
        measure, witnesses = search.sampled_witnesses(options)
    else:
        measure, witnesses = search.find_minimal_witnesses(record_failures=True)
    if measure is None:
        return CauseVerdict(
            False,
            failed_condition="AC2",
            ac2b_failures=tuple(search.ac2b_failures),
            sampled=over_cap,
        )

    # AC3: a strict nonempty sub-conjunction passing AC1 and AC2 disqualifies
    # the candidate.  AC1 holds for every sub-conjunction whenever it holds
    # for the whole, so only AC2 needs searching.
    for sub in cause.strict_subsets():
        sub_search = _Search(ext, context, sub, outcome, stats)
        if over_cap:
            sub_measure, _ = sub_search.sampled_witnesses(options)
        else:
            sub_measure, _ = sub_search.find_minimal_witnesses(existence_only=True)
        if sub_measure is not None:
            return CauseVerdict(False, failed_condition="AC3", sampled=over_cap)

    return CauseVerdict(True, witnesses=witnesses, sampled=over_cap)


def find_all_causes(
    ext: ExtendedModel,
    context: Context,
    outcome: EventFormula,
    max_conjuncts: int = 1,
    options: EngineOptions = EngineOptions(),
    stats: EngineStats | None = None,
) -> list[tuple[CandidateCause, CauseVerdict]]:
    """Test every true conjunction of up to max_conjuncts primitive events.

    Candidates sharing a variable with the outcome are skipped: with finite
    ranges any true event trivially certifies itself, which the sweep is not
    meant to report.
    """
    if max_conjuncts < 1:
        raise ValueError("max_conjuncts must be at least 1")
    outcome.validate(ext.model)
    world = ext.model.solve(context)
    skip = outcome.variables()
    events = [
        (v, world[v])
        for v in ext.model.signature.endogenous_names
        if v not in skip
    ]
    results: list[tuple[CandidateCause, CauseVerdict]] = []
    for r in range(1, max_conjuncts + 1):
        for combo in itertools.combinations(events, r):
            cand = CandidateCause(Assignment(dict(combo)))
            verdict = is_actual_cause(ext, context, cand, outcome, options, stats)
            results.append((cand, verdict))
    return results


def witness_world(
    ext: ExtendedModel, context: Context, cause: CandidateCause, witness: Witness
) -> World:
    """The world the witness contingency determines."""
    pins = witness.x_prime.as_dict()
    pins.update(witness.w_setting.as_dict())
    return ext.model.solve_pinned(context, pins)
