"""Partial preorders on worlds and extended causal models.

A normality order declares that some worlds are at least as normal as others,
either through explicit ordered pairs or through integer ranks (lower rank =
more normal).  Queries run against the reflexive-transitive closure of the
declared pairs plus all rank-induced pairs.  Antisymmetry is deliberately not
enforced: two distinct worlds may each be at least as normal as the other.

With no order declared, an extended model falls back to the flat order under
which every world is as normal as every other; the extended cause definition
then coincides with the preliminary one.
"""

from __future__ import annotations

import itertools
from collections.abc import Mapping
from dataclasses import dataclass, field

from .model import CausalModel, ModelError, World


@dataclass(frozen=True)
class NormalityOrder:
    """Declared world pairs (more-normal, less-normal) and optional ranks."""

    pairs: tuple[tuple[World, World], ...] = ()
    ranks: tuple[tuple[World, int], ...] = ()
    _closure: Mapping[World, frozenset[World]] | None = field(default=None, compare=False)

    @property
    def is_closed(self) -> bool:
        return self._closure is not None

    @property
    def is_empty(self) -> bool:
        return not self.pairs and not self.ranks

    def at_least_as_normal(self, s: World, t: World) -> bool:
        """Membership test s >= t in the closed relation."""
        if self._closure is None:
            raise ModelError("order must be closed before querying")
        if s == t:
            return True
        return t in self._closure.get(s, frozenset())

    def downset(self, s: World) -> frozenset[World]:
        """Worlds t with s >= t (excluding s unless declared)."""
        if self._closure is None:
            raise ModelError("order must be closed before querying")
        return self._closure.get(s, frozenset())


def close(order: NormalityOrder, model: CausalModel) -> NormalityOrder:
    """Reflexive-transitive closure of declared plus rank-induced pairs.

    Idempotent: closing a closed order returns an equal order.
    """
    for s, t in order.pairs:
        model.signature.check_world(s)
        model.signature.check_world(t)
    rank_map: dict[World, int] = {}
    for w, r in order.ranks:
        model.signature.check_world(w)
        if rank_map.get(w, r) != r:
            raise ModelError(f"world ranked twice with different ranks: {w!r}")
        rank_map[w] = r

    # Successor sets: declared edges plus rank-induced edges
    # (rank(s) <= rank(t) means s is at least as normal as t).
    succ: dict[World, set[World]] = {}
    for s, t in order.pairs:
        succ.setdefault(s, set()).add(t)
    ranked = sorted(rank_map.items(), key=lambda wr: (wr[1], wr[0].items_sorted()))
    for s, rs in ranked:
        for t, rt in ranked:
            if rs <= rt and s != t:
                succ.setdefault(s, set()).add(t)

    closure: dict[World, frozenset[World]] = {}
    for start in succ:
        seen: set[World] = set()
        stack = list(succ[start])
        while stack:
            node = stack.pop()
            if node in seen:
                continue
            seen.add(node)
            stack.extend(succ.get(node, ()))
        seen.add(start)
        closure[start] = frozenset(seen)
    return NormalityOrder(order.pairs, order.ranks, closure)


def _check_pattern(model: CausalModel, pattern: Mapping[str, int]) -> None:
    sig = model.signature
    for name, value in pattern.items():
        if not sig.is_endogenous(name):
            raise ModelError(f"pattern variable {name!r} is not endogenous")
        sig.check_value(name, value)


def expand_pattern_pair(
    model: CausalModel,
    left: Mapping[str, int],
    right: Mapping[str, int],
) -> list[tuple[World, World]]:
    """Expand a partial-pattern pair declaration into world pairs.

    Each side constrains only its mentioned variables.  A variable mentioned
    on neither side must take the same value in both worlds of a generated
    pair; a variable mentioned on one side only is unconstrained on the other.
    """
    _check_pattern(model, left)
    _check_pattern(model, right)
    sig = model.signature
    ranges = dict(sig.endogenous)
    shared = [v for v in sig.endogenous_names if v not in left and v not in right]
    left_free = [v for v in sig.endogenous_names if v in right and v not in left]
    right_free = [v for v in sig.endogenous_names if v in left and v not in right]
    pairs: list[tuple[World, World]] = []
    for shared_combo in itertools.product(*(ranges[v] for v in shared)):
        base = dict(zip(shared, shared_combo))
        for lf_combo in itertools.product(*(ranges[v] for v in left_free)):
            world_l = World({**base, **dict(zip(left_free, lf_combo)), **left})
            for rf_combo in itertools.product(*(ranges[v] for v in right_free)):
                world_r = World({**base, **dict(zip(right_free, rf_combo)), **right})
                pairs.append((world_l, world_r))
    return pairs


def expand_rank_pattern(model: CausalModel, pattern: Mapping[str, int], rank: int) -> list[tuple[World, int]]:
    """All worlds matching a partial pattern, at the given rank."""
    _check_pattern(model, pattern)
    sig = model.signature
    ranges = dict(sig.endogenous)
    free = [v for v in sig.endogenous_names if v not in pattern]
    return [
        (World({**dict(zip(free, combo)), **pattern}), rank)
        for combo in itertools.product(*(ranges[v] for v in free))
    ]


class ExtendedModel:
    """A causal model together with a (possibly flat) normality order."""

    __slots__ = ("model", "order")

    def __init__(self, model: CausalModel, order: NormalityOrder | None = None):
        self.model = model
        if order is None:
            self.order = None  # flat: every world as normal as every other
        else:
            self.order = order if order.is_closed else close(order, model)

    @property
    def is_flat(self) -> bool:
        return self.order is None

    def at_least_as_normal(self, s: World, t: World) -> bool:
        if self.order is None:
            return True
        return self.order.at_least_as_normal(s, t)

    def with_model(self, model: CausalModel) -> ExtendedModel:
        """Same order over a modified model (signature must be unchanged)."""
        if model.signature != self.model.signature:
            raise ModelError("cannot carry a normality order across signatures")
        out = ExtendedModel.__new__(ExtendedModel)
        out.model = model
        out.order = self.order
        return out

    def flattened(self) -> ExtendedModel:
        return ExtendedModel(self.model, None)


def at_least_as_normal(ext: ExtendedModel, s: World, t: World) -> bool:
    """Whether world s is at least as normal as world t."""
    return ext.at_least_as_normal(s, t)
