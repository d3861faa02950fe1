import pytest

from causelab.model import Context, ModelError, World
from causelab.normality import (
    ExtendedModel,
    NormalityOrder,
    at_least_as_normal,
    close,
    expand_pattern_pair,
)
from test_model import forest_fire


def w(**kwargs) -> World:
    return World(kwargs)


class TestClose:
    def test_empty_declarations_give_identity(self):
        model = forest_fire()
        order = close(NormalityOrder(), model)
        a = w(L=1, ML=1, F=1)
        b = w(L=0, ML=0, F=0)
        assert order.at_least_as_normal(a, a)
        assert not order.at_least_as_normal(a, b)
        assert not order.at_least_as_normal(b, a)

    def test_transitive_chain(self):
        model = forest_fire()
        a, b, c = w(L=1, ML=1, F=1), w(L=1, ML=0, F=1), w(L=0, ML=0, F=0)
        order = close(NormalityOrder(pairs=((a, b), (b, c))), model)
        assert order.at_least_as_normal(a, c)
        assert not order.at_least_as_normal(c, a)

    def test_idempotent(self):
        model = forest_fire()
        a, b = w(L=1, ML=1, F=1), w(L=0, ML=0, F=0)
        once = close(NormalityOrder(pairs=((a, b),)), model)
        twice = close(once, model)
        assert once.pairs == twice.pairs and once.ranks == twice.ranks
        for s in model.world_space():
            for t in (a, b):
                assert once.at_least_as_normal(s, t) == twice.at_least_as_normal(s, t)

    def test_invalid_world_rejected(self):
        model = forest_fire()
        bad = World({"L": 1, "ML": 1})  # missing F
        with pytest.raises(ModelError):
            close(NormalityOrder(pairs=((bad, bad),)), model)
        out_of_range = World({"L": 1, "ML": 1, "F": 9})
        with pytest.raises(ModelError):
            close(NormalityOrder(pairs=((out_of_range, out_of_range),)), model)

    def test_antisymmetry_not_enforced(self):
        model = forest_fire()
        a, b = w(L=1, ML=1, F=1), w(L=0, ML=0, F=0)
        order = close(NormalityOrder(pairs=((a, b), (b, a))), model)
        assert order.at_least_as_normal(a, b)
        assert order.at_least_as_normal(b, a)

    def test_rank_consistency(self):
        model = forest_fire()
        a, b, c = w(L=1, ML=1, F=1), w(L=1, ML=0, F=1), w(L=0, ML=0, F=0)
        order = close(NormalityOrder(ranks=((a, 0), (b, 1), (c, 1))), model)
        assert order.at_least_as_normal(a, b)
        assert not order.at_least_as_normal(b, a)
        assert order.at_least_as_normal(b, c) and order.at_least_as_normal(c, b)

    def test_ranks_and_pairs_close_together(self):
        model = forest_fire()
        a, b, c = w(L=1, ML=1, F=1), w(L=1, ML=0, F=1), w(L=0, ML=0, F=0)
        order = close(NormalityOrder(pairs=((a, b),), ranks=((b, 0), (c, 5))), model)
        # a >= b declared, b >= c by rank, so a >= c transitively.
        assert order.at_least_as_normal(a, c)

    def test_unclosed_query_rejected(self):
        a = w(L=1, ML=1, F=1)
        with pytest.raises(ModelError):
            NormalityOrder(pairs=((a, a),)).at_least_as_normal(a, a)


class TestExtendedModel:
    def test_flat_order_compares_everything(self):
        ext = ExtendedModel(forest_fire(), None)
        a, b = w(L=1, ML=1, F=1), w(L=0, ML=0, F=0)
        assert at_least_as_normal(ext, a, b) and at_least_as_normal(ext, b, a)

    def test_reflexive(self):
        model = forest_fire()
        a, b = w(L=1, ML=1, F=1), w(L=0, ML=0, F=0)
        ext = ExtendedModel(model, NormalityOrder(pairs=((a, b),)))
        for s in model.world_space():
            assert at_least_as_normal(ext, s, s)

    def test_assassin_corner_worlds_incomparable(self, corpus):
        model, order = corpus["models"]["assassin"]
        ext = ExtendedModel(model, order)
        actual = w(A=1, B=1, VS=1)
        witness = w(A=0, B=0, VS=0)
        assert not at_least_as_normal(ext, witness, actual)
        assert not at_least_as_normal(ext, actual, witness)

    def test_five_doctors_chain(self, corpus):
        model, order = corpus["models"]["five_doctors"]
        ext = ExtendedModel(model, order)
        zeros = {f"A{i}": 0 for i in range(1, 6)}
        zeros.update({f"T{i}": 0 for i in range(1, 6)})
        nobody = World({**zeros, "S": 1})
        treats = World({**zeros, "A1": 1, "T1": 1, "S": 0})
        untreated = World({**zeros, "A1": 1, "S": 1})
        wrong_doctor = World({**zeros, "A1": 1, "T2": 1, "S": 0})
        assert at_least_as_normal(ext, nobody, treats)
        assert at_least_as_normal(ext, treats, untreated)
        assert at_least_as_normal(ext, untreated, wrong_doctor)
        assert at_least_as_normal(ext, nobody, wrong_doctor)  # transitive
        assert not at_least_as_normal(ext, wrong_doctor, untreated)

    def test_order_survives_intervention_carry(self):
        model = forest_fire()
        a, b = w(L=1, ML=1, F=1), w(L=0, ML=0, F=0)
        ext = ExtendedModel(model, NormalityOrder(pairs=((a, b),)))
        carried = ext.with_model(model.intervene({"ML": 0}))
        assert carried.at_least_as_normal(a, b)


class TestPatternExpansion:
    def test_symmetric_patterns_agree_on_omitted(self):
        model = forest_fire()
        pairs = expand_pattern_pair(model, {"L": 1, "ML": 0}, {"L": 1, "ML": 1})
        assert len(pairs) == 2  # F agrees across each pair
        for left, right in pairs:
            assert left["F"] == right["F"]
            assert (left["L"], left["ML"], right["L"], right["ML"]) == (1, 0, 1, 1)

    def test_full_patterns_expand_to_single_pair(self):
        model = forest_fire()
        pairs = expand_pattern_pair(
            model, {"L": 1, "ML": 1, "F": 1}, {"L": 0, "ML": 0, "F": 0}
        )
        assert pairs == [(w(L=1, ML=1, F=1), w(L=0, ML=0, F=0))]

    def test_one_sided_variable_is_free_on_the_other(self):
        model = forest_fire()
        pairs = expand_pattern_pair(model, {"L": 1, "ML": 1, "F": 1}, {"F": 0})
        assert len(pairs) == 4  # right side free over L, ML
        assert {((r["L"], r["ML"])) for _, r in pairs} == {(0, 0), (0, 1), (1, 0), (1, 1)}

    def test_bad_pattern_rejected(self):
        model = forest_fire()
        with pytest.raises(ModelError):
            expand_pattern_pair(model, {"NOPE": 1}, {"F": 0})
        with pytest.raises(ModelError):
            expand_pattern_pair(model, {"F": 7}, {"F": 0})
