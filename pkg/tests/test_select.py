from __future__ import annotations


import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from proactive import eqm, select
from proactive.model import WorldState, atoms_from_strings


def mk_opp(scenario, key, degree, type_index=0, lookahead=0, benefit=0.5, source="EqM"):
    scheme = [s for s in scenario.schemes if s.key == key][0]
    state = scenario.initial
    return eqm.Opportunity(
        scheme=scheme,
        acting_state=state,
        type_index=type_index,
        lookahead=lookahead,
        degree=degree,
        benefit=benefit,
        source=source,
    )


class TestScalingConfig:
    def test_defaults(self):
        cfg = select.ScalingConfig()
        assert cfg.decrease(0.6) == pytest.approx(0.3)
        assert cfg.increase(0.6) == pytest.approx(0.8)

    def test_full_decrease_factor_excluded(self):
        with pytest.raises(ValueError):
            select.ScalingConfig(decrease_factor=1.0)

    def test_zero_increase_factor_excluded(self):
        with pytest.raises(ValueError):
            select.ScalingConfig(increase_factor=0.0)

    @settings(max_examples=50, deadline=None)
    @given(st.floats(min_value=0.0, max_value=1.0))
    def test_strict_movement(self, value):
        cfg = select.ScalingConfig()
        if value > 0:
            assert cfg.decrease(value) < value
        if value < 1:
            assert cfg.increase(value) > value
        assert 0.0 <= cfg.decrease(value) <= 1.0
        assert 0.0 <= cfg.increase(value) <= 1.0


class TestChoose:
    def test_highest_degree_wins(self, scenario, order):
        water = mk_opp(scenario, "gather water-bottle", 0.7, source="HIR")
        clean = mk_opp(scenario, "clean-dishes", 0.4)
        assert select.choose([clean, water], order) is water

    def test_singleton(self, scenario, order):
        only = mk_opp(scenario, "clean-dishes", 0.4)
        assert select.choose([only], order) is only

    def test_empty_is_none(self, order):
        assert select.choose([], order) is None

    def test_name_is_the_final_key(self, scenario, order):
        a = mk_opp(scenario, "clean-dishes", 0.4, benefit=0.5)
        b = mk_opp(scenario, "warn-human", 0.4, benefit=0.5)
        assert select.choose([b, a], order) is a

    def test_type_breaks_degree_ties(self, scenario, order):
        now = mk_opp(scenario, "warn-human", 0.4, type_index=0, benefit=0.1)
        later = mk_opp(scenario, "clean-dishes", 0.4, type_index=3, lookahead=1, benefit=0.9)
        assert select.choose([later, now], order) is now

    def test_benefit_breaks_type_ties(self, scenario, order):
        strong = mk_opp(scenario, "warn-human", 0.4, benefit=0.9)
        weak = mk_opp(scenario, "clean-dishes", 0.4, benefit=0.2)
        assert select.choose([weak, strong], order) is strong

    @settings(max_examples=40, deadline=None)
    @given(st.randoms(use_true_random=False))
    def test_permutation_invariant(self, scenario, order, rnd):
        opps = [
            mk_opp(scenario, "clean-dishes", 0.4, benefit=0.7),
            mk_opp(scenario, "gather water-bottle", 0.7, source="HIR"),
            mk_opp(scenario, "warn-human", 0.4, type_index=5, lookahead=2, benefit=0.8),
            mk_opp(scenario, "tell-ready-to-leave", 0.4, benefit=0.6),
        ]
        baseline = select.choose(list(opps), order)
        shuffled = list(opps)
        rnd.shuffle(shuffled)
        assert select.choose(shuffled, order) is baseline

    def test_custom_order_validated(self):
        with pytest.raises(ValueError):
            select.ChooseOrder(("degree", "type"))


class TestHirOpp:
    def test_water_bottle_opportunity_at_s1_0(self, scenario, states):
        opp = select.hir_opp(
            states("s1.0"),
            scenario.goals,
            scenario.actions,
            scenario.desmap,
            select.ScalingConfig(),
            scenario.substitution_map(),
        )
        assert opp.scheme.key == "gather water-bottle"
        assert opp.source == "HIR"
        assert (opp.type_index, opp.lookahead) == (0, 0)
        # des'(s1.0) = 0.5*0.6 = 0.3; outcome s1.0' raised 0.6 -> 0.8
        assert opp.degree == pytest.approx(0.7)
        assert opp.benefit == pytest.approx(0.8)

    def test_no_intention_yields_none(self, scenario, states):
        opp = select.hir_opp(
            states("s0"),
            scenario.goals,
            scenario.actions,
            scenario.desmap,
            select.ScalingConfig(),
            scenario.substitution_map(),
        )
        assert opp is None

    def test_self_outcome_overwrites_decrease(self, scenario, states):
        # at s3.0 the substituted tell has no world effect, so the outcome
        # IS the current state: the increase overwrites the decrease and
        # the degree collapses to 1 - increase(des)
        opp = select.hir_opp(
            states("s3.0"),
            scenario.goals,
            scenario.actions,
            scenario.desmap,
            select.ScalingConfig(),
            scenario.substitution_map(),
        )
        assert opp.scheme.key == "tell-ready-to-leave"
        assert opp.degree == pytest.approx(0.15)
        assert opp.message == "ready to leave now"

    def test_desmap_is_never_mutated(self, scenario, states):
        before = scenario.desmap.serialize()
        for label in ("s0", "s1.0", "s2.0", "s3.0"):
            select.hir_opp(
                states(label),
                scenario.goals,
                scenario.actions,
                scenario.desmap,
                select.ScalingConfig(),
                scenario.substitution_map(),
            )
        assert scenario.desmap.serialize() == before


class TestCollectAndStep:
    def kwargs(self, scenario):
        return dict(
            horizon=scenario.params.lookahead,
            goals=scenario.goals,
            actions=scenario.actions,
            schemes=scenario.schemes,
            desmap=scenario.desmap,
            scaling=select.ScalingConfig(),
            substitutions=scenario.substitution_map(),
            sys=scenario.system,
        )

    def test_both_sources_present_at_s1_0(self, scenario, states):
        opps = select.collect(states("s1.0"), **self.kwargs(scenario))
        sources = {(o.source, o.scheme.key) for o in opps}
        assert ("HIR", "gather water-bottle") in sources
        assert ("EqM", "clean-dishes") in sources

    def test_substituted_communication_collected(self, scenario, states):
        opps = select.collect(states("s3.0"), **self.kwargs(scenario))
        assert ("HIR", "tell-ready-to-leave") in {(o.source, o.scheme.key) for o in opps}

    def test_empty_without_schemes_or_intention(self, scenario, states):
        kwargs = self.kwargs(scenario)
        kwargs["schemes"] = ()
        opps = select.collect(states("s0"), **kwargs)
        assert opps == []

    def test_winner_at_s1_0_is_the_intention(self, scenario, states, order):
        decision = select.action_selection_step(
            states("s1.0"), order=order, **self.kwargs(scenario)
        )
        assert decision.chosen.source == "HIR"
        assert decision.chosen.scheme.key == "gather water-bottle"
        assert decision.dispatch and not decision.deferred
        runners = [o for o in decision.opportunities if o.source == "EqM"]
        assert any(o.scheme.key == "clean-dishes" and o.degree > 0 for o in runners)

    def test_deferred_opportunity_not_dispatched(self, scenario, states, order):
        decision = select.action_selection_step(
            states("s0"), order=order, **self.kwargs(scenario)
        )
        assert decision.chosen is not None
        assert decision.chosen.scheme.key == "clean-dishes"
        assert decision.deferred and not decision.dispatch
        assert decision.chosen.acting_state.label == "s1.0"

    def test_no_candidates_no_dispatch(self, scenario, states, order):
        kwargs = self.kwargs(scenario)
        kwargs["schemes"] = ()
        kwargs["substitutions"] = {}
        decision = select.action_selection_step(states("s0"), order=order, **kwargs)
        assert decision.chosen is None and not decision.dispatch
