import random
from fractions import Fraction
from itertools import product

import pytest

from colprob import (
    EvalError,
    ExperimentDecl,
    Model,
    ancestral_closure,
    joint_point_prob,
    validate_model,
)
from _corpus import random_model


def fair(name, *outcomes):
    return ExperimentDecl.uniform(name, outcomes)


def test_fair_coin_validates():
    model = Model.of(fair("c", "H", "T"))
    assert validate_model(model) == []


def test_cpt_row_not_summing_to_one_is_reported():
    w = Fraction(1, 6)
    decl = ExperimentDecl.weighted("d", {str(i): w for i in range(1, 6)})
    issues = validate_model(Model.of(decl))
    assert any("sums to 5/6" in issue for issue in issues)


def test_two_node_cycle_is_reported():
    r = ExperimentDecl("R", ("0", "1"), parents=("T",), cpt={})
    t = ExperimentDecl("T", ("0", "1"), parents=("R",), cpt={})
    issues = validate_model(Model.of(r, t))
    assert any("cycle: R→T→R" in issue or "cycle: T→R→T" in issue
               for issue in issues)


def test_unknown_parent_is_reported():
    r = ExperimentDecl("R", ("0", "1"), parents=("nope",), cpt={})
    issues = validate_model(Model.of(r))
    assert any("unknown parent 'nope'" in issue for issue in issues)


def test_missing_cpt_row_is_reported():
    t = fair("T", "0", "1")
    r = ExperimentDecl(
        "R", ("0", "1"), parents=("T",),
        cpt={("0",): {"0": Fraction(1, 2), "1": Fraction(1, 2)}},
    )
    issues = validate_model(Model.of(t, r))
    assert any("missing cpt row" in issue and "T=1" in issue for issue in issues)


def test_negative_weight_is_reported():
    decl = ExperimentDecl.weighted("x", {"a": Fraction(3, 2), "b": Fraction(-1, 2)})
    issues = validate_model(Model.of(decl))
    assert any("outside [0, 1]" in issue for issue in issues)


@pytest.fixture()
def channel():
    t = ExperimentDecl.weighted("T", {"0": Fraction(1, 2), "1": Fraction(1, 2)})
    r = ExperimentDecl(
        "R", ("0", "1"), parents=("T",),
        cpt={
            ("0",): {"0": Fraction(9, 10), "1": Fraction(1, 10)},
            ("1",): {"0": Fraction(1, 10), "1": Fraction(9, 10)},
        },
    )
    return Model.of(t, r)


class TestAncestralClosure:
    def test_one_parent_edge(self, channel):
        assert ancestral_closure(channel, {"R"}) == {"R", "T"}

    def test_parentless_identity(self):
        model = Model.of(fair("c", "H", "T"))
        assert ancestral_closure(model, {"c"}) == {"c"}

    def test_transitive(self):
        c = fair("C", "0", "1")
        b = ExperimentDecl(
            "B", ("0", "1"), parents=("C",),
            cpt={(o,): {"0": Fraction(1, 2), "1": Fraction(1, 2)} for o in "01"},
        )
        a = ExperimentDecl(
            "A", ("0", "1"), parents=("B",),
            cpt={(o,): {"0": Fraction(1, 2), "1": Fraction(1, 2)} for o in "01"},
        )
        model = Model.of(a, b, c)
        assert ancestral_closure(model, {"A"}) == {"A", "B", "C"}

    def test_unknown_experiment(self, channel):
        with pytest.raises(EvalError, match="unknown experiment"):
            ancestral_closure(channel, {"bogus"})


class TestJointPointProb:
    def test_two_fair_coins(self):
        model = Model.of(fair("c1", "H", "T"), fair("c2", "H", "T"))
        assert joint_point_prob(model, {"c1": "H", "c2": "H"}) == Fraction(1, 4)

    def test_coin_and_dice(self):
        model = Model.of(fair("c", "H", "T"), fair("d", *"123456"))
        assert joint_point_prob(model, {"c": "H", "d": "6"}) == Fraction(1, 12)

    def test_dependent_pair(self, channel):
        # hand product of the two declared factors: 1/2 * 9/10
        assert joint_point_prob(channel, {"T": "0", "R": "0"}) == Fraction(9, 20)

    def test_domain_must_be_ancestrally_closed(self, channel):
        with pytest.raises(EvalError, match="not ancestrally closed"):
            joint_point_prob(channel, {"R": "0"})

    def test_invalid_outcome(self, channel):
        with pytest.raises(EvalError, match="unknown outcome"):
            joint_point_prob(channel, {"T": "5", "R": "0"})

    def test_insensitive_to_mapping_order(self, channel):
        a = joint_point_prob(channel, {"T": "0", "R": "1"})
        b = joint_point_prob(channel, {"R": "1", "T": "0"})
        assert a == b == Fraction(1, 20)


def test_joint_sums_to_one_over_random_models():
    rng = random.Random(20260808)
    for _ in range(50):
        model = random_model(rng)
        names = sorted(ancestral_closure(model, model.experiments))
        total = Fraction(0)
        for combo in product(*(model.outcomes(n) for n in names)):
            total += joint_point_prob(model, dict(zip(names, combo)))
        assert total == 1


def test_rational_arithmetic_round_trips_exactly():
    rng = random.Random(99)
    for _ in range(500):
        a = Fraction(rng.randint(-10**12, 10**12), rng.randint(1, 10**12))
        b = Fraction(rng.randint(-10**12, 10**12), rng.randint(1, 10**12))
        assert (a + b) - b == a
        if b != 0:
            assert (a / b) * b == a
        assert (a * b) - a * b == 0
