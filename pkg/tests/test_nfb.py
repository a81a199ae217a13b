import jsonschema
import pytest

from varietal.identities import Identity, Variety, u_word, w_family
from varietal.nfb import (
    REPORT_SCHEMA,
    shape_experiment,
    template_experiment,
    u_shape,
)
from varietal.oracles import necessary_filter
from varietal.rewrite import Bounds
from varietal.words import parse_word

W = parse_word


class TestUShape:
    def test_constructed_members(self):
        assert u_shape(u_word(2, 3, (1, 2)), 2)
        assert u_shape(W("x z1 x t1 z1"), 1)

    def test_gathered_variant_escapes(self):
        assert not u_shape(w_family(2).rhs, 2)

    def test_wrong_tail_order(self):
        assert not u_shape(W("x z1 z2 x t2 z2 t1 z1"), 2)

    def test_requires_positive_n(self):
        with pytest.raises(ValueError):
            u_shape(W("x"), 0)


class TestShapeExperiment:
    def test_control_case_reaches_target(self):
        report = shape_experiment(2, 2, Bounds(1, 14))
        assert report.target_reached and report.target_depth == 1
        assert report.target == w_family(2).rhs
        # the gathered variant itself breaks the shape, so it is a violation
        assert any(w == report.target for w, _ in report.violations)

    def test_strict_case_preserves_shape(self):
        report = shape_experiment(2, 1, Bounds(4, 14))
        assert report.violations == ()
        assert not report.target_reached
        assert report.reachable_count > 1
        assert report.system == "J[trunc=1]"

    def test_every_reachable_word_passes_filter(self):
        report = shape_experiment(2, 1, Bounds(3, 14))
        seed = report.seed
        for w, _ in report.reachable:
            assert necessary_filter(Identity(seed, w))

    def test_precondition(self):
        with pytest.raises(ValueError):
            shape_experiment(2, 0)
        with pytest.raises(ValueError):
            shape_experiment(2, 3)
        with pytest.raises(ValueError):
            shape_experiment(0, 1)

    def test_deterministic(self):
        a = shape_experiment(2, 1, Bounds(3, 12))
        b = shape_experiment(2, 1, Bounds(3, 12))
        assert a == b

    def test_default_bounds(self):
        report = shape_experiment(1, 1)
        assert report.bounds == Bounds(4, len(report.seed) + 6)

    def test_json_schema(self):
        report = shape_experiment(2, 2, Bounds(1, 14))
        data = report.to_json()
        jsonschema.validate(data, REPORT_SCHEMA)
        assert data["target_reached"] is True


class TestTemplateExperiment:
    def test_j_template(self):
        report = template_experiment(Variety.J, W("x z y x t y"), Bounds(3, 12), 2)
        assert report.violations == ()
        assert report.reachable_count > 1

    def test_i_template_reachable_set_shape(self):
        report = template_experiment(Variety.I, W("y x t y"), Bounds(4, 10), 2)
        assert report.violations == ()
        for w, _ in report.reachable:
            # independent re-parse: y x^q1 t y^q2
            assert w[0] == "y"
            i = 1
            while i < len(w) and w[i] == "x":
                i += 1
            assert i > 1 and w[i] == "t"
            assert set(w[i + 1 :]) == {"y"} and len(w) > i + 1

    def test_seed_must_match_template(self):
        with pytest.raises(ValueError):
            template_experiment(Variety.H, W("y x z x t y"))

    def test_only_hij_allowed(self):
        with pytest.raises(ValueError):
            template_experiment(Variety.E, W("x z y x t y"))

    def test_json_schema(self):
        report = template_experiment(Variety.I, W("y x t y"), Bounds(2, 8), 1)
        jsonschema.validate(report.to_json(), REPORT_SCHEMA)
        assert report.to_json()["target"] is None
