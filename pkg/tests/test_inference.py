"""Sequential ANOVA, pure error / lack of fit, and coefficient tests."""

import numpy as np
import pytest

from rsmkit import (
    FactorSpec,
    FittedModel,
    TermBasis,
    anova,
    ccd,
    coefficient_tests,
    fit,
    full_factorial,
    model_matrix,
    pure_error,
    replicate_groups,
)
from rsmkit.errors import RankDeficient, ZeroDfResidual

pytestmark = pytest.mark.filterwarnings(
    "ignore::rsmkit.design.DesignReplicationWarning"
)


def two_factors():
    return (
        FactorSpec("speed", 100.0, 200.0, "rpm"),
        FactorSpec("temp", 30.0, 50.0, "C"),
    )


class TestReplicateGroups:
    def test_centers_form_one_group_per_block(self):
        design = ccd(two_factors(), n_center=3, n_blocks=2, seed=6)
        groups = replicate_groups(design)
        assert len(groups) == 2
        sizes = sorted(len(g) for g in groups)
        assert sizes == [3, 3]

    def test_blocks_keep_identical_settings_apart(self):
        design = ccd(two_factors(), alpha=None, n_center=2, replicates=2,
                     n_blocks=2, seed=6)
        groups = replicate_groups(design)
        for group in groups:
            blocks = {design.points[i].block for i in group}
            assert len(blocks) == 1

    def test_no_replicates_no_groups(self):
        assert replicate_groups(full_factorial(3)) == []


class TestPureError:
    def test_two_center_replicates_by_hand(self):
        design = ccd(two_factors(), n_center=2, seed=3)
        y = np.zeros(design.n_runs)
        center = [i for i, p in enumerate(design.points)
                  if p.coded == (0.0, 0.0)]
        y[center[0]] = 9.0
        y[center[1]] = 11.0
        ss, df = pure_error(design, y)
        assert ss == pytest.approx(2.0, abs=1e-12)
        assert df == 1

    def test_matches_group_mean_arithmetic(self):
        design = ccd(two_factors(), n_center=4, n_blocks=2, seed=9)
        rng = np.random.default_rng(2)
        y = rng.normal(size=design.n_runs)
        ss, df = pure_error(design, y)
        expected = 0.0
        expected_df = 0
        for group in replicate_groups(design):
            values = y[list(group)]
            expected += float(np.sum((values - values.mean()) ** 2))
            expected_df += len(values) - 1
        assert ss == pytest.approx(expected, rel=1e-12)
        assert df == expected_df


class TestAnova:
    def test_additivity(self):
        design = ccd(two_factors(), n_center=3, n_blocks=2, seed=1)
        basis = TermBasis(k=2, include_twi=True, include_pq=True,
                          include_block=True)
        rng = np.random.default_rng(8)
        y = rng.normal(size=design.n_runs)
        table = anova(design, y, basis)
        parts = sum(table.row(s).ss for s in
                    ("Block", "FirstOrder", "Interaction", "PureQuadratic",
                     "Residual"))
        assert parts == pytest.approx(table.ss_total, rel=1e-12)

    def test_lack_of_fit_plus_pure_error(self):
        design = ccd(two_factors(), n_center=4, seed=1)
        basis = TermBasis(k=2, include_twi=True, include_pq=True)
        rng = np.random.default_rng(4)
        y = rng.normal(size=design.n_runs)
        table = anova(design, y, basis)
        assert (table.row("LackOfFit").ss + table.row("PureError").ss
                == pytest.approx(table.row("Residual").ss, rel=1e-12))
        assert (table.row("LackOfFit").df + table.row("PureError").df
                == table.row("Residual").df)

    def test_constant_responses_zero_everywhere(self):
        design = ccd(two_factors(), n_center=3, seed=1)
        basis = TermBasis(k=2, include_twi=True, include_pq=True)
        table = anova(design, [7.5] * design.n_runs, basis)
        assert table.ss_total == pytest.approx(0.0, abs=1e-20)
        for row in table.rows:
            assert row.ss == pytest.approx(0.0, abs=1e-18)

    def test_block_row_against_group_means_oracle(self):
        design = ccd(two_factors(), n_center=2, n_blocks=2, seed=12)
        basis = TermBasis(k=2, include_twi=True, include_pq=True,
                          include_block=True)
        rng = np.random.default_rng(5)
        y = rng.normal(size=design.n_runs)
        # shift block 2 upward so the row is nontrivial
        labels = design.block_labels()
        y = y + np.where(labels == 2, 5.0, 0.0)
        table = anova(design, y, basis)
        grand = y.mean()
        expected = sum(
            (labels == b).sum() * (y[labels == b].mean() - grand) ** 2
            for b in (1, 2)
        )
        assert table.row("Block").ss == pytest.approx(expected, rel=1e-10)

    def test_pure_block_shift_exact_value(self):
        # +5 on block 2 and nothing else: balanced split gives n * 25/4
        design = ccd(two_factors(), n_center=4, n_blocks=2, seed=2)
        labels = design.block_labels()
        assert (labels == 1).sum() == (labels == 2).sum()
        y = np.where(labels == 2, 5.0, 0.0).astype(float)
        basis = TermBasis(k=2, include_twi=True, include_pq=True,
                          include_block=True)
        table = anova(design, y, basis)
        n = design.n_runs
        assert table.row("Block").ss == pytest.approx(n * 25.0 / 4.0,
                                                      rel=1e-12)
        assert table.row("Residual").ss == pytest.approx(0.0, abs=1e-18)

    def test_f_statistics_consistent(self):
        design = ccd(two_factors(), n_center=3, seed=1)
        basis = TermBasis(k=2, include_twi=True, include_pq=True)
        rng = np.random.default_rng(6)
        m = model_matrix(design, basis)
        y = m @ rng.normal(size=basis.n_terms) + rng.normal(0, 0.3,
                                                            design.n_runs)
        table = anova(design, y, basis)
        residual = table.row("Residual")
        for source in ("FirstOrder", "Interaction", "PureQuadratic"):
            row = table.row(source)
            assert row.f_stat == pytest.approx(row.ms / residual.ms,
                                               rel=1e-12)
            assert 0.0 <= row.p_value <= 1.0
        assert residual.f_stat is None

    def test_row_order_is_canonical(self):
        design = ccd(two_factors(), n_center=3, n_blocks=2, seed=1)
        basis = TermBasis(k=2, include_twi=True, include_pq=True,
                          include_block=True)
        table = anova(design, np.arange(float(design.n_runs)), basis)
        sources = [r.source for r in table.rows]
        assert sources == ["Block", "FirstOrder", "Interaction",
                           "PureQuadratic", "Residual", "LackOfFit",
                           "PureError"]

    def test_groups_absent_without_terms(self):
        design = ccd(two_factors(), n_center=3, seed=1)
        table = anova(design, np.arange(float(design.n_runs)),
                      TermBasis(k=2))
        sources = [r.source for r in table.rows]
        assert "Block" not in sources
        assert "Interaction" not in sources
        assert "PureQuadratic" not in sources

    def test_no_replicates_no_lack_of_fit_rows(self):
        design = full_factorial(3)
        table = anova(design, np.arange(8.0), TermBasis(k=3))
        sources = [r.source for r in table.rows]
        assert "LackOfFit" not in sources
        assert "PureError" not in sources

    def test_rank_deficiency_propagates(self):
        design = full_factorial(2)
        basis = TermBasis(k=2, include_twi=True, include_pq=True)
        with pytest.raises(RankDeficient):
            anova(design, [1.0, 2.0, 3.0, 4.0], basis)


class TestCoefficientTests:
    def test_t_and_p_arithmetic(self):
        design = ccd(two_factors(), n_center=4, seed=10)
        basis = TermBasis(k=2, include_twi=True, include_pq=True)
        rng = np.random.default_rng(3)
        y = rng.normal(size=design.n_runs)
        model = fit(design, y, basis)
        tests = coefficient_tests(model)
        assert [t.term for t in tests] == model.term_names()
        for entry, beta, se in zip(tests, model.coefficients,
                                   model.std_errors):
            assert entry.t_stat == pytest.approx(float(beta) / float(se),
                                                 rel=1e-12)
            assert 0.0 <= entry.p_value <= 1.0

    def test_strong_effect_detected(self):
        # y = 3 x1 + noise: first factor overwhelming, second factor noise
        design = ccd(two_factors(), n_center=5, seed=21)
        basis = TermBasis(k=2, include_twi=True, include_pq=True)
        rng = np.random.default_rng(17)
        x1 = design.coded_matrix()[:, 0]
        y = 3.0 * x1 + rng.normal(0.0, 0.1, design.n_runs)
        tests = {t.term: t for t in coefficient_tests(fit(design, y, basis))}
        assert tests["speed"].p_value < 0.001
        assert tests["temp"].p_value > 0.05

    def test_saturated_model_rejected(self):
        design = full_factorial(2)
        model = fit(design, [1.0, 2.0, 3.0, 5.0], TermBasis(k=2,
                                                            include_twi=True))
        with pytest.raises(ZeroDfResidual):
            coefficient_tests(model)

    def test_perfect_fit_convention(self):
        # zero standard error: p collapses to 0 for nonzero estimates,
        # 1 for zero estimates
        basis = TermBasis(k=2)
        model = FittedModel(
            basis=basis,
            coefficients=np.array([2.0, 0.0, -1.0]),
            std_errors=np.zeros(3),
            residuals=np.zeros(8),
            sigma2=0.0,
            df_residual=5,
            r_squared=1.0,
            design_ref="synthetic",
            term_names_=("Intercept", "a", "b"),
        )
        tests = coefficient_tests(model)
        assert tests[0].p_value == 0.0
        assert tests[1].p_value == 1.0
        assert tests[2].p_value == 0.0
        assert tests[0].t_stat is None
