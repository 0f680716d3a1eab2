#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "storyeval/analysis.hpp"
#include "storyeval/stats.hpp"
#include "support.hpp"

using namespace storyeval;
using namespace storyeval::test;

namespace {

std::vector<double> normal_sample(std::mt19937_64& rng, std::size_t n, double mean, double sd) {
    std::normal_distribution<double> d(mean, sd);
    std::vector<double> out(n);
    for (auto& x : out) x = d(rng);
    return out;
}

std::vector<std::optional<double>> optional_column(const std::vector<double>& xs) {
    return {xs.begin(), xs.end()};
}

std::vector<std::string> predictor_names() { return {kRegressionPredictors.begin(), kRegressionPredictors.end()}; }

/// Six random predictor columns and an outcome built from them.
struct Design {
    std::vector<std::vector<double>> x;
    std::vector<double> y;
};

Design random_design(std::mt19937_64& rng, std::size_t n, double noise) {
    Design d;
    for (int j = 0; j < 6; ++j) d.x.push_back(normal_sample(rng, n, 0.0, 1.0));
    std::normal_distribution<double> e(0.0, noise);
    std::uniform_real_distribution<double> w(-1.0, 1.0);
    std::vector<double> weights(6);
    for (auto& v : weights) v = w(rng);
    for (std::size_t i = 0; i < n; ++i) {
        double v = e(rng);
        for (int j = 0; j < 6; ++j) v += weights[static_cast<std::size_t>(j)] * d.x[static_cast<std::size_t>(j)][i];
        d.y.push_back(v);
    }
    return d;
}

RegressionResult fit(const Design& d) {
    std::vector<std::vector<std::optional<double>>> cols;
    for (const auto& c : d.x) cols.push_back(optional_column(c));
    const auto names = predictor_names();
    const auto y = optional_column(d.y);
    return ols_standardized(names, cols, y);
}

StoryMetrics story_metrics(std::string id, AuthorKind kind, std::string item, double value) {
    StoryMetrics s;
    s.story_id = std::move(id);
    s.author_kind = kind;
    s.item_set = std::move(item);
    s.values["novelty"] = value;
    return s;
}

}  // namespace

TEST(AnalysisExamples, IdenticalGroupsGiveZeroT) {
    const std::vector<double> a{1.0, 2.0, 3.0, 4.0};
    const auto c = welch_t_test(a, a);
    EXPECT_EQ(c.t, 0.0);
    EXPECT_NEAR(c.p, 1.0, 1e-12);
    EXPECT_EQ(c.stars, "");
}

TEST(AnalysisExamples, WelchMatchesTextbookFormula) {
    std::mt19937_64 rng(kSeed);
    const auto a = normal_sample(rng, 200, 0.0, 1.0);
    const auto b = normal_sample(rng, 200, 1.0, 1.0);
    const auto c = welch_t_test(a, b);
    const auto expected = oracle::welch(a, b);
    EXPECT_NEAR(c.t, expected.t, 1e-10);
    EXPECT_NEAR(c.df, expected.df, 1e-8);
    EXPECT_NEAR(c.p, expected.p, 1e-12);
    EXPECT_LT(c.t, 0.0);
    EXPECT_EQ(c.stars, "***");
}

TEST(AnalysisExamples, DegenerateGroupIsAnError) {
    const std::vector<double> one{1.0}, two{1.0, 2.0};
    EXPECT_THROW(welch_t_test(one, two), DomainError);
    const std::vector<double> c1{2.0, 2.0}, c2{3.0, 3.0};
    EXPECT_THROW(welch_t_test(c1, c2), DomainError);
}

TEST(AnalysisExamples, SingleCategoryStratumIsAnError) {
    const auto sets = default_item_sets();
    std::vector<StoryMetrics> stories;
    for (int i = 0; i < 4; ++i) stories.push_back(story_metrics("s" + std::to_string(i), AuthorKind::human, "stamp", i));
    const std::vector<std::string> metrics{"novelty"};
    EXPECT_THROW(stratify_by_semdis(stories, sets, metrics), DomainError);
}

TEST(AnalysisExamples, LowCategoryLargerGivesPositiveDifference) {
    std::mt19937_64 rng(kSeed + 5);
    const auto sets = default_item_sets();
    std::vector<StoryMetrics> stories;
    std::uniform_real_distribution<double> jitter(0.0, 0.1);
    int id = 0;
    for (auto kind : {AuthorKind::human, AuthorKind::ai}) {
        for (const char* item : {"stamp", "petrol", "organ", "gloom"}) {
            const bool low = std::string(item) == "stamp" || std::string(item) == "petrol";
            for (int i = 0; i < 10; ++i) {
                stories.push_back(story_metrics("s" + std::to_string(id++), kind, item, (low ? 1.0 : 0.0) + jitter(rng)));
            }
        }
    }
    const std::vector<std::string> metrics{"novelty"};
    const auto out = stratify_by_semdis(stories, sets, metrics);
    ASSERT_EQ(out.size(), 2u);
    for (const auto& s : out) {
        EXPECT_GT(s.comparison.difference(), 0.0);
        EXPECT_LT(s.comparison.p, 0.001);
        EXPECT_EQ(s.comparison.n_a, 20u);
    }
}

TEST(AnalysisExamples, CorrelationOfVariableWithItself) {
    const std::vector<std::string> names{"x", "y", "c"};
    const std::vector<std::vector<double>> cols{{1, 2, 3, 5}, {-1, -2, -3, -5}, {2, 2, 2, 2}};
    const auto m = correlation_matrix(names, cols);
    EXPECT_DOUBLE_EQ(*m.r[0][0], 1.0);
    EXPECT_NEAR(*m.r[0][1], -1.0, 1e-12);
    EXPECT_NEAR(*m.r[1][0], -1.0, 1e-12);
    EXPECT_FALSE(m.r[0][2].has_value());
    EXPECT_FALSE(m.r[2][2].has_value());
}

TEST(AnalysisExamples, TooFewObservationsForCorrelation) {
    const std::vector<std::string> names{"x", "y"};
    const std::vector<std::vector<double>> cols{{1, 2}, {2, 1}};
    EXPECT_THROW(correlation_matrix(names, cols), DomainError);
}

TEST(AnalysisExamples, CandidateEqualToRatingsWins) {
    const std::vector<double> ratings{1, 3, 2, 5, 4};
    const std::vector<Candidate> candidates{{"noise", {2, 1, 2, 1, 2}}, {"same", {1, 3, 2, 5, 4}}};
    EXPECT_EQ(select_representative_metric(candidates, ratings), "same");
}

TEST(AnalysisExamples, EngineeredCorrelationsPickStrongest) {
    std::mt19937_64 rng(kSeed + 6);
    const std::size_t n = 2000;
    const auto ratings = normal_sample(rng, n, 0.0, 1.0);
    std::vector<Candidate> candidates;
    for (double r : {0.2, 0.5, 0.9}) {
        const auto e = normal_sample(rng, n, 0.0, 1.0);
        Candidate c{"r" + std::to_string(r), {}};
        for (std::size_t i = 0; i < n; ++i) c.values.push_back(r * ratings[i] + std::sqrt(1 - r * r) * e[i]);
        candidates.push_back(c);
    }
    EXPECT_EQ(select_representative_metric(candidates, ratings), candidates[2].name);
    // ties go to the first declared candidate
    const std::vector<Candidate> tied{{"first", {1, 2, 3}}, {"second", {2, 4, 6}}};
    const std::vector<double> r3{1, 2, 3};
    EXPECT_EQ(select_representative_metric(tied, r3), "first");
}

TEST(AnalysisExamples, ExactFitRecoversUnitBeta) {
    std::mt19937_64 rng(kSeed + 7);
    auto d = random_design(rng, 60, 0.0);
    d.y = oracle::zscore(d.x[0]);
    const auto r = fit(d);
    EXPECT_NEAR(r.coefficients[0].beta, 1.0, 1e-6);
    for (std::size_t j = 1; j < 6; ++j) EXPECT_NEAR(r.coefficients[j].beta, 0.0, 1e-6);
    EXPECT_NEAR(r.r_squared, 1.0, 1e-9);
}

TEST(AnalysisExamples, NoisyFitMatchesNormalEquations) {
    std::mt19937_64 rng(kSeed + 8);
    Design d;
    const std::size_t n = 500;
    for (int j = 0; j < 6; ++j) d.x.push_back(normal_sample(rng, n, 0.0, 1.0));
    const auto e = normal_sample(rng, n, 0.0, 0.1);
    for (std::size_t i = 0; i < n; ++i) d.y.push_back(0.5 * d.x[0][i] + 0.3 * d.x[1][i] + e[i]);
    const auto r = fit(d);
    const auto expected = oracle::standardized_ols(d.x, d.y);
    for (std::size_t j = 0; j < 6; ++j) {
        EXPECT_NEAR(r.coefficients[j].beta, expected[j], 0.05);
        EXPECT_NEAR(r.coefficients[j].beta, expected[j], 1e-9);
    }
    EXPECT_EQ(r.coefficients[0].stars, "***");
}

TEST(AnalysisExamples, CollinearPredictorsAreNamed) {
    std::mt19937_64 rng(kSeed + 9);
    auto d = random_design(rng, 50, 0.5);
    for (std::size_t i = 0; i < 50; ++i) d.x[5][i] = 2.0 * d.x[4][i] - d.x[3][i];
    try {
        fit(d);
        FAIL() << "expected rank-deficiency error";
    } catch (const DomainError& e) {
        const std::string what = e.what();
        EXPECT_NE(what.find("rank deficient"), std::string::npos);
        const bool named = what.find("surprise") != std::string::npos ||
                           what.find("syntactic_complexity") != std::string::npos ||
                           what.find("lexical_complexity") != std::string::npos;
        EXPECT_TRUE(named) << what;
    }
}

TEST(AnalysisUnit, ListwiseDeletionCountsDroppedRows) {
    std::mt19937_64 rng(kSeed + 10);
    const auto d = random_design(rng, 40, 0.5);
    std::vector<std::vector<std::optional<double>>> cols;
    for (const auto& c : d.x) cols.push_back(optional_column(c));
    cols[2][3] = std::nullopt;
    cols[4][7] = std::nullopt;
    auto y = optional_column(d.y);
    y[7] = std::nullopt;
    y[9] = std::nullopt;
    const auto names = predictor_names();
    const auto r = ols_standardized(names, cols, y);
    EXPECT_EQ(r.n, 37u);
    EXPECT_EQ(r.dropped, 3u);
    EXPECT_DOUBLE_EQ(r.df, 37.0 - 7.0);
}

TEST(AnalysisUnit, RegressCreativityUsesMappedMetrics) {
    std::mt19937_64 rng(kSeed + 11);
    const std::size_t n = 80;
    const auto d = random_design(rng, n, 0.3);
    const std::vector<std::string> keys{"inverse_homogenization", "mean_ngram_diversity", "novelty", "surprise",
                                        "avg_constituency_tree_depth", "unique_word_count"};
    std::vector<StoryMetrics> stories;
    std::vector<CompositeRating> comps;
    for (std::size_t i = 0; i < n; ++i) {
        StoryMetrics s;
        s.story_id = "s" + std::to_string(i);
        for (std::size_t j = 0; j < 6; ++j) s.values[keys[j]] = d.x[j][i];
        stories.push_back(s);
        CompositeRating c;
        c.story_id = s.story_id;
        c.judge_type = JudgeType::expert;
        c.values = {d.y[i], 0, 0, 0};
        comps.push_back(c);
    }
    const auto r = regress_creativity(stories, comps, JudgeType::expert);
    const auto expected = oracle::standardized_ols(d.x, d.y);
    for (std::size_t j = 0; j < 6; ++j) EXPECT_NEAR(r.at(kRegressionPredictors[j]).beta, expected[j], 1e-9);
    EXPECT_EQ(r.n, n);
    EXPECT_THROW(regress_creativity(stories, comps, JudgeType::llm), DomainError);
}

TEST(AnalysisUnit, RegressionTableHasEveryPredictor) {
    std::mt19937_64 rng(kSeed + 12);
    const std::vector<RegressionResult> results{fit(random_design(rng, 50, 0.5))};
    const std::vector<std::string> labels{"expert"};
    const auto table = regression_table(results, labels);
    for (const char* p : kRegressionPredictors) EXPECT_NE(table.find(p), std::string::npos);
}

TEST(AnalysisProperties, WelchSwapFlipsSignKeepsP) {
    std::mt19937_64 rng(kSeed + 1);
    std::uniform_int_distribution<std::size_t> size(2, 60);
    std::uniform_real_distribution<double> shift(-2, 2), spread(0.1, 3);
    for (int i = 0; i < kInstances; ++i) {
        const auto a = normal_sample(rng, size(rng), shift(rng), spread(rng));
        const auto b = normal_sample(rng, size(rng), shift(rng), spread(rng));
        const auto ab = welch_t_test(a, b), ba = welch_t_test(b, a);
        ASSERT_NEAR(ab.t, -ba.t, 1e-12);
        ASSERT_NEAR(ab.p, ba.p, 1e-14);
        ASSERT_NEAR(ab.df, ba.df, 1e-9);
        const auto expected = oracle::welch(a, b);
        ASSERT_NEAR(ab.p, expected.p, 1e-9);
    }
    record_instances(kInstances);
}

TEST(AnalysisProperties, RegressionIgnoresAffineRescaling) {
    std::mt19937_64 rng(kSeed + 2);
    std::uniform_real_distribution<double> shift(-100, 100), scale(0.01, 100);
    std::uniform_int_distribution<std::size_t> size(20, 120), column(0, 5);
    for (int i = 0; i < kInstances; ++i) {
        auto d = random_design(rng, size(rng), 0.7);
        const auto before = fit(d);
        const auto j = column(rng);
        const double a = shift(rng), k = scale(rng);
        for (auto& x : d.x[j]) x = k * x + a;
        const auto after = fit(d);
        for (std::size_t c = 0; c < 6; ++c) {
            ASSERT_NEAR(after.coefficients[c].beta, before.coefficients[c].beta, 1e-8);
            ASSERT_NEAR(after.coefficients[c].t, before.coefficients[c].t, 1e-6);
            ASSERT_NEAR(after.coefficients[c].p, before.coefficients[c].p, 1e-8);
            ASSERT_NEAR(after.coefficients[c].t, after.coefficients[c].beta / after.coefficients[c].se, 1e-9);
        }
    }
    record_instances(kInstances);
}

TEST(AnalysisProperties, StarsFollowThresholds) {
    std::mt19937_64 rng(kSeed + 3);
    std::uniform_real_distribution<double> logp(-6.0, 0.0);
    for (int i = 0; i < kInstances; ++i) {
        const double p = std::pow(10.0, logp(rng));
        const std::string expected = p < 0.001 ? "***" : p < 0.01 ? "**" : p < 0.05 ? "*" : "";
        ASSERT_EQ(significance_stars(p), expected);
        ASSERT_EQ(significance_stars(p), significance_stars(p));
    }
    EXPECT_EQ(significance_stars(0.001), "**");
    EXPECT_EQ(significance_stars(0.01), "*");
    EXPECT_EQ(significance_stars(0.05), "");
    record_instances(kInstances);
}

TEST(AnalysisProperties, SelectionIgnoresPositiveAffineMaps) {
    std::mt19937_64 rng(kSeed + 4);
    std::uniform_real_distribution<double> shift(-50, 50), scale(0.01, 50);
    std::uniform_int_distribution<std::size_t> count(2, 6);
    for (int i = 0; i < kInstances; ++i) {
        const std::size_t n = 30;
        const auto ratings = normal_sample(rng, n, 3.0, 1.0);
        std::vector<Candidate> candidates;
        const auto k = count(rng);
        for (std::size_t c = 0; c < k; ++c) {
            const auto v = normal_sample(rng, n, 0.0, 1.0);
            candidates.push_back({"c" + std::to_string(c), optional_column(v)});
        }
        const auto before = select_representative_metric(candidates, ratings);
        for (auto& c : candidates) {
            const double a = shift(rng), s = scale(rng);
            for (auto& v : c.values) v = s * *v + a;
        }
        ASSERT_EQ(select_representative_metric(candidates, ratings), before);
    }
    record_instances(kInstances);
}

TEST(AnalysisProperties, TwoSidedPMatchesIncompleteBeta) {
    std::mt19937_64 rng(kSeed + 5);
    std::uniform_real_distribution<double> t(-8, 8), df(1, 400);
    for (int i = 0; i < kInstances; ++i) {
        const double tv = t(rng), dv = df(rng);
        ASSERT_NEAR(stats::two_sided_p(tv, dv), oracle::t_two_sided(tv, dv), 1e-10);
    }
    record_instances(kInstances);
}
