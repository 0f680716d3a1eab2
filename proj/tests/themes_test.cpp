#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "storyeval/themes.hpp"
#include "support.hpp"

using namespace storyeval;
using namespace storyeval::test;

namespace {

/// Labels renumbered by first appearance so partitions compare directly.
std::vector<int> canonical(const std::vector<int>& labels) {
    std::map<int, int> relabel;
    std::vector<int> out;
    for (int l : labels) out.push_back(relabel.emplace(l, static_cast<int>(relabel.size())).first->second);
    return out;
}

std::vector<std::string> ids_for(std::size_t n) {
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back("s" + std::to_string(i));
    return ids;
}

std::vector<double> normalized(std::vector<double> v) {
    double n = 0;
    for (double x : v) n += x * x;
    n = std::sqrt(n);
    for (auto& x : v) x /= n;
    return v;
}

/// Points scattered around a few random centres.
std::vector<std::vector<double>> clustered_points(std::mt19937_64& rng, std::size_t n, std::size_t dim) {
    std::uniform_int_distribution<std::size_t> centres(1, 4);
    std::normal_distribution<double> jitter(0.0, 0.15);
    std::vector<std::vector<double>> c;
    const auto k = centres(rng);
    for (std::size_t i = 0; i < k; ++i) c.push_back(random_vector(rng, dim));
    std::uniform_int_distribution<std::size_t> pick(0, k - 1);
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; i < n; ++i) {
        auto p = c[pick(rng)];
        for (auto& x : p) x += jitter(rng);
        out.push_back(p);
    }
    return out;
}

ThemeClustering cluster(const std::vector<std::vector<double>>& points, double threshold, bool normalize = true) {
    std::vector<EmbeddingVector> vs;
    for (const auto& p : points) vs.push_back(vec(p));
    const auto ids = ids_for(points.size());
    return cluster_themes(ids, vs, ThemeOptions{threshold, normalize});
}

}  // namespace

TEST(ThemesExamples, IdenticalEmbeddingsFormOneCluster) {
    const auto c = cluster(std::vector<std::vector<double>>(5, {0.3, 0.4, 0.5}), 0.6);
    EXPECT_EQ(c.num_clusters, 1);
}

TEST(ThemesExamples, TwoFarGroupsFormTwoClusters) {
    const auto c = cluster({{1, 0.01, 0}, {1, -0.01, 0}, {1, 0, 0.01}, {0, 1, 0.01}, {0.01, 1, 0}}, 0.6);
    EXPECT_EQ(c.num_clusters, 2);
    EXPECT_EQ(canonical(c.assignment), (std::vector<int>{0, 0, 0, 1, 1}));
}

TEST(ThemesExamples, TwelveStoriesMatchNaiveWard) {
    StubEmbedder e(16, 4);
    std::vector<std::string> texts;
    for (int i = 0; i < 12; ++i) texts.push_back("theme story " + std::to_string(i));
    const auto vs = e.embedder.embed(texts);
    std::vector<std::vector<double>> points;
    for (const auto& v : vs) points.push_back(normalized(v.values));
    // stub vectors are near-orthogonal, pairwise Euclidean about sqrt(2), so cut in that range
    for (double threshold : {0.5, 1.3, 1.45, 1.6, 2.0, 3.0}) {
        const auto ids = ids_for(12);
        const auto c = cluster_themes(ids, vs, ThemeOptions{threshold, true});
        EXPECT_EQ(canonical(c.assignment), oracle::naive_ward(points, threshold)) << threshold;
    }
}

TEST(ThemesExamples, SingleStoryIsOneCluster) {
    const auto c = cluster({{1, 2, 3}}, 0.6);
    EXPECT_EQ(c.num_clusters, 1);
    EXPECT_EQ(c.assignment, (std::vector<int>{0}));
    EXPECT_TRUE(c.linkage.empty());
}

TEST(ThemesExamples, CountsPerGroup) {
    const auto sets = default_item_sets();
    std::vector<Story> stories{
        {"h1", AuthorKind::human, "", "stamp", "alpha", 4}, {"h2", AuthorKind::human, "", "stamp", "beta", 4},
        {"h3", AuthorKind::human, "", "stamp", "gamma", 4}, {"a1", AuthorKind::ai, "", "stamp", "delta", 4},
        {"a2", AuthorKind::ai, "", "organ", "epsilon", 4},
    };
    TableBackend backend({{"alpha", {1, 0, 0}},
                          {"beta", {1, 0.02, 0}},
                          {"gamma", {0, 0, 1}},
                          {"delta", {0, 1, 0}},
                          {"epsilon", {0, 1, 0}}});
    Embedder e(backend, std::make_shared<EmbeddingCache>());
    const auto report = theme_counts(Corpus(sets, stories), e);
    EXPECT_EQ(report.count("stamp", "human")->num_clusters, 2);
    EXPECT_EQ(report.count("stamp", "ai")->num_clusters, 1);
    EXPECT_EQ(report.count("organ", "ai")->num_clusters, 1);
    // empty groups count zero and are reported
    EXPECT_EQ(report.count("organ", "human")->num_clusters, 0);
    EXPECT_EQ(report.count("gloom", "ai")->num_clusters, 0);
    EXPECT_FALSE(report.warnings.empty());
    EXPECT_EQ(report.assignment_records().size(), 5u);
    EXPECT_NE(report.counts_csv().find("stamp,human,3,2"), std::string::npos);

    const auto joint = theme_counts(Corpus(sets, stories), e, {}, true);
    EXPECT_EQ(joint.count("stamp", "all")->num_clusters, 3);
}

TEST(ThemesUnit, LinkageHeightsAreMonotone) {
    std::mt19937_64 rng(kSeed + 10);
    const auto points = clustered_points(rng, 20, 6);
    Eigen::MatrixXd m(20, 6);
    for (int i = 0; i < 20; ++i) {
        for (int j = 0; j < 6; ++j) m(i, j) = points[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    const auto linkage = ward_linkage(m);
    ASSERT_EQ(linkage.size(), 19u);
    for (std::size_t i = 1; i < linkage.size(); ++i) EXPECT_GE(linkage[i].height, linkage[i - 1].height);
    EXPECT_EQ(linkage.back().size, 20);
}

TEST(ThemesUnit, MixedDimensionsRejected) {
    std::vector<EmbeddingVector> vs{vec({1, 0}), vec({1, 0, 0})};
    const auto ids = ids_for(2);
    EXPECT_THROW(cluster_themes(ids, vs), ValidationError);
}

TEST(ThemesUnit, ClustersListMembers) {
    const auto c = cluster({{1, 0}, {0, 1}, {1, 0.001}}, 0.6);
    const auto groups = c.clusters();
    ASSERT_EQ(groups.size(), 2u);
    EXPECT_EQ(groups[c.assignment[0]], (std::vector<std::string>{"s0", "s2"}));
}

TEST(ThemesProperties, ClusterCountNonIncreasingInThreshold) {
    std::mt19937_64 rng(kSeed + 1);
    std::uniform_int_distribution<std::size_t> count(1, 25);
    for (int i = 0; i < kInstances; ++i) {
        const auto points = clustered_points(rng, count(rng), 5);
        int previous = std::numeric_limits<int>::max();
        for (double t = 0.0; t <= 3.0; t += 0.25) {
            const int k = cluster(points, t, false).num_clusters;
            ASSERT_LE(k, previous);
            previous = k;
        }
    }
    record_instances(kInstances);
}

TEST(ThemesProperties, ThresholdExtremes) {
    std::mt19937_64 rng(kSeed + 2);
    std::uniform_int_distribution<std::size_t> count(1, 25);
    for (int i = 0; i < kInstances; ++i) {
        const auto n = count(rng);
        const auto points = clustered_points(rng, n, 5);
        ASSERT_EQ(static_cast<std::size_t>(cluster(points, 0.0).num_clusters), n);
        ASSERT_EQ(cluster(points, std::numeric_limits<double>::infinity()).num_clusters, 1);
    }
    record_instances(kInstances);
}

TEST(ThemesProperties, PartitionIgnoresInputOrder) {
    std::mt19937_64 rng(kSeed + 3);
    std::uniform_int_distribution<std::size_t> count(2, 25);
    std::uniform_real_distribution<double> threshold(0.2, 2.0);
    for (int i = 0; i < kInstances; ++i) {
        const auto n = count(rng);
        const auto points = clustered_points(rng, n, 5);
        const double t = threshold(rng);
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        std::vector<std::vector<double>> shuffled;
        for (auto o : order) shuffled.push_back(points[o]);
        const auto a = cluster(points, t).assignment;
        const auto b = cluster(shuffled, t).assignment;
        // same-cluster relation must agree for every pair
        for (std::size_t x = 0; x < n; ++x) {
            for (std::size_t y = x + 1; y < n; ++y) {
                ASSERT_EQ(a[order[x]] == a[order[y]], b[x] == b[y]);
            }
        }
    }
    record_instances(kInstances);
}

TEST(ThemesProperties, EveryStoryAssignedOnce) {
    std::mt19937_64 rng(kSeed + 4);
    std::uniform_int_distribution<std::size_t> count(1, 25);
    std::uniform_real_distribution<double> threshold(0.0, 2.5);
    for (int i = 0; i < kInstances; ++i) {
        const auto n = count(rng);
        const auto c = cluster(clustered_points(rng, n, 4), threshold(rng));
        ASSERT_EQ(c.assignment.size(), n);
        const std::set<int> distinct(c.assignment.begin(), c.assignment.end());
        ASSERT_EQ(static_cast<int>(distinct.size()), c.num_clusters);
        std::size_t members = 0;
        for (const auto& g : c.clusters()) members += g.size();
        ASSERT_EQ(members, n);
    }
    record_instances(kInstances);
}

TEST(ThemesProperties, MatchesNaiveWardOnRandomSets) {
    std::mt19937_64 rng(kSeed + 5);
    std::uniform_int_distribution<std::size_t> count(1, 14);
    std::uniform_real_distribution<double> threshold(0.1, 2.5);
    for (int i = 0; i < kInstances; ++i) {
        const auto points = clustered_points(rng, count(rng), 4);
        const double t = threshold(rng);
        ASSERT_EQ(canonical(cluster(points, t, false).assignment), oracle::naive_ward(points, t));
    }
    record_instances(kInstances);
}
