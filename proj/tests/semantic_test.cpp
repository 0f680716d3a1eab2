#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "storyeval/semantic.hpp"
#include "storyeval/store.hpp"
#include "support.hpp"

using namespace storyeval;
using namespace storyeval::test;

TEST(SemanticExamples, SameTextTwiceGivesIdenticalVectors) {
    StubEmbedder e;
    const std::vector<std::string> texts{"a", "a"};
    const auto v = e.embedder.embed(texts);
    ASSERT_EQ(v.size(), 2u);
    EXPECT_EQ(v[0].values, v[1].values);
}

TEST(SemanticExamples, CachedTextSkipsBackend) {
    TableBackend backend({{"x", {1.0, 0.0}}, {"y", {0.0, 1.0}}});
    Embedder e(backend, std::make_shared<EmbeddingCache>());
    e.embed_one("x");
    EXPECT_EQ(backend.calls, 1);
    e.embed_one("x");
    EXPECT_EQ(backend.calls, 1);
    EXPECT_EQ(e.backend_texts(), 1u);
    e.embed_one("y");
    EXPECT_EQ(backend.calls, 2);
}

TEST(SemanticExamples, EmptyTextIsAnError) {
    StubEmbedder e;
    EXPECT_THROW(e.embedder.embed_one(""), ValidationError);
}

TEST(SemanticExamples, SelfDistanceIsZero) {
    const auto a = vec({0.3, -1.2, 4.0});
    EXPECT_EQ(semantic_distance(a, a), 0.0);
}

TEST(SemanticExamples, OrthogonalDistanceIsOne) {
    EXPECT_DOUBLE_EQ(semantic_distance(vec({1, 0}), vec({0, 3})), 1.0);
}

TEST(SemanticExamples, AntipodalDistanceIsTwo) {
    EXPECT_DOUBLE_EQ(semantic_distance(vec({1, 2, 3}), vec({-1, -2, -3})), 2.0);
}

TEST(SemanticExamples, IdenticalVectorsGiveZeroMatrix) {
    std::vector<EmbeddingVector> vs(4, vec({0.2, 0.7, -0.1}));
    const auto m = pairwise_distances(vs);
    EXPECT_EQ(m.cwiseAbs().maxCoeff(), 0.0);
}

TEST(SemanticExamples, TwoOrthogonalVectorsMatrix) {
    std::vector<EmbeddingVector> vs{vec({1, 0}), vec({0, 1})};
    const auto m = pairwise_distances(vs);
    EXPECT_DOUBLE_EQ(m(0, 0), 0.0);
    EXPECT_DOUBLE_EQ(m(0, 1), 1.0);
    EXPECT_DOUBLE_EQ(m(1, 0), 1.0);
    EXPECT_DOUBLE_EQ(m(1, 1), 0.0);
}

TEST(SemanticExamples, PairwiseMatchesScalarOracle) {
    std::mt19937_64 rng(kSeed);
    std::vector<EmbeddingVector> vs;
    for (int i = 0; i < 5; ++i) vs.push_back(vec(random_vector(rng, 16)));
    const auto m = pairwise_distances(vs);
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            const double expected = i == j ? 0.0 : oracle::cosine_distance(vs[i].values, vs[j].values);
            EXPECT_NEAR(m(i, j), expected, 1e-12);
        }
    }
}

TEST(SemanticUnit, ModelMismatchIsAnError) {
    EXPECT_THROW(semantic_distance(vec({1, 0}, "a"), vec({1, 0}, "b")), DomainError);
    EXPECT_THROW(semantic_distance(vec({1, 0}), vec({1, 0, 0})), DomainError);
    EXPECT_THROW(semantic_distance(vec({0, 0}), vec({1, 0})), DomainError);
}

TEST(SemanticUnit, StubVectorsAreUnitLengthAndSeeded) {
    HashStubBackend a(24, 1), b(24, 2);
    const auto va = a.vector_for("story"), vb = b.vector_for("story");
    double norm = 0;
    for (double x : va) norm += x * x;
    EXPECT_NEAR(norm, 1.0, 1e-12);
    EXPECT_NE(va, vb);
    EXPECT_EQ(va, HashStubBackend(24, 1).vector_for("story"));
}

TEST(SemanticUnit, CacheFilePersistsAcrossInstances) {
    TempDir dir;
    const auto path = dir / "cache.jsonl";
    {
        TableBackend backend({{"x", {1.0, 2.0}}});
        Embedder e(backend, std::make_shared<EmbeddingCache>(path));
        e.embed_one("x");
        EXPECT_EQ(backend.calls, 1);
    }
    TableBackend backend({{"x", {1.0, 2.0}}});
    Embedder e(backend, std::make_shared<EmbeddingCache>(path));
    const auto v = e.embed_one("x");
    EXPECT_EQ(backend.calls, 0);
    EXPECT_EQ(v.values, (std::vector<double>{1.0, 2.0}));
}

TEST(SemanticUnit, CommandBackendFailureKinds) {
    CommandBackend missing("/nonexistent/embedder", "m");
    const std::vector<std::string> texts{"a"};
    try {
        missing.embed_batch(texts);
        FAIL();
    } catch (const BackendError& e) {
        EXPECT_EQ(e.kind(), BackendError::Kind::configuration);
    }
    CommandBackend failing("sh -c 'exit 3' --", "m");
    try {
        failing.embed_batch(texts);
        FAIL();
    } catch (const BackendError& e) {
        EXPECT_EQ(e.kind(), BackendError::Kind::transient);
    }
}

TEST(SemanticUnit, CommandBackendReadsVectors) {
    TempDir dir;
    const auto script = dir / "fake.sh";
    // writes a fixed vector per input text
    write_text(script,
               "#!/bin/sh\n"
               "while [ $# -gt 0 ]; do case $1 in --output) out=$2; shift;; esac; shift; done\n"
               "echo '{\"vectors\": [[1, 0, 0], [0, 1, 0]]}' > \"$out\"\n");
    std::filesystem::permissions(script, std::filesystem::perms::owner_all);
    CommandBackend backend(script.string(), "fake");
    const std::vector<std::string> texts{"a", "b"};
    const auto v = backend.embed_batch(texts);
    ASSERT_EQ(v.size(), 2u);
    EXPECT_EQ(backend.dimension(), 3u);
}

TEST(SemanticProperties, DistanceIsSymmetric) {
    std::mt19937_64 rng(kSeed);
    for (int i = 0; i < kInstances; ++i) {
        const auto a = vec(random_vector(rng, 8)), b = vec(random_vector(rng, 8));
        ASSERT_EQ(semantic_distance(a, b), semantic_distance(b, a));
    }
    record_instances(kInstances);
}

TEST(SemanticProperties, DistanceStaysInRange) {
    std::mt19937_64 rng(kSeed + 1);
    std::uniform_real_distribution<double> scale(1e-6, 1e6);
    for (int i = 0; i < kInstances; ++i) {
        auto a = random_vector(rng, 6);
        for (auto& x : a) x *= scale(rng);
        const auto b = random_vector(rng, 6);
        const double d = semantic_distance(vec(a), vec(b));
        ASSERT_GE(d, 0.0);
        ASSERT_LE(d, 2.0);
        // near-antipodal pairs must clip rather than drift past 2
        std::vector<double> neg(a.size());
        for (std::size_t k = 0; k < a.size(); ++k) neg[k] = -a[k];
        ASSERT_LE(semantic_distance(vec(a), vec(neg)), 2.0);
    }
    record_instances(kInstances);
}

TEST(SemanticProperties, SelfDistanceIsExactlyZero) {
    std::mt19937_64 rng(kSeed + 2);
    for (int i = 0; i < kInstances; ++i) {
        const auto a = vec(random_vector(rng, 12));
        ASSERT_EQ(semantic_distance(a, a), 0.0);
    }
    record_instances(kInstances);
}

TEST(SemanticProperties, DistanceIsScaleInvariant) {
    std::mt19937_64 rng(kSeed + 3);
    std::uniform_real_distribution<double> scale(1e-3, 1e3);
    for (int i = 0; i < kInstances; ++i) {
        const auto a = random_vector(rng, 10);
        auto b = random_vector(rng, 10);
        const double before = semantic_distance(vec(a), vec(b));
        const double k = scale(rng);
        for (auto& x : b) x *= k;
        ASSERT_NEAR(semantic_distance(vec(a), vec(b)), before, 1e-12);
    }
    record_instances(kInstances);
}
