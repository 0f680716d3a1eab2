#include <cstdlib>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "nlp_internal.hpp"
#include "storyeval/linguistics.hpp"
#include "storyeval/store.hpp"
#include "support.hpp"

using namespace storyeval;
using namespace storyeval::test;

namespace {

// Set STORYEVAL_UPDATE_GOLDEN=1 to rewrite golden files from current output.
bool update_golden() {
    const char* v = std::getenv("STORYEVAL_UPDATE_GOLDEN");
    return v && std::string(v) == "1";
}

const std::vector<std::string>& golden_texts() {
    static const std::vector<std::string> texts{
        "I ran. She jumped.",
        "The cat sat on the mat.",
        "In the heart of an ancient library, a young scholar found a map.",
        "Once upon a time, in a small village nestled between rolling hills, there lived a young girl named Lily "
        "who loved to write letters.",
        "The pump said diesel but my heart said petrol. Halfway to Leeds the engine coughed like a chain smoker.",
        "My accountant insists that gloom is tax deductible. I tried to claim it and the form asked whether I exist.",
    };
    return texts;
}

ConstituencyNode leaf(int token) { return ConstituencyNode{"X", token, {}}; }

/// Balanced binary tree with `depth` levels over consecutive leaves.
ConstituencyNode balanced(int depth, int& next) {
    if (depth == 1) return leaf(next++);
    ConstituencyNode n{"XP", -1, {}};
    n.children.push_back(balanced(depth - 1, next));
    n.children.push_back(balanced(depth - 1, next));
    return n;
}

}  // namespace

TEST(LinguisticsExamples, TwoShortSentences) {
    const auto a = annotate_text("I ran. She jumped.");
    ASSERT_EQ(a.sentences.size(), 2u);
    EXPECT_EQ(a.token_count(), 6u);
    EXPECT_EQ(a.word_count(), 4u);
}

TEST(LinguisticsExamples, GoldenAnnotations) {
    const auto path = data_dir() / "golden_annotations.jsonl";
    std::vector<Json> actual;
    for (std::size_t i = 0; i < golden_texts().size(); ++i) {
        actual.push_back(to_json(annotate_text(golden_texts()[i], "g" + std::to_string(i))));
    }
    if (update_golden()) write_jsonl(path, actual);
    std::vector<Json> expected;
    read_jsonl(path, [&](const Json& j, std::size_t) { expected.push_back(j); });
    ASSERT_EQ(expected.size(), actual.size());
    for (std::size_t i = 0; i < actual.size(); ++i) EXPECT_EQ(actual[i], expected[i]) << golden_texts()[i];
}

TEST(LinguisticsExamples, SingleWordHello) {
    const auto a = annotate_text("Hello");
    ASSERT_EQ(a.sentences.size(), 1u);
    EXPECT_GE(a.token_count(), 1u);
}

TEST(LinguisticsExamples, EmptyTextIsAnError) {
    EXPECT_THROW(annotate_text(""), ValidationError);
    EXPECT_THROW(annotate_text("   \n"), ValidationError);
}

TEST(LinguisticsExamples, DominantTermsOfCatSentence) {
    EXPECT_EQ(dominant_terms(annotate_text("The cat sat on the mat")), (std::vector<std::string>{"cat", "sit", "mat"}));
}

TEST(LinguisticsExamples, AllStopwordSentenceHasNoTerms) {
    EXPECT_TRUE(dominant_terms(annotate_text("it is of the")).empty());
}

TEST(LinguisticsExamples, RepeatedContentWordAppearsOnce) {
    const auto terms = dominant_terms(annotate_text("The dog saw another dog. Dogs bark."));
    EXPECT_EQ(std::count(terms.begin(), terms.end(), "dog"), 1);
}

TEST(LinguisticsExamples, RootPathLengthIsOne) {
    const auto a = annotate_text("The cat sat on the mat.");
    for (std::size_t t = 0; t < a.sentences[0].tokens.size(); ++t) {
        if (a.sentences[0].tokens[t].head == -1) {
            EXPECT_EQ(dependency_path_length(a, 0, t), 1);
        }
    }
}

TEST(LinguisticsExamples, DependentOfRootHasPathTwo) {
    const auto a = annotate_text("The cat sat on the mat.");
    int checked = 0;
    const auto& toks = a.sentences[0].tokens;
    for (std::size_t t = 0; t < toks.size(); ++t) {
        if (toks[t].head >= 0 && toks[static_cast<std::size_t>(toks[t].head)].head == -1) {
            EXPECT_EQ(dependency_path_length(a, 0, t), 2);
            ++checked;
        }
    }
    EXPECT_GT(checked, 0);
}

TEST(LinguisticsExamples, FourWordChainInLibraryPhrase) {
    // heads: in <- heart <- of <- library, so the chain from "library" spans four words
    const auto a = annotate_text("in the heart of an ancient library");
    const auto& toks = a.sentences[0].tokens;
    ASSERT_EQ(toks.size(), 7u);
    EXPECT_EQ(toks[0].head, -1);
    EXPECT_EQ(dependency_path_length(a, 0, 6), 4);
    EXPECT_EQ(dependency_path_length(a, 0, 0), 1);
}

TEST(LinguisticsExamples, SingleNodeTreeDepth) {
    EXPECT_EQ(constituency_branch_depths(leaf(0)), (std::vector<int>{1}));
    const auto a = annotate_text("Hello");
    EXPECT_EQ(constituency_branch_depths(a, 0), (std::vector<int>{1}));
}

TEST(LinguisticsExamples, BalancedBinaryTreeDepths) {
    for (int d = 1; d <= 6; ++d) {
        int next = 0;
        const auto tree = balanced(d, next);
        const auto depths = constituency_branch_depths(tree);
        EXPECT_EQ(depths.size(), static_cast<std::size_t>(1 << (d - 1)));
        for (int x : depths) EXPECT_EQ(x, d);
    }
}

TEST(LinguisticsExamples, PinnedParseBranchDepths) {
    // (S (NP The cat) sat (PP on (NP the mat)) .)
    const auto a = annotate_text("The cat sat on the mat.");
    EXPECT_EQ(to_bracketed(a.sentences[0]), "(S (NP The cat) sat (PP on (NP the mat)) .)");
    EXPECT_EQ(constituency_branch_depths(a, 0), (std::vector<int>{3, 3, 2, 3, 4, 4, 2}));
}

TEST(LinguisticsExamples, PronounsFirstAndSecond) {
    const auto p = pronoun_person_profile(annotate_text("I gave you my word"));
    EXPECT_EQ(p.first, 2);
    EXPECT_EQ(p.second, 1);
    EXPECT_EQ(p.third_singular, 0);
    EXPECT_EQ(p.third_plural, 0);
}

TEST(LinguisticsExamples, PronounFreeText) {
    EXPECT_EQ(pronoun_person_profile(annotate_text("The cat sat on the mat.")).total(), 0);
}

TEST(LinguisticsExamples, PronounsThirdPerson) {
    const auto p = pronoun_person_profile(annotate_text("They saw her"));
    EXPECT_EQ(p.third_plural, 1);
    EXPECT_EQ(p.third_singular, 1);
}

TEST(LinguisticsUnit, SyllableCounts) {
    EXPECT_EQ(count_syllables("cat"), 1);
    EXPECT_EQ(count_syllables("make"), 1);
    EXPECT_EQ(count_syllables("table"), 2);
    EXPECT_EQ(count_syllables("library"), 3);
    EXPECT_EQ(count_syllables("jumped"), 1);
    EXPECT_EQ(count_syllables("wanted"), 2);
    EXPECT_EQ(count_syllables("rhythm"), 1);
    EXPECT_EQ(count_syllables("the"), 1);
}

TEST(LinguisticsUnit, JsonRoundTrip) {
    const auto a = annotate_text("Once upon a time, a girl wrote letters. She sent them.");
    const auto back = annotation_from_json(to_json(a));
    EXPECT_EQ(to_json(back), to_json(a));
    EXPECT_NO_THROW(back.validate());
}

TEST(LinguisticsUnit, ValidateRejectsCycles) {
    auto a = flat_annotation({{"a", "b", "c"}});
    a.sentences[0].tokens[0].head = 2;
    a.sentences[0].tokens[2].head = 0;
    EXPECT_THROW(a.validate(), ValidationError);
    EXPECT_THROW(dependency_path_length(a, 0, 1), DomainError);
}

TEST(LinguisticsUnit, BadIndexIsOutOfRange) {
    const auto a = flat_annotation({{"a", "b"}});
    EXPECT_THROW(dependency_path_length(a, 0, 5), std::out_of_range);
    EXPECT_THROW(dependency_path_length(a, 3, 0), std::out_of_range);
}

TEST(LinguisticsUnit, MissingTreeIsDomainError) {
    const auto a = flat_annotation({{"a", "b"}});
    EXPECT_THROW(constituency_branch_depths(a, 0), DomainError);
}

TEST(LinguisticsUnit, SentenceSplitterHandlesAbbreviationsAndQuotes) {
    const RuleBasedAnnotator annotator;
    EXPECT_EQ(annotator.split_sentences("Mr. Smith went home. He slept.").size(), 2u);
    EXPECT_EQ(annotator.split_sentences("\"Stop!\" she cried. Nobody did.").size(), 2u);
    // an ellipsis before a lowercase word continues the sentence
    EXPECT_EQ(annotator.split_sentences("Wait... what? Yes.").size(), 2u);
    EXPECT_EQ(annotator.split_sentences("Wait... What? Yes.").size(), 3u);
}

TEST(LinguisticsUnit, LemmasOfCommonForms) {
    const auto a = annotate_text("The children were running and she wrote two letters.");
    std::map<std::string, std::string> lemma;
    for (const auto& t : a.sentences[0].tokens) lemma[t.text] = t.lemma;
    EXPECT_EQ(lemma["children"], "child");
    EXPECT_EQ(lemma["were"], "be");
    EXPECT_EQ(lemma["running"], "run");
    EXPECT_EQ(lemma["wrote"], "write");
    EXPECT_EQ(lemma["letters"], "letter");
}

TEST(LinguisticsProperties, AnnotationIsDeterministic) {
    std::mt19937_64 rng(kSeed);
    for (int i = 0; i < kInstances; ++i) {
        const auto text = random_text(rng);
        ASSERT_EQ(to_json(annotate_text(text)), to_json(annotate_text(text))) << text;
    }
    record_instances(kInstances);
}

TEST(LinguisticsProperties, DominantTermsHaveNoStopwordsOrDuplicates) {
    std::mt19937_64 rng(kSeed + 1);
    for (int i = 0; i < kInstances; ++i) {
        const auto terms = dominant_terms(annotate_text(random_text(rng)));
        std::set<std::string> seen;
        for (const auto& t : terms) {
            ASSERT_FALSE(nlp::lex::contains(nlp::lex::stopwords(), t)) << t;
            ASSERT_TRUE(seen.insert(t).second) << t;
        }
    }
    record_instances(kInstances);
}

TEST(LinguisticsProperties, EverySentenceRootHasPathOne) {
    std::mt19937_64 rng(kSeed + 2);
    for (int i = 0; i < kInstances; ++i) {
        const auto a = annotate_text(random_text(rng));
        ASSERT_NO_THROW(a.validate());
        for (std::size_t s = 0; s < a.sentences.size(); ++s) {
            int roots = 0;
            for (std::size_t t = 0; t < a.sentences[s].tokens.size(); ++t) {
                if (a.sentences[s].tokens[t].head == -1) {
                    ++roots;
                    ASSERT_EQ(dependency_path_length(a, s, t), 1);
                }
            }
            ASSERT_EQ(roots, 1);
        }
    }
    record_instances(kInstances);
}

TEST(LinguisticsProperties, PronounBucketsBoundedByTokens) {
    std::mt19937_64 rng(kSeed + 3);
    for (int i = 0; i < kInstances; ++i) {
        const auto a = annotate_text(random_text(rng));
        ASSERT_LE(static_cast<std::size_t>(pronoun_person_profile(a).total()), a.token_count());
    }
    record_instances(kInstances);
}
