#include "storyeval/judges.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

#include "storyeval/error.hpp"

namespace storyeval {

namespace {

constexpr std::array<std::string_view, 3> kJudgeNames = {"expert", "non_expert", "llm"};
constexpr std::array<std::string_view, 4> kVariableNames = {"creativity", "originality", "surprise", "effectiveness"};
constexpr std::array<std::string_view, 3> kMethodNames = {"mean", "median", "mode"};

template <typename E, std::size_t N>
E parse_enum(std::string_view text, const std::array<std::string_view, N>& names, const char* what) {
    for (std::size_t i = 0; i < N; ++i) {
        if (names[i] == text) return static_cast<E>(i);
    }
    throw ValidationError(std::string("unknown ") + what + ": " + std::string(text));
}

}  // namespace

std::string_view to_string(JudgeType type) { return kJudgeNames[static_cast<std::size_t>(type)]; }
std::string_view to_string(RatingVariable variable) { return kVariableNames[static_cast<std::size_t>(variable)]; }
std::string_view to_string(CompositeMethod method) { return kMethodNames[static_cast<std::size_t>(method)]; }
JudgeType parse_judge_type(std::string_view text) { return parse_enum<JudgeType>(text, kJudgeNames, "judge type"); }
RatingVariable parse_rating_variable(std::string_view text) {
    return parse_enum<RatingVariable>(text, kVariableNames, "rating variable");
}
CompositeMethod parse_composite_method(std::string_view text) {
    return parse_enum<CompositeMethod>(text, kMethodNames, "composite method");
}

void Rating::validate() const {
    for (auto v : kRatingVariables) {
        const int s = score(v);
        if (s < 1 || s > 5) {
            throw ValidationError("rating of " + story_id + " by " + judge_id + ": " + std::string(to_string(v)) +
                                  "=" + std::to_string(s) + " outside 1..5");
        }
    }
}

Json to_json(const Rating& r) {
    Json j{{"story_id", r.story_id}, {"judge_id", r.judge_id}, {"judge_type", to_string(r.judge_type)}};
    for (auto v : kRatingVariables) j[std::string(to_string(v))] = r.score(v);
    j["author_guess"] = to_string(r.author_guess);
    return j;
}

Rating rating_from_json(const Json& j) {
    Rating r;
    r.story_id = j.at("story_id").get<std::string>();
    r.judge_id = j.at("judge_id").get<std::string>();
    r.judge_type = parse_judge_type(j.at("judge_type").get<std::string>());
    for (auto v : kRatingVariables) r.scores[static_cast<std::size_t>(v)] = j.at(std::string(to_string(v))).get<int>();
    r.author_guess = parse_author_kind(j.at("author_guess").get<std::string>());
    return r;
}

std::vector<Rating> load_ratings(const std::filesystem::path& path, const Corpus* known_stories) {
    std::vector<Rating> out;
    std::set<std::pair<std::string, std::string>> seen;
    read_jsonl(path, [&](const Json& j, std::size_t line) {
        const std::string where = path.string() + ":" + std::to_string(line) + ": ";
        Rating r;
        try {
            r = rating_from_json(j);
        } catch (const ValidationError& e) {
            throw ValidationError(where + e.what());
        } catch (const std::exception& e) {
            throw ParseError(where + e.what(), line);
        }
        try {
            r.validate();
        } catch (const ValidationError& e) {
            throw ValidationError(where + e.what());
        }
        if (known_stories && !known_stories->find_story(r.story_id)) {
            throw ValidationError(where + "unknown story id " + r.story_id);
        }
        if (!seen.emplace(r.story_id, r.judge_id).second) {
            throw ValidationError(where + "duplicate rating of " + r.story_id + " by " + r.judge_id);
        }
        out.push_back(std::move(r));
    });
    return out;
}

void save_ratings(const std::filesystem::path& path, std::span<const Rating> ratings) {
    std::vector<Json> records;
    records.reserve(ratings.size());
    for (const auto& r : ratings) records.push_back(to_json(r));
    write_jsonl(path, records);
}

CompositeMethod default_method(JudgeType type) {
    return type == JudgeType::non_expert ? CompositeMethod::median : CompositeMethod::mean;
}

CompositeRating composite(std::span<const Rating> ratings, const CompositeOptions& options) {
    if (ratings.empty()) throw ValidationError("composite needs at least one rating");
    const auto& first = ratings.front();
    for (const auto& r : ratings) {
        if (r.story_id != first.story_id || r.judge_type != first.judge_type) {
            throw ValidationError("composite ratings must share one story and judge type");
        }
    }
    CompositeRating c;
    c.story_id = first.story_id;
    c.judge_type = first.judge_type;
    c.method = options.method.value_or(default_method(first.judge_type));
    c.judges = ratings.size();
    for (auto v : kRatingVariables) {
        std::vector<int> xs;
        xs.reserve(ratings.size());
        for (const auto& r : ratings) xs.push_back(r.score(v));
        std::sort(xs.begin(), xs.end());
        double value = 0.0;
        switch (c.method) {
            case CompositeMethod::mean: {
                double sum = 0.0;
                for (int x : xs) sum += x;
                value = sum / static_cast<double>(xs.size());
                break;
            }
            case CompositeMethod::median:
                value = xs[(xs.size() - 1) / 2];
                break;
            case CompositeMethod::mode: {
                std::array<int, 6> counts{};
                for (int x : xs) ++counts[static_cast<std::size_t>(x)];
                int best = xs.front();
                for (int s = 1; s <= 5; ++s) {
                    if (counts[static_cast<std::size_t>(s)] > counts[static_cast<std::size_t>(best)]) best = s;
                }
                value = best;
                break;
            }
        }
        c.values[static_cast<std::size_t>(v)] = value;
    }
    std::size_t ai = 0;
    for (const auto& r : ratings) ai += r.author_guess == AuthorKind::ai;
    const std::size_t human = ratings.size() - ai;
    c.author_guess = ai > human ? AuthorKind::ai : human > ai ? AuthorKind::human : options.tie_break;
    return c;
}

std::vector<CompositeRating> composites(std::span<const Rating> ratings, const CompositeOptions& options) {
    std::map<std::pair<std::string, JudgeType>, std::vector<Rating>> groups;
    for (const auto& r : ratings) groups[{r.story_id, r.judge_type}].push_back(r);
    std::vector<CompositeRating> out;
    out.reserve(groups.size());
    for (const auto& [key, group] : groups) out.push_back(composite(group, options));
    return out;
}

Json to_json(const CompositeRating& c) {
    Json j{{"story_id", c.story_id},
           {"judge_type", to_string(c.judge_type)},
           {"method", to_string(c.method)},
           {"judges", c.judges}};
    for (auto v : kRatingVariables) j[std::string(to_string(v))] = c.value(v);
    j["author_guess"] = to_string(c.author_guess);
    return j;
}

CompositeRating composite_from_json(const Json& j) {
    CompositeRating c;
    c.story_id = j.at("story_id").get<std::string>();
    c.judge_type = parse_judge_type(j.at("judge_type").get<std::string>());
    c.method = parse_composite_method(j.at("method").get<std::string>());
    c.judges = j.value("judges", std::size_t{0});
    for (auto v : kRatingVariables) c.values[static_cast<std::size_t>(v)] = j.at(std::string(to_string(v))).get<double>();
    c.author_guess = parse_author_kind(j.at("author_guess").get<std::string>());
    return c;
}

IccResult icc2k(const Eigen::MatrixXd& x) {
    const auto n = x.rows();
    const auto k = x.cols();
    if (n < 2 || k < 2) throw DomainError("ICC needs at least two stories and two judges");
    const double grand = x.mean();
    const Eigen::VectorXd row_means = x.rowwise().mean();
    const Eigen::RowVectorXd col_means = x.colwise().mean();
    const double ss_rows = static_cast<double>(k) * (row_means.array() - grand).square().sum();
    const double ss_cols = static_cast<double>(n) * (col_means.array() - grand).square().sum();
    const double ss_total = (x.array() - grand).square().sum();
    const double ss_error = std::max(0.0, ss_total - ss_rows - ss_cols);
    const double msr = ss_rows / static_cast<double>(n - 1);
    const double msc = ss_cols / static_cast<double>(k - 1);
    const double mse = ss_error / static_cast<double>((n - 1) * (k - 1));
    IccResult out;
    out.stories = static_cast<std::size_t>(n);
    out.judges = static_cast<std::size_t>(k);
    const double denom = msr + (msc - mse) / static_cast<double>(n);
    // relative to the data scale so rescaled constant matrices stay degenerate
    const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
    if (ss_total <= 1e-12 * scale * scale || std::abs(denom) <= 1e-12 * scale * scale) {
        out.value = 1.0;
        out.degenerate = true;
        return out;
    }
    out.value = (msr - mse) / denom;
    return out;
}

IccSummary icc(std::span<const Rating> ratings, JudgeType type, RatingVariable variable) {
    IccSummary summary;
    summary.judge_type = type;
    summary.variable = variable;
    // story -> (judge -> score)
    std::map<std::string, std::map<std::string, int>> by_story;
    for (const auto& r : ratings) {
        if (r.judge_type == type) by_story[r.story_id][r.judge_id] = r.score(variable);
    }
    std::map<std::vector<std::string>, std::vector<std::string>> batches;
    for (const auto& [story, judges] : by_story) {
        std::vector<std::string> ids;
        for (const auto& [judge, score] : judges) ids.push_back(judge);
        batches[ids].push_back(story);
    }
    double weighted = 0.0;
    std::size_t weight = 0;
    for (const auto& [judges, stories] : batches) {
        if (judges.size() < 2 || stories.size() < 2) {
            summary.warnings.push_back(std::to_string(stories.size()) + " " + std::string(to_string(type)) +
                                       " stories rated by " + std::to_string(judges.size()) +
                                       " judge(s) excluded from ICC");
            continue;
        }
        Eigen::MatrixXd m(static_cast<Eigen::Index>(stories.size()), static_cast<Eigen::Index>(judges.size()));
        for (std::size_t i = 0; i < stories.size(); ++i) {
            const auto& row = by_story.at(stories[i]);
            for (std::size_t j = 0; j < judges.size(); ++j) {
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row.at(judges[j]);
            }
        }
        IccBatch batch{judges, stories.size(), icc2k(m)};
        if (batch.result.degenerate) {
            summary.warnings.push_back("degenerate rating variance in a " + std::string(to_string(type)) +
                                       " batch; ICC set to 1");
        }
        weighted += batch.result.value * static_cast<double>(stories.size());
        weight += stories.size();
        summary.batches.push_back(std::move(batch));
    }
    if (weight > 0) summary.value = weighted / static_cast<double>(weight);
    return summary;
}

std::vector<SummaryCell> rating_summary(std::span<const CompositeRating> composites,
                                        const std::unordered_map<std::string, AuthorKind>& author_of) {
    std::vector<SummaryCell> out;
    for (auto type : kJudgeTypes) {
        for (auto v : kRatingVariables) {
            for (auto kind : {AuthorKind::human, AuthorKind::ai}) {
                std::vector<double> xs;
                for (const auto& c : composites) {
                    if (c.judge_type != type) continue;
                    const auto it = author_of.find(c.story_id);
                    if (it == author_of.end() || it->second != kind) continue;
                    xs.push_back(c.value(v));
                }
                if (xs.empty()) continue;
                SummaryCell cell{type, v, kind, 0.0, 0.0, xs.size()};
                double sum = 0.0;
                for (double x : xs) sum += x;
                cell.mean = sum / static_cast<double>(xs.size());
                if (xs.size() > 1) {
                    double ss = 0.0;
                    for (double x : xs) ss += (x - cell.mean) * (x - cell.mean);
                    cell.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
                }
                out.push_back(cell);
            }
        }
    }
    return out;
}

std::string rating_summary_table(std::span<const SummaryCell> cells) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(2);
    out << "judge_type,variable,human,ai\n";
    for (auto type : kJudgeTypes) {
        for (auto v : kRatingVariables) {
            const SummaryCell* h = nullptr;
            const SummaryCell* a = nullptr;
            for (const auto& c : cells) {
                if (c.judge_type != type || c.variable != v) continue;
                (c.author_kind == AuthorKind::human ? h : a) = &c;
            }
            if (!h && !a) continue;
            auto fmt = [&](const SummaryCell* c) {
                if (!c) return std::string();
                std::ostringstream s;
                s << std::fixed << std::setprecision(2) << c->mean << " (±" << c->sd << ")";
                return s.str();
            };
            out << to_string(type) << ',' << to_string(v) << ',' << fmt(h) << ',' << fmt(a) << '\n';
        }
    }
    return out.str();
}

std::map<JudgeType, double> turing_accuracy(std::span<const CompositeRating> composites,
                                            const std::unordered_map<std::string, AuthorKind>& author_of) {
    std::map<JudgeType, std::pair<std::size_t, std::size_t>> tally;
    for (const auto& c : composites) {
        const auto it = author_of.find(c.story_id);
        if (it == author_of.end()) continue;
        auto& [correct, total] = tally[c.judge_type];
        correct += c.author_guess == it->second;
        ++total;
    }
    std::map<JudgeType, double> out;
    for (const auto& [type, t] : tally) out[type] = static_cast<double>(t.first) / static_cast<double>(t.second);
    return out;
}

std::unordered_map<std::string, AuthorKind> author_map(const Corpus& corpus) {
    std::unordered_map<std::string, AuthorKind> out;
    for (const auto& s : corpus.stories()) out.emplace(s.id, s.author_kind);
    return out;
}

}  // namespace storyeval
