#include "storyeval/themes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "storyeval/error.hpp"

namespace storyeval {

namespace {

struct DisjointSet {
    explicit DisjointSet(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
    std::vector<std::size_t> parent;
};

}  // namespace

std::vector<Merge> ward_linkage(const Eigen::MatrixXd& points) {
    const auto n = static_cast<int>(points.rows());
    if (n < 2) return {};

    // squared Ward distances, updated in place by Lance-Williams
    Eigen::MatrixXd d2(n, n);
    for (int i = 0; i < n; ++i) {
        d2(i, i) = 0.0;
        for (int j = i + 1; j < n; ++j) d2(i, j) = d2(j, i) = (points.row(i) - points.row(j)).squaredNorm();
    }
    std::vector<int> size(n, 1);
    std::vector<bool> active(n, true);

    struct Raw {
        int a, b;
        double height;
    };
    std::vector<Raw> raw;
    raw.reserve(n - 1);
    std::vector<int> chain;
    int remaining = n;
    while (remaining > 1) {
        if (chain.empty()) {
            for (int i = 0; i < n; ++i) {
                if (active[i]) {
                    chain.push_back(i);
                    break;
                }
            }
        }
        const int a = chain.back();
        const int prev = chain.size() >= 2 ? chain[chain.size() - 2] : -1;
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        if (prev >= 0) {
            best = prev;
            best_d = d2(a, prev);
        }
        for (int c = 0; c < n; ++c) {
            if (!active[c] || c == a) continue;
            if (d2(a, c) < best_d) {
                best = c;
                best_d = d2(a, c);
            }
        }
        if (best != prev) {
            chain.push_back(best);
            continue;
        }
        // reciprocal nearest neighbours: merge
        chain.pop_back();
        chain.pop_back();
        const int keep = std::min(a, best);
        const int drop = std::max(a, best);
        raw.push_back({a, best, std::sqrt(std::max(0.0, best_d))});
        const double na = size[a], nb = size[best], dab = best_d;
        for (int k = 0; k < n; ++k) {
            if (!active[k] || k == a || k == best) continue;
            const double nk = size[k];
            const double v = ((na + nk) * d2(a, k) + (nb + nk) * d2(best, k) - nk * dab) / (na + nb + nk);
            d2(keep, k) = d2(k, keep) = v;
        }
        size[keep] = size[a] + size[best];
        active[drop] = false;
        --remaining;
    }

    // Order by height and relabel in SciPy convention.
    std::vector<std::size_t> order(raw.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return raw[x].height < raw[y].height; });
    DisjointSet sets(static_cast<std::size_t>(n));
    std::vector<int> cluster_id(n);
    std::iota(cluster_id.begin(), cluster_id.end(), 0);
    std::vector<int> cluster_size(n, 1);
    std::vector<Merge> out;
    out.reserve(raw.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        const auto& m = raw[order[k]];
        const std::size_t ra = sets.find(static_cast<std::size_t>(m.a));
        const std::size_t rb = sets.find(static_cast<std::size_t>(m.b));
        int left = cluster_id[ra], right = cluster_id[rb];
        if (left > right) std::swap(left, right);
        const int merged_size = cluster_size[ra] + cluster_size[rb];
        out.push_back({left, right, m.height, merged_size});
        sets.unite(ra, rb);
        const std::size_t root = sets.find(ra);
        cluster_id[root] = n + static_cast<int>(k);
        cluster_size[root] = merged_size;
    }
    return out;
}

std::vector<int> cut_linkage(std::span<const Merge> linkage, std::size_t n, double threshold) {
    // cluster id -> one member point, to map merges back onto points
    std::vector<std::size_t> member(n + linkage.size());
    std::iota(member.begin(), member.begin() + static_cast<std::ptrdiff_t>(n), std::size_t{0});
    DisjointSet sets(n);
    for (std::size_t k = 0; k < linkage.size(); ++k) {
        const auto& m = linkage[k];
        member[n + k] = member[static_cast<std::size_t>(m.left)];
        if (m.height < threshold) sets.unite(member[static_cast<std::size_t>(m.left)], member[static_cast<std::size_t>(m.right)]);
    }
    std::vector<int> labels(n, -1);
    std::vector<int> root_label(n, -1);
    int next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = sets.find(i);
        if (root_label[r] < 0) root_label[r] = next++;
        labels[i] = root_label[r];
    }
    return labels;
}

std::vector<std::vector<std::string>> ThemeClustering::clusters() const {
    std::vector<std::vector<std::string>> out(static_cast<std::size_t>(num_clusters));
    for (std::size_t i = 0; i < story_ids.size(); ++i) out[static_cast<std::size_t>(assignment[i])].push_back(story_ids[i]);
    return out;
}

ThemeClustering cluster_themes(std::span<const std::string> story_ids, std::span<const EmbeddingVector> embeddings,
                               const ThemeOptions& options) {
    if (story_ids.size() != embeddings.size()) throw ValidationError("story ids and embeddings differ in length");
    ThemeClustering out;
    out.story_ids.assign(story_ids.begin(), story_ids.end());
    if (embeddings.empty()) return out;
    const std::size_t dim = embeddings.front().dimension();
    Eigen::MatrixXd points(static_cast<Eigen::Index>(embeddings.size()), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < embeddings.size(); ++i) {
        const auto& e = embeddings[i];
        if (e.dimension() != dim || e.model_id != embeddings.front().model_id) {
            throw ValidationError("embeddings for clustering must share one model and dimension");
        }
        Eigen::RowVectorXd row = Eigen::Map<const Eigen::RowVectorXd>(e.values.data(), static_cast<Eigen::Index>(dim));
        if (options.normalize) {
            const double norm = row.norm();
            if (norm == 0.0) throw DomainError("cannot normalize a zero embedding");
            row /= norm;
        }
        points.row(static_cast<Eigen::Index>(i)) = row;
    }
    out.linkage = ward_linkage(points);
    out.assignment = cut_linkage(out.linkage, embeddings.size(), options.threshold);
    out.num_clusters = out.assignment.empty() ? 0 : *std::max_element(out.assignment.begin(), out.assignment.end()) + 1;
    return out;
}

const ThemeCount* ThemeReport::count(std::string_view item_set, std::string_view group) const {
    for (const auto& c : counts) {
        if (c.item_set == item_set && c.group == group) return &c;
    }
    return nullptr;
}

std::vector<Json> ThemeReport::assignment_records() const {
    std::vector<Json> out;
    for (const auto& c : clusterings) {
        const std::string group = c.author_kind ? std::string(to_string(*c.author_kind)) : "all";
        for (std::size_t i = 0; i < c.story_ids.size(); ++i) {
            out.push_back(Json{{"item_set", c.item_set},
                               {"author_kind", group},
                               {"story_id", c.story_ids[i]},
                               {"cluster_id", c.assignment[i]}});
        }
    }
    return out;
}

std::string ThemeReport::counts_csv() const {
    std::ostringstream out;
    out << "item_set,group,stories,num_clusters\n";
    for (const auto& c : counts) out << c.item_set << ',' << c.group << ',' << c.stories << ',' << c.num_clusters << '\n';
    return out.str();
}

ThemeReport theme_counts(const Corpus& corpus, Embedder& embedder, const ThemeOptions& options, bool joint) {
    ThemeReport report;
    std::vector<std::optional<AuthorKind>> groups;
    if (joint)
        groups = {std::nullopt};
    else
        groups = {AuthorKind::human, AuthorKind::ai};
    for (const auto& item_set : corpus.item_sets()) {
        for (const auto& group : groups) {
            std::vector<std::string> ids, texts;
            for (const auto& s : corpus.stories()) {
                if (s.item_set != item_set.id) continue;
                if (group && s.author_kind != *group) continue;
                ids.push_back(s.id);
                texts.push_back(s.text);
            }
            const std::string label = group ? std::string(to_string(*group)) : "all";
            if (ids.empty()) {
                report.warnings.push_back("no " + label + " stories for item set " + item_set.id);
                report.counts.push_back({item_set.id, label, 0, 0});
                continue;
            }
            const auto vectors = embedder.embed(texts);
            auto clustering = cluster_themes(ids, vectors, options);
            clustering.item_set = item_set.id;
            clustering.author_kind = group;
            report.counts.push_back({item_set.id, label, clustering.num_clusters, ids.size()});
            report.clusterings.push_back(std::move(clustering));
        }
    }
    return report;
}

}  // namespace storyeval
