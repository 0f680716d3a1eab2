#include <mutex>

#include "storyeval/semantic.hpp"
#include "storyeval/store.hpp"

namespace storyeval {

namespace fs = std::filesystem;

EmbeddingCache::EmbeddingCache(fs::path path) : path_(std::move(path)) {
    if (!fs::exists(*path_)) return;
    read_jsonl(*path_, [&](const Json& r, std::size_t line) {
        try {
            entries_[{r.at("model_id").get<std::string>(), r.at("text_hash").get<std::string>()}] =
                r.at("vector").get<std::vector<double>>();
        } catch (const Json::exception& e) {
            throw ParseError(path_->string() + ":" + std::to_string(line) + ": bad cache entry: " + e.what(), line);
        }
    });
}

std::optional<std::vector<double>> EmbeddingCache::lookup(const std::string& model_id,
                                                          const std::string& text_hash) const {
    std::shared_lock lock(mutex_);
    auto it = entries_.find({model_id, text_hash});
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void EmbeddingCache::store(const std::string& model_id, const std::string& text_hash,
                           const std::vector<double>& vector) {
    std::unique_lock lock(mutex_);
    auto [it, inserted] = entries_.insert_or_assign({model_id, text_hash}, vector);
    (void)it;
    if (!path_ || !inserted) return;
    if (path_->has_parent_path()) fs::create_directories(path_->parent_path());
    std::ofstream out(*path_, std::ios::app);
    if (!out) throw IoError("cannot append to embedding cache " + path_->string());
    out << Json{{"model_id", model_id}, {"text_hash", text_hash}, {"vector", vector}}.dump() << '\n';
}

std::size_t EmbeddingCache::size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
}

}  // namespace storyeval
