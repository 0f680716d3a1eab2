#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <random>

#include "storyeval/semantic.hpp"
#include "storyeval/store.hpp"

namespace storyeval {

namespace fs = std::filesystem;

namespace {

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') out += "'\\''";
        else out += c;
    }
    return out + "'";
}

class TempDir {
public:
    TempDir() {
        std::random_device rd;
        path_ = fs::temp_directory_path() /
                ("storyeval-embed-" + std::to_string(::getpid()) + "-" + std::to_string(rd()));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

}  // namespace

CommandBackend::CommandBackend(std::string command, std::string model_id, std::size_t dimension)
    : command_(std::move(command)), model_id_(std::move(model_id)), dimension_(dimension) {
    if (command_.empty()) throw BackendError(BackendError::Kind::configuration, "embedding command is empty");
    if (model_id_.empty()) throw BackendError(BackendError::Kind::configuration, "embedding model id is empty");
}

std::vector<std::vector<double>> CommandBackend::embed_batch(std::span<const std::string> texts) {
    TempDir dir;
    const fs::path input = dir.path() / "texts.json";
    const fs::path output = dir.path() / "vectors.json";
    write_json(input, Json(std::vector<std::string>(texts.begin(), texts.end())));

    const std::string cmd = command_ + " --model " + shell_quote(model_id_) + " --input " +
                            shell_quote(input.string()) + " --output " + shell_quote(output.string());
    const int status = std::system(cmd.c_str());
    if (status == -1) throw BackendError(BackendError::Kind::transient, "could not spawn embedding command");
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    if (code == 2 || code == 126 || code == 127) {
        throw BackendError(BackendError::Kind::configuration,
                           "embedding command misconfigured (exit " + std::to_string(code) + "): " + cmd);
    }
    if (code != 0) {
        throw BackendError(BackendError::Kind::transient,
                           "embedding command failed (exit " + std::to_string(code) + "): " + cmd);
    }

    Json result;
    try {
        result = read_json(output);
    } catch (const Error& e) {
        throw BackendError(BackendError::Kind::transient, std::string("unreadable embedding output: ") + e.what());
    }
    std::vector<std::vector<double>> vectors;
    try {
        vectors = result.at("vectors").get<std::vector<std::vector<double>>>();
    } catch (const Json::exception& e) {
        throw BackendError(BackendError::Kind::transient, std::string("bad embedding output: ") + e.what());
    }
    if (!vectors.empty() && dimension_ == 0) dimension_ = vectors.front().size();
    return vectors;
}

}  // namespace storyeval
