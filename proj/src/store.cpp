#include "storyeval/store.hpp"

#include <fstream>
#include <sstream>

#include "storyeval/error.hpp"

namespace storyeval {

namespace fs = std::filesystem;

void read_jsonl(const fs::path& path, const std::function<void(const Json&, std::size_t)>& visit) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        Json record;
        try {
            record = Json::parse(line);
        } catch (const Json::parse_error& e) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": malformed record: " + e.what(),
                             line_no);
        }
        visit(record, line_no);
    }
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out << text;
        if (!out) throw IoError("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

void write_jsonl(const fs::path& path, const std::vector<Json>& records) {
    std::string text;
    for (const auto& r : records) {
        text += r.dump();
        text += '\n';
    }
    write_text(path, text);
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json read_json(const fs::path& path) {
    const std::string text = read_text(path);
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError(path.string() + ": malformed JSON: " + e.what(), 0);
    }
}

void write_json(const fs::path& path, const Json& value) { write_text(path, value.dump(2) + "\n"); }

}  // namespace storyeval
