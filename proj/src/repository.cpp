#include "scopegen/runtime.hpp"

#include <fstream>
#include <sstream>

namespace scopegen {

ModelRepository::ModelRepository(std::vector<std::filesystem::path> roots, std::string extension,
                                 Loader loader)
    : roots_(std::move(roots)), extension_(std::move(extension)), loader_(std::move(loader)) {}

std::optional<std::filesystem::path> ModelRepository::locate(std::string_view qualified_name) const {
    if (qualified_name.empty()) return std::nullopt;
    std::filesystem::path relative;
    std::size_t start = 0;
    for (;;) {
        auto dot = qualified_name.find('.', start);
        auto segment = qualified_name.substr(start, dot == std::string_view::npos ? dot : dot - start);
        if (segment.empty()) return std::nullopt;
        if (dot == std::string_view::npos) {
            relative /= std::string(segment) + "." + extension_;
            break;
        }
        relative /= std::string(segment);
        start = dot + 1;
    }
    for (const auto& root : roots_) {
        auto candidate = root / relative;
        std::error_code ec;
        if (std::filesystem::is_regular_file(candidate, ec)) return candidate;
    }
    return std::nullopt;
}

std::optional<std::string> ModelRepository::read(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    ++reads_[path.lexically_normal().string()];
    ++total_reads_;
    return buf.str();
}

LoadedArtifact ModelRepository::load(const std::string& content, const std::string& path) const {
    if (!loader_) {
        return {nullptr, {make_error(codes::LoadFailure, "no loader configured", {}, path)}};
    }
    return loader_(content, path);
}

std::size_t ModelRepository::read_count(const std::filesystem::path& path) const {
    auto it = reads_.find(path.lexically_normal().string());
    return it == reads_.end() ? 0 : it->second;
}

} // namespace scopegen
