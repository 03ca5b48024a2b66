#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace testutil {

inline std::filesystem::path fixtures_dir() {
    return std::filesystem::path(PLANFORGE_FIXTURES_DIR);
}

inline std::filesystem::path fixture(const std::string& rel) {
    return fixtures_dir() / rel;
}

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "cannot open " << p.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline std::string slurp_fixture(const std::string& rel) { return slurp(fixture(rel)); }

/// Fresh per-test scratch directory under the test binary's CWD.
inline std::filesystem::path scratch_dir(const std::string& name) {
    std::filesystem::path dir = std::filesystem::current_path() / "scratch" / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
}

}  // namespace testutil
