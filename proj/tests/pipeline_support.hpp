#pragma once

// Temporary output roots and CLI helpers for tests that drive the pipeline.

#include <atomic>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "cflex/pipeline.hpp"
#include "cflex/textio.hpp"

namespace cflex::testing {

namespace fs = std::filesystem;

inline fs::path fixture(const std::string& name) { return fs::path(CFLEX_FIXTURE_DIR) / name; }

class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = fs::temp_directory_path() /
                ("cflex-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const fs::path& path() const { return path_; }
    fs::path operator/(const std::string& s) const { return path_ / s; }

private:
    fs::path path_;
};

/// The fixture settings with absolute paths, so tests run from any directory.
inline std::string fixture_config() {
    std::ostringstream c;
    c << "classical_treebank = " << fixture("classical.conllu").string() << '\n'
      << "modern_treebank = " << fixture("modern.conllu").string() << '\n'
      << "classical_raw = " << fixture("classical_raw.txt").string() << '\n'
      << "modern_raw = " << fixture("modern_raw.txt").string() << '\n'
      << "norms_file = " << fixture("norms.csv").string() << '\n'
      << "min_count = 5\nmin_frequency = 2\ndim = 16\nwindow = 5\nepochs = 20\nx_max = 10\n";
    return c.str();
}

struct CliRun {
    int code = 0;
    std::string out;
    std::string err;
};

inline CliRun cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    CliRun r;
    r.code = run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

/// Relative path -> contents of every regular file below `root`. Lines
/// starting with `"created_at"` are dropped so manifests compare by content.
inline std::map<std::string, std::string> snapshot(const fs::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (!e.is_regular_file()) continue;
        std::string body = read_file(e.path().string());
        if (e.path().filename() == "manifest.json") {
            std::istringstream in(body);
            std::string line, kept;
            while (std::getline(in, line))
                if (line.find("\"created_at\"") == std::string::npos) kept += line + '\n';
            body = kept;
        }
        files[fs::relative(e.path(), root).string()] = body;
    }
    return files;
}

}  // namespace cflex::testing
