#include "manifest.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>

#include <nlohmann/json.hpp>

#include "cflex/textio.hpp"

namespace cflex::detail {

namespace {

std::string shell_quote(const std::string& s) {
    const bool plain = !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '/' || c == '.' || c == '_' || c == '-' || c == '+' || c == ':' ||
               c == ',' || c >= 0x80;
    });
    if (plain) return s;
    std::string out = "'";
    for (const char c : s) {
        if (c == '\'') out += "'\\''";
        else out.push_back(c);
    }
    return out + "'";
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

std::string rerun_command(Stage stage, const PipelineConfig& cfg) {
    const auto values = config_to_map(cfg);
    std::string cmd = "cflex " + std::string(to_string(stage));
    for (const auto& key : config_keys()) {
        const std::string& v = values.at(key);
        if (v.empty()) continue;
        std::string flag = key;
        std::replace(flag.begin(), flag.end(), '_', '-');
        cmd += " --" + flag + "=" + shell_quote(v);
    }
    return cmd;
}

void write_manifest(const std::filesystem::path& dir, Stage stage, const PipelineConfig& cfg,
                    const std::vector<ManifestInput>& inputs) {
    nlohmann::ordered_json m;
    m["stage"] = std::string(to_string(stage));
    m["version"] = kVersion;
    m["created_at"] = utc_timestamp();
    m["config_hash"] = config_hash(cfg);
    m["rerun_command"] = rerun_command(stage, cfg);
    nlohmann::ordered_json config = nlohmann::ordered_json::object();
    for (const auto& [k, v] : config_to_map(cfg)) config[k] = v;
    m["config"] = config;

    nlohmann::ordered_json in = nlohmann::ordered_json::array();
    for (const auto& i : inputs) in.push_back({{"path", i.name}, {"sha256", sha256_file(i.location)}});
    m["inputs"] = in;

    std::vector<std::string> names;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().filename() != "manifest.json")
            names.push_back(entry.path().filename().string());
    std::sort(names.begin(), names.end());
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const auto& n : names) out.push_back({{"path", n}, {"sha256", sha256_file(dir / n)}});
    m["outputs"] = out;

    write_file((dir / "manifest.json").string(), m.dump(2) + "\n");
}

}  // namespace cflex::detail
