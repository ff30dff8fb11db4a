#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cflex/pipeline.hpp"

namespace cflex::detail {

struct ManifestInput {
    std::string name;                // path as recorded in the manifest
    std::filesystem::path location;  // where to read it for checksumming
};

/// `cflex <stage> --key=value ...` covering every non-empty setting.
std::string rerun_command(Stage stage, const PipelineConfig& cfg);

/// Writes `<dir>/manifest.json` describing the stage run and every other file in `dir`.
void write_manifest(const std::filesystem::path& dir, Stage stage, const PipelineConfig& cfg,
                    const std::vector<ManifestInput>& inputs);

}  // namespace cflex::detail
