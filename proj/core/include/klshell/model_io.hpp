#pragma once

#include <string>

#include "klshell/coupling.hpp"

namespace kl {

/// Multi-patch model with its patches, ready to assemble.
struct LoadedModel {
    PatchSet patches;
    MultiPatchModel model;
};

/// Reads the versioned JSON patch/model format: degrees, knot vectors,
/// optional weights, control points in row-major tensor order (xi fastest),
/// trim curves, interfaces with both preimages, cross-points and materials.
/// Rejects unknown format versions.
LoadedModel read_model(const std::string& path);
LoadedModel read_model_from_string(const std::string& json_text);

/// Writes the same format.
void write_model(const PatchSet& patches, const MultiPatchModel& model, const std::string& path);
std::string model_to_string(const PatchSet& patches, const MultiPatchModel& model);

}  // namespace kl
