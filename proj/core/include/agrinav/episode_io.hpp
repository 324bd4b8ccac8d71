#pragma once

#include <string>
#include <vector>

#include "agrinav/episode.hpp"
#include "agrinav/kinematics.hpp"

namespace agrinav {

// Reads and fully validates one episode manifest:
//   {"id", "scene_class", "instruction", "annotation_path",
//    "frames": {"kind", "uri", "fps"}, "subtask_boundaries": [[i, t], ...]}
// annotation_path and a directory-of-images uri resolve relative to the
// manifest's directory; the frame directory must exist for that kind. The
// goal pose is derived from the annotation under `config`.
Episode load_episode(const std::string& manifest_path,
                     const KinematicsConfig& config = KinematicsConfig{});

// Manifest paths of a dataset directory: the index.json listing when
// present, otherwise every *.manifest.json sorted by name.
std::vector<std::string> list_manifests(const std::string& dataset_dir);

std::vector<Episode> load_dataset(const std::string& dataset_dir,
                                  const KinematicsConfig& config = KinematicsConfig{});

// Writes <id>.annotation.json + <id>.manifest.json per episode plus an
// index.json naming them all; `spec_echo` (serialized generator spec) is
// stored in the index for provenance. Returns the index path.
std::string write_dataset(const std::vector<Episode>& episodes, const std::string& out_dir,
                          const std::string& spec_echo);

}  // namespace agrinav
