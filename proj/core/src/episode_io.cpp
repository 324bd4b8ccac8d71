#include "agrinav/episode_io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "agrinav/error.hpp"
#include "json.hpp"

namespace agrinav {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kMissingFile, "cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const fs::path& path, const std::string& content) {
  // write to a sibling temp file, then rename: readers never see partial files
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::kMissingFile, "cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, path);
}

}  // namespace

Episode load_episode(const std::string& manifest_path, const KinematicsConfig& config) {
  const fs::path base = fs::path(manifest_path).parent_path();
  json doc = json::parse(read_file(manifest_path), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(Errc::kInvalidManifest, "manifest is not a JSON object: " + manifest_path);
  }

  Episode episode;
  try {
    episode.id = doc.at("id").get<std::string>();
    episode.scene_class = scene_from_name(doc.at("scene_class").get<std::string>());
    episode.instruction = InstructionText::from(doc.at("instruction").get<std::string>());

    const std::string annotation_path = doc.at("annotation_path").get<std::string>();
    const fs::path resolved = fs::path(annotation_path).is_absolute()
                                  ? fs::path(annotation_path)
                                  : base / annotation_path;
    episode.annotation = parse_annotation(read_file(resolved.string()));

    const auto& frames = doc.at("frames");
    const std::string kind = frames.at("kind").get<std::string>();
    if (kind == "null") {
      episode.frame_source.kind = FrameSourceKind::kNull;
    } else if (kind == "directory_of_images") {
      episode.frame_source.kind = FrameSourceKind::kDirectoryOfImages;
    } else {
      throw Error(Errc::kInvalidManifest, "unknown frame source kind \"" + kind + "\"");
    }
    episode.frame_source.uri = frames.value("uri", "");
    episode.frame_source.nominal_fps = frames.value("fps", 14.0);
    if (!(episode.frame_source.nominal_fps > 0.0)) {
      throw Error(Errc::kInvalidManifest, "frames.fps must be > 0");
    }
    if (episode.frame_source.kind == FrameSourceKind::kDirectoryOfImages) {
      fs::path dir = fs::path(episode.frame_source.uri).is_absolute()
                         ? fs::path(episode.frame_source.uri)
                         : base / episode.frame_source.uri;
      if (!fs::is_directory(dir)) {
        throw Error(Errc::kMissingFile, "frame directory does not exist: " + dir.string());
      }
      episode.frame_source.uri = dir.string();
    }

    if (doc.contains("subtask_boundaries")) {
      for (const auto& entry : doc.at("subtask_boundaries")) {
        episode.subtask_boundaries.emplace_back(entry.at(0).get<int>(),
                                                entry.at(1).get<double>());
      }
    }
  } catch (const json::exception& e) {
    throw Error(Errc::kInvalidManifest, manifest_path + ": " + e.what());
  }

  validate_boundaries(episode.subtask_boundaries, episode.duration());
  episode.goal_pose = ground_truth_trajectory(episode.annotation, config).back().pose;
  return episode;
}

std::vector<std::string> list_manifests(const std::string& dataset_dir) {
  if (!fs::is_directory(dataset_dir)) {
    throw Error(Errc::kMissingFile, "dataset directory does not exist: " + dataset_dir);
  }
  const fs::path index_path = fs::path(dataset_dir) / "index.json";
  std::vector<std::string> manifests;
  if (fs::exists(index_path)) {
    json index = json::parse(read_file(index_path.string()), nullptr, false);
    if (index.is_discarded() || !index.contains("episodes")) {
      throw Error(Errc::kInvalidManifest, "unreadable index: " + index_path.string());
    }
    for (const auto& name : index.at("episodes")) {
      manifests.push_back((fs::path(dataset_dir) / name.get<std::string>()).string());
    }
    return manifests;
  }
  for (const auto& entry : fs::directory_iterator(dataset_dir)) {
    const std::string name = entry.path().filename().string();
    if (name.size() > 14 && name.substr(name.size() - 14) == ".manifest.json") {
      manifests.push_back(entry.path().string());
    }
  }
  std::sort(manifests.begin(), manifests.end());
  return manifests;
}

std::vector<Episode> load_dataset(const std::string& dataset_dir,
                                  const KinematicsConfig& config) {
  std::vector<Episode> episodes;
  for (const auto& manifest : list_manifests(dataset_dir)) {
    episodes.push_back(load_episode(manifest, config));
  }
  return episodes;
}

std::string write_dataset(const std::vector<Episode>& episodes, const std::string& out_dir,
                          const std::string& spec_echo) {
  fs::create_directories(out_dir);
  json index;
  index["episodes"] = json::array();
  for (const auto& episode : episodes) {
    const std::string annotation_name = episode.id + ".annotation.json";
    const std::string manifest_name = episode.id + ".manifest.json";
    write_file(fs::path(out_dir) / annotation_name, serialize_annotation(episode.annotation));

    json manifest;
    manifest["id"] = episode.id;
    manifest["scene_class"] = scene_name(episode.scene_class);
    manifest["instruction"] = episode.instruction.text;
    manifest["annotation_path"] = annotation_name;
    manifest["frames"] = {
        {"kind", episode.frame_source.kind == FrameSourceKind::kNull ? "null"
                                                                     : "directory_of_images"},
        {"uri", episode.frame_source.uri},
        {"fps", episode.frame_source.nominal_fps}};
    if (!episode.subtask_boundaries.empty()) {
      json boundaries = json::array();
      for (const auto& [ordinal, time] : episode.subtask_boundaries) {
        boundaries.push_back(json::array({ordinal, time}));
      }
      manifest["subtask_boundaries"] = boundaries;
    }
    write_file(fs::path(out_dir) / manifest_name, manifest.dump(2));
    index["episodes"].push_back(manifest_name);
  }
  if (!spec_echo.empty()) {
    json echo = json::parse(spec_echo, nullptr, false);
    if (!echo.is_discarded()) index["generator"] = echo;
  }
  const fs::path index_path = fs::path(out_dir) / "index.json";
  write_file(index_path, index.dump(2));
  return index_path.string();
}

}  // namespace agrinav
