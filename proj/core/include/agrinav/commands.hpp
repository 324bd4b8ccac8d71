#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>

#include "agrinav/model_client.hpp"

namespace agrinav {

// Overrides the backend used by eval/decompose; tests plug canned clients in
// here. When empty, the hosted client is built from MODEL_ENDPOINT /
// MODEL_NAME / MODEL_API_KEY.
using ClientFactory = std::function<std::shared_ptr<ModelClient>()>;

// Batch evaluation request, the wiring behind `eval`.
struct RunManifest {
  std::string dataset_dir;
  std::string policy_kind = "oracle";  // vlm | vlm_no_stl | random | oracle
  std::string kinematics_config_path;  // empty = built-in defaults
  std::string decompose_template_path; // empty = built-in default
  std::string decision_template_path;  // empty = built-in default
  std::string out_dir;
  int parallelism = 0;  // 0 = auto: 1 for vlm kinds, hardware count otherwise
  std::uint64_t seed = 0;
  bool strict = false;
  bool resume = false;      // skip episodes whose result file already exists
  std::string format = "table";
};

// Exit codes: 0 success, 1 operational failure (invalid episodes, strict
// validation, failed runs), 2 configuration/usage errors.
int cmd_gen(const std::string& spec_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed_override, std::optional<int> episodes_override,
            std::ostream& out, std::ostream& err);

int cmd_stats(const std::string& dataset_dir, const std::string& format, std::ostream& out,
              std::ostream& err);

int cmd_validate(const std::string& dataset_dir, std::ostream& out, std::ostream& err);

int cmd_decompose(const std::string& instruction, bool strict,
                  const std::string& template_path, const ClientFactory& factory,
                  std::ostream& out, std::ostream& err);

int cmd_eval(const RunManifest& manifest, const ClientFactory& factory, std::ostream& out,
             std::ostream& err);

int cmd_report(const std::string& results_dir, const std::string& format, std::ostream& out,
               std::ostream& err);

}  // namespace agrinav
