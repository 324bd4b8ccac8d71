#include "agrinav/prompt.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "agrinav/error.hpp"

namespace agrinav {

namespace {

constexpr const char* kDecomposeBody = R"(You plan routes for a small ground robot working around farms, greenhouses, forests, mountains, gardens and villages.

Decompose the navigation instruction below into an ordered list of subtasks.
Follow these rules exactly:
1. Each subtask is a single atomic motion that cannot be split into smaller subtasks.
2. Together the subtasks cover the whole instruction: nothing omitted, nothing added.
3. The start condition of each subtask matches the end condition of the previous one.

Reply with a JSON array only, no prose. Each element must be an object:
{"id": <1-based integer>, "description": "<what to do>", "start_condition": "<when it starts>", "end_condition": "<when it is finished>"}

Instruction: {{instruction}}
)";

constexpr const char* kDecisionBody = R"(You drive a small ground robot one step at a time. At every step you pick exactly one low-level action from: {{action_menu}}.

Subtask list (complete them strictly in order):
{{subtask_table}}

Focus only on subtask {{focus_id}}. Ignore the others until it is finished.

Recent steps:
{{history_tail}}

Look at the attached camera frame if one is provided. Reply with a JSON object only, no prose:
{"action": "<one action>", "state_change": "none" or "subtask <i>: <from> to <to>", "reason": "<one short sentence>"}

A subtask changes from doing to done only when its end condition is met. Say "subtask <i>: doing to done" when that happens. Emit STOP only when the whole route is complete.
)";

}  // namespace

PromptTemplate default_decompose_template() {
  return PromptTemplate{"decompose.default", kDecomposeBody};
}

PromptTemplate default_decision_template() {
  return PromptTemplate{"decision.default", kDecisionBody};
}

PromptTemplate load_template(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kMissingFile, "cannot open template " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return PromptTemplate{std::filesystem::path(path).filename().string(), buffer.str()};
}

bool has_placeholder(const PromptTemplate& tpl, const std::string& name) {
  return tpl.body.find("{{" + name + "}}") != std::string::npos;
}

void require_placeholders(const PromptTemplate& tpl, const std::vector<std::string>& required) {
  for (const auto& name : required) {
    if (!has_placeholder(tpl, name)) {
      throw Error(Errc::kMissingPlaceholder,
                  "template \"" + tpl.name + "\" lacks {{" + name + "}}");
    }
  }
}

std::string render_template(const PromptTemplate& tpl,
                            const std::map<std::string, std::string>& values) {
  std::string out = tpl.body;
  for (const auto& [key, value] : values) {
    const std::string token = "{{" + key + "}}";
    std::size_t pos = 0;
    while ((pos = out.find(token, pos)) != std::string::npos) {
      out.replace(pos, token.size(), value);
      pos += value.size();
    }
  }
  return out;
}

}  // namespace agrinav
