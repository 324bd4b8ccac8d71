#include "agrinav/policy.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "agrinav/error.hpp"
#include "agrinav/text.hpp"
#include "json.hpp"

namespace agrinav {

using nlohmann::json;

namespace {

std::string extract_json_object(const std::string& reply) {
  const auto begin = reply.find('{');
  const auto end = reply.rfind('}');
  if (begin == std::string::npos || end == std::string::npos || end < begin) {
    return reply;
  }
  return reply.substr(begin, end - begin + 1);
}

std::string lowercase(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// "none", "subtask 2: doing to done", "Subtask NO.2 changes from doing to
// done" — all fold to the same transition.
StateTransition parse_state_change(const std::string& raw) {
  const std::string text = lowercase(raw);
  auto tokens = split_whitespace(text);
  if (tokens.empty()) throw Error(Errc::kUnparseableReply, "empty state_change");
  if (tokens.size() == 1 && normalize_token(tokens[0]) == "none") {
    return StateTransition::none();
  }
  if (normalize_token(tokens[0]) != "subtask") {
    throw Error(Errc::kUnparseableReply, "state_change must start with \"subtask\": " + raw);
  }
  int subtask_id = -1;
  std::string from, to;
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    const std::string token = normalize_token(tokens[i]);
    if (token.empty()) continue;
    if (token == "pending" || token == "doing" || token == "done") {
      if (from.empty()) {
        from = token;
      } else {
        to = token;
      }
      continue;
    }
    // the id may arrive as "2", "2:", or glued to "no" ("no.2")
    if (subtask_id < 0) {
      std::string digits;
      for (char c : token) {
        if (std::isdigit(static_cast<unsigned char>(c)) != 0) digits.push_back(c);
      }
      if (!digits.empty() && digits.size() <= 6) subtask_id = std::stoi(digits);
    }
  }
  if (subtask_id < 0 || from.empty() || to.empty()) {
    throw Error(Errc::kUnparseableReply, "cannot read state_change: " + raw);
  }
  if (from == "pending" && to == "doing") return StateTransition::begin(subtask_id);
  if (from == "doing" && to == "done") return StateTransition::complete(subtask_id);
  throw Error(Errc::kUnparseableReply, "only pending->doing and doing->done exist: " + raw);
}

}  // namespace

PolicyDecision parse_decision_reply(const std::string& reply) {
  json doc = json::parse(extract_json_object(reply), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(Errc::kUnparseableReply, "expected a JSON object; got: " + reply);
  }
  if (!doc.contains("action") || !doc.at("action").is_string()) {
    throw Error(Errc::kUnparseableReply, "reply lacks an \"action\" string; got: " + reply);
  }
  PolicyDecision decision;
  const std::string action_text = doc.at("action").get<std::string>();
  auto action = action_from_token_lenient(action_text);
  if (!action) {
    throw Error(Errc::kUnparseableReply, "\"" + action_text + "\" is not in the action space");
  }
  decision.action = *action;
  if (doc.contains("state_change") && doc.at("state_change").is_string()) {
    decision.transition = parse_state_change(doc.at("state_change").get<std::string>());
  }
  if (doc.contains("reason") && doc.at("reason").is_string()) {
    decision.rationale = doc.at("reason").get<std::string>();
  }
  return decision;
}

namespace {

std::string subtask_table_text(const SubtaskList& list) {
  std::ostringstream out;
  for (const auto& subtask : list.subtasks) {
    out << "NO." << subtask.id << " [" << subtask_state_name(subtask.state) << "] "
        << subtask.description << " | starts when: " << subtask.start_condition
        << " | ends when: " << subtask.end_condition << "\n";
  }
  return out.str();
}

std::string history_tail_text(std::span<const DecisionRecord> history, int tail) {
  if (history.empty() || tail <= 0) return "(none yet)";
  std::ostringstream out;
  const std::size_t start =
      history.size() > static_cast<std::size_t>(tail) ? history.size() - tail : 0;
  for (std::size_t i = start; i < history.size(); ++i) {
    const auto& record = history[i];
    out << "t=" << record.time << "s action=" << action_token(record.decision.action);
    if (!record.decision.transition.is_none() && record.transition_accepted) {
      out << " (subtask " << record.decision.transition.subtask_id() << " -> "
          << subtask_state_name(record.decision.transition.to()) << ")";
    }
    out << "\n";
  }
  return out.str();
}

constexpr const char* kActionMenu = "FORWARD, LEFT ROTATE, RIGHT ROTATE, STOP";

}  // namespace

PolicyDecision decide(const SubtaskList& list, const ImagePayload* frame, ModelClient& backend,
                      const PromptTemplate& tpl, const DecideOptions& options,
                      std::span<const DecisionRecord> history,
                      std::vector<std::string>* violations) {
  auto focus = focus_subtask(list);
  if (!focus) {
    throw Error(Errc::kInvalidSubtaskList, "decide called with every subtask done");
  }
  require_placeholders(tpl, {"subtask_table", "focus_id", "action_menu"});

  ModelRequest request;
  request.system_text =
      "You are the navigation controller of a small agricultural ground robot.";
  request.user_text = render_template(
      tpl, {{"subtask_table", subtask_table_text(list)},
            {"focus_id", std::to_string(*focus)},
            {"history_tail", history_tail_text(history, options.history_tail)},
            {"action_menu", kActionMenu}});
  request.max_reply_tokens = 256;
  if (frame != nullptr) request.image = *frame;

  ModelReply reply = backend.complete(request, options.retry);
  PolicyDecision decision;
  try {
    decision = parse_decision_reply(reply.text);
  } catch (const Error& first_failure) {
    if (first_failure.code() != Errc::kUnparseableReply) throw;
    ModelRequest repair = request;
    repair.user_text = "Your previous reply could not be parsed (" +
                       std::string(first_failure.what()) +
                       "). Answer again with ONLY the required JSON object.\n\n" +
                       request.user_text;
    ModelReply second = backend.complete(repair, options.retry);
    decision = parse_decision_reply(second.text);  // throws kUnparseableReply with raw reply
  }

  if (!decision.transition.is_none() && !transition_legal(list, decision.transition)) {
    if (violations != nullptr) {
      violations->push_back("illegal transition proposed: subtask " +
                            std::to_string(decision.transition.subtask_id()) + " " +
                            subtask_state_name(decision.transition.from()) + " to " +
                            subtask_state_name(decision.transition.to()));
    }
    decision.transition = StateTransition::none();
  }
  return decision;
}

// ---------------------------------------------------------------------------
// Baseline policies
// ---------------------------------------------------------------------------

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class RandomPolicy : public Policy {
 public:
  explicit RandomPolicy(std::uint64_t seed) : seed_(seed) {}

  std::string name() const override { return "random"; }

  SubtaskList plan(const Episode& episode) const override {
    return single_subtask_list(episode.instruction);
  }

  PolicyDecision decide_step(const DecisionContext& context,
                             std::vector<std::string>*) const override {
    const std::uint64_t draw = splitmix64(
        splitmix64(seed_ ^ fnv1a64(context.episode.id)) +
        static_cast<std::uint64_t>(context.step_index));
    static constexpr Action kActions[4] = {Action::kForward, Action::kLeftRotate,
                                           Action::kRightRotate, Action::kStop};
    PolicyDecision decision;
    decision.action = kActions[draw & 0x3];
    decision.rationale = "uniform draw";
    return decision;
  }

 private:
  std::uint64_t seed_;
};

class ScriptedOraclePolicy : public Policy {
 public:
  explicit ScriptedOraclePolicy(Episode episode) : episode_(std::move(episode)) {
    validate_annotation(episode_.annotation);
  }

  std::string name() const override { return "oracle"; }

  SubtaskList plan(const Episode& episode) const override {
    const auto& boundaries = episode.subtask_boundaries;
    SubtaskList list;
    const int count = boundaries.empty() ? 1 : static_cast<int>(boundaries.size());
    for (int i = 1; i <= count; ++i) {
      Subtask subtask;
      subtask.id = i;
      subtask.description = "follow demonstrated segment " + std::to_string(i);
      subtask.start_condition =
          i == 1 ? "at the starting point" : "segment " + std::to_string(i - 1) + " complete";
      subtask.end_condition = "segment " + std::to_string(i) + " complete";
      list.subtasks.push_back(std::move(subtask));
    }
    return list;
  }

  PolicyDecision decide_step(const DecisionContext& context,
                             std::vector<std::string>*) const override {
    const Episode& episode = context.episode;
    PolicyDecision decision;
    decision.rationale = "replaying annotation";

    // Complete the focus subtask once its boundary time has passed.
    auto focus = focus_subtask(context.list);
    if (focus && context.list.at(*focus).state == SubtaskState::kDoing) {
      const auto& boundaries = episode.subtask_boundaries;
      const std::size_t index = static_cast<std::size_t>(*focus - 1);
      if (index < boundaries.size() && boundaries[index].second <= context.time) {
        decision.transition = StateTransition::complete(*focus);
      }
    }

    const auto& intervals = episode.annotation.intervals;
    if (context.time >= intervals.back().t_end) {
      decision.action = Action::kStop;
      return decision;
    }
    for (const auto& interval : intervals) {
      if (context.time >= interval.t_start && context.time < interval.t_end) {
        decision.action = interval.action;
        return decision;
      }
    }
    decision.action = Action::kStop;  // unreachable for valid annotations
    return decision;
  }

 private:
  Episode episode_;
};

class VlmPolicy : public Policy {
 public:
  VlmPolicy(std::shared_ptr<ModelClient> backend, VlmPolicyOptions options)
      : backend_(std::move(backend)), options_(std::move(options)) {
    if (!backend_) throw Error(Errc::kInvalidConfig, "vlm policy needs a backend");
  }

  std::string name() const override {
    return options_.use_subtask_list ? "vlm" : "vlm_no_stl";
  }

  SubtaskList plan(const Episode& episode) const override {
    if (!options_.use_subtask_list) {
      return single_subtask_list(episode.instruction);
    }
    return decompose(episode.instruction, *backend_, options_.decompose_template,
                     options_.decompose)
        .list;
  }

  PolicyDecision decide_step(const DecisionContext& context,
                             std::vector<std::string>* violations) const override {
    return decide(context.list, context.frame, *backend_, options_.decision_template,
                  options_.decide, context.history, violations);
  }

 private:
  std::shared_ptr<ModelClient> backend_;
  VlmPolicyOptions options_;
};

}  // namespace

std::shared_ptr<Policy> random_policy(std::uint64_t seed) {
  return std::make_shared<RandomPolicy>(seed);
}

std::shared_ptr<Policy> scripted_oracle_policy(const Episode& episode) {
  return std::make_shared<ScriptedOraclePolicy>(episode);
}

std::shared_ptr<Policy> vlm_policy(std::shared_ptr<ModelClient> backend,
                                   VlmPolicyOptions options) {
  return std::make_shared<VlmPolicy>(std::move(backend), std::move(options));
}

}  // namespace agrinav
