#include "agrinav/decompose.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "agrinav/error.hpp"
#include "agrinav/text.hpp"
#include "json.hpp"

namespace agrinav {

using nlohmann::json;

const char* verdict_name(Verdict verdict) {
  switch (verdict) {
    case Verdict::kPass: return "pass";
    case Verdict::kFlagged: return "flagged";
    case Verdict::kInconclusive: return "inconclusive";
  }
  return "pass";
}

namespace {

// Models wrap JSON in fences or prose often enough that we fish the first
// top-level array out of the reply before parsing.
std::string extract_json_array(const std::string& reply) {
  const auto begin = reply.find('[');
  const auto end = reply.rfind(']');
  if (begin == std::string::npos || end == std::string::npos || end < begin) {
    return reply;
  }
  return reply.substr(begin, end - begin + 1);
}

SubtaskList parse_decomposition_reply(const std::string& reply) {
  json doc = json::parse(extract_json_array(reply), nullptr, false);
  if (doc.is_discarded() || !doc.is_array() || doc.empty()) {
    throw Error(Errc::kUnparseableReply, "expected a non-empty JSON array; got: " + reply);
  }
  SubtaskList list;
  try {
    for (const auto& entry : doc) {
      Subtask subtask;
      if (entry.contains("id") && entry.at("id").is_number_integer()) {
        subtask.id = entry.at("id").get<int>();
      } else if (entry.contains("id") && entry.at("id").is_string()) {
        subtask.id = std::stoi(entry.at("id").get<std::string>());
      } else {
        subtask.id = static_cast<int>(list.subtasks.size()) + 1;
      }
      subtask.description = entry.at("description").get<std::string>();
      subtask.start_condition = entry.at("start_condition").get<std::string>();
      subtask.end_condition = entry.at("end_condition").get<std::string>();
      subtask.state = SubtaskState::kPending;
      list.subtasks.push_back(std::move(subtask));
    }
  } catch (const json::exception& e) {
    throw Error(Errc::kUnparseableReply, std::string(e.what()) + "; got: " + reply);
  } catch (const std::invalid_argument&) {
    throw Error(Errc::kUnparseableReply, "non-numeric id; got: " + reply);
  } catch (const std::out_of_range&) {
    throw Error(Errc::kUnparseableReply, "id out of range; got: " + reply);
  }
  validate_subtask_list(list);
  return list;
}

SubtaskList request_decomposition(const std::string& instruction_text, ModelClient& model,
                                  const PromptTemplate& tpl, const RetryPolicy& retry) {
  ModelRequest request;
  request.system_text = "You are a precise planning assistant. Follow the output format exactly.";
  request.user_text = render_template(tpl, {{"instruction", instruction_text}});
  request.max_reply_tokens = 768;

  ModelReply reply = model.complete(request, retry);
  try {
    return parse_decomposition_reply(reply.text);
  } catch (const Error& first_failure) {
    if (first_failure.code() != Errc::kUnparseableReply &&
        first_failure.code() != Errc::kInvalidSubtaskList) {
      throw;
    }
    // one repair retry with the failure spelled out
    ModelRequest repair = request;
    repair.user_text = "Your previous reply could not be used (" +
                       std::string(first_failure.what()) +
                       "). Answer again with ONLY the required JSON array.\n\n" +
                       request.user_text;
    ModelReply second = model.complete(repair, retry);
    try {
      return parse_decomposition_reply(second.text);
    } catch (const Error& second_failure) {
      throw Error(Errc::kUnparseableReply,
                  "reply unusable after repair retry: " + std::string(second_failure.what()));
    }
  }
}

std::set<std::string> token_set(const std::string& text) {
  auto tokens = content_tokens(text);
  return {tokens.begin(), tokens.end()};
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t intersection = 0;
  for (const auto& token : a) intersection += b.count(token);
  const std::size_t unions = a.size() + b.size() - intersection;
  return unions == 0 ? 1.0 : static_cast<double>(intersection) / static_cast<double>(unions);
}

}  // namespace

DecompositionResult decompose(const InstructionText& instruction, ModelClient& model,
                              const PromptTemplate& tpl, const DecomposeOptions& options) {
  require_placeholders(tpl, {"instruction"});
  DecompositionResult result;
  result.list = request_decomposition(instruction.text, model, tpl, options.retry);

  result.reports.push_back(validate_synonymity(instruction, result.list, options.coverage_min));
  result.reports.push_back(validate_connection(result.list, options.connection_min));
  if (options.check_particle) {
    result.reports.push_back(validate_particle(result.list, model, tpl, options.retry));
  }

  if (options.strict) {
    for (const auto& report : result.reports) {
      if (report.verdict == Verdict::kFlagged) {
        throw Error(Errc::kValidationFailed,
                    report.principle + " principle: " + report.detail);
      }
    }
  }
  return result;
}

ValidationReport validate_particle(const SubtaskList& list, ModelClient& model,
                                   const PromptTemplate& tpl, const RetryPolicy& retry) {
  ValidationReport report;
  report.principle = "particle";
  int atomic = 0;
  for (const auto& subtask : list.subtasks) {
    try {
      SubtaskList again = request_decomposition(subtask.description, model, tpl, retry);
      if (again.size() == 1) {
        ++atomic;
      } else {
        report.violator_ids.push_back(subtask.id);
      }
    } catch (const Error&) {
      report.verdict = Verdict::kInconclusive;
      report.detail = "backend failed while re-decomposing subtask " + std::to_string(subtask.id);
      return report;
    }
  }
  report.score = list.subtasks.empty()
                     ? 1.0
                     : static_cast<double>(atomic) / static_cast<double>(list.size());
  if (report.violator_ids.empty()) {
    report.verdict = Verdict::kPass;
    report.detail = "every subtask re-decomposes to itself";
  } else {
    report.verdict = Verdict::kFlagged;
    std::ostringstream detail;
    detail << report.violator_ids.size() << " subtask(s) split further on re-decomposition";
    report.detail = detail.str();
  }
  return report;
}

ValidationReport validate_synonymity(const InstructionText& instruction, const SubtaskList& list,
                                     double coverage_min) {
  ValidationReport report;
  report.principle = "synonymity";
  const auto instruction_tokens = token_set(instruction.text);
  std::set<std::string> described;
  for (const auto& subtask : list.subtasks) {
    for (const auto& token : content_tokens(subtask.description)) described.insert(token);
  }
  if (instruction_tokens.empty()) {
    report.score = 1.0;
    report.verdict = Verdict::kPass;
    report.detail = "instruction has no content tokens";
    return report;
  }
  std::size_t covered = 0;
  for (const auto& token : instruction_tokens) covered += described.count(token);
  report.score =
      static_cast<double>(covered) / static_cast<double>(instruction_tokens.size());
  std::ostringstream detail;
  detail << covered << "/" << instruction_tokens.size() << " instruction content tokens covered";
  report.detail = detail.str();
  report.verdict = report.score >= coverage_min ? Verdict::kPass : Verdict::kFlagged;
  return report;
}

ValidationReport validate_connection(const SubtaskList& list, double connection_min) {
  ValidationReport report;
  report.principle = "connection";
  report.score = 1.0;
  if (list.size() < 2) {
    report.verdict = Verdict::kPass;
    report.detail = "single subtask, nothing to align";
    return report;
  }
  for (int i = 2; i <= list.size(); ++i) {
    const double similarity =
        jaccard(token_set(list.at(i).start_condition), token_set(list.at(i - 1).end_condition));
    report.score = std::min(report.score, similarity);
    if (similarity < connection_min) report.violator_ids.push_back(i);
  }
  if (report.violator_ids.empty()) {
    report.verdict = Verdict::kPass;
    report.detail = "all start conditions align with the previous end condition";
  } else {
    report.verdict = Verdict::kFlagged;
    std::ostringstream detail;
    detail << report.violator_ids.size() << " boundary(ies) below similarity "
           << connection_min;
    report.detail = detail.str();
  }
  return report;
}

SubtaskList single_subtask_list(const InstructionText& instruction) {
  SubtaskList list;
  list.subtasks.push_back(Subtask{1, instruction.text, "at the starting point",
                                  "the whole instruction is complete", SubtaskState::kPending});
  return list;
}

}  // namespace agrinav
