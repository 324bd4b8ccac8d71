#pragma once

#include <string>
#include <vector>

#include "agrinav/episode.hpp"
#include "agrinav/model_client.hpp"
#include "agrinav/prompt.hpp"
#include "agrinav/subtask.hpp"

namespace agrinav {

enum class Verdict { kPass, kFlagged, kInconclusive };

const char* verdict_name(Verdict verdict);

// Outcome of one decomposition-principle check. The principle checks are
// advisory: they describe list quality, they do not reject lists unless the
// caller asked for strict mode.
struct ValidationReport {
  std::string principle;  // "particle" | "synonymity" | "connection"
  Verdict verdict = Verdict::kPass;
  double score = 0.0;               // principle-specific, see each validator
  std::vector<int> violator_ids;    // offending subtask ids, if any
  std::string detail;
};

struct DecomposeOptions {
  bool strict = false;          // flagged principles become hard errors
  bool check_particle = true;   // particle re-decomposes each subtask (model calls)
  double coverage_min = 0.6;    // synonymity threshold
  double connection_min = 0.2;  // connection threshold
  RetryPolicy retry;
};

struct DecompositionResult {
  SubtaskList list;
  std::vector<ValidationReport> reports;
};

// Asks the backend to split the instruction into subtasks, parses the JSON
// reply (one repair retry on parse failure), hard-validates the structure
// and runs the principle validators. All states start pending.
DecompositionResult decompose(const InstructionText& instruction, ModelClient& model,
                              const PromptTemplate& tpl, const DecomposeOptions& options = {});

// Particle: a subtask is atomic if re-decomposing its description yields a
// single subtask. score = fraction of atomic subtasks. Backend trouble makes
// the report inconclusive, never an error.
ValidationReport validate_particle(const SubtaskList& list, ModelClient& model,
                                   const PromptTemplate& tpl, const RetryPolicy& retry = {});

// Synonymity, realized as content-token coverage: the fraction of the
// instruction's content tokens that appear in some subtask description.
// score = coverage.
ValidationReport validate_synonymity(const InstructionText& instruction, const SubtaskList& list,
                                     double coverage_min = 0.6);

// Connection: Jaccard similarity of the content tokens of each start
// condition against the previous end condition. score = smallest pair
// similarity (1.0 for single-subtask lists).
ValidationReport validate_connection(const SubtaskList& list, double connection_min = 0.2);

// Wraps a whole instruction as a single-subtask list (the decomposition
// ablation and the pixel-free baselines use this).
SubtaskList single_subtask_list(const InstructionText& instruction);

}  // namespace agrinav
