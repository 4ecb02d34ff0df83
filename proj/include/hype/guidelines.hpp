#pragma once

// The six-step annotation guideline as a deterministic rule engine.
//
//   1 value judgement   exclusion short-circuits to NOT_HYPE
//   2 hyperbolic        lexicon entry flagged hyperbolic
//   3 gratuitous        attributive without in-sentence justification, or a
//                       redundancy trigger elsewhere in the sentence
//   4 amplified         an amplifier adverb in the premodifier run
//   5 coordinated       stacked with another hype candidate
//   6 broader context   enough other promotional signals in the sentence
//
// Steps 2-6 all run once step 1 passes, so a decision can carry several
// rationales.

#include <array>
#include <span>
#include <string>
#include <vector>

#include "hype/labels.hpp"
#include "hype/lexicon.hpp"
#include "hype/text.hpp"

namespace hype {

enum class Confidence { kRuleFired, kDefault };

const char* confidence_name(Confidence confidence);

struct TraceStep {
  int step = 1;
  // Step 1: the exclusion fired (adjective carries no value judgement).
  // Steps 2-6: the step's rationale applies.
  bool fired = false;
  std::string evidence;

  bool operator==(const TraceStep&) const = default;
};

struct GuidelineDecision {
  Label label = Label::kNotHype;
  Confidence confidence = Confidence::kDefault;
  RationaleSet rationales;
  std::vector<TraceStep> trace;

  bool operator==(const GuidelineDecision&) const = default;
};

struct EngineConfig {
  int broader_context_threshold = 2;
};

// Throws Error(kUnknownAdjective) if the occurrence's adjective is not in the
// lexicon and Error(kInvalidArgument) if it does not belong to the sentence.
GuidelineDecision decide(const CandidateOccurrence& occurrence, const Sentence& sentence,
                         const Lexicon& lexicon, const RuleResources& resources,
                         const EngineConfig& config = {});

struct DecidedOccurrence {
  CandidateOccurrence occurrence;
  GuidelineDecision decision;
};

struct BatchError {
  std::string sentence_id;
  TokenIndex token_index = 0;
  std::string message;
};

struct BatchResult {
  std::vector<DecidedOccurrence> items;
  std::vector<BatchError> errors;
};

BatchResult decide_batch(std::span<const Sentence> sentences, const Lexicon& lexicon,
                         const RuleResources& resources, const EngineConfig& config = {});

// Step-1 exclusion evidence for the token, or empty when the adjective passes.
std::string value_judgement_exclusion(const Sentence& sentence, TokenIndex index,
                                      const RuleResources& resources);

// Line record: sentence_id<TAB>adjective<TAB>label<TAB>rationales<TAB>evidence
// where evidence is "N+ text" / "N- text" per trace step joined by " ; ".
std::string format_trace_record(const CandidateOccurrence& occurrence,
                                const GuidelineDecision& decision);

// Combination rule applied to per-step yes/no answers (index 0 = step 1).
// Answers for steps 2-6 are ignored when step 1 is "no".
struct CombinedAnswer {
  Label label = Label::kNotHype;
  RationaleSet rationales;
};
CombinedAnswer combine_step_answers(const std::array<bool, 6>& answers);

}  // namespace hype
