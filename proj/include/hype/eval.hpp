#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hype/labels.hpp"

namespace hype {

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

// counts[gold][predicted], index 0 = HYPE, 1 = NOT_HYPE.
struct ConfusionMatrix {
  std::array<std::array<std::size_t, 2>, 2> counts{};

  std::size_t at(Label gold, Label predicted) const;
  std::size_t total() const;
};

struct AdjectiveAccuracy {
  std::size_t correct = 0;
  std::size_t total = 0;
  double accuracy = 0.0;
};

struct EvalReport {
  std::size_t examples = 0;
  double accuracy = 0.0;
  std::map<Label, ClassMetrics> per_class;
  ClassMetrics weighted;
  ConfusionMatrix confusion;
  std::map<std::string, AdjectiveAccuracy> per_adjective;
  // Filled in by callers.
  std::string dataset_fingerprint;
  std::string hyperparameters;
  // Zero-division cases, each resolved as 0.
  std::vector<std::string> warnings;
};

// `adjectives` may be empty (no per-adjective breakdown); otherwise it must
// align with the labels. Throws Error(kLengthMismatch), Error(kEmptyInput).
EvalReport evaluate(std::span<const Label> gold, std::span<const Label> predicted,
                    std::span<const std::string> adjectives = {});

// Aligned text table with three decimals.
std::string format_report(const EvalReport& report);
// "key<TAB>value" lines, one metric per line.
std::string report_records(const EvalReport& report);
// "gold<TAB>predicted<TAB>count" for the four cells, preceded by a header.
std::string confusion_records(const ConfusionMatrix& confusion);

// 1.0 when chance agreement is 1 (both raters used one and the same class).
// Throws Error(kLengthMismatch), Error(kEmptyInput).
double cohen_kappa(std::span<const Label> a, std::span<const Label> b);

// annotator -> example id -> label
using AnnotationTable = std::map<std::string, std::map<std::string, Label>>;

struct AgreementReport {
  std::vector<std::string> annotators;
  // kappa[i][j] over the examples both annotated; empty on the diagonal and
  // for pairs without shared examples.
  std::vector<std::vector<std::optional<double>>> kappa;
  std::map<std::string, std::size_t> disagreements_by_adjective;
  std::size_t disagreements = 0;
  // Examples seen by at least two annotators.
  std::size_t overlapping = 0;
  std::vector<std::string> unresolved;
};

// An example counts as a disagreement when at least two annotators labeled it
// and their labels are not unanimous. Throws Error(kNoOverlap) when no example
// has two annotators.
AgreementReport disagreement_breakdown(const AnnotationTable& annotations,
                                       const std::map<std::string, std::string>& adjective_of);

std::string format_agreement(const AgreementReport& report);

}  // namespace hype
