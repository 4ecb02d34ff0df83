#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace hype {

enum class Label { kHype, kNotHype };

const char* label_name(Label label);
// Accepts "HYPE" and "NOT_HYPE".
std::optional<Label> parse_label(std::string_view name);

enum class Rationale { kHyperbolic, kGratuitous, kAmplified, kCoordinated, kBroaderContext };

inline constexpr Rationale kAllRationales[] = {Rationale::kHyperbolic, Rationale::kGratuitous,
                                               Rationale::kAmplified, Rationale::kCoordinated,
                                               Rationale::kBroaderContext};

const char* rationale_name(Rationale rationale);
std::optional<Rationale> parse_rationale(std::string_view name);
// Guideline step (2..6) that produces the rationale.
int rationale_step(Rationale rationale);

using RationaleSet = std::set<Rationale>;

// Comma-joined names in enum order; empty set gives "".
std::string format_rationales(const RationaleSet& set);
// Throws Error(kParse) on unknown names.
RationaleSet parse_rationales(std::string_view text);

}  // namespace hype
