#include "hype/labels.hpp"

#include "hype/error.hpp"
#include "hype/io.hpp"

namespace hype {

const char* label_name(Label label) { return label == Label::kHype ? "HYPE" : "NOT_HYPE"; }

std::optional<Label> parse_label(std::string_view name) {
  if (name == "HYPE") return Label::kHype;
  if (name == "NOT_HYPE") return Label::kNotHype;
  return std::nullopt;
}

const char* rationale_name(Rationale rationale) {
  switch (rationale) {
    case Rationale::kHyperbolic: return "HYPERBOLIC";
    case Rationale::kGratuitous: return "GRATUITOUS";
    case Rationale::kAmplified: return "AMPLIFIED";
    case Rationale::kCoordinated: return "COORDINATED";
    case Rationale::kBroaderContext: return "BROADER_CONTEXT";
  }
  return "HYPERBOLIC";
}

std::optional<Rationale> parse_rationale(std::string_view name) {
  for (Rationale r : kAllRationales) {
    if (name == rationale_name(r)) return r;
  }
  return std::nullopt;
}

int rationale_step(Rationale rationale) { return static_cast<int>(rationale) + 2; }

std::string format_rationales(const RationaleSet& set) {
  std::string out;
  for (Rationale r : set) {
    if (!out.empty()) out += ',';
    out += rationale_name(r);
  }
  return out;
}

RationaleSet parse_rationales(std::string_view text) {
  RationaleSet set;
  if (trim(text).empty()) return set;
  for (const auto& part : split(text, ',')) {
    auto r = parse_rationale(trim(part));
    if (!r) throw Error(ErrorKind::kParse, "unknown rationale '" + part + "'");
    set.insert(*r);
  }
  return set;
}

}  // namespace hype
