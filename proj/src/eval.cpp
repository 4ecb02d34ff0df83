#include "hype/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "hype/error.hpp"
#include "hype/io.hpp"

namespace hype {
namespace {

std::size_t slot(Label l) { return l == Label::kHype ? 0 : 1; }

constexpr Label kLabels[] = {Label::kHype, Label::kNotHype};

double safe_div(double num, double den, const std::string& what, std::vector<std::string>& warnings) {
  if (den == 0.0) {
    warnings.push_back(what + " undefined (zero denominator), set to 0");
    return 0.0;
  }
  return num / den;
}

}  // namespace

std::size_t ConfusionMatrix::at(Label gold, Label predicted) const {
  return counts[slot(gold)][slot(predicted)];
}

std::size_t ConfusionMatrix::total() const {
  return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1];
}

EvalReport evaluate(std::span<const Label> gold, std::span<const Label> predicted,
                    std::span<const std::string> adjectives) {
  if (gold.size() != predicted.size()) {
    throw Error(ErrorKind::kLengthMismatch, std::to_string(gold.size()) + " gold labels, " +
                                                std::to_string(predicted.size()) + " predictions");
  }
  if (!adjectives.empty() && adjectives.size() != gold.size()) {
    throw Error(ErrorKind::kLengthMismatch, std::to_string(gold.size()) + " gold labels, " +
                                                std::to_string(adjectives.size()) + " adjectives");
  }
  if (gold.empty()) throw Error(ErrorKind::kEmptyInput, "no examples to evaluate");

  EvalReport r;
  r.examples = gold.size();
  for (std::size_t i = 0; i < gold.size(); ++i) {
    ++r.confusion.counts[slot(gold[i])][slot(predicted[i])];
    if (!adjectives.empty()) {
      auto& a = r.per_adjective[adjectives[i]];
      ++a.total;
      if (gold[i] == predicted[i]) ++a.correct;
    }
  }
  for (auto& [_, a] : r.per_adjective) a.accuracy = static_cast<double>(a.correct) / static_cast<double>(a.total);

  const double n = static_cast<double>(r.examples);
  r.accuracy = static_cast<double>(r.confusion.counts[0][0] + r.confusion.counts[1][1]) / n;
  for (Label c : kLabels) {
    const std::size_t k = slot(c);
    const double tp = static_cast<double>(r.confusion.counts[k][k]);
    const double pred = static_cast<double>(r.confusion.counts[0][k] + r.confusion.counts[1][k]);
    const double support = static_cast<double>(r.confusion.counts[k][0] + r.confusion.counts[k][1]);
    const std::string name = label_name(c);
    ClassMetrics m;
    m.support = static_cast<std::size_t>(support);
    m.precision = safe_div(tp, pred, name + " precision", r.warnings);
    m.recall = safe_div(tp, support, name + " recall", r.warnings);
    m.f1 = safe_div(2 * m.precision * m.recall, m.precision + m.recall, name + " f1", r.warnings);
    r.per_class[c] = m;
    const double w = support / n;
    r.weighted.precision += w * m.precision;
    r.weighted.recall += w * m.recall;
    r.weighted.f1 += w * m.f1;
    r.weighted.support += m.support;
  }
  return r;
}

std::string format_report(const EvalReport& r) {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-10s %9s %9s %9s %9s\n", "", "precision", "recall", "f1", "support");
  out << buf;
  auto row = [&](const std::string& name, const ClassMetrics& m) {
    std::snprintf(buf, sizeof buf, "%-10s %9s %9s %9s %9zu\n", name.c_str(), format_metric(m.precision).c_str(),
                  format_metric(m.recall).c_str(), format_metric(m.f1).c_str(), m.support);
    out << buf;
  };
  for (Label c : kLabels) row(label_name(c), r.per_class.at(c));
  row("weighted", r.weighted);
  out << "accuracy " << format_metric(r.accuracy) << " over " << r.examples << " examples\n";
  out << "confusion (gold x predicted): HYPE/HYPE " << r.confusion.at(Label::kHype, Label::kHype)
      << "  HYPE/NOT_HYPE " << r.confusion.at(Label::kHype, Label::kNotHype) << "  NOT_HYPE/HYPE "
      << r.confusion.at(Label::kNotHype, Label::kHype) << "  NOT_HYPE/NOT_HYPE "
      << r.confusion.at(Label::kNotHype, Label::kNotHype) << "\n";
  if (!r.per_adjective.empty()) {
    out << "per-adjective accuracy:\n";
    for (const auto& [adj, a] : r.per_adjective) {
      std::snprintf(buf, sizeof buf, "  %-16s %s (%zu/%zu)\n", adj.c_str(), format_metric(a.accuracy).c_str(),
                    a.correct, a.total);
      out << buf;
    }
  }
  if (!r.dataset_fingerprint.empty()) out << "dataset " << r.dataset_fingerprint << "\n";
  if (!r.hyperparameters.empty()) out << "hyperparameters " << r.hyperparameters << "\n";
  for (const auto& w : r.warnings) out << "warning: " << w << "\n";
  return out.str();
}

std::string report_records(const EvalReport& r) {
  std::ostringstream out;
  auto rec = [&](const std::string& key, const std::string& value) { out << key << '\t' << value << '\n'; };
  rec("examples", std::to_string(r.examples));
  rec("accuracy", format_double(r.accuracy));
  for (Label c : kLabels) {
    const auto& m = r.per_class.at(c);
    const std::string p = label_name(c);
    rec(p + ".precision", format_double(m.precision));
    rec(p + ".recall", format_double(m.recall));
    rec(p + ".f1", format_double(m.f1));
    rec(p + ".support", std::to_string(m.support));
  }
  rec("weighted.precision", format_double(r.weighted.precision));
  rec("weighted.recall", format_double(r.weighted.recall));
  rec("weighted.f1", format_double(r.weighted.f1));
  for (const auto& [adj, a] : r.per_adjective) {
    rec("adjective." + adj + ".accuracy", format_double(a.accuracy));
    rec("adjective." + adj + ".total", std::to_string(a.total));
  }
  if (!r.dataset_fingerprint.empty()) rec("dataset", r.dataset_fingerprint);
  if (!r.hyperparameters.empty()) rec("hyperparameters", r.hyperparameters);
  for (const auto& w : r.warnings) rec("warning", w);
  return out.str();
}

std::string confusion_records(const ConfusionMatrix& c) {
  std::string out = "gold\tpredicted\tcount\n";
  for (Label g : kLabels) {
    for (Label p : kLabels) {
      out += std::string(label_name(g)) + '\t' + label_name(p) + '\t' + std::to_string(c.at(g, p)) + '\n';
    }
  }
  return out;
}

double cohen_kappa(std::span<const Label> a, std::span<const Label> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::kLengthMismatch,
                std::to_string(a.size()) + " vs " + std::to_string(b.size()) + " labels");
  }
  if (a.empty()) throw Error(ErrorKind::kEmptyInput, "no labels");
  std::size_t agree = 0, a_hype = 0, b_hype = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    agree += a[i] == b[i];
    a_hype += a[i] == Label::kHype;
    b_hype += b[i] == Label::kHype;
  }
  const double n = static_cast<double>(a.size());
  const double po = static_cast<double>(agree) / n;
  const double pa = static_cast<double>(a_hype) / n;
  const double pb = static_cast<double>(b_hype) / n;
  const double pe = pa * pb + (1 - pa) * (1 - pb);
  if (pe == 1.0) return 1.0;
  return (po - pe) / (1 - pe);
}

AgreementReport disagreement_breakdown(const AnnotationTable& annotations,
                                       const std::map<std::string, std::string>& adjective_of) {
  AgreementReport r;
  for (const auto& [name, _] : annotations) r.annotators.push_back(name);
  std::map<std::string, std::set<Label>> seen;
  std::map<std::string, std::size_t> coverage;
  for (const auto& [_, labels] : annotations) {
    for (const auto& [id, label] : labels) {
      seen[id].insert(label);
      ++coverage[id];
    }
  }
  for (const auto& [id, n] : coverage) {
    if (n < 2) continue;
    ++r.overlapping;
    if (seen[id].size() > 1) {
      ++r.disagreements;
      r.unresolved.push_back(id);
      auto it = adjective_of.find(id);
      ++r.disagreements_by_adjective[it == adjective_of.end() ? std::string("?") : it->second];
    }
  }
  if (r.overlapping == 0) throw Error(ErrorKind::kNoOverlap, "no example has two annotators");

  const std::size_t m = r.annotators.size();
  r.kappa.assign(m, std::vector<std::optional<double>>(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const auto& x = annotations.at(r.annotators[i]);
      const auto& y = annotations.at(r.annotators[j]);
      std::vector<Label> a, b;
      for (const auto& [id, label] : x) {
        auto it = y.find(id);
        if (it == y.end()) continue;
        a.push_back(label);
        b.push_back(it->second);
      }
      if (a.empty()) continue;
      r.kappa[i][j] = r.kappa[j][i] = cohen_kappa(a, b);
    }
  }
  return r;
}

std::string format_agreement(const AgreementReport& r) {
  std::ostringstream out;
  out << "pairwise Cohen's kappa\n";
  for (std::size_t i = 0; i < r.annotators.size(); ++i) {
    for (std::size_t j = i + 1; j < r.annotators.size(); ++j) {
      out << "  " << r.annotators[i] << " / " << r.annotators[j] << "  "
          << (r.kappa[i][j] ? format_metric(*r.kappa[i][j]) : std::string("n/a")) << '\n';
    }
  }
  out << "disagreements " << r.disagreements << " of " << r.overlapping << '\n';
  for (const auto& [adj, n] : r.disagreements_by_adjective) out << "  " << adj << '\t' << n << '\n';
  return out.str();
}

}  // namespace hype
