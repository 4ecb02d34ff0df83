#include "hype/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "hype/error.hpp"
#include "hype/io.hpp"
#include "hype/random.hpp"

namespace hype {
namespace {

constexpr std::string_view kDatasetMagic = "#hype-dataset";

Error malformed(std::string_view id, const std::string& reason) {
  return Error(ErrorKind::kMalformedDocument, "document '" + std::string(id) + "': " + reason);
}

Error parse_error(std::size_t line, const std::string& reason) {
  return Error(ErrorKind::kParse, "line " + std::to_string(line) + ": " + reason);
}

bool is_continuation(char c) { return (static_cast<unsigned char>(c) & 0xC0) == 0x80; }

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

Sentence sentence_from_tagged(const std::vector<std::pair<std::string, Tag>>& tokens) {
  Sentence s;
  bool seen_word = false;
  for (const auto& [text, t] : tokens) {
    if (!s.text.empty()) s.text += ' ';
    Token token;
    token.text = text;
    token.lower = casefold(text);
    token.start = s.text.size();
    s.text += text;
    token.end = s.text.size();
    token.tag = t;
    if (!seen_word && !is_punct_token(text)) {
      token.sentence_initial = true;
      seen_word = true;
    }
    s.tokens.push_back(std::move(token));
  }
  return s;
}

Document parse_one(const std::vector<std::string>& lines, std::string_view origin) {
  std::size_t first = 0;
  while (first < lines.size() && trim(lines[first]).empty()) ++first;
  if (first == lines.size()) throw malformed(origin, "empty document");
  const std::string& header = lines[first];
  if (header.empty() || header[0] != '#') throw malformed(origin, "missing '#id<TAB>year' header");
  const auto fields = split(std::string_view(header).substr(1), '\t');
  Document doc;
  doc.doc_id = trim(fields[0]);
  if (doc.doc_id.empty()) throw malformed(origin, "empty document id");
  if (fields.size() < 2 || fields.size() > 3) {
    throw malformed(doc.doc_id, "header must be '#id<TAB>year'");
  }
  for (char c : doc.doc_id) {
    if (c == '|' || c == ' ' || c == '\t') throw malformed(doc.doc_id, "invalid character in id");
  }
  try {
    std::size_t used = 0;
    doc.year = std::stoi(trim(fields[1]), &used);
    if (used != trim(fields[1]).size()) throw std::invalid_argument("year");
  } catch (const std::exception&) {
    throw malformed(doc.doc_id, "year is not an integer: '" + fields[1] + "'");
  }
  const bool tagged = fields.size() == 3;
  if (tagged && trim(fields[2]) != "tagged") {
    throw malformed(doc.doc_id, "unknown header field '" + fields[2] + "'");
  }
  if (!tagged) {
    std::string body;
    for (std::size_t i = first + 1; i < lines.size(); ++i) body += lines[i] + "\n";
    doc.text = normalize_whitespace(body);
  } else {
    std::vector<std::pair<std::string, Tag>> current;
    auto flush = [&] {
      if (!current.empty()) doc.tagged_sentences.push_back(sentence_from_tagged(current));
      current.clear();
    };
    for (std::size_t i = first + 1; i < lines.size(); ++i) {
      if (trim(lines[i]).empty()) {
        flush();
        continue;
      }
      const auto tok = split(lines[i], '\t');
      std::optional<Tag> t = tok.size() == 2 ? parse_tag(trim(tok[1])) : std::nullopt;
      if (!t || trim(tok[0]).empty() || trim(tok[0]).find(' ') != std::string::npos) {
        throw malformed(doc.doc_id, "bad tagged line " + std::to_string(i + 1) + ": '" + lines[i] + "'");
      }
      current.emplace_back(trim(tok[0]), *t);
    }
    flush();
    std::vector<std::string> texts;
    for (const auto& s : doc.tagged_sentences) texts.push_back(s.text);
    doc.text = join(texts, " ");
  }
  if (doc.text.find('|') != std::string::npos) {
    throw malformed(doc.doc_id, "text contains the reserved character '|'");
  }
  return doc;
}

std::string field_or_dash(std::string_view s) { return s.empty() ? "-" : std::string(s); }

std::string dash_to_empty(const std::string& s) { return s == "-" ? std::string() : s; }

std::size_t parse_size(const std::string& text, std::size_t line, const char* what) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(text, &used);
    if (used != text.size() || text[0] == '-' || text[0] == '+') throw std::invalid_argument(what);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw parse_error(line, std::string(what) + " is not a non-negative integer: '" + text + "'");
  }
}

}  // namespace

Corpus::Corpus(std::vector<Document> documents, const Lexicon& lexicon)
    : documents_(std::move(documents)) {
  std::set<std::string> ids;
  for (const Document& doc : documents_) {
    if (!ids.insert(doc.doc_id).second) throw malformed(doc.doc_id, "duplicate document id");
    if (doc.text.find('|') != std::string::npos) {
      throw malformed(doc.doc_id, "text contains the reserved character '|'");
    }
    std::vector<Sentence> sentences;
    if (!doc.tagged_sentences.empty()) {
      sentences = doc.tagged_sentences;
    } else {
      for (auto [b, e] : segment_sentences(doc.text)) {
        sentences.push_back(prepare_sentence(std::string_view(doc.text).substr(b, e - b), lexicon));
      }
    }
    std::size_t n = 0;
    for (Sentence& s : sentences) {
      s.id = doc.doc_id + ":s" + std::to_string(++n);
      s.source = SourceRef{doc.doc_id, doc.year};
      for (const auto& occ : find_candidates(s, lexicon)) {
        index_[occ.adjective].push_back({doc.doc_id, s.id, occ.token_index});
      }
      by_id_.emplace(s.id, sentences_.size());
      sentences_.push_back(std::move(s));
    }
  }
}

const Sentence* Corpus::find_sentence(std::string_view sentence_id) const {
  auto it = by_id_.find(sentence_id);
  return it == by_id_.end() ? nullptr : &sentences_[it->second];
}

std::size_t Corpus::occurrences(std::string_view adjective) const {
  auto it = index_.find(std::string(adjective));
  return it == index_.end() ? 0 : it->second.size();
}

std::vector<Document> parse_documents(std::string_view content, std::string_view origin) {
  std::vector<Document> docs;
  std::vector<std::string> chunk;
  auto flush = [&] {
    bool blank = std::all_of(chunk.begin(), chunk.end(),
                             [](const std::string& l) { return trim(l).empty(); });
    if (!blank) docs.push_back(parse_one(chunk, origin));
    chunk.clear();
  };
  for (const std::string& line : split_lines(content)) {
    if (trim(line) == "---") {
      flush();
    } else {
      chunk.push_back(line);
    }
  }
  flush();
  return docs;
}

Corpus ingest(const std::vector<std::filesystem::path>& paths, const Lexicon& lexicon) {
  std::vector<Document> docs;
  auto add_file = [&](const std::filesystem::path& file) {
    for (Document& d : parse_documents(read_file(file), file.string())) docs.push_back(std::move(d));
  };
  for (const auto& path : paths) {
    std::error_code ec;
    if (std::filesystem::is_directory(path, ec)) {
      std::vector<std::filesystem::path> files;
      for (const auto& entry : std::filesystem::directory_iterator(path)) {
        const std::string name = entry.path().filename().string();
        if (name.empty() || name[0] == '.' || !entry.is_regular_file()) continue;
        files.push_back(entry.path());
      }
      std::sort(files.begin(), files.end());
      for (const auto& f : files) add_file(f);
    } else {
      add_file(path);
    }
  }
  return Corpus(std::move(docs), lexicon);
}

std::vector<KwicLine> kwic(const Corpus& corpus, std::string_view adjective, std::size_t width) {
  std::vector<KwicLine> out;
  auto it = corpus.index().find(std::string(adjective));
  if (it == corpus.index().end()) return out;
  for (const IndexEntry& e : it->second) {
    const Sentence& s = *corpus.find_sentence(e.sentence_id);
    const Token& t = s.tokens[e.token_index];
    std::size_t lb = t.start > width ? t.start - width : 0;
    while (lb < t.start && is_continuation(s.text[lb])) ++lb;
    std::size_t re = std::min(s.text.size(), t.end + width);
    while (re > t.end && re < s.text.size() && is_continuation(s.text[re])) --re;
    out.push_back({s.id, s.text.substr(lb, t.start - lb), t.text, s.text.substr(t.end, re - t.end)});
  }
  return out;
}

const char* status_name(Status status) {
  switch (status) {
    case Status::kGold: return "GOLD";
    case Status::kDisputed: return "DISPUTED";
    case Status::kDiscarded: return "DISCARDED";
  }
  return "DISPUTED";
}

std::optional<Status> parse_status(std::string_view name) {
  for (Status s : {Status::kGold, Status::kDisputed, Status::kDiscarded}) {
    if (name == status_name(s)) return s;
  }
  return std::nullopt;
}

std::string LabeledExample::id() const { return sentence.id + "@" + std::to_string(token_index); }

const LabeledExample* LabeledDataset::find(std::string_view example_id) const {
  for (const auto& e : examples) {
    if (e.id() == example_id) return &e;
  }
  return nullptr;
}

LabeledDataset parse_dataset(std::string_view content, const Lexicon& lexicon) {
  LabeledDataset ds;
  const auto lines = split_lines(content);
  if (lines.empty()) throw parse_error(1, "missing dataset header");
  {
    const auto h = split(lines[0], '\t');
    if (h.size() != 3 || h[0] != kDatasetMagic || h[1] != "v1" || h[2].rfind("split_seed=", 0) != 0) {
      throw parse_error(1, "expected '#hype-dataset<TAB>v1<TAB>split_seed=N'");
    }
    ds.split_seed = parse_size(h[2].substr(11), 1, "split_seed");
  }
  std::set<std::string> ids;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    const std::size_t line_no = n + 1;
    const std::string& line = lines[n];
    if (line.empty()) continue;
    if (line[0] == '#') {
      ds.comments.push_back(line.substr(1));
      continue;
    }
    const auto f = split(line, '|');
    if (f.size() != 11) throw parse_error(line_no, "expected 11 '|'-separated fields");
    LabeledExample ex;
    const std::string& sentence_id = f[0];
    if (sentence_id.empty() || sentence_id == "-") throw parse_error(line_no, "empty sentence_id");
    ex.sentence = prepare_sentence(f[3], lexicon, sentence_id);
    if (f[1] != "-") {
      SourceRef src;
      src.doc_id = f[1];
      try {
        src.year = f[2] == "-" ? 0 : std::stoi(f[2]);
      } catch (const std::exception&) {
        throw parse_error(line_no, "year is not an integer: '" + f[2] + "'");
      }
      ex.sentence.source = src;
    }
    ex.adjective = f[4];
    const std::size_t start = parse_size(f[5], line_no, "char_start");
    const std::size_t end = parse_size(f[6], line_no, "char_end");
    bool found = false;
    for (TokenIndex i = 0; i < ex.sentence.tokens.size(); ++i) {
      const Token& t = ex.sentence.tokens[i];
      if (t.start == start && t.end == end) {
        ex.token_index = i;
        found = true;
        break;
      }
    }
    if (!found) throw parse_error(line_no, "offsets do not delimit a token");
    if (ex.target().lower != ex.adjective) {
      throw parse_error(line_no, "token '" + ex.target().text + "' is not '" + ex.adjective + "'");
    }
    if (f[7] != "-") {
      ex.label = parse_label(f[7]);
      if (!ex.label) throw parse_error(line_no, "unknown label '" + f[7] + "'");
    }
    try {
      ex.rationales = parse_rationales(dash_to_empty(f[8]));
    } catch (const Error& e) {
      throw parse_error(line_no, e.what());
    }
    auto status = parse_status(f[9]);
    if (!status) throw parse_error(line_no, "unknown status '" + f[9] + "'");
    ex.status = *status;
    if (f[10] != "-") ex.annotators = split(f[10], ',');
    if (ex.status == Status::kGold && !ex.label) throw parse_error(line_no, "GOLD example without label");
    if (ex.status == Status::kGold && ex.label == Label::kHype && ex.rationales.empty()) {
      throw parse_error(line_no, "GOLD HYPE example without rationales");
    }
    if (ex.label == Label::kNotHype && !ex.rationales.empty()) {
      throw parse_error(line_no, "NOT_HYPE example with rationales");
    }
    if (!ids.insert(ex.id()).second) {
      throw Error(ErrorKind::kDuplicateEntry,
                  "line " + std::to_string(line_no) + ": example " + ex.id() + " listed twice");
    }
    ds.examples.push_back(std::move(ex));
  }
  return ds;
}

std::string format_dataset(const LabeledDataset& ds) {
  std::string out = std::string(kDatasetMagic) + "\tv1\tsplit_seed=" + std::to_string(ds.split_seed) + "\n";
  for (const auto& c : ds.comments) out += "#" + c + "\n";
  for (const auto& ex : ds.examples) {
    if (ex.sentence.text.find('|') != std::string::npos || ex.sentence.text.find('\n') != std::string::npos) {
      throw Error(ErrorKind::kInvalidArgument, "example " + ex.id() + ": text contains '|' or newline");
    }
    const Token& t = ex.target();
    std::vector<std::string> f = {
        ex.sentence.id,
        ex.sentence.source ? field_or_dash(ex.sentence.source->doc_id) : "-",
        ex.sentence.source ? std::to_string(ex.sentence.source->year) : "-",
        ex.sentence.text,
        ex.adjective,
        std::to_string(t.start),
        std::to_string(t.end),
        ex.label ? label_name(*ex.label) : "-",
        field_or_dash(format_rationales(ex.rationales)),
        status_name(ex.status),
        field_or_dash(join(ex.annotators, ","))};
    out += join(f, "|") + "\n";
  }
  return out;
}

LabeledDataset load_dataset(const std::filesystem::path& path, const Lexicon& lexicon) {
  return parse_dataset(read_file(path), lexicon);
}

void save_dataset(const LabeledDataset& dataset, const std::filesystem::path& path) {
  write_file(path, format_dataset(dataset));
}

std::string dataset_fingerprint(const LabeledDataset& dataset) {
  return sha256_hex(format_dataset(dataset));
}

LabeledDataset sample(const Corpus& corpus, const Lexicon& lexicon, std::size_t per_adjective,
                      std::uint64_t seed) {
  if (per_adjective == 0) throw Error(ErrorKind::kInvalidArgument, "per_adjective must be >= 1");
  LabeledDataset ds;
  ds.split_seed = seed;
  for (const auto& entry : lexicon.entries()) {
    auto it = corpus.index().find(entry.adjective);
    if (it == corpus.index().end()) continue;
    const auto& occ = it->second;
    std::vector<std::size_t> chosen(occ.size());
    for (std::size_t i = 0; i < chosen.size(); ++i) chosen[i] = i;
    if (occ.size() > per_adjective) {
      Rng rng(seed ^ fnv1a(entry.adjective));
      for (std::size_t i = 0; i < per_adjective; ++i) {
        std::swap(chosen[i], chosen[i + rng.below(chosen.size() - i)]);
      }
      chosen.resize(per_adjective);
      std::sort(chosen.begin(), chosen.end());
    }
    for (std::size_t i : chosen) {
      LabeledExample ex;
      ex.sentence = *corpus.find_sentence(occ[i].sentence_id);
      ex.adjective = entry.adjective;
      ex.token_index = occ[i].token_index;
      ex.status = Status::kDisputed;
      ds.examples.push_back(std::move(ex));
    }
  }
  return ds;
}

std::map<Label, std::size_t> test_allocation(const std::map<Label, std::size_t>& counts,
                                             double ratio) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw Error(ErrorKind::kInvalidArgument, "ratio must be in (0, 1)");
  std::size_t n = 0;
  for (const auto& [label, c] : counts) n += c;
  std::map<Label, std::size_t> alloc;
  if (n == 0) return alloc;
  const auto n_test = std::min<std::size_t>(
      n, static_cast<std::size_t>(std::ceil(static_cast<double>(n) * (1.0 - ratio) - 1e-9)));
  std::vector<std::pair<double, Label>> remainders;
  std::size_t assigned = 0;
  for (const auto& [label, c] : counts) {
    const double exact = static_cast<double>(n_test) * static_cast<double>(c) / static_cast<double>(n);
    const auto base = static_cast<std::size_t>(std::floor(exact));
    alloc[label] = base;
    assigned += base;
    remainders.emplace_back(exact - static_cast<double>(base), label);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first + 1e-12; });
  for (std::size_t i = 0; assigned < n_test; i = (i + 1) % remainders.size()) {
    const Label label = remainders[i].second;
    if (alloc[label] < counts.at(label)) {
      ++alloc[label];
      ++assigned;
    }
  }
  return alloc;
}

std::vector<Label> labels_of(const std::vector<LabeledExample>& examples) {
  std::vector<Label> out;
  out.reserve(examples.size());
  for (const auto& e : examples) {
    if (!e.label) throw Error(ErrorKind::kInvalidArgument, "example " + e.id() + " has no label");
    out.push_back(*e.label);
  }
  return out;
}

Split split(const LabeledDataset& dataset, double ratio, std::uint64_t seed) {
  std::vector<const LabeledExample*> pool;
  for (const auto& e : dataset.examples) {
    if (e.status == Status::kDiscarded) continue;
    if (e.status != Status::kGold || !e.label) {
      throw Error(ErrorKind::kInvalidArgument, "example " + e.id() + " is not GOLD");
    }
    pool.push_back(&e);
  }
  std::map<Label, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < pool.size(); ++i) by_class[*pool[i]->label].push_back(i);
  std::map<Label, std::size_t> counts;
  for (const auto& [label, idx] : by_class) counts[label] = idx.size();
  const auto alloc = test_allocation(counts, ratio);

  Rng rng(seed);
  std::vector<bool> in_test(pool.size(), false);
  for (auto& [label, idx] : by_class) {
    rng.shuffle(idx);
    for (std::size_t k = 0; k < alloc.at(label); ++k) in_test[idx[k]] = true;
  }
  Split out;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    (in_test[i] ? out.test : out.development).push_back(*pool[i]);
  }
  return out;
}

std::vector<Fold> stratified_kfold(const std::vector<Label>& labels, std::size_t k,
                                   std::uint64_t seed) {
  if (k < 2) throw Error(ErrorKind::kInvalidArgument, "k must be >= 2");
  std::map<Label, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
  for (const auto& [label, idx] : by_class) {
    if (idx.size() < k) {
      throw Error(ErrorKind::kInsufficientClass, std::string(label_name(label)) + " has " +
                                                     std::to_string(idx.size()) + " examples, " +
                                                     std::to_string(k) + " folds requested");
    }
  }
  if (by_class.size() < 2) {
    const Label missing = by_class.count(Label::kHype) ? Label::kNotHype : Label::kHype;
    throw Error(ErrorKind::kInsufficientClass,
                std::string(label_name(missing)) + " has 0 examples, " + std::to_string(k) +
                    " folds requested");
  }
  std::vector<std::size_t> fold_of(labels.size());
  Rng rng(seed);
  std::size_t next = 0;
  for (auto& [label, idx] : by_class) {
    rng.shuffle(idx);
    for (std::size_t i : idx) fold_of[i] = next++ % k;
  }
  std::vector<Fold> folds(k);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (std::size_t f = 0; f < k; ++f) (f == fold_of[i] ? folds[f].test : folds[f].train).push_back(i);
  }
  return folds;
}

std::vector<Fold> stratified_kfold(const std::vector<LabeledExample>& examples, std::size_t k,
                                   std::uint64_t seed) {
  return stratified_kfold(labels_of(examples), k, seed);
}

}  // namespace hype
