#include "hype/text.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <unordered_map>

#include "hype/error.hpp"

namespace hype {
namespace {

struct CodePoint {
  char32_t value = 0;
  std::size_t length = 1;
};

// Malformed bytes decode as U+FFFD with length 1 so offsets always advance.
CodePoint decode_at(std::string_view s, std::size_t i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) return {b0, 1};
  auto cont = [&](std::size_t k) -> int {
    if (i + k >= s.size()) return -1;
    const auto b = static_cast<unsigned char>(s[i + k]);
    return (b & 0xC0) == 0x80 ? (b & 0x3F) : -1;
  };
  if ((b0 & 0xE0) == 0xC0) {
    const int c1 = cont(1);
    if (c1 >= 0) return {static_cast<char32_t>(((b0 & 0x1F) << 6) | c1), 2};
  } else if ((b0 & 0xF0) == 0xE0) {
    const int c1 = cont(1), c2 = cont(2);
    if (c1 >= 0 && c2 >= 0)
      return {static_cast<char32_t>(((b0 & 0x0F) << 12) | (c1 << 6) | c2), 3};
  } else if ((b0 & 0xF8) == 0xF0) {
    const int c1 = cont(1), c2 = cont(2), c3 = cont(3);
    if (c1 >= 0 && c2 >= 0 && c3 >= 0)
      return {static_cast<char32_t>(((b0 & 0x07) << 18) | (c1 << 12) | (c2 << 6) | c3), 4};
  }
  return {0xFFFD, 1};
}

void encode(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

char32_t lower_cp(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 32;
  if (cp < 0x80) return cp;
  if ((cp >= 0xC0 && cp <= 0xDE && cp != 0xD7)) return cp + 32;
  if (cp >= 0x100 && cp <= 0x17F) {
    if (cp == 0x130) return 'i';
    if ((cp >= 0x139 && cp <= 0x148) || (cp >= 0x179 && cp <= 0x17E)) return (cp & 1) ? cp + 1 : cp;
    if (cp == 0x178) return 0xFF;
    return (cp & 1) ? cp : cp + 1;
  }
  if (cp >= 0x391 && cp <= 0x3AB && cp != 0x3A2) return cp + 32;
  if (cp >= 0x410 && cp <= 0x42F) return cp + 32;
  if (cp >= 0x400 && cp <= 0x40F) return cp + 80;
  return cp;
}

bool is_space_cp(char32_t cp) {
  return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' || cp == '\v' ||
         cp == 0xA0 || (cp >= 0x2000 && cp <= 0x200B) || cp == 0x202F || cp == 0x205F ||
         cp == 0x3000 || cp == 0xFEFF;
}

bool is_ascii_alnum(char32_t cp) {
  return (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
}

bool is_digit_cp(char32_t cp) { return cp >= '0' && cp <= '9'; }

// Non-ASCII code points count as word characters unless they sit in the
// Latin-1 symbol range or the general/supplemental punctuation blocks.
bool is_word_cp(char32_t cp) {
  if (cp < 0x80) return is_ascii_alnum(cp);
  if (is_space_cp(cp)) return false;
  if (cp >= 0xA1 && cp <= 0xBF) return false;
  if (cp == 0xD7 || cp == 0xF7) return false;
  if (cp >= 0x2010 && cp <= 0x2BFF) return false;
  if (cp >= 0x3000 && cp <= 0x303F) return false;
  if (cp == 0xFFFD) return false;
  return true;
}

bool is_hyphen_cp(char32_t cp) { return cp == '-' || cp == 0x2010 || cp == 0x2011; }
bool is_apostrophe_cp(char32_t cp) { return cp == '\'' || cp == 0x2019; }

bool is_upper_start(std::string_view text) {
  if (text.empty()) return false;
  const CodePoint cp = decode_at(text, 0);
  return lower_cp(cp.value) != cp.value;
}

using WordSet = std::unordered_set<std::string>;

const WordSet& copulas() {
  static const WordSet s = {"is", "are", "was", "were", "be", "been", "being",
                            "remains", "remain", "remained", "am"};
  return s;
}

const WordSet& determiners() {
  static const WordSet s = {"the", "a", "an", "this", "that", "these", "those", "some",
                            "any", "each", "every", "no", "all", "both", "another", "such",
                            "either", "neither", "many", "much", "few"};
  return s;
}

// Tagged OTHER but, like determiners, they open a noun phrase.
const WordSet& possessives() {
  static const WordSet s = {"our", "their", "its", "his", "her", "my", "your", "whose"};
  return s;
}

const WordSet& auxiliaries() {
  static const WordSet s = {"will", "would", "can", "could", "may", "might", "must", "shall",
                            "should", "do", "does", "did", "have", "has", "had", "having"};
  return s;
}

bool is_modal(std::string_view w) {
  return w == "will" || w == "would" || w == "can" || w == "could" || w == "may" ||
         w == "might" || w == "must" || w == "shall" || w == "should";
}

const WordSet& conjunctions() {
  static const WordSet s = {"and", "or", "nor", "but", "&"};
  return s;
}

const WordSet& adverbs() {
  static const WordSet s = {
      "truly", "highly", "completely", "extremely", "exceptionally", "remarkably", "very",
      "not", "also", "quite", "rather", "particularly", "especially", "fundamentally",
      "entirely", "totally", "really", "most", "more", "so", "too", "well", "yet", "still",
      "already", "often", "never", "always", "here", "thus", "therefore", "however", "hence",
      "even", "only", "just", "now", "then", "again", "further", "furthermore", "moreover",
      "together", "almost", "less", "least", "perhaps", "indeed", "soon", "ever",
      "sometimes", "somewhat", "nevertheless", "nonetheless", "first-ever", "once",
      "twice", "far", "away", "ago", "instead", "otherwise", "likewise"};
  return s;
}

// Function words that must never be reached by the suffix or context rules.
const WordSet& function_words() {
  static const WordSet s = {
      "to", "of", "in", "on", "at", "by", "for", "with", "from", "into", "onto", "upon",
      "about", "above", "across", "after", "against", "along", "among", "around", "before",
      "behind", "below", "beneath", "beside", "between", "beyond", "during", "except",
      "inside", "near", "off", "out", "outside", "over", "past", "through", "throughout",
      "toward", "towards", "under", "underneath", "until", "up", "via", "within", "without",
      "because", "since", "as", "than", "if", "whether", "while", "whereas", "although",
      "though", "unless", "when", "where", "which", "who", "whom", "what", "how", "why",
      "i", "me", "we", "us", "you", "he", "him", "she", "it", "they", "them", "itself",
      "themselves", "ourselves", "one", "there", "et", "al", "etc", "ie", "eg", "i.e", "e.g", "per", "like", "whereby",
      "ours", "theirs", "yours", "mine", "whom", "whoever", "wherein"};
  return s;
}

const WordSet& number_words() {
  static const WordSet s = {"two", "three", "four", "five", "six", "seven", "eight", "nine",
                            "ten", "eleven", "twelve", "thirteen", "fourteen", "fifteen",
                            "twenty", "thirty", "forty", "fifty", "hundred", "thousand",
                            "million", "billion", "dozen", "zero"};
  return s;
}

const WordSet& noun_lexicon() {
  static const WordSet s = {
      "study", "approach", "method", "gene", "tool", "opportunity", "leader", "way",
      "technology", "research", "project", "aim", "step", "phase", "year", "week", "time",
      "trimester", "day", "month", "decade", "hypothesis", "model", "system", "data",
      "result", "finding", "work", "team", "program", "center", "centre", "faculty",
      "record", "track", "funding", "mentoring", "training", "trainee", "applicant",
      "scientist", "investigator", "student", "patient", "cell", "tissue", "disease",
      "cancer", "therapy", "treatment", "drug", "protein", "mouse", "mice", "animal",
      "strategy", "framework", "platform", "design", "idea", "concept", "field", "area",
      "problem", "question", "goal", "objective", "outcome", "effect", "impact", "risk",
      "role", "process", "pathway", "target", "network", "structure", "function",
      "mechanism", "level", "rate", "risk", "health", "care", "threat", "curriculum",
      "thinking", "line", "lines", "insight", "evidence", "trial", "sample", "population",
      "group", "child", "children", "woman", "women", "man", "men", "people", "meeting",
      "session", "conference", "publication", "paper", "article", "technique", "assay",
      "compound", "agent", "class", "type", "form", "set", "range", "number", "series",
      "view", "understanding", "knowledge", "experience", "expertise", "resource",
      "environment", "community", "institution", "university", "school", "department",
      "lab", "laboratory", "core", "facility", "infrastructure", "software", "device",
      "imaging", "sequencing", "signal", "signaling", "regulation", "expression",
      "response", "interaction", "interventions", "intervention", "messaging", "text",
      "reach", "cessation", "origin", "centriole", "purpose", "development", "efforts",
      "effort", "use", "focus", "part", "basis", "need", "gap", "challenge", "solution",
      "advance", "discovery", "innovation", "breakthrough", "paradigm", "direction",
      "perspective", "combination", "collection", "source", "target", "host", "virus",
      "bacteria", "infection", "vaccine", "brain", "heart", "lung", "liver", "blood",
      "body", "muscle", "bone", "neuron", "receptor", "enzyme", "molecule", "genome",
      "dna", "rna", "light", "water", "food", "diet", "exercise", "behavior", "behaviour",
      "stress", "age", "sex", "gender", "race", "family", "assembly", "anomaly", "supply",
      "series", "analysis", "basis", "crisis", "thesis", "diagnosis", "prognosis",
      "synthesis", "emphasis", "hypotheses", "analyses", "acid", "acids", "hemostasis",
      "profile", "scale", "class", "example", "case", "context", "history", "future",
      "past", "present", "access", "success", "progress", "address", "process", "status",
      "focus", "stimulus", "nucleus", "fetus", "consensus", "corpus", "census", "virus",
      "campus", "bonus", "business", "issue", "tumor", "tumour", "region", "site", "state",
      "stage", "phenotype", "genotype", "variant", "mutation", "marker", "biomarker",
      "sensor", "probe", "image", "map", "measure", "score", "test", "tests",
      "experiment", "observation", "factor", "feature", "component", "element",
      "material", "clinic", "hospital", "individual", "potential", "proposal",
      "initiative", "alternative", "derivative", "representative", "objective",
      "topic", "logic", "music", "chemical", "professional", "principal",
      "journal", "manual", "rival", "survival", "arrival", "approval", "removal",
      "referral", "interval", "terminal", "capital", "portal", "metal", "total",
      "trial", "mammal", "fossil", "pupil", "council", "detail", "reason", "rationale",
      "track", "mentor", "scholar", "career", "fellow", "fellowship", "award", "grant",
      "fund", "money", "cost", "price", "value", "quality", "rigor", "scale", "aspect",
      "hype", "language", "word", "sentence", "term", "phrase", "law", "order", "rule",
      "policy", "practice", "clinician", "physician", "nurse", "partner", "partnership",
      "company", "industry", "market", "product", "service", "participant", "growth",
      "baseline", "accuracy", "pressure", "version", "burden", "kidney", "regression",
      "generation", "health", "sleep", "cohort", "subject", "control", "dose", "week",
      "visit", "survey", "interview", "site", "network", "resolution", "quantity",
      "difference", "change", "increase", "decrease", "loss", "gain", "method", "aims",
      "question", "answer", "report", "review", "database", "dataset", "algorithm",
      "code", "rat", "rats", "fish", "plant", "plants", "soil", "climate", "energy",
      "policy", "country", "city", "world", "nation", "region", "land", "home", "school",
      "student", "parent", "adult", "youth", "infant", "adolescent", "mother", "father",
      "pain", "injury", "death", "mortality", "morbidity", "incidence", "prevalence",
      "mg", "kg", "ml", "dose", "week", "weeks", "ratio", "odds", "mean", "median",
      "variable", "level", "degree", "extent", "amount", "period", "duration", "end",
      "start", "beginning", "side", "point", "part", "piece", "unit", "item", "tool",
      "toolkit", "kit", "resource", "pipeline", "workflow", "leadership", "mission"};
  return s;
}

const WordSet& verb_lexicon() {
  static const WordSet s = {
      "develop", "developed", "discover", "discovered", "use", "uses", "used", "using",
      "test", "tested", "address", "aid", "emphasizes", "emphasize", "increase",
      "increases", "treat", "treats", "identified", "identify", "examine", "examines",
      "achieve", "achieves", "attracts", "attract", "represent", "represents", "provide",
      "provides", "propose", "proposes", "investigate", "investigates", "determine",
      "determines", "establish", "establishes", "enable", "enables", "allow", "allows",
      "show", "shows", "shown", "demonstrate", "demonstrates", "reveal", "reveals",
      "focused", "focuses", "create", "creates", "build", "builds", "built", "combine",
      "combines", "apply", "applies", "include", "includes", "involve", "involves",
      "explore", "explores", "understand", "elucidate", "characterize", "define",
      "defines", "generate", "generates", "produce", "produces", "lead", "leads", "led",
      "make", "makes", "made", "take", "takes", "taken", "give", "gives", "given",
      "become", "becomes", "became", "seem", "seems", "appear", "appears", "offer",
      "offers", "support", "supports", "help", "helps", "improve", "improves", "reduce",
      "reduces", "prevent", "prevents", "promote", "promotes", "require", "requires",
      "remain", "find", "finds", "found", "know", "known", "see", "seen", "get", "go",
      "come", "hope", "expect", "plan", "aims", "seeks", "seek", "serve", "serves",
      "train", "trains", "study", "studies", "examines", "measure", "measures", "predict",
      "predicts", "target", "targets", "exploit", "exploits", "leverage", "leverages",
      "bring", "brings", "open", "opens", "transform", "transforms", "advance",
      "advances", "facilitate", "facilitates", "integrate", "integrates", "employ",
      "employs", "extend", "extends", "apply", "mentor", "conduct", "conducts",
      "perform", "performs", "assess", "assesses", "evaluate", "evaluates", "compare",
      "compares", "hold", "holds", "held", "contain", "contains", "focus", "suggest",
      "indicate", "interact", "recruit", "receive", "regulate", "analyze", "analyse",
      "understood", "thought", "told", "kept", "left", "met", "began", "begun", "brought",
      "chosen", "drawn", "driven", "fallen", "felt", "gone", "grown", "hidden", "lost",
      "meant", "paid", "put", "read", "run", "said", "sent", "set", "spent", "stood",
      "taught", "won", "written", "underlie", "underlies", "underlying", "enroll",
      "collect", "obtain", "observe", "report", "describe", "discuss", "present",
      "detect", "quantify", "monitor", "explain", "inform", "guide", "reach", "link",
      "map", "model", "address", "ensure", "maintain", "enhance", "expand", "strengthen",
      "accelerate", "deliver", "disseminate", "implement", "adapt", "adopt", "optimize",
      "validate", "confirm", "refine", "select", "rank", "classify", "label", "annotate",
      "train", "learn", "teach", "forecast", "simulate", "measure", "affect", "cause",
      "alter", "modify", "limit", "inhibit", "block", "activate", "express", "encode",
      "bind", "form", "differ", "depend", "occur", "exist", "emerge", "arise", "result",
      "contribute", "relate", "respond", "interact", "function", "act", "work", "decline"};
  return s;
}

const WordSet& adjective_lexicon() {
  static const WordSet s = {
      "new", "high", "low", "large", "small", "critical", "independent", "previous",
      "significant", "diverse", "important", "different", "current", "recent", "early",
      "key", "major", "local", "regional", "worldwide", "global", "other", "same", "many",
      "several", "various", "best", "better", "good", "great", "greater", "higher",
      "lower", "larger", "smaller", "long", "short", "broad", "strong", "rich",
      "novel", "robust", "excellent", "outstanding", "superb", "rigorous", "complex",
      "common", "rare", "human", "clinical", "basic", "young", "old", "able", "unable",
      "likely", "unlikely", "available", "specific", "unmet", "daunting", "second",
      "third", "last", "next", "final", "whole", "full", "prior", "multiple", "single",
      "particular", "potential", "proposed", "open", "free", "real", "true", "false",
      "daily", "costly", "timely", "friendly", "elderly", "untimely", "deadly",
      "fatty", "essential", "high-risk", "high-impact", "high-profile", "state-of-the-art",
      "cutting-edge", "world-class", "zygotic", "mammalian", "translational", "collaborative",
      "transformative", "exceptional", "prestigious", "interesting", "remarkable",
      "comprehensive", "interdisciplinary", "generalizable", "fundamental"};
  return s;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool has_alnum(std::string_view s) {
  for (std::size_t i = 0; i < s.size();) {
    const CodePoint cp = decode_at(s, i);
    if (is_word_cp(cp.value)) return true;
    i += cp.length;
  }
  return false;
}

bool is_number_text(std::string_view s) {
  bool digit = false;
  for (char c : s) {
    if (c >= '0' && c <= '9') {
      digit = true;
    } else if (c != '.' && c != ',' && c != '-') {
      return false;
    }
  }
  return digit;
}

std::optional<std::string> singular(std::string_view w) {
  if (w.size() > 4 && ends_with(w, "ies")) return std::string(w.substr(0, w.size() - 3)) + "y";
  if (w.size() > 3 && ends_with(w, "es")) return std::string(w.substr(0, w.size() - 2));
  if (w.size() > 2 && ends_with(w, "s") && !ends_with(w, "ss"))
    return std::string(w.substr(0, w.size() - 1));
  return std::nullopt;
}

bool looks_plural(std::string_view w) {
  return w.size() > 3 && ends_with(w, "s") && !ends_with(w, "ss") && !ends_with(w, "us") &&
         !ends_with(w, "is") && !ends_with(w, "ous");
}

bool is_verb_form(std::string_view w) {
  const auto& verbs = verb_lexicon();
  auto base = [&](std::size_t cut, std::string_view add = {}) {
    return w.size() > cut + 2 && verbs.count(std::string(w.substr(0, w.size() - cut)) + std::string(add));
  };
  if (ends_with(w, "ies") && base(3, "y")) return true;
  if (ends_with(w, "ied") && base(3, "y")) return true;
  if (ends_with(w, "es") && base(2)) return true;
  if (ends_with(w, "s") && base(1)) return true;
  if (ends_with(w, "ed") && (base(2) || base(1))) return true;
  if (ends_with(w, "ing") && (base(3) || base(3, "e"))) return true;
  return false;
}

enum class Lexical { kTagged, kFunction, kUnknown };

// First-pass tag from the word alone. kUnknown words may still be promoted
// to NOUN by left context.
std::pair<Tag, Lexical> lexical_tag(const Token& token,
                                    const std::unordered_set<std::string>& forced) {
  const std::string& w = token.lower;
  if (!has_alnum(token.text)) return {Tag::kPunct, Lexical::kTagged};
  if (is_number_text(w) || number_words().count(w)) return {Tag::kNum, Lexical::kTagged};
  if (forced.count(w)) return {Tag::kAdj, Lexical::kTagged};
  if (copulas().count(w)) return {Tag::kCopula, Lexical::kTagged};
  if (determiners().count(w)) return {Tag::kDet, Lexical::kTagged};
  if (conjunctions().count(w)) return {Tag::kConj, Lexical::kTagged};
  if (adverbs().count(w)) return {Tag::kAdv, Lexical::kTagged};
  if (auxiliaries().count(w)) return {Tag::kVerb, Lexical::kTagged};
  if (function_words().count(w) || possessives().count(w)) return {Tag::kOther, Lexical::kFunction};
  if (adjective_lexicon().count(w)) return {Tag::kAdj, Lexical::kTagged};
  if (noun_lexicon().count(w)) return {Tag::kNoun, Lexical::kTagged};
  if (verb_lexicon().count(w)) return {Tag::kVerb, Lexical::kTagged};
  if (auto sg = singular(w); sg && noun_lexicon().count(*sg)) return {Tag::kNoun, Lexical::kTagged};
  if (is_verb_form(w)) return {Tag::kVerb, Lexical::kTagged};

  if (w.size() > 3 && ends_with(w, "ly")) return {Tag::kAdv, Lexical::kTagged};

  static constexpr std::array<std::string_view, 14> kNounSuffixes = {
      "tion", "sion", "ment", "ness", "ity", "ism", "ogy", "ance", "ence", "ship",
      "ure", "ics", "ist", "hood"};
  for (auto suffix : kNounSuffixes) {
    if (w.size() > suffix.size() + 2 && (ends_with(w, suffix) ||
                                         (looks_plural(w) && ends_with(w.substr(0, w.size() - 1), suffix))))
      return {Tag::kNoun, Lexical::kTagged};
  }

  static constexpr std::array<std::string_view, 8> kAdjSuffixes = {
      "ive", "ous", "al", "ic", "able", "ible", "ful", "less"};
  for (auto suffix : kAdjSuffixes) {
    if (w.size() > suffix.size() + 2 && ends_with(w, suffix)) return {Tag::kAdj, Lexical::kTagged};
  }

  if (w.size() > 4 && (ends_with(w, "er") || ends_with(w, "ers") || ends_with(w, "or") ||
                       ends_with(w, "ors")))
    return {Tag::kNoun, Lexical::kTagged};
  if (w.size() > 4 && ends_with(w, "ed")) return {Tag::kVerb, Lexical::kTagged};
  if (w.size() > 5 && ends_with(w, "ing")) return {Tag::kVerb, Lexical::kTagged};
  if (w.size() > 4 && (ends_with(w, "ize") || ends_with(w, "izes") || ends_with(w, "ise") ||
                       ends_with(w, "ate") || ends_with(w, "ates")))
    return {Tag::kVerb, Lexical::kTagged};
  return {Tag::kOther, Lexical::kUnknown};
}

std::size_t scan_word(std::string_view text, std::size_t i) {
  std::size_t segment_start = i;
  bool prev_digit = false;
  while (i < text.size()) {
    const CodePoint cp = decode_at(text, i);
    if (is_word_cp(cp.value)) {
      prev_digit = is_digit_cp(cp.value);
      i += cp.length;
      continue;
    }
    const std::size_t next = i + cp.length;
    if (next >= text.size()) break;
    const CodePoint after = decode_at(text, next);
    if (!is_word_cp(after.value)) break;
    if (is_hyphen_cp(cp.value) || is_apostrophe_cp(cp.value)) {
      i = next;
      continue;
    }
    if ((cp.value == '.' || cp.value == ',') && prev_digit && is_digit_cp(after.value)) {
      i = next;
      continue;
    }
    // Single-letter segments around a dot: "e.g", "i.e", "U.S".
    if (cp.value == '.' && !prev_digit && i - segment_start == 1) {
      std::size_t look = next + after.length;
      const bool single_after =
          look >= text.size() || !is_word_cp(decode_at(text, look).value);
      if (single_after) {
        i = next;
        segment_start = next;
        continue;
      }
    }
    break;
  }
  return i;
}

bool promote_context(Tag left) {
  return left == Tag::kDet || left == Tag::kAdj || left == Tag::kNum;
}

const WordSet& abbreviations() {
  static const WordSet s = {"e.g", "i.e", "etc", "inc", "dr", "mr", "mrs", "ms", "prof",
                            "al", "vs", "fig", "figs", "no", "approx", "ca", "st", "jr",
                            "sr", "u.s", "dept", "univ", "ltd", "co", "corp", "eq", "ref",
                            "vol", "ph.d", "m.d", "cf"};
  return s;
}

}  // namespace

const char* tag_name(Tag tag) {
  switch (tag) {
    case Tag::kAdj: return "ADJ";
    case Tag::kAdv: return "ADV";
    case Tag::kNoun: return "NOUN";
    case Tag::kVerb: return "VERB";
    case Tag::kCopula: return "COPULA";
    case Tag::kDet: return "DET";
    case Tag::kConj: return "CONJ";
    case Tag::kPunct: return "PUNCT";
    case Tag::kNum: return "NUM";
    case Tag::kOther: return "OTHER";
  }
  return "OTHER";
}

std::optional<Tag> parse_tag(std::string_view name) {
  static const std::unordered_map<std::string_view, Tag> kTags = {
      {"ADJ", Tag::kAdj},     {"ADV", Tag::kAdv},   {"NOUN", Tag::kNoun},
      {"VERB", Tag::kVerb},   {"COPULA", Tag::kCopula}, {"DET", Tag::kDet},
      {"CONJ", Tag::kConj},   {"PUNCT", Tag::kPunct}, {"NUM", Tag::kNum},
      {"OTHER", Tag::kOther}};
  auto it = kTags.find(name);
  if (it == kTags.end()) return std::nullopt;
  return it->second;
}

const char* position_name(Position position) {
  switch (position) {
    case Position::kAttributive: return "ATTRIBUTIVE";
    case Position::kPredicative: return "PREDICATIVE";
    case Position::kUnknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

std::string casefold(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    const CodePoint cp = decode_at(text, i);
    if (cp.value == 0xFFFD && cp.length == 1 && static_cast<unsigned char>(text[i]) >= 0x80) {
      out.push_back(text[i]);  // keep malformed bytes untouched
    } else {
      encode(lower_cp(cp.value), out);
    }
    i += cp.length;
  }
  return out;
}

bool is_capitalized(const Token& token) {
  if (token.text == "I") return false;
  return is_upper_start(token.text);
}

bool is_punct_token(std::string_view text) { return !has_alnum(text); }

Sentence tokenize(std::string_view text) {
  Sentence sentence;
  sentence.text = std::string(text);
  std::size_t i = 0;
  bool seen_word = false;
  while (i < text.size()) {
    const CodePoint cp = decode_at(text, i);
    if (is_space_cp(cp.value)) {
      i += cp.length;
      continue;
    }
    Token token;
    token.start = i;
    token.end = is_word_cp(cp.value) ? scan_word(text, i) : i + cp.length;
    token.text = std::string(text.substr(token.start, token.end - token.start));
    token.lower = casefold(token.text);
    if (is_word_cp(cp.value) && !seen_word) {
      token.sentence_initial = true;
      seen_word = true;
    }
    i = token.end;
    sentence.tokens.push_back(std::move(token));
  }
  return sentence;
}

Sentence tag(const Sentence& sentence, const std::unordered_set<std::string>& forced_adjectives) {
  Sentence out = sentence;
  std::vector<Lexical> kinds(out.tokens.size());
  for (std::size_t i = 0; i < out.tokens.size(); ++i) {
    auto [t, kind] = lexical_tag(out.tokens[i], forced_adjectives);
    out.tokens[i].tag = t;
    kinds[i] = kind;
  }
  // Hyphenated compounds directly before a noun are premodifiers.
  for (std::size_t i = 0; i + 1 < out.tokens.size(); ++i) {
    if (kinds[i] == Lexical::kUnknown && out.tokens[i].lower.find('-') != std::string::npos &&
        out.tokens[i + 1].tag == Tag::kNoun) {
      out.tokens[i].tag = Tag::kAdj;
      kinds[i] = Lexical::kTagged;
    }
  }
  // The word after a modal (adverbs skipped) is a verb unless it is a copula.
  for (std::size_t i = 0; i < out.tokens.size(); ++i) {
    if (!is_modal(out.tokens[i].lower)) continue;
    std::size_t k = i + 1;
    while (k < out.tokens.size() && out.tokens[k].tag == Tag::kAdv) ++k;
    if (k < out.tokens.size() && !forced_adjectives.count(out.tokens[k].lower) &&
        (out.tokens[k].tag == Tag::kNoun || kinds[k] == Lexical::kUnknown)) {
      out.tokens[k].tag = Tag::kVerb;
      kinds[k] = Lexical::kTagged;
    }
  }
  for (std::size_t i = 0; i < out.tokens.size(); ++i) {
    if (kinds[i] != Lexical::kUnknown) continue;
    const bool after_modifier =
        i > 0 && (promote_context(out.tokens[i - 1].tag) || possessives().count(out.tokens[i - 1].lower));
    const bool after_verb_plural = i > 0 && out.tokens[i - 1].tag == Tag::kVerb &&
                                   looks_plural(out.tokens[i].lower);
    if (after_modifier || after_verb_plural || is_capitalized(out.tokens[i])) {
      out.tokens[i].tag = Tag::kNoun;
    }
  }
  return out;
}

namespace {

bool is_comma(const Token& t) { return t.text == "," || t.text == ";"; }
bool is_link(const Token& t) { return t.tag == Tag::kConj || is_comma(t); }

// Two ADJ tokens are directly coordinated when the material between them is
// CONJ/comma tokens plus at most one other token that is not a NOUN, ADJ,
// COPULA or sentence-breaking punctuation, with at least one link present.
bool linked(const Sentence& s, TokenIndex left, TokenIndex right) {
  int links = 0;
  int others = 0;
  for (TokenIndex k = left + 1; k < right; ++k) {
    const Token& t = s.tokens[k];
    if (is_link(t)) {
      ++links;
    } else if (t.tag == Tag::kNoun || t.tag == Tag::kAdj || t.tag == Tag::kCopula ||
               t.tag == Tag::kPunct || t.tag == Tag::kVerb) {
      return false;
    } else {
      ++others;
    }
  }
  return links >= 1 && others <= 1;
}

std::optional<TokenIndex> next_adj(const Sentence& s, TokenIndex from) {
  for (TokenIndex k = from + 1; k < s.tokens.size(); ++k) {
    if (s.tokens[k].tag == Tag::kAdj) return k;
    if (s.tokens[k].tag == Tag::kNoun) return std::nullopt;
  }
  return std::nullopt;
}

std::optional<TokenIndex> prev_adj(const Sentence& s, TokenIndex from) {
  for (TokenIndex k = from; k-- > 0;) {
    if (s.tokens[k].tag == Tag::kAdj) return k;
    if (s.tokens[k].tag == Tag::kNoun) return std::nullopt;
  }
  return std::nullopt;
}

bool introduces_clause(const Sentence& s, TokenIndex as_index) {
  const auto& toks = s.tokens;
  if (as_index > 0 && (toks[as_index - 1].lower == "such" || toks[as_index - 1].lower == "well"))
    return false;
  if (as_index + 1 < toks.size() && toks[as_index + 1].lower == "well") return false;
  for (TokenIndex k = as_index + 1; k < toks.size() && k <= as_index + 4; ++k) {
    if (toks[k].tag == Tag::kVerb || toks[k].tag == Tag::kCopula) return true;
    if (toks[k].tag == Tag::kPunct) return false;
  }
  return false;
}

}  // namespace

SyntacticContext analyze_context(const Sentence& sentence, TokenIndex target) {
  if (target >= sentence.tokens.size() || sentence.tokens[target].tag != Tag::kAdj) {
    throw Error(ErrorKind::kTargetNotAdjective,
                "token " + std::to_string(target) + " is not tagged ADJ");
  }
  const auto& toks = sentence.tokens;
  SyntacticContext ctx;

  for (TokenIndex k = target + 1; k < toks.size() && k <= target + 2; ++k) {
    if (toks[k].tag == Tag::kPunct || toks[k].tag == Tag::kCopula) break;
    if (toks[k].tag == Tag::kNoun) {
      ctx.head_noun = k;
      break;
    }
  }
  if (ctx.head_noun) {
    ctx.position = Position::kAttributive;
  } else {
    for (TokenIndex back = 1; back <= 3 && back <= target; ++back) {
      const Token& t = toks[target - back];
      if (t.tag == Tag::kNoun) break;
      if (t.tag == Tag::kCopula) {
        ctx.position = Position::kPredicative;
        break;
      }
    }
  }

  for (TokenIndex k = target; k-- > 0;) {
    if (toks[k].tag != Tag::kAdv) break;
    ctx.premodifiers.insert(ctx.premodifiers.begin(), k);
  }

  // Coordination chain: walk left and right through directly linked ADJs.
  std::vector<TokenIndex> left_side;
  for (TokenIndex cur = target;;) {
    auto p = prev_adj(sentence, cur);
    if (!p || !linked(sentence, *p, cur)) break;
    left_side.push_back(*p);
    cur = *p;
  }
  std::reverse(left_side.begin(), left_side.end());
  ctx.coordinated_adjectives = left_side;
  for (TokenIndex cur = target;;) {
    auto n = next_adj(sentence, cur);
    if (!n || !linked(sentence, cur, *n)) break;
    ctx.coordinated_adjectives.push_back(*n);
    cur = *n;
  }

  const Token& self = toks[target];
  if (is_capitalized(self) && !self.sentence_initial) ctx.in_proper_noun = true;
  for (TokenIndex k : {target - 1, target + 1}) {
    if (k >= toks.size()) continue;  // target - 1 wraps when target == 0
    if (is_capitalized(toks[k]) && !toks[k].sentence_initial) ctx.in_proper_noun = true;
  }

  for (TokenIndex k = target + 1; k < toks.size(); ++k) {
    const std::string& w = toks[k].lower;
    if (w == "because" || w == "since" || (w == "as" && introduces_clause(sentence, k))) {
      ctx.justification_clause = true;
      break;
    }
  }
  return ctx;
}

std::string normalize_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (std::size_t i = 0; i < text.size();) {
    const CodePoint cp = decode_at(text, i);
    if (is_space_cp(cp.value)) {
      pending_space = !out.empty();
    } else {
      if (pending_space) out.push_back(' ');
      pending_space = false;
      out.append(text.substr(i, cp.length));
    }
    i += cp.length;
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> segment_sentences(std::string_view text) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const Sentence all = tokenize(text);
  const auto& toks = all.tokens;
  std::size_t begin_tok = 0;
  auto flush = [&](std::size_t end_tok) {
    if (end_tok <= begin_tok) return;
    out.emplace_back(toks[begin_tok].start, toks[end_tok - 1].end);
    begin_tok = end_tok;
  };
  for (std::size_t i = 0; i < toks.size(); ++i) {
    const std::string& t = toks[i].text;
    if (t != "." && t != "!" && t != "?") continue;
    if (t == "." && i > 0 && i - 1 >= begin_tok) {
      const Token& prev = toks[i - 1];
      if (prev.end == toks[i].start) {
        const bool initial = prev.text.size() == 1 && is_upper_start(prev.text);
        if (abbreviations().count(prev.lower) || initial) continue;
      }
    }
    std::size_t end = i + 1;
    while (end < toks.size() && (toks[end].text == "\"" || toks[end].text == ")" ||
                                 toks[end].text == "\xE2\x80\x9D" || toks[end].text == "'")) {
      ++end;
    }
    if (end >= toks.size()) break;
    const Token& next = toks[end];
    const bool starts_new = is_upper_start(next.text) || is_number_text(next.text) ||
                            next.text == "\"" || next.text == "(" ||
                            next.text == "\xE2\x80\x9C";
    if (starts_new && next.start > toks[end - 1].end) {
      flush(end);
    }
  }
  flush(toks.size());
  return out;
}

}  // namespace hype
