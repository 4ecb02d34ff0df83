#include "hype/guidelines.hpp"

#include <algorithm>

#include "hype/error.hpp"
#include "hype/io.hpp"

namespace hype {
namespace {

std::string in_quotes(std::string_view s) { return "'" + std::string(s) + "'"; }

std::string token_list(const Sentence& s, const std::vector<TokenIndex>& indices) {
  std::vector<std::string> words;
  for (TokenIndex i : indices) words.push_back(in_quotes(s.tokens[i].text));
  return join(words, ", ");
}

bool is_candidate_word(std::string_view word, const Lexicon& lexicon, const RuleResources& res) {
  return lexicon.contains(word) || res.promotional_context_words.count(std::string(word)) > 0;
}

struct Signals {
  std::vector<TokenIndex> tokens;
};

// Other promotional tokens in the sentence: lexicon candidates that pass their
// own value-judgement check, plus context-word hits.
Signals promotional_signals(const Sentence& s, TokenIndex target, const Lexicon& lexicon,
                            const RuleResources& res) {
  Signals out;
  for (TokenIndex i = 0; i < s.tokens.size(); ++i) {
    if (i == target) continue;
    const std::string& w = s.tokens[i].lower;
    if (lexicon.contains(w)) {
      if (value_judgement_exclusion(s, i, res).empty()) out.tokens.push_back(i);
    } else if (res.promotional_context_words.count(w)) {
      out.tokens.push_back(i);
    }
  }
  return out;
}

}  // namespace

const char* confidence_name(Confidence confidence) {
  return confidence == Confidence::kRuleFired ? "RULE_FIRED" : "DEFAULT";
}

std::string value_judgement_exclusion(const Sentence& s, TokenIndex index,
                                      const RuleResources& res) {
  const Token& token = s.tokens[index];
  Sentence forced;
  const Sentence* view = &s;
  if (token.tag != Tag::kAdj) {
    forced = s;
    forced.tokens[index].tag = Tag::kAdj;
    view = &forced;
  }
  const SyntacticContext ctx = analyze_context(*view, index);
  if (ctx.in_proper_noun) {
    return "part of a proper noun or acronym near " + in_quotes(token.text);
  }
  for (const auto& phrase : res.collocation_blocklist) {
    if (phrase_covers(s, index, phrase)) return "technical collocation " + in_quotes(phrase);
  }
  if (token.lower == "first") {
    TokenIndex k = index + 1;
    if (k < s.tokens.size() && s.tokens[k].tag == Tag::kNum) {
      return "ordinal 'first' before number " + in_quotes(s.tokens[k].text);
    }
    if (k < s.tokens.size() && res.sequence_nouns.count(s.tokens[k].lower)) {
      return "ordinal 'first' before sequence noun " + in_quotes(s.tokens[k].text);
    }
  }
  return {};
}

GuidelineDecision decide(const CandidateOccurrence& occ, const Sentence& sentence,
                         const Lexicon& lexicon, const RuleResources& res,
                         const EngineConfig& config) {
  const LexiconEntry* entry = lexicon.find(occ.adjective);
  if (!entry) throw Error(ErrorKind::kUnknownAdjective, in_quotes(occ.adjective));
  if (occ.token_index >= sentence.tokens.size() ||
      sentence.tokens[occ.token_index].lower != occ.adjective) {
    throw Error(ErrorKind::kInvalidArgument,
                "occurrence of " + in_quotes(occ.adjective) + " does not match sentence " +
                    in_quotes(sentence.id));
  }
  const TokenIndex target = occ.token_index;
  const SyntacticContext& ctx = occ.context;
  GuidelineDecision d;

  const Signals signals = promotional_signals(sentence, target, lexicon, res);
  const bool context_met =
      static_cast<int>(signals.tokens.size()) >= config.broader_context_threshold;

  // Step 1.
  if (std::string excl = value_judgement_exclusion(sentence, target, res); !excl.empty()) {
    if (context_met) {
      excl += "; exclusion overrides promotional tone (" + token_list(sentence, signals.tokens) + ")";
    }
    d.trace.push_back({1, true, "no value judgement: " + excl});
    d.label = Label::kNotHype;
    d.confidence = Confidence::kRuleFired;
    return d;
  }
  d.trace.push_back({1, false, "value judgement present"});

  auto record = [&](int step, bool fired, std::string evidence) {
    d.trace.push_back({step, fired, std::move(evidence)});
    if (fired) d.rationales.insert(static_cast<Rationale>(step - 2));
  };

  // Step 2.
  record(2, entry->hyperbolic,
         entry->hyperbolic ? in_quotes(entry->adjective) + " is in the hyperbolic set"
                           : "not in the hyperbolic set");

  // Step 3.
  {
    bool fired = false;
    std::string evidence;
    std::string redundancy;
    for (const auto& pair : res.redundancy_pairs) {
      if (pair.adjective != occ.adjective) continue;
      for (TokenIndex i = 0; i < sentence.tokens.size(); ++i) {
        if (i == target) continue;
        if (matches_trigger(sentence.tokens[i].lower, pair.trigger)) {
          redundancy = "redundant with " + in_quotes(sentence.tokens[i].text);
          break;
        }
      }
      if (!redundancy.empty()) break;
    }
    std::string content_phrase;
    for (const auto& phrase : res.content_bearing) {
      if (phrase_covers(sentence, target, phrase)) {
        content_phrase = phrase;
        break;
      }
    }
    if (ctx.position == Position::kPredicative && ctx.justification_clause) {
      evidence = "predicative with in-sentence justification";
    } else if (!redundancy.empty()) {
      fired = true;
      evidence = redundancy;
    } else if (ctx.position == Position::kAttributive && !ctx.justification_clause &&
               content_phrase.empty()) {
      fired = true;
      evidence = "attributive before " + in_quotes(sentence.tokens[*ctx.head_noun].text) +
                 " without justification (syntactic removal test)";
    } else if (ctx.position == Position::kAttributive && !content_phrase.empty()) {
      evidence = "attributive but content-bearing in " + in_quotes(content_phrase);
    } else if (ctx.position == Position::kAttributive) {
      evidence = "attributive with in-sentence justification";
    } else {
      evidence = std::string(position_name(ctx.position)) + " position, no redundancy";
    }
    record(3, fired, std::move(evidence));
  }

  // Step 4.
  {
    std::vector<TokenIndex> amps;
    for (TokenIndex i : ctx.premodifiers) {
      if (res.amplifiers.count(sentence.tokens[i].lower)) amps.push_back(i);
    }
    record(4, !amps.empty(),
           amps.empty() ? "no amplifying modifier" : "amplified by " + token_list(sentence, amps));
  }

  // Step 5.
  {
    std::vector<TokenIndex> stacked;
    for (TokenIndex i : ctx.coordinated_adjectives) {
      if (is_candidate_word(sentence.tokens[i].lower, lexicon, res)) stacked.push_back(i);
    }
    record(5, !stacked.empty(),
           stacked.empty() ? "not coordinated with a hype candidate"
                           : "coordinated with " + token_list(sentence, stacked));
  }

  // Step 6.
  record(6, context_met,
         std::to_string(signals.tokens.size()) + " other promotional signal(s)" +
             (signals.tokens.empty() ? "" : ": " + token_list(sentence, signals.tokens)) +
             " (threshold " + std::to_string(config.broader_context_threshold) + ")");

  if (!d.rationales.empty()) {
    d.label = Label::kHype;
    d.confidence = Confidence::kRuleFired;
  } else {
    d.label = Label::kNotHype;
    d.confidence = Confidence::kDefault;
  }
  return d;
}

BatchResult decide_batch(std::span<const Sentence> sentences, const Lexicon& lexicon,
                         const RuleResources& resources, const EngineConfig& config) {
  BatchResult result;
  for (const Sentence& s : sentences) {
    std::vector<CandidateOccurrence> occs;
    try {
      occs = find_candidates(s, lexicon);
    } catch (const Error& e) {
      result.errors.push_back({s.id, 0, e.what()});
      continue;
    }
    for (auto& occ : occs) {
      try {
        GuidelineDecision d = decide(occ, s, lexicon, resources, config);
        result.items.push_back({std::move(occ), std::move(d)});
      } catch (const Error& e) {
        result.errors.push_back({s.id, occ.token_index, e.what()});
      }
    }
  }
  return result;
}

std::string format_trace_record(const CandidateOccurrence& occ, const GuidelineDecision& d) {
  std::vector<std::string> steps;
  for (const auto& t : d.trace) {
    std::string ev = t.evidence;
    std::replace(ev.begin(), ev.end(), '\t', ' ');
    std::replace(ev.begin(), ev.end(), '\n', ' ');
    steps.push_back(std::to_string(t.step) + (t.fired ? "+ " : "- ") + ev);
  }
  return occ.sentence_id + '\t' + occ.adjective + '\t' + label_name(d.label) + '\t' +
         format_rationales(d.rationales) + '\t' + join(steps, " ; ");
}

CombinedAnswer combine_step_answers(const std::array<bool, 6>& answers) {
  CombinedAnswer out;
  if (!answers[0]) return out;
  for (int step = 2; step <= 6; ++step) {
    if (answers[step - 1]) out.rationales.insert(static_cast<Rationale>(step - 2));
  }
  out.label = out.rationales.empty() ? Label::kNotHype : Label::kHype;
  return out;
}

}  // namespace hype
