#include "sentikit/vader.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "sentikit/error.hpp"
#include "sentikit/util.hpp"

namespace sentikit::vader {

namespace {

using lexicon::Lexicon;

const std::unordered_set<std::string>& negations() {
  static const std::unordered_set<std::string> words = {
      "aint",    "arent",    "cannot",  "cant",     "couldnt", "darent",  "didnt",   "doesnt",
      "ain't",   "aren't",   "can't",   "couldn't", "daren't", "didn't",  "doesn't", "dont",
      "hadnt",   "hasnt",    "havent",  "isnt",     "mightnt", "mustnt",  "neither", "don't",
      "hadn't",  "hasn't",   "haven't", "isn't",    "mightn't", "mustn't", "neednt", "needn't",
      "never",   "none",     "nope",    "nor",      "not",     "nothing", "nowhere", "oughtnt",
      "shant",   "shouldnt", "uhuh",    "wasnt",    "werent",  "oughtn't", "shan't", "shouldn't",
      "uh-uh",   "wasn't",   "weren't", "without",  "wont",    "wouldnt", "won't",   "wouldn't",
      "rarely",  "seldom",   "despite"};
  return words;
}

const std::unordered_map<std::string, double>& boosters() {
  constexpr double up = kBoosterIncrement, down = -kBoosterIncrement;
  static const std::unordered_map<std::string, double> words = {
      {"absolutely", up},  {"amazingly", up},   {"awfully", up},      {"completely", up},
      {"considerable", up}, {"considerably", up}, {"decidedly", up},  {"deeply", up},
      {"effing", up},      {"enormous", up},    {"enormously", up},   {"entirely", up},
      {"especially", up},  {"exceptional", up}, {"exceptionally", up}, {"extreme", up},
      {"extremely", up},   {"fabulously", up},  {"flipping", up},     {"flippin", up},
      {"frackin", up},     {"fracking", up},    {"fricking", up},     {"frickin", up},
      {"frigging", up},    {"friggin", up},     {"fully", up},        {"fuckin", up},
      {"fucking", up},     {"fuggin", up},      {"fugging", up},      {"greatly", up},
      {"hella", up},       {"highly", up},      {"hugely", up},       {"incredible", up},
      {"incredibly", up},  {"intensely", up},   {"major", up},        {"majorly", up},
      {"more", up},        {"most", up},        {"particularly", up}, {"purely", up},
      {"quite", up},       {"really", up},      {"remarkably", up},   {"so", up},
      {"substantially", up}, {"thoroughly", up}, {"total", up},       {"totally", up},
      {"tremendous", up},  {"tremendously", up}, {"uber", up},        {"unbelievably", up},
      {"unusually", up},   {"utter", up},       {"utterly", up},      {"very", up},
      {"almost", down},    {"barely", down},    {"hardly", down},     {"just enough", down},
      {"kind of", down},   {"kinda", down},     {"kindof", down},     {"kind-of", down},
      {"less", down},      {"little", down},    {"marginal", down},   {"marginally", down},
      {"occasional", down}, {"occasionally", down}, {"partly", down}, {"scarce", down},
      {"scarcely", down},  {"slight", down},    {"slightly", down},   {"somewhat", down},
      {"sort of", down},   {"sorta", down},     {"sortof", down},     {"sort-of", down}};
  return words;
}

const std::unordered_map<std::string, double>& special_cases() {
  static const std::unordered_map<std::string, double> phrases = {
      {"the shit", 3.0},   {"the bomb", 3.0},     {"bad ass", 1.5},
      {"badass", 1.5},     {"bus stop", 0.0},     {"yeah right", -2.0},
      {"kiss of death", -1.5}, {"to die for", 3.0}, {"beating heart", 3.5}};
  return phrases;
}

bool is_punct(char c) {
  return (c >= '!' && c <= '/') || (c >= ':' && c <= '@') || (c >= '[' && c <= '`') ||
         (c >= '{' && c <= '~');
}

// str.isupper() restricted to ASCII letters.
bool is_upper(std::string_view w) {
  bool cased = false;
  for (char c : w) {
    if (c >= 'a' && c <= 'z') return false;
    if (c >= 'A' && c <= 'Z') cased = true;
  }
  return cased;
}

bool negated(const std::string& lower_word) {
  return negations().count(lower_word) || lower_word.find("n't") != std::string::npos;
}

double booster_scalar(const std::string& word, double valence, bool cap_diff) {
  auto it = boosters().find(to_lower_ascii(word));
  if (it == boosters().end()) return 0.0;
  double scalar = it->second;
  if (valence < 0) scalar *= -1;
  if (is_upper(word) && cap_diff) {
    if (valence > 0) scalar += kCapsIncrement;
    else scalar -= kCapsIncrement;
  }
  return scalar;
}

struct Sentence {
  std::vector<std::string> words;
  std::vector<std::string> lower;
  bool cap_diff = false;
};

Sentence make_sentence(std::string_view text) {
  Sentence s;
  s.words = words_and_emoticons(text);
  for (const auto& w : s.words) s.lower.push_back(to_lower_ascii(w));
  std::size_t caps = 0;
  for (const auto& w : s.words)
    if (is_upper(w)) ++caps;
  std::size_t diff = s.words.size() - caps;
  s.cap_diff = diff > 0 && diff < s.words.size();
  return s;
}

double negation_check(double valence, const std::vector<std::string>& w, int start_i, int i) {
  if (start_i == 0) {
    if (negated(w[i - 1])) valence *= kNegationScalar;
  }
  if (start_i == 1) {
    if (w[i - 2] == "never" && (w[i - 1] == "so" || w[i - 1] == "this")) {
      valence *= 1.25;
    } else if (w[i - 2] == "without" && w[i - 1] == "doubt") {
    } else if (negated(w[i - 2])) {
      valence *= kNegationScalar;
    }
  }
  if (start_i == 2) {
    // Operator precedence mirrors the reference: (never && (so || this)) || (so || this).
    if ((w[i - 3] == "never" && (w[i - 2] == "so" || w[i - 2] == "this")) ||
        (w[i - 1] == "so" || w[i - 1] == "this")) {
      valence *= 1.25;
    } else if (w[i - 3] == "without" && (w[i - 2] == "doubt" || w[i - 1] == "doubt")) {
    } else if (negated(w[i - 3])) {
      valence *= kNegationScalar;
    }
  }
  return valence;
}

double special_idioms_check(double valence, const std::vector<std::string>& w, int i) {
  const auto& special = special_cases();
  const int n = static_cast<int>(w.size());
  std::string onezero = w[i - 1] + " " + w[i];
  std::string twoonezero = w[i - 2] + " " + w[i - 1] + " " + w[i];
  std::string twoone = w[i - 2] + " " + w[i - 1];
  std::string threetwoone = w[i - 3] + " " + w[i - 2] + " " + w[i - 1];
  std::string threetwo = w[i - 3] + " " + w[i - 2];

  for (const auto* seq : {&onezero, &twoonezero, &twoone, &threetwoone, &threetwo}) {
    auto it = special.find(*seq);
    if (it != special.end()) {
      valence = it->second;
      break;
    }
  }
  if (n - 1 > i) {
    auto it = special.find(w[i] + " " + w[i + 1]);
    if (it != special.end()) valence = it->second;
  }
  if (n - 1 > i + 1) {
    auto it = special.find(w[i] + " " + w[i + 1] + " " + w[i + 2]);
    if (it != special.end()) valence = it->second;
  }
  for (const auto* gram : {&threetwoone, &threetwo, &twoone}) {
    auto it = boosters().find(*gram);
    if (it != boosters().end()) valence += it->second;
  }
  return valence;
}

double least_check(double valence, const Sentence& s, const Lexicon& lex, int i) {
  const auto& w = s.lower;
  if (i > 1 && !lex.contains(w[i - 1]) && w[i - 1] == "least") {
    if (w[i - 2] != "at" && w[i - 2] != "very") valence *= kNegationScalar;
  } else if (i > 0 && !lex.contains(w[i - 1]) && w[i - 1] == "least") {
    valence *= kNegationScalar;
  }
  return valence;
}

double word_valence(const Sentence& s, const Lexicon& lex, int i) {
  const auto& w = s.lower;
  const int n = static_cast<int>(w.size());
  const double* base = lex.find(w[i]);
  if (!base) return 0.0;

  double valence = *base;
  // "no" directly before another lexicon word acts as a negator, not a word.
  if (w[i] == "no" && i != n - 1 && lex.contains(w[i + 1])) valence = 0.0;
  if ((i > 0 && w[i - 1] == "no") || (i > 1 && w[i - 2] == "no") ||
      (i > 2 && w[i - 3] == "no" && (w[i - 1] == "or" || w[i - 1] == "nor"))) {
    valence = *base * kNegationScalar;
  }

  if (is_upper(s.words[i]) && s.cap_diff) {
    if (valence > 0) valence += kCapsIncrement;
    else valence -= kCapsIncrement;
  }

  for (int start_i = 0; start_i < 3; ++start_i) {
    if (i > start_i && !lex.contains(w[i - (start_i + 1)])) {
      double scalar = booster_scalar(s.words[i - (start_i + 1)], valence, s.cap_diff);
      if (start_i == 1 && scalar != 0) scalar *= 0.95;
      if (start_i == 2 && scalar != 0) scalar *= 0.9;
      valence += scalar;
      valence = negation_check(valence, w, start_i, i);
      if (start_i == 2) valence = special_idioms_check(valence, w, i);
    }
  }
  return least_check(valence, s, lex, i);
}

// The reference looks each value up with list.index(), so with repeated
// values the first equal entry is the one rescaled. Kept for score parity.
void but_check(const std::vector<std::string>& lower, std::vector<double>& sentiments) {
  auto but = std::find(lower.begin(), lower.end(), "but");
  if (but == lower.end()) return;
  const auto bi = static_cast<std::size_t>(but - lower.begin());
  for (std::size_t k = 0; k < sentiments.size(); ++k) {
    double sentiment = sentiments[k];
    auto si = static_cast<std::size_t>(
        std::find(sentiments.begin(), sentiments.end(), sentiment) - sentiments.begin());
    if (si < bi) sentiments[si] = sentiment * kButBefore;
    else if (si > bi) sentiments[si] = sentiment * kButAfter;
  }
}

double punctuation_emphasis(std::string_view text) {
  auto ep = std::min<long>(std::count(text.begin(), text.end(), '!'), kMaxExclamations);
  auto qm = std::count(text.begin(), text.end(), '?');
  double qm_amp = 0.0;
  if (qm > 1) qm_amp = qm <= 3 ? static_cast<double>(qm) * kQuestionIncrement : kQuestionCap;
  return static_cast<double>(ep) * kExclamationIncrement + qm_amp;
}

std::string replace_emojis(std::string_view text, const EmojiLexicon& emojis) {
  std::string out;
  bool prev_space = true;
  for (const auto& cp : utf8_code_points(text)) {
    auto it = emojis.find(cp);
    if (it != emojis.end()) {
      if (!prev_space) out.push_back(' ');
      out += it->second;
      prev_space = false;
    } else {
      out += cp;
      prev_space = cp == " ";
    }
  }
  return out;
}

}  // namespace

EmojiLexicon load_emoji_lexicon(const std::filesystem::path& path) {
  EmojiLexicon out;
  for (const auto& line : split(read_file(path), '\n')) {
    auto t = trim(line);
    if (t.empty()) continue;
    auto cols = split(t, '\t');
    if (cols.size() < 2) fail(ErrorKind::parse, path.string() + ": expected emoji<TAB>description");
    out[cols[0]] = cols[1];
  }
  return out;
}

double normalize(double score, double alpha) {
  double n = score / std::sqrt(score * score + alpha);
  return std::clamp(n, -1.0, 1.0);
}

std::vector<std::string> words_and_emoticons(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space_ascii(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !is_space_ascii(text[i])) ++i;
    if (i == start) break;
    std::string_view token = text.substr(start, i - start);
    std::string_view stripped = token;
    while (!stripped.empty() && is_punct(stripped.front())) stripped.remove_prefix(1);
    while (!stripped.empty() && is_punct(stripped.back())) stripped.remove_suffix(1);
    out.emplace_back(utf8_code_points(stripped).size() <= 2 ? token : stripped);
  }
  return out;
}

namespace {

std::vector<double> valences_of(const Sentence& s, const Lexicon& lex) {
  std::vector<double> sentiments;
  sentiments.reserve(s.words.size());
  const int n = static_cast<int>(s.words.size());
  for (int i = 0; i < n; ++i) {
    if (boosters().count(s.lower[i]) ||
        (i < n - 1 && s.lower[i] == "kind" && s.lower[i + 1] == "of")) {
      sentiments.push_back(0.0);
      continue;
    }
    sentiments.push_back(word_valence(s, lex, i));
  }
  but_check(s.lower, sentiments);
  return sentiments;
}

}  // namespace

std::vector<double> token_valences(std::string_view text, const Lexicon& lex) {
  return valences_of(make_sentence(text), lex);
}

lexicon::SentimentScore score_vader(std::string_view text, const Lexicon& lex,
                                    const EmojiLexicon* emojis) {
  if (lex.scale() != lexicon::Scale::plus_minus_4)
    fail(ErrorKind::parameter, "VADER engine needs a plus_minus_4 lexicon, got " + lex.name());
  std::string converted = emojis ? replace_emojis(text, *emojis) : std::string(text);
  std::string_view clean = trim(converted);

  Sentence s = make_sentence(clean);
  auto sentiments = valences_of(s, lex);

  lexicon::SentimentScore out;
  out.token_count = static_cast<int>(sentiments.size());
  out.compound = 0.0;
  if (sentiments.empty()) return out;

  double sum = 0.0;
  for (double v : sentiments) sum += v;
  double amp = punctuation_emphasis(clean);
  if (sum > 0) sum += amp;
  else if (sum < 0) sum -= amp;
  double compound = normalize(sum);

  double pos_sum = 0.0, neg_sum = 0.0;
  int neu_count = 0;
  for (double v : sentiments) {
    if (v > 0) {
      pos_sum += v + 1;
      ++out.pos_count;
    }
    if (v < 0) {
      neg_sum += v - 1;
      ++out.neg_count;
    }
    if (v == 0) ++neu_count;
  }
  if (pos_sum > std::fabs(neg_sum)) pos_sum += amp;
  else if (pos_sum < std::fabs(neg_sum)) neg_sum -= amp;
  double total = pos_sum + std::fabs(neg_sum) + neu_count;
  out.pos = std::fabs(pos_sum / total);
  out.neg = std::fabs(neg_sum / total);
  out.neu = std::fabs(neu_count / total);

  if (out.pos_count + out.neg_count > 0) {
    out.polarity = static_cast<double>(out.pos_count - out.neg_count) /
                   static_cast<double>(out.pos_count + out.neg_count);
  }
  out.subjectivity =
      static_cast<double>(out.pos_count + out.neg_count) / static_cast<double>(out.token_count);
  out.compound = compound;
  out.no_signal = compound == 0.0;
  return out;
}

}  // namespace sentikit::vader
