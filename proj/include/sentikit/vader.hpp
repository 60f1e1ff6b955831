#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sentikit/lexicon.hpp"

// Rule-based valence scorer reproducing the public VADER reference
// (vaderSentiment 3.3.2) behaviour: punctuation emphasis, capitalisation,
// degree modifiers, "but" conjunction shift and negation.
namespace sentikit::vader {

inline constexpr double kBoosterIncrement = 0.293;
inline constexpr double kCapsIncrement = 0.733;
inline constexpr double kNegationScalar = -0.74;
inline constexpr double kNormalizationAlpha = 15.0;
inline constexpr double kExclamationIncrement = 0.292;
inline constexpr int kMaxExclamations = 4;
inline constexpr double kQuestionIncrement = 0.18;
inline constexpr double kQuestionCap = 0.96;
inline constexpr double kButBefore = 0.5;
inline constexpr double kButAfter = 1.5;

// code point (UTF-8 bytes) -> textual description
using EmojiLexicon = std::unordered_map<std::string, std::string>;
EmojiLexicon load_emoji_lexicon(const std::filesystem::path& path);

// s / sqrt(s^2 + alpha), clipped to [-1, 1].
double normalize(double score, double alpha = kNormalizationAlpha);

// Whitespace tokens with leading/trailing punctuation stripped, except when
// stripping leaves two characters or fewer (emoticons survive).
std::vector<std::string> words_and_emoticons(std::string_view text);

// Per-token valences after all token-level heuristics and the "but" rule.
std::vector<double> token_valences(std::string_view text, const lexicon::Lexicon& lex);

lexicon::SentimentScore score_vader(std::string_view text, const lexicon::Lexicon& lex,
                                    const EmojiLexicon* emojis = nullptr);

}  // namespace sentikit::vader
