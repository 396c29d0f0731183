#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "inkforge/ink.hpp"

namespace inkforge {

enum class TokenKind : std::uint8_t { BeginStroke, X, Y, Text };

/// One token of the ink+text stream. `value` is the quantized coordinate for
/// X/Y tokens and the Unicode code point for Text tokens.
struct Token {
  TokenKind kind = TokenKind::BeginStroke;
  std::uint32_t value = 0;

  static constexpr Token begin() { return {TokenKind::BeginStroke, 0}; }
  static constexpr Token x(std::uint32_t v) { return {TokenKind::X, v}; }
  static constexpr Token y(std::uint32_t v) { return {TokenKind::Y, v}; }
  static constexpr Token text(char32_t c) { return {TokenKind::Text, static_cast<std::uint32_t>(c)}; }

  friend bool operator==(const Token&, const Token&) = default;
};

using TokenSeq = std::vector<Token>;
using TokenId = std::uint32_t;

/// Id layout: 0 is begin-of-stroke, 1..n+1 are X(0..n), n+2..2n+2 are
/// Y(0..n); text symbols follow at 2n+3 in inventory order.
class Vocabulary {
 public:
  /// Printable ASCII plus the printable Latin-1 supplement.
  static std::u32string default_symbols();

  explicit Vocabulary(int n = 224, std::u32string text_symbols = default_symbols());

  int n() const noexcept { return n_; }
  std::size_t ink_token_count() const noexcept { return 2 * static_cast<std::size_t>(n_) + 3; }
  std::size_t text_token_count() const noexcept { return symbols_.size(); }
  std::size_t size() const noexcept { return ink_token_count() + text_token_count(); }
  const std::u32string& symbols() const noexcept { return symbols_; }
  bool has_symbol(char32_t c) const;

  /// Throws DataError for coordinates above n or symbols outside the inventory.
  TokenId id(const Token& token) const;
  std::optional<Token> token(TokenId id) const;

  std::vector<TokenId> to_ids(const TokenSeq& seq) const;
  /// Throws DataError on an id outside the vocabulary.
  TokenSeq from_ids(const std::vector<TokenId>& ids) const;

 private:
  int n_;
  std::u32string symbols_;
  std::vector<std::int32_t> symbol_index_;  // code point -> index, dense up to the largest symbol
};

/// b X Y X Y ... per stroke. Coordinates round half up and clamp to [0, n];
/// timestamps are dropped. Throws DataError("ink not normalized") when a
/// coordinate lies outside [-0.5, n + 0.5].
TokenSeq encode_ink(const DigitalInk& ink, const Vocabulary& vocab);

enum class DecodeMode { Tolerant, Strict };

struct DecodeDiagnostic {
  std::size_t token_index = 0;
  std::string message;
};

struct DecodeResult {
  DigitalInk ink;
  std::vector<DecodeDiagnostic> diagnostics;
};

/// Parses ( b (X Y)+ )*. Tolerant mode drops malformed fragments and records
/// a diagnostic for each; strict mode throws DataError at the first
/// violation. Decoded inks carry synthetic 20 ms timestamps.
DecodeResult decode_ink(const TokenSeq& seq, const Vocabulary& vocab,
                        DecodeMode mode = DecodeMode::Tolerant);

enum class Task : std::uint8_t {
  VanillaDerender,
  DerenderWithText,
  RecognizeSyn,
  RecognizeReal,
  RecognizeAndDerender,
};

inline constexpr Task kAllTasks[] = {Task::VanillaDerender, Task::DerenderWithText,
                                     Task::RecognizeSyn, Task::RecognizeReal,
                                     Task::RecognizeAndDerender};

std::string_view task_name(Task task);
std::optional<Task> task_from_name(std::string_view name);
bool task_outputs_ink(Task task);
bool task_outputs_text(Task task);
bool task_is_synthetic(Task task);

struct TaskPrompt {
  Task task = Task::VanillaDerender;
  std::optional<std::string> text_payload;  // only for DerenderWithText
};

/// Canonical prompt string. Throws DataError when the payload does not match
/// the task (missing for DerenderWithText, present for any other task).
std::string build_prompt(const TaskPrompt& prompt);

/// Target stream for a task: ink tokens, text tokens, or text then ink.
/// Throws DataError when the supplied parts do not match the task.
TokenSeq build_target(const TaskPrompt& prompt, const TokenSeq& ink, std::string_view text);

/// Splits a hybrid stream into its leading text and the remaining tokens.
struct SplitTarget {
  std::u32string text;
  TokenSeq ink;
};
SplitTarget split_target(const TokenSeq& seq);

/// Whitespace-separated fixture format: `b`, `x17`, `y204`, `u0068`.
std::string format_tokens(const TokenSeq& seq);
/// Throws ParseError (line 1, column of the offending token) on a bad token.
TokenSeq parse_tokens(std::string_view text);

std::u32string utf8_to_u32(std::string_view text);
std::string u32_to_utf8(std::u32string_view text);

}  // namespace inkforge
