#include "inkforge/tokens.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "format.hpp"
#include "inkforge/error.hpp"
#include "inkforge/normalize.hpp"

namespace inkforge {

// ---------------------------------------------------------------------------
// Vocabulary

std::u32string Vocabulary::default_symbols() {
  std::u32string s;
  for (char32_t c = 0x20; c <= 0x7E; ++c) s.push_back(c);
  for (char32_t c = 0xA0; c <= 0xFF; ++c) s.push_back(c);
  return s;
}

Vocabulary::Vocabulary(int n, std::u32string text_symbols) : n_(n), symbols_(std::move(text_symbols)) {
  if (n_ < 1) throw DataError("vocabulary coordinate range must be at least 1");
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    const char32_t c = symbols_[i];
    if (c >= symbol_index_.size()) symbol_index_.resize(static_cast<std::size_t>(c) + 1, -1);
    if (symbol_index_[c] >= 0) throw DataError("duplicate symbol in text inventory");
    symbol_index_[c] = static_cast<std::int32_t>(i);
  }
}

bool Vocabulary::has_symbol(char32_t c) const {
  return c < symbol_index_.size() && symbol_index_[c] >= 0;
}

TokenId Vocabulary::id(const Token& token) const {
  const auto n = static_cast<std::uint32_t>(n_);
  switch (token.kind) {
    case TokenKind::BeginStroke:
      return 0;
    case TokenKind::X:
      if (token.value > n) throw DataError("x token value out of range");
      return 1 + token.value;
    case TokenKind::Y:
      if (token.value > n) throw DataError("y token value out of range");
      return n + 2 + token.value;
    case TokenKind::Text:
      if (!has_symbol(token.value)) throw DataError("text symbol not in vocabulary");
      return static_cast<TokenId>(ink_token_count()) +
             static_cast<TokenId>(symbol_index_[token.value]);
  }
  throw DataError("invalid token kind");
}

std::optional<Token> Vocabulary::token(TokenId id) const {
  const auto n = static_cast<std::uint32_t>(n_);
  if (id == 0) return Token::begin();
  if (id <= n + 1) return Token::x(id - 1);
  if (id <= 2 * n + 2) return Token::y(id - n - 2);
  const std::size_t text = id - ink_token_count();
  if (text < symbols_.size()) return Token::text(symbols_[text]);
  return std::nullopt;
}

std::vector<TokenId> Vocabulary::to_ids(const TokenSeq& seq) const {
  std::vector<TokenId> ids;
  ids.reserve(seq.size());
  for (const auto& t : seq) ids.push_back(id(t));
  return ids;
}

TokenSeq Vocabulary::from_ids(const std::vector<TokenId>& ids) const {
  TokenSeq seq;
  seq.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    auto t = token(ids[i]);
    if (!t) throw DataError("token id " + std::to_string(ids[i]) + " at position " +
                            std::to_string(i) + " is outside the vocabulary");
    seq.push_back(*t);
  }
  return seq;
}

// ---------------------------------------------------------------------------
// Ink encoding

TokenSeq encode_ink(const DigitalInk& ink, const Vocabulary& vocab) {
  const double n = vocab.n();
  auto quantize = [n](double v) {
    if (!(v >= -0.5 && v <= n + 0.5)) throw DataError("ink not normalized");
    return static_cast<std::uint32_t>(std::clamp(std::floor(v + 0.5), 0.0, n));
  };
  TokenSeq seq;
  seq.reserve(ink.strokes.size() + 2 * total_points(ink));
  for (const auto& stroke : ink.strokes) {
    seq.push_back(Token::begin());
    for (const auto& p : stroke.points) {
      seq.push_back(Token::x(quantize(p.x)));
      seq.push_back(Token::y(quantize(p.y)));
    }
  }
  return seq;
}

namespace {

class InkDecoder {
 public:
  InkDecoder(const Vocabulary& vocab, DecodeMode mode) : n_(static_cast<std::uint32_t>(vocab.n())), mode_(mode) {}

  DecodeResult run(const TokenSeq& seq) {
    for (std::size_t i = 0; i < seq.size(); ++i) step(i, seq[i]);
    if (pending_ == Pending::X) report(pending_index_, "x coordinate without a following y");
    close_stroke();
    result_.ink = hallucinate_time(result_.ink, kDefaultSamplePeriod);
    return std::move(result_);
  }

 private:
  // What the last X token left behind: nothing, a usable x value, or an x
  // that was already reported so its partner y is swallowed silently.
  enum class Pending { None, X, Discard };

  std::uint32_t n_;
  DecodeMode mode_;
  DecodeResult result_;
  bool in_stroke_ = false;
  bool stroke_reported_ = false;
  std::size_t stroke_begin_ = 0;
  Stroke stroke_;
  Pending pending_ = Pending::None;
  std::size_t pending_index_ = 0;
  std::uint32_t pending_x_ = 0;

  void report(std::size_t index, std::string message) {
    if (mode_ == DecodeMode::Strict)
      throw DataError("token " + std::to_string(index) + ": " + message);
    result_.diagnostics.push_back({index, std::move(message)});
    if (in_stroke_) stroke_reported_ = true;
  }

  void close_stroke() {
    if (!in_stroke_) return;
    if (!stroke_.points.empty()) {
      result_.ink.strokes.push_back(std::move(stroke_));
    } else if (!stroke_reported_) {
      report(stroke_begin_, "stroke without points");
    }
    stroke_ = {};
    in_stroke_ = false;
  }

  void step(std::size_t i, const Token& tok) {
    switch (tok.kind) {
      case TokenKind::BeginStroke:
        if (pending_ == Pending::X) report(pending_index_, "x coordinate without a following y");
        pending_ = Pending::None;
        close_stroke();
        in_stroke_ = true;
        stroke_reported_ = false;
        stroke_begin_ = i;
        break;
      case TokenKind::X:
        if (pending_ == Pending::X) report(pending_index_, "x coordinate without a following y");
        pending_index_ = i;
        pending_ = Pending::Discard;
        if (!in_stroke_) {
          report(i, "point before any begin-of-stroke token");
        } else if (tok.value > n_) {
          report(i, "x coordinate out of range");
        } else {
          pending_ = Pending::X;
          pending_x_ = tok.value;
        }
        break;
      case TokenKind::Y:
        if (pending_ == Pending::X) {
          if (tok.value > n_) {
            report(i, "y coordinate out of range");
          } else {
            stroke_.points.push_back({static_cast<double>(pending_x_), static_cast<double>(tok.value), 0.0});
          }
        } else if (pending_ == Pending::None) {
          report(i, "y coordinate without a preceding x");
        }
        pending_ = Pending::None;
        break;
      case TokenKind::Text:
        report(i, "text token inside ink");
        break;
    }
  }
};

}  // namespace

DecodeResult decode_ink(const TokenSeq& seq, const Vocabulary& vocab, DecodeMode mode) {
  return InkDecoder(vocab, mode).run(seq);
}

// ---------------------------------------------------------------------------
// Tasks, prompts and targets

std::string_view task_name(Task task) {
  switch (task) {
    case Task::VanillaDerender: return "vanilla_derender";
    case Task::DerenderWithText: return "derender_with_text";
    case Task::RecognizeSyn: return "recognize_syn";
    case Task::RecognizeReal: return "recognize_real";
    case Task::RecognizeAndDerender: return "recognize_and_derender";
  }
  return "unknown";
}

std::optional<Task> task_from_name(std::string_view name) {
  for (Task t : kAllTasks)
    if (task_name(t) == name) return t;
  return std::nullopt;
}

bool task_outputs_ink(Task task) {
  return task == Task::VanillaDerender || task == Task::DerenderWithText ||
         task == Task::RecognizeAndDerender;
}

bool task_outputs_text(Task task) {
  return task == Task::RecognizeSyn || task == Task::RecognizeReal ||
         task == Task::RecognizeAndDerender;
}

bool task_is_synthetic(Task task) { return task != Task::RecognizeReal; }

std::string build_prompt(const TaskPrompt& prompt) {
  const bool wants_payload = prompt.task == Task::DerenderWithText;
  if (wants_payload && (!prompt.text_payload || prompt.text_payload->empty()))
    throw DataError("task derender_with_text needs a text payload");
  if (!wants_payload && prompt.text_payload)
    throw DataError("task " + std::string(task_name(prompt.task)) + " takes no text payload");
  switch (prompt.task) {
    case Task::VanillaDerender: return "Derender the ink.";
    case Task::DerenderWithText: return "Derender the ink: " + *prompt.text_payload;
    case Task::RecognizeSyn:
    case Task::RecognizeReal: return "Recognize the text.";
    case Task::RecognizeAndDerender: return "Recognize and derender.";
  }
  throw DataError("unknown task");
}

TokenSeq build_target(const TaskPrompt& prompt, const TokenSeq& ink, std::string_view text) {
  const Task task = prompt.task;
  const std::string name(task_name(task));
  if (task_outputs_ink(task) && ink.empty()) throw DataError(name + " target needs ink tokens");
  if (!task_outputs_ink(task) && !ink.empty()) throw DataError(name + " target takes no ink tokens");
  if (task_outputs_text(task) && text.empty()) throw DataError(name + " target needs text");
  if (!task_outputs_text(task) && !text.empty()) throw DataError(name + " target takes no text");
  for (const auto& t : ink)
    if (t.kind == TokenKind::Text) throw DataError("ink part of a target contains a text token");

  TokenSeq out;
  for (char32_t c : utf8_to_u32(text)) out.push_back(Token::text(c));
  out.insert(out.end(), ink.begin(), ink.end());
  return out;
}

SplitTarget split_target(const TokenSeq& seq) {
  SplitTarget out;
  std::size_t i = 0;
  for (; i < seq.size() && seq[i].kind == TokenKind::Text; ++i)
    out.text.push_back(static_cast<char32_t>(seq[i].value));
  out.ink.assign(seq.begin() + static_cast<std::ptrdiff_t>(i), seq.end());
  return out;
}

// ---------------------------------------------------------------------------
// Text forms

std::string format_tokens(const TokenSeq& seq) {
  std::string out;
  char buf[16];
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i) out.push_back(' ');
    const Token& t = seq[i];
    switch (t.kind) {
      case TokenKind::BeginStroke: out.push_back('b'); break;
      case TokenKind::X: out += 'x' + std::to_string(t.value); break;
      case TokenKind::Y: out += 'y' + std::to_string(t.value); break;
      case TokenKind::Text:
        std::snprintf(buf, sizeof buf, "u%04X", static_cast<unsigned>(t.value));
        out += buf;
        break;
    }
  }
  return out;
}

TokenSeq parse_tokens(std::string_view text) {
  TokenSeq seq;
  std::size_t line = 1;
  std::size_t col = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      if (c == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && text[j] != ' ' && text[j] != '\t' && text[j] != '\r' && text[j] != '\n') ++j;
    const std::string_view word = text.substr(i, j - i);
    const std::string_view rest = word.substr(1);
    auto bad = [&]() -> ParseError {
      return ParseError("bad token '" + std::string(word) + "'", line, col);
    };
    if (word == "b") {
      seq.push_back(Token::begin());
    } else if (word[0] == 'x' || word[0] == 'y') {
      if (rest.empty() || rest.size() > 9 || rest.find_first_not_of("0123456789") != std::string_view::npos)
        throw bad();
      auto v = detail::parse_int<std::uint32_t>(rest);
      if (!v) throw bad();
      seq.push_back(word[0] == 'x' ? Token::x(*v) : Token::y(*v));
    } else if (word[0] == 'u') {
      if (rest.size() < 4 || rest.size() > 6 ||
          rest.find_first_not_of("0123456789ABCDEFabcdef") != std::string_view::npos)
        throw bad();
      auto v = detail::parse_int<std::uint32_t>(rest, 16);
      if (!v || *v > 0x10FFFF) throw bad();
      seq.push_back(Token::text(static_cast<char32_t>(*v)));
    } else {
      throw bad();
    }
    col += j - i;
    i = j;
  }
  return seq;
}

std::u32string utf8_to_u32(std::string_view text) {
  std::u32string out;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto b0 = static_cast<unsigned char>(text[i]);
    int len = b0 < 0x80 ? 1 : (b0 >> 5) == 0x6 ? 2 : (b0 >> 4) == 0xE ? 3 : (b0 >> 3) == 0x1E ? 4 : 0;
    if (len == 0 || i + static_cast<std::size_t>(len) > text.size())
      throw DataError("invalid UTF-8 in text");
    char32_t cp = len == 1 ? b0 : len == 2 ? (b0 & 0x1F) : len == 3 ? (b0 & 0x0F) : (b0 & 0x07);
    for (int k = 1; k < len; ++k) {
      const auto b = static_cast<unsigned char>(text[i + static_cast<std::size_t>(k)]);
      if ((b & 0xC0) != 0x80) throw DataError("invalid UTF-8 in text");
      cp = (cp << 6) | (b & 0x3F);
    }
    out.push_back(cp);
    i += static_cast<std::size_t>(len);
  }
  return out;
}

std::string u32_to_utf8(std::u32string_view text) {
  std::string out;
  for (char32_t cp : text) {
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
  return out;
}

}  // namespace inkforge
