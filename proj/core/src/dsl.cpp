#include "picsim/dsl.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <stdexcept>

namespace picsim {

namespace {

// ---------------------------------------------------------------------------
// Tokens

struct Token {
  enum class Type { Ident, Number, Punct, End };
  Type type = Type::End;
  std::string text;
  double number = 0.0;
  int column = 1;
};

struct LineFailure {
  int column;
  ParseErrorKind kind;
  std::string message;
};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

std::vector<Token> tokenize_line(std::string_view line) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (c == '#') {
      break;
    }
    int column = static_cast<int>(i) + 1;
    if (is_ident_start(c)) {
      std::size_t start = i;
      while (i < line.size() && is_ident_char(line[i])) {
        ++i;
      }
      tokens.push_back({Token::Type::Ident, std::string(line.substr(start, i - start)), 0.0,
                        column});
      continue;
    }
    if (is_digit(c)) {
      std::size_t start = i;
      while (i < line.size() && is_digit(line[i])) {
        ++i;
      }
      if (i < line.size() && line[i] == '.') {
        ++i;
        while (i < line.size() && is_digit(line[i])) {
          ++i;
        }
      }
      if (i < line.size() && (line[i] == 'e' || line[i] == 'E')) {
        std::size_t mark = i;
        ++i;
        if (i < line.size() && (line[i] == '+' || line[i] == '-')) {
          ++i;
        }
        if (i < line.size() && is_digit(line[i])) {
          while (i < line.size() && is_digit(line[i])) {
            ++i;
          }
        } else {
          i = mark;  // bare 'e' belongs to the next token
        }
      }
      std::string text(line.substr(start, i - start));
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
      if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
        throw LineFailure{column, ParseErrorKind::BadPhaseExpr,
                          "number '" + text + "' is out of range"};
      }
      tokens.push_back({Token::Type::Number, text, value, column});
      continue;
    }
    if (std::string_view("(),*/+-").find(c) != std::string_view::npos) {
      tokens.push_back({Token::Type::Punct, std::string(1, c), 0.0, column});
      ++i;
      continue;
    }
    throw LineFailure{column, ParseErrorKind::SyntaxError,
                      std::string("unexpected character '") + c + "'"};
  }
  tokens.push_back({Token::Type::End, "", 0.0, static_cast<int>(line.size()) + 1});
  return tokens;
}

// ---------------------------------------------------------------------------
// Token cursor with the phase-expression grammar

class Cursor {
 public:
  explicit Cursor(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek() const { return tokens_[std::min(pos_, tokens_.size() - 1)]; }
  const Token& next() { return tokens_[std::min(pos_++, tokens_.size() - 1)]; }
  bool at_end() const { return peek().type == Token::Type::End; }

  bool accept_punct(char c) {
    if (peek().type == Token::Type::Punct && peek().text[0] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect_punct(char c, const char* context) {
    if (!accept_punct(c)) {
      throw LineFailure{peek().column, ParseErrorKind::SyntaxError,
                        std::string("expected '") + c + "' " + context};
    }
  }

  std::string expect_ident(const char* what) {
    if (peek().type != Token::Type::Ident) {
      throw LineFailure{peek().column, ParseErrorKind::SyntaxError,
                        std::string("expected ") + what};
    }
    return next().text;
  }

  void expect_keyword(std::string_view keyword) {
    if (peek().type != Token::Type::Ident || peek().text != keyword) {
      throw LineFailure{peek().column, ParseErrorKind::SyntaxError,
                        "expected '" + std::string(keyword) + "'"};
    }
    ++pos_;
  }

  bool accept_keyword(std::string_view keyword) {
    if (peek().type == Token::Type::Ident && peek().text == keyword) {
      ++pos_;
      return true;
    }
    return false;
  }

  double expect_number(const char* what) {
    if (peek().type != Token::Type::Number) {
      throw LineFailure{peek().column, ParseErrorKind::BadPhaseExpr,
                        std::string("expected ") + what};
    }
    return next().number;
  }

  // expr := term (('+'|'-') term)*
  double parse_expr() {
    double value = parse_term();
    while (true) {
      if (accept_punct('+')) {
        value += parse_term();
      } else if (accept_punct('-')) {
        value -= parse_term();
      } else {
        return value;
      }
    }
  }

 private:
  // term := NUMBER | NUMBER '*' 'pi' | 'pi' | 'pi' '/' NUMBER
  double parse_term() {
    if (peek().type == Token::Type::Number) {
      double value = next().number;
      if (accept_punct('*')) {
        if (peek().type != Token::Type::Ident || peek().text != "pi") {
          throw LineFailure{peek().column, ParseErrorKind::BadPhaseExpr,
                            "expected 'pi' after '*'"};
        }
        ++pos_;
        return value * std::numbers::pi;
      }
      return value;
    }
    if (peek().type == Token::Type::Ident && peek().text == "pi") {
      int pi_column = peek().column;
      ++pos_;
      if (accept_punct('/')) {
        if (peek().type != Token::Type::Number) {
          throw LineFailure{peek().column, ParseErrorKind::BadPhaseExpr,
                            "expected a number after '/'"};
        }
        double divisor = next().number;
        if (divisor == 0.0) {
          throw LineFailure{pi_column, ParseErrorKind::BadPhaseExpr, "division by zero"};
        }
        return std::numbers::pi / divisor;
      }
      return std::numbers::pi;
    }
    throw LineFailure{peek().column, ParseErrorKind::BadPhaseExpr,
                      "expected a number or 'pi'"};
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Statement parsing

struct SpanBook {
  std::map<ModeId, std::vector<SourceSpan>> produced_at;
  std::map<ModeId, std::vector<SourceSpan>> consumed_at;
  std::map<ModeId, SourceSpan> segment_at;
  std::map<std::string, SourceSpan> id_at;

  SourceSpan lookup_mode(const ModeId& mode) const {
    if (auto it = consumed_at.find(mode); it != consumed_at.end()) {
      return it->second.front();
    }
    if (auto it = produced_at.find(mode); it != produced_at.end()) {
      return it->second.front();
    }
    if (auto it = segment_at.find(mode); it != segment_at.end()) {
      return it->second;
    }
    return {1, 1};
  }

  SourceSpan lookup_id(const std::string& id) const {
    if (auto it = id_at.find(id); it != id_at.end()) {
      return it->second;
    }
    return {1, 1};
  }
};

class Parser {
 public:
  ParseResult run(std::string_view text) {
    int line_number = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t end = text.find('\n', start);
      std::string_view line = end == std::string_view::npos
                                  ? text.substr(start)
                                  : text.substr(start, end - start);
      ++line_number;
      parse_line(line, line_number);
      if (end == std::string_view::npos) {
        break;
      }
      start = end + 1;
    }
    if (!errors_.empty()) {
      return {std::nullopt, sorted_errors()};
    }
    map_violations(validate(circuit_));
    if (!errors_.empty()) {
      return {std::nullopt, sorted_errors()};
    }
    return {std::move(circuit_), {}};
  }

 private:
  void parse_line(std::string_view line, int line_number) {
    try {
      Cursor cursor(tokenize_line(line));
      if (cursor.at_end()) {
        return;
      }
      dispatch(cursor, line_number);
      if (!cursor.at_end()) {
        throw LineFailure{cursor.peek().column, ParseErrorKind::SyntaxError,
                          "unexpected trailing input"};
      }
    } catch (const LineFailure& failure) {
      errors_.push_back({{line_number, failure.column}, failure.kind, failure.message});
    }
  }

  void dispatch(Cursor& cursor, int line) {
    const Token& head = cursor.peek();
    if (head.type != Token::Type::Ident) {
      throw LineFailure{head.column, ParseErrorKind::SyntaxError, "expected a statement keyword"};
    }
    if (cursor.accept_keyword("source")) {
      parse_source(cursor, line);
    } else if (cursor.accept_keyword("bs")) {
      parse_beam_splitter(cursor, line);
    } else if (cursor.accept_keyword("mirror")) {
      parse_mirror(cursor, line);
    } else if (cursor.accept_keyword("phase")) {
      parse_phase(cursor, line);
    } else if (cursor.accept_keyword("segment")) {
      parse_segment(cursor, line);
    } else if (cursor.accept_keyword("detector")) {
      parse_detector(cursor, line);
    } else {
      throw LineFailure{head.column, ParseErrorKind::UnknownKeyword,
                        "unknown statement keyword '" + head.text + "'"};
    }
  }

  std::string claim_id(Cursor& cursor, int line, const char* what) {
    int column = cursor.peek().column;
    std::string id = cursor.expect_ident(what);
    if (!book_.id_at.emplace(id, SourceSpan{line, column}).second) {
      throw LineFailure{column, ParseErrorKind::DuplicateId,
                        "id '" + id + "' is already defined"};
    }
    return id;
  }

  ModeId parse_mode(Cursor& cursor, int line, bool produced) {
    int column = cursor.peek().column;
    ModeId mode = cursor.expect_ident("a mode name");
    auto& book = produced ? book_.produced_at : book_.consumed_at;
    book[mode].push_back({line, column});
    return mode;
  }

  std::optional<ModeId> parse_mode_or_open(Cursor& cursor, int line) {
    if (cursor.accept_punct('-')) {
      return std::nullopt;
    }
    return parse_mode(cursor, line, /*produced=*/false);
  }

  void parse_source(Cursor& cursor, int line) {
    if (cursor.accept_keyword("single")) {
      std::string id = claim_id(cursor, line, "a source id");
      cursor.expect_keyword("out");
      cursor.expect_punct('(', "after 'out'");
      ModeId out = parse_mode(cursor, line, /*produced=*/true);
      cursor.expect_punct(')', "after the mode");
      circuit_.sources.push_back({id, SinglePhoton{out}});
      return;
    }
    if (cursor.accept_keyword("pair")) {
      std::string id = claim_id(cursor, line, "a source id");
      PairSource pair;
      cursor.expect_keyword("top");
      cursor.expect_punct('(', "after 'top'");
      pair.top[0] = parse_mode(cursor, line, /*produced=*/true);
      cursor.expect_punct(',', "between modes");
      pair.top[1] = parse_mode(cursor, line, /*produced=*/true);
      cursor.expect_punct(')', "after the modes");
      cursor.expect_keyword("bottom");
      cursor.expect_punct('(', "after 'bottom'");
      pair.bottom[0] = parse_mode(cursor, line, /*produced=*/true);
      cursor.expect_punct(',', "between modes");
      pair.bottom[1] = parse_mode(cursor, line, /*produced=*/true);
      cursor.expect_punct(')', "after the modes");
      if (cursor.accept_keyword("align")) {
        cursor.expect_punct('(', "after 'align'");
        pair.align_in = parse_mode(cursor, line, /*produced=*/false);
        cursor.expect_punct(')', "after the mode");
      }
      circuit_.sources.push_back({id, pair});
      return;
    }
    throw LineFailure{cursor.peek().column, ParseErrorKind::UnknownKeyword,
                      "expected 'single' or 'pair' after 'source'"};
  }

  void parse_beam_splitter(Cursor& cursor, int line) {
    std::string id = claim_id(cursor, line, "an element id");
    BeamSplitter bs;
    cursor.expect_keyword("in");
    cursor.expect_punct('(', "after 'in'");
    bs.in[0] = parse_mode_or_open(cursor, line);
    cursor.expect_punct(',', "between modes");
    bs.in[1] = parse_mode_or_open(cursor, line);
    cursor.expect_punct(')', "after the modes");
    cursor.expect_keyword("out");
    cursor.expect_punct('(', "after 'out'");
    bs.out[0] = parse_mode(cursor, line, /*produced=*/true);
    cursor.expect_punct(',', "between modes");
    bs.out[1] = parse_mode(cursor, line, /*produced=*/true);
    cursor.expect_punct(')', "after the modes");
    if (cursor.accept_keyword("refl")) {
      cursor.expect_punct('(', "after 'refl'");
      bs.reflection_phase = reduce_phase(cursor.parse_expr());
      cursor.expect_punct(')', "after the expression");
    }
    circuit_.elements.push_back({id, bs});
  }

  void parse_mirror(Cursor& cursor, int line) {
    std::string id = claim_id(cursor, line, "an element id");
    Mirror mirror;
    cursor.expect_keyword("in");
    cursor.expect_punct('(', "after 'in'");
    mirror.in = parse_mode(cursor, line, /*produced=*/false);
    cursor.expect_punct(')', "after the mode");
    cursor.expect_keyword("out");
    cursor.expect_punct('(', "after 'out'");
    mirror.out = parse_mode(cursor, line, /*produced=*/true);
    cursor.expect_punct(')', "after the mode");
    if (cursor.accept_keyword("refl")) {
      cursor.expect_punct('(', "after 'refl'");
      mirror.reflection_phase = reduce_phase(cursor.parse_expr());
      cursor.expect_punct(')', "after the expression");
    }
    circuit_.elements.push_back({id, mirror});
  }

  void parse_phase(Cursor& cursor, int line) {
    std::string id = claim_id(cursor, line, "an element id");
    PhaseShifter shifter;
    cursor.expect_keyword("in");
    cursor.expect_punct('(', "after 'in'");
    shifter.in = parse_mode(cursor, line, /*produced=*/false);
    cursor.expect_punct(')', "after the mode");
    cursor.expect_keyword("out");
    cursor.expect_punct('(', "after 'out'");
    shifter.out = parse_mode(cursor, line, /*produced=*/true);
    cursor.expect_punct(')', "after the mode");
    cursor.expect_keyword("value");
    cursor.expect_punct('(', "after 'value'");
    shifter.value = reduce_phase(cursor.parse_expr());
    cursor.expect_punct(')', "after the expression");
    circuit_.elements.push_back({id, shifter});
  }

  void parse_segment(Cursor& cursor, int line) {
    int column = cursor.peek().column;
    ModeId mode = cursor.expect_ident("a mode name");
    if (!book_.segment_at.emplace(mode, SourceSpan{line, column}).second) {
      throw LineFailure{column, ParseErrorKind::DuplicateId,
                        "mode '" + mode + "' already has a segment"};
    }
    double phase = 0.0;
    if (cursor.accept_keyword("phase")) {
      cursor.expect_punct('(', "after 'phase'");
      phase = reduce_phase(cursor.parse_expr());
      cursor.expect_punct(')', "after the expression");
    } else if (cursor.accept_keyword("length")) {
      cursor.expect_punct('(', "after 'length'");
      int length_column = cursor.peek().column;
      double length = cursor.expect_number("a length in nm");
      cursor.expect_punct(')', "after the number");
      cursor.expect_keyword("lambda");
      cursor.expect_punct('(', "after 'lambda'");
      int lambda_column = cursor.peek().column;
      double lambda = cursor.expect_number("a wavelength in nm");
      cursor.expect_punct(')', "after the number");
      if (length < 0.0) {
        throw LineFailure{length_column, ParseErrorKind::BadPhaseExpr,
                          "length must be non-negative"};
      }
      if (lambda <= 0.0) {
        throw LineFailure{lambda_column, ParseErrorKind::BadPhaseExpr,
                          "wavelength must be positive"};
      }
      phase = propagation_phase(length, lambda);
    } else {
      throw LineFailure{cursor.peek().column, ParseErrorKind::SyntaxError,
                        "expected 'phase' or 'length'"};
    }
    circuit_.segments.push_back({mode, phase});
  }

  void parse_detector(Cursor& cursor, int line) {
    std::string id = claim_id(cursor, line, "a detector id");
    cursor.expect_keyword("mode");
    cursor.expect_punct('(', "after 'mode'");
    ModeId mode = parse_mode(cursor, line, /*produced=*/false);
    cursor.expect_punct(')', "after the mode");
    circuit_.detectors.push_back({id, mode});
  }

  void map_violations(const std::vector<Violation>& violations) {
    for (const Violation& v : violations) {
      switch (v.kind) {
        case ViolationKind::DanglingMode: {
          errors_.push_back({book_.lookup_mode(v.subject), ParseErrorKind::UnknownMode,
                             "mode '" + v.subject + "' is never produced"});
          break;
        }
        case ViolationKind::UnconsumedMode: {
          errors_.push_back({book_.lookup_mode(v.subject), ParseErrorKind::UnknownMode,
                             "mode '" + v.subject + "' is never consumed"});
          break;
        }
        case ViolationKind::DuplicateProducer:
        case ViolationKind::DuplicateConsumer: {
          const auto& book = v.kind == ViolationKind::DuplicateProducer ? book_.produced_at
                                                                        : book_.consumed_at;
          SourceSpan span{1, 1};
          if (auto it = book.find(v.subject); it != book.end()) {
            span = it->second.size() > 1 ? it->second[1] : it->second.front();
          }
          errors_.push_back({span, ParseErrorKind::DuplicateId, v.message});
          break;
        }
        case ViolationKind::CycleDetected:
        case ViolationKind::UnreachableDetector: {
          errors_.push_back({book_.lookup_id(v.subject), ParseErrorKind::UnknownMode, v.message});
          break;
        }
        case ViolationKind::PairModeOverlap: {
          errors_.push_back({book_.lookup_id(v.subject), ParseErrorKind::DuplicateId, v.message});
          break;
        }
        default: {
          errors_.push_back({book_.lookup_id(v.subject), ParseErrorKind::SyntaxError, v.message});
          break;
        }
      }
    }
  }

  std::vector<ParseError> sorted_errors() {
    std::stable_sort(errors_.begin(), errors_.end(), [](const ParseError& a, const ParseError& b) {
      return a.span.line != b.span.line ? a.span.line < b.span.line
                                        : a.span.column < b.span.column;
    });
    return errors_;
  }

  Circuit circuit_;
  SpanBook book_;
  std::vector<ParseError> errors_;
};

// ---------------------------------------------------------------------------
// Serialization

std::string fmt_num(double value) {
  std::array<char, 40> buf;
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

std::string mode_or_open(const std::optional<ModeId>& mode) {
  return mode ? *mode : "-";
}

}  // namespace

std::string_view parse_error_kind_name(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::SyntaxError: return "SyntaxError";
    case ParseErrorKind::UnknownKeyword: return "UnknownKeyword";
    case ParseErrorKind::UnknownMode: return "UnknownMode";
    case ParseErrorKind::DuplicateId: return "DuplicateId";
    case ParseErrorKind::BadPhaseExpr: return "BadPhaseExpr";
  }
  return "Unknown";
}

std::string ParseError::str() const {
  return std::to_string(span.line) + ":" + std::to_string(span.column) + ": " +
         std::string(parse_error_kind_name(kind)) + ": " + message;
}

ParseResult parse(std::string_view text) {
  Parser parser;
  return parser.run(text);
}

std::string serialize(const Circuit& circuit) {
  std::vector<Violation> violations = validate(circuit);
  if (!violations.empty()) {
    throw std::invalid_argument("serialize: circuit does not validate: " +
                                violations.front().str());
  }

  std::string out = "# photonic interferometer circuit\n";

  std::vector<const Source*> sources;
  for (const Source& s : circuit.sources) {
    sources.push_back(&s);
  }
  std::sort(sources.begin(), sources.end(),
            [](const Source* a, const Source* b) { return a->id < b->id; });
  for (const Source* s : sources) {
    if (const auto* single = std::get_if<SinglePhoton>(&s->kind)) {
      out += "source single " + s->id + " out(" + single->out + ")\n";
    } else {
      const auto& pair = std::get<PairSource>(s->kind);
      out += "source pair " + s->id + " top(" + pair.top[0] + ", " + pair.top[1] + ") bottom(" +
             pair.bottom[0] + ", " + pair.bottom[1] + ")";
      if (pair.align_in) {
        out += " align(" + *pair.align_in + ")";
      }
      out += "\n";
    }
  }

  std::vector<const Element*> elements;
  for (const Element& e : circuit.elements) {
    elements.push_back(&e);
  }
  std::sort(elements.begin(), elements.end(),
            [](const Element* a, const Element* b) { return a->id < b->id; });
  for (const Element* e : elements) {
    if (const auto* bs = std::get_if<BeamSplitter>(&e->kind)) {
      out += "bs " + e->id + " in(" + mode_or_open(bs->in[0]) + ", " + mode_or_open(bs->in[1]) +
             ") out(" + bs->out[0] + ", " + bs->out[1] + ")";
      if (bs->reflection_phase != kHalfPi) {
        out += " refl(" + fmt_num(bs->reflection_phase) + ")";
      }
      out += "\n";
    } else if (const auto* mirror = std::get_if<Mirror>(&e->kind)) {
      out += "mirror " + e->id + " in(" + mirror->in + ") out(" + mirror->out + ")";
      if (mirror->reflection_phase != kHalfPi) {
        out += " refl(" + fmt_num(mirror->reflection_phase) + ")";
      }
      out += "\n";
    } else {
      const auto& shifter = std::get<PhaseShifter>(e->kind);
      out += "phase " + e->id + " in(" + shifter.in + ") out(" + shifter.out + ") value(" +
             fmt_num(shifter.value) + ")\n";
    }
  }

  std::vector<Segment> segments = circuit.segments;
  std::sort(segments.begin(), segments.end(),
            [](const Segment& a, const Segment& b) { return a.mode < b.mode; });
  for (const Segment& s : segments) {
    double phase = reduce_phase(s.propagation_phase);
    if (phase != 0.0) {
      out += "segment " + s.mode + " phase(" + fmt_num(phase) + ")\n";
    }
  }

  std::vector<const Detector*> detectors;
  for (const Detector& d : circuit.detectors) {
    detectors.push_back(&d);
  }
  std::sort(detectors.begin(), detectors.end(),
            [](const Detector* a, const Detector* b) { return a->id < b->id; });
  for (const Detector* d : detectors) {
    out += "detector " + d->id + " mode(" + d->mode + ")\n";
  }
  return out;
}

bool structurally_equal(const Circuit& a, const Circuit& b) {
  return serialize(a) == serialize(b);
}

std::optional<double> evaluate_phase_expr(std::string_view text, std::string* error) {
  try {
    Cursor cursor(tokenize_line(text));
    if (cursor.at_end()) {
      throw LineFailure{1, ParseErrorKind::BadPhaseExpr, "empty expression"};
    }
    double value = cursor.parse_expr();
    if (!cursor.at_end()) {
      throw LineFailure{cursor.peek().column, ParseErrorKind::BadPhaseExpr,
                        "unexpected trailing input"};
    }
    return value;
  } catch (const LineFailure& failure) {
    if (error != nullptr) {
      *error = failure.message;
    }
    return std::nullopt;
  }
}

}  // namespace picsim
