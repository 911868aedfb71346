#ifndef PICSIM_DSL_HPP
#define PICSIM_DSL_HPP

// Line-oriented text format for circuits (".pic" files). One statement per
// line, '#' starts a comment, statements may appear in any order:
//
//   source single <id> out(<m>)
//   source pair <id> top(<m>,<m>) bottom(<m>,<m>) [align(<m>)]
//   bs <id> in(<m>|-,<m>|-) out(<m>,<m>) [refl(<expr>)]
//   mirror <id> in(<m>) out(<m>) [refl(<expr>)]
//   phase <id> in(<m>) out(<m>) value(<expr>)
//   segment <m> phase(<expr>)
//   segment <m> length(<number>) lambda(<number>)
//   detector <id> mode(<m>)
//
// Phase expressions: expr := term (('+'|'-') term)*;
//                    term := NUMBER | NUMBER '*' 'pi' | 'pi' | 'pi' '/' NUMBER.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "picsim/circuit.hpp"

namespace picsim {

struct SourceSpan {
  int line = 1;    // 1-based
  int column = 1;  // 1-based
};

enum class ParseErrorKind {
  SyntaxError,
  UnknownKeyword,
  UnknownMode,
  DuplicateId,
  BadPhaseExpr,
};

std::string_view parse_error_kind_name(ParseErrorKind kind);

struct ParseError {
  SourceSpan span;
  ParseErrorKind kind;
  std::string message;

  std::string str() const;  // "<line>:<col>: <kind>: <message>"
};

struct ParseResult {
  std::optional<Circuit> circuit;  // set iff errors is empty
  std::vector<ParseError> errors;

  bool ok() const { return errors.empty(); }
};

/// Parses circuit text. All detectable errors are reported, each with a
/// source position. On success the circuit passes validate() cleanly.
ParseResult parse(std::string_view text);

/// Canonical text form: statements sorted by id, phases printed with
/// shortest round-trip precision, zero-phase segments and default
/// reflection phases omitted. Throws std::invalid_argument when the
/// circuit does not validate.
std::string serialize(const Circuit& circuit);

/// Structural equality up to statement order, compared on canonical
/// serializations. Both circuits must validate.
bool structurally_equal(const Circuit& a, const Circuit& b);

/// Evaluates the DSL phase-expression grammar. Returns std::nullopt and
/// fills `error` (when given) on malformed input.
std::optional<double> evaluate_phase_expr(std::string_view text, std::string* error = nullptr);

}  // namespace picsim

#endif
