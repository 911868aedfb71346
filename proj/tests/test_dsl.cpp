#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <string>

#include "picsim/dsl.hpp"
#include "picsim/scenarios.hpp"
#include "support/random_circuits.hpp"
#include "support/reference_eval.hpp"

using namespace picsim;

namespace {

const char* kMziText = R"(# a minimal two-arm interferometer
source single SRC out(e1)
bs BS1 in(e1, -) out(b1, t1)
mirror MA in(t1) out(t2)
phase PHI in(t2) out(t3) value(pi/2)
mirror MB in(b1) out(b2)
bs BS2 in(t3, b2) out(c, d)
detector bright mode(c)
detector dark mode(d)
)";

bool has_error(const ParseResult& result, ParseErrorKind kind, int line) {
  for (const ParseError& error : result.errors) {
    if (error.kind == kind && error.span.line == line) {
      return true;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("parse builds the minimal interferometer") {
  ParseResult result = parse(kMziText);
  REQUIRE(result.ok());
  const Circuit& c = *result.circuit;
  CHECK(c.elements.size() == 5);
  CHECK(c.detectors.size() == 2);
  CHECK(c.sources.size() == 1);
  CHECK(validate(c).empty());
  CHECK(std::get<PhaseShifter>(c.find_element("PHI")->kind).value ==
        doctest::Approx(kHalfPi).epsilon(1e-15));
}

TEST_CASE("parse accepts CRLF line endings") {
  std::string crlf;
  for (const char* p = kMziText; *p != '\0'; ++p) {
    if (*p == '\n') {
      crlf += '\r';
    }
    crlf += *p;
  }
  ParseResult result = parse(crlf);
  REQUIRE(result.ok());
  CHECK(result.circuit->elements.size() == 5);
}

TEST_CASE("parse reports an undeclared mode with its statement position") {
  std::string text = kMziText;
  std::size_t pos = text.find("in(t3, b2)");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 10, "in(zz, b2)");
  ParseResult result = parse(text);
  REQUIRE(!result.ok());
  CHECK(has_error(result, ParseErrorKind::UnknownMode, 7));   // the bs BS2 line
  CHECK(has_error(result, ParseErrorKind::UnknownMode, 5));   // t3 is now unconsumed
}

TEST_CASE("parse reports every error, not just the first") {
  ParseResult result = parse("bss X in(a,b) out(c,d)\n"
                             "mirror M in(a\n"
                             "phase F in(x) out(y) value(pi//2)\n");
  REQUIRE(!result.ok());
  CHECK(result.errors.size() >= 3);
  CHECK(has_error(result, ParseErrorKind::UnknownKeyword, 1));
  CHECK(has_error(result, ParseErrorKind::SyntaxError, 2));
  CHECK(has_error(result, ParseErrorKind::BadPhaseExpr, 3));
}

TEST_CASE("negative corpus: every malformed input yields a positioned error") {
  struct Sample {
    const char* text;
    ParseErrorKind kind;
  };
  const Sample corpus[] = {
      {"bss X in(a, b) out(c, d)", ParseErrorKind::UnknownKeyword},
      {"source twin S out(a)", ParseErrorKind::UnknownKeyword},
      {"bs B1 in(a b) out(c, d)", ParseErrorKind::SyntaxError},
      {"bs B1 in(a, -) out(c)", ParseErrorKind::SyntaxError},
      {"source single S out()", ParseErrorKind::SyntaxError},
      {"detector D", ParseErrorKind::SyntaxError},
      {"segment m phase(2*)", ParseErrorKind::BadPhaseExpr},
      {"phase F in(a) out(b) value(pi//2)", ParseErrorKind::BadPhaseExpr},
      {"phase F in(a) out(b) value(pi/0)", ParseErrorKind::BadPhaseExpr},
      {"segment m length(5) lambda(0)", ParseErrorKind::BadPhaseExpr},
      {"phase F in(a) out(b) value(1e999)", ParseErrorKind::BadPhaseExpr},
      {"source single S out(q) @", ParseErrorKind::SyntaxError},
      {"source single S out(a)\nsource single S out(b)", ParseErrorKind::DuplicateId},
      {"segment m phase(1)\nsegment m phase(2)", ParseErrorKind::DuplicateId},
      {"source single S out(a)\nmirror M in(a) out(a2)\nmirror N in(a) out(a3)\n"
       "detector D1 mode(a2)\ndetector D2 mode(a3)",
       ParseErrorKind::DuplicateId},
      {"source single S out(a)\nmirror M1 in(a) out(b)\nmirror M2 in(b) out(c)\n"
       "mirror LOOP1 in(x) out(y)\nmirror LOOP2 in(y) out(x)\ndetector D mode(c)",
       ParseErrorKind::UnknownMode},
  };
  int index = 0;
  for (const Sample& sample : corpus) {
    CAPTURE(index);
    CAPTURE(sample.text);
    ParseResult result = parse(sample.text);
    CHECK(!result.ok());
    CHECK(!result.circuit.has_value());
    bool kind_seen = false;
    for (const ParseError& error : result.errors) {
      CHECK(error.span.line >= 1);
      CHECK(error.span.column >= 1);
      kind_seen = kind_seen || error.kind == sample.kind;
    }
    CHECK(kind_seen);
    ++index;
  }
}

TEST_CASE("out() with no mode reports the empty expression position") {
  // The missing mode is caught as a syntax error at the ')' column.
  ParseResult result = parse("source single S out()");
  REQUIRE(!result.ok());
  CHECK(result.errors.front().span.column >= 20);
}

TEST_CASE("phase expressions match the reference evaluator") {
  const char* corpus[] = {
      "pi",       "pi/2",     "pi/4",      "2*pi",       "0.5*pi",  "1.5",
      "0",        "pi+1",     "pi-0.5",    "1+2+3",      "0-pi/2",  "1e-3",
      "2.5e2*pi", "pi/4+pi/4", "1.25e-2",  "3-1-1",      "pi+pi-pi", "0.125*pi+pi/8",
  };
  for (const char* text : corpus) {
    CAPTURE(text);
    auto ours = evaluate_phase_expr(text);
    auto reference = testing::reference_phase_eval(text);
    REQUIRE(ours.has_value());
    REQUIRE(reference.has_value());
    CHECK(*ours == doctest::Approx(*reference).epsilon(1e-12));
  }
}

TEST_CASE("random phase expressions match the reference evaluator") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> term_count(1, 5);
  std::uniform_int_distribution<int> term_kind(0, 3);
  std::uniform_real_distribution<double> number(0.0, 20.0);
  for (int i = 0; i < 200; ++i) {
    std::string expr;
    int terms = term_count(rng);
    for (int t = 0; t < terms; ++t) {
      if (t > 0) {
        expr += rng() % 2 == 0 ? " + " : " - ";
      }
      char buf[40];
      switch (term_kind(rng)) {
        case 0:
          expr += "pi";
          break;
        case 1:
          std::snprintf(buf, sizeof buf, "%.6f*pi", number(rng));
          expr += buf;
          break;
        case 2:
          std::snprintf(buf, sizeof buf, "pi/%.4f", number(rng) + 0.5);
          expr += buf;
          break;
        default:
          std::snprintf(buf, sizeof buf, "%.6f", number(rng));
          expr += buf;
          break;
      }
    }
    CAPTURE(expr);
    auto ours = evaluate_phase_expr(expr);
    auto reference = testing::reference_phase_eval(expr);
    REQUIRE(ours.has_value());
    REQUIRE(reference.has_value());
    CHECK(*ours == doctest::Approx(*reference).epsilon(1e-12));
  }
}

TEST_CASE("malformed expressions are rejected") {
  for (const char* text : {"", "pi pi", "1..2", "*pi", "pi/", "2*", "+1", "-pi", "pi*2"}) {
    CAPTURE(text);
    CHECK(!evaluate_phase_expr(text).has_value());
  }
}

TEST_CASE("serialize then parse is the identity on the canonical setups") {
  for (const Circuit& c : {build_mzi(0.7), build_jaeger(0.4, 1.1), build_lemos(0.9),
                           build_lemos(0.9, true)}) {
    std::string text = serialize(c);
    ParseResult result = parse(text);
    REQUIRE(result.ok());
    CHECK(structurally_equal(*result.circuit, c));
    CHECK(serialize(*result.circuit) == text);
  }
}

TEST_CASE("pair-source branch syntax survives the round trip") {
  Circuit c = build_jaeger(0.3, 0.6);
  ParseResult result = parse(serialize(c));
  REQUIRE(result.ok());
  const auto& pair = std::get<PairSource>(result.circuit->find_source("PS")->kind);
  CHECK(pair.top[0] == "a1");
  CHECK(pair.bottom[1] == "b2");
  CHECK(structurally_equal(*result.circuit, c));
}

TEST_CASE("round trip holds on random circuits") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 60; ++i) {
    Circuit c = i % 2 == 0 ? testing::random_single_photon_circuit(rng)
                           : testing::random_pair_circuit(rng);
    CAPTURE(i);
    REQUIRE(validate(c).empty());
    std::string text = serialize(c);
    CAPTURE(text);
    ParseResult result = parse(text);
    REQUIRE(result.ok());
    CHECK(structurally_equal(*result.circuit, c));
  }
}

TEST_CASE("serialize rejects invalid circuits") {
  Circuit c = build_mzi(0.0);
  c.detectors.push_back({"DX", "nowhere"});
  CHECK_THROWS_AS(serialize(c), std::invalid_argument);
}

TEST_CASE("empty circuit serializes to the header comment only") {
  std::string text = serialize(Circuit{});
  CHECK(text.find('#') == 0);
  CHECK(text.find('\n') == text.size() - 1);
  ParseResult result = parse(text);
  REQUIRE(result.ok());
  CHECK(result.circuit->elements.empty());
  CHECK(result.circuit->sources.empty());
  CHECK(structurally_equal(*result.circuit, Circuit{}));
}

TEST_CASE("zero-phase segments are canonicalized away") {
  Circuit c = build_mzi(0.2);
  c.segments.push_back({"t1", 0.0});
  Circuit plain = build_mzi(0.2);
  CHECK(structurally_equal(c, plain));
}
