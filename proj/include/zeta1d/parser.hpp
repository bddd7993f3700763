#ifndef ZETA1D_PARSER_HPP
#define ZETA1D_PARSER_HPP

#include <string>

#include "zeta1d/scheme.hpp"

namespace zeta1d {

/// Parses the scheme-description language.
///
///   scheme := "SpecZ" | "SpecOF(" field ")" | "SpecF(" int ")" | "A1(" int ")"
///           | "Curve(" int ";" intlist ")"
///           | "remove(" scheme ";" targets ")"
///           | "union(" scheme {"," scheme} ")"
///           | "glue(" scheme "@" point "," scheme "@" point ")"
///   field  := "Q" | "Quad(" int ")" | "Cyclo(" int ")" | "CycloPlus(" int ")"
///           | "Abelian(" int ";" intlist ")"
///   targets := int {"," int}                 (primes, number rings)
///            | "deg" int {"," "deg" int}     (point degrees, curves)
///   point  := "p=" int ["#" int] | "deg=" int
///
/// Whitespace-insensitive. The result is normalized. Syntax errors carry a
/// SourceSpan into the input.
SchemeExpr parse(const std::string& text);

/// Canonical text with parse(print(e)) == e for normalized e.
std::string print(const SchemeExpr& expr);

} // namespace zeta1d

#endif
