/// @file emitter.hpp
/// @brief RAR to Restricted Algorithmic C (RAC) source translation.
///
/// Type mapping:
///
///   usize / uint -> uint        uN -> uiN        iN -> siN
///   bool -> bool                [T; N] -> array<T', N>
///   record R -> R (passed and returned by value)
///
/// `for i in lo..hi { }` becomes `for (uint i = lo; i < hi; i++) { }`,
/// `let mut` becomes a plain local declaration, the derive attribute and
/// comments are dropped. Expressions are re-parenthesised for C++
/// precedence, which differs from Rust for bitwise and comparison
/// operators.

#pragma once

#include "rar/ast.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace rar {

enum class Dialect { AlgorithmicC, VivadoHLS, PlainCxx };

/// "ac", "vivado", "plain" (the CLI spellings).
std::optional<Dialect> parse_dialect(std::string_view name);
const char *dialect_name(Dialect dialect);

struct EmitOptions {
  Dialect dialect = Dialect::PlainCxx;
  int indent_width = 2; ///< must lie in [1, 8]
};

std::string map_type(const TypeExpr &type);

/// Include block and integer typedefs for the chosen dialect. The
/// Algorithmic C and Vivado HLS prologues are the same conditional block;
/// they differ only in which branch is selected when the including build
/// does not choose one itself.
std::string header_prologue(Dialect dialect);

/// Translates a program that `check_program` accepted without errors.
/// Throws std::invalid_argument if `opts.indent_width` is out of range.
std::string emit_program(const Program &program, const EmitOptions &opts = {});

} // namespace rar
