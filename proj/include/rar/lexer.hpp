/// @file lexer.hpp
/// @brief Tokenizer for RAR source text.

#pragma once

#include "rar/ast.hpp"

#include <string_view>
#include <variant>
#include <vector>

namespace rar {

struct LexError {
  enum class Kind { UnknownCharacter, UnterminatedComment };
  Kind kind;
  SourceSpan span;
  std::string message;
};

using TokenizeResult = std::variant<std::vector<Token>, LexError>;

/// Splits `source` into tokens. Comments are kept as Comment tokens and
/// whitespace is dropped; the text between consecutive tokens is always
/// pure whitespace, so the source can be rebuilt from lexemes and offsets.
TokenizeResult tokenize(std::string_view source, std::uint32_t file_id = 0);

/// Lexemes joined with the original inter-token whitespace.
std::string reconstruct(std::string_view source, const std::vector<Token> &tokens);

} // namespace rar
