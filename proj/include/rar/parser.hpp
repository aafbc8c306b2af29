/// @file parser.hpp
/// @brief Recursive-descent parser producing a `Program` from RAR tokens.

#pragma once

#include "rar/ast.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace rar {

/// Either a program or at least one Error diagnostic; never both empty.
struct ParseResult {
  std::optional<Program> program;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return program.has_value(); }
};

/// Maps file ids carried in spans back to the paths they were read from.
class FileTable {
public:
  std::uint32_t intern(const std::string &path);
  const std::string &path(std::uint32_t file_id) const;

private:
  std::vector<std::string> paths_;
};

/// The file could not be read at all (missing, a directory, permissions).
struct IoError {
  std::string path;
  std::string message;
};

/// Parses a token stream. Comment tokens are skipped. Never throws on bad
/// input: syntax errors come back as S001 diagnostics.
ParseResult parse(const std::vector<Token> &tokens);

/// tokenize + parse. Lexical errors are reported as S002 diagnostics.
ParseResult parse_source(std::string_view source, std::uint32_t file_id = 0);

std::variant<ParseResult, IoError> parse_file(const std::filesystem::path &path, FileTable &files);

/// Reads a whole file, or reports why it could not be read.
std::variant<std::string, IoError> read_source_file(const std::filesystem::path &path);

} // namespace rar
