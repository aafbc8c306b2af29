/// @file checker.hpp
/// @brief Subset rules that make a parsed program translatable to RAC.
///
/// Rule table (codes are stable; every diagnostic cites one):
///
/// | code | severity | rule                                                        |
/// |------|----------|-------------------------------------------------------------|
/// | R001 | error    | no reference-typed parameters, locals, fields or returns   |
/// | R002 | error    | no recursion, direct or mutual                              |
/// | R003 | error    | loop bounds are constant; loop variable not assigned; no   |
/// |      |          | `return` inside a loop body                                 |
/// | R004 | error    | array indices have type `usize`                             |
/// | R005 | error    | no global state other than `const` items                    |
/// | R006 | error    | every function returns on all paths                         |
/// | R007 | error    | calls target functions of the same program, with matching  |
/// |      |          | arity                                                       |
/// | R008 | error    | callee defined before caller                                |
/// | R009 | error    | names resolve and are not defined twice                     |
/// | R010 | error    | assignments target mutable bindings                         |
/// | R011 | error    | supported type forms only (flat records, scalar arrays of  |
/// |      |          | positive constant length, in-range constants)               |
/// | R012 | warning  | `uint` is accepted as an alias of `usize`, but is not Rust |
/// | S001 | error    | syntax error                                                |
/// | S002 | error    | lexical error                                               |

#pragma once

#include "rar/ast.hpp"

#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace rar {

struct RuleInfo {
  std::string_view code;
  Severity severity;
  std::string_view description;
};

const std::vector<RuleInfo> &rule_table();
/// nullptr for codes outside the table.
const RuleInfo *find_rule(std::string_view code);

/// Diagnostics in source order. Empty iff the program is in the subset
/// (warnings included: a clean program yields nothing at all).
std::vector<Diagnostic> check_program(const Program &program);

using ConstEnv = std::map<std::string, std::uint64_t>;

struct ConstEvalError {
  enum class Kind { NonConstant, Underflow, Overflow };
  Kind kind;
  SourceSpan span;
};

/// Evaluates literals, constant names and `+ - *` exactly over u64.
std::variant<std::uint64_t, ConstEvalError> evaluate_const(const Expr &expr, const ConstEnv &env);

} // namespace rar
