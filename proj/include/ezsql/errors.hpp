#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace ezsql {

enum class ErrorKind {
  // lexing / parsing
  UnterminatedString,
  IllegalCharacter,
  SyntaxError,
  UnsupportedFeature,
  // catalog
  MalformedCatalog,
  DuplicateDbId,
  DanglingKeyReference,
  UnknownColumn,
  AmbiguousColumn,
  UnknownReference,
  // lowering passes
  MixedSetOperators,
  UnmergeableSubqueries,
  UnknownAlias,
  UnliftableExcept,
  PreconditionViolated,
  // sampling
  EmptyCorpus,
  DepthExceeded,
  // evaluation
  UnknownTable,
  TypeMismatch,
  EmptyInput,
  // configuration / io
  InvalidConfig,
  IoError,
};

const char* to_string(ErrorKind kind);

/// Exception carrying an error kind, an optional character offset into the
/// source text, and (once a pipeline stage rethrows it) the name of the
/// failing pass.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, std::string message, std::optional<std::size_t> offset = std::nullopt)
      : std::runtime_error(std::move(message)), kind_(kind), offset_(offset) {}

  ErrorKind kind() const { return kind_; }
  std::optional<std::size_t> offset() const { return offset_; }

  const std::string& pass() const { return pass_; }
  void set_pass(std::string pass) {
    if (pass_.empty()) pass_ = std::move(pass);
  }

private:
  ErrorKind kind_;
  std::optional<std::size_t> offset_;
  std::string pass_;
};

}  // namespace ezsql
