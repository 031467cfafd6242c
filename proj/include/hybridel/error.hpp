#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hybridel {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input. `line` is 1-based; `offset` is a byte offset within that line.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t offset)
      : Error("parse error at line " + std::to_string(line) + ", offset " +
              std::to_string(offset) + ": " + message),
        line_(line),
        offset_(offset) {}

  std::size_t line() const { return line_; }
  std::size_t offset() const { return offset_; }

 private:
  std::size_t line_;
  std::size_t offset_;
};

/// A record violates a data-model invariant; `id` names the offending record.
class InvariantError : public Error {
 public:
  InvariantError(const std::string& id, const std::string& message)
      : Error("invariant violation [" + id + "]: " + message), id_(id) {}

  const std::string& id() const { return id_; }

 private:
  std::string id_;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Bad configuration: unknown system ids, unmapped portfolios, missing files.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace hybridel
