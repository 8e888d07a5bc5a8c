#pragma once

#include <stdexcept>
#include <string>

namespace edmc {

// Base for every error raised by the library.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct UnspecifiedEntry : Error {
  int i, j;
  UnspecifiedEntry(int i_, int j_)
      : Error("entry (" + std::to_string(i_ + 1) + "," + std::to_string(j_ + 1) +
              ") is unspecified"),
        i(i_), j(j_) {}
};

struct NotEDM : Error {
  explicit NotEDM(const std::string& msg = "matrix is not a Euclidean distance matrix")
      : Error(msg) {}
};

struct NotIndependent : Error {
  explicit NotIndependent(const std::string& msg = "index set is not independent")
      : Error(msg) {}
};

struct BudgetExceeded : Error {
  explicit BudgetExceeded(const std::string& msg = "search node budget exceeded")
      : Error(msg) {}
};

struct TargetUnreachable : Error {
  explicit TargetUnreachable(const std::string& msg) : Error(msg) {}
};

struct PreconditionViolated : Error {
  explicit PreconditionViolated(const std::string& msg) : Error(msg) {}
};

struct InvalidCover : Error {
  explicit InvalidCover(const std::string& msg) : Error(msg) {}
};

struct NotChordal : Error {
  explicit NotChordal(const std::string& msg = "graph is not chordal") : Error(msg) {}
};

struct UnhousedPair : Error {
  UnhousedPair(int i, int j)
      : Error("pair (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
              ") is neither specified nor an indeterminate") {}
};

struct InfeasibleMask : Error {
  explicit InfeasibleMask(const std::string& msg) : Error(msg) {}
};

struct WeightOutOfRange : Error {
  explicit WeightOutOfRange(const std::string& msg) : Error(msg) {}
};

// Signals tolerance failure while gluing clique realizations; never expected
// on input that passed the clique-wise embeddability check.
struct InternalGlueError : Error {
  explicit InternalGlueError(const std::string& msg) : Error(msg) {}
};

struct ParseError : Error {
  int line, column;
  ParseError(int line_, int column_, const std::string& msg)
      : Error("parse error at line " + std::to_string(line_) + ", column " +
              std::to_string(column_) + ": " + msg),
        line(line_), column(column_) {}
};

struct AsymmetryError : ParseError {
  AsymmetryError(int line, int column, const std::string& msg)
      : ParseError(line, column, "asymmetric matrix: " + msg) {}
};

struct NegativeEntryError : ParseError {
  NegativeEntryError(int line, int column, const std::string& msg)
      : ParseError(line, column, "negative entry: " + msg) {}
};

struct NonzeroDiagonalError : ParseError {
  NonzeroDiagonalError(int line, int column, const std::string& msg)
      : ParseError(line, column, "nonzero diagonal: " + msg) {}
};

}  // namespace edmc
