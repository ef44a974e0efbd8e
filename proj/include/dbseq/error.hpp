#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dbseq {

enum class ErrorKind {
  InvalidWord,
  EmptyEvidence,
  NotDeBruijn,
  Precondition,
  Resource,
  BalanceViolation,
  NoSpanningTree,
  Unbalanced,
  NotRegular,
  Unsupported,
  Contradiction,
  Domain,
  NotInFractal,
  NeedsLongerPrefix,
  Parse,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidWord: return "invalid-word";
    case ErrorKind::EmptyEvidence: return "empty-evidence";
    case ErrorKind::NotDeBruijn: return "not-de-bruijn";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Resource: return "resource";
    case ErrorKind::BalanceViolation: return "balance-violation";
    case ErrorKind::NoSpanningTree: return "no-spanning-tree";
    case ErrorKind::Unbalanced: return "unbalanced";
    case ErrorKind::NotRegular: return "not-regular";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::Contradiction: return "contradiction";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::NotInFractal: return "not-in-fractal";
    case ErrorKind::NeedsLongerPrefix: return "needs-longer-prefix";
    case ErrorKind::Parse: return "parse";
  }
  return "unknown";
}

/// Every failure raised by the library carries a machine-readable kind so
/// callers (and the CLI) can branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) fail(kind, what);
}

}  // namespace dbseq
