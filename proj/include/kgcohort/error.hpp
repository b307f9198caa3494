#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kgcohort {

// Error categories surfaced to callers and, through the CLI, as the
// machine-readable `error:` line on stderr.
enum class Errc {
  DuplicateSurface,
  UnknownCategory,
  InconsistentCategory,
  EmptyTerm,
  MalformedDictionary,
  FatalParse,
  EmptyCorpus,
  UnresolvedSeedTerm,
  DomainError,
  ZeroProximityEdge,
  UnknownNode,
  EmptyStats,
  IoError,
  UnsupportedFormat,
  InvalidProfile,
  InvalidConfig,
};

std::string_view to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace kgcohort
