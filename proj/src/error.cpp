#include "kgcohort/error.hpp"

namespace kgcohort {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::DuplicateSurface: return "DuplicateSurface";
    case Errc::UnknownCategory: return "UnknownCategory";
    case Errc::InconsistentCategory: return "InconsistentCategory";
    case Errc::EmptyTerm: return "EmptyTerm";
    case Errc::MalformedDictionary: return "MalformedDictionary";
    case Errc::FatalParse: return "FatalParse";
    case Errc::EmptyCorpus: return "EmptyCorpus";
    case Errc::UnresolvedSeedTerm: return "UnresolvedSeedTerm";
    case Errc::DomainError: return "DomainError";
    case Errc::ZeroProximityEdge: return "ZeroProximityEdge";
    case Errc::UnknownNode: return "UnknownNode";
    case Errc::EmptyStats: return "EmptyStats";
    case Errc::IoError: return "IoError";
    case Errc::UnsupportedFormat: return "UnsupportedFormat";
    case Errc::InvalidProfile: return "InvalidProfile";
    case Errc::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

}  // namespace kgcohort
