#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kgcohort {

enum class TermCategory { Drug, MedicalTerm, Allergen, NaturalProduct };

std::string_view to_string(TermCategory category);
std::optional<TermCategory> parse_category(std::string_view name);

/// Dense identifier of a canonical (parent) term. Ids follow the sorted
/// order of canonical forms, so they do not depend on dictionary row order.
struct TermId {
  std::uint32_t value = 0;
  friend auto operator<=>(TermId, TermId) = default;
};

struct DictionaryEntry {
  TermId id;
  std::string canonical;
  TermCategory category = TermCategory::MedicalTerm;
  /// Normalized surface forms, sorted; always contains `canonical`.
  std::vector<std::string> surfaces;
};

/// One (parent, synonym, category) row as it appears in the TSV file.
struct DictionaryRow {
  std::string parent;
  std::string synonym;
  std::string category;
};

/// Immutable synonym-aware term registry.
class Dictionary {
 public:
  Dictionary() = default;

  static Dictionary from_rows(const std::vector<DictionaryRow>& rows);
  /// TSV with header `parent<TAB>synonym<TAB>category`.
  static Dictionary load(std::istream& in);
  static Dictionary load_file(const std::filesystem::path& path);

  const std::vector<DictionaryEntry>& entries() const { return entries_; }
  const DictionaryEntry& entry(TermId id) const { return entries_.at(id.value); }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  /// Normalized surface form -> owning term.
  const std::map<std::string, TermId, std::less<>>& surface_index() const {
    return surface_index_;
  }

  /// Term whose surface set contains normalize(surface).
  std::optional<TermId> resolve(std::string_view surface) const;

  /// Canonical labels indexed by TermId.
  std::vector<std::string> labels() const;

  /// Writes the TSV form; loading it back yields an equal dictionary.
  void write_tsv(std::ostream& out) const;

 private:
  std::vector<DictionaryEntry> entries_;
  std::map<std::string, TermId, std::less<>> surface_index_;
};

inline std::optional<TermId> resolve(std::string_view surface,
                                     const Dictionary& dict) {
  return dict.resolve(surface);
}

}  // namespace kgcohort
