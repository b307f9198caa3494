#include "kgcohort/dictionary.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "kgcohort/error.hpp"
#include "kgcohort/text.hpp"

namespace kgcohort {

std::string_view to_string(TermCategory category) {
  switch (category) {
    case TermCategory::Drug: return "drug";
    case TermCategory::MedicalTerm: return "medical_term";
    case TermCategory::Allergen: return "allergen";
    case TermCategory::NaturalProduct: return "natural_product";
  }
  return "medical_term";
}

std::optional<TermCategory> parse_category(std::string_view name) {
  if (name == "drug") return TermCategory::Drug;
  if (name == "medical_term") return TermCategory::MedicalTerm;
  if (name == "allergen") return TermCategory::Allergen;
  if (name == "natural_product") return TermCategory::NaturalProduct;
  return std::nullopt;
}

namespace {

struct PendingEntry {
  TermCategory category;
  std::set<std::string> surfaces;
};

std::string squote(std::string_view s) { return "'" + std::string(s) + "'"; }

}  // namespace

Dictionary Dictionary::from_rows(const std::vector<DictionaryRow>& rows) {
  std::map<std::string, PendingEntry> pending;
  std::map<std::string, std::string> owner;  // surface -> canonical

  auto claim = [&](const std::string& surface, const std::string& canonical) {
    auto [it, inserted] = owner.emplace(surface, canonical);
    if (!inserted && it->second != canonical)
      throw Error(Errc::DuplicateSurface,
                  "surface form " + squote(surface) + " maps to both " +
                      squote(it->second) + " and " + squote(canonical));
  };

  for (const auto& row : rows) {
    std::string canonical = text::normalize(row.parent);
    std::string synonym = text::normalize(row.synonym);
    if (canonical.empty() || synonym.empty())
      throw Error(Errc::EmptyTerm, "empty term in row (" + squote(row.parent) +
                                       ", " + squote(row.synonym) + ")");
    auto category = parse_category(row.category);
    if (!category)
      throw Error(Errc::UnknownCategory,
                  "unknown category " + squote(row.category));

    auto [it, inserted] = pending.try_emplace(canonical, PendingEntry{*category, {}});
    if (!inserted && it->second.category != *category)
      throw Error(Errc::InconsistentCategory,
                  "term " + squote(canonical) + " declared as both " +
                      std::string(to_string(it->second.category)) + " and " +
                      std::string(to_string(*category)));
    claim(canonical, canonical);
    claim(synonym, canonical);
    it->second.surfaces.insert(canonical);
    it->second.surfaces.insert(synonym);
  }

  Dictionary dict;
  dict.entries_.reserve(pending.size());
  for (auto& [canonical, entry] : pending) {
    TermId id{static_cast<std::uint32_t>(dict.entries_.size())};
    dict.entries_.push_back(DictionaryEntry{
        id, canonical, entry.category,
        std::vector<std::string>(entry.surfaces.begin(), entry.surfaces.end())});
  }

  // Surfaces must also be unambiguous once reduced to word tokens, which is
  // the form the matcher sees ("seizure-meds" and "seizure meds" collide).
  std::map<std::vector<std::string>, TermId> token_keys;
  for (const auto& entry : dict.entries_) {
    for (const auto& surface : entry.surfaces) {
      dict.surface_index_.emplace(surface, entry.id);
      auto tokens = text::word_tokens(surface);
      if (tokens.empty())
        throw Error(Errc::EmptyTerm,
                    "surface form " + squote(surface) + " has no word characters");
      auto [it, inserted] = token_keys.emplace(std::move(tokens), entry.id);
      if (!inserted && it->second != entry.id)
        throw Error(Errc::DuplicateSurface,
                    "surface form " + squote(surface) + " of " +
                        squote(entry.canonical) + " tokenizes like a surface of " +
                        squote(dict.entries_[it->second.value].canonical));
    }
  }
  return dict;
}

Dictionary Dictionary::load(std::istream& in) {
  std::vector<DictionaryRow> rows;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!text::is_valid_utf8(line))
      throw Error(Errc::MalformedDictionary,
                  "line " + std::to_string(line_no) + ": invalid UTF-8");
    if (!header_seen) {
      if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0)
        line.erase(0, 3);
      if (line != "parent\tsynonym\tcategory")
        throw Error(Errc::MalformedDictionary,
                    "expected header 'parent<TAB>synonym<TAB>category'");
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::size_t start = 0;
    for (;;) {
      auto tab = line.find('\t', start);
      cols.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (cols.size() != 3)
      throw Error(Errc::MalformedDictionary,
                  "line " + std::to_string(line_no) + ": expected 3 columns, got " +
                      std::to_string(cols.size()));
    rows.push_back({std::move(cols[0]), std::move(cols[1]), std::move(cols[2])});
  }
  if (!header_seen)
    throw Error(Errc::MalformedDictionary, "dictionary file is empty");
  return from_rows(rows);
}

Dictionary Dictionary::load_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open dictionary " + path.string());
  return load(in);
}

std::optional<TermId> Dictionary::resolve(std::string_view surface) const {
  auto it = surface_index_.find(text::normalize(surface));
  if (it == surface_index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> Dictionary::labels() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.canonical);
  return out;
}

void Dictionary::write_tsv(std::ostream& out) const {
  out << "parent\tsynonym\tcategory\n";
  for (const auto& e : entries_)
    for (const auto& s : e.surfaces)
      out << e.canonical << '\t' << s << '\t' << to_string(e.category) << '\n';
}

}  // namespace kgcohort
