#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace kgcohort::csv {

/// RFC 4180 quoting, applied only when the field needs it.
std::string escape(std::string_view field);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

/// Reads one record (quoted fields may span lines). Returns false at EOF.
bool read_row(std::istream& in, std::vector<std::string>& fields);

}  // namespace kgcohort::csv
