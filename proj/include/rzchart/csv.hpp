#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace rzchart::csv {

// Quote a field per RFC 4180 when it contains a comma, quote or line break.
std::string escape(std::string_view field);

// Split one record. Handles quoted fields with doubled quotes; a trailing
// CR is dropped so CRLF input is tolerated.
std::vector<std::string> split_record(std::string_view line);

// Read the next non-empty record; false at end of stream.
bool read_record(std::istream& in, std::vector<std::string>& fields);

double parse_double(const std::string& field, std::string_view what);
long parse_long(const std::string& field, std::string_view what);

}  // namespace rzchart::csv
