#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace wiretap::csv {

// RFC 4180 field quoting.
std::string escape(std::string_view field);
// 12 significant digits; "inf", "-inf", "nan" for non-finite values.
std::string number(double v);
std::string boolean(bool b);
std::string join(const std::vector<std::string>& items, char sep = ';');

void write_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace wiretap::csv
