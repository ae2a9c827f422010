#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace dgg {

// Locale-independent numeric text. All serialization goes through these so
// output bytes never depend on the process locale.

std::string format_fixed(double value, int decimals);

// shortest form at 6 significant digits
std::string format_sig6(double value);

// strict: the whole string must parse
std::optional<double> parse_real(std::string_view text);
std::optional<long long> parse_int(std::string_view text);

}  // namespace dgg
