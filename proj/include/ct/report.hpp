#pragma once

#include <string>

#include "json.hpp"

#include "ct/possibility.hpp"
#include "ct/rational.hpp"

namespace ct {

inline constexpr const char* kEngineVersion = "0.1.0";

// Hex SHA-256 of the raw input bytes, stamped into every report.
std::string sha256_hex(const std::string& bytes);

// Floats enter reports at 12 significant digits, carried as strings so the
// bytes cannot drift with serializer rounding.
std::string format_double(double v);

const char* possibility_name(Possibility p);

// Canonical bytes: keys sorted (nlohmann::json keeps an ordered map), two-space
// indent, trailing newline.
std::string render_report(const nlohmann::json& report);

}  // namespace ct
