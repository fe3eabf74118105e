#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "lgt/adversaries.hpp"

namespace lgt {

/// Instance file text: a JSON object with "name", "width", "seed" (int or
/// null) and "layers", one layer per line as [[child, parent], ...].
std::string to_json(const Instance& instance);

/// Parses and validates instance text. Throws ParseError naming the offending
/// field (e.g. "layers[3][1]") and its line.
Instance from_json(std::string_view text);

/// Throws IoError if the file cannot be written.
void save_instance(const Instance& instance, const std::filesystem::path& path);

/// Throws IoError if the file cannot be read, ParseError if it is malformed.
Instance load_instance(const std::filesystem::path& path);

}  // namespace lgt
