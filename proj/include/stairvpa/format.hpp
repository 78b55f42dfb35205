#pragma once

#include <string>
#include <string_view>

#include "stairvpa/dvpa.hpp"

namespace stairvpa {

/// Reads the `vpa 1` text format into a name-level description. Throws
/// SyntaxError with a line number; no semantic checks happen here.
DvpaDescription parse_description(std::string_view text);

/// parse_description followed by validate().
Validated parse_automaton(std::string_view text);

/// Reads a file; an unreadable file is reported as a SyntaxError on line 0.
Validated load_automaton(const std::string& path);

/// Canonical text: sections in fixed order, declarations in id order,
/// transitions sorted by (state, symbol) ids.
std::string serialize(const Dvpa& dvpa);

}  // namespace stairvpa
