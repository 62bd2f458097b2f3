#pragma once

#include <string>
#include <string_view>

#include "frechet_pd/diagram.hpp"

namespace fpd {

enum class Format { json, csv };

/// Parses `{"points": [[birth, death], ...]}` or `birth,death` CSV lines
/// (optional header). Throws parse_error with position info on malformed
/// input and argument_error when a point violates death > birth.
PersistenceDiagram read_diagram(std::string_view data, Format format);

/// Canonical serialization: points in (birth, death) order, numbers with up
/// to 17 significant digits. read(write(d)) == d for every valid diagram.
std::string write_diagram(const PersistenceDiagram& diagram, Format format);

PersistenceDiagram read_diagram_file(const std::string& path, Format format);
void write_diagram_file(const PersistenceDiagram& diagram, const std::string& path, Format format);

/// Picks a format from a file extension (".csv" -> csv, everything else json).
Format format_for_path(std::string_view path);

/// Shortest-width "%.17g" rendering used for every numeric output.
std::string format_double(double value);

}  // namespace fpd
