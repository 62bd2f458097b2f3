#include "frechet_pd/diagram_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "frechet_pd/errors.hpp"

namespace fpd {

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

namespace {

double parse_number(std::string_view token, std::size_t line_no, std::size_t column) {
    std::size_t consumed = 0;
    double value = 0.0;
    try {
        value = std::stod(std::string(token), &consumed);
    } catch (const std::exception&) {
        consumed = 0;
    }
    if (consumed != token.size() || token.empty()) {
        std::ostringstream os;
        os << "parse error at line " << line_no << ", column " << column
           << ": expected a number, got '" << token << "'";
        throw parse_error(os.str());
    }
    return value;
}

PersistenceDiagram make_diagram(std::vector<DiagramPoint> points) {
    // Re-throws construction failures unchanged so the offending point is named.
    return PersistenceDiagram(std::move(points));
}

PersistenceDiagram read_json(std::string_view data) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(data);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(std::string("parse error at byte ") + std::to_string(e.byte) +
                          ": " + e.what());
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("parse error: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("points"))
        throw parse_error("parse error: expected an object with a \"points\" array");
    const nlohmann::json& pts = doc["points"];
    if (!pts.is_array())
        throw parse_error("parse error: \"points\" must be an array");
    std::vector<DiagramPoint> points;
    points.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const nlohmann::json& entry = pts[i];
        if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
            !entry[1].is_number()) {
            throw parse_error("parse error: points[" + std::to_string(i) +
                              "] must be a [birth, death] number pair");
        }
        points.push_back({entry[0].get<double>(), entry[1].get<double>()});
    }
    return make_diagram(std::move(points));
}

PersistenceDiagram read_csv(std::string_view data) {
    std::vector<DiagramPoint> points;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= data.size()) {
        std::size_t end = data.find('\n', pos);
        if (end == std::string_view::npos) end = data.size();
        std::string_view line = data.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) {
            if (pos > data.size()) break;
            continue;
        }
        if (line_no == 1 && line == "birth,death") continue;
        const std::size_t comma = line.find(',');
        if (comma == std::string_view::npos) {
            std::ostringstream os;
            os << "parse error at line " << line_no << ": expected 'birth,death'";
            throw parse_error(os.str());
        }
        const double birth = parse_number(line.substr(0, comma), line_no, 1);
        const double death = parse_number(line.substr(comma + 1), line_no, comma + 2);
        points.push_back({birth, death});
        if (pos > data.size()) break;
    }
    return make_diagram(std::move(points));
}

}  // namespace

PersistenceDiagram read_diagram(std::string_view data, Format format) {
    return format == Format::json ? read_json(data) : read_csv(data);
}

std::string write_diagram(const PersistenceDiagram& diagram, Format format) {
    std::string out;
    if (format == Format::json) {
        out += "{\"points\":[";
        bool first = true;
        for (const DiagramPoint& p : diagram.points()) {
            if (!first) out += ',';
            first = false;
            out += '[';
            out += format_double(p.birth);
            out += ',';
            out += format_double(p.death);
            out += ']';
        }
        out += "]}";
    } else {
        out += "birth,death\n";
        for (const DiagramPoint& p : diagram.points()) {
            out += format_double(p.birth);
            out += ',';
            out += format_double(p.death);
            out += '\n';
        }
    }
    return out;
}

PersistenceDiagram read_diagram_file(const std::string& path, Format format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return read_diagram(buffer.str(), format);
    } catch (const parse_error& e) {
        throw parse_error(path + ": " + e.what());
    } catch (const argument_error& e) {
        throw argument_error(path + ": " + e.what());
    }
}

void write_diagram_file(const PersistenceDiagram& diagram, const std::string& path,
                        Format format) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open file for writing: " + path);
    out << write_diagram(diagram, format);
    if (!out) throw io_error("failed writing file: " + path);
}

Format format_for_path(std::string_view path) {
    if (path.size() >= 4) {
        std::string_view ext = path.substr(path.size() - 4);
        if (ext == ".csv" || ext == ".CSV") return Format::csv;
    }
    return Format::json;
}

}  // namespace fpd
