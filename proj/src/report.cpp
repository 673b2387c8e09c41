#include "dmlab/report.hpp"

#include "dmlab/errors.hpp"

#include <algorithm>
#include <cstdio>

namespace dmlab {

namespace {

std::string csv_cell(const Json& v) {
    if (v.is_null()) return "";
    if (v.is_number_float()) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.15g", v.get<double>());
        return buf;
    }
    std::string s = v.is_string() ? v.get<std::string>() : v.dump();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

}  // namespace

Format parse_format(const std::string& text) {
    if (text == "csv") return Format::csv;
    if (text == "json") return Format::json;
    throw ValidationError("unknown format '" + text + "' (csv or json)");
}

Report::Report(std::string command, Json config)
    : command_(std::move(command)), config_(std::move(config)) {}

void Report::add_row(Json row) {
    if (!row.is_object()) throw ValidationError("report rows must be objects");
    for (const auto& [key, value] : row.items())
        if (std::find(columns_.begin(), columns_.end(), key) == columns_.end())
            columns_.push_back(key);
    rows_.push_back(std::move(row));
}

void Report::add_anchor(const std::string& anchor) {
    if (std::find(anchors_.begin(), anchors_.end(), anchor) == anchors_.end())
        anchors_.push_back(anchor);
}

void Report::write(std::ostream& out, Format format) const {
    if (format == Format::json) {
        Json doc;
        doc["command"] = command_;
        doc["config"] = config_;
        doc["results"] = Json::array();
        for (const auto& r : rows_) doc["results"].push_back(r);
        doc["anchors"] = anchors_;
        out << doc.dump(2) << '\n';
        return;
    }
    out << "# command: " << command_ << '\n';
    out << "# config: " << config_.dump() << '\n';
    for (const auto& a : anchors_) out << "# anchor: " << a << '\n';
    for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i];
    out << '\n';
    for (const auto& r : rows_) {
        for (std::size_t i = 0; i < columns_.size(); ++i) {
            if (i) out << ',';
            const auto it = r.find(columns_[i]);
            if (it != r.end()) out << csv_cell(*it);
        }
        out << '\n';
    }
}

}  // namespace dmlab
