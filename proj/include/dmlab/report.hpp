#pragma once

#include "json.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace dmlab {

using Json = nlohmann::ordered_json;

enum class Format { csv, json };

Format parse_format(const std::string& text);

// One table of results plus the effective configuration and the identities it relies on.
// CSV output starts with '#' comment lines carrying the config; JSON output is
// {config, results[], anchors[]}.
class Report {
public:
    Report(std::string command, Json config);

    void set_columns(std::vector<std::string> columns) { columns_ = std::move(columns); }
    void add_row(Json row);
    void add_anchor(const std::string& anchor);

    const std::vector<Json>& rows() const { return rows_; }
    const Json& config() const { return config_; }

    void write(std::ostream& out, Format format) const;

private:
    std::string command_;
    Json config_;
    std::vector<std::string> columns_;
    std::vector<Json> rows_;
    std::vector<std::string> anchors_;
};

}  // namespace dmlab
