#include "sketchvar/csv.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sketchvar/common.hpp"

namespace sketchvar::csv {

std::string field(double v) {
    char buf[40];
    // %.17g is exact for doubles; try shorter forms first for readability.
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(buf, "%lf", &back);
        if (back == v) return buf;
    }
    return buf;
}

void write_text_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        require(out.good(), errc::io, "cannot open '" + tmp.string() + "' for writing");
        out << content;
        out.flush();
        require(out.good(), errc::io, "write to '" + tmp.string() + "' failed");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    require(!ec, errc::io, "atomic rename to '" + path + "' failed: " + ec.message());
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), errc::io, "cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::size_t Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    fail(errc::io, "missing column '" + name + "'");
}

Table read_table(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), errc::io, "cannot open '" + path + "'");

    auto split = [](const std::string& line) {
        std::vector<std::string> out;
        std::string cell;
        for (char c : line) {
            if (c == ',') {
                out.push_back(cell);
                cell.clear();
            } else if (c != '\r') {
                cell += c;
            }
        }
        out.push_back(cell);
        return out;
    };

    Table t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() && in.eof()) break;
        if (first) {
            t.header = split(line);
            first = false;
        } else {
            t.rows.push_back(split(line));
        }
    }
    require(!first, errc::io, "file '" + path + "' is empty");
    return t;
}

}  // namespace sketchvar::csv
