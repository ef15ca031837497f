#include "mslv/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace mslv {

namespace {

std::string format_double(double x) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, x,
                                   std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s, const char* where) {
    double x = 0.0;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    while (b < e && (*b == ' ' || *b == '\t')) ++b;
    const auto res = std::from_chars(b, e, x);
    if (res.ec != std::errc())
        throw ParseError(std::string(where) + ": not a number: '" + s + "'");
    return x;
}

}  // namespace

GasParameters load_gas(const std::string& name_or_path) {
    if (name_or_path == "methane") return builtin_methane();

    std::ifstream in(name_or_path);
    if (!in) throw IoError("cannot open gas file: " + name_or_path);

    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("gas file '" + name_or_path + "': " + e.what());
    }
    if (!j.is_object())
        throw ParseError("gas file '" + name_or_path + "': top level must be an object");

    static const std::set<std::string> known = {
        "name", "a_r", "b_r", "c_r", "d_r", "omega", "m",
        "n",    "Z",   "p_c_MPa", "v_c_cm3mol", "T_c_K"};
    for (const auto& [key, _] : j.items())
        if (!known.count(key))
            throw ParseError("gas file '" + name_or_path + "': unknown key '" + key + "'");

    auto num = [&](const char* key) {
        if (!j.contains(key))
            throw ParseError("gas file '" + name_or_path + "': missing key '" + key + "'");
        if (!j[key].is_number())
            throw ParseError("gas file '" + name_or_path + "': key '" + key
                             + "' must be a number");
        return j[key].get<double>();
    };

    ReducedParameters red;
    if (j.contains("name")) {
        if (!j["name"].is_string())
            throw ParseError("gas file '" + name_or_path + "': key 'name' must be a string");
        red.name = j["name"].get<std::string>();
    }
    red.a_r = num("a_r");
    red.b_r = num("b_r");
    red.c_r = num("c_r");
    red.d_r = num("d_r");
    red.Z = num("Z");
    red.n = j.contains("n") ? num("n") : 6.0;
    const double omega = num("omega");
    red.m = j.contains("m") ? num("m") : m_from_omega(omega);

    GasParameters gas = dimensionalize(red, num("p_c_MPa"), num("v_c_cm3mol"),
                                       num("T_c_K"));
    gas.omega = omega;
    validate_gas(gas);
    return gas;
}

void write_csv(const CurveSeries& s, std::ostream& out) {
    for (const auto& [k, v] : s.metadata) out << "# " << k << " = " << v << "\n";
    for (std::size_t i = 0; i < s.columns.size(); ++i) {
        if (i) out << ",";
        out << s.columns[i].name;
        if (!s.columns[i].unit.empty()) out << "[" << s.columns[i].unit << "]";
    }
    out << "\n";
    std::size_t next_break = 0;
    for (std::size_t r = 0; r < s.rows.size(); ++r) {
        while (next_break < s.segment_starts.size()
               && s.segment_starts[next_break] <= r) {
            if (s.segment_starts[next_break] == r && r != 0) out << "\n";
            ++next_break;
        }
        const auto& row = s.rows[r];
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ",";
            out << format_double(row[i]);
        }
        out << "\n";
    }
}

void write_csv(const CurveSeries& s, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path);
    write_csv(s, out);
    out.flush();
    if (!out) throw IoError("write failed: " + path);
}

CurveSeries read_csv(std::istream& in) {
    CurveSeries s;
    std::string line;
    bool header_seen = false;
    bool pending_break = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            if (header_seen && !s.rows.empty()) pending_break = true;
            continue;
        }
        if (line[0] == '#') {
            std::size_t eq = line.find('=');
            if (eq != std::string::npos) {
                std::string k = line.substr(1, eq - 1);
                std::string v = line.substr(eq + 1);
                auto trim = [](std::string& t) {
                    t.erase(0, t.find_first_not_of(" \t"));
                    t.erase(t.find_last_not_of(" \t") + 1);
                };
                trim(k);
                trim(v);
                s.metadata[k] = v;
            }
            continue;
        }
        std::vector<std::string> cells;
        std::size_t pos = 0;
        while (true) {
            const std::size_t comma = line.find(',', pos);
            cells.push_back(line.substr(pos, comma - pos));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (!header_seen) {
            for (auto& c : cells) {
                CurveSeries::Column col;
                const std::size_t br = c.find('[');
                if (br != std::string::npos && c.back() == ']') {
                    col.name = c.substr(0, br);
                    col.unit = c.substr(br + 1, c.size() - br - 2);
                } else {
                    col.name = c;
                }
                s.columns.push_back(col);
            }
            header_seen = true;
            continue;
        }
        if (cells.size() != s.columns.size())
            throw ParseError("csv row has " + std::to_string(cells.size())
                             + " cells, header has " + std::to_string(s.columns.size()));
        if (pending_break) {
            s.segment_starts.push_back(s.rows.size());
            pending_break = false;
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) row.push_back(parse_double(c, "csv cell"));
        s.rows.push_back(std::move(row));
    }
    return s;
}

CurveSeries read_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open csv file: " + path);
    return read_csv(in);
}

void write_json(const CurveSeries& s, std::ostream& out) {
    nlohmann::ordered_json j;
    j["name"] = s.name;
    j["metadata"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : s.metadata) j["metadata"][k] = v;
    j["columns"] = nlohmann::ordered_json::array();
    for (const auto& c : s.columns)
        j["columns"].push_back({{"name", c.name}, {"unit", c.unit}});
    j["segment_starts"] = s.segment_starts;
    j["rows"] = s.rows;
    out << j.dump(2) << "\n";
}

void write_json(const CurveSeries& s, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path);
    write_json(s, out);
    out.flush();
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace mslv
