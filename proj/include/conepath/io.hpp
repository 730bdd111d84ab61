#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "conepath/errors.hpp"
#include "conepath/wavefunction.hpp"

namespace conepath::io {

// Shortest round-trip decimal form, so identical numbers give identical bytes.
inline std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

// Resolved dimensionless groups stamped on every CSV.
struct CsvStamp {
    double xi = std::numeric_limits<double>::quiet_NaN();
    double eps = std::numeric_limits<double>::quiet_NaN();
    long W = -1;
};

class CsvWriter {
public:
    CsvWriter(std::ostream& os, const std::vector<std::string>& columns, const CsvStamp& stamp) : os_(os), cols_(columns.size()) {
        if (columns.empty()) throw DataError("CSV needs at least one column");
        os_ << "# xi=" << fmt(stamp.xi) << " eps=" << fmt(stamp.eps) << " W=" << stamp.W << '\n';
        for (std::size_t i = 0; i < columns.size(); ++i) os_ << (i ? "," : "") << columns[i];
        os_ << '\n';
    }

    void row(const std::vector<double>& values) {
        if (values.size() != cols_) throw DataError("CSV row has the wrong number of fields");
        for (std::size_t i = 0; i < values.size(); ++i) os_ << (i ? "," : "") << fmt(values[i]);
        os_ << '\n';
    }

private:
    std::ostream& os_;
    std::size_t cols_;
};

// Writes a snapshot as x,re,im,abs2 rows.
inline void write_snapshot_csv(std::ostream& os, const WaveFunction& psi, const CsvStamp& stamp) {
    os << "# t=" << fmt(psi.t) << " dx=" << fmt(psi.dx) << '\n';
    CsvWriter w(os, {"x", "re", "im", "abs2"}, stamp);
    for (std::size_t i = 0; i < psi.size(); ++i)
        w.row({psi.x(i), psi.values[i].real(), psi.values[i].imag(), std::norm(psi.values[i])});
}

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::map<std::string, std::string> meta; // key=value pairs from comment lines

    std::size_t column(std::string_view name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return i;
        throw DataError("CSV has no column '" + std::string(name) + "'");
    }
};

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline double parse_double(std::string_view s, std::string_view what) {
    const std::string t = trim(s);
    if (t == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (t == "inf") return std::numeric_limits<double>::infinity();
    if (t == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    auto r = std::from_chars(t.data(), t.data() + t.size(), v);
    if (r.ec != std::errc{} || r.ptr != t.data() + t.size())
        throw ConfigError("cannot parse '" + t + "' as a number for " + std::string(what));
    return v;
}

inline CsvTable read_csv(std::istream& is) {
    CsvTable t;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream ss(line.substr(1));
            std::string kv;
            while (ss >> kv) {
                const auto eq = kv.find('=');
                if (eq != std::string::npos) t.meta[kv.substr(0, eq)] = kv.substr(eq + 1);
            }
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(trim(f));
        if (t.columns.empty()) {
            t.columns = std::move(fields);
            continue;
        }
        if (fields.size() != t.columns.size()) throw DataError("CSV row has " + std::to_string(fields.size()) + " fields");
        std::vector<double> row;
        for (const auto& x : fields) row.push_back(parse_double(x, "CSV field"));
        t.rows.push_back(std::move(row));
    }
    if (t.columns.empty()) throw DataError("CSV has no header row");
    return t;
}

// Rebuilds a snapshot written by write_snapshot_csv. Rows must be equally spaced.
inline WaveFunction read_snapshot_csv(std::istream& is) {
    const auto t = read_csv(is);
    const auto ix = t.column("x"), ir = t.column("re"), ii = t.column("im");
    if (t.rows.size() < 2) throw DataError("snapshot needs at least two rows");
    WaveFunction psi;
    psi.origin = t.rows.front()[ix];
    psi.dx = t.rows[1][ix] - t.rows[0][ix];
    if (!(psi.dx > 0.0)) throw DataError("snapshot x column must increase");
    for (std::size_t k = 0; k < t.rows.size(); ++k) {
        const double expect = psi.origin + static_cast<double>(k) * psi.dx;
        if (std::abs(t.rows[k][ix] - expect) > 1e-6 * psi.dx) throw DataError("snapshot rows are not equally spaced");
        psi.values.emplace_back(t.rows[k][ir], t.rows[k][ii]);
    }
    if (auto it = t.meta.find("t"); it != t.meta.end()) psi.t = parse_double(it->second, "t");
    psi.support = SupportRegion{{psi.origin, psi.x_end()}};
    return psi;
}

// Flat key=value configuration; '#' starts a comment. Keys keep insertion
// order for write-back.
class Config {
public:
    static Config parse(std::istream& is) {
        Config c;
        std::string line;
        int lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
            const std::string t = trim(line);
            if (t.empty()) continue;
            const auto eq = t.find('=');
            if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
            const std::string k = trim(t.substr(0, eq));
            if (k.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
            c.set(k, trim(t.substr(eq + 1)));
        }
        return c;
    }

    static Config load(const std::filesystem::path& path) {
        std::ifstream f(path);
        if (!f) throw ConfigError("cannot open config " + path.string());
        return parse(f);
    }

    void set(const std::string& key, const std::string& value) {
        if (!values_.contains(key)) order_.push_back(key);
        values_[key] = value;
    }

    bool has(const std::string& key) const { return values_.contains(key); }

    std::string get(const std::string& key, const std::string& fallback) {
        if (!has(key)) set(key, fallback);
        return values_.at(key);
    }

    double get_double(const std::string& key, double fallback) {
        if (!has(key)) set(key, fmt(fallback));
        return parse_double(values_.at(key), key);
    }

    long get_long(const std::string& key, long fallback) {
        const double v = get_double(key, static_cast<double>(fallback));
        if (v != std::floor(v)) throw ConfigError(key + " must be an integer");
        return static_cast<long>(v);
    }

    std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) {
        if (!has(key)) {
            std::string s;
            for (std::size_t i = 0; i < fallback.size(); ++i) s += (i ? "," : "") + fmt(fallback[i]);
            set(key, s);
        }
        std::vector<double> out;
        std::stringstream ss(values_.at(key));
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(parse_double(item, key));
        if (out.empty()) throw ConfigError(key + " must list at least one value");
        return out;
    }

    // Every key that was read or set, including defaults filled in on read.
    void write(std::ostream& os) const {
        for (const auto& k : order_) os << k << '=' << values_.at(k) << '\n';
    }

private:
    std::map<std::string, std::string> values_;
    std::vector<std::string> order_;
};

// Plain-text manifest: one key=value per line, flat.
class Manifest {
public:
    void add(const std::string& key, const std::string& value) { entries_.emplace_back(key, value); }
    void add(const std::string& key, double value) { add(key, fmt(value)); }
    void add(const std::string& key, long value) { add(key, std::to_string(value)); }
    void add(const std::string& key, bool value) { add(key, std::string(value ? "true" : "false")); }

    void write(std::ostream& os) const {
        for (const auto& [k, v] : entries_) os << k << '=' << v << '\n';
    }

    const std::vector<std::pair<std::string, std::string>>& entries() const noexcept { return entries_; }

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

// Minimal SVG line plot with axes and a legend.
inline void write_svg_plot(std::ostream& os, const std::vector<Series>& series, const std::string& title,
                           const std::string& xlabel, const std::string& ylabel) {
    constexpr double W = 640, H = 400, ml = 60, mr = 20, mt = 30, mb = 45;
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, s.y[i]);
            y1 = std::max(y1, s.y[i]);
        }
    if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 == x0) x1 = x0 + 1;
    if (y1 == y0) y1 = y0 + 1;
    auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * (W - ml - mr); };
    auto py = [&](double y) { return H - mb - (y - y0) / (y1 - y0) * (H - mt - mb); };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\"" << H - mb << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << ml << "\" y=\"" << H - mb + 15 << "\" font-size=\"10\">" << fmt(x0) << "</text>\n";
    os << "<text x=\"" << W - mr << "\" y=\"" << H - mb + 15 << "\" font-size=\"10\" text-anchor=\"end\">" << fmt(x1) << "</text>\n";
    os << "<text x=\"" << ml - 4 << "\" y=\"" << H - mb << "\" font-size=\"10\" text-anchor=\"end\">" << fmt(y0) << "</text>\n";
    os << "<text x=\"" << ml - 4 << "\" y=\"" << mt + 8 << "\" font-size=\"10\" text-anchor=\"end\">" << fmt(y1) << "</text>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"" << H - 8 << "\" text-anchor=\"middle\" font-size=\"12\">" << xlabel << "</text>\n";
    os << "<text x=\"14\" y=\"" << H / 2 << "\" font-size=\"12\" transform=\"rotate(-90 14 " << H / 2 << ")\">" << ylabel << "</text>\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* col = colors[k % 5];
        os << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.2\" points=\"";
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i)
            if (std::isfinite(s.x[i]) && std::isfinite(s.y[i]))
                os << std::fixed << std::setprecision(2) << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
        os << std::defaultfloat << "\"/>\n";
        os << "<text x=\"" << W - mr - 5 << "\" y=\"" << mt + 14 * (k + 1) << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << col
           << "\">" << s.label << "</text>\n";
    }
    os << "</svg>\n";
}

} // namespace conepath::io
