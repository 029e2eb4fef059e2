#include "extremo/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace extremo {

namespace {

std::vector<double> parse_row(const std::string& line, std::size_t line_no) {
    std::vector<double> row;
    std::size_t pos = 0;
    while (pos <= line.size()) {
        std::size_t end = line.find(',', pos);
        if (end == std::string::npos) end = line.size();
        std::size_t lo = pos, hi = end;
        while (lo < hi && (line[lo] == ' ' || line[lo] == '\t')) ++lo;
        while (hi > lo && (line[hi - 1] == ' ' || line[hi - 1] == '\t' || line[hi - 1] == '\r'))
            --hi;
        if (lo == hi) {
            throw std::runtime_error("csv: empty field on line " + std::to_string(line_no));
        }
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(line.data() + lo, line.data() + hi, v);
        if (ec != std::errc() || ptr != line.data() + hi) {
            throw std::runtime_error("csv: bad number '" + line.substr(lo, hi - lo) +
                                     "' on line " + std::to_string(line_no));
        }
        row.push_back(v);
        if (end == line.size()) break;
        pos = end + 1;
    }
    return row;
}

bool blank(const std::string& line) {
    for (char c : line) {
        if (c != ' ' && c != '\t' && c != '\r') return false;
    }
    return true;
}

}  // namespace

TimeSeries read_series_csv(std::istream& in, bool has_header) {
    std::vector<double> values;
    std::size_t dim = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (has_header && line_no == 1) continue;
        if (blank(line)) continue;
        const auto row = parse_row(line, line_no);
        if (dim == 0) {
            dim = row.size();
        } else if (row.size() != dim) {
            throw std::runtime_error("csv: inconsistent column count on line " +
                                     std::to_string(line_no));
        }
        values.insert(values.end(), row.begin(), row.end());
    }
    if (values.empty()) throw std::runtime_error("csv: no observations found");
    return TimeSeries(std::move(values), dim);
}

TimeSeries read_series_csv(const std::filesystem::path& path, bool has_header) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("csv: cannot open " + path.string());
    return read_series_csv(in, has_header);
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    // Prefer the shortest representation that still round-trips.
    for (int prec = 1; prec < 17; ++prec) {
        char probe[40];
        std::snprintf(probe, sizeof probe, "%.*g", prec, x);
        double back = 0.0;
        std::sscanf(probe, "%lf", &back);
        if (back == x) return probe;
    }
    return buf;
}

void write_series_csv(const TimeSeries& series, std::ostream& out) {
    for (std::size_t i = 0; i < series.length(); ++i) {
        const auto obs = series.obs(i);
        for (std::size_t j = 0; j < obs.size(); ++j) {
            if (j > 0) out << ',';
            out << format_double(obs[j]);
        }
        out << '\n';
    }
}

void write_series_csv(const TimeSeries& series, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("csv: cannot write " + path.string());
    write_series_csv(series, out);
}

}  // namespace extremo
