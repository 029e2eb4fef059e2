#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "extremo/csv.hpp"
#include "extremo/harness.hpp"

namespace extremo {

namespace {

const char* method_name(ConfidenceInterval::Method m) {
    return m == ConfidenceInterval::Method::Direct ? "direct" : "transfer";
}

std::string na_or(double v) { return std::isnan(v) ? "NA" : format_double(v); }

double parse_na_double(const std::string& s) {
    if (s == "NA") return std::nan("");
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::runtime_error("report: bad number '" + s + "'");
    return v;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) fields.push_back(item);
    return fields;
}

}  // namespace

void emit_report_csv(const CoverageTable& table, std::ostream& out) {
    out << "# nominal_level " << format_double(table.nominal_level) << '\n';
    out << "scheme,method,p,p_boot,h,truth,coverage,se,mean_width,covered,sim_count,"
           "undefined_base,zero_base,covered_nonzero,coverage_nonzero,width_count\n";
    for (const auto& cell : table.cells) {
        out << scheme_name(cell.scheme) << ',' << method_name(cell.method) << ','
            << format_double(cell.p) << ',' << format_double(cell.p_boot) << ',' << cell.h
            << ',' << format_double(cell.truth) << ',' << format_double(cell.coverage()) << ','
            << format_double(cell.se()) << ',' << na_or(cell.mean_width) << ',' << cell.covered
            << ',' << cell.sim_count << ',' << cell.undefined_base << ',' << cell.zero_base
            << ',' << cell.covered_nonzero << ',' << na_or(cell.coverage_nonzero()) << ','
            << cell.width_count << '\n';
    }
}

std::string report_csv_string(const CoverageTable& table) {
    std::ostringstream out;
    emit_report_csv(table, out);
    return out.str();
}

CoverageTable parse_report_csv(std::istream& in) {
    CoverageTable table;
    std::string line;
    if (!std::getline(in, line) || line.rfind("# nominal_level ", 0) != 0) {
        throw std::runtime_error("report: missing nominal_level line");
    }
    table.nominal_level = parse_na_double(line.substr(16));
    if (!std::getline(in, line) || line.rfind("scheme,", 0) != 0) {
        throw std::runtime_error("report: missing header line");
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != 16) throw std::runtime_error("report: bad row '" + line + "'");
        CoverageCell cell;
        if (f[0] == "multiplier") {
            cell.scheme = BootstrapScheme::Multiplier;
        } else if (f[0] == "stationary_dmc") {
            cell.scheme = BootstrapScheme::StationaryDMC;
        } else if (f[0] == "stationary_modified") {
            cell.scheme = BootstrapScheme::StationaryModified;
        } else {
            throw std::runtime_error("report: unknown scheme '" + f[0] + "'");
        }
        cell.method = (f[1] == "transfer") ? ConfidenceInterval::Method::Transfer
                                           : ConfidenceInterval::Method::Direct;
        cell.p = parse_na_double(f[2]);
        cell.p_boot = parse_na_double(f[3]);
        cell.h = static_cast<std::size_t>(std::stoull(f[4]));
        cell.truth = parse_na_double(f[5]);
        cell.mean_width = parse_na_double(f[8]);
        cell.covered = static_cast<std::size_t>(std::stoull(f[9]));
        cell.sim_count = static_cast<std::size_t>(std::stoull(f[10]));
        cell.undefined_base = static_cast<std::size_t>(std::stoull(f[11]));
        cell.zero_base = static_cast<std::size_t>(std::stoull(f[12]));
        cell.covered_nonzero = static_cast<std::size_t>(std::stoull(f[13]));
        cell.width_count = static_cast<std::size_t>(std::stoull(f[15]));
        table.cells.push_back(cell);
    }
    return table;
}

std::vector<std::filesystem::path> emit_report(const CoverageTable& table, ReportFormat format,
                                               const std::filesystem::path& destination) {
    if (table.cells.empty()) {
        throw std::invalid_argument("emit_report: table has no cells");
    }
    std::vector<std::filesystem::path> written;

    if (format == ReportFormat::Csv) {
        std::ofstream out(destination);
        if (!out) throw std::runtime_error("emit_report: cannot write " + destination.string());
        emit_report_csv(table, out);
        written.push_back(destination);
        return written;
    }

    // PlotData: one panel per (method, p); columns h, coverage per scheme
    // (column order = first appearance in the table), nominal reference.
    std::filesystem::create_directories(destination);

    struct PanelKey {
        ConfidenceInterval::Method method;
        double p;
        double p_boot;
        bool operator<(const PanelKey& o) const {
            if (method != o.method) return method < o.method;
            if (p != o.p) return p < o.p;
            return p_boot < o.p_boot;
        }
    };
    std::map<PanelKey, std::map<std::size_t, std::map<int, double>>> panels;
    std::vector<BootstrapScheme> scheme_order;
    auto scheme_slot = [&](BootstrapScheme s) {
        for (std::size_t i = 0; i < scheme_order.size(); ++i) {
            if (scheme_order[i] == s) return static_cast<int>(i);
        }
        scheme_order.push_back(s);
        return static_cast<int>(scheme_order.size() - 1);
    };
    for (const auto& cell : table.cells) {
        const int slot = scheme_slot(cell.scheme);
        panels[{cell.method, cell.p, cell.p_boot}][cell.h][slot] = cell.coverage();
    }

    for (const auto& [key, rows] : panels) {
        char name[96];
        std::snprintf(name, sizeof name, "panel_%s_p%g.dat", method_name(key.method), key.p);
        const auto path = destination / name;
        std::ofstream out(path);
        if (!out) throw std::runtime_error("emit_report: cannot write " + path.string());

        out << "# coverage vs lag: method=" << method_name(key.method) << " p="
            << format_double(key.p);
        if (key.method == ConfidenceInterval::Method::Transfer) {
            out << " p_boot=" << format_double(key.p_boot);
        }
        out << " nominal=" << format_double(table.nominal_level) << '\n';
        out << 'h';
        for (const auto s : scheme_order) out << ' ' << scheme_name(s);
        out << " nominal\n";
        for (const auto& [h, by_scheme] : rows) {
            out << h;
            for (std::size_t i = 0; i < scheme_order.size(); ++i) {
                const auto it = by_scheme.find(static_cast<int>(i));
                out << ' ' << (it == by_scheme.end() ? "NA" : na_or(it->second));
            }
            out << ' ' << format_double(table.nominal_level) << '\n';
        }
        written.push_back(path);
    }
    return written;
}

}  // namespace extremo
