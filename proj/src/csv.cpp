#include "resmem/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "resmem/errors.hpp"

namespace resmem {
namespace {

std::vector<std::string> split(const std::string &line) {
    std::vector<std::string> out;
    std::string cell;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cell);
            cell.clear();
        } else if (c != '\r') {
            cell.push_back(c);
        }
    }
    out.push_back(cell);
    return out;
}

double parse_number(const std::string &s) {
    if (s == "inf") {
        return std::numeric_limits<double>::infinity();
    }
    if (s == "-inf") {
        return -std::numeric_limits<double>::infinity();
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw IoError("malformed number in CSV: '" + s + "'");
    }
    return v;
}

void require_columns(const CsvTable &t, std::size_t n, const char *what) {
    for (const auto &r : t.rows) {
        if (r.size() != n) {
            throw IoError(std::string(what) + ": wrong column count");
        }
    }
}

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, ptr);
}

std::string CsvTable::render() const {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) {
        out += (i ? "," : "") + header[i];
    }
    out += '\n';
    for (const auto &r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) {
                out += ',';
            }
            out += format_number(r[i]);
        }
        out += '\n';
    }
    return out;
}

void write_text(const std::string &path, const std::string &content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) {
        throw IoError("failed writing '" + path + "'");
    }
}

void write_csv(const std::string &path, const CsvTable &table) { write_text(path, table.render()); }

CsvTable read_csv(const std::string &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("cannot open '" + path + "'");
    }
    CsvTable t;
    std::string line;
    if (!std::getline(f, line)) {
        throw IoError("empty CSV file '" + path + "'");
    }
    t.header = split(line);
    while (std::getline(f, line)) {
        if (line.empty() || line == "\r") {
            continue;
        }
        std::vector<double> row;
        for (const auto &cell : split(line)) {
            row.push_back(parse_number(cell));
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

CsvTable mode_table(const TemporalMode &mode, const std::string &value_name) {
    CsvTable t{{"t", value_name}, {}};
    for (std::size_t i = 0; i < mode.t.size(); ++i) {
        t.rows.push_back({mode.t[i], mode.g[i]});
    }
    return t;
}

CsvTable schedule_table(const CouplingSchedule &sched) {
    CsvTable t{{"t", "gamma"}, {}};
    for (std::size_t i = 0; i < sched.t.size(); ++i) {
        t.rows.push_back({sched.t[i], sched.gamma[i]});
    }
    return t;
}

CsvTable coherence_table(const CoherenceSeries &series, const std::string &value_name) {
    CsvTable t{{"t", value_name}, {}};
    for (std::size_t i = 0; i < series.t.size(); ++i) {
        t.rows.push_back({series.t[i], series.value[i]});
    }
    return t;
}

CsvTable scaling_table(const std::vector<ScalingRow> &rows) {
    CsvTable t{{"n", "k", "p_n", "rate_per_s"}, {}};
    for (const auto &r : rows) {
        t.rows.push_back({double(r.n), r.k_match, r.p_n, r.rate_per_s});
    }
    return t;
}

CsvTable wigner_table(const WignerGrid &grid) {
    CsvTable t;
    t.header.push_back("p/x");
    for (double x : grid.xs) {
        t.header.push_back(format_number(x));
    }
    for (std::size_t i = 0; i < grid.ps.size(); ++i) {
        std::vector<double> row{grid.ps[i]};
        for (std::size_t j = 0; j < grid.xs.size(); ++j) {
            row.push_back(grid.w(i, j));
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

WignerGrid wigner_from_table(const CsvTable &table) {
    if (table.header.size() < 2 || table.header[0] != "p/x") {
        throw IoError("Wigner CSV must start with a 'p/x' header cell");
    }
    WignerGrid g;
    for (std::size_t j = 1; j < table.header.size(); ++j) {
        g.xs.push_back(parse_number(table.header[j]));
    }
    require_columns(table, g.xs.size() + 1, "Wigner CSV");
    g.w.resize(static_cast<Eigen::Index>(table.rows.size()), static_cast<Eigen::Index>(g.xs.size()));
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        g.ps.push_back(table.rows[i][0]);
        for (std::size_t j = 0; j < g.xs.size(); ++j) {
            g.w(i, j) = table.rows[i][j + 1];
        }
    }
    return g;
}

CsvTable dataset_table(const HomodyneDataset &data) {
    CsvTable t{{"theta_deg", "x"}, {}};
    for (std::size_t i = 0; i < data.size(); ++i) {
        t.rows.push_back({data.theta[i] * 180.0 / std::numbers::pi, data.x[i]});
    }
    return t;
}

HomodyneDataset dataset_from_table(const CsvTable &table) {
    if (table.header.size() != 2 || table.header[0] != "theta_deg" || table.header[1] != "x") {
        throw IoError("homodyne CSV header must be 'theta_deg,x'");
    }
    require_columns(table, 2, "homodyne CSV");
    HomodyneDataset d;
    for (const auto &r : table.rows) {
        d.theta.push_back(r[0] * std::numbers::pi / 180.0);
        d.x.push_back(r[1]);
    }
    return d;
}

CsvTable traces_table(const TraceMatrix &traces) {
    CsvTable t;
    for (Eigen::Index j = 0; j < traces.data.cols(); ++j) {
        t.header.push_back(format_number(double(j) * traces.dt));
    }
    for (Eigen::Index i = 0; i < traces.data.rows(); ++i) {
        std::vector<double> row(traces.data.cols());
        for (Eigen::Index j = 0; j < traces.data.cols(); ++j) {
            row[j] = traces.data(i, j);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

TraceMatrix traces_from_table(const CsvTable &table) {
    if (table.header.size() < 2) {
        throw IoError("trace CSV needs at least two sample columns");
    }
    const double dt = parse_number(table.header[1]) - parse_number(table.header[0]);
    if (!(dt > 0.0)) {
        throw IoError("trace CSV header times must increase");
    }
    require_columns(table, table.header.size(), "trace CSV");
    TraceMatrix tm{Eigen::MatrixXd(table.rows.size(), table.header.size()), dt};
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        for (std::size_t j = 0; j < table.header.size(); ++j) {
            tm.data(i, j) = table.rows[i][j];
        }
    }
    return tm;
}

}  // namespace resmem
