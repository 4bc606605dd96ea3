#include "qstrip/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qstrip/errors.hpp"

namespace qstrip {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot open '" + path + "' for writing");
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open '" + path + "' for reading");
    return in;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(item);
    if (!line.empty() && line.back() == ',')
        out.push_back("");
    return out;
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void ensure_directory(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec)
        throw IoError("cannot create directory '" + path + "': " + ec.message());
}

void write_snapshot(const std::string& path, const WaveField& field, int level) {
    std::ofstream out = open_out(path);
    const GridSpec& g = field.grid;
    out << "# schrodinger-snapshot v1\n";
    out << "# grid " << format_double(g.X) << " " << format_double(g.Y) << " "
        << format_double(g.T) << " " << g.J << " " << g.K << " " << g.M << "\n";
    out << "# level " << level << "\n";
    out << "j,k,x,y,re,im\n";
    for (int j = 0; j <= g.J; ++j)
        for (int k = 0; k <= g.K; ++k)
            out << j << "," << k << "," << format_double(g.x(j)) << ","
                << format_double(g.y(k)) << "," << format_double(field.values(k, j).real())
                << "," << format_double(field.values(k, j).imag()) << "\n";
    if (!out)
        throw IoError("write failed for '" + path + "'");
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || line != "# schrodinger-snapshot v1")
        throw IoError("'" + path + "': not a schrodinger-snapshot v1 file");

    Snapshot snap;
    double X, Y, T;
    int J, K, M;
    if (!std::getline(in, line) ||
        std::sscanf(line.c_str(), "# grid %lf %lf %lf %d %d %d", &X, &Y, &T, &J, &K, &M) != 6)
        throw IoError("'" + path + "': malformed grid line");
    if (!std::getline(in, line) || std::sscanf(line.c_str(), "# level %d", &snap.level) != 1)
        throw IoError("'" + path + "': malformed level line");
    if (!std::getline(in, line) || line != "j,k,x,y,re,im")
        throw IoError("'" + path + "': missing column header");

    snap.field = zero_field(build_grid(X, Y, T, J, K, M));
    size_t rows = 0;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        int j, k;
        double x, y, re, im;
        if (std::sscanf(line.c_str(), "%d,%d,%lf,%lf,%lf,%lf", &j, &k, &x, &y, &re, &im) != 6)
            throw IoError("'" + path + "': malformed data row '" + line + "'");
        if (j < 0 || j > J || k < 0 || k > K)
            throw IoError("'" + path + "': node index out of range");
        snap.field.values(k, j) = Complex(re, im);
        ++rows;
    }
    if (rows != static_cast<size_t>(J + 1) * (K + 1))
        throw IoError("'" + path + "': expected " + std::to_string((J + 1) * (K + 1)) +
                      " rows, got " + std::to_string(rows));
    return snap;
}

void write_norm_series(const std::string& path, const RunReport& report) {
    std::ofstream out = open_out(path);
    out << "m,t,l2_norm,c_norm\n";
    for (size_t m = 0; m < report.l2_series.size(); ++m)
        out << m << "," << format_double(report.t_of(static_cast<int>(m))) << ","
            << format_double(report.l2_series[m]) << "," << format_double(report.c_series[m])
            << "\n";
    if (!out)
        throw IoError("write failed for '" + path + "'");
}

NormSeries read_norm_series(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || line != "m,t,l2_norm,c_norm")
        throw IoError("'" + path + "': missing norms header");
    NormSeries series;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        int m;
        double t, l2, c;
        if (std::sscanf(line.c_str(), "%d,%lf,%lf,%lf", &m, &t, &l2, &c) != 4)
            throw IoError("'" + path + "': malformed norms row '" + line + "'");
        series.levels.push_back(m);
        series.t.push_back(t);
        series.l2.push_back(l2);
        series.c.push_back(c);
    }
    return series;
}

void write_diff_series(const std::string& path, const DiffSeries& series) {
    std::ofstream out = open_out(path);
    out << "m,t,e_c,e_l2,rel_c,rel_l2\n";
    for (const LevelDiff& d : series.levels) {
        out << d.level << "," << format_double(d.t) << "," << format_double(d.e_c) << ","
            << format_double(d.e_l2) << ",";
        if (d.rel_c)
            out << format_double(*d.rel_c);
        out << ",";
        if (d.rel_l2)
            out << format_double(*d.rel_l2);
        out << "\n";
    }
    if (!out)
        throw IoError("write failed for '" + path + "'");
}

DiffSeries read_diff_series(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || line != "m,t,e_c,e_l2,rel_c,rel_l2")
        throw IoError("'" + path + "': missing diff header");
    DiffSeries series;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const std::vector<std::string> cells = split_csv(line);
        if (cells.size() != 6)
            throw IoError("'" + path + "': malformed diff row '" + line + "'");
        LevelDiff d;
        d.level = std::stoi(cells[0]);
        d.t = std::stod(cells[1]);
        d.e_c = std::stod(cells[2]);
        d.e_l2 = std::stod(cells[3]);
        if (!cells[4].empty())
            d.rel_c = std::stod(cells[4]);
        if (!cells[5].empty())
            d.rel_l2 = std::stod(cells[5]);
        series.max_e_c = std::max(series.max_e_c, d.e_c);
        series.max_e_l2 = std::max(series.max_e_l2, d.e_l2);
        series.levels.push_back(std::move(d));
    }
    return series;
}

void write_ratio_table(const std::string& path, const RatioTable& table) {
    std::ofstream out = open_out(path);
    out << "direction,ell,J,K,M,E_C,E_L2,R_C,R_L2\n";
    for (const RatioRow& row : table.rows) {
        out << row.direction << "," << row.ell << "," << row.J << "," << row.K << "," << row.M
            << "," << format_double(row.e_c) << "," << format_double(row.e_l2) << ",";
        if (row.r_c)
            out << format_double(*row.r_c);
        out << ",";
        if (row.r_l2)
            out << format_double(*row.r_l2);
        out << "\n";
    }
    if (!out)
        throw IoError("write failed for '" + path + "'");
}

void write_kernel_series(const std::string& path, const std::vector<Complex>& values) {
    std::ofstream out = open_out(path);
    out << "m,re,im\n";
    for (size_t m = 0; m < values.size(); ++m)
        out << m << "," << format_double(values[m].real()) << ","
            << format_double(values[m].imag()) << "\n";
    if (!out)
        throw IoError("write failed for '" + path + "'");
}

void write_report_json(const std::string& path, const RunReport& report) {
    nlohmann::ordered_json j;
    j["config"] = emit_config(report.config);
    j["levels"] = report.l2_series.size() - 1;
    j["initial_l2"] = report.l2_series.front();
    j["final_l2"] = report.l2_series.back();
    double max_l2 = 0.0, max_c = 0.0;
    for (double v : report.l2_series)
        max_l2 = std::max(max_l2, v);
    for (double v : report.c_series)
        max_c = std::max(max_c, v);
    j["max_l2"] = max_l2;
    j["max_c"] = max_c;
    j["initial_boundary_tail"] = report.initial_boundary_tail;
    std::vector<int> snaps;
    for (const auto& [level, field] : report.snapshots)
        snaps.push_back(level);
    j["snapshot_levels"] = snaps;
    j["warnings"] = report.warnings;
    std::ofstream out = open_out(path);
    out << j.dump(2) << "\n";
    if (!out)
        throw IoError("write failed for '" + path + "'");
}

void write_timings_json(const std::string& path, const RunReport& report) {
    nlohmann::ordered_json j;
    j["explicit_steps_s"] = report.timings.explicit_steps;
    j["forward_dst_s"] = report.timings.forward_dst;
    j["mode_solves_s"] = report.timings.mode_solves;
    j["inverse_dst_s"] = report.timings.inverse_dst;
    std::ofstream out = open_out(path);
    out << j.dump(2) << "\n";
}

} // namespace qstrip
