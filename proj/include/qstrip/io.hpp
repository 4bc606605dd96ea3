#pragma once

#include <string>
#include <vector>

#include "qstrip/diagnostics.hpp"
#include "qstrip/runner.hpp"

namespace qstrip {

/// %.17g — lossless round trip of doubles in text.
std::string format_double(double v);

/// Snapshot file: `# schrodinger-snapshot v1` header, grid line, level
/// line, then CSV rows `j,k,x,y,re,im` over all nodes, j-major.
void write_snapshot(const std::string& path, const WaveField& field, int level);

struct Snapshot {
    int level = 0;
    WaveField field;
};
Snapshot read_snapshot(const std::string& path);

/// norms.csv: header `m,t,l2_norm,c_norm`, one row per level.
void write_norm_series(const std::string& path, const RunReport& report);

struct NormSeries {
    std::vector<int> levels;
    std::vector<double> t, l2, c;
};
NormSeries read_norm_series(const std::string& path);

/// Per-level differences: `m,t,e_c,e_l2,rel_c,rel_l2` (relative columns
/// empty when the reference norm has dropped below threshold).
void write_diff_series(const std::string& path, const DiffSeries& series);
DiffSeries read_diff_series(const std::string& path);

/// Ratio table: `direction,ell,J,K,M,E_C,E_L2,R_C,R_L2`.
void write_ratio_table(const std::string& path, const RatioTable& table);

/// Kernel dump for one mode: `m,re,im`.
void write_kernel_series(const std::string& path, const std::vector<Complex>& values);

/// Structured run summary (report.json). Deterministic for a fixed config;
/// wall-clock timings go to a separate file on request.
void write_report_json(const std::string& path, const RunReport& report);
void write_timings_json(const std::string& path, const RunReport& report);

void ensure_directory(const std::string& path);

} // namespace qstrip
