// solve — time-dependent Schrodinger solver on a (semi-)infinite strip with
// transparent left/right boundaries, plus a mesh-refinement study harness.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qstrip/config.hpp"
#include "qstrip/diagnostics.hpp"
#include "qstrip/errors.hpp"
#include "qstrip/io.hpp"
#include "qstrip/runner.hpp"

namespace {

using namespace qstrip;

std::string default_out_dir(const std::string& flag_value, const RunConfig* cfg) {
    if (!flag_value.empty())
        return flag_value;
    if (cfg && !cfg->out_dir.empty())
        return cfg->out_dir;
    if (const char* env = std::getenv("SOLVE_OUT_DIR"))
        return env;
    return "out";
}

void apply_overrides(RunConfig& cfg, int threads, const std::string& transform) {
    if (threads >= 0)
        cfg.threads = threads;
    if (transform == "fft")
        cfg.transform = TransformPath::Fft;
    else if (transform == "direct")
        cfg.transform = TransformPath::Direct;
    else if (!transform.empty())
        throw ConfigError("--transform expects fft or direct");
    validate_config(cfg);
}

int cmd_run(const std::string& config_path, const std::string& out_flag, int threads,
            const std::string& transform, bool timings) {
    RunConfig cfg = parse_config_file(config_path);
    apply_overrides(cfg, threads, transform);
    const std::string dir = default_out_dir(out_flag, &cfg);
    ensure_directory(dir);

    RunReport report = run(cfg);
    for (const auto& w : report.warnings)
        std::cerr << "warning: " << w << "\n";

    write_norm_series(dir + "/norms.csv", report);
    for (const auto& [level, field] : report.snapshots) {
        char name[64];
        std::snprintf(name, sizeof(name), "/snapshot_%06d.csv", level);
        write_snapshot(dir + name, field, level);
    }
    write_report_json(dir + "/report.json", report);
    if (timings)
        write_timings_json(dir + "/timings.json", report);

    std::cout << "run: " << report.l2_series.size() - 1 << " levels, final L2 "
              << format_double(report.l2_series.back()) << ", output in " << dir << "\n";
    return 0;
}

int cmd_convergence(const std::string& config_path, const std::string& out_flag, int threads,
                    const std::string& transform, const std::string& cache_dir) {
    auto [cfg, study] = parse_study_config_file(config_path);
    apply_overrides(cfg, threads, transform);
    const std::string dir = default_out_dir(out_flag, &cfg);
    ensure_directory(dir);

    for (char direction : study.directions) {
        std::vector<DiffSeries> series;
        bool from_cache = false;
        if (!cache_dir.empty()) {
            try {
                for (int ell = 1; ell <= study.ell_max; ++ell)
                    series.push_back(read_diff_series(cache_dir + "/diff_" + direction +
                                                      "_ell" + std::to_string(ell) + ".csv"));
                from_cache = true;
            } catch (const IoError&) {
                series.clear(); // incomplete cache: recompute below
            }
        }
        RatioTable table;
        if (from_cache) {
            table = ratio_table_from_series(cfg, direction, series);
        } else {
            table = refinement_study(cfg, direction, study.ell_max, &series);
        }

        for (int ell = 1; ell <= study.ell_max; ++ell)
            write_diff_series(dir + "/diff_" + direction + "_ell" + std::to_string(ell) +
                                  ".csv",
                              series[ell - 1]);
        write_ratio_table(dir + "/ratio_" + direction + ".csv", table);

        std::cout << "direction " << direction << (from_cache ? " (from cache)" : "") << ":\n";
        for (const auto& row : table.rows) {
            std::cout << "  ell=" << row.ell << " (J,K,M)=(" << row.J << "," << row.K << ","
                      << row.M << ") E_C=" << format_double(row.e_c)
                      << " E_L2=" << format_double(row.e_l2);
            if (row.r_c)
                std::cout << " R_C=" << format_double(*row.r_c);
            if (row.r_l2)
                std::cout << " R_L2=" << format_double(*row.r_l2);
            if (row.nearest_order_c)
                std::cout << " (nearest order " << *row.nearest_order_c << ")";
            std::cout << "\n";
        }
    }
    return 0;
}

int cmd_compare(const std::string& dir_a, const std::string& dir_b,
                const std::string& out_flag) {
    const std::string dir = default_out_dir(out_flag, nullptr);
    ensure_directory(dir);

    std::map<int, Snapshot> snaps_a, snaps_b;
    const auto load_dir = [](const std::string& d, std::map<int, Snapshot>& into) {
        if (!std::filesystem::is_directory(d))
            throw IoError("'" + d + "' is not a directory");
        for (const auto& entry : std::filesystem::directory_iterator(d)) {
            const std::string name = entry.path().filename().string();
            if (name.rfind("snapshot_", 0) == 0 && name.ends_with(".csv")) {
                Snapshot s = read_snapshot(entry.path().string());
                into.emplace(s.level, std::move(s));
            }
        }
        if (into.empty())
            throw IoError("no snapshot files found in '" + d + "'");
    };
    load_dir(dir_a, snaps_a);
    load_dir(dir_b, snaps_b);

    // Decide which side is finer from the snapshot grids.
    const GridSpec& ga = snaps_a.begin()->second.field.grid;
    const GridSpec& gb = snaps_b.begin()->second.field.grid;
    const bool a_fine = static_cast<long>(ga.J) * ga.K * ga.M >=
                        static_cast<long>(gb.J) * gb.K * gb.M;
    const auto& fine = a_fine ? snaps_a : snaps_b;
    const auto& coarse = a_fine ? snaps_b : snaps_a;
    const GridSpec& gf = a_fine ? ga : gb;
    const GridSpec& gc = a_fine ? gb : ga;
    if (gf.M % gc.M != 0)
        throw ConfigError("compare: time meshes are not nested");
    const int stride = gf.M / gc.M;

    DiffSeries series;
    for (const auto& [level, snap] : coarse) {
        const auto it = fine.find(level * stride);
        if (it == fine.end())
            continue;
        LevelDiff d = level_diff_from_fields(level, level * gc.tau, it->second.field,
                                             snap.field);
        series.max_e_c = std::max(series.max_e_c, d.e_c);
        series.max_e_l2 = std::max(series.max_e_l2, d.e_l2);
        series.levels.push_back(std::move(d));
    }
    if (series.levels.empty())
        throw ConfigError("compare: no common snapshot levels between the two runs");

    write_diff_series(dir + "/diff.csv", series);
    std::cout << "compare: " << series.levels.size() << " common levels, max E_C "
              << format_double(series.max_e_c) << ", max E_L2 "
              << format_double(series.max_e_l2) << ", output in " << dir << "\n";
    return 0;
}

int cmd_kernel_dump(const std::string& config_path, const std::string& modes_flag, int mmax,
                    const std::string& out_flag) {
    RunConfig cfg = parse_config_file(config_path);
    const std::string dir = default_out_dir(out_flag, &cfg);
    ensure_directory(dir);
    if (mmax < 0)
        mmax = cfg.M;

    std::vector<int> modes;
    {
        std::stringstream ss(modes_flag);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty())
                modes.push_back(std::stoi(item));
    }
    if (modes.empty())
        throw ConfigError("kernel-dump: --modes expects a comma list of mode indices");

    const GridSpec grid = config_grid(cfg);
    const ModeEigenvalues eigs = eigenvalues(grid);
    for (int q : modes) {
        const ModeCoefficients co = mode_coefficients(q, grid, cfg.physics, eigs);
        KernelSeries kernel(co);
        kernel.extend(mmax);
        std::vector<Complex> values(mmax + 1);
        for (int m = 0; m <= mmax; ++m)
            values[m] = kernel[m];
        write_kernel_series(dir + "/kernel_q" + std::to_string(q) + ".csv", values);
    }
    std::cout << "kernel-dump: wrote " << modes.size() << " mode(s) up to m=" << mmax
              << " in " << dir << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Schrodinger strip solver with transparent boundaries"};
    app.require_subcommand(1);

    std::string config_path, out_dir, transform, cache_dir, modes, dir_a, dir_b;
    int threads = -1, mmax = -1;
    bool timings = false;

    auto* run_cmd = app.add_subcommand("run", "advance one configuration and write outputs");
    run_cmd->add_option("config", config_path, "run configuration file")->required();
    run_cmd->add_option("--out", out_dir, "output directory (default $SOLVE_OUT_DIR or ./out)");
    run_cmd->add_option("--threads", threads, "worker threads (0 = hardware)");
    run_cmd->add_option("--transform", transform, "fft | direct");
    run_cmd->add_flag("--timings", timings, "also write timings.json (not byte-stable)");

    auto* conv_cmd = app.add_subcommand("convergence", "mesh-refinement ratio study");
    conv_cmd->add_option("config", config_path, "study configuration file")->required();
    conv_cmd->add_option("--out", out_dir, "output directory");
    conv_cmd->add_option("--threads", threads, "worker threads (0 = hardware)");
    conv_cmd->add_option("--transform", transform, "fft | direct");
    conv_cmd->add_option("--from-cache", cache_dir,
                         "rebuild ratio tables from cached diff series in this directory");

    auto* cmp_cmd = app.add_subcommand("compare", "per-level difference of two run outputs");
    cmp_cmd->add_option("dirA", dir_a, "first run output directory")->required();
    cmp_cmd->add_option("dirB", dir_b, "second run output directory")->required();
    cmp_cmd->add_option("--out", out_dir, "output directory");

    auto* ker_cmd = app.add_subcommand("kernel-dump", "write boundary kernel tables as CSV");
    ker_cmd->add_option("config", config_path, "run configuration file")->required();
    ker_cmd->add_option("--modes", modes, "comma list of mode indices q")->required();
    ker_cmd->add_option("--mmax", mmax, "highest kernel level (default M)");
    ker_cmd->add_option("--out", out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed())
            return cmd_run(config_path, out_dir, threads, transform, timings);
        if (conv_cmd->parsed())
            return cmd_convergence(config_path, out_dir, threads, transform, cache_dir);
        if (cmp_cmd->parsed())
            return cmd_compare(dir_a, dir_b, out_dir);
        if (ker_cmd->parsed())
            return cmd_kernel_dump(config_path, modes, mmax, out_dir);
    } catch (const qstrip::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const qstrip::NumericsError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const qstrip::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
