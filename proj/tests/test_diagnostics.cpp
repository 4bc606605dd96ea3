#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qstrip/diagnostics.hpp"
#include "qstrip/errors.hpp"
#include "qstrip/io.hpp"

using namespace qstrip;

namespace {

RunConfig tiny_config() {
    RunConfig cfg;
    cfg.X = 2;
    cfg.Y = 1;
    cfg.T = 0.006;
    cfg.J = 64;
    cfg.K = 8;
    cfg.M = 16;
    cfg.packet = PacketParams{40.0, 0.002, 0.6, 0.5};
    cfg.potential_kind = PotentialKind::Zero;
    cfg.geometry = Geometry::SemiInfinite;
    return cfg;
}

} // namespace

TEST_CASE("field difference of identical runs is zero") {
    const GridSpec g = build_grid(1, 1, 1, 8, 8, 1);
    WaveField f = zero_field(g);
    for (int j = 1; j <= 7; ++j)
        for (int k = 1; k <= 7; ++k)
            f.at(j, k) = Complex(j * 0.1, -k * 0.2);
    const FieldDiff d = field_difference(f, f);
    CHECK(d.e_c == 0.0);
    CHECK(d.e_l2 == 0.0);
    CHECK(d.ref_c > 0.0);
}

TEST_CASE("a constant offset shows up as E_C = |c| at every level") {
    const GridSpec g = build_grid(1, 1, 1, 8, 8, 1);
    WaveField base = zero_field(g);
    for (int j = 0; j <= 8; ++j)
        for (int k = 0; k <= 8; ++k)
            base.at(j, k) = Complex(0.3 * j, 0.1 * k);
    WaveField shifted = base;
    const Complex c(0.01, -0.02);
    shifted.values += c;
    const FieldDiff d = field_difference(shifted, base);
    CHECK(d.e_c == doctest::Approx(std::abs(c)).epsilon(1e-14));
}

TEST_CASE("difference norms restrict the finer field onto the coarse nodes") {
    const GridSpec fine_g = build_grid(1, 1, 1, 16, 16, 2);
    const GridSpec coarse_g = build_grid(1, 1, 1, 8, 8, 2);
    WaveField fine = zero_field(fine_g), coarse = zero_field(coarse_g);
    for (int j = 0; j <= 16; ++j)
        for (int k = 0; k <= 16; ++k)
            fine.at(j, k) = Complex(j, k);
    for (int j = 0; j <= 8; ++j)
        for (int k = 0; k <= 8; ++k)
            coarse.at(j, k) = Complex(2 * j, 2 * k); // coincident values
    const FieldDiff d = field_difference(fine, coarse);
    CHECK(d.e_c == 0.0);
    CHECK(d.e_l2 == 0.0);

    const GridSpec bad = build_grid(1, 1, 1, 12, 8, 2);
    CHECK_THROWS_AS(field_difference(fine, zero_field(bad)), ConfigError);
}

TEST_CASE("difference of a run with itself is identically zero") {
    RunConfig cfg = tiny_config();
    for (int m = 0; m <= cfg.M; ++m)
        cfg.snapshot_levels.push_back(m);
    const RunReport report = run(cfg);
    const DiffSeries series = difference_norms(report, report);
    CHECK(series.levels.size() == static_cast<size_t>(cfg.M + 1));
    CHECK(series.max_e_c == 0.0);
    CHECK(series.max_e_l2 == 0.0);
}

TEST_CASE("absolute differences are symmetric under argument swap") {
    RunConfig fine = tiny_config();
    for (int m = 0; m <= fine.M; ++m)
        fine.snapshot_levels.push_back(m);
    RunConfig coarse = fine;
    coarse.J = fine.J / 2;
    const RunReport ra = run(fine);
    const RunReport rb = run(coarse);
    const DiffSeries ab = difference_norms(ra, rb);
    const DiffSeries ba = difference_norms(rb, ra);
    REQUIRE(ab.levels.size() == ba.levels.size());
    CHECK(ab.max_e_c == ba.max_e_c);
    CHECK(ab.max_e_l2 == ba.max_e_l2);
    for (size_t i = 0; i < ab.levels.size(); ++i) {
        CHECK(ab.levels[i].e_c == ba.levels[i].e_c);
        CHECK(ab.levels[i].e_l2 == ba.levels[i].e_l2);
    }
}

TEST_CASE("reference ratios") {
    CHECK(reference_ratio(2, 1) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(reference_ratio(4, 1) == doctest::Approx(17.0).epsilon(1e-15));
    CHECK(reference_ratio(3, 2) == doctest::Approx(511.0 / 63.0).epsilon(1e-15));
    CHECK(reference_ratio(2, 2) == doctest::Approx(4.2).epsilon(1e-15));
    CHECK_THROWS_AS(reference_ratio(0, 1), ConfigError);
    CHECK_THROWS_AS(reference_ratio(2, 0), ConfigError);
}

TEST_CASE("reference ratios fall to 2^alpha monotonically") {
    for (int alpha = 1; alpha <= 4; ++alpha) {
        double prev = reference_ratio(alpha, 1);
        const double limit = std::pow(2.0, alpha);
        for (int ell = 2; ell <= 10; ++ell) {
            const double r = reference_ratio(alpha, ell);
            CHECK(r < prev);
            CHECK(r > limit);
            prev = r;
        }
        CHECK(prev == doctest::Approx(limit).epsilon(1e-2));
    }
}

TEST_CASE("refinement study produces ordered rows with exact ratio entries") {
    RunConfig ref = tiny_config();
    std::vector<DiffSeries> series;
    const RatioTable table = refinement_study(ref, 'x', 2, &series);

    REQUIRE(table.rows.size() == 2);
    CHECK(table.rows[0].ell == 2);
    CHECK(table.rows[0].J == ref.J / 4);
    CHECK(!table.rows[0].r_c.has_value()); // coarsest row carries no ratio
    CHECK(table.rows[1].ell == 1);
    CHECK(table.rows[1].J == ref.J / 2);
    REQUIRE(table.rows[1].r_c.has_value());
    // R is exactly the quotient of the stored maxima
    CHECK(*table.rows[1].r_c == series[1].max_e_c / series[0].max_e_c);
    CHECK(*table.rows[1].r_l2 == series[1].max_e_l2 / series[0].max_e_l2);
    CHECK(series[0].levels.size() == static_cast<size_t>(ref.M + 1));
}

TEST_CASE("y-direction study restricts the transverse mesh") {
    RunConfig ref = tiny_config();
    ref.K = 16;
    std::vector<DiffSeries> series;
    const RatioTable table = refinement_study(ref, 'y', 2, &series);
    REQUIRE(table.rows.size() == 2);
    CHECK(table.rows[0].K == 4);
    CHECK(table.rows[1].K == 8);
    CHECK(table.rows[0].J == ref.J);
    CHECK(series[0].levels.size() == static_cast<size_t>(ref.M + 1));
    CHECK(series[0].max_e_c > 0.0); // coarsening in y really changes the solution
}

TEST_CASE("time-direction study compares only coincident levels") {
    RunConfig ref = tiny_config();
    std::vector<DiffSeries> series;
    refinement_study(ref, 't', 2, &series);
    CHECK(series[0].levels.size() == static_cast<size_t>(ref.M / 2 + 1));
    CHECK(series[1].levels.size() == static_cast<size_t>(ref.M / 4 + 1));
    // level n of the coarse run sits at time n * 2^ell * tau_ref
    CHECK(series[1].levels[1].t == doctest::Approx(4 * ref.T / ref.M).epsilon(1e-14));
}

TEST_CASE("ratio table rebuilt from cached series is bit-identical") {
    RunConfig ref = tiny_config();
    std::vector<DiffSeries> series;
    const RatioTable fresh = refinement_study(ref, 'x', 2, &series);

    const std::string dir = (std::filesystem::temp_directory_path() /
                             "qstrip_diag_cache_test").string();
    ensure_directory(dir);
    for (int ell = 1; ell <= 2; ++ell)
        write_diff_series(dir + "/diff_x_ell" + std::to_string(ell) + ".csv",
                          series[ell - 1]);
    std::vector<DiffSeries> reloaded;
    for (int ell = 1; ell <= 2; ++ell)
        reloaded.push_back(read_diff_series(dir + "/diff_x_ell" + std::to_string(ell) +
                                            ".csv"));
    const RatioTable cached = ratio_table_from_series(ref, 'x', reloaded);

    const std::string path_a = dir + "/ratio_fresh.csv";
    const std::string path_b = dir + "/ratio_cached.csv";
    write_ratio_table(path_a, fresh);
    write_ratio_table(path_b, cached);
    std::ifstream a(path_a), b(path_b);
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    CHECK(sa.str() == sb.str());
    std::filesystem::remove_all(dir);
}

TEST_CASE("relative differences disappear when the reference norm vanishes") {
    const GridSpec g = build_grid(1, 1, 1, 8, 8, 1);
    const WaveField zero = zero_field(g);
    WaveField tiny = zero_field(g);
    tiny.at(4, 4) = Complex(1e-14, 0.0);
    const LevelDiff d = level_diff_from_fields(0, 0.0, tiny, zero);
    CHECK(d.e_c == doctest::Approx(1e-14));
    CHECK(!d.rel_c.has_value());
    CHECK(!d.rel_l2.has_value());

    WaveField big = zero_field(g);
    big.at(4, 4) = Complex(1.0, 0.0);
    const LevelDiff d2 = level_diff_from_fields(0, 0.0, big, zero);
    CHECK(d2.rel_c.has_value());
}

TEST_CASE("study rejects non-divisible references and bad directions") {
    RunConfig ref = tiny_config();
    CHECK_THROWS_AS(refinement_study(ref, 'z', 1, nullptr), ConfigError);
    CHECK_THROWS_AS(refinement_study(ref, 'x', 0, nullptr), ConfigError);
    ref.J = 50; // 50 / 8 is not integral
    CHECK_THROWS_AS(refinement_study(ref, 'x', 3, nullptr), ConfigError);
}
