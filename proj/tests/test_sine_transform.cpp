#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qstrip/errors.hpp"
#include "qstrip/sine_transform.hpp"

using namespace qstrip;

namespace {

CVector random_line(int K, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    CVector line = CVector::Zero(K + 1);
    for (int k = 1; k <= K - 1; ++k)
        line(k) = Complex(u(rng), u(rng));
    return line;
}

double rel_err(const CVector& a, const CVector& b) {
    const double scale = std::max(a.matrix().norm(), 1e-300);
    return (a - b).matrix().norm() / scale;
}

} // namespace

TEST_CASE("eigenvalue tables") {
    const GridSpec g = build_grid(4, 4.2, 0.05, 400, 64, 1000);
    const ModeEigenvalues e = eigenvalues(g);
    for (int q = 1; q <= g.K - 1; ++q) {
        CHECK(e.sigma(q - 1) > 2.0 / 3.0);
        CHECK(e.sigma(q - 1) < 1.0);
        if (q > 1)
            CHECK(e.lambda(q - 1) > e.lambda(q - 2));
        CHECK(sigma_weight(g, e, q) > 0.0);
    }
    // half-angle node q = K/2: sin^2 = 1/2
    CHECK(e.sigma(g.K / 2 - 1) == doctest::Approx(5.0 / 6.0).epsilon(1e-14));
    CHECK(e.lambda(g.K / 2 - 1) == doctest::Approx(2.0 / (g.h_y * g.h_y)).epsilon(1e-14));
}

TEST_CASE("three-point stencil reproduces lambda_q on discrete sine modes") {
    const GridSpec g = build_grid(1, 2.5, 1, 4, 12, 1);
    const ModeEigenvalues e = eigenvalues(g);
    for (int q = 1; q <= g.K - 1; ++q) {
        CVector mode(g.K + 1);
        for (int k = 0; k <= g.K; ++k)
            mode(k) = std::sin(std::numbers::pi * q * k / g.K);
        for (int k = 1; k <= g.K - 1; ++k) {
            const Complex stencil =
                -(mode(k + 1) - 2.0 * mode(k) + mode(k - 1)) / (g.h_y * g.h_y);
            CHECK(std::abs(stencil - e.lambda(q - 1) * mode(k)) <=
                  1e-12 * std::max(1.0, std::abs(mode(k)) * e.lambda(q - 1)));
        }
    }
}

TEST_CASE("forward transform satisfies discrete orthogonality") {
    const int K = 16;
    for (TransformPath path : {TransformPath::Fft, TransformPath::Direct}) {
        const DstPlan plan(K, path);
        for (int q0 : {1, 5, K - 1}) {
            CVector line(K + 1);
            for (int k = 0; k <= K; ++k)
                line(k) = std::sin(std::numbers::pi * q0 * k / K);
            line(0) = line(K) = 0.0;
            const CVector coeffs = plan.forward(line);
            for (int q = 1; q <= K - 1; ++q)
                CHECK(std::abs(coeffs(q - 1) - (q == q0 ? 1.0 : 0.0)) < 1e-13);
        }
        const CVector zero_coeffs = plan.forward(CVector::Zero(K + 1));
        CHECK(zero_coeffs.matrix().norm() == 0.0);
    }
}

TEST_CASE("inverse transform synthesizes single modes with exact zero endpoints") {
    const int K = 8;
    for (TransformPath path : {TransformPath::Fft, TransformPath::Direct}) {
        const DstPlan plan(K, path);
        CVector coeffs = CVector::Zero(K - 1);
        coeffs(2) = Complex(1.0, 0.0); // q0 = 3
        const CVector line = plan.inverse(coeffs);
        CHECK(line(0) == Complex(0.0, 0.0));
        CHECK(line(K) == Complex(0.0, 0.0));
        for (int k = 0; k <= K; ++k)
            CHECK(std::abs(line(k) - std::sin(std::numbers::pi * 3 * k / K)) < 1e-14);
        CHECK(plan.inverse(CVector::Zero(K - 1)).matrix().norm() == 0.0);
    }
}

TEST_CASE("round trip against the direct-sum oracle") {
    std::mt19937 rng(23);
    for (int K : {4, 8, 16, 32}) {
        const DstPlan fft(K, TransformPath::Fft);
        const DstPlan direct(K, TransformPath::Direct);
        for (int trial = 0; trial < 10; ++trial) {
            const CVector line = random_line(K, rng);
            const CVector cf = fft.forward(line);
            const CVector cd = direct.forward(line);
            CHECK(rel_err(cf, cd) < 1e-12);
            CHECK(rel_err(fft.inverse(cf), line) < 1e-12);
            CHECK(rel_err(direct.inverse(cd), line) < 1e-12);
        }
    }
}

TEST_CASE("nonzero endpoints are rejected") {
    const DstPlan plan(8, TransformPath::Fft);
    CVector line = CVector::Zero(9);
    line(0) = 1e-6;
    CHECK_THROWS_AS(plan.forward(line), NumericsError);
    line(0) = 0.0;
    line(8) = Complex(0.0, 1e-9);
    CHECK_THROWS_AS(plan.forward(line), NumericsError);
}

TEST_CASE("fft path demands a power-of-two K") {
    CHECK_THROWS_AS(DstPlan(12, TransformPath::Fft), ConfigError);
    CHECK_NOTHROW(DstPlan(12, TransformPath::Direct));
}

TEST_CASE("parseval consistency of the stated normalization") {
    // sum_q |Z^(q)|^2 == (2/K) sum_k |Z_k|^2 for the 2/K forward factor
    std::mt19937 rng(29);
    for (int K : {8, 16, 32}) {
        const DstPlan plan(K, TransformPath::Fft);
        for (int trial = 0; trial < 5; ++trial) {
            const CVector line = random_line(K, rng);
            const CVector coeffs = plan.forward(line);
            const double lhs = coeffs.squaredNorm();
            const double rhs = 2.0 / K * line.squaredNorm();
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        }
    }
}
