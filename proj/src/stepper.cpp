#include "qstrip/stepper.hpp"

#include <chrono>
#include <cmath>
#include <exception>

#include "qstrip/errors.hpp"

namespace qstrip {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Nodes below this are treated as vacuum in the modulus-drift check; the
// relative error of a product is not meaningful near the denormal range.
constexpr double kDriftFloor = 1e-300;

} // namespace

PhaseMultiplier make_phase_multiplier(const RField& delta_v, const GridSpec& grid,
                                      double tau, double hbar, Geometry geometry) {
    if (delta_v.rows() != grid.K + 1 || delta_v.cols() != grid.J + 1)
        throw ConfigError("make_phase_multiplier: delta_v shape mismatch");
    PhaseMultiplier mult;
    mult.values = CField::Ones(grid.K + 1, grid.J + 1);
    const int jlo = (geometry == Geometry::InfiniteStrip) ? 0 : 1;
    const int jhi = (geometry == Geometry::ClosedBox) ? grid.J - 1 : grid.J;
    const double scale = tau / (4.0 * hbar);
    for (int j = jlo; j <= jhi; ++j) {
        for (int k = 1; k <= grid.K - 1; ++k) {
            const double c = scale * delta_v(k, j);
            if (c == 0.0)
                continue;
            const double den = 1.0 + c * c;
            Complex e((1.0 - c * c) / den, -2.0 * c / den);
            e /= std::abs(e);
            mult.values(k, j) = e;
        }
    }
    return mult;
}

void phase_halfstep(WaveField& field, const PhaseMultiplier& mult) {
    field.values *= mult.values;
}

StepperSetup make_stepper_setup(const GridSpec& grid, const PhysicsParams& physics,
                                Geometry geometry, RVector vtilde) {
    StepperSetup s;
    s.grid = grid;
    s.physics = physics;
    s.geometry = geometry;
    if (vtilde.size() == 0)
        s.vtilde = RVector::Constant(grid.J + 1, physics.V_inf);
    else if (vtilde.size() == grid.J + 1)
        s.vtilde = std::move(vtilde);
    else
        throw ConfigError("make_stepper_setup: vtilde must have J+1 entries");
    s.eigs = eigenvalues(grid);
    s.coeffs.reserve(grid.K - 1);
    for (int q = 1; q <= grid.K - 1; ++q)
        s.coeffs.push_back(mode_coefficients(q, grid, physics, s.eigs));
    return s;
}

ModeSystem assemble_mode_system(const StepperSetup& setup, const ModeLine& breve,
                                const CVector* forcing, const TbcState* left,
                                const TbcState* right) {
    const GridSpec& g = setup.grid;
    const int q = breve.q;
    if (q < 1 || q > g.K - 1)
        throw ConfigError("assemble_mode_system: mode q out of range");
    if (breve.values.size() != g.J + 1)
        throw ConfigError("assemble_mode_system: breve line must have J+1 entries");
    const ModeCoefficients& co = setup.coeffs[q - 1];

    const bool left_tbc = setup.geometry == Geometry::InfiniteStrip;
    const bool right_tbc = setup.geometry != Geometry::ClosedBox;
    if (right_tbc && right == nullptr)
        throw NumericsError("assemble_mode_system: right boundary state missing");
    if (left_tbc && left == nullptr)
        throw NumericsError("assemble_mode_system: left boundary state missing");

    const int jb = left_tbc ? 0 : 1;
    const int je = right_tbc ? g.J : g.J - 1;
    const int n = je - jb + 1;

    ModeSystem sys;
    sys.q = q;
    sys.j_begin = jb;
    sys.lower = CVector::Zero(n);
    sys.diag = CVector::Zero(n);
    sys.upper = CVector::Zero(n);
    sys.rhs = CVector::Zero(n);

    const double h = g.h_x;
    const double theta = co.theta_q;
    const double cq = co.c_hbar_q;
    const double chl = setup.physics.c_hbar * co.lambda_q / co.sigma_q;
    const Complex iht(0.0, setup.physics.hbar / g.tau);
    const Complex p_edge = iht * theta;
    const Complex p_mid = iht * (1.0 - 2.0 * theta);
    const double su = cq / (2.0 * h * h);
    const auto vtq = [&](int j) { return setup.vtilde(j) + chl; };
    const auto& v = breve.values;

    for (int j = 1; j <= g.J - 1; ++j) {
        const int i = j - jb;
        const double vm = vtq(j - 1), v0 = vtq(j), vp = vtq(j + 1);
        sys.lower(i) = p_edge + su - 0.5 * theta * vm;
        sys.diag(i) = p_mid - 2.0 * su - 0.5 * (1.0 - 2.0 * theta) * v0;
        sys.upper(i) = p_edge + su - 0.5 * theta * vp;
        sys.rhs(i) = (p_edge - su + 0.5 * theta * vm) * v(j - 1) +
                     (p_mid + 2.0 * su + 0.5 * (1.0 - 2.0 * theta) * v0) * v(j) +
                     (p_edge - su + 0.5 * theta * vp) * v(j + 1);
        if (forcing)
            sys.rhs(i) += (*forcing)(j) / co.sigma_q;
    }
    // Unknowns outside the stencil band are Dirichlet zeros; drop their columns.
    if (jb == 1)
        sys.lower(0) = Complex(0.0, 0.0);
    if (je == g.J - 1)
        sys.upper(n - 1) = Complex(0.0, 0.0);

    const Complex edge_u = iht - 0.5 * co.V_inf_q; // multiplies the unknown level
    const Complex edge_v = iht + 0.5 * co.V_inf_q; // multiplies the known level
    if (right_tbc) {
        const int i = g.J - jb;
        const Complex r0 = right->kernels[q - 1][0];
        const Complex conv = convolve_history(*right, q);
        sys.lower(i) = -cq / (2.0 * h) - h * theta * edge_u;
        sys.diag(i) = cq / (2.0 * h) - h * (0.5 - theta) * edge_u - cq * r0;
        sys.rhs(i) = cq * conv - cq / (2.0 * h) * (v(g.J) - v(g.J - 1)) -
                     h * theta * edge_v * v(g.J - 1) - h * (0.5 - theta) * edge_v * v(g.J);
    }
    if (left_tbc) {
        const Complex r0 = left->kernels[q - 1][0];
        const Complex conv = convolve_history(*left, q);
        sys.diag(0) = cq / (2.0 * h) - h * (0.5 - theta) * edge_u - cq * r0;
        sys.upper(0) = -cq / (2.0 * h) - h * theta * edge_u;
        sys.rhs(0) = cq * conv + cq / (2.0 * h) * (v(1) - v(0)) -
                     h * (0.5 - theta) * edge_v * v(0) - h * theta * edge_v * v(1);
    }
    return sys;
}

CVector solve_tridiagonal(const ModeSystem& sys, int level) {
    const int n = static_cast<int>(sys.diag.size());
    const auto fail = [&](const std::string& what) {
        throw NumericsError("solve_tridiagonal: " + what + " (mode q=" + std::to_string(sys.q) +
                            ", level m=" + std::to_string(level) + ")");
    };
    if (n == 0)
        fail("empty system");

    CVector cp(n), dp(n), x(n);
    if (sys.diag(0) == Complex(0.0, 0.0))
        fail("zero pivot at row 0");
    cp(0) = sys.upper(0) / sys.diag(0);
    dp(0) = sys.rhs(0) / sys.diag(0);
    for (int i = 1; i < n; ++i) {
        const Complex denom = sys.diag(i) - sys.lower(i) * cp(i - 1);
        if (denom == Complex(0.0, 0.0))
            fail("zero pivot at row " + std::to_string(i));
        cp(i) = sys.upper(i) / denom;
        dp(i) = (sys.rhs(i) - sys.lower(i) * dp(i - 1)) / denom;
    }
    x(n - 1) = dp(n - 1);
    for (int i = n - 2; i >= 0; --i)
        x(i) = dp(i) - cp(i) * x(i + 1);

    double bmax = 0.0, rmax = 0.0;
    for (int i = 0; i < n; ++i) {
        Complex r = sys.diag(i) * x(i) - sys.rhs(i);
        if (i > 0)
            r += sys.lower(i) * x(i - 1);
        if (i < n - 1)
            r += sys.upper(i) * x(i + 1);
        rmax = std::max(rmax, std::abs(r));
        bmax = std::max(bmax, std::abs(sys.rhs(i)));
    }
    if (bmax == 0.0) {
        if (rmax != 0.0)
            fail("nonzero residual for zero right-hand side");
    } else if (rmax > 1e-12 * bmax) {
        fail("residual " + std::to_string(rmax / bmax) + " above 1e-12");
    }
    return x;
}

Simulation::Simulation(StepperSetup setup, const RField& potential_mesh, WaveField psi0,
                       Options opts, const WaveField* forcing)
    : setup_(std::move(setup)), opts_(opts),
      plan_(setup_.grid.K, opts.transform), psi_(std::move(psi0)) {
    const GridSpec& g = setup_.grid;
    if (g.M < 1)
        throw ConfigError("Simulation: grid with M >= 1 required for stepping");
    if (!(g.tau > 0.0))
        throw ConfigError("Simulation: tau must be positive");
    if (psi_.values.rows() != g.K + 1 || psi_.values.cols() != g.J + 1)
        throw ConfigError("Simulation: initial field shape mismatch");

    // Boundary zeros are an invariant of the field, not of its storage.
    psi_.values.row(0).setZero();
    psi_.values.row(g.K).setZero();
    if (setup_.geometry != Geometry::InfiniteStrip)
        psi_.values.col(0).setZero();
    if (setup_.geometry == Geometry::ClosedBox)
        psi_.values.col(g.J).setZero();

    unknown_begin_ = (setup_.geometry == Geometry::InfiniteStrip) ? 0 : 1;
    unknown_end_ = (setup_.geometry == Geometry::ClosedBox) ? g.J - 1 : g.J;

    RField delta_v(g.K + 1, g.J + 1);
    for (int j = 0; j <= g.J; ++j)
        for (int k = 0; k <= g.K; ++k)
            delta_v(k, j) = potential_mesh(k, j) - setup_.vtilde(j);
    phase_ = make_phase_multiplier(delta_v, g, g.tau, setup_.physics.hbar, setup_.geometry);

    bcoef_ = CField::Zero(g.K - 1, g.J + 1);
    tcoef_ = CField::Zero(g.K - 1, g.J + 1);

    if (forcing) {
        if (forcing->values.rows() != g.K + 1 || forcing->values.cols() != g.J + 1)
            throw ConfigError("Simulation: forcing shape mismatch");
        for (int j = 0; j <= g.J; ++j)
            for (int k = 0; k <= g.K; ++k)
                if (forcing->values(k, j) != Complex(0.0, 0.0) &&
                    (j < 1 || j > g.J - 1 || k < 1 || k > g.K - 1))
                    throw ConfigError("Simulation: forcing must be supported on interior "
                                      "nodes j=1..J-1, k=1..K-1");
        fcoef_ = CField::Zero(g.K - 1, g.J + 1);
        CField fv = forcing->values;
        forward_columns(fv, fcoef_);
        has_forcing_ = true;
    }

    validate_startup(potential_mesh);

    if (setup_.geometry != Geometry::ClosedBox)
        right_.emplace(TbcState::make(BoundarySide::Right, setup_.coeffs));
    if (setup_.geometry == Geometry::InfiniteStrip)
        left_.emplace(TbcState::make(BoundarySide::Left, setup_.coeffs));

    // Initial boundary traces: the level-0 tilde field is the initial field.
    DstWorkspace ws;
    CVector trace(g.K - 1);
    if (right_) {
        plan_.forward(&psi_.values(0, g.J), trace.data(), ws);
        for (int q = 1; q <= g.K - 1; ++q) {
            right_->history[q - 1].reserve(g.M + 1);
            right_->history[q - 1].push_back(trace(q - 1));
        }
    }
    if (left_) {
        plan_.forward(&psi_.values(0, 0), trace.data(), ws);
        for (int q = 1; q <= g.K - 1; ++q) {
            left_->history[q - 1].reserve(g.M + 1);
            left_->history[q - 1].push_back(trace(q - 1));
        }
    }

    if (opts_.keep_intermediates) {
        breve_ = psi_;
        tilde_ = psi_;
    }
}

void Simulation::validate_startup(const RField& potential_mesh) {
    const GridSpec& g = setup_.grid;
    const bool right_tbc = setup_.geometry != Geometry::ClosedBox;
    const bool left_tbc = setup_.geometry == Geometry::InfiniteStrip;

    double tail = 0.0;
    for (int k = 0; k <= g.K; ++k) {
        tail = std::max(tail, std::abs(psi_.values(k, 0)));
        tail = std::max(tail, std::abs(psi_.values(k, g.J)));
    }
    for (int j = 0; j <= g.J; ++j) {
        tail = std::max(tail, std::abs(psi_.values(0, j)));
        tail = std::max(tail, std::abs(psi_.values(g.K, j)));
    }
    initial_tail_ = tail;

    const auto column_max = [&](int j) {
        double mx = 0.0;
        for (int k = 0; k <= g.K; ++k)
            mx = std::max(mx, std::abs(psi_.values(k, j)));
        return mx;
    };
    const auto check_support = [&](int j) {
        const double mx = column_max(j);
        if (mx > 1e-12)
            throw ConfigError("Simulation: initial field must vanish near the transparent "
                              "boundary; |psi0| = " + std::to_string(mx) + " at column j=" +
                              std::to_string(j));
    };
    const auto check_potential = [&](int j) {
        double dev = 0.0;
        for (int k = 0; k <= g.K; ++k)
            dev = std::max(dev, std::abs(potential_mesh(k, j) - setup_.physics.V_inf));
        if (dev > 1e-6)
            throw ConfigError("Simulation: potential must equal V_inf near the transparent "
                              "boundary (deviation " + std::to_string(dev) + " at column j=" +
                              std::to_string(j) + ")");
        if (dev > 1e-12)
            warnings_.push_back("potential deviates from V_inf by " + std::to_string(dev) +
                                " at boundary column j=" + std::to_string(j));
    };

    if (right_tbc) {
        check_support(g.J - 1);
        check_support(g.J);
        check_potential(g.J - 1);
        check_potential(g.J);
    }
    if (left_tbc) {
        check_support(0);
        check_support(1);
        check_potential(0);
        check_potential(1);
    }

    if (setup_.vtilde_L > 0.0 &&
        !uniqueness_condition_ok(setup_.vtilde_L, setup_.vtilde_holder, g.tau, g.h_x,
                                 setup_.physics.hbar)) {
        warnings_.push_back("uniqueness condition L tau h_x^alpha < 8 hbar not satisfied "
                            "for the supplied vtilde modulus of continuity");
    }
}

void Simulation::apply_phase() {
    if (!opts_.debug_checks) {
        psi_.values *= phase_.values;
        return;
    }
    const GridSpec& g = setup_.grid;
    double drift = 0.0;
    for (int j = 0; j <= g.J; ++j) {
        for (int k = 0; k <= g.K; ++k) {
            const double before = std::abs(psi_.values(k, j));
            psi_.values(k, j) *= phase_.values(k, j);
            if (before > kDriftFloor) {
                const double after = std::abs(psi_.values(k, j));
                drift = std::max(drift, std::abs(after - before) / before);
            }
        }
    }
    max_phase_drift_ = std::max(max_phase_drift_, drift);
    if (drift > 1e-15)
        throw NumericsError("phase half-step modulus drift " + std::to_string(drift) +
                            " above 1e-15 at level " + std::to_string(m_));
}

void Simulation::forward_columns(const CField& src, CField& dst) {
    const int J = setup_.grid.J;
    std::exception_ptr err = nullptr;
#pragma omp parallel
    {
        DstWorkspace ws;
#pragma omp for schedule(static)
        for (int j = 0; j <= J; ++j) {
            try {
                plan_.forward(&src(0, j), &dst(0, j), ws);
            } catch (...) {
#pragma omp critical
                if (!err)
                    err = std::current_exception();
            }
        }
    }
    if (err)
        std::rethrow_exception(err);
}

void Simulation::solve_modes() {
    const GridSpec& g = setup_.grid;
    const int jb = unknown_begin_;
    const int je = unknown_end_;
    std::exception_ptr err = nullptr;
#pragma omp parallel
    {
        ModeLine breve;
        breve.values.resize(g.J + 1);
        CVector fline;
        if (has_forcing_)
            fline.resize(g.J + 1);
#pragma omp for schedule(static)
        for (int q = 1; q <= g.K - 1; ++q) {
            try {
                if (right_)
                    kernel_extend(*right_, q, m_);
                if (left_)
                    kernel_extend(*left_, q, m_);
                breve.q = q;
                for (int j = 0; j <= g.J; ++j)
                    breve.values(j) = bcoef_(q - 1, j);
                if (has_forcing_)
                    for (int j = 0; j <= g.J; ++j)
                        fline(j) = fcoef_(q - 1, j);
                ModeSystem sys =
                    assemble_mode_system(setup_, breve, has_forcing_ ? &fline : nullptr,
                                         left_ ? &*left_ : nullptr, right_ ? &*right_ : nullptr);
                CVector x = solve_tridiagonal(sys, m_);
                for (int j = jb; j <= je; ++j)
                    tcoef_(q - 1, j) = x(j - jb);
                if (right_)
                    right_->history[q - 1].push_back(x(g.J - jb));
                if (left_)
                    left_->history[q - 1].push_back(x(0));
            } catch (...) {
#pragma omp critical
                if (!err)
                    err = std::current_exception();
            }
        }
    }
    if (err)
        std::rethrow_exception(err);
}

void Simulation::inverse_columns() {
    const int jb = unknown_begin_;
    const int je = unknown_end_;
    std::exception_ptr err = nullptr;
#pragma omp parallel
    {
        DstWorkspace ws;
#pragma omp for schedule(static)
        for (int j = jb; j <= je; ++j) {
            try {
                plan_.inverse(&tcoef_(0, j), &psi_.values(0, j), ws);
            } catch (...) {
#pragma omp critical
                if (!err)
                    err = std::current_exception();
            }
        }
    }
    if (err)
        std::rethrow_exception(err);
}

void Simulation::step() {
    using clock = std::chrono::steady_clock;
    ++m_;

    auto t0 = clock::now();
    apply_phase();
    timings_.explicit_steps += seconds_since(t0);
    if (opts_.keep_intermediates)
        breve_ = psi_;

    t0 = clock::now();
    forward_columns(psi_.values, bcoef_);
    timings_.forward_dst += seconds_since(t0);

    t0 = clock::now();
    solve_modes();
    timings_.mode_solves += seconds_since(t0);

    t0 = clock::now();
    inverse_columns();
    timings_.inverse_dst += seconds_since(t0);
    if (opts_.keep_intermediates)
        tilde_ = psi_;

    t0 = clock::now();
    apply_phase();
    timings_.explicit_steps += seconds_since(t0);
}

} // namespace qstrip
