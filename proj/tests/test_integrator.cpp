#include <doctest.h>

#include <cmath>

#include "ks/integrator.hpp"
#include "ks/semigroup.hpp"
#include "oracles.hpp"

using namespace ks;

namespace {
const double kPi = 3.14159265358979323846;

ModelParams make_params(double chi, double a, double b, double gamma, double mu, double lambda,
                        int dim) {
    ModelParams p;
    p.chi = chi;
    p.a = a;
    p.b = b;
    p.gamma = gamma;
    p.mu = mu;
    p.lambda = lambda;
    p.dim = dim;
    return p;
}

template <typename Fn>
ScalarField fill(const Grid& g, Fn fn) {
    ScalarField f(g);
    const int n = g.points_per_axis;
    for (std::size_t flat = 0; flat < f.values.size(); ++flat) {
        std::size_t rem = flat;
        double x[3] = {0, 0, 0};
        for (int axis = g.dim - 1; axis >= 0; --axis) {
            x[axis] = g.coordinate(static_cast<int>(rem % n));
            rem /= n;
        }
        f.values[flat] = fn(x[0], x[1], x[2]);
    }
    return f;
}

double max_diff(const ScalarField& a, const ScalarField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
}
}  // namespace

namespace {
// Long-double Taylor references; exact to ~1e-17 relative for |z| <= 0.5.
double phi1_ref(double z) {
    long double term = 1.0L, sum = 0.0L;
    for (int k = 1; k <= 16; ++k) {
        term /= k;
        sum += term;
        term *= z;
    }
    return static_cast<double>(sum);
}
double phi2_ref(double z) {
    long double term = 1.0L, sum = 0.0L;
    for (int k = 2; k <= 17; ++k) {
        term /= k;
        sum += term;
        term *= z;
    }
    return static_cast<double>(sum);
}
}  // namespace

TEST_CASE("phi functions") {
    CHECK(phi1(0.0) == 1.0);
    CHECK(phi2(0.0) == 0.5);
    CHECK(phi1(-1.0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-15));
    CHECK(phi2(-1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    // series and direct evaluation agree across the switch point and beyond
    for (double z : {-0.3, -2e-4, -9.9e-5, -1e-6, 1e-6, 9.9e-5, 2e-4, 0.3}) {
        CHECK(phi1(z) == doctest::Approx(phi1_ref(z)).epsilon(1e-12));
        CHECK(phi2(z) == doctest::Approx(phi2_ref(z)).epsilon(1e-12));
    }
}

TEST_CASE("equilibrium is an exact fixed point of both schemes") {
    const ModelParams p = make_params(0.8, 2.0, 0.5, 1.5, 1.2, 0.9, 2);
    const Equilibrium eq = equilibrium(p);
    const Grid g(2, 16, 4.0 * kPi);
    SimulationState s;
    s.u = ScalarField(g, eq.u_star);
    s.v = ScalarField(g, eq.v_star);

    for (Scheme scheme : {Scheme::Etd1, Scheme::Etd2Rk}) {
        for (double dt : {1e-3, 2e-2}) {
            StepControl ctl;
            ctl.dt = dt;
            ctl.scheme = scheme;
            const SimulationState out = step(s, p, ctl);
            CHECK(max_diff(out.u, s.u) <= 1e-12 * eq.u_star);
            CHECK(max_diff(out.v, s.v) <= 1e-12 * eq.v_star);
        }
    }
}

TEST_CASE("nonlinear terms at the equilibrium are the constant residues") {
    const ModelParams p = make_params(1.3, 1.0, 1.0, 1.5, 0.7, 1.0, 2);
    const Equilibrium eq = equilibrium(p);
    const Grid g(2, 16, 2.0 * kPi);
    SimulationState s;
    s.u = ScalarField(g, eq.u_star);
    s.v = ScalarField(g, eq.v_star);
    const NonlinearRhs rhs = nonlinear_rhs(s, p);
    const double expected_nu = (p.gamma - 1.0) * p.a * eq.u_star;
    for (double x : rhs.nu.values) CHECK(x == doctest::Approx(expected_nu).epsilon(1e-12));
    for (double x : rhs.nv.values)
        CHECK(x == doctest::Approx(p.mu * eq.u_star).epsilon(1e-12));
}

TEST_CASE("nonlinear terms without chemotaxis are pointwise algebra") {
    const ModelParams p = make_params(0.0, 1.0, 2.0, 1.5, 1.0, 1.0, 1);
    const Grid g(1, 64, 2.0 * kPi);
    SimulationState s;
    s.u = fill(g, [](double x, double, double) { return 1.0 + 0.3 * std::sin(x); });
    s.v = ScalarField(g, 0.0);
    const NonlinearRhs rhs = nonlinear_rhs(s, p, /*dealias=*/false);
    for (std::size_t i = 0; i < s.u.values.size(); ++i) {
        const double u = s.u.values[i];
        const double expected = p.gamma * p.a * u - p.b * std::pow(u, p.gamma);
        CHECK(rhs.nu.values[i] == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("chemotaxis term matches the finite-difference oracle") {
    const ModelParams p = make_params(1.0, 1.0, 1.0, 1.5, 1.0, 1.0, 1);
    const Grid g(1, 128, 2.0 * kPi);
    SimulationState s;
    s.u = fill(g, [](double x, double, double) { return 1.0 + 0.1 * std::cos(x); });
    s.v = fill(g, [](double x, double, double) { return 0.1 * std::cos(x); });
    const NonlinearRhs rhs = nonlinear_rhs(s, p);

    const double h = g.spacing();
    const std::vector<double> fd = oracles::fd_div_u_gradv_1d(s.u.values, s.v.values, h);
    double worst = 0.0;
    for (std::size_t i = 0; i < fd.size(); ++i) {
        const double u = s.u.values[i];
        const double expected = -p.chi * fd[i] + p.gamma * p.a * u - p.b * std::pow(u, p.gamma);
        worst = std::max(worst, std::abs(rhs.nu.values[i] - expected));
    }
    CHECK(worst <= h * h);  // the oracle's own truncation error dominates
}

TEST_CASE("spatially constant run follows the logistic-type ODE") {
    const ModelParams p = make_params(0.0, 1.0, 1.0, 1.5, 1.0, 1.0, 1);
    const Grid g(1, 8, 4.0 * kPi);
    SimulationState s;
    s.u = ScalarField(g, 0.5);
    s.v = ScalarField(g, 0.0);
    StepControl ctl;
    ctl.dt = 1e-3;
    ctl.scheme = Scheme::Etd2Rk;

    Stepper stepper(g, p, ctl);
    for (int i = 0; i < 10000; ++i) s = stepper.step(s);

    const double reference = oracles::logistic_ode_reference(1.0, 1.0, 1.5, 0.5, 10.0);
    const double closed = oracles::logistic_ode_closed_form(1.0, 1.0, 1.5, 0.5, 10.0);
    CHECK(std::abs(reference - closed) <= 1e-12);          // oracle self-consistency
    CHECK(reference == doctest::Approx(0.99444138347343891).epsilon(1e-12));
    for (double x : s.u.values) CHECK(std::abs(x - reference) <= 1e-6);
}

TEST_CASE("linear exactness: zero sources reduce to the semigroups") {
    SUBCASE("pure heat from raw parameters") {
        ModelParams p;  // deliberately unvalidated: a = b = chi = mu = 0
        p.chi = 0.0;
        p.a = 0.0;
        p.b = 0.0;
        p.gamma = 1.5;
        p.mu = 0.0;
        p.lambda = 1.0;
        p.dim = 1;
        const Grid g(1, 32, 2.0 * kPi);
        SimulationState s;
        s.u = fill(g, [](double x, double, double) { return std::cos(2.0 * x); });
        s.v = ScalarField(g, 0.0);
        StepControl ctl;
        ctl.dt = 0.01;
        ctl.positivity_clip = false;
        Stepper stepper(g, p, ctl);
        for (int i = 0; i < 10; ++i) s = stepper.step(s);
        const double factor = std::exp(-4.0 * 0.1);  // |k|^2 = 4 for mode 2
        const ScalarField expected =
            fill(g, [factor](double x, double, double) { return factor * std::cos(2.0 * x); });
        CHECK(max_diff(s.u, expected) <= 1e-12);
    }
    SUBCASE("v equation with mu = 0 is the shifted heat semigroup") {
        ModelParams p = make_params(0.0, 1.0, 1.0, 1.5, 1.0, 0.8, 1);
        p.mu = 0.0;  // raw: decouples the signal
        const Grid g(1, 32, 2.0 * kPi);
        SimulationState s;
        s.u = ScalarField(g, 1.0);
        s.v = fill(g, [](double x, double, double) { return 0.5 + 0.2 * std::sin(x); });
        StepControl ctl;
        ctl.dt = 0.05;
        Stepper stepper(g, p, ctl);
        const SimulationState out = stepper.step(s);
        const SemigroupOperator op(g, p.lambda, ctl.dt);
        CHECK(max_diff(out.v, op.apply(s.v)) <= 1e-14);
    }
}

TEST_CASE("temporal order by Richardson extrapolation") {
    const ModelParams p = make_params(0.2, 1.0, 1.0, 1.5, 1.0, 1.0, 1);
    const Grid g(1, 32, 8.0 * kPi);
    SimulationState init;
    init.u = fill(g, [&](double x, double, double) {
        return 1.0 + 0.2 * std::cos(2.0 * kPi * x / g.box_length);
    });
    init.v = fill(g, [&](double x, double, double) {
        return 0.5 + 0.1 * std::sin(2.0 * kPi * x / g.box_length);
    });

    auto solve = [&](Scheme scheme, double dt) {
        StepControl ctl;
        ctl.dt = dt;
        ctl.scheme = scheme;
        ctl.positivity_clip = false;
        Stepper stepper(g, p, ctl);
        SimulationState s = init;
        const int steps = static_cast<int>(std::lround(1.0 / dt));
        for (int i = 0; i < steps; ++i) s = stepper.step(s);
        return s.u;
    };

    for (Scheme scheme : {Scheme::Etd1, Scheme::Etd2Rk}) {
        const ScalarField u1 = solve(scheme, 4e-3);
        const ScalarField u2 = solve(scheme, 2e-3);
        const ScalarField u3 = solve(scheme, 1e-3);
        const double order = std::log2(max_diff(u1, u2) / max_diff(u2, u3));
        if (scheme == Scheme::Etd1) {
            CHECK(order > 0.7);
            CHECK(order < 1.3);
        } else {
            CHECK(order > 1.7);
            CHECK(order < 2.3);
        }
    }
}

TEST_CASE("mean of v follows the production-decay balance") {
    const ModelParams p = make_params(0.3, 1.0, 1.0, 1.5, 2.0, 0.7, 1);
    const Grid g(1, 32, 4.0 * kPi);
    SimulationState s;
    s.u = fill(g, [&](double x, double, double) {
        return 1.0 + 0.3 * std::cos(2.0 * kPi * x / g.box_length);
    });
    s.v = ScalarField(g, 0.2);
    StepControl ctl;
    ctl.dt = 1e-2;

    std::vector<double> mu_t, mv_t;
    Stepper stepper(g, p, ctl);
    for (int i = 0; i < 40; ++i) {
        mu_t.push_back(mean(s.u));
        mv_t.push_back(mean(s.v));
        s = stepper.step(s);
    }
    mu_t.push_back(mean(s.u));
    mv_t.push_back(mean(s.v));
    for (std::size_t i = 1; i + 1 < mu_t.size(); ++i) {
        const double lhs = (mv_t[i + 1] - mv_t[i - 1]) / (2.0 * ctl.dt);
        const double rhs = p.mu * mu_t[i] - p.lambda * mv_t[i];
        CHECK(std::abs(lhs - rhs) <= 1e-3);
    }
}

TEST_CASE("abort contract") {
    const ModelParams p = make_params(0.0, 1.0, 1.0, 1.5, 1.0, 1.0, 1);
    const Grid g(1, 16, 1.0);
    StepControl ctl;
    ctl.dt = 1e-3;
    Stepper stepper(g, p, ctl);

    SUBCASE("non-finite state") {
        SimulationState s;
        s.t = 2.5;
        s.u = ScalarField(g, 1.0);
        s.u.values[0] = std::nan("");
        s.v = ScalarField(g, 0.0);
        try {
            stepper.step(s);
            FAIL("expected IntegrationAbort");
        } catch (const IntegrationAbort& e) {
            CHECK(e.time_of_failure() == 2.5);
        }
    }
    SUBCASE("overflowing power source") {
        SimulationState s;
        s.t = 1.0;
        s.u = ScalarField(g, 1e210);  // u^1.5 overflows to inf
        s.v = ScalarField(g, 0.0);
        CHECK_THROWS_AS(stepper.step(s), IntegrationAbort);
    }
    SUBCASE("run returns a partial record") {
        SimulationState s;
        s.u = ScalarField(g, 1e210);
        s.v = ScalarField(g, 0.0);
        StepControl tiny = ctl;
        tiny.dt = 1e-107;  // below the ceiling for this enormous amplitude
        const TimeSeriesRecord rec = run(s, p, tiny, 1.0, {});
        CHECK(rec.aborted);
        CHECK(rec.abort_time == 0.0);
        CHECK(rec.rows.size() == 1);
    }
}

TEST_CASE("positivity clip records removed mass") {
    SUBCASE("nothing to clip at the equilibrium") {
        const ModelParams p = make_params(0.0, 2.0, 0.5, 1.5, 1.0, 1.0, 1);
        const Equilibrium eq = equilibrium(p);
        const Grid g(1, 16, 1.0);
        SimulationState s;
        s.u = ScalarField(g, eq.u_star);
        s.v = ScalarField(g, eq.v_star);
        StepControl ctl;
        ctl.dt = 1e-3;
        Stepper stepper(g, p, ctl);
        stepper.step(s);
        CHECK(stepper.last_clipped_mass() == 0.0);
    }
    SUBCASE("an unresolved spike rings negative and is clipped") {
        const ModelParams p = make_params(0.0, 1.0, 1.0, 1.5, 1.0, 1.0, 1);
        const Grid g(1, 32, 2.0 * kPi);
        SimulationState s;
        s.u = ScalarField(g, 0.0);
        s.u.values[16] = 1.0;  // single-sample spike, far below resolution
        s.v = ScalarField(g, 0.0);
        StepControl ctl;
        ctl.dt = 1e-3;
        Stepper stepper(g, p, ctl);
        const SimulationState out = stepper.step(s);
        CHECK(stepper.last_clipped_mass() > 0.0);
        CHECK(inf_value(out.u) == 0.0);

        // the same configuration without the clip keeps its undershoot
        StepControl raw = ctl;
        raw.positivity_clip = false;
        Stepper stepper_raw(g, p, raw);
        CHECK(inf_value(stepper_raw.step(s).u) < 0.0);

        // run() flags the clipping as exceeding 1e-8 of the mean
        const TimeSeriesRecord rec = run(s, p, ctl, 0.01, {});
        CHECK(rec.clip_flagged);
    }
}

TEST_CASE("run sampling and determinism") {
    const ModelParams p = make_params(0.1, 1.0, 1.0, 1.5, 1.0, 1.0, 1);
    const Grid g(1, 16, 4.0 * kPi);
    SimulationState s;
    s.u = fill(g, [&](double x, double, double) {
        return 1.0 + 0.2 * std::sin(2.0 * kPi * x / g.box_length);
    });
    s.v = ScalarField(g, 0.5);
    StepControl ctl;
    ctl.dt = 0.01;

    SUBCASE("empty run keeps one initial sample") {
        const TimeSeriesRecord rec = run(s, p, ctl, s.t, {});
        CHECK(rec.rows.size() == 1);
        CHECK(rec.rows[0].t == s.t);
        CHECK(rec.rows[0].sup_u == sup_norm(s.u));
    }
    SUBCASE("equilibrium stays put over a long window") {
        const Equilibrium eq = equilibrium(p);
        SimulationState se;
        se.u = ScalarField(g, eq.u_star);
        se.v = ScalarField(g, eq.v_star);
        const TimeSeriesRecord rec = run(se, p, ctl, 2.0, {});
        for (const TimeSeriesRow& row : rec.rows) {
            CHECK(std::abs(row.sup_u - eq.u_star) <= 1e-10);
            CHECK(std::abs(row.inf_u - eq.u_star) <= 1e-10);
            CHECK(std::abs(row.sup_v - eq.v_star) <= 1e-10);
        }
    }
    SUBCASE("identical runs produce identical rows") {
        RunOptions opt;
        opt.observe_every = 0.05;
        const TimeSeriesRecord r1 = run(s, p, ctl, 1.0, opt);
        const TimeSeriesRecord r2 = run(s, p, ctl, 1.0, opt);
        REQUIRE(r1.rows.size() == r2.rows.size());
        for (std::size_t i = 0; i < r1.rows.size(); ++i) {
            CHECK(r1.rows[i].t == r2.rows[i].t);
            CHECK(r1.rows[i].sup_u == r2.rows[i].sup_u);
            CHECK(r1.rows[i].sup_grad_v == r2.rows[i].sup_grad_v);
            if (i > 0) CHECK(r1.rows[i].t > r1.rows[i - 1].t);
        }
        CHECK(r1.rows.back().t == doctest::Approx(1.0));
    }
}

TEST_CASE("step control validation") {
    const ModelParams p = make_params(0.5, 1.0, 1.0, 1.5, 1.0, 1.0, 1);
    const Grid g(1, 32, 2.0 * kPi);
    SimulationState s;
    s.u = ScalarField(g, 1.0);
    s.v = fill(g, [](double x, double, double) { return 0.3 * std::sin(x); });

    const double cap = dt_ceiling(p, s);
    CHECK(cap > 0.0);
    StepControl ok;
    ok.dt = 0.9 * cap;
    CHECK_NOTHROW(validate_step_control(ok, p, s));
    StepControl bad;
    bad.dt = 1.1 * cap;
    CHECK_THROWS_AS(validate_step_control(bad, p, s), std::invalid_argument);
    StepControl zero;
    zero.dt = 0.0;
    CHECK_THROWS_AS(validate_step_control(zero, p, s), std::invalid_argument);
}
