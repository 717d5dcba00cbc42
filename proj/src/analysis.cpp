#include "ks/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ks {

namespace {
std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}
}  // namespace

std::string report_text(const VerificationReport& r) {
    std::ostringstream os;
    os << "[" << r.name << "]\n";
    os << "pass = " << (r.pass ? "true" : "false") << "\n";
    os << "worst_margin = " << fmt(r.worst_margin) << "\n";
    os << "worst_time = " << fmt(r.worst_time) << "\n";
    os << "tolerance = " << fmt(r.tolerance) << "\n";
    if (!r.params_echo.empty()) os << "params = " << r.params_echo << "\n";
    if (!r.details.empty()) os << "details = " << r.details << "\n";
    return os.str();
}

std::string report_csv_header() {
    return "check,pass,worst_margin,worst_time,tolerance";
}

std::string report_csv_row(const VerificationReport& r) {
    std::ostringstream os;
    os << r.name << "," << (r.pass ? 1 : 0) << "," << fmt(r.worst_margin) << ","
       << fmt(r.worst_time) << "," << fmt(r.tolerance);
    return os.str();
}

VerificationReport check_boundedness(const TimeSeriesRecord& rec, const ModelParams& p,
                                     const InitialDataNorms& n,
                                     const BoundednessTolerances& tol) {
    if (rec.rows.empty()) throw std::invalid_argument("check_boundedness: empty record");
    const double half_cbar = 0.5 * c_bar(p, n);
    const VBounds vb = v_bounds(p, n);

    VerificationReport r;
    r.name = "boundedness";
    r.tolerance = std::min(tol.tol_u, tol.tol_v);
    r.worst_margin = std::numeric_limits<double>::infinity();
    r.pass = true;

    const double t0 = rec.rows.front().t;
    for (const TimeSeriesRow& row : rec.rows) {
        const double margins[4] = {
            explicit_u_bound(p, n, row.t - t0) - row.sup_u,
            half_cbar - row.sup_u,
            vb.v_sup_bound - row.sup_v,
            vb.grad_v_sup_bound - row.sup_grad_v,
        };
        const double tols[4] = {tol.tol_u, tol.tol_u, tol.tol_v, tol.tol_v};
        for (int j = 0; j < 4; ++j) {
            if (margins[j] < r.worst_margin) {
                r.worst_margin = margins[j];
                r.worst_time = row.t;
            }
            if (margins[j] < -tols[j]) r.pass = false;
        }
    }
    if (rec.aborted) {
        r.pass = false;
        r.details = "run aborted: " + rec.abort_reason + " at t=" + fmt(rec.abort_time);
    }
    return r;
}

PersistenceResult check_persistence(const TimeSeriesRecord& rec, double t_transient) {
    PersistenceResult out;
    bool any = false;
    for (const TimeSeriesRow& row : rec.rows) {
        if (row.t < t_transient) continue;
        if (!any) {
            out.floor = row.inf_u;
            out.ceiling = row.sup_u;
            out.report.worst_time = row.t;
            any = true;
        } else {
            if (row.inf_u < out.floor) {
                out.floor = row.inf_u;
                out.report.worst_time = row.t;
            }
            out.ceiling = std::max(out.ceiling, row.sup_u);
        }
    }
    if (!any) throw std::invalid_argument("check_persistence: window past the record end");
    out.report.name = "persistence";
    out.report.pass = out.floor > 0.0;
    out.report.worst_margin = out.floor;
    out.report.details = "floor=" + fmt(out.floor) + " ceiling=" + fmt(out.ceiling);
    return out;
}

DecayFit fit_decay_series(const std::vector<std::pair<double, double>>& dev,
                          double t1, double t2, double theoretical_rate) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& [t, d] : dev) {
        if (t < t1 || t > t2) continue;
        if (!(d > 0.0)) break;  // keep the last strictly positive prefix
        pts.emplace_back(t, std::log(d));
    }
    if (pts.size() < 10)
        throw std::invalid_argument("fit_decay: fewer than 10 usable samples");

    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    for (const auto& [t, y] : pts) {
        st += t;
        sy += y;
        stt += t * t;
        sty += t * y;
    }
    const double m = static_cast<double>(pts.size());
    const double denom = m * stt - st * st;
    const double slope = (m * sty - st * sy) / denom;
    const double intercept = (sy - slope * st) / m;

    DecayFit fit;
    fit.rate = -slope;
    fit.prefactor = std::exp(intercept);
    fit.window_t1 = pts.front().first;
    fit.window_t2 = pts.back().first;
    fit.theoretical_rate = theoretical_rate;
    fit.samples = static_cast<int>(pts.size());
    double ss = 0.0;
    for (const auto& [t, y] : pts) {
        const double resid = y - (intercept + slope * t);
        ss += resid * resid;
    }
    fit.residual_rms = std::sqrt(ss / m);
    return fit;
}

DecayFits fit_decay(const TimeSeriesRecord& rec, const Equilibrium& eq,
                    double t1, double t2, double theoretical_rate) {
    std::vector<std::pair<double, double>> du, dv;
    du.reserve(rec.rows.size());
    dv.reserve(rec.rows.size());
    for (const TimeSeriesRow& row : rec.rows) {
        du.emplace_back(row.t, std::max(row.sup_u - eq.u_star, eq.u_star - row.inf_u));
        dv.emplace_back(row.t, std::max(row.sup_v - eq.v_star, eq.v_star - row.inf_v));
    }
    return {fit_decay_series(du, t1, t2, theoretical_rate),
            fit_decay_series(dv, t1, t2, theoretical_rate)};
}

LnSequence ln_recursion(double xi, const ModelParams& p, int n_max, double tol) {
    p.validate();
    const double u_star = equilibrium(p).u_star;
    const double beta = std::pow(p.b / p.a, 1.0 / (p.gamma - 1.0));
    if (!(xi > 0.0) || !(xi < 0.25 * u_star))
        throw std::domain_error("ln_recursion requires 0 < xi < u_star/4");
    if (!(2.0 * beta * xi < 1.0))
        throw std::domain_error("ln_recursion requires 2 beta xi < 1");

    LnSequence seq;
    seq.xi = xi;
    seq.beta = beta;
    seq.limit = u_star * (1.0 + std::sqrt(1.0 - 2.0 * beta * xi)) / (2.0 * xi);
    seq.iterates.push_back(1.0);
    for (int n = 1; n <= n_max; ++n) {
        const double prev = seq.iterates.back();
        const double next = -beta * xi * prev * prev + 2.0 * prev - 0.5;
        seq.iterates.push_back(next);
        if (std::abs(next - prev) < tol) {
            seq.converged = true;
            break;
        }
    }
    return seq;
}

VerificationReport quadratic_source_control(const ModelParams& p,
                                            const std::vector<double>& samples) {
    p.validate();
    if (!p.decay_in_scope())
        throw std::domain_error("quadratic_source_control requires gamma in (1,2)");
    const double u_star = equilibrium(p).u_star;
    const double beta = std::pow(p.b / p.a, 1.0 / (p.gamma - 1.0));
    const double coeff = p.a * (p.gamma - 1.0) * beta;

    const auto source = [&](double z) {
        return p.a * (p.gamma * z + u_star) - p.b * std::pow(z + u_star, p.gamma);
    };

    VerificationReport r;
    r.name = "quadratic_source_control";
    r.tolerance = 1e-12;
    r.pass = true;
    r.worst_margin = std::numeric_limits<double>::infinity();
    std::ostringstream violations;
    int n_violations = 0;
    for (double z : samples) {
        if (!(z > -u_star))
            throw std::domain_error("quadratic_source_control: sample outside z > -u_star");
        const double lhs = std::abs(source(z));
        const double rhs = coeff * z * z;
        const double margin = rhs - lhs;
        if (margin < r.worst_margin) {
            r.worst_margin = margin;
            r.worst_time = z;  // location of the worst sample, not a time
        }
        // relative slack on the comparison scale
        if (margin < -r.tolerance * std::max(1.0, std::max(lhs, rhs))) {
            r.pass = false;
            if (n_violations < 8) violations << (n_violations ? " " : "") << fmt(z);
            ++n_violations;
        }
    }

    // z->0 limit of |source|/z^2 by Richardson extrapolation.
    const double expected = 0.5 * p.a * p.gamma * (p.gamma - 1.0) * beta;
    const auto ratio = [&](double z) { return std::abs(source(z)) / (z * z); };
    double z0 = 1e-3 * u_star;
    const double r1 = ratio(z0), r2 = ratio(0.5 * z0);
    const double extrapolated = 2.0 * r2 - r1;  // first-order correction removed
    const double limit_err = std::abs(extrapolated - expected) / expected;
    if (limit_err > 1e-4) r.pass = false;

    std::ostringstream details;
    details << "limit_expected=" << fmt(expected) << " limit_extrapolated=" << fmt(extrapolated);
    if (n_violations > 0)
        details << " violations=" << n_violations << " at z: " << violations.str();
    r.details = details.str();
    return r;
}

DecayConstantsCheck check_decay_constants(const ModelParams& p, const InitialDataNorms& n,
                                          double sigma, double epsilon) {
    p.validate();
    n.validate();
    if (!p.decay_in_scope())
        throw std::domain_error("check_decay_constants requires gamma in (1,2)");
    const double sigma_cap = std::min(p.a / 2.0, p.lambda / (p.gamma - 1.0));
    if (!(sigma > 0.0 && sigma < sigma_cap))
        throw std::domain_error("sigma must lie in (0, min(a/2, lambda/(gamma-1)))");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::domain_error("epsilon must lie in (0,1)");

    const double q = (2.0 - p.gamma) / (p.gamma - 1.0);
    const double a_pow = std::pow(p.a, q);
    const double b_pow = std::pow(p.b, 1.0 / (p.gamma - 1.0));
    const double beta = std::pow(p.b / p.a, 1.0 / (p.gamma - 1.0));
    const double c_tilde = epsilon * a_pow * (p.a - sigma) / (2.0 * b_pow);

    DecayConstantsCheck out;
    out.smallness_threshold = epsilon * epsilon * a_pow * (p.a - 2.0 * sigma) / (4.0 * b_pow);
    const double lhs = epsilon * c_tilde - out.smallness_threshold -
                       p.a * beta * c_tilde * c_tilde / (p.a - sigma);
    const double rhs = epsilon * epsilon * a_pow * sigma / (4.0 * b_pow);
    out.identity_residual = std::abs(lhs - rhs) / std::abs(rhs);

    out.report.name = "decay_constants";
    out.report.tolerance = 1e-12;
    out.report.worst_margin = out.report.tolerance - out.identity_residual;
    out.report.pass = out.identity_residual <= out.report.tolerance && rhs > 0.0;
    out.report.details = "identity_residual=" + fmt(out.identity_residual) +
                         " smallness_threshold=" + fmt(out.smallness_threshold);
    return out;
}

}  // namespace ks
