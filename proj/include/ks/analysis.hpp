#ifndef KS_ANALYSIS_HPP
#define KS_ANALYSIS_HPP

#include <string>
#include <vector>

#include "ks/model.hpp"
#include "ks/record.hpp"

namespace ks {

/** Verdict of one theorem-level check. Margins are signed as
 *  bound minus observed, so pass means worst_margin >= -tolerance. */
struct VerificationReport {
    std::string name;
    bool pass = false;
    double worst_margin = 0.0;
    double worst_time = 0.0;
    double tolerance = 0.0;
    std::string params_echo;
    std::string details;
};

std::string report_text(const VerificationReport& r);
std::string report_csv_header();
std::string report_csv_row(const VerificationReport& r);

struct BoundednessTolerances {
    double tol_u = 1e-2;
    double tol_v = 1e-2;
};

/** Checks every recorded row against the four sup-norm barriers:
 *  sup u <= bound_u(t), sup u <= c_bar/2, sup v and sup|grad v| below the
 *  signal bounds. Throws std::invalid_argument on an empty record. */
VerificationReport check_boundedness(const TimeSeriesRecord& rec, const ModelParams& p,
                                     const InitialDataNorms& n,
                                     const BoundednessTolerances& tol = {});

struct PersistenceResult {
    double floor = 0.0;    // min over t >= t_transient of inf u
    double ceiling = 0.0;  // max over the same window of sup u
    VerificationReport report;
};

/// Measures the realized persistence floor; pass means floor > 0.
PersistenceResult check_persistence(const TimeSeriesRecord& rec, double t_transient);

struct DecayFit {
    double rate = 0.0;        // -slope of the log-deviation fit
    double prefactor = 0.0;   // exp(intercept at t = 0)
    double window_t1 = 0.0;
    double window_t2 = 0.0;
    double residual_rms = 0.0;  // in log space
    double theoretical_rate = 0.0;
    int samples = 0;
};

/** Least-squares line through (t, log dev) on [t1, t2]. Nonpositive
 *  deviations truncate the window to the last strictly positive prefix;
 *  fewer than 10 usable samples throw std::invalid_argument. */
DecayFit fit_decay_series(const std::vector<std::pair<double, double>>& dev,
                          double t1, double t2, double theoretical_rate);

struct DecayFits {
    DecayFit u;
    DecayFit v;
};

/// Deviations sup|u - u_star|, sup|v - v_star| are reconstructed per row from
/// the recorded sup/inf pairs.
DecayFits fit_decay(const TimeSeriesRecord& rec, const Equilibrium& eq,
                    double t1, double t2, double theoretical_rate);

/** The scalar recursion l_n = -beta xi l_{n-1}^2 + 2 l_{n-1} - 1/2 with
 *  l_0 = 1 and beta = (b/a)^{1/(gamma-1)}, iterated to its closed-form limit
 *  l_tilde = u_star (1 + sqrt(1 - 2 beta xi)) / (2 xi). */
struct LnSequence {
    double xi = 0.0;
    double beta = 0.0;
    std::vector<double> iterates;  // starts at l_0 = 1
    double limit = 0.0;            // closed form
    bool converged = false;
};

LnSequence ln_recursion(double xi, const ModelParams& p, int n_max = 1000, double tol = 1e-12);

/** Audits |a (gamma z + u_star) - b (z + u_star)^gamma| <= a (gamma-1) beta z^2
 *  at the given samples (z > -u_star) and reports any violation with its
 *  location, then confirms the z->0 limit (a/2) gamma (gamma-1) beta by
 *  Richardson extrapolation. Requires gamma in (1,2). */
VerificationReport quadratic_source_control(const ModelParams& p,
                                            const std::vector<double>& samples);

struct DecayConstantsCheck {
    VerificationReport report;
    double smallness_threshold = 0.0;  // eps^2 a^{(2-gamma)/(gamma-1)} (a-2 sigma) / (4 b^{1/(gamma-1)})
    double identity_residual = 0.0;    // relative
};

/** Recomputes the algebraic identity
 *  eps c_tilde - threshold - a beta c_tilde^2/(a-sigma)
 *      = eps^2 a^{(2-gamma)/(gamma-1)} sigma / (4 b^{1/(gamma-1)})
 *  and reports the smallness threshold the decay scenario must reach before
 *  its fit window opens. */
DecayConstantsCheck check_decay_constants(const ModelParams& p, const InitialDataNorms& n,
                                          double sigma, double epsilon);

}  // namespace ks

#endif
