#include "ks/harness.hpp"

#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <thread>
#include <vector>

#include "ks/analysis.hpp"
#include "ks/config.hpp"
#include "ks/initial.hpp"
#include "ks/integrator.hpp"
#include "ks/model.hpp"
#include "ks/snapshot.hpp"

namespace ks {

namespace {

namespace fs = std::filesystem;

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

ScenarioConfig load(const CliOptions& opt) {
    ScenarioConfig cfg = parse_config_file(opt.config_path);
    if (opt.seed) cfg.seed = *opt.seed;
    return cfg;
}

void ensure_out_dir(const CliOptions& opt) {
    if (!opt.out_dir.empty()) fs::create_directories(opt.out_dir);
}

std::string out_path(const CliOptions& opt, const std::string& name) {
    return (fs::path(opt.out_dir) / name).string();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << text;
}

struct Scenario {
    ScenarioConfig cfg;
    SimulationState initial;
    InitialDataNorms norms;
    FreeParameters free;
};

Scenario prepare(const ScenarioConfig& cfg) {
    Scenario s{cfg, make_initial(cfg), {}, {}};
    s.norms = measure_norms(s.initial);
    s.free = resolve_free_parameters(cfg);
    // Keep the default xi strictly below the measured infimum when the data
    // starts above it; a floor below inf u0 is what the threshold formulas
    // assume for persistent data.
    if (!cfg.xi && s.norms.u0_inf > 0.0)
        s.free.xi = std::min(s.free.xi, 0.999 * s.norms.u0_inf);
    return s;
}

double dev_u(const TimeSeriesRow& r, const Equilibrium& eq) {
    return std::max(r.sup_u - eq.u_star, eq.u_star - r.inf_u);
}

double dev_v(const TimeSeriesRow& r, const Equilibrium& eq) {
    return std::max(r.sup_v - eq.v_star, eq.v_star - r.inf_v);
}

std::string constants_text(const DerivedConstants& d, const InitialDataNorms& n) {
    std::ostringstream os;
    os << "u0_sup = " << fmt(n.u0_sup) << "\n";
    os << "u0_inf = " << fmt(n.u0_inf) << "\n";
    os << "v0_sup = " << fmt(n.v0_sup) << "\n";
    os << "grad_v0_sup = " << fmt(n.grad_v0_sup) << "\n";
    os << "u_star = " << fmt(d.u_star) << "  # (a/b)^(1/(gamma-1))\n";
    os << "v_star = " << fmt(d.v_star) << "  # (mu/lambda) u_star\n";
    os << "c_bar = " << fmt(d.c_bar) << "  # 2 u0_sup + 3 u_star\n";
    os << "c_N = " << fmt(d.c_N) << "  # sqrt(N)/sqrt(pi)\n";
    os << "c1 = " << fmt(d.c1) << "  # sqrt(pi/lambda)\n";
    os << "c2 = " << fmt(d.c2) << "  # N/sqrt((gamma-1) a)\n";
    os << "c3 = " << fmt(d.c3) << "  # sqrt(pi/(lambda - sigma (gamma-1)))\n";
    os << "c4 = " << fmt(d.c4) << "  # sqrt(pi/((gamma-1)(a - sigma)))\n";
    os << "sigma = " << fmt(d.sigma) << "\n";
    os << "epsilon = " << fmt(d.epsilon) << "\n";
    os << "xi = " << fmt(d.xi) << "\n";
    os << "c_tilde = " << fmt(d.c_tilde)
       << "  # epsilon a^((2-gamma)/(gamma-1)) (a-sigma) / (2 b^(1/(gamma-1)))\n";
    os << "c_vtilde = " << fmt(d.c_vtilde)
       << "  # grad_v0_sup + mu c_bar c_N c1 + mu c_tilde c_N c3\n";
    os << "chi0 = " << fmt(d.chi0)
       << "  # u_star / (2 c_bar c2 (grad_v0_sup + mu c_bar c_N c1))\n";
    os << "chi1 = " << fmt(d.chi1)
       << "  # sqrt(pi) xi / (4 N (2 u_star - xi) (grad_v0_sup + mu c_bar c_N c1) "
          "sqrt(pi/(a (gamma-1))))\n";
    os << "chi_star = " << fmt(d.chi_star)
       << "  # min(chi0, chi1, eps^2 a^((2-gamma)/(gamma-1)) sigma sqrt(pi) / "
          "(4 b^(1/(gamma-1)) N c_vtilde c4 (c_tilde + u_star)))";
    if (!d.decay_in_scope) os << "  # out of decay-theory scope (gamma >= 2)";
    os << "\n";
    os << "v_sup_bound = " << fmt(d.v_sup_bound) << "  # v0_sup + (mu/lambda) c_bar\n";
    os << "grad_v_sup_bound = " << fmt(d.grad_v_sup_bound)
       << "  # grad_v0_sup + mu c_bar c_N c1\n";
    return os.str();
}

TimeSeriesRecord simulate(const Scenario& s, const CliOptions& opt, bool snapshots) {
    RunOptions ro;
    ro.observe_every = s.cfg.observe_every;
    int snap_index = 0;
    double next_snap = 0.0;
    if (snapshots && opt.snapshot_every > 0.0) {
        ro.observer = [&, every = opt.snapshot_every](const SimulationState& st) mutable {
            if (st.t + 1e-12 < next_snap) return;
            char name[64];
            std::snprintf(name, sizeof(name), "u_%06d.fld", snap_index);
            write_snapshot(out_path(opt, name), st.u, st.t);
            std::snprintf(name, sizeof(name), "v_%06d.fld", snap_index);
            write_snapshot(out_path(opt, name), st.v, st.t);
            ++snap_index;
            next_snap += every;
        };
    }
    return run(s.initial, s.cfg.params, s.cfg.ctl, s.cfg.t_end, ro);
}

void write_timeseries(const TimeSeriesRecord& rec, const std::string& path) {
    std::ofstream os(path, std::ios::binary);  // binary: keep \n exact for byte identity
    if (!os) throw std::runtime_error("cannot write " + path);
    write_csv(rec, os);
}

int finish_reports(const CliOptions& opt, const std::vector<VerificationReport>& reports) {
    std::ostringstream text;
    std::ostringstream csv;
    csv << report_csv_header() << "\n";
    bool all_pass = true;
    for (const VerificationReport& r : reports) {
        text << report_text(r) << "\n";
        csv << report_csv_row(r) << "\n";
        all_pass = all_pass && r.pass;
    }
    write_text_file(out_path(opt, "report.txt"), text.str());
    write_text_file(out_path(opt, "summary.csv"), csv.str());
    std::cout << text.str();
    return all_pass ? kExitOk : kExitCheckFailed;
}

}  // namespace

int cmd_constants(const CliOptions& opt) {
    ensure_out_dir(opt);
    const Scenario s = prepare(load(opt));
    const DerivedConstants d = derive_constants(s.cfg.params, s.norms, s.free);
    const std::string text = constants_text(d, s.norms);
    std::cout << text;
    write_text_file(out_path(opt, "constants.txt"), text);
    return kExitOk;
}

int cmd_simulate(const CliOptions& opt) {
    ensure_out_dir(opt);
    const Scenario s = prepare(load(opt));
    const TimeSeriesRecord rec = simulate(s, opt, true);
    write_timeseries(rec, out_path(opt, "timeseries.csv"));
    if (rec.aborted) {
        std::cerr << "non-finite at t=" << fmt(rec.abort_time) << ": " << rec.abort_reason
                  << "\n";
        return kExitNumericalAbort;
    }
    if (rec.clip_flagged)
        std::cerr << "warning: positivity clipping exceeded 1e-8 of the mean; "
                     "the run is likely under-resolved\n";
    return kExitOk;
}

int cmd_verify_bounds(const CliOptions& opt) {
    ensure_out_dir(opt);
    const Scenario s = prepare(load(opt));
    const TimeSeriesRecord rec = simulate(s, opt, false);
    write_timeseries(rec, out_path(opt, "timeseries.csv"));
    if (rec.aborted) {
        std::cerr << "non-finite at t=" << fmt(rec.abort_time) << "\n";
        return kExitNumericalAbort;
    }
    BoundednessTolerances tol;
    tol.tol_u = tol.tol_v = s.cfg.tol_bounds;
    VerificationReport r = check_boundedness(rec, s.cfg.params, s.norms, tol);
    const ChiThresholds th =
        chi_thresholds(s.cfg.params, s.norms, s.free.sigma, s.free.epsilon, s.free.xi);
    r.params_echo = "chi=" + fmt(s.cfg.params.chi) + " chi0=" + fmt(th.chi0);
    if (s.cfg.params.chi >= th.chi0)
        r.details += (r.details.empty() ? "" : "; ") + std::string("chi >= chi0: outside theory");
    return finish_reports(opt, {r});
}

int cmd_verify_persistence(const CliOptions& opt) {
    ensure_out_dir(opt);
    const Scenario s = prepare(load(opt));
    const TimeSeriesRecord rec = simulate(s, opt, false);
    write_timeseries(rec, out_path(opt, "timeseries.csv"));
    if (rec.aborted) {
        std::cerr << "non-finite at t=" << fmt(rec.abort_time) << "\n";
        return kExitNumericalAbort;
    }
    const PersistenceResult pr = check_persistence(rec, s.cfg.t_transient);
    return finish_reports(opt, {pr.report});
}

int cmd_verify_decay(const CliOptions& opt) {
    ensure_out_dir(opt);
    const Scenario s = prepare(load(opt));
    if (!s.cfg.params.decay_in_scope())
        throw ConfigError("verify-decay requires gamma in (1,2)");

    const Equilibrium eq = equilibrium(s.cfg.params);
    const DecayConstantsCheck dc =
        check_decay_constants(s.cfg.params, s.norms, s.free.sigma, s.free.epsilon);
    const ChiThresholds th =
        chi_thresholds(s.cfg.params, s.norms, s.free.sigma, s.free.epsilon, s.free.xi);

    const TimeSeriesRecord rec = simulate(s, opt, false);
    write_timeseries(rec, out_path(opt, "timeseries.csv"));
    if (rec.aborted) {
        std::cerr << "non-finite at t=" << fmt(rec.abort_time) << "\n";
        return kExitNumericalAbort;
    }

    // Empirical time at which the smallness threshold is first reached.
    double t_small = std::numeric_limits<double>::quiet_NaN();
    for (const TimeSeriesRow& row : rec.rows) {
        if (dev_u(row, eq) <= dc.smallness_threshold) {
            t_small = row.t;
            break;
        }
    }

    const double theoretical = s.free.sigma * (s.cfg.params.gamma - 1.0);
    VerificationReport r;
    r.name = "decay";
    r.tolerance = s.cfg.decay_rate_slack;
    r.params_echo = "chi=" + fmt(s.cfg.params.chi) + " chi_star=" + fmt(th.chi_star) +
                    " sigma=" + fmt(s.free.sigma) + " epsilon=" + fmt(s.free.epsilon) +
                    " xi=" + fmt(s.free.xi);
    std::ostringstream details;
    if (s.cfg.params.chi >= th.chi_star) details << "chi >= chi_star: outside theory; ";

    if (std::isnan(t_small)) {
        r.pass = false;
        details << "smallness threshold " << fmt(dc.smallness_threshold) << " never reached";
        r.details = details.str();
        return finish_reports(opt, {dc.report, r});
    }

    const double t0 = rec.rows.front().t;
    const double t1 = std::max(t_small, t0 + s.cfg.decay_window_frac * (s.cfg.t_end - t0));
    DecayFits fits;
    try {
        fits = fit_decay(rec, eq, t1, s.cfg.t_end, theoretical);
    } catch (const std::invalid_argument& e) {
        r.pass = false;
        details << "fit window [" << fmt(t1) << "," << fmt(s.cfg.t_end)
                << "] unusable: " << e.what();
        r.details = details.str();
        return finish_reports(opt, {dc.report, r});
    }

    const double min_rate = theoretical * (1.0 - s.cfg.decay_rate_slack);
    const double final_du = dev_u(rec.rows.back(), eq);
    const double final_dv = dev_v(rec.rows.back(), eq);
    r.pass = fits.u.rate >= min_rate && fits.v.rate >= min_rate &&
             final_du <= s.cfg.decay_final_dev && final_dv <= s.cfg.decay_final_dev;
    r.worst_margin = std::min(fits.u.rate, fits.v.rate) - min_rate;
    r.worst_time = t1;
    details << "t_small=" << fmt(t_small) << " rate_u=" << fmt(fits.u.rate)
            << " rate_v=" << fmt(fits.v.rate) << " required=" << fmt(min_rate)
            << " final_dev_u=" << fmt(final_du) << " final_dev_v=" << fmt(final_dv);
    r.details = details.str();

    return finish_reports(opt, {dc.report, r});
}

int cmd_lnseq(const CliOptions& opt) {
    ensure_out_dir(opt);
    const ScenarioConfig cfg = load(opt);
    FreeParameters f = resolve_free_parameters(cfg);
    const LnSequence seq = ln_recursion(f.xi, cfg.params);
    std::ostringstream os;
    os << "# n,l_n\n";
    for (std::size_t n = 0; n < seq.iterates.size(); ++n)
        os << n << "," << fmt(seq.iterates[n]) << "\n";
    os << "limit = " << fmt(seq.limit) << "\n";
    os << "converged = " << (seq.converged ? "true" : "false") << "\n";
    const std::string text = os.str();
    std::cout << text;
    write_text_file(out_path(opt, "lnseq.txt"), text);
    const bool ok = seq.converged && std::abs(seq.iterates.back() - seq.limit) <= 1e-8;
    return ok ? kExitOk : kExitCheckFailed;
}

std::string override_config_line(const std::string& text, const std::string& key,
                                 double value) {
    std::istringstream is(text);
    std::ostringstream os;
    std::string line;
    bool replaced = false;
    while (std::getline(is, line)) {
        const std::size_t eq = line.find('=');
        bool matches = false;
        if (eq != std::string::npos) {
            std::string k = line.substr(0, eq);
            k.erase(0, k.find_first_not_of(" \t"));
            const std::size_t end = k.find_last_not_of(" \t");
            if (end != std::string::npos) k.erase(end + 1);
            matches = (k == key);
        }
        if (matches) {
            if (!replaced) os << key << " = " << fmt(value) << "\n";
            replaced = true;
        } else {
            os << line << "\n";
        }
    }
    if (!replaced) os << key << " = " << fmt(value) << "\n";
    return os.str();
}

namespace {

struct SweepCell {
    int index = 0;
    double value = 0.0;
    std::string outcome;
    double worst_bound_margin = std::numeric_limits<double>::quiet_NaN();
    double persistence_floor = std::numeric_limits<double>::quiet_NaN();
    double decay_rate = std::numeric_limits<double>::quiet_NaN();
    std::string error;
};

void run_cell(const ScenarioConfig& base, const CliOptions& opt, SweepCell& cell) {
    try {
        const std::string text =
            override_config_line(base.raw_text, base.sweep_param, cell.value);
        ScenarioConfig cfg = parse_config_text(text);
        if (opt.seed) cfg.seed = *opt.seed;
        const Scenario s = prepare(cfg);
        const TimeSeriesRecord rec = simulate(s, opt, false);
        char name[64];
        std::snprintf(name, sizeof(name), "cell_%03d_timeseries.csv", cell.index);
        write_timeseries(rec, out_path(opt, name));

        if (rec.aborted) {
            cell.outcome = "non-finite at t=" + fmt(rec.abort_time);
            return;
        }
        BoundednessTolerances tol;
        tol.tol_u = tol.tol_v = cfg.tol_bounds;
        const VerificationReport bounds = check_boundedness(rec, cfg.params, s.norms, tol);
        cell.worst_bound_margin = bounds.worst_margin;
        cell.outcome = bounds.pass ? "bounded" : "unclassified";

        for (const std::string& check : cfg.checks) {
            if (check == "persistence") {
                cell.persistence_floor = check_persistence(rec, cfg.t_transient).floor;
            } else if (check == "decay" && cfg.params.decay_in_scope()) {
                const Equilibrium eq = equilibrium(cfg.params);
                const double theoretical = s.free.sigma * (cfg.params.gamma - 1.0);
                const double t0 = rec.rows.front().t;
                const double t1 = t0 + cfg.decay_window_frac * (cfg.t_end - t0);
                try {
                    cell.decay_rate = fit_decay(rec, eq, t1, cfg.t_end, theoretical).u.rate;
                } catch (const std::invalid_argument&) {
                    // deviation not positive on the window; leave NaN
                }
            }
        }
    } catch (const IntegrationAbort& e) {
        cell.outcome = "non-finite at t=" + fmt(e.time_of_failure());
    } catch (const std::exception& e) {
        cell.error = e.what();
    }
}

}  // namespace

int cmd_sweep(const CliOptions& opt) {
    ensure_out_dir(opt);
    const ScenarioConfig base = load(opt);
    if (base.sweep_param.empty())
        throw ConfigError("sweep requires sweep.param and sweep.values");

    std::vector<SweepCell> cells(base.sweep_values.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        cells[i].index = static_cast<int>(i);
        cells[i].value = base.sweep_values[i];
    }

    // The transform planner is not thread-safe: touch every cell's grid once
    // here so workers only execute cached plans.
    for (const SweepCell& c : cells) {
        try {
            const ScenarioConfig cfg =
                parse_config_text(override_config_line(base.raw_text, base.sweep_param, c.value));
            const Grid g(cfg.params.dim, cfg.grid_points, cfg.grid_length);
            (void)transform(ScalarField(g, 0.0));
        } catch (const std::exception&) {
            // the worker will surface the error with its cell index
        }
    }

    const int jobs = std::max(1, std::min<int>(opt.jobs, static_cast<int>(cells.size())));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    for (int w = 0; w < jobs; ++w) {
        workers.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= cells.size()) return;
                run_cell(base, opt, cells[i]);
            }
        });
    }
    for (std::thread& t : workers) t.join();

    for (const SweepCell& c : cells) {
        if (!c.error.empty()) throw ConfigError("sweep cell " + std::to_string(c.index) +
                                                ": " + c.error);
    }

    std::ostringstream csv;
    csv << "# cell," << base.sweep_param
        << ",outcome,worst_bound_margin,persistence_floor,decay_rate\n";
    bool any_abort = false;
    for (const SweepCell& c : cells) {
        csv << c.index << "," << fmt(c.value) << "," << c.outcome << ","
            << fmt(c.worst_bound_margin) << "," << fmt(c.persistence_floor) << ","
            << fmt(c.decay_rate) << "\n";
        if (c.outcome.rfind("non-finite", 0) == 0) any_abort = true;
    }
    write_text_file(out_path(opt, "summary.csv"), csv.str());
    std::cout << csv.str();
    return any_abort ? kExitNumericalAbort : kExitOk;
}

}  // namespace ks
