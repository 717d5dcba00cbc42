#ifndef KS_CONFIG_HPP
#define KS_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ks/integrator.hpp"
#include "ks/model.hpp"

namespace ks {

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

struct InitialSpec {
    enum class Kind { Constant, Equilibrium, PerturbedEquilibrium, RandomBand, Bump };
    enum class V0 { Zero, Equilibrium, Proportional };

    Kind kind = Kind::Equilibrium;
    V0 v0 = V0::Zero;
    double value = 1.0;                // constant
    double amplitude = 0.1;            // perturbed_equilibrium
    double band_min = 0.0;             // random_band
    double band_max = 1.0;
    int smoothing = 4;                 // modes kept by the band low-pass
    std::vector<double> center;        // bump, defaults to the box center
    double width = 1.0;
    double height = 1.0;
    double bump_floor = 0.0;
};

/** Flat `key = value` scenario file with dotted sections. Unknown keys are
 *  rejected with their line number. */
struct ScenarioConfig {
    ModelParams params;
    int grid_points = 64;
    double grid_length = 1.0;
    StepControl ctl;
    double t_end = 1.0;
    double observe_every = 0.1;
    std::uint64_t seed = 0;
    InitialSpec init;

    // Decay-analysis knobs; absent entries fall back to the midpoint defaults.
    std::optional<double> sigma, epsilon, xi;

    double t_transient = 10.0;
    double decay_window_frac = 0.4;
    double decay_rate_slack = 0.1;
    double decay_final_dev = 1e-3;
    double tol_bounds = 1e-2;
    std::vector<std::string> checks;  // used by sweep cells

    std::string sweep_param;           // dotted key, e.g. params.chi
    std::vector<double> sweep_values;

    std::string raw_text;  // original file contents, reused by sweep overrides
};

ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig parse_config_file(const std::string& path);

/// Resolved free parameters for this scenario (config overrides over defaults).
FreeParameters resolve_free_parameters(const ScenarioConfig& cfg);

}  // namespace ks

#endif
