#ifndef KS_HARNESS_HPP
#define KS_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>

namespace ks {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericalAbort = 3;

struct CliOptions {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;  // overrides run.seed when present
    int jobs = 1;
    double snapshot_every = 0.0;  // 0 disables snapshots
};

int cmd_constants(const CliOptions& opt);
int cmd_simulate(const CliOptions& opt);
int cmd_verify_bounds(const CliOptions& opt);
int cmd_verify_decay(const CliOptions& opt);
int cmd_verify_persistence(const CliOptions& opt);
int cmd_lnseq(const CliOptions& opt);
int cmd_sweep(const CliOptions& opt);

/// Replaces (or appends) one `key = value` line; used by sweep cells.
std::string override_config_line(const std::string& text, const std::string& key,
                                 double value);

}  // namespace ks

#endif
