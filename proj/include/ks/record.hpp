#ifndef KS_RECORD_HPP
#define KS_RECORD_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace ks {

/** One diagnostics sample. Norms are grid sup/inf values; bound_* are the
 *  closed-form barriers the run is checked against. clipped_mass is the
 *  largest per-step mean of the clipped negative part since the previous
 *  sample. */
struct TimeSeriesRow {
    double t = 0.0;
    double sup_u = 0.0;
    double inf_u = 0.0;
    double sup_v = 0.0;
    double inf_v = 0.0;
    double sup_grad_v = 0.0;
    double sup_lap_v = 0.0;
    double clipped_mass = 0.0;
    double bound_u = 0.0;
    double bound_v = 0.0;
    double bound_grad_v = 0.0;
};

struct TimeSeriesRecord {
    std::vector<TimeSeriesRow> rows;
    bool aborted = false;
    double abort_time = 0.0;
    std::string abort_reason;
    // Set when some step clipped more than 1e-8 * mean(u): the run is
    // under-resolved for the positivity assumption.
    bool clip_flagged = false;
};

/// Fixed column order, 17 significant digits, one leading `#` header line.
void write_csv(const TimeSeriesRecord& rec, std::ostream& os);

}  // namespace ks

#endif
