#ifndef KS_SNAPSHOT_HPP
#define KS_SNAPSHOT_HPP

#include <string>

#include "ks/field.hpp"

namespace ks {

/** Binary field snapshot. Layout: the 6-byte magic "KSFLD1", then dim,
 *  points_per_axis, box_length and the time stamp as little-endian 64-bit
 *  values (integers for the first two, IEEE doubles for the rest), then the
 *  row-major samples as little-endian 64-bit doubles. */
struct Snapshot {
    ScalarField field;
    double time = 0.0;
};

void write_snapshot(const std::string& path, const ScalarField& f, double time);
Snapshot read_snapshot(const std::string& path);

}  // namespace ks

#endif
