#include "ks/record.hpp"

#include <cstdio>
#include <ostream>

namespace ks {

namespace {
void put(std::ostream& os, double x, char sep) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    os << buf << sep;
}
}  // namespace

void write_csv(const TimeSeriesRecord& rec, std::ostream& os) {
    os << "# t,sup_u,inf_u,sup_v,inf_v,sup_grad_v,sup_lap_v,clipped_mass,"
          "bound_u,bound_v,bound_grad_v\n";
    for (const TimeSeriesRow& r : rec.rows) {
        put(os, r.t, ',');
        put(os, r.sup_u, ',');
        put(os, r.inf_u, ',');
        put(os, r.sup_v, ',');
        put(os, r.inf_v, ',');
        put(os, r.sup_grad_v, ',');
        put(os, r.sup_lap_v, ',');
        put(os, r.clipped_mass, ',');
        put(os, r.bound_u, ',');
        put(os, r.bound_v, ',');
        put(os, r.bound_grad_v, '\n');
    }
    if (rec.aborted) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", rec.abort_time);
        os << "# aborted: non-finite at t=" << buf << "\n";
    }
}

}  // namespace ks
