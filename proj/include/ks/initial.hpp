#ifndef KS_INITIAL_HPP
#define KS_INITIAL_HPP

#include "ks/config.hpp"
#include "ks/integrator.hpp"

namespace ks {

/** Deterministic initial data at t = 0 for the configured scenario. Random
 *  kinds are driven by run.seed alone, so equal configs produce bit-identical
 *  fields. */
SimulationState make_initial(const ScenarioConfig& cfg);

}  // namespace ks

#endif
