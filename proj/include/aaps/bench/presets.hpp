#pragma once

#include <string>
#include <vector>

#include "aaps/bench/config.hpp"

namespace aaps::bench {

/// fig1, fig2-weights, table1, table2-sv, table3-bimodal, fig6-kdiag, apogee-rate
const std::vector<std::string>& preset_names();

/// The configs reproducing one table or figure; several when the experiment
/// compares samplers or targets. `desk_scale` shrinks dimensions, iteration
/// counts and grids so that each preset finishes in minutes. Throws
/// std::invalid_argument for an unknown name, listing the valid ones.
std::vector<ExperimentConfig> preset(const std::string& name, bool desk_scale);

}  // namespace aaps::bench
