#pragma once

#include <optional>
#include <string>

#include "oulevy/serialization.hpp"

namespace oulevy {

struct RunOverrides {
    std::optional<std::uint64_t> seed;
    std::string out_dir = "out";
    double tol_scale = 1.0;
    int threads = 0;
};

struct ExperimentOutcome {
    int exit_code = 0;  // 0 all pass, 2 some inconclusive, 1 failure
    Json verdicts = Json::array();
};

/// dispatch on config["experiment"]; writes verdicts.json and the
/// experiment's CSV artifacts into the output directory
ExperimentOutcome run_experiment(const Json& config, const RunOverrides& overrides);

}  // namespace oulevy
