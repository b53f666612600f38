#ifndef STEFANLAB_CONFIG_HPP
#define STEFANLAB_CONFIG_HPP

#include <string>

#include "stefanlab/classifier.hpp"
#include "stefanlab/model.hpp"
#include "stefanlab/solver.hpp"

#include "json.hpp"

namespace stefanlab {

class config_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct OutputConfig {
    std::string csv_path = "run.csv";
    std::string json_path = "run.json";
    std::string checkpoint_dir;  // empty = do not write checkpoint files
};

struct RunConfig {
    ProblemSpec problem;
    NumericsConfig numerics;
    ClassifierRules classifier;
    OutputConfig output;
};

// Parses and fully validates a config document; unknown keys are rejected,
// defaults are filled in. Throws config_error naming the offending key path.
RunConfig parse_config(const nlohmann::json& document);
RunConfig parse_config_file(const std::string& path);

// The effective config with all defaults applied, suitable for re-running.
nlohmann::json echo_config(const RunConfig& config);

}  // namespace stefanlab

#endif
