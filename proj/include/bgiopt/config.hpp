#pragma once

#include "bgiopt/catchment.hpp"
#include "bgiopt/economics.hpp"
#include "bgiopt/flood.hpp"
#include "bgiopt/nsga2.hpp"
#include "bgiopt/storm.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace bgi {

/// `[section]` headers and `key = value` lines; `#` and `;` start comments.
struct IniDocument {
    struct Entry {
        std::string value;
        std::size_t line = 0;
    };
    std::map<std::string, std::map<std::string, Entry>> sections;

    static IniDocument parse(std::string_view content);
};

struct RunConfig {
    CatchmentPaths catchment;
    std::string residential_curve;
    std::string non_residential_curve;
    std::string output_dir;

    DdfDescriptors ddf;
    ProfileParams profile;
    double duration_min = 30.0;
    int storm_steps = 30;

    FloodParams flood;
    CostParams costs;
    GaConfig ga;
    std::vector<double> return_periods{10, 20, 30, 50, 100};
    std::vector<double> uplifts{0.15, 0.30, 0.45};
    double return_period = 100.0; // single-period default
    std::size_t workers = 1;
    bool cache = true;

    void validate() const;
};

/// Unknown sections or keys are errors. Relative paths resolve against `base_dir`.
RunConfig parse_run_config(std::string_view content, const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::string& path);

} // namespace bgi
