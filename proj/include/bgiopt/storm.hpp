#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace bgi {

/// Catchment descriptors of the depth-duration-frequency relation
/// ln R = (c*y + d1) ln D + e*y + f.
struct DdfDescriptors {
    double c = 0.0;
    double d1 = 0.0;
    double e = 0.0;
    double f = 0.0;

    void validate() const;
};

/// Peak-centred profile y = (1 - a^z) / (1 - a), z = x^b.
struct ProfileParams {
    double a = 0.0;
    double b = 0.0;

    void validate() const;
};

struct StormStep {
    double interval_s = 0.0;
    double intensity_mm_per_hr = 0.0;

    double depth_mm() const { return intensity_mm_per_hr * interval_s / 3600.0; }
};

struct DesignStorm {
    double return_period = 0.0; // years
    double duration_min = 0.0;
    double total_depth_mm = 0.0;
    std::vector<StormStep> steps;

    double duration_s() const;
    double step_depth_sum_mm() const;
};

struct ClimateUplift {
    double fraction = 0.0;
};

inline constexpr ClimateUplift kUpliftLow{0.15};
inline constexpr ClimateUplift kUpliftMedium{0.30};
inline constexpr ClimateUplift kUpliftHigh{0.45};

double gumbel_reduced_variate(double return_period);

/// Total depth in mm for a storm of `duration_hours` at the given return period.
double ddf_total_depth(double return_period, double duration_hours, const DdfDescriptors& desc);

double profile_fraction(double x, const ProfileParams& p);

/// Symmetric peak-centred hyetograph. Steps are mirrored in pairs about the
/// midpoint; pair k (1-based, counted outwards) carries
/// R * (F(2k/n) - F(2(k-1)/n)) split equally between its two steps.
std::vector<StormStep> build_hyetograph(double total_depth_mm, double duration_min, int n_steps,
                                        const ProfileParams& p);

DesignStorm make_design_storm(double return_period, double duration_min, int n_steps,
                              const DdfDescriptors& desc, const ProfileParams& p);

DesignStorm apply_uplift(const DesignStorm& storm, ClimateUplift u);

/// Return period on the baseline scale whose DDF depth equals (1+u) times
/// the depth at `base_period`.
double equivalent_return_period(double base_period, ClimateUplift u, double duration_hours,
                                const DdfDescriptors& desc);

// Two-column CSV `time_s,intensity_mm_per_hr`, one row per step start.
std::string write_storm_csv(const DesignStorm& storm);
DesignStorm parse_storm_csv(std::string_view text);

} // namespace bgi
