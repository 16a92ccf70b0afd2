#include "bgiopt/storm.hpp"

#include "bgiopt/errors.hpp"
#include "bgiopt/text.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace bgi {

void DdfDescriptors::validate() const
{
    if (!std::isfinite(c) || !std::isfinite(d1) || !std::isfinite(e) || !std::isfinite(f)) {
        throw ConfigError("DDF descriptors c, d1, e, f must be finite");
    }
}

void ProfileParams::validate() const
{
    if (!(a > 0.0) || a == 1.0 || !std::isfinite(a)) {
        throw ConfigError("profile parameter a must be positive and different from 1");
    }
    if (!(b > 0.0) || !std::isfinite(b)) {
        throw ConfigError("profile parameter b must be positive");
    }
}

double DesignStorm::duration_s() const
{
    return std::accumulate(steps.begin(), steps.end(), 0.0,
                           [](double acc, const StormStep& s) { return acc + s.interval_s; });
}

double DesignStorm::step_depth_sum_mm() const
{
    return std::accumulate(steps.begin(), steps.end(), 0.0,
                           [](double acc, const StormStep& s) { return acc + s.depth_mm(); });
}

double gumbel_reduced_variate(double return_period)
{
    if (!(return_period > 1.0) || !std::isfinite(return_period)) {
        throw DomainError("return period must be finite and greater than 1 year");
    }
    return -std::log(-std::log1p(-1.0 / return_period));
}

double ddf_total_depth(double return_period, double duration_hours, const DdfDescriptors& desc)
{
    desc.validate();
    if (!(duration_hours > 0.0)) {
        throw DomainError("storm duration must be positive");
    }
    const double y = gumbel_reduced_variate(return_period);
    return std::exp((desc.c * y + desc.d1) * std::log(duration_hours) + desc.e * y + desc.f);
}

double profile_fraction(double x, const ProfileParams& p)
{
    p.validate();
    if (!(x >= 0.0 && x <= 1.0)) {
        throw DomainError("profile proportion must lie in [0, 1]");
    }
    const double z = std::pow(x, p.b);
    return (1.0 - std::pow(p.a, z)) / (1.0 - p.a);
}

std::vector<StormStep> build_hyetograph(double total_depth_mm, double duration_min, int n_steps,
                                        const ProfileParams& p)
{
    if (n_steps < 2 || n_steps % 2 != 0) {
        throw ConfigError("hyetograph step count must be even and at least 2");
    }
    if (!(total_depth_mm > 0.0) || !std::isfinite(total_depth_mm)) {
        throw DomainError("storm total depth must be positive");
    }
    if (!(duration_min > 0.0)) {
        throw DomainError("storm duration must be positive");
    }
    p.validate();

    const int pairs = n_steps / 2;
    const double interval_s = duration_min * 60.0 / n_steps;
    std::vector<StormStep> steps(static_cast<std::size_t>(n_steps));
    double previous = 0.0;
    for (int k = 1; k <= pairs; ++k) {
        // The outermost window spans the whole storm; pin it so the total is exact.
        const double cumulative = (k == pairs) ? 1.0 : profile_fraction(2.0 * k / n_steps, p);
        const double half_depth = 0.5 * total_depth_mm * (cumulative - previous);
        previous = cumulative;
        const double intensity = half_depth / interval_s * 3600.0;
        steps[static_cast<std::size_t>(pairs - k)] = {interval_s, intensity};
        steps[static_cast<std::size_t>(pairs + k - 1)] = {interval_s, intensity};
    }
    return steps;
}

DesignStorm make_design_storm(double return_period, double duration_min, int n_steps,
                              const DdfDescriptors& desc, const ProfileParams& p)
{
    DesignStorm storm;
    storm.return_period = return_period;
    storm.duration_min = duration_min;
    storm.total_depth_mm = ddf_total_depth(return_period, duration_min / 60.0, desc);
    storm.steps = build_hyetograph(storm.total_depth_mm, duration_min, n_steps, p);
    return storm;
}

DesignStorm apply_uplift(const DesignStorm& storm, ClimateUplift u)
{
    if (!(u.fraction >= 0.0)) {
        throw DomainError("climate uplift must be non-negative");
    }
    DesignStorm out = storm;
    const double factor = 1.0 + u.fraction;
    out.total_depth_mm *= factor;
    for (auto& s : out.steps) {
        s.intensity_mm_per_hr *= factor;
    }
    return out;
}

double equivalent_return_period(double base_period, ClimateUplift u, double duration_hours,
                                const DdfDescriptors& desc)
{
    desc.validate();
    if (!(duration_hours > 0.0)) {
        throw DomainError("storm duration must be positive");
    }
    if (!(u.fraction >= 0.0)) {
        throw DomainError("climate uplift must be non-negative");
    }
    const double slope = desc.c * std::log(duration_hours) + desc.e;
    if (slope == 0.0) {
        throw DomainError("c*ln(D) + e is zero: an uplift cannot be expressed as a return-period shift");
    }
    const double y = gumbel_reduced_variate(base_period) + std::log1p(u.fraction) / slope;
    // 1 - exp(-exp(-y)) computed without cancellation for large y.
    return -1.0 / std::expm1(-std::exp(-y));
}

std::string write_storm_csv(const DesignStorm& storm)
{
    std::ostringstream out;
    out << "time_s,intensity_mm_per_hr\n";
    double t = 0.0;
    for (const auto& s : storm.steps) {
        out << text::format_double(t) << ',' << text::format_double(s.intensity_mm_per_hr) << '\n';
        t += s.interval_s;
    }
    return out.str();
}

DesignStorm parse_storm_csv(std::string_view content)
{
    const auto rows = text::lines(content);
    if (rows.empty() || text::trim(rows[0]) != "time_s,intensity_mm_per_hr") {
        throw ParseError("expected header 'time_s,intensity_mm_per_hr'", 1);
    }
    std::vector<double> times;
    std::vector<double> intensities;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (text::trim(rows[i]).empty()) {
            continue;
        }
        const auto fields = text::split(rows[i], ',');
        if (fields.size() != 2) {
            throw ParseError("expected two columns", i + 1);
        }
        times.push_back(text::parse_double(fields[0], i + 1));
        const double intensity = text::parse_double(fields[1], i + 1);
        if (!(intensity >= 0.0)) {
            throw ParseError("intensity must be non-negative", i + 1);
        }
        intensities.push_back(intensity);
    }
    if (times.size() < 2) {
        throw ParseError("a storm needs at least two steps", rows.size());
    }
    // Steps are uniform; the last step's length is inferred from the spacing.
    const double interval = times[1] - times[0];
    if (!(interval > 0.0)) {
        throw ParseError("step times must increase", 3);
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double gap = times[i] - times[i - 1];
        if (std::abs(gap - interval) > 1e-9 * interval) {
            throw ParseError("step times must be uniformly spaced", i + 2);
        }
    }
    DesignStorm storm;
    for (double intensity : intensities) {
        storm.steps.push_back({interval, intensity});
    }
    storm.duration_min = storm.duration_s() / 60.0;
    storm.total_depth_mm = storm.step_depth_sum_mm();
    return storm;
}

} // namespace bgi
