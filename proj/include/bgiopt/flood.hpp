#pragma once

#include "bgiopt/catchment.hpp"
#include "bgiopt/genome.hpp"
#include "bgiopt/storm.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace bgi {

enum class Boundary { closed, open };

Boundary parse_boundary(std::string_view s);
std::string_view to_string(Boundary b);

struct FloodParams {
    // Manning roughness, s m^(-1/3).
    double manning_impervious = 0.015;
    double manning_green = 0.05;
    double manning_permeable = 0.03; // active permeable-zone cells
    // Constant infiltration capacities, mm/hr.
    double infil_green = 10.0;
    double infil_permeable_active = 30.0;
    double infil_impervious = 0.0;
    double cfl_alpha = 0.7;
    double dt_min = 0.01; // s
    double dt_max = 2.0;  // s
    double settle_time = 600.0; // s simulated after rain ends
    Boundary boundary = Boundary::closed;
    double min_flow_depth = 1e-3; // m
    double open_edge_slope = 1e-3; // minimum outward water-surface slope at open edges

    void validate() const;
};

struct MassReport {
    double rain_in = 0.0; // m^3
    double infiltrated = 0.0;
    double outflow = 0.0;
    double stored = 0.0;
};

struct DepthField {
    Grid grid;
    std::vector<double> max_depth;   // m, running maximum over the run
    std::vector<double> final_depth; // m, at the end of the run
    MassReport mass;
    std::size_t steps = 0;
    double simulated_time = 0.0; // s
};

/// |rain_in - infiltrated - outflow - stored| / max(rain_in, eps)
double mass_balance(const DepthField& field);

/// Per-catchment precomputation shared by all simulations. Holds a reference to
/// the catchment, which must outlive the model. Const member functions are
/// safe to call concurrently.
class FloodModel {
public:
    FloodModel(const Catchment& catchment, FloodParams params);

    const Catchment& catchment() const { return *catchment_; }
    const FloodParams& params() const { return params_; }

    /// Runs the storm plus the settle period with the given zones switched on.
    DepthField simulate(const DesignStorm& storm, const Genome& active_zones) const;

    /// Extra rain share each cell receives from roofs (0 for building cells,
    /// and for cells with no building neighbours).
    const std::vector<double>& roof_share() const { return roof_share_; }

private:
    friend class FloodSimulation;

    const Catchment* catchment_;
    FloodParams params_;
    std::vector<std::uint8_t> wet_;    // 1 for cells inside the flow domain
    std::vector<double> roof_share_;
    std::size_t domain_cells_ = 0;
};

/// Explicit local-inertial solver state. Unit-width face discharges are updated
///   q <- (q - g h dt S) / (1 + g dt n^2 |q| / h^(7/3))
/// with h the face flow depth (max surface minus max bed of the two cells) and
/// S the surface slope. Outgoing volume is limited to the water a cell holds.
class FloodSimulation {
public:
    FloodSimulation(const FloodModel& model, const Genome& active_zones, std::vector<double> initial_depth = {});

    /// One step under the given rain intensity; dt is the CFL step clipped to
    /// `dt_cap`. Returns the dt taken.
    double advance(double rain_mm_per_hr, double dt_cap);

    double time() const { return time_; }
    std::size_t steps() const { return steps_; }
    std::span<const double> depth() const { return depth_; }
    std::span<const double> max_depth() const { return max_depth_; }
    MassReport mass() const;
    DepthField result() const;

private:
    double cfl_dt() const;

    const FloodModel* model_;
    int nrows_;
    int ncols_;
    double dx_;
    std::vector<double> depth_;
    std::vector<double> max_depth_;
    std::vector<double> infil_rate_; // m/s
    std::vector<double> n_sq_;
    std::vector<double> qx_; // between (r,c) and (r,c+1), positive eastward
    std::vector<double> qy_; // between (r,c) and (r+1,c), positive southward
    std::vector<double> q_west_, q_east_, q_north_, q_south_; // outward, open edges only
    std::vector<double> eta_;
    std::vector<double> outgoing_;
    MassReport mass_;
    double initial_volume_ = 0.0;
    double time_ = 0.0;
    std::size_t steps_ = 0;
};

DepthField simulate(const Catchment& catchment, const DesignStorm& storm, const Genome& active_zones,
                    const FloodParams& params);

} // namespace bgi
