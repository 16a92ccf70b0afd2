#include "bgiopt/flood.hpp"

#include "bgiopt/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace bgi {

namespace {

constexpr double kGravity = 9.81;
constexpr double kMmPerHrToMPerS = 1.0 / 3.6e6;

} // namespace

Boundary parse_boundary(std::string_view s)
{
    if (s == "closed") {
        return Boundary::closed;
    }
    if (s == "open" || s == "open_at_edges") {
        return Boundary::open;
    }
    throw ConfigError("boundary must be 'closed' or 'open_at_edges'");
}

std::string_view to_string(Boundary b)
{
    return b == Boundary::closed ? "closed" : "open_at_edges";
}

void FloodParams::validate() const
{
    if (!(manning_impervious > 0.0) || !(manning_green > 0.0) || !(manning_permeable > 0.0)) {
        throw ConfigError("Manning coefficients must be positive");
    }
    if (!(infil_green >= 0.0) || !(infil_permeable_active >= 0.0) || !(infil_impervious >= 0.0)) {
        throw ConfigError("infiltration rates must be non-negative");
    }
    if (!(cfl_alpha > 0.0 && cfl_alpha <= 1.0)) {
        throw ConfigError("cfl_alpha must lie in (0, 1]");
    }
    if (!(dt_min > 0.0) || !(dt_max >= dt_min)) {
        throw ConfigError("time step bounds must satisfy 0 < dt_min <= dt_max");
    }
    if (!(settle_time >= 0.0)) {
        throw ConfigError("settle_time must be non-negative");
    }
    if (!(min_flow_depth > 0.0)) {
        throw ConfigError("min_flow_depth must be positive");
    }
    if (!(open_edge_slope > 0.0)) {
        throw ConfigError("open_edge_slope must be positive");
    }
}

double mass_balance(const DepthField& field)
{
    const auto& m = field.mass;
    const double eps = 1e-12;
    return std::abs(m.rain_in - m.infiltrated - m.outflow - m.stored) / std::max(m.rain_in, eps);
}

FloodModel::FloodModel(const Catchment& catchment, FloodParams params)
    : catchment_(&catchment), params_(params)
{
    params_.validate();
    const auto& grid = catchment.grid;
    const std::size_t n = grid.cell_count();
    wet_.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        wet_[i] = catchment.mask[i] != LandClass::building ? 1 : 0;
    }
    domain_cells_ = static_cast<std::size_t>(std::count(wet_.begin(), wet_.end(), std::uint8_t{1}));
    if (domain_cells_ == 0) {
        throw InputError("every cell is a building; there is no flow domain");
    }

    // Roof rain goes, in equal parts, to the non-building cells at minimum
    // Euclidean distance from each building cell.
    roof_share_.assign(n, 0.0);
    std::vector<std::size_t> nearest;
    for (std::size_t cell = 0; cell < n; ++cell) {
        if (wet_[cell]) {
            continue;
        }
        const int r = grid.row_of(cell);
        const int c = grid.col_of(cell);
        long best = std::numeric_limits<long>::max();
        nearest.clear();
        for (int radius = 1;; ++radius) {
            if (static_cast<long>(radius - 1) * (radius - 1) > best) {
                break;
            }
            if (radius > grid.nrows + grid.ncols) {
                break;
            }
            for (int dr = -radius; dr <= radius; ++dr) {
                for (int dc = -radius; dc <= radius; ++dc) {
                    if (std::max(std::abs(dr), std::abs(dc)) != radius) {
                        continue;
                    }
                    const int rr = r + dr;
                    const int cc = c + dc;
                    if (rr < 0 || rr >= grid.nrows || cc < 0 || cc >= grid.ncols) {
                        continue;
                    }
                    const std::size_t other = grid.index(rr, cc);
                    if (!wet_[other]) {
                        continue;
                    }
                    const long d2 = static_cast<long>(dr) * dr + static_cast<long>(dc) * dc;
                    if (d2 < best) {
                        best = d2;
                        nearest.clear();
                    }
                    if (d2 == best) {
                        nearest.push_back(other);
                    }
                }
            }
        }
        const double share = 1.0 / static_cast<double>(nearest.size());
        for (const auto other : nearest) {
            roof_share_[other] += share;
        }
    }
}

DepthField FloodModel::simulate(const DesignStorm& storm, const Genome& active_zones) const
{
    if (storm.steps.empty()) {
        throw InputError("storm has no steps");
    }
    FloodSimulation sim(*this, active_zones);

    std::vector<double> step_end;
    double acc = 0.0;
    for (const auto& s : storm.steps) {
        acc += s.interval_s;
        step_end.push_back(acc);
    }
    const double end = acc + params_.settle_time;
    constexpr double snap = 1e-9;
    std::size_t k = 0;
    while (sim.time() < end - snap) {
        while (k < step_end.size() && sim.time() >= step_end[k] - snap) {
            ++k;
        }
        double intensity = 0.0;
        double horizon = end;
        if (k < step_end.size()) {
            intensity = storm.steps[k].intensity_mm_per_hr;
            horizon = step_end[k];
        }
        sim.advance(intensity, horizon - sim.time());
    }
    return sim.result();
}

FloodSimulation::FloodSimulation(const FloodModel& model, const Genome& active_zones,
                                 std::vector<double> initial_depth)
    : model_(&model),
      nrows_(model.catchment().grid.nrows),
      ncols_(model.catchment().grid.ncols),
      dx_(model.catchment().grid.cellsize)
{
    const auto& catchment = model.catchment();
    const auto& p = model.params();
    const std::size_t n = catchment.grid.cell_count();
    if (active_zones.size() != catchment.zones.size()) {
        throw InputError("zone bit vector has length " + std::to_string(active_zones.size()) + ", expected " +
                         std::to_string(catchment.zones.size()));
    }

    infil_rate_.assign(n, 0.0);
    n_sq_.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        switch (catchment.mask[i]) {
        case LandClass::green:
            infil_rate_[i] = p.infil_green * kMmPerHrToMPerS;
            n_sq_[i] = p.manning_green * p.manning_green;
            break;
        case LandClass::impervious:
            infil_rate_[i] = p.infil_impervious * kMmPerHrToMPerS;
            n_sq_[i] = p.manning_impervious * p.manning_impervious;
            break;
        case LandClass::building:
            break;
        }
    }
    for (std::size_t z = 0; z < catchment.zones.size(); ++z) {
        if (!active_zones[z]) {
            continue;
        }
        for (const auto cell : catchment.zones[z].cells) {
            infil_rate_[cell] = p.infil_permeable_active * kMmPerHrToMPerS;
            n_sq_[cell] = p.manning_permeable * p.manning_permeable;
        }
    }

    if (initial_depth.empty()) {
        depth_.assign(n, 0.0);
    } else {
        if (initial_depth.size() != n) {
            throw InputError("initial depth field does not match the grid");
        }
        depth_ = std::move(initial_depth);
        for (std::size_t i = 0; i < n; ++i) {
            if (!(depth_[i] >= 0.0) || !std::isfinite(depth_[i])) {
                throw InputError("initial depths must be finite and non-negative");
            }
            if (!model.wet_[i]) {
                depth_[i] = 0.0;
            }
            initial_volume_ += depth_[i] * dx_ * dx_;
        }
    }
    max_depth_ = depth_;
    qx_.assign(static_cast<std::size_t>(nrows_) * static_cast<std::size_t>(std::max(ncols_ - 1, 0)), 0.0);
    qy_.assign(static_cast<std::size_t>(std::max(nrows_ - 1, 0)) * static_cast<std::size_t>(ncols_), 0.0);
    q_west_.assign(static_cast<std::size_t>(nrows_), 0.0);
    q_east_.assign(static_cast<std::size_t>(nrows_), 0.0);
    q_north_.assign(static_cast<std::size_t>(ncols_), 0.0);
    q_south_.assign(static_cast<std::size_t>(ncols_), 0.0);
    eta_.assign(n, 0.0);
    outgoing_.assign(n, 0.0);
}

double FloodSimulation::cfl_dt() const
{
    const auto& p = model_->params();
    double hmax = 0.0;
    for (const double h : depth_) {
        hmax = std::max(hmax, h);
    }
    double dt = p.dt_max;
    if (hmax > 0.0) {
        dt = std::min(dt, p.cfl_alpha * dx_ / std::sqrt(kGravity * hmax));
    }
    return std::max(dt, p.dt_min);
}

namespace {

// Cube root of a positive normal double: exponent-division seed, then three
// Halley steps (cubic convergence from ~3% to full precision).
inline double cube_root(double x)
{
    double y = std::bit_cast<double>(std::bit_cast<std::uint64_t>(x) / 3 + 0x2a9f7893782da1ceULL);
    for (int k = 0; k < 3; ++k) {
        const double y3 = y * y * y;
        y *= (y3 + 2.0 * x) / (2.0 * y3 + x);
    }
    return y;
}

// Local-inertial update of one face discharge.
inline double inertial_update(double q, double h_flow, double slope, double n_sq, double dt)
{
    const double h73 = h_flow * h_flow * cube_root(h_flow);
    return (q - kGravity * h_flow * dt * slope) / (1.0 + kGravity * dt * n_sq * std::abs(q) / h73);
}

} // namespace

double FloodSimulation::advance(double rain_mm_per_hr, double dt_cap)
{
    const auto& p = model_->params();
    const auto& z = model_->catchment().elevation;
    const auto& wet = model_->wet_;
    const double dt = std::min(cfl_dt(), dt_cap);
    if (!(dt > 0.0)) {
        throw NumericalFailure("non-positive time step at step " + std::to_string(steps_));
    }
    const std::size_t nc = static_cast<std::size_t>(ncols_);
    const std::size_t nr = static_cast<std::size_t>(nrows_);
    const double hmin = p.min_flow_depth;
    const bool open = p.boundary == Boundary::open;

    for (std::size_t i = 0; i < depth_.size(); ++i) {
        eta_[i] = z[i] + depth_[i];
    }

    // Interior faces.
    for (std::size_t r = 0; r < nr; ++r) {
        for (std::size_t c = 0; c + 1 < nc; ++c) {
            const std::size_t a = r * nc + c;
            const std::size_t b = a + 1;
            double& q = qx_[r * (nc - 1) + c];
            if (!wet[a] || !wet[b]) {
                q = 0.0;
                continue;
            }
            const double h_flow = std::max(eta_[a], eta_[b]) - std::max(z[a], z[b]);
            if (h_flow < hmin) {
                q = 0.0;
                continue;
            }
            q = inertial_update(q, h_flow, (eta_[b] - eta_[a]) / dx_, 0.5 * (n_sq_[a] + n_sq_[b]), dt);
        }
    }
    for (std::size_t r = 0; r + 1 < nr; ++r) {
        for (std::size_t c = 0; c < nc; ++c) {
            const std::size_t a = r * nc + c;
            const std::size_t b = a + nc;
            double& q = qy_[a];
            if (!wet[a] || !wet[b]) {
                q = 0.0;
                continue;
            }
            const double h_flow = std::max(eta_[a], eta_[b]) - std::max(z[a], z[b]);
            if (h_flow < hmin) {
                q = 0.0;
                continue;
            }
            q = inertial_update(q, h_flow, (eta_[b] - eta_[a]) / dx_, 0.5 * (n_sq_[a] + n_sq_[b]), dt);
        }
    }

    // Open edges: free outflow driven by the bed slope towards the edge, never
    // less than open_edge_slope.
    if (open) {
        auto edge = [&](double& q, std::size_t cell, std::size_t inner, bool has_inner) {
            if (!wet[cell] || depth_[cell] < hmin) {
                q = 0.0;
                return;
            }
            double slope = p.open_edge_slope;
            if (has_inner) {
                slope = std::max(slope, (z[inner] - z[cell]) / dx_);
            }
            q = std::max(0.0, inertial_update(q, depth_[cell], -slope, n_sq_[cell], dt));
        };
        for (std::size_t r = 0; r < nr; ++r) {
            edge(q_west_[r], r * nc, r * nc + 1, nc > 1);
            edge(q_east_[r], r * nc + nc - 1, r * nc + nc - 2, nc > 1);
        }
        for (std::size_t c = 0; c < nc; ++c) {
            edge(q_north_[c], c, c + nc, nr > 1);
            edge(q_south_[c], (nr - 1) * nc + c, (nr - 2) * nc + c, nr > 1);
        }
    }

    // Limit each cell's outgoing volume to the water it holds.
    std::fill(outgoing_.begin(), outgoing_.end(), 0.0);
    for (std::size_t r = 0; r < nr; ++r) {
        for (std::size_t c = 0; c + 1 < nc; ++c) {
            const double q = qx_[r * (nc - 1) + c];
            outgoing_[r * nc + c + (q < 0.0 ? 1 : 0)] += std::abs(q);
        }
    }
    for (std::size_t r = 0; r + 1 < nr; ++r) {
        for (std::size_t c = 0; c < nc; ++c) {
            const double q = qy_[r * nc + c];
            outgoing_[r * nc + c + (q < 0.0 ? nc : 0)] += std::abs(q);
        }
    }
    if (open) {
        for (std::size_t r = 0; r < nr; ++r) {
            outgoing_[r * nc] += q_west_[r];
            outgoing_[r * nc + nc - 1] += q_east_[r];
        }
        for (std::size_t c = 0; c < nc; ++c) {
            outgoing_[c] += q_north_[c];
            outgoing_[(nr - 1) * nc + c] += q_south_[c];
        }
    }
    // outgoing_ becomes the per-cell scale factor in [0, 1].
    for (std::size_t i = 0; i < depth_.size(); ++i) {
        const double out_volume = outgoing_[i] * dt;
        const double available = depth_[i] * dx_;
        outgoing_[i] = out_volume > available ? available / out_volume : 1.0;
    }
    for (std::size_t r = 0; r < nr; ++r) {
        for (std::size_t c = 0; c + 1 < nc; ++c) {
            double& q = qx_[r * (nc - 1) + c];
            q *= outgoing_[r * nc + c + (q < 0.0 ? 1 : 0)];
        }
    }
    for (std::size_t r = 0; r + 1 < nr; ++r) {
        for (std::size_t c = 0; c < nc; ++c) {
            double& q = qy_[r * nc + c];
            q *= outgoing_[r * nc + c + (q < 0.0 ? nc : 0)];
        }
    }

    // Continuity.
    const double k = dt / dx_;
    for (std::size_t r = 0; r < nr; ++r) {
        for (std::size_t c = 0; c + 1 < nc; ++c) {
            const double dh = k * qx_[r * (nc - 1) + c];
            depth_[r * nc + c] -= dh;
            depth_[r * nc + c + 1] += dh;
        }
    }
    for (std::size_t r = 0; r + 1 < nr; ++r) {
        for (std::size_t c = 0; c < nc; ++c) {
            const double dh = k * qy_[r * nc + c];
            depth_[r * nc + c] -= dh;
            depth_[r * nc + c + nc] += dh;
        }
    }
    if (open) {
        double out = 0.0;
        auto drain = [&](double& q, std::size_t cell) {
            q *= outgoing_[cell];
            depth_[cell] -= k * q;
            out += q;
        };
        for (std::size_t r = 0; r < nr; ++r) {
            drain(q_west_[r], r * nc);
            drain(q_east_[r], r * nc + nc - 1);
        }
        for (std::size_t c = 0; c < nc; ++c) {
            drain(q_north_[c], c);
            drain(q_south_[c], (nr - 1) * nc + c);
        }
        mass_.outflow += out * dt * dx_;
    }

    // Rain (roofs included via roof_share) then clamped infiltration.
    const double rain = rain_mm_per_hr * kMmPerHrToMPerS * dt;
    const double cell_area = dx_ * dx_;
    const auto& share = model_->roof_share_;
    double infiltrated = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < depth_.size(); ++i) {
        if (!wet[i]) {
            continue;
        }
        double h = std::max(depth_[i], 0.0) + rain * (1.0 + share[i]);
        const double loss = std::min(h, infil_rate_[i] * dt);
        h -= loss;
        infiltrated += loss;
        depth_[i] = h;
        max_depth_[i] = std::max(max_depth_[i], h);
        finite = finite && std::isfinite(h);
    }
    if (!finite) {
        throw NumericalFailure("non-finite water depth at step " + std::to_string(steps_) + " (t = " +
                               std::to_string(time_) + " s)");
    }
    mass_.rain_in += rain * cell_area * static_cast<double>(depth_.size());
    mass_.infiltrated += infiltrated * cell_area;

    time_ += dt;
    ++steps_;
    return dt;
}

MassReport FloodSimulation::mass() const
{
    MassReport m = mass_;
    double volume = 0.0;
    for (const double h : depth_) {
        volume += h;
    }
    // Net storage change, so runs seeded with water still balance.
    m.stored = volume * dx_ * dx_ - initial_volume_;
    return m;
}

DepthField FloodSimulation::result() const
{
    DepthField field;
    field.grid = model_->catchment().grid;
    field.max_depth = max_depth_;
    field.final_depth = depth_;
    field.mass = mass();
    field.steps = steps_;
    field.simulated_time = time_;
    return field;
}

DepthField simulate(const Catchment& catchment, const DesignStorm& storm, const Genome& active_zones,
                    const FloodParams& params)
{
    return FloodModel(catchment, params).simulate(storm, active_zones);
}

} // namespace bgi
