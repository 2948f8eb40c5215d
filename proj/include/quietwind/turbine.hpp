#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "quietwind/airfoil.hpp"
#include "quietwind/common.hpp"

namespace quietwind {

struct BladeSegment {
    double radial_station_m = 0.0; // segment midpoint from the rotor axis
    double span_width_m = 0.0;
    double chord_m = 0.0;
    double twist_deg = 0.0;
    std::string airfoil_id;
    std::size_t polar_index = 0; // resolved against TurbineGeometry::polars
};

/// Rotor description: blade planform plus the polar set it references.
/// Immutable after construction; shared read-only by solvers and workers.
class TurbineGeometry {
public:
    TurbineGeometry() = default;
    TurbineGeometry(double blade_radius_m,
                    double hub_radius_m,
                    int n_blades,
                    double rated_power_w,
                    std::vector<BladeSegment> segments,
                    std::vector<AirfoilPolar> polars)
        : blade_radius_m_(blade_radius_m),
          hub_radius_m_(hub_radius_m),
          n_blades_(n_blades),
          rated_power_w_(rated_power_w),
          segments_(std::move(segments)),
          polars_(std::move(polars)) {
        resolve_polar_indices();
        validate();
    }

    double blade_radius_m() const { return blade_radius_m_; }
    double hub_radius_m() const { return hub_radius_m_; }
    int n_blades() const { return n_blades_; }
    double rated_power_w() const { return rated_power_w_; }
    double rotor_area_m2() const { return kPi * blade_radius_m_ * blade_radius_m_; }
    const std::vector<BladeSegment>& segments() const { return segments_; }
    const std::vector<AirfoilPolar>& polars() const { return polars_; }
    const AirfoilPolar& polar_of(const BladeSegment& seg) const { return polars_[seg.polar_index]; }

    void validate() const {
        if (blade_radius_m_ <= 0.0 || hub_radius_m_ < 0.0 || hub_radius_m_ >= blade_radius_m_)
            throw DomainError("turbine geometry: bad radii");
        if (n_blades_ < 1) throw DomainError("turbine geometry: n_blades < 1");
        if (segments_.empty()) throw DomainError("turbine geometry: no segments");
        double prev = hub_radius_m_;
        double width_sum = 0.0;
        for (const auto& s : segments_) {
            if (!(s.radial_station_m > prev))
                throw DomainError("turbine geometry: stations must increase outward from the hub");
            if (s.radial_station_m >= blade_radius_m_)
                throw DomainError("turbine geometry: station beyond blade tip");
            if (s.span_width_m <= 0.0 || s.chord_m <= 0.0)
                throw DomainError("turbine geometry: non-positive span or chord");
            if (s.polar_index >= polars_.size())
                throw DomainError("turbine geometry: unresolved airfoil id '" + s.airfoil_id + "'");
            prev = s.radial_station_m;
            width_sum += s.span_width_m;
        }
        const double expected = blade_radius_m_ - hub_radius_m_;
        if (std::abs(width_sum - expected) > 1e-9 * expected)
            throw DomainError("turbine geometry: span widths do not tile the blade");
    }

private:
    void resolve_polar_indices() {
        std::map<std::string, std::size_t> by_name;
        for (std::size_t i = 0; i < polars_.size(); ++i) by_name[polars_[i].name()] = i;
        for (auto& s : segments_) {
            auto it = by_name.find(s.airfoil_id);
            if (it == by_name.end())
                throw DomainError("turbine geometry: airfoil id '" + s.airfoil_id + "' has no polar");
            s.polar_index = it->second;
        }
    }

    double blade_radius_m_ = 0.0;
    double hub_radius_m_ = 0.0;
    int n_blades_ = 0;
    double rated_power_w_ = 0.0;
    std::vector<BladeSegment> segments_;
    std::vector<AirfoilPolar> polars_;
};

} // namespace quietwind
