#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "quietwind/common.hpp"

namespace quietwind {

/// Lift/drag sample returned by polar interpolation.
struct PolarPoint {
    double cl = 0.0;
    double cd = 0.0;
};

/// Tabulated section polar: cl(alpha), cd(alpha) and, optionally, the
/// boundary-layer displacement thickness ratio dstar/chord used by the
/// trailing-edge noise source. Angles in degrees, strictly increasing.
class AirfoilPolar {
public:
    AirfoilPolar() = default;
    AirfoilPolar(std::string name,
                 std::vector<double> alpha_deg,
                 std::vector<double> cl,
                 std::vector<double> cd,
                 std::vector<double> dstar_over_chord = {})
        : name_(std::move(name)),
          alpha_(std::move(alpha_deg)),
          cl_(std::move(cl)),
          cd_(std::move(cd)),
          dstar_(std::move(dstar_over_chord)) {
        validate();
    }

    const std::string& name() const { return name_; }
    const std::vector<double>& angles() const { return alpha_; }
    double alpha_min() const { return alpha_.front(); }
    double alpha_max() const { return alpha_.back(); }
    bool has_boundary_layer_table() const { return !dstar_.empty(); }

    /// nullopt when alpha falls outside the table.
    std::optional<PolarPoint> try_interpolate(double alpha_deg) const {
        if (alpha_deg < alpha_.front() || alpha_deg > alpha_.back()) return std::nullopt;
        const auto [i, t] = bracket(alpha_deg);
        return PolarPoint{lerp(cl_, i, t), lerp(cd_, i, t)};
    }

    PolarPoint interpolate(double alpha_deg) const {
        auto p = try_interpolate(alpha_deg);
        if (!p)
            throw OutOfRangeError("polar '" + name_ + "': alpha " + std::to_string(alpha_deg) +
                                  " deg outside table [" + std::to_string(alpha_.front()) + ", " +
                                  std::to_string(alpha_.back()) + "]");
        return *p;
    }

    /// dstar/chord at alpha; clamps to the table ends so the noise model stays
    /// total even when the aero solution sits at the polar edge.
    double dstar_over_chord(double alpha_deg) const {
        if (dstar_.empty()) return 0.0;
        const double a = std::clamp(alpha_deg, alpha_.front(), alpha_.back());
        const auto [i, t] = bracket(a);
        return lerp(dstar_, i, t);
    }

    void validate() const {
        if (alpha_.size() < 2) throw DomainError("polar '" + name_ + "': needs at least two rows");
        if (alpha_.size() != cl_.size() || alpha_.size() != cd_.size() ||
            (!dstar_.empty() && dstar_.size() != alpha_.size()))
            throw DomainError("polar '" + name_ + "': column lengths differ");
        for (std::size_t i = 1; i < alpha_.size(); ++i)
            if (!(alpha_[i] > alpha_[i - 1]))
                throw DomainError("polar '" + name_ + "': alpha not strictly increasing at row " +
                                  std::to_string(i));
        if (alpha_.front() > -20.0 || alpha_.back() < 25.0)
            throw DomainError("polar '" + name_ + "': table must cover [-20, 25] deg");
        for (double d : cd_)
            if (d < 0.0) throw DomainError("polar '" + name_ + "': negative cd");
    }

private:
    std::pair<std::size_t, double> bracket(double a) const {
        auto it = std::upper_bound(alpha_.begin(), alpha_.end(), a);
        std::size_t hi = static_cast<std::size_t>(it - alpha_.begin());
        if (hi == 0) hi = 1;
        if (hi == alpha_.size()) hi = alpha_.size() - 1;
        const std::size_t lo = hi - 1;
        const double t = (a - alpha_[lo]) / (alpha_[hi] - alpha_[lo]);
        return {lo, t};
    }
    double lerp(const std::vector<double>& col, std::size_t lo, double t) const {
        return col[lo] + t * (col[lo + 1] - col[lo]);
    }

    std::string name_;
    std::vector<double> alpha_;
    std::vector<double> cl_;
    std::vector<double> cd_;
    std::vector<double> dstar_;
};

/// (cl, cd) at alpha; exact at table nodes, linear between them.
inline PolarPoint interpolate_polar(const AirfoilPolar& polar, double alpha_deg) {
    return polar.interpolate(alpha_deg);
}

} // namespace quietwind
