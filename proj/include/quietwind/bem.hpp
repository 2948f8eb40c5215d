#pragma once

#include <cmath>
#include <vector>

#include "quietwind/common.hpp"
#include "quietwind/turbine.hpp"

namespace quietwind {

enum class SegmentSolveStatus { Converged, NoConvergence, PolarOutOfRange };

/// Converged local flow at one blade segment.
struct SegmentFlowState {
    double axial_induction = 0.0;      // a
    double tangential_induction = 0.0; // a'
    double relative_velocity_ms = 0.0;
    double angle_of_attack_deg = 0.0;
    double local_solidity = 0.0;
    double inflow_angle_rad = 0.0;
    double cl = 0.0;
    double cd = 0.0;
    double tip_loss = 1.0;
    SegmentSolveStatus status = SegmentSolveStatus::Converged;
    double residual = 0.0;
    int iterations = 0;
};

struct BemSettings {
    double tolerance = 1e-8;
    int max_iterations = 500;
    double relaxation = 0.25;
    bool prandtl_tip_loss = true;
    bool glauert_correction = true;

    static BemSettings tight() {
        BemSettings s;
        s.tolerance = 1e-9;
        s.max_iterations = 5000;
        return s;
    }
};

namespace detail {

inline double prandtl_tip_loss(int n_blades, double r, double blade_radius, double sin_phi) {
    const double s = std::max(sin_phi, 1e-9);
    const double f = 0.5 * n_blades * (blade_radius - r) / (r * s);
    const double e = std::exp(-f);
    return std::max(2.0 / kPi * std::acos(std::min(e, 1.0)), 1e-4);
}

// Empirical thrust branch for heavily loaded rotors (a > 0.4), solved for a.
inline double glauert_high_induction(double ct_blade, double tip_loss) {
    const double F = tip_loss;
    const double arg = ct_blade * (50.0 - 36.0 * F) + 12.0 * F * (3.0 * F - 4.0);
    if (arg < 0.0) return 0.4;
    return (18.0 * F - 20.0 - 3.0 * std::sqrt(arg)) / (36.0 * F - 50.0);
}

} // namespace detail

/// Fixed-point momentum/blade-element balance for one segment.
/// Non-convergence is reported in the returned status, never thrown.
inline SegmentFlowState solve_segment(const TurbineGeometry& geom,
                                      const BladeSegment& seg,
                                      double wind_speed_ms,
                                      double omega_rad_s,
                                      double pitch_deg,
                                      const BemSettings& settings = {}) {
    SegmentFlowState out;
    const AirfoilPolar& polar = geom.polar_of(seg);
    const double r = seg.radial_station_m;
    const double R = geom.blade_radius_m();
    const int B = geom.n_blades();
    const double sigma = B * seg.chord_m / (2.0 * kPi * r);
    out.local_solidity = sigma;

    double a = 0.0;
    double ap = 0.0;
    double residual = 1.0;
    int iter = 0;
    for (; iter < settings.max_iterations; ++iter) {
        const double axial = wind_speed_ms * (1.0 - a);
        const double tangential = omega_rad_s * r * (1.0 + ap);
        const double phi = std::atan2(axial, tangential);
        const double sin_phi = std::sin(phi);
        const double cos_phi = std::cos(phi);
        const double alpha = rad_to_deg(phi) - seg.twist_deg - pitch_deg;

        const auto pp = polar.try_interpolate(alpha);
        if (!pp) {
            out.status = SegmentSolveStatus::PolarOutOfRange;
            out.angle_of_attack_deg = alpha;
            out.residual = residual;
            out.iterations = iter;
            return out;
        }
        const double cn = pp->cl * cos_phi + pp->cd * sin_phi;
        const double ct = pp->cl * sin_phi - pp->cd * cos_phi;
        const double F =
            settings.prandtl_tip_loss ? detail::prandtl_tip_loss(B, r, R, sin_phi) : 1.0;

        double a_new;
        const double k_ax = sigma * cn / (4.0 * F * sin_phi * sin_phi);
        a_new = k_ax / (1.0 + k_ax);
        if (settings.glauert_correction && a_new > 0.4) {
            const double ct_blade = sigma * (1.0 - a) * (1.0 - a) * cn / (sin_phi * sin_phi);
            a_new = detail::glauert_high_induction(ct_blade, F);
        }
        a_new = std::clamp(a_new, 0.0, 0.99);

        const double k_tan = sigma * ct / (4.0 * F * sin_phi * cos_phi);
        double ap_new = (k_tan < 0.99) ? k_tan / (1.0 - k_tan) : 5.0;
        ap_new = std::clamp(ap_new, -0.9, 5.0);

        residual = std::max(std::abs(a_new - a), std::abs(ap_new - ap));
        a += settings.relaxation * (a_new - a);
        ap += settings.relaxation * (ap_new - ap);

        if (residual < settings.tolerance) {
            out.axial_induction = a;
            out.tangential_induction = ap;
            out.inflow_angle_rad = phi;
            out.angle_of_attack_deg = alpha;
            out.relative_velocity_ms = std::hypot(wind_speed_ms * (1.0 - a),
                                                  omega_rad_s * r * (1.0 + ap));
            out.cl = pp->cl;
            out.cd = pp->cd;
            out.tip_loss = F;
            out.status = SegmentSolveStatus::Converged;
            out.residual = residual;
            out.iterations = iter + 1;
            return out;
        }
    }
    out.axial_induction = a;
    out.tangential_induction = ap;
    out.status = SegmentSolveStatus::NoConvergence;
    out.residual = residual;
    out.iterations = iter;
    return out;
}

/// Integrated rotor performance at one operating point.
struct RotorPerformance {
    double cp = 0.0;
    double power_w = 0.0;
    double thrust_n = 0.0;
    double torque_nm = 0.0;
    int non_converged_segments = 0;
    std::vector<SegmentFlowState> segments;
};

/// Steady rotor solve. Segments that fail to converge contribute zero force
/// and are counted in the diagnostics; the call itself never throws for
/// positive inputs.
inline RotorPerformance rotor_performance(const TurbineGeometry& geom,
                                          double wind_speed_ms,
                                          double omega_rpm,
                                          double pitch_deg,
                                          double air_density = kDefaultAirDensity,
                                          const BemSettings& settings = {}) {
    if (!(wind_speed_ms > 0.0) || !(omega_rpm > 0.0))
        throw DomainError("rotor_performance: wind speed and rotor speed must be positive");

    const double omega = rpm_to_rad_s(omega_rpm);
    RotorPerformance perf;
    perf.segments.reserve(geom.segments().size());

    double thrust = 0.0;
    double torque = 0.0;
    for (const auto& seg : geom.segments()) {
        SegmentFlowState flow =
            solve_segment(geom, seg, wind_speed_ms, omega, pitch_deg, settings);
        if (flow.status == SegmentSolveStatus::Converged) {
            const double q = 0.5 * air_density * flow.relative_velocity_ms *
                             flow.relative_velocity_ms * seg.chord_m * seg.span_width_m;
            const double sin_phi = std::sin(flow.inflow_angle_rad);
            const double cos_phi = std::cos(flow.inflow_angle_rad);
            const double cn = flow.cl * cos_phi + flow.cd * sin_phi;
            const double ct = flow.cl * sin_phi - flow.cd * cos_phi;
            thrust += geom.n_blades() * q * cn;
            torque += geom.n_blades() * q * ct * seg.radial_station_m;
        } else {
            ++perf.non_converged_segments;
        }
        perf.segments.push_back(flow);
    }

    perf.thrust_n = thrust;
    perf.torque_nm = torque;
    perf.power_w = torque * omega;
    const double wind_power =
        0.5 * air_density * geom.rotor_area_m2() * std::pow(wind_speed_ms, 3);
    perf.cp = perf.power_w / wind_power;
    return perf;
}

} // namespace quietwind
