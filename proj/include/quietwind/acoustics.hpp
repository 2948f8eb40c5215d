#pragma once

#include <cmath>
#include <vector>

#include "quietwind/bem.hpp"
#include "quietwind/common.hpp"
#include "quietwind/spectrum.hpp"
#include "quietwind/turbine.hpp"

namespace quietwind {

// Noise source mechanisms. Inflow and trailing-edge apply to every segment,
// the tip vortex only to the outermost one.
enum class NoiseMechanism : unsigned {
    TurbulentInflow = 1u << 0,
    TblTrailingEdge = 1u << 1,
    TipVortex = 1u << 2,
};

struct MechanismSet {
    unsigned bits = 0;

    static MechanismSet all() {
        return MechanismSet{static_cast<unsigned>(NoiseMechanism::TurbulentInflow) |
                            static_cast<unsigned>(NoiseMechanism::TblTrailingEdge) |
                            static_cast<unsigned>(NoiseMechanism::TipVortex)};
    }
    static MechanismSet none() { return MechanismSet{0}; }
    static MechanismSet of(NoiseMechanism m) { return MechanismSet{static_cast<unsigned>(m)}; }

    bool contains(NoiseMechanism m) const { return (bits & static_cast<unsigned>(m)) != 0; }
    MechanismSet with(NoiseMechanism m) const { return MechanismSet{bits | static_cast<unsigned>(m)}; }
    bool empty() const { return bits == 0; }
};

/// Observer position in the turbine frame: x downwind, z up, hub at origin.
struct ObserverLocation {
    double x_m = 100.0;
    double y_m = 0.0;
    double z_m = -80.0; // ground level for an 80 m hub

    double distance_m() const { return std::sqrt(x_m * x_m + y_m * y_m + z_m * z_m); }
};

struct NoiseConfig {
    MechanismSet mechanisms = MechanismSet::all();
    double turbulence_intensity = 0.12;
    double turbulence_length_m = 30.0;
    double speed_of_sound_ms = kDefaultSpeedOfSound;
    double kinematic_viscosity = 1.46e-5;
    // mechanism level constants (empirical scaling-law anchors)
    double te_gain_db = 128.5;
    double inflow_gain_db = 97.0;
    double tip_gain_db = 124.0;
    // one-time global calibration offset, applied to the turbine total
    double gain_offset_db = 0.0;
};

namespace detail {

// symmetric Strouhal-peaked hump, 0 dB at xi = 1
inline double strouhal_hump_db(double xi, double exponent) {
    const double p = std::pow(xi, exponent);
    return 10.0 * std::log10(4.0 * p / ((1.0 + p) * (1.0 + p)));
}

inline double tblte_dstar_m(const AirfoilPolar& polar,
                            double chord_m,
                            double alpha_deg,
                            double v_rel,
                            double nu) {
    if (polar.has_boundary_layer_table())
        return polar.dstar_over_chord(alpha_deg) * chord_m;
    const double re = std::max(v_rel * chord_m / nu, 1e4);
    return 0.048 * std::pow(re, -0.2) * chord_m;
}

} // namespace detail

/// Per-mechanism one-third-octave levels of a single blade segment observed
/// at distance r, combined as uncorrelated sources. Unweighted output.
inline SplSpectrum segment_noise(const SegmentFlowState& flow,
                                 const BladeSegment& segment,
                                 const AirfoilPolar& polar,
                                 const ObserverLocation& observer,
                                 MechanismSet mechanisms,
                                 const NoiseConfig& cfg,
                                 bool is_tip_segment = false) {
    SplSpectrum out = SplSpectrum::silence();
    if (mechanisms.empty()) return out;
    if (segment.span_width_m <= 0.0) return out;
    if (flow.status != SegmentSolveStatus::Converged) return out;

    const double v = flow.relative_velocity_ms;
    const double mach = v / cfg.speed_of_sound_ms;
    const double r2 = observer.distance_m() * observer.distance_m();
    const double span = segment.span_width_m;
    const double alpha = flow.angle_of_attack_deg;

    std::vector<SplSpectrum> parts;

    if (mechanisms.contains(NoiseMechanism::TblTrailingEdge)) {
        const double dstar = detail::tblte_dstar_m(polar, segment.chord_m, alpha, v,
                                                   cfg.kinematic_viscosity);
        const double st_peak = 0.02 * std::pow(mach, -0.6);
        const double base =
            10.0 * std::log10(dstar * std::pow(mach, 5.0) * span / r2) + cfg.te_gain_db;
        SplSpectrum s = SplSpectrum::silence();
        for (std::size_t b = 0; b < kNumBands; ++b) {
            const double st = kThirdOctaveCenters[b] * dstar / v;
            s.levels_db[b] = base + detail::strouhal_hump_db(st / st_peak, 2.5);
        }
        parts.push_back(std::move(s));
    }

    if (mechanisms.contains(NoiseMechanism::TurbulentInflow)) {
        const double ti = cfg.turbulence_intensity;
        const double lam = cfg.turbulence_length_m;
        const double base =
            10.0 * std::log10(lam * span * std::pow(mach, 3.0) * ti * ti * v * v / r2) +
            cfg.inflow_gain_db;
        SplSpectrum s = SplSpectrum::silence();
        for (std::size_t b = 0; b < kNumBands; ++b) {
            const double k = kPi * kThirdOctaveCenters[b] * lam / v;
            const double shape = 10.0 * std::log10(std::pow(k, 3.0) /
                                                   std::pow(1.0 + k * k, 7.0 / 3.0));
            s.levels_db[b] = base + shape;
        }
        parts.push_back(std::move(s));
    }

    if (mechanisms.contains(NoiseMechanism::TipVortex) && is_tip_segment) {
        const double a_tip = std::max(alpha, 0.5);
        const double l_tip = 0.008 * segment.chord_m * a_tip;
        const double m_max = mach * (1.0 + 0.036 * a_tip);
        const double v_max = v * (1.0 + 0.036 * a_tip);
        const double base = 10.0 * std::log10(mach * mach * std::pow(m_max, 3.0) * l_tip *
                                              l_tip / r2) +
                            cfg.tip_gain_db;
        SplSpectrum s = SplSpectrum::silence();
        for (std::size_t b = 0; b < kNumBands; ++b) {
            const double st = kThirdOctaveCenters[b] * l_tip / v_max;
            const double lg = std::log10(st) + 0.3;
            s.levels_db[b] = base - 30.5 * lg * lg;
        }
        parts.push_back(std::move(s));
    }

    if (parts.empty()) return out;
    return combine_uncorrelated(parts);
}

struct TurbineNoise {
    double oaspl_dba = kSilenceDb;
    SplSpectrum spectrum_dba;
    SplSpectrum spectrum_flat;
};

/// Full-rotor noise at the observer: all segments of all blades summed as
/// uncorrelated sources (spherical spreading only), then A-weighted.
inline TurbineNoise turbine_spl(const TurbineGeometry& geom,
                                const std::vector<SegmentFlowState>& flows,
                                const ObserverLocation& observer,
                                const NoiseConfig& cfg) {
    if (flows.size() != geom.segments().size())
        throw ShapeMismatchError("turbine_spl: flow list does not match segment table");

    std::vector<SplSpectrum> per_segment;
    per_segment.reserve(flows.size());
    const std::size_t tip_index = geom.segments().size() - 1;
    for (std::size_t i = 0; i < flows.size(); ++i) {
        const auto& seg = geom.segments()[i];
        per_segment.push_back(segment_noise(flows[i], seg, geom.polar_of(seg), observer,
                                            cfg.mechanisms, cfg, i == tip_index));
    }
    SplSpectrum total = combine_uncorrelated(per_segment);

    const double blade_gain = 10.0 * std::log10(static_cast<double>(geom.n_blades()));
    for (double& l : total.levels_db)
        if (l > kSilenceDb) l += blade_gain + cfg.gain_offset_db;

    TurbineNoise result;
    result.spectrum_flat = total;
    result.spectrum_dba = a_weight(total);
    result.oaspl_dba = overall_spl(result.spectrum_dba);
    return result;
}

} // namespace quietwind
