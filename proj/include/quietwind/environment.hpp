#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "quietwind/acoustics.hpp"
#include "quietwind/bem.hpp"
#include "quietwind/common.hpp"
#include "quietwind/turbine.hpp"
#include "quietwind/wind.hpp"

namespace quietwind {

/// Controller state: incoming wind plus the two control variables.
struct EnvState {
    double wind_speed_ms = 10.0;
    double rotor_rpm = 12.0;
    double pitch_deg = 0.0;

    double tip_speed_ratio(double blade_radius_m) const {
        return rpm_to_rad_s(rotor_rpm) * blade_radius_m / wind_speed_ms;
    }
};

/// Admissible box for (wind, rpm, pitch) plus the tip-speed-ratio band that
/// keeps the rotor solver well behaved.
struct StateBounds {
    double wind_min = kWindSpeedMin;
    double wind_max = kWindSpeedMax;
    double rpm_min = 6.0;
    double rpm_max = 18.0;
    double pitch_min = -5.0;
    double pitch_max = 10.0;
    double lambda_min = 3.0;
    double lambda_max = 12.0;

    bool contains(const EnvState& s, double blade_radius_m) const {
        const double lambda = s.tip_speed_ratio(blade_radius_m);
        return s.wind_speed_ms >= wind_min && s.wind_speed_ms <= wind_max &&
               s.rotor_rpm >= rpm_min && s.rotor_rpm <= rpm_max &&
               s.pitch_deg >= pitch_min && s.pitch_deg <= pitch_max &&
               lambda >= lambda_min && lambda <= lambda_max;
    }
};

enum class ActionId : int {
    RpmUp = 0,    // +0.5 rpm
    RpmDown = 1,  // -0.5 rpm
    PitchUp = 2,  // +1 deg
    PitchDown = 3,// -1 deg
    Hold = 4,
};

inline constexpr int kNumActions = 5;
inline constexpr double kRpmIncrement = 0.5;
inline constexpr double kPitchIncrementDeg = 1.0;

inline ActionId action_from_index(int i) { return static_cast<ActionId>(i); }
inline int action_index(ActionId a) { return static_cast<int>(a); }

/// Affine map of each state component onto [-1, 1] over its bound interval.
inline std::vector<double> encode_state(const EnvState& s, const StateBounds& b = {}) {
    auto unit = [](double x, double lo, double hi) { return (2.0 * x - (lo + hi)) / (hi - lo); };
    return {unit(s.wind_speed_ms, b.wind_min, b.wind_max),
            unit(s.rotor_rpm, b.rpm_min, b.rpm_max),
            unit(s.pitch_deg, b.pitch_min, b.pitch_max)};
}

struct RewardConfig {
    double spl_threshold_dba = 45.0;
    double delta_db = 5.0;
    double boundary_penalty = -3.0;
    double cp_nom = 0.0; // maximum power coefficient over the state space
    bool noise_term_enabled = true;
};

/// Scalarized two-objective reward: normalized power minus a ReLU noise
/// penalty that reaches -1 one delta_db above the threshold.
inline double reward(double cp, double oaspl_dba, const RewardConfig& cfg) {
    const double cp_term = std::clamp(cp, 0.0, cfg.cp_nom) / cfg.cp_nom;
    if (!cfg.noise_term_enabled) return cp_term;
    const double excess = (oaspl_dba - cfg.spl_threshold_dba) / cfg.delta_db;
    return cp_term - std::max(excess, 0.0);
}

/// Candidate state after an action, or nullopt when any bound would break.
inline std::optional<EnvState> apply_action(const EnvState& state, ActionId action,
                                            double blade_radius_m,
                                            const StateBounds& bounds = {}) {
    EnvState next = state;
    switch (action) {
    case ActionId::RpmUp: next.rotor_rpm += kRpmIncrement; break;
    case ActionId::RpmDown: next.rotor_rpm -= kRpmIncrement; break;
    case ActionId::PitchUp: next.pitch_deg += kPitchIncrementDeg; break;
    case ActionId::PitchDown: next.pitch_deg -= kPitchIncrementDeg; break;
    case ActionId::Hold: break;
    }
    if (!bounds.contains(next, blade_radius_m)) return std::nullopt;
    return next;
}

struct StepDiagnostics {
    long bem_non_converged = 0;
    long noise_evaluations = 0;
    long boundary_violations = 0;
};

struct StepOutcome {
    EnvState next_state;
    double reward = 0.0;
    double cp = 0.0;
    double power_w = 0.0;
    double oaspl_dba = kSilenceDb;
    bool boundary_violation = false;
    bool truncated = false; // wind series exhausted
};

/// One-shot rotor + noise evaluation of a state.
struct StateEvaluation {
    double cp = 0.0;
    double power_w = 0.0;
    double oaspl_dba = kSilenceDb;
    SplSpectrum spectrum_dba;
    int non_converged = 0;
};

struct EnvConfig {
    StateBounds bounds;
    RewardConfig reward;
    NoiseConfig noise;
    ObserverLocation observer;
    BemSettings bem;
    double air_density = kDefaultAirDensity;
};

/// The control environment: advances the wind, applies (or revokes) the
/// discrete action, and scores the resulting state. Single-threaded per
/// instance; spawn one per concurrent rollout.
class Environment {
public:
    Environment(std::shared_ptr<const TurbineGeometry> geom, EnvConfig cfg, WindProcess wind)
        : geom_(std::move(geom)), cfg_(std::move(cfg)), wind_(std::move(wind)) {}

    const TurbineGeometry& geometry() const { return *geom_; }
    const EnvConfig& config() const { return cfg_; }
    EnvConfig& config() { return cfg_; }
    WindProcess& wind() { return wind_; }
    const StepDiagnostics& diagnostics() const { return diag_; }

    StateEvaluation evaluate(const EnvState& s, bool with_noise) {
        StateEvaluation ev;
        const RotorPerformance perf = rotor_performance(*geom_, s.wind_speed_ms, s.rotor_rpm,
                                                        s.pitch_deg, cfg_.air_density, cfg_.bem);
        ev.cp = perf.cp;
        ev.power_w = perf.power_w;
        ev.non_converged = perf.non_converged_segments;
        diag_.bem_non_converged += perf.non_converged_segments;
        if (with_noise) {
            const TurbineNoise noise = turbine_spl(*geom_, perf.segments, cfg_.observer, cfg_.noise);
            ev.oaspl_dba = noise.oaspl_dba;
            ev.spectrum_dba = noise.spectrum_dba;
            ++diag_.noise_evaluations;
        }
        return ev;
    }

    /// Wind advances first and independently of the action; a candidate that
    /// leaves the admissible set is revoked and penalized.
    StepOutcome step(const EnvState& state, ActionId action) {
        StepOutcome out;
        const double u_next = wind_.advance();
        out.truncated = wind_.exhausted();

        EnvState candidate = state;
        candidate.wind_speed_ms = u_next;
        const auto applied = apply_action(candidate, action, geom_->blade_radius_m(), cfg_.bounds);
        if (!applied) {
            out.boundary_violation = true;
            ++diag_.boundary_violations;
            out.next_state = candidate; // controls unchanged, wind advanced
            out.reward = cfg_.reward.boundary_penalty;
            const StateEvaluation ev = evaluate(out.next_state, cfg_.reward.noise_term_enabled);
            out.cp = ev.cp;
            out.power_w = ev.power_w;
            out.oaspl_dba = ev.oaspl_dba;
            return out;
        }
        out.next_state = *applied;
        const StateEvaluation ev = evaluate(out.next_state, cfg_.reward.noise_term_enabled);
        out.cp = ev.cp;
        out.power_w = ev.power_w;
        out.oaspl_dba = ev.oaspl_dba;
        out.reward = reward(ev.cp, ev.oaspl_dba, cfg_.reward);
        return out;
    }

    /// Uniform over the box, rejection-sampled until the tip-speed-ratio
    /// band holds. Feasible for every wind speed in range.
    EnvState sample_initial_state(std::mt19937_64& rng) const {
        std::uniform_real_distribution<double> u_wind(cfg_.bounds.wind_min, cfg_.bounds.wind_max);
        std::uniform_real_distribution<double> u_rpm(cfg_.bounds.rpm_min, cfg_.bounds.rpm_max);
        std::uniform_real_distribution<double> u_pitch(cfg_.bounds.pitch_min, cfg_.bounds.pitch_max);
        for (;;) {
            EnvState s;
            s.wind_speed_ms = u_wind(rng);
            s.rotor_rpm = u_rpm(rng);
            s.pitch_deg = u_pitch(rng);
            if (cfg_.bounds.contains(s, geom_->blade_radius_m())) return s;
        }
    }

    /// Begin a training episode: fresh random state, steady wind at its speed.
    EnvState begin_episode(std::mt19937_64& rng) {
        EnvState s = sample_initial_state(rng);
        if (wind_.kind() == WindProcess::Kind::Steady) wind_.set_steady(s.wind_speed_ms);
        return s;
    }

private:
    std::shared_ptr<const TurbineGeometry> geom_;
    EnvConfig cfg_;
    WindProcess wind_;
    StepDiagnostics diag_;
};

/// Maximum power coefficient over the admissible set: coarse 25x25x13 box
/// scan followed by local refinement in (lambda, pitch), where cp actually
/// lives. Cached per run by the callers.
inline double scan_cp_nom(const TurbineGeometry& geom, const StateBounds& bounds = {},
                          double air_density = kDefaultAirDensity, const BemSettings& bem = {},
                          int n_wind = 25, int n_rpm = 25, int n_pitch = 13) {
    auto cp_at = [&](double lambda, double pitch) {
        // cp depends on (lambda, pitch) only; evaluate at a reference wind speed
        const double u_ref = 10.0;
        const double omega_rpm = rad_s_to_rpm(lambda * u_ref / geom.blade_radius_m());
        return rotor_performance(geom, u_ref, omega_rpm, pitch, air_density, bem).cp;
    };

    double best_cp = -1.0;
    double best_lambda = bounds.lambda_min;
    double best_pitch = 0.0;
    for (int i = 0; i < n_wind; ++i) {
        const double u = bounds.wind_min +
                         (bounds.wind_max - bounds.wind_min) * i / double(n_wind - 1);
        for (int j = 0; j < n_rpm; ++j) {
            const double rpm = bounds.rpm_min +
                               (bounds.rpm_max - bounds.rpm_min) * j / double(n_rpm - 1);
            const double lambda = rpm_to_rad_s(rpm) * geom.blade_radius_m() / u;
            if (lambda < bounds.lambda_min || lambda > bounds.lambda_max) continue;
            for (int k = 0; k < n_pitch; ++k) {
                const double pitch = bounds.pitch_min +
                                     (bounds.pitch_max - bounds.pitch_min) * k / double(n_pitch - 1);
                const double cp = cp_at(lambda, pitch);
                if (cp > best_cp) {
                    best_cp = cp;
                    best_lambda = lambda;
                    best_pitch = pitch;
                }
            }
        }
    }

    // local zoom so no reachable state can exceed the cached optimum
    double dl = 0.6, dp = 0.8;
    for (int round = 0; round < 4; ++round) {
        double round_best = best_cp, rl = best_lambda, rp = best_pitch;
        for (int i = -4; i <= 4; ++i) {
            for (int j = -4; j <= 4; ++j) {
                const double lambda = std::clamp(best_lambda + dl * i / 4.0, bounds.lambda_min,
                                                 bounds.lambda_max);
                const double pitch = std::clamp(best_pitch + dp * j / 4.0, bounds.pitch_min,
                                                bounds.pitch_max);
                const double cp = cp_at(lambda, pitch);
                if (cp > round_best) {
                    round_best = cp;
                    rl = lambda;
                    rp = pitch;
                }
            }
        }
        best_cp = round_best;
        best_lambda = rl;
        best_pitch = rp;
        dl *= 0.25;
        dp *= 0.25;
    }
    return best_cp;
}

} // namespace quietwind
