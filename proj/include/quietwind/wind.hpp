#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "quietwind/common.hpp"

namespace quietwind {

inline constexpr double kWindSpeedMin = 4.0;
inline constexpr double kWindSpeedMax = 16.0;

/// Wind speed source driving the environment, advanced once per control
/// interval. Produced speeds always lie in [kWindSpeedMin, kWindSpeedMax];
/// clips are counted, not silently absorbed.
class WindProcess {
public:
    enum class Kind { Steady, Replay, Synthetic };

    static WindProcess steady(double speed_ms) {
        WindProcess w;
        w.kind_ = Kind::Steady;
        w.current_ = w.clip(speed_ms);
        return w;
    }

    /// Pre-resampled 60 s mean speeds (already clipped at ingestion).
    static WindProcess replay(std::vector<double> speeds_ms, double dt_s = 60.0) {
        WindProcess w;
        w.kind_ = Kind::Replay;
        w.dt_s_ = dt_s;
        w.series_ = std::move(speeds_ms);
        w.index_ = 0;
        w.current_ = w.series_.empty() ? kWindSpeedMin : w.clip(w.series_.front());
        w.exhausted_ = w.series_.empty();
        return w;
    }

    /// Mean-reverting (Ornstein-Uhlenbeck) speed around `mean_ms` with
    /// stationary standard deviation `intensity * mean_ms`.
    static WindProcess synthetic(double mean_ms, double intensity, std::uint64_t seed,
                                 double dt_s = 60.0, double reversion_time_s = 300.0) {
        WindProcess w;
        w.kind_ = Kind::Synthetic;
        w.dt_s_ = dt_s;
        w.mean_ = mean_ms;
        w.sigma_ = intensity * mean_ms;
        w.decay_ = std::exp(-dt_s / reversion_time_s);
        w.rng_.seed(seed);
        w.current_ = w.clip(mean_ms);
        return w;
    }

    Kind kind() const { return kind_; }
    double dt_s() const { return dt_s_; }
    double current() const { return current_; }
    bool exhausted() const { return exhausted_; }
    int clip_count() const { return clip_count_; }

    /// Used by the trainer to re-randomize the steady wind each episode.
    void set_steady(double speed_ms) {
        kind_ = Kind::Steady;
        current_ = clip(speed_ms);
    }

    /// Advance one control interval and return the new speed. The draw
    /// sequence depends only on the seed, never on the caller's actions.
    double advance() {
        switch (kind_) {
        case Kind::Steady:
            break;
        case Kind::Replay:
            if (index_ + 1 < series_.size()) {
                ++index_;
                current_ = clip(series_[index_]);
            } else {
                exhausted_ = true;
            }
            break;
        case Kind::Synthetic: {
            std::normal_distribution<double> gauss(0.0, 1.0);
            const double noise = sigma_ * std::sqrt(1.0 - decay_ * decay_) * gauss(rng_);
            current_ = clip(mean_ + (current_ - mean_) * decay_ + noise);
            break;
        }
        }
        return current_;
    }

private:
    double clip(double u) {
        if (u < kWindSpeedMin) {
            ++clip_count_;
            return kWindSpeedMin;
        }
        if (u > kWindSpeedMax) {
            ++clip_count_;
            return kWindSpeedMax;
        }
        return u;
    }

    Kind kind_ = Kind::Steady;
    double dt_s_ = 60.0;
    double current_ = kWindSpeedMin;
    bool exhausted_ = false;
    int clip_count_ = 0;
    // replay
    std::vector<double> series_;
    std::size_t index_ = 0;
    // synthetic
    double mean_ = 8.0;
    double sigma_ = 0.0;
    double decay_ = 1.0;
    std::mt19937_64 rng_;
};

} // namespace quietwind
