#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "quietwind/common.hpp"

namespace quietwind {

class GridMismatchError : public std::runtime_error {
public:
    explicit GridMismatchError(const std::string& what) : std::runtime_error(what) {}
};

class AlreadyWeightedError : public std::runtime_error {
public:
    explicit AlreadyWeightedError(const std::string& what) : std::runtime_error(what) {}
};

/// Preferred base-10 one-third-octave band centers, 10 Hz to 10 kHz.
inline constexpr std::array<double, 31> kThirdOctaveCenters = {
    10.0,   12.5,   16.0,   20.0,   25.0,   31.5,   40.0,   50.0,
    63.0,   80.0,   100.0,  125.0,  160.0,  200.0,  250.0,  315.0,
    400.0,  500.0,  630.0,  800.0,  1000.0, 1250.0, 1600.0, 2000.0,
    2500.0, 3150.0, 4000.0, 5000.0, 6300.0, 8000.0, 10000.0};

inline constexpr std::size_t kNumBands = kThirdOctaveCenters.size();

/// One-third-octave SPL spectrum. Bands at kThirdOctaveCenters; levels at or
/// below kSilenceDb carry no acoustic energy.
struct SplSpectrum {
    std::vector<double> levels_db;
    bool a_weighted = false;

    static SplSpectrum silence(bool weighted = false) {
        SplSpectrum s;
        s.levels_db.assign(kNumBands, kSilenceDb);
        s.a_weighted = weighted;
        return s;
    }

    bool is_silent() const {
        for (double l : levels_db)
            if (l > kSilenceDb) return false;
        return true;
    }
};

namespace detail {

inline double band_energy(double level_db) {
    return level_db <= kSilenceDb ? 0.0 : std::pow(10.0, level_db / 10.0);
}

inline double energy_to_level(double energy) {
    return energy > 0.0 ? 10.0 * std::log10(energy) : kSilenceDb;
}

} // namespace detail

/// Per-band energetic sum of uncorrelated sources; silence is the identity.
inline SplSpectrum combine_uncorrelated(const std::vector<SplSpectrum>& spectra) {
    if (spectra.empty()) return SplSpectrum::silence();
    const bool weighted = spectra.front().a_weighted;
    for (const auto& s : spectra) {
        if (s.levels_db.size() != kNumBands)
            throw GridMismatchError("combine_uncorrelated: spectrum not on the standard band grid");
        if (s.a_weighted != weighted)
            throw GridMismatchError("combine_uncorrelated: mixed weighting flags");
    }
    SplSpectrum out = SplSpectrum::silence(weighted);
    for (std::size_t b = 0; b < kNumBands; ++b) {
        double energy = 0.0;
        double max_level = kSilenceDb;
        for (const auto& s : spectra) {
            energy += detail::band_energy(s.levels_db[b]);
            max_level = std::max(max_level, s.levels_db[b]);
        }
        // single-contributor bands keep their level bit-exactly
        int live = 0;
        for (const auto& s : spectra)
            if (s.levels_db[b] > kSilenceDb) ++live;
        out.levels_db[b] = (live == 1) ? max_level : detail::energy_to_level(energy);
    }
    return out;
}

inline SplSpectrum combine_uncorrelated(const SplSpectrum& a, const SplSpectrum& b) {
    return combine_uncorrelated(std::vector<SplSpectrum>{a, b});
}

/// IEC-style analytic A-weighting correction at frequency f (Hz), dB.
inline double a_weighting_db(double f_hz) {
    const double f2 = f_hz * f_hz;
    const double c1 = 20.6 * 20.6;
    const double c2 = 107.7 * 107.7;
    const double c3 = 737.9 * 737.9;
    const double c4 = 12194.0 * 12194.0;
    const double num = c4 * f2 * f2;
    const double den = (f2 + c1) * std::sqrt((f2 + c2) * (f2 + c3)) * (f2 + c4);
    return 20.0 * std::log10(num / den) + 2.0;
}

inline SplSpectrum a_weight(const SplSpectrum& spec) {
    if (spec.a_weighted) throw AlreadyWeightedError("a_weight: spectrum already A-weighted");
    if (spec.levels_db.size() != kNumBands)
        throw GridMismatchError("a_weight: spectrum not on the standard band grid");
    SplSpectrum out = spec;
    out.a_weighted = true;
    for (std::size_t b = 0; b < kNumBands; ++b)
        if (out.levels_db[b] > kSilenceDb)
            out.levels_db[b] += a_weighting_db(kThirdOctaveCenters[b]);
    return out;
}

/// Energetic sum across all bands (OASPL); silence maps to the dB floor.
inline double overall_spl(const SplSpectrum& spec) {
    double energy = 0.0;
    int live = 0;
    double last_live = kSilenceDb;
    for (double l : spec.levels_db) {
        energy += detail::band_energy(l);
        if (l > kSilenceDb) {
            ++live;
            last_live = l;
        }
    }
    if (live == 1) return last_live;
    return detail::energy_to_level(energy);
}

} // namespace quietwind
