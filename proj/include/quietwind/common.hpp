#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace quietwind {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kBetzLimit = 16.0 / 27.0;
inline constexpr double kDefaultAirDensity = 1.225;   // kg/m^3, ISA sea level
inline constexpr double kDefaultSpeedOfSound = 340.0; // m/s

// dB level used to represent "no acoustic energy" in finite arithmetic.
inline constexpr double kSilenceDb = -300.0;

inline constexpr double rpm_to_rad_s(double rpm) { return rpm * 2.0 * kPi / 60.0; }
inline constexpr double rad_s_to_rpm(double rad_s) { return rad_s * 60.0 / (2.0 * kPi); }
inline constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

// Thrown when a tabulated quantity is queried outside its support.
class OutOfRangeError : public std::runtime_error {
public:
    explicit OutOfRangeError(const std::string& what) : std::runtime_error(what) {}
};

class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

class ShapeMismatchError : public std::logic_error {
public:
    explicit ShapeMismatchError(const std::string& what) : std::logic_error(what) {}
};

// FNV-1a, used to stamp output files with a stable config fingerprint.
inline std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 1469598103934665603ull) {
    std::uint64_t h = seed;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace quietwind
