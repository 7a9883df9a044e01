#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "stokesim/geometry.hpp"

namespace stokesim {

/// Derive an independent stream seed from a base seed and a tag (splitmix64).
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t tag) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (tag + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// mt19937_64 with explicit variate transforms, so that streams are
/// bit-identical across standard library implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller.
    double normal() {
        double u = uniform();
        while (u == 0.0)
            u = uniform();
        const double v = uniform();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
    }

    Vec3 unit_vector() {
        const double z = 1.0 - 2.0 * uniform();
        const double phi = 2.0 * std::numbers::pi * uniform();
        const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        return {s * std::cos(phi), s * std::sin(phi), z};
    }

    Vec3 in_ball(const Vec3 &center, double radius) {
        const double r = radius * std::cbrt(uniform());
        return center + unit_vector() * r;
    }

    Vec3 gaussian(const Vec3 &center, double stddev) {
        return center + Vec3{normal(), normal(), normal()} * stddev;
    }

    /// von Mises-Fisher direction on S^2 with mean direction mu (unit) and
    /// concentration kappa >= 0; kappa = 0 reduces to the uniform law.
    Vec3 von_mises_fisher(const Vec3 &mu, double kappa) {
        if (kappa <= 0.0)
            return unit_vector();
        const double u = uniform();
        const double w = 1.0 + std::log(u + (1.0 - u) * std::exp(-2.0 * kappa)) / kappa;
        const double phi = 2.0 * std::numbers::pi * uniform();
        // orthonormal frame around mu
        const Vec3 a = std::abs(mu.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
        const Vec3 t1 = cross(mu, a).normalized();
        const Vec3 t2 = cross(mu, t1);
        const double s = std::sqrt(std::max(0.0, 1.0 - w * w));
        return mu * w + (t1 * std::cos(phi) + t2 * std::sin(phi)) * s;
    }

  private:
    std::mt19937_64 gen_;
};

/// Van der Corput radical inverse, used for the low-discrepancy option.
inline double radical_inverse(std::uint64_t index, std::uint32_t base) {
    double inv = 1.0 / base, f = inv, value = 0.0;
    while (index > 0) {
        value += static_cast<double>(index % base) * f;
        index /= base;
        f *= inv;
    }
    return value;
}

} // namespace stokesim
