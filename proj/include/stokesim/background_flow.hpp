#pragma once

#include <filesystem>
#include <memory>
#include <variant>
#include <vector>

#include "stokesim/geometry.hpp"

namespace stokesim {

/// Pointwise value of an ambient flow: velocity u_h = G * h, its gradient,
/// and the forcing density h itself.
struct FlowSample {
    Vec3 velocity;
    Mat3 velocity_gradient;
    Vec3 force_density;
};

/// Forcing samples on a regular lattice, convolved with the Stokeslet by
/// midpoint quadrature (nodes are treated as cell centers of volume h^3).
/// The cell containing the evaluation point is integrated in radial
/// coordinates over the equivalent-volume ball; total error is O(spacing).
class TabulatedField {
  public:
    TabulatedField(Vec3 origin, double spacing, int nx, int ny, int nz, std::vector<Vec3> values);

    /// Reads rows x,y,z,hx,hy,hz (header optional) forming a full lattice.
    static TabulatedField from_csv(const std::filesystem::path &path);

    Vec3 force_at(const Vec3 &x) const; ///< trilinear interpolation, 0 outside
    Vec3 convolve_velocity(const Vec3 &x) const;
    Mat3 convolve_gradient(const Vec3 &x) const;

    double spacing() const { return spacing_; }
    std::size_t size() const { return values_.size(); }

  private:
    Vec3 node(int i, int j, int k) const;

    Vec3 origin_;
    double spacing_;
    int nx_, ny_, nz_;
    std::vector<Vec3> values_;
};

/// Quadrature realization of G * h for a tabulated forcing.
Vec3 quadrature_convolve(const TabulatedField &field, const Vec3 &x);

/// The ambient forcing h and its induced Stokes velocity as an evaluatable
/// field.  Closed-form families cover the solver paths; Tabulated serves
/// arbitrary compactly supported forcings.
class BackgroundFlow {
  public:
    BackgroundFlow() : kind_(Zero{}) {}

    static BackgroundFlow zero() { return BackgroundFlow(); }

    /// u = A x with trace-free A, h = 0.  Not decaying; intended for
    /// single-particle orbit tests only.
    static BackgroundFlow linear(const Mat3 &gradient);

    /// Classical blob-regularized point force: h = phi_delta(x - c) F with
    /// phi_delta(r) = 15 delta^4 / (8 pi (r^2 + delta^2)^(7/2)), for which
    /// G * h has a closed form that tends to G(x - c) F in the far field.
    static BackgroundFlow regularized_stokeslet(const Vec3 &center, const Vec3 &strength, double blob_width);

    static BackgroundFlow tabulated(TabulatedField field);

    FlowSample operator()(const Vec3 &x) const;

    bool is_zero() const { return std::holds_alternative<Zero>(kind_); }

  private:
    struct Zero {};
    struct Linear {
        Mat3 gradient;
    };
    struct Blob {
        Vec3 center;
        Vec3 strength;
        double width;
    };

    std::variant<Zero, Linear, Blob, std::shared_ptr<const TabulatedField>> kind_;
};

} // namespace stokesim
