#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "stokesim/geometry.hpp"

namespace stokesim {

/// Uniform-weight point measure on R^3 or R^3 x S^2 (orientations either
/// present for every point or absent).
struct Cloud {
    std::vector<Vec3> points;
    std::vector<Vec3> orientations; ///< empty, or one unit vector per point

    int size() const { return static_cast<int>(points.size()); }
    bool has_orientations() const { return !orientations.empty(); }
    void validate() const;
};

/// Ground cost |dx| (spatial) or |dx| + |dr| (phase space), raised to an
/// exponent p in [1, inf]; p = inf selects the bottleneck metric.
struct CostSpec {
    double exponent = 2.0;
    bool use_orientation = false;

    static CostSpec spatial(double p) { return {p, false}; }
    static CostSpec phase(double p) { return {p, true}; }
};

struct TransportResult {
    double value = 0.0;
    /// permutation plan: assignment[i] is the B-index coupled to A-point i
    /// (exact and bottleneck solvers)
    std::vector<int> assignment;
    /// row-major n x n coupling (Sinkhorn only)
    std::vector<double> coupling;
    std::string solver;
};

/// Globally optimal W_p between equal-size uniform clouds via the Hungarian
/// assignment on the cost^p matrix; value = (min average cost^p)^(1/p).
/// Sizes above 2048 raise CapacityError (use the Sinkhorn solver).
TransportResult wasserstein_exact(const Cloud &a, const Cloud &b, const CostSpec &cost);

/// W_inf: the minimal maximum edge over perfect matchings, by binary search
/// on the sorted distinct pair costs with bipartite-matching feasibility.
TransportResult wasserstein_bottleneck(const Cloud &a, const Cloud &b, const CostSpec &cost);

/// Entropically regularized transport value (upward-biased by
/// O(reg log n)).  The regularization is relative: the effective epsilon is
/// reg times the median pair cost, which makes values exactly homogeneous
/// under rescaling of the clouds.
TransportResult wasserstein_sinkhorn(const Cloud &a, const Cloud &b, const CostSpec &cost, double reg,
                                     int max_iterations = 2000);

/// Export a plan as "i,j,weight" rows: the permutation for exact solvers or
/// the dense coupling for Sinkhorn.
void write_plan_csv(std::ostream &out, const TransportResult &result);

} // namespace stokesim
