#include "stokesim/transport.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <queue>

#include "stokesim/errors.hpp"
#include "stokesim/parallel.hpp"

namespace stokesim {

namespace {

constexpr int exact_size_cap = 2048;

void check_pair(const Cloud &a, const Cloud &b, const CostSpec &cost) {
    a.validate();
    b.validate();
    if (a.size() != b.size())
        throw ValidationError("transport requires equal-size clouds");
    if (cost.use_orientation && (!a.has_orientations() || !b.has_orientations()))
        throw ValidationError("phase-space cost requires orientations on both clouds");
    if (!(cost.exponent >= 1.0))
        throw ValidationError("cost exponent must be >= 1");
}

double ground_distance(const Cloud &a, const Cloud &b, const CostSpec &cost, int i, int j) {
    double d = (a.points[i] - b.points[j]).norm();
    if (cost.use_orientation)
        d += (a.orientations[i] - b.orientations[j]).norm();
    return d;
}

std::vector<double> cost_matrix(const Cloud &a, const Cloud &b, const CostSpec &cost, double power) {
    const int n = a.size();
    std::vector<double> c(static_cast<std::size_t>(n) * n);
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            for (int j = 0; j < n; ++j) {
                const double d = ground_distance(a, b, cost, static_cast<int>(i), j);
                c[i * n + j] = power == 1.0 ? d : std::pow(d, power);
            }
    });
    return c;
}

/// Jonker-Volgenant shortest augmenting path; returns assignment[row] = col.
std::vector<int> solve_assignment(const std::vector<double> &cost, int n) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    std::vector<char> used(n + 1);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            int j1 = -1;
            double delta = inf;
            for (int j = 1; j <= n; ++j) {
                if (used[j])
                    continue;
                const double cur = cost[static_cast<std::size_t>(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> assignment(n, -1);
    for (int j = 1; j <= n; ++j)
        assignment[p[j] - 1] = j - 1;
    return assignment;
}

/// Hopcroft-Karp perfect-matching feasibility on edges with cost <= limit.
bool has_perfect_matching(const std::vector<double> &cost, int n, double limit) {
    std::vector<std::vector<int>> adj(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (cost[static_cast<std::size_t>(i) * n + j] <= limit)
                adj[i].push_back(j);

    constexpr int unmatched = -1;
    std::vector<int> match_a(n, unmatched), match_b(n, unmatched), dist(n);
    int matched = 0;

    auto bfs = [&]() {
        std::queue<int> q;
        bool found = false;
        for (int i = 0; i < n; ++i) {
            dist[i] = match_a[i] == unmatched ? 0 : -1;
            if (dist[i] == 0)
                q.push(i);
        }
        while (!q.empty()) {
            const int i = q.front();
            q.pop();
            for (int j : adj[i]) {
                const int next = match_b[j];
                if (next == unmatched)
                    found = true;
                else if (dist[next] == -1) {
                    dist[next] = dist[i] + 1;
                    q.push(next);
                }
            }
        }
        return found;
    };
    std::function<bool(int)> dfs = [&](int i) {
        for (int j : adj[i]) {
            const int next = match_b[j];
            if (next == unmatched || (dist[next] == dist[i] + 1 && dfs(next))) {
                match_a[i] = j;
                match_b[j] = i;
                return true;
            }
        }
        dist[i] = -1;
        return false;
    };
    while (bfs())
        for (int i = 0; i < n; ++i)
            if (match_a[i] == unmatched && dfs(i))
                ++matched;
    return matched == n;
}

std::vector<int> matching_at(const std::vector<double> &cost, int n, double limit) {
    // rebuild the matching at the final threshold to report a plan
    std::vector<std::vector<int>> adj(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (cost[static_cast<std::size_t>(i) * n + j] <= limit)
                adj[i].push_back(j);
    std::vector<int> match_a(n, -1), match_b(n, -1);
    std::function<bool(int, std::vector<char> &)> kuhn = [&](int i, std::vector<char> &seen) {
        for (int j : adj[i]) {
            if (seen[j])
                continue;
            seen[j] = 1;
            if (match_b[j] == -1 || kuhn(match_b[j], seen)) {
                match_a[i] = j;
                match_b[j] = i;
                return true;
            }
        }
        return false;
    };
    for (int i = 0; i < n; ++i) {
        std::vector<char> seen(n, 0);
        kuhn(i, seen);
    }
    return match_a;
}

} // namespace

void Cloud::validate() const {
    if (points.empty())
        throw ValidationError("cloud must hold at least one point");
    if (!orientations.empty()) {
        if (orientations.size() != points.size())
            throw ValidationError("cloud orientations must be absent or one per point");
        for (const auto &r : orientations)
            if (std::abs(r.norm() - 1.0) > 1e-9)
                throw ValidationError("cloud orientations must be unit vectors");
    }
}

TransportResult wasserstein_exact(const Cloud &a, const Cloud &b, const CostSpec &cost) {
    check_pair(a, b, cost);
    if (std::isinf(cost.exponent))
        throw ValidationError("wasserstein_exact requires finite exponent; use wasserstein_bottleneck");
    const int n = a.size();
    if (n > exact_size_cap)
        throw CapacityError("exact solver capped at n = 2048; use wasserstein_sinkhorn");

    const std::vector<double> c = cost_matrix(a, b, cost, cost.exponent);
    TransportResult r;
    r.solver = "hungarian";
    r.assignment = solve_assignment(c, n);
    double total = 0.0;
    for (int i = 0; i < n; ++i)
        total += c[static_cast<std::size_t>(i) * n + r.assignment[i]];
    r.value = std::pow(total / n, 1.0 / cost.exponent);
    return r;
}

TransportResult wasserstein_bottleneck(const Cloud &a, const Cloud &b, const CostSpec &cost) {
    check_pair(a, b, cost);
    const int n = a.size();
    if (n > exact_size_cap)
        throw CapacityError("bottleneck solver capped at n = 2048");

    const std::vector<double> c = cost_matrix(a, b, cost, 1.0);
    std::vector<double> levels = c;
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

    // smallest threshold admitting a perfect matching
    std::size_t lo = 0, hi = levels.size() - 1;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (has_perfect_matching(c, n, levels[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    TransportResult r;
    r.solver = "bottleneck";
    r.value = levels[lo];
    r.assignment = matching_at(c, n, levels[lo]);
    return r;
}

TransportResult wasserstein_sinkhorn(const Cloud &a, const Cloud &b, const CostSpec &cost, double reg,
                                     int max_iterations) {
    check_pair(a, b, cost);
    if (!(reg > 0.0))
        throw ValidationError("sinkhorn regularization must be > 0");
    if (std::isinf(cost.exponent))
        throw ValidationError("sinkhorn requires finite exponent");
    const int n = a.size();
    const std::vector<double> c = cost_matrix(a, b, cost, cost.exponent);

    TransportResult r;
    r.solver = "sinkhorn";

    std::vector<double> scale_probe = c;
    const std::size_t mid = scale_probe.size() / 2;
    std::nth_element(scale_probe.begin(), scale_probe.begin() + mid, scale_probe.end());
    double scale = scale_probe[mid];
    if (scale <= 0.0) {
        double mean = 0.0;
        for (double v : c)
            mean += v;
        scale = mean / static_cast<double>(c.size());
    }
    if (scale <= 0.0) { // identical clouds: the zero plan is optimal
        r.value = 0.0;
        r.coupling.assign(static_cast<std::size_t>(n) * n, 0.0);
        for (int i = 0; i < n; ++i)
            r.coupling[static_cast<std::size_t>(i) * n + i] = 1.0 / n;
        return r;
    }
    const double eps = reg * scale;

    // log-domain Sinkhorn with uniform marginals 1/n
    const double log_marginal = -std::log(static_cast<double>(n));
    std::vector<double> f(n, 0.0), g(n, 0.0);
    auto lse_row = [&](int i, double e) {
        double m = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j)
            m = std::max(m, (g[j] - c[static_cast<std::size_t>(i) * n + j]) / e);
        double s = 0.0;
        for (int j = 0; j < n; ++j)
            s += std::exp((g[j] - c[static_cast<std::size_t>(i) * n + j]) / e - m);
        return m + std::log(s) + log_marginal;
    };
    auto lse_col = [&](int j, double e) {
        double m = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i)
            m = std::max(m, (f[i] - c[static_cast<std::size_t>(i) * n + j]) / e);
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            s += std::exp((f[i] - c[static_cast<std::size_t>(i) * n + j]) / e - m);
        return m + std::log(s) + log_marginal;
    };
    auto sweep = [&](double e) {
        parallel_for(n, [&](std::size_t lo2, std::size_t hi2) {
            for (std::size_t i = lo2; i < hi2; ++i)
                f[i] = -e * lse_row(static_cast<int>(i), e);
        });
        parallel_for(n, [&](std::size_t lo2, std::size_t hi2) {
            for (std::size_t j = lo2; j < hi2; ++j)
                g[j] = -e * lse_col(static_cast<int>(j), e);
        });
    };
    // column marginals are exact after a g-update; rows measure convergence
    auto row_violation = [&]() {
        double v = 0.0;
        for (int i = 0; i < n; ++i) {
            double row = 0.0;
            for (int j = 0; j < n; ++j)
                row += std::exp((f[i] + g[j] - c[static_cast<std::size_t>(i) * n + j]) / eps + 2.0 * log_marginal);
            v = std::max(v, std::abs(row - 1.0 / n));
        }
        return v;
    };

    // epsilon scaling: anneal the regularization toward the target to keep
    // the iteration count bounded at small reg
    int used = 0;
    for (double e = scale; e > eps && used + 1 < max_iterations; e *= 0.5) {
        for (int it = 0; it < 25 && used + 1 < max_iterations; ++it, ++used)
            sweep(e);
    }
    double violation = std::numeric_limits<double>::infinity();
    for (; used < max_iterations; ++used) {
        sweep(eps);
        violation = row_violation();
        if (violation < 1e-6)
            break;
    }
    if (violation >= 1e-6)
        throw ContractionError("sinkhorn did not reach marginal tolerance 1e-6; final violation " +
                                   std::to_string(violation),
                               {violation});

    r.coupling.resize(static_cast<std::size_t>(n) * n);
    double total = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double pij = std::exp((f[i] + g[j] - c[static_cast<std::size_t>(i) * n + j]) / eps + 2.0 * log_marginal);
            r.coupling[static_cast<std::size_t>(i) * n + j] = pij;
            total += pij * c[static_cast<std::size_t>(i) * n + j];
        }
    r.value = std::pow(total, 1.0 / cost.exponent);
    return r;
}

void write_plan_csv(std::ostream &out, const TransportResult &result) {
    out << "i,j,weight\n";
    char buf[96];
    if (!result.assignment.empty()) {
        const double w = 1.0 / static_cast<double>(result.assignment.size());
        for (std::size_t i = 0; i < result.assignment.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%zu,%d,%.17g\n", i, result.assignment[i], w);
            out << buf;
        }
        return;
    }
    const auto n = static_cast<std::size_t>(std::sqrt(static_cast<double>(result.coupling.size())) + 0.5);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g\n", i, j, result.coupling[i * n + j]);
            out << buf;
        }
}

} // namespace stokesim
