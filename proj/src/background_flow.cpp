#include "stokesim/background_flow.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "stokesim/errors.hpp"
#include "stokesim/kernels.hpp"

namespace stokesim {

namespace {
constexpr double k8pi_inv = 1.0 / (8.0 * std::numbers::pi);
} // namespace

// ---------------------------------------------------------------------------
// TabulatedField

TabulatedField::TabulatedField(Vec3 origin, double spacing, int nx, int ny, int nz, std::vector<Vec3> values)
    : origin_(origin), spacing_(spacing), nx_(nx), ny_(ny), nz_(nz), values_(std::move(values)) {
    if (nx_ < 1 || ny_ < 1 || nz_ < 1 || spacing_ <= 0.0)
        throw ValidationError("tabulated field requires a nonempty lattice with positive spacing");
    if (values_.size() != static_cast<std::size_t>(nx_) * ny_ * nz_)
        throw ValidationError("tabulated field value count does not match lattice dimensions");
}

Vec3 TabulatedField::node(int i, int j, int k) const {
    return origin_ + Vec3{i * spacing_, j * spacing_, k * spacing_};
}

TabulatedField TabulatedField::from_csv(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open tabulated field file " + path.string());

    std::vector<std::array<double, 6>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        std::array<double, 6> row{};
        std::istringstream ls(line);
        std::string cell;
        std::size_t col = 0;
        bool numeric = true;
        while (std::getline(ls, cell, ',') && col < 6) {
            try {
                row[col++] = std::stod(cell);
            } catch (const std::exception &) {
                numeric = false;
                break;
            }
        }
        if (!numeric)
            continue; // header row
        if (col != 6)
            throw ValidationError("tabulated field row needs 6 columns: x,y,z,hx,hy,hz");
        rows.push_back(row);
    }
    if (rows.empty())
        throw ValidationError("tabulated field file " + path.string() + " holds no samples");

    auto axis_coords = [&rows](int c) {
        std::vector<double> v;
        v.reserve(rows.size());
        for (const auto &r : rows)
            v.push_back(r[c]);
        std::sort(v.begin(), v.end());
        std::vector<double> uniq;
        for (double x : v)
            if (uniq.empty() || x - uniq.back() > 1e-12 * (1.0 + std::abs(x)))
                uniq.push_back(x);
        return uniq;
    };
    const auto xs = axis_coords(0), ys = axis_coords(1), zs = axis_coords(2);
    const int nx = static_cast<int>(xs.size()), ny = static_cast<int>(ys.size()), nz = static_cast<int>(zs.size());
    if (rows.size() != static_cast<std::size_t>(nx) * ny * nz)
        throw ValidationError("tabulated field samples do not form a full lattice");

    double spacing = 0.0;
    for (const auto *axis : {&xs, &ys, &zs})
        for (std::size_t i = 1; i < axis->size(); ++i) {
            const double d = (*axis)[i] - (*axis)[i - 1];
            if (spacing == 0.0)
                spacing = d;
            else if (std::abs(d - spacing) > 1e-9 * spacing)
                throw ValidationError("tabulated field lattice is not uniform");
        }
    if (spacing == 0.0)
        spacing = 1.0; // single node

    auto index_of = [](const std::vector<double> &axis, double x) {
        const auto it = std::lower_bound(axis.begin(), axis.end(), x - 1e-9);
        return static_cast<int>(it - axis.begin());
    };
    std::vector<Vec3> values(rows.size());
    for (const auto &r : rows) {
        const int i = index_of(xs, r[0]), j = index_of(ys, r[1]), k = index_of(zs, r[2]);
        values[(static_cast<std::size_t>(i) * ny + j) * nz + k] = Vec3{r[3], r[4], r[5]};
    }
    return TabulatedField(Vec3{xs[0], ys[0], zs[0]}, spacing, nx, ny, nz, std::move(values));
}

Vec3 TabulatedField::force_at(const Vec3 &x) const {
    const double fx = (x.x - origin_.x) / spacing_;
    const double fy = (x.y - origin_.y) / spacing_;
    const double fz = (x.z - origin_.z) / spacing_;
    if (fx < 0.0 || fy < 0.0 || fz < 0.0 || fx > nx_ - 1 || fy > ny_ - 1 || fz > nz_ - 1)
        return Vec3{};
    const int i0 = std::min(static_cast<int>(fx), nx_ - 2 < 0 ? 0 : nx_ - 2);
    const int j0 = std::min(static_cast<int>(fy), ny_ - 2 < 0 ? 0 : ny_ - 2);
    const int k0 = std::min(static_cast<int>(fz), nz_ - 2 < 0 ? 0 : nz_ - 2);
    const double tx = nx_ == 1 ? 0.0 : fx - i0, ty = ny_ == 1 ? 0.0 : fy - j0, tz = nz_ == 1 ? 0.0 : fz - k0;
    Vec3 acc{};
    for (int di = 0; di <= (nx_ == 1 ? 0 : 1); ++di)
        for (int dj = 0; dj <= (ny_ == 1 ? 0 : 1); ++dj)
            for (int dk = 0; dk <= (nz_ == 1 ? 0 : 1); ++dk) {
                const double w = (di ? tx : 1.0 - tx) * (dj ? ty : 1.0 - ty) * (dk ? tz : 1.0 - tz);
                acc += values_[(static_cast<std::size_t>(i0 + di) * ny_ + (j0 + dj)) * nz_ + (k0 + dk)] * w;
            }
    return acc;
}

Vec3 TabulatedField::convolve_velocity(const Vec3 &x) const {
    const double cell_volume = spacing_ * spacing_ * spacing_;
    // equivalent-volume ball: int_{B_rho} G = rho^2/3 Id
    const double rho_eq = std::cbrt(3.0 * cell_volume / (4.0 * std::numbers::pi));
    const double near2 = 0.25 * spacing_ * spacing_;
    Vec3 acc{};
    for (int i = 0; i < nx_; ++i)
        for (int j = 0; j < ny_; ++j)
            for (int k = 0; k < nz_; ++k) {
                const Vec3 h = values_[(static_cast<std::size_t>(i) * ny_ + j) * nz_ + k];
                const Vec3 d = x - node(i, j, k);
                if (d.norm2() <= near2)
                    acc += h * (rho_eq * rho_eq / 3.0);
                else
                    acc += stokeslet(d) * h * cell_volume;
            }
    return acc;
}

Mat3 TabulatedField::convolve_gradient(const Vec3 &x) const {
    const double cell_volume = spacing_ * spacing_ * spacing_;
    const double near2 = 0.25 * spacing_ * spacing_;
    Mat3 acc{};
    for (int i = 0; i < nx_; ++i)
        for (int j = 0; j < ny_; ++j)
            for (int k = 0; k < nz_; ++k) {
                const Vec3 d = x - node(i, j, k);
                if (d.norm2() <= near2)
                    continue; // grad G is odd: the singular ball integral vanishes
                const Vec3 h = values_[(static_cast<std::size_t>(i) * ny_ + j) * nz_ + k];
                acc += stokeslet_gradient(d).contract(h) * cell_volume;
            }
    return acc;
}

Vec3 quadrature_convolve(const TabulatedField &field, const Vec3 &x) { return field.convolve_velocity(x); }

// ---------------------------------------------------------------------------
// BackgroundFlow

BackgroundFlow BackgroundFlow::linear(const Mat3 &gradient) {
    if (std::abs(gradient.trace()) > 1e-12 * (1.0 + gradient.frobenius_norm()))
        throw ValidationError("linear flow gradient must be trace-free (incompressibility)");
    BackgroundFlow f;
    f.kind_ = Linear{gradient};
    return f;
}

BackgroundFlow BackgroundFlow::regularized_stokeslet(const Vec3 &center, const Vec3 &strength, double blob_width) {
    if (!(blob_width > 0.0))
        throw ValidationError("regularized stokeslet requires blob width > 0");
    BackgroundFlow f;
    f.kind_ = Blob{center, strength, blob_width};
    return f;
}

BackgroundFlow BackgroundFlow::tabulated(TabulatedField field) {
    BackgroundFlow f;
    f.kind_ = std::make_shared<const TabulatedField>(std::move(field));
    return f;
}

FlowSample BackgroundFlow::operator()(const Vec3 &x) const {
    FlowSample s;
    if (std::holds_alternative<Zero>(kind_))
        return s;
    if (const auto *lin = std::get_if<Linear>(&kind_)) {
        s.velocity = lin->gradient * x;
        s.velocity_gradient = lin->gradient;
        return s;
    }
    if (const auto *blob = std::get_if<Blob>(&kind_)) {
        const Vec3 d = x - blob->center;
        const double r2 = d.norm2();
        const double delta2 = blob->width * blob->width;
        const double s2 = r2 + delta2;
        const double sinv = 1.0 / std::sqrt(s2);
        const double sinv3 = sinv / s2;
        const double sinv5 = sinv3 / s2;
        const Vec3 &F = blob->strength;
        const double df = dot(d, F);

        s.velocity = (F * (r2 + 2.0 * delta2) + d * df) * (k8pi_inv * sinv3);

        Mat3 g = outer(F, d) * (-(r2 + 4.0 * delta2) * sinv5);
        g += (outer(d, F) + Mat3::identity() * df) * sinv3;
        g += outer(d, d) * (-3.0 * df * sinv5);
        s.velocity_gradient = g * k8pi_inv;

        const double phi = 15.0 * delta2 * delta2 / (8.0 * std::numbers::pi * s2 * s2 * s2 * std::sqrt(s2));
        s.force_density = F * phi;
        return s;
    }
    const auto &field = *std::get<std::shared_ptr<const TabulatedField>>(kind_);
    s.velocity = field.convolve_velocity(x);
    s.velocity_gradient = field.convolve_gradient(x);
    s.force_density = field.force_at(x);
    return s;
}

} // namespace stokesim
