#include "voltherm/spectral.hpp"

#include "voltherm/catalog.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace voltherm {

SpectralGrid SpectralGrid::make(double L, int N) {
    if (!(L >= 2.0))
        throw std::invalid_argument("SpectralGrid: box half-width L must be >= 2 "
                                    "so the unit disk sits strictly inside");
    if (N < 128 || (N & (N - 1)) != 0)
        throw std::invalid_argument("SpectralGrid: N must be a power of two >= 128");
    SpectralGrid g;
    g.L = L;
    g.N = N;
    return g;
}

SpectralTransform::SpectralTransform(const SpectralGrid& grid) : grid_(grid) {
    // Plans are created out-of-place on scratch buffers and later executed on
    // caller-owned arrays via the new-array interface, so one transform object
    // can serve concurrent callers.
    CField a(grid_.cells()), b(grid_.cells());
    auto* pa = reinterpret_cast<fftw_complex*>(a.data());
    auto* pb = reinterpret_cast<fftw_complex*>(b.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fwd_ = fftw_plan_dft_2d(grid_.N, grid_.N, pa, pb, FFTW_FORWARD, flags);
    bwd_ = fftw_plan_dft_2d(grid_.N, grid_.N, pa, pb, FFTW_BACKWARD, flags);
    if (fwd_ == nullptr || bwd_ == nullptr)
        throw std::runtime_error("SpectralTransform: FFT planning failed");
}

SpectralTransform::~SpectralTransform() {
    if (fwd_ != nullptr) fftw_destroy_plan(fwd_);
    if (bwd_ != nullptr) fftw_destroy_plan(bwd_);
}

CField SpectralTransform::forward(const CField& f) const {
    if (f.size() != grid_.cells())
        throw std::invalid_argument("SpectralTransform::forward: field size mismatch");
    CField in = f;
    CField out(grid_.cells());
    fftw_execute_dft(fwd_, reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

CField SpectralTransform::inverse(const CField& F) const {
    if (F.size() != grid_.cells())
        throw std::invalid_argument("SpectralTransform::inverse: field size mismatch");
    CField in = F;
    CField out(grid_.cells());
    fftw_execute_dft(bwd_, reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    out /= static_cast<double>(grid_.cells());
    return out;
}

CField SpectralTransform::apply_symbol(const CField& f, Symbol s) const {
    CField F = forward(f);
    const int N = grid_.N;
    for (int iy = 0; iy < N; ++iy) {
        const double wy = grid_.freq(iy);
        for (int ix = 0; ix < N; ++ix) {
            const double wx = grid_.freq(ix);
            // The Nyquist rows have no mirror frequency on the lattice, which
            // would break the exact conjugation symmetry of the derivative
            // operators; annihilate those (spectrally negligible) modes.
            if (ix == N / 2 || iy == N / 2) {
                F[grid_.idx(ix, iy)] = Cx(0.0, 0.0);
                continue;
            }
            Cx mult;
            switch (s) {
            case Symbol::TwoD: mult = Cx(0.0, 1.0) * Cx(wx, -wy); break;
            case Symbol::TwoDbar: mult = Cx(0.0, 1.0) * Cx(wx, wy); break;
            case Symbol::MinusLap: mult = Cx(wx * wx + wy * wy, 0.0); break;
            }
            F[grid_.idx(ix, iy)] *= mult;
        }
    }
    return inverse(F);
}

CField SpectralTransform::two_d(const CField& f) const { return apply_symbol(f, Symbol::TwoD); }

CField SpectralTransform::two_dbar(const CField& f) const {
    return apply_symbol(f, Symbol::TwoDbar);
}

CField SpectralTransform::minus_laplacian(const CField& f) const {
    return apply_symbol(f, Symbol::MinusLap);
}

namespace {

// 12-point Gauss-Legendre rule on [-1, 1], stored as the six positive
// abscissas with weights; the rule is symmetric.
constexpr std::array<double, 6> kGaussX = {0.1252334085114689, 0.3678314989981802,
                                           0.5873179542866175, 0.7699026741943047,
                                           0.9041172563704749, 0.9815606342467192};
constexpr std::array<double, 6> kGaussW = {0.2491470458134028, 0.2334925365383548,
                                           0.2031674267230659, 0.1600783285433462,
                                           0.1069393259953184, 0.0471753363865118};

struct CellOverlap {
    double area = 0.0;
    double mx = 0.0; // integral of x over the covered region
    double my = 0.0; // integral of y over the covered region
};

// Area and first moments of [x0,x1]x[y0,y1] intersected with the unit disk,
// by integrating the covered column height in x. The integrand is piecewise
// smooth with breakpoints where the circle crosses x = +-1 or the horizontal
// cell edges; Gauss quadrature on each smooth piece is exact to roundoff.
CellOverlap integrate_overlap(double x0, double x1, double y0, double y1) {
    std::vector<double> bp = {x0, x1};
    auto add_pm = [&](double v) {
        if (v > x0 && v < x1) bp.push_back(v);
        if (-v > x0 && -v < x1) bp.push_back(-v);
    };
    add_pm(1.0);
    for (double y : {y0, y1})
        if (std::abs(y) < 1.0) add_pm(std::sqrt(1.0 - y * y));
    std::sort(bp.begin(), bp.end());

    CellOverlap o;
    for (std::size_t s = 0; s + 1 < bp.size(); ++s) {
        const double a = bp[s];
        const double b = bp[s + 1];
        if (b - a < 1e-15) continue;
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        for (int g = 0; g < 6; ++g) {
            for (double sgn : {-1.0, 1.0}) {
                const double x = mid + sgn * half * kGaussX[g];
                const double w = half * kGaussW[g];
                const double s2 = 1.0 - x * x;
                if (s2 <= 0.0) continue;
                const double S = std::sqrt(s2);
                const double hi = std::min(y1, S);
                const double lo = std::max(y0, -S);
                if (hi <= lo) continue;
                o.area += w * (hi - lo);
                o.mx += w * x * (hi - lo);
                o.my += w * 0.5 * (hi * hi - lo * lo);
            }
        }
    }
    return o;
}

} // namespace

DiskQuadrature build_disk_quadrature(const SpectralGrid& grid) {
    const int n = grid.cells();
    DiskQuadrature q;
    q.area.assign(n, 0.0);
    q.cx.assign(n, 0.0);
    q.cy.assign(n, 0.0);

    const double h = grid.step();
    const double full = h * h;
    double comp = 0.0;
    for (int iy = 0; iy < grid.N; ++iy) {
        for (int ix = 0; ix < grid.N; ++ix) {
            const int c = grid.idx(ix, iy);
            const Vec2 p = grid.point(ix, iy);
            const double x0 = p.x() - 0.5 * h, x1 = p.x() + 0.5 * h;
            const double y0 = p.y() - 0.5 * h, y1 = p.y() + 0.5 * h;

            // Nearest and farthest points of the cell from the origin decide
            // full coverage / no coverage without any integration.
            const double nx = std::clamp(0.0, x0, x1);
            const double ny = std::clamp(0.0, y0, y1);
            const double near2 = nx * nx + ny * ny;
            const double fx = std::max(std::abs(x0), std::abs(x1));
            const double fy = std::max(std::abs(y0), std::abs(y1));
            const double far2 = fx * fx + fy * fy;

            if (far2 <= 1.0) {
                q.area[c] = full;
                q.cx[c] = p.x();
                q.cy[c] = p.y();
            } else if (near2 < 1.0) {
                const CellOverlap o = integrate_overlap(x0, x1, y0, y1);
                if (o.area > 0.0) {
                    q.area[c] = o.area;
                    q.cx[c] = o.mx / o.area;
                    q.cy[c] = o.my / o.area;
                }
            }
            // compensated summation keeps the total exact to roundoff
            const double y = q.area[c] - comp;
            const double t = q.total_area + y;
            comp = (t - q.total_area) - y;
            q.total_area = t;
        }
    }
    return q;
}

double disk_l2(const SpectralGrid& grid, const DiskQuadrature& quad, const CField& f) {
    if (f.size() != grid.cells() || static_cast<int>(quad.area.size()) != grid.cells())
        throw std::invalid_argument("disk_l2: size mismatch");
    double acc = 0.0, comp = 0.0;
    for (int c = 0; c < grid.cells(); ++c) {
        const double y = quad.area[c] * std::norm(f[c]) - comp;
        const double t = acc + y;
        comp = (t - acc) - y;
        acc = t;
    }
    return std::sqrt(acc);
}

double disk_sup(const SpectralGrid& grid, const CField& f) {
    if (f.size() != grid.cells())
        throw std::invalid_argument("disk_sup: size mismatch");
    double m = 0.0;
    for (int iy = 0; iy < grid.N; ++iy) {
        for (int ix = 0; ix < grid.N; ++ix) {
            const Vec2 p = grid.point(ix, iy);
            if (p.squaredNorm() <= 1.0) m = std::max(m, std::abs(f[grid.idx(ix, iy)]));
        }
    }
    return m;
}

Cx disk_integral(const SpectralGrid& grid, const DiskQuadrature& quad, const CField& f) {
    if (f.size() != grid.cells() || static_cast<int>(quad.area.size()) != grid.cells())
        throw std::invalid_argument("disk_integral: size mismatch");
    Cx acc = 0.0, comp = 0.0;
    for (int c = 0; c < grid.cells(); ++c) {
        if (quad.area[c] <= 0.0) continue;
        const Cx y = quad.area[c] * f[c] - comp;
        const Cx t = acc + y;
        comp = (t - acc) - y;
        acc = t;
    }
    return acc;
}

Cx disk_plane_wave_integral(const SpectralGrid& grid, const DiskQuadrature& quad, const CField& f,
                            Cx k) {
    if (f.size() != grid.cells() || static_cast<int>(quad.area.size()) != grid.cells())
        throw std::invalid_argument("disk_plane_wave_integral: size mismatch");
    const double h = grid.step();
    const double k1 = k.real();
    const double k2 = k.imag();
    auto sinc = [](double t) { return std::abs(t) < 1e-8 ? 1.0 - t * t / 6.0 : std::sin(t) / t; };
    // exact integral of e^{i k.x} over a full cell = h^2 sinc(k1 h/2) sinc(k2 h/2) e^{i k.center}
    const double cell_factor = sinc(0.5 * k1 * h) * sinc(0.5 * k2 * h);
    const double full = h * h;

    Cx acc = 0.0;
    for (int iy = 0; iy < grid.N; ++iy) {
        for (int ix = 0; ix < grid.N; ++ix) {
            const int c = grid.idx(ix, iy);
            const double A = quad.area[c];
            if (A <= 0.0) continue;
            if (A >= full * (1.0 - 1e-12)) {
                const Vec2 p = grid.point(ix, iy);
                const double phase = k1 * p.x() + k2 * p.y();
                acc += f[c] * (full * cell_factor) * Cx(std::cos(phase), std::sin(phase));
            } else {
                const double phase = k1 * quad.cx[c] + k2 * quad.cy[c];
                acc += f[c] * A * Cx(std::cos(phase), std::sin(phase));
            }
        }
    }
    return acc;
}

CField radial_taper(const SpectralGrid& grid) {
    return grid.sample([](const Vec2& p) {
        return Cx(smooth_fade((p.norm() - 1.5) / 0.45), 0.0);
    });
}

} // namespace voltherm
