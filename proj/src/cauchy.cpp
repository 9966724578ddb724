#include "voltherm/cauchy.hpp"

#include "voltherm/catalog.hpp"

#include <fftw3.h>

#include <cmath>
#include <stdexcept>

namespace voltherm {

namespace {

// Closed-form double antiderivatives for the components of 1/z. With
// FA(x, y) below,
//   d^2 FA / dx dy = x / (x^2 + y^2)   (the real part of 1/z),
// so the integral of Re(1/z) over [x0,x1]x[y0,y1] is the corner difference
// FA(x1,y1) - FA(x1,y0) - FA(x0,y1) + FA(x0,y0); FB plays the same role for
// Im(1/z) = -y / (x^2 + y^2). Both formulas are even across the axis where
// their atan argument flips, so corner differences stay valid for cells
// straddling an axis, and the origin cell comes out exactly zero by the
// odd symmetry of the kernel.
double half_v_log(double v, double r2) { return v == 0.0 ? 0.0 : 0.5 * v * std::log(r2); }
double guarded_atan(double num, double den) {
    return den == 0.0 ? 0.0 : den * std::atan(num / den);
}

double FA(double x, double y) {
    const double r2 = x * x + y * y;
    return half_v_log(y, r2) - y + guarded_atan(y, x);
}

double FB(double x, double y) {
    const double r2 = x * x + y * y;
    return -(half_v_log(x, r2) - x + guarded_atan(x, y));
}

} // namespace

CauchyTransform::CauchyTransform(const SpectralGrid& grid)
    : grid_(grid), transform_(grid), M_(2 * grid.N) {
    const double h = grid_.step();
    const int M = M_;
    const int half = M / 2;

    // Cell-averaged kernels on the doubled offset lattice. Offsets are stored
    // in DFT order: index o represents the signed offset o (o < M/2) or
    // o - M (otherwise), covering every difference of two in-box cells.
    CField kd(M * M), kdb(M * M);
    const double scale = 1.0 / (2.0 * kPi * h * h); // corner sums -> cell averages / (2 pi)
    for (int oy = 0; oy < M; ++oy) {
        const int sy = oy < half ? oy : oy - M;
        const double y0 = (sy - 0.5) * h;
        const double y1 = (sy + 0.5) * h;
        for (int ox = 0; ox < M; ++ox) {
            const int sx = ox < half ? ox : ox - M;
            const double x0 = (sx - 0.5) * h;
            const double x1 = (sx + 0.5) * h;
            const double re = FA(x1, y1) - FA(x1, y0) - FA(x0, y1) + FA(x0, y0);
            const double im = FB(x1, y1) - FB(x1, y0) - FB(x0, y1) + FB(x0, y0);
            // 1/(2 pi z) has components (re, im); 1/(2 pi zbar) negates im.
            kdb[oy * M + ox] = Cx(re, im) * scale;
            kd[oy * M + ox] = Cx(re, -im) * scale;
        }
    }

    CField a(M * M), b(M * M);
    auto* pa = reinterpret_cast<fftw_complex*>(a.data());
    auto* pb = reinterpret_cast<fftw_complex*>(b.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fwd_ = fftw_plan_dft_2d(M, M, pa, pb, FFTW_FORWARD, flags);
    bwd_ = fftw_plan_dft_2d(M, M, pa, pb, FFTW_BACKWARD, flags);
    if (fwd_ == nullptr || bwd_ == nullptr)
        throw std::runtime_error("CauchyTransform: FFT planning failed");

    dbar_kernel_hat_.resize(M * M);
    d_kernel_hat_.resize(M * M);
    fftw_execute_dft(fwd_, reinterpret_cast<fftw_complex*>(kdb.data()),
                     reinterpret_cast<fftw_complex*>(dbar_kernel_hat_.data()));
    fftw_execute_dft(fwd_, reinterpret_cast<fftw_complex*>(kd.data()),
                     reinterpret_cast<fftw_complex*>(d_kernel_hat_.data()));

    // Fold the h^2 quadrature weight of the convolution sum into the spectra
    // and divide out the box-filter response of the piecewise-constant source
    // representation (a sinc pair on the doubled frequency lattice). Nyquist
    // rows lack a mirror frequency, which would break the exact conjugation
    // symmetry between the two kernels; annihilate those negligible modes.
    auto sinc = [](double t) { return std::abs(t) < 1e-12 ? 1.0 : std::sin(t) / t; };
    for (int oy = 0; oy < M; ++oy) {
        const int sy = oy < half ? oy : oy - M;
        const double w2 = kPi / (2.0 * grid_.L) * sy;
        for (int ox = 0; ox < M; ++ox) {
            if (ox == half || oy == half) {
                dbar_kernel_hat_[oy * M + ox] = Cx(0.0, 0.0);
                d_kernel_hat_[oy * M + ox] = Cx(0.0, 0.0);
                continue;
            }
            const int sx = ox < half ? ox : ox - M;
            const double w1 = kPi / (2.0 * grid_.L) * sx;
            const double fac = h * h / (sinc(0.5 * w1 * h) * sinc(0.5 * w2 * h));
            dbar_kernel_hat_[oy * M + ox] *= fac;
            d_kernel_hat_[oy * M + ox] *= fac;
        }
    }

    taper_ = radial_taper(grid_);
    window_ = grid_.sample([](const Vec2& p) { return Cx(cutoff_chi(p.norm()), 0.0); });
}

CauchyTransform::~CauchyTransform() {
    if (fwd_ != nullptr) fftw_destroy_plan(fwd_);
    if (bwd_ != nullptr) fftw_destroy_plan(bwd_);
}

void CauchyTransform::require_margin(const CField& g, const char* caller) const {
    if (g.size() != grid_.cells())
        throw std::invalid_argument(std::string(caller) + ": field size mismatch");
    const double gmax = g.cwiseAbs().maxCoeff();
    if (gmax == 0.0) return;
    const double limit = 0.75 * grid_.L;
    for (int iy = 0; iy < grid_.N; ++iy) {
        for (int ix = 0; ix < grid_.N; ++ix) {
            const Vec2 p = grid_.point(ix, iy);
            if (std::max(std::abs(p.x()), std::abs(p.y())) <= limit) continue;
            if (std::abs(g[grid_.idx(ix, iy)]) > 1e-13 * gmax)
                throw std::invalid_argument(
                    std::string(caller) +
                    ": input must be compactly supported with margin >= L/4 to the box edge");
        }
    }
}

CField CauchyTransform::convolve(const CField& g, const CField& kernel_hat) const {
    const int N = grid_.N;
    const int M = M_;
    CField pad = CField::Zero(M * M);
    for (int iy = 0; iy < N; ++iy)
        for (int ix = 0; ix < N; ++ix) pad[iy * M + ix] = g[grid_.idx(ix, iy)];

    CField G(M * M);
    fftw_execute_dft(fwd_, reinterpret_cast<fftw_complex*>(pad.data()),
                     reinterpret_cast<fftw_complex*>(G.data()));
    G.array() *= kernel_hat.array();
    CField back(M * M);
    fftw_execute_dft(bwd_, reinterpret_cast<fftw_complex*>(G.data()),
                     reinterpret_cast<fftw_complex*>(back.data()));
    back /= static_cast<double>(M) * static_cast<double>(M);

    CField out(grid_.cells());
    for (int iy = 0; iy < N; ++iy)
        for (int ix = 0; ix < N; ++ix) out[grid_.idx(ix, iy)] = back[iy * M + ix];
    return out;
}

CField CauchyTransform::solve_dbar(const CField& g) const {
    require_margin(g, "CauchyTransform::solve_dbar");
    const CField u1 = convolve(g, dbar_kernel_hat_);
    // One defect-correction pass: measure how far the derivative of u1 falls
    // from g (inside the smooth window, where the taper cannot interfere) and
    // absorb that defect through a second, much smaller solve.
    const CField du1 = transform_.two_dbar(CField(taper_.array() * u1.array()));
    const CField rho = CField(window_.array() * (g - du1).array());
    return u1 + convolve(rho, dbar_kernel_hat_);
}

CField CauchyTransform::solve_d(const CField& g) const {
    require_margin(g, "CauchyTransform::solve_d");
    const CField u1 = convolve(g, d_kernel_hat_);
    const CField du1 = transform_.two_d(CField(taper_.array() * u1.array()));
    const CField rho = CField(window_.array() * (g - du1).array());
    return u1 + convolve(rho, d_kernel_hat_);
}

} // namespace voltherm
