#pragma once

#include "voltherm/geometry.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

// FFTW plan handles are opaque pointers here to keep fftw3.h out of the
// public interface.
extern "C" {
typedef struct fftw_plan_s* fftw_plan;
}

namespace voltherm {

using CField = Eigen::VectorXcd;
using Cx = std::complex<double>;

/// Uniform periodic sampling of the square [-L, L)^2, N cells per side with
/// samples at cell centers, plus the matching frequency lattice. The unit
/// disk must sit strictly inside the box (L >= 2), and N must be a power of
/// two >= 128 so transform sizes stay friendly.
struct SpectralGrid {
    double L = 2.0;
    int N = 512;

    static SpectralGrid make(double L, int N);

    int cells() const { return N * N; }
    double step() const { return 2.0 * L / N; }
    int idx(int ix, int iy) const { return iy * N + ix; }
    Vec2 point(int ix, int iy) const {
        return Vec2(-L + (ix + 0.5) * step(), -L + (iy + 0.5) * step());
    }
    /// Signed integer frequency for a transform index.
    int signed_index(int i) const { return i < N / 2 ? i : i - N; }
    /// Frequency-lattice component: (pi/L) * signed index.
    double freq(int i) const { return kPi / L * signed_index(i); }

    /// Sample a scalar function of position into a complex field.
    template <typename F> CField sample(F&& f) const {
        CField out(cells());
        for (int iy = 0; iy < N; ++iy)
            for (int ix = 0; ix < N; ++ix) out[idx(ix, iy)] = f(point(ix, iy));
        return out;
    }
};

/// FFT pair and spectral derivative operators on one grid. Plans are created
/// once; executions run on caller-owned buffers and are safe to share across
/// threads.
class SpectralTransform {
  public:
    explicit SpectralTransform(const SpectralGrid& grid);
    ~SpectralTransform();
    SpectralTransform(const SpectralTransform&) = delete;
    SpectralTransform& operator=(const SpectralTransform&) = delete;

    const SpectralGrid& grid() const { return grid_; }

    CField forward(const CField& f) const; ///< unnormalized DFT
    CField inverse(const CField& F) const; ///< inverse DFT with 1/N^2

    /// First-order complex derivative pair (d/dz and d/dzbar conventions,
    /// scaled by two) and the negative Laplacian, all by symbol
    /// multiplication on the frequency lattice.
    CField two_d(const CField& f) const;
    CField two_dbar(const CField& f) const;
    CField minus_laplacian(const CField& f) const;

  private:
    enum class Symbol { TwoD, TwoDbar, MinusLap };
    CField apply_symbol(const CField& f, Symbol s) const;

    SpectralGrid grid_;
    fftw_plan fwd_ = nullptr;
    fftw_plan bwd_ = nullptr;
};

/// Exact cell/disk intersection data for restricting grid fields to the unit
/// disk: per-cell covered area and covered-region centroid. Interior cells
/// carry the full cell area and their center; exterior cells carry zero.
struct DiskQuadrature {
    std::vector<double> area;
    std::vector<double> cx, cy;
    double total_area = 0.0;
};

DiskQuadrature build_disk_quadrature(const SpectralGrid& grid);

/// L2 norm over the unit disk using covered-area weights.
double disk_l2(const SpectralGrid& grid, const DiskQuadrature& quad, const CField& f);
/// Sup norm over cells whose centers lie in the closed unit disk.
double disk_sup(const SpectralGrid& grid, const CField& f);
/// Covered-area integral of a field over the unit disk.
Cx disk_integral(const SpectralGrid& grid, const DiskQuadrature& quad, const CField& f);

/// Integral over the unit disk of f(x) e^{i k.x}, treating f as piecewise
/// constant per cell: full cells use the exact plane-wave cell integral
/// (sinc factors), boundary cells place their covered area at the covered
/// centroid. k is a complex number read as the frequency vector (re, im).
Cx disk_plane_wave_integral(const SpectralGrid& grid, const DiskQuadrature& quad, const CField& f,
                            Cx k);

/// Smooth radial taper: identically 1 through |x| = 1.5, falling smoothly to
/// 0 by |x| = 1.95. Multiplying a field that has spread beyond the disk by
/// the taper makes it spectrally differentiable without touching values on
/// any region of interest (|x| <= 1.5).
CField radial_taper(const SpectralGrid& grid);

} // namespace voltherm
