#pragma once

// Unambiguous discrimination of phase-remapped coherent-state constellations.
//
// A constellation of M = 2N coherent states |alpha e^{i k x pi / N}>, k = 0..M-1,
// is described by its Gram matrix of pairwise overlaps. For equiprobable states
// the USD success probability is the smallest Gram eigenvalue. With integer
// remapping factor x the Gram matrix is circulant and diagonalised by the DFT;
// otherwise it is only Toeplitz and a general Hermitian eigensolver is used.

#include <complex>
#include <cstddef>
#include <vector>

namespace ipa::statemath {

using complex = std::complex<double>;

class StateSet {
public:
    /// Throws DomainError for negative amplitude/remap factor or n_half == 0.
    StateSet(double alpha_mag, int n_half, double remap_x);

    double alpha_mag() const noexcept { return alpha_mag_; }
    int n_half() const noexcept { return n_half_; }
    double remap_x() const noexcept { return remap_x_; }
    std::size_t size() const noexcept { return phases_.size(); }
    const std::vector<double>& phases() const noexcept { return phases_; }

    /// True when the remapped constellation is still symmetric (circulant Gram).
    bool is_symmetric() const noexcept;

private:
    double alpha_mag_;
    int n_half_;
    double remap_x_;
    std::vector<double> phases_;
};

class GramMatrix {
public:
    explicit GramMatrix(std::size_t dim);
    GramMatrix(std::size_t dim, std::vector<complex> entries);

    std::size_t dim() const noexcept { return dim_; }
    const complex& operator()(std::size_t row, std::size_t col) const { return entries_[row * dim_ + col]; }
    complex& operator()(std::size_t row, std::size_t col) { return entries_[row * dim_ + col]; }

    bool is_hermitian(double tol = 1e-12) const;
    bool is_circulant(double tol = 1e-12) const;

private:
    std::size_t dim_;
    std::vector<complex> entries_;
};

enum class EigenMethod { general, circulant_dft };

GramMatrix gram_matrix(const StateSet& set);

/// All eigenvalues of a Hermitian matrix in ascending order, via cyclic Jacobi
/// on the real-symmetric embedding [[Re, -Im], [Im, Re]].
std::vector<double> hermitian_eigenvalues(const GramMatrix& g);

/// Eigenvalues of a circulant matrix from the DFT of its first row, ascending.
/// Throws ValidationError if g is not circulant or a DFT value is not real.
std::vector<double> circulant_eigenvalues(const GramMatrix& g);

double min_eigenvalue(const GramMatrix& g, EigenMethod method);

/// Optimal USD probability, lambda_min(G) clamped to [0, 1].
double usd_probability(double alpha_mag, int n_half, double remap_x);

/// f(x) = P_U(alpha, x) / P_U(alpha, 1). Throws DomainError when the baseline is zero.
double usd_ratio(double alpha_mag, int n_half, double remap_x);

/// Small-amplitude approximation 2N (|alpha|^2)^{2N-1} / (2N-1)!.
double usd_asymptotic(double alpha_mag, int n_half);

/// Closed form for the two-state (N = 1) constellation.
double usd_probability_two_state(double alpha_mag, double remap_x);

struct UsdPoint {
    double x;
    double p_usd;
    double ratio;
};

/// Evaluates P_U and f on each grid point; parallel over the grid.
std::vector<UsdPoint> usd_curve(double alpha_mag, int n_half, const std::vector<double>& xs);

}  // namespace ipa::statemath
