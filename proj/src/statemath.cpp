#include "ipa/statemath.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ipa/error.hpp"
#include "ipa/kernels.hpp"

namespace ipa::statemath {

namespace {

constexpr double kJacobiOffDiagonalTol = 1e-13;
constexpr int kJacobiMaxSweeps = 100;
constexpr double kDftImagTol = 1e-10;

// Dense row-major real symmetric matrix, only used inside the eigensolver.
class SymmetricMatrix {
public:
    explicit SymmetricMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}
    std::size_t size() const { return n_; }
    double& at(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    double at(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    double max_off_diagonal() const {
        double m = 0.0;
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i + 1; j < n_; ++j) m = std::max(m, std::abs(at(i, j)));
        return m;
    }

private:
    std::size_t n_;
    std::vector<double> a_;
};

// Zeroes a(p, q) with a plane rotation applied from both sides.
void rotate(SymmetricMatrix& a, std::size_t p, std::size_t q) {
    const double apq = a.at(p, q);
    if (apq == 0.0) return;
    const double theta = (a.at(q, q) - a.at(p, p)) / (2.0 * apq);
    const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;

    const std::size_t n = a.size();
    for (std::size_t k = 0; k < n; ++k) {
        const double akp = a.at(k, p);
        const double akq = a.at(k, q);
        a.at(k, p) = c * akp - s * akq;
        a.at(k, q) = s * akp + c * akq;
    }
    for (std::size_t k = 0; k < n; ++k) {
        const double apk = a.at(p, k);
        const double aqk = a.at(q, k);
        a.at(p, k) = c * apk - s * aqk;
        a.at(q, k) = s * apk + c * aqk;
    }
    a.at(p, q) = 0.0;
    a.at(q, p) = 0.0;
}

std::vector<double> jacobi_eigenvalues(SymmetricMatrix a) {
    const std::size_t n = a.size();
    bool converged = a.max_off_diagonal() < kJacobiOffDiagonalTol;
    for (int sweep = 0; sweep < kJacobiMaxSweeps && !converged; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) rotate(a, p, q);
        converged = a.max_off_diagonal() < kJacobiOffDiagonalTol;
    }
    if (!converged)
        throw NumericalError("Jacobi eigensolver did not converge in " + std::to_string(kJacobiMaxSweeps) +
                             " sweeps");

    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = a.at(i, i);
    std::sort(eig.begin(), eig.end());
    return eig;
}

void require_hermitian(const GramMatrix& g) {
    if (!g.is_hermitian()) throw ValidationError("matrix is not Hermitian");
}

}  // namespace

StateSet::StateSet(double alpha_mag, int n_half, double remap_x)
    : alpha_mag_(alpha_mag), n_half_(n_half), remap_x_(remap_x) {
    if (!(alpha_mag >= 0.0) || !std::isfinite(alpha_mag))
        throw DomainError("coherent amplitude must be finite and nonnegative");
    if (n_half < 1) throw DomainError("n_half must be at least 1");
    if (!(remap_x >= 0.0) || !std::isfinite(remap_x))
        throw DomainError("remapping factor must be finite and nonnegative");

    const std::size_t m = 2 * static_cast<std::size_t>(n_half);
    phases_.resize(m);
    for (std::size_t k = 0; k < m; ++k)
        phases_[k] = static_cast<double>(k) * remap_x * std::numbers::pi / static_cast<double>(n_half);
}

bool StateSet::is_symmetric() const noexcept { return std::floor(remap_x_) == remap_x_; }

GramMatrix::GramMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim, complex{0.0, 0.0}) {
    if (dim == 0) throw DomainError("Gram matrix dimension must be positive");
}

GramMatrix::GramMatrix(std::size_t dim, std::vector<complex> entries) : dim_(dim), entries_(std::move(entries)) {
    if (dim == 0) throw DomainError("Gram matrix dimension must be positive");
    if (entries_.size() != dim * dim) throw DomainError("Gram matrix needs dim*dim entries");
}

bool GramMatrix::is_hermitian(double tol) const {
    for (std::size_t j = 0; j < dim_; ++j)
        for (std::size_t k = j; k < dim_; ++k)
            if (std::abs((*this)(j, k) - std::conj((*this)(k, j))) > tol) return false;
    return true;
}

bool GramMatrix::is_circulant(double tol) const {
    for (std::size_t j = 0; j < dim_; ++j)
        for (std::size_t k = 0; k < dim_; ++k)
            if (std::abs((*this)(j, k) - (*this)(0, (k + dim_ - j) % dim_)) > tol) return false;
    return true;
}

GramMatrix gram_matrix(const StateSet& set) {
    const std::size_t m = set.size();
    const double a2 = set.alpha_mag() * set.alpha_mag();
    const double step = set.remap_x() * std::numbers::pi / static_cast<double>(set.n_half());
    GramMatrix g(m);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = 0; k < m; ++k) {
            // <alpha_j|alpha_k> = exp(|alpha|^2 (e^{i delta} - 1)), delta depends on k - j only.
            const double delta = (static_cast<double>(k) - static_cast<double>(j)) * step;
            g(j, k) = std::exp(complex{a2 * (std::cos(delta) - 1.0), a2 * std::sin(delta)});
        }
    }
    return g;
}

std::vector<double> hermitian_eigenvalues(const GramMatrix& g) {
    require_hermitian(g);
    const std::size_t m = g.dim();
    SymmetricMatrix embed(2 * m);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = 0; k < m; ++k) {
            const double re = 0.5 * (g(j, k).real() + g(k, j).real());
            const double im = 0.5 * (g(j, k).imag() - g(k, j).imag());
            embed.at(j, k) = re;
            embed.at(j + m, k + m) = re;
            embed.at(j, k + m) = -im;
            embed.at(j + m, k) = im;
        }
    }
    const std::vector<double> doubled = jacobi_eigenvalues(std::move(embed));

    // The embedding repeats every eigenvalue twice; sorted, the copies are adjacent.
    std::vector<double> eig(m);
    for (std::size_t i = 0; i < m; ++i) eig[i] = 0.5 * (doubled[2 * i] + doubled[2 * i + 1]);
    return eig;
}

std::vector<double> circulant_eigenvalues(const GramMatrix& g) {
    require_hermitian(g);
    if (!g.is_circulant()) throw ValidationError("circulant-dft method requires a circulant matrix");
    const std::size_t m = g.dim();
    std::vector<double> eig(m);
    for (std::size_t q = 0; q < m; ++q) {
        complex sum{0.0, 0.0};
        for (std::size_t k = 0; k < m; ++k) {
            const double angle =
                -2.0 * std::numbers::pi * static_cast<double>((q * k) % m) / static_cast<double>(m);
            sum += g(0, k) * complex{std::cos(angle), std::sin(angle)};
        }
        if (std::abs(sum.imag()) > kDftImagTol)
            throw ValidationError("DFT eigenvalue has imaginary part " + std::to_string(sum.imag()));
        eig[q] = sum.real();
    }
    std::sort(eig.begin(), eig.end());
    return eig;
}

double min_eigenvalue(const GramMatrix& g, EigenMethod method) {
    const auto eig = method == EigenMethod::circulant_dft ? circulant_eigenvalues(g) : hermitian_eigenvalues(g);
    return eig.front();
}

double usd_probability(double alpha_mag, int n_half, double remap_x) {
    const StateSet set(alpha_mag, n_half, remap_x);
    const auto method = set.is_symmetric() ? EigenMethod::circulant_dft : EigenMethod::general;
    const double lambda = min_eigenvalue(gram_matrix(set), method);
    return std::clamp(lambda, 0.0, 1.0);
}

double usd_ratio(double alpha_mag, int n_half, double remap_x) {
    const double baseline = usd_probability(alpha_mag, n_half, 1.0);
    if (!(baseline > 0.0)) throw DomainError("undefined ratio: USD probability at x = 1 is zero");
    return usd_probability(alpha_mag, n_half, remap_x) / baseline;
}

double usd_asymptotic(double alpha_mag, int n_half) {
    if (!(alpha_mag >= 0.0)) throw DomainError("coherent amplitude must be nonnegative");
    if (n_half < 1) throw DomainError("n_half must be at least 1");
    const double a2 = alpha_mag * alpha_mag;
    double term = 1.0;
    for (int j = 1; j <= 2 * n_half - 1; ++j) term *= a2 / j;
    return 2.0 * n_half * term;
}

double usd_probability_two_state(double alpha_mag, double remap_x) {
    if (!(alpha_mag >= 0.0) || !(remap_x >= 0.0)) throw DomainError("amplitude and remap factor must be nonnegative");
    return -std::expm1(-alpha_mag * alpha_mag * (1.0 - std::cos(std::numbers::pi * remap_x)));
}

std::vector<UsdPoint> usd_curve(double alpha_mag, int n_half, const std::vector<double>& xs) {
    const double baseline = usd_probability(alpha_mag, n_half, 1.0);
    if (!(baseline > 0.0)) throw DomainError("undefined ratio: USD probability at x = 1 is zero");
    const auto p = kernels::omp::usd_sweep(alpha_mag, n_half, xs);
    std::vector<UsdPoint> curve(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) curve[i] = {xs[i], p[i], p[i] / baseline};
    return curve;
}

}  // namespace ipa::statemath
