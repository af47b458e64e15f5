#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "ipa/error.hpp"
#include "ipa/grid.hpp"
#include "ipa/statemath.hpp"
#include "oracles.hpp"

using namespace ipa::statemath;

namespace {

GramMatrix from_eigen(const Eigen::MatrixXcd& m) {
    GramMatrix g(static_cast<std::size_t>(m.rows()));
    for (int j = 0; j < m.rows(); ++j)
        for (int k = 0; k < m.cols(); ++k) g(j, k) = m(j, k);
    return g;
}

}  // namespace

TEST_CASE("state set phases follow the remapping") {
    const StateSet s(0.8, 3, 0.7);
    REQUIRE(s.size() == 6);
    for (std::size_t k = 0; k < s.size(); ++k) CHECK(s.phases()[k] == static_cast<double>(k) * 0.7 * std::numbers::pi / 3.0);

    const StateSet unperturbed(1.0, 2, 1.0);
    CHECK(unperturbed.is_symmetric());
    CHECK(unperturbed.phases()[1] == doctest::Approx(std::numbers::pi / 2));
    CHECK_FALSE(StateSet(1.0, 2, 0.5).is_symmetric());

    CHECK_THROWS_AS(StateSet(-1.0, 1, 1.0), ipa::DomainError);
    CHECK_THROWS_AS(StateSet(1.0, 0, 1.0), ipa::DomainError);
    CHECK_THROWS_AS(StateSet(1.0, 1, -0.1), ipa::DomainError);
}

TEST_CASE("gram matrix examples") {
    SUBCASE("antipodal pair") {
        const auto g = gram_matrix(StateSet(1.0, 1, 1.0));
        CHECK(std::abs(g(0, 1)) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
        CHECK(std::abs(g(0, 1)) == doctest::Approx(0.135335).epsilon(1e-6));
        CHECK(g(0, 0) == std::complex<double>(1.0, 0.0));
    }
    SUBCASE("x = 0 collapses every state") {
        const auto g = gram_matrix(StateSet(1.0, 2, 0.0));
        for (std::size_t j = 0; j < 4; ++j)
            for (std::size_t k = 0; k < 4; ++k) CHECK(g(j, k) == std::complex<double>(1.0, 0.0));
    }
    SUBCASE("vacuum") {
        const auto g = gram_matrix(StateSet(0.0, 3, 0.7));
        for (std::size_t j = 0; j < 6; ++j)
            for (std::size_t k = 0; k < 6; ++k) CHECK(g(j, k) == std::complex<double>(1.0, 0.0));
    }
}

TEST_CASE("gram matrix matches the independent overlap formula") {
    for (double alpha : {0.3, 1.0, 1.7})
        for (int n : {1, 2, 4})
            for (double x : {0.0, 0.35, 1.0, 1.5, 2.0}) {
                const auto g = gram_matrix(StateSet(alpha, n, x));
                const auto ref = oracle::gram(alpha, n, x);
                for (int j = 0; j < 2 * n; ++j)
                    for (int k = 0; k < 2 * n; ++k) CHECK(std::abs(g(j, k) - ref(j, k)) < 1e-12);
            }
}

TEST_CASE("gram structure invariants over a grid") {
    for (int ia = 0; ia <= 8; ++ia) {
        const double alpha = 0.25 * ia;
        for (int n = 1; n <= 4; ++n) {
            for (int ix = 0; ix <= 20; ++ix) {
                const double x = 0.1 * ix;
                const auto g = gram_matrix(StateSet(alpha, n, x));
                const std::size_t m = g.dim();
                bool ok = true;
                for (std::size_t j = 0; j < m; ++j) {
                    ok = ok && g(j, j) == std::complex<double>(1.0, 0.0);
                    for (std::size_t k = 0; k < m; ++k) {
                        ok = ok && g(j, k) == std::conj(g(k, j));
                        if (j > 0 && k > 0) ok = ok && g(j, k) == g(j - 1, k - 1);  // Toeplitz
                    }
                }
                CHECK(ok);
                const auto eig = hermitian_eigenvalues(g);
                CHECK(eig.front() >= -1e-9);
                CHECK(std::accumulate(eig.begin(), eig.end(), 0.0) == doctest::Approx(double(m)).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("min_eigenvalue examples") {
    for (std::size_t m : {1u, 3u, 8u}) {
        GramMatrix id(m);
        for (std::size_t i = 0; i < m; ++i) id(i, i) = 1.0;
        CHECK(min_eigenvalue(id, EigenMethod::general) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(min_eigenvalue(id, EigenMethod::circulant_dft) == doctest::Approx(1.0).epsilon(1e-14));

        GramMatrix ones(m, std::vector<std::complex<double>>(m * m, 1.0));
        if (m > 1) {
            CHECK(std::abs(min_eigenvalue(ones, EigenMethod::general)) < 1e-14);
            CHECK(std::abs(min_eigenvalue(ones, EigenMethod::circulant_dft)) < 1e-14);
        }
    }

    const double e2 = std::exp(-2.0);
    GramMatrix two(2, {1.0, e2, e2, 1.0});
    CHECK(min_eigenvalue(two, EigenMethod::general) == doctest::Approx(1.0 - e2).epsilon(1e-14));
    CHECK(min_eigenvalue(two, EigenMethod::general) == doctest::Approx(0.864665).epsilon(1e-6));
}

TEST_CASE("min_eigenvalue error paths") {
    GramMatrix skew(2, {1.0, {0.0, 0.5}, {0.0, 0.5}, 1.0});
    CHECK_THROWS_AS(min_eigenvalue(skew, EigenMethod::general), ipa::ValidationError);
    CHECK_THROWS_AS(min_eigenvalue(skew, EigenMethod::circulant_dft), ipa::ValidationError);

    const auto toeplitz_only = gram_matrix(StateSet(1.0, 2, 0.5));
    CHECK_THROWS_AS(min_eigenvalue(toeplitz_only, EigenMethod::circulant_dft), ipa::ValidationError);
    CHECK_NOTHROW(min_eigenvalue(toeplitz_only, EigenMethod::general));
}

TEST_CASE("jacobi eigenvalues agree with Eigen on random Hermitian matrices") {
    std::mt19937_64 rng(20240611);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 50; ++trial) {
        const int m = 1 + trial % 12;
        Eigen::MatrixXcd a(m, m);
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) a(j, k) = {normal(rng), normal(rng)};
        const Eigen::MatrixXcd h = (a + a.adjoint()) / 2.0;
        const auto ours = hermitian_eigenvalues(from_eigen(h));
        const auto ref = oracle::eigenvalues(h);
        for (int i = 0; i < m; ++i) CHECK(ours[i] == doctest::Approx(ref[i]).epsilon(1e-10).scale(1.0));
    }
}

TEST_CASE("DFT eigenvalues of symmetric constellations") {
    for (double alpha : {0.5, 1.0, 2.0})
        for (int n = 1; n <= 4; ++n) {
            const auto g = gram_matrix(StateSet(alpha, n, 1.0));
            const auto dft = circulant_eigenvalues(g);
            const auto series = oracle::symmetric_eigenvalues(alpha, n);
            const auto general = hermitian_eigenvalues(g);
            for (int q = 0; q < 2 * n; ++q) {
                CHECK(std::abs(dft[q] - series[q]) < 1e-12);
                CHECK(std::abs(dft[q] - general[q]) < 1e-10);
            }
        }
}

TEST_CASE("usd_probability examples") {
    CHECK(usd_probability(1.0, 1, 1.0) == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-12));
    CHECK(usd_probability(1.0, 1, 1.0) == doctest::Approx(0.864665).epsilon(1e-6));
    CHECK(usd_probability(1.0, 1, 0.5) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
    CHECK(usd_probability(1.0, 1, 0.5) == doctest::Approx(0.632121).epsilon(1e-6));
    CHECK(usd_probability(1.0, 2, 0.0) == 0.0);
}

TEST_CASE("usd_probability agrees with the two-state closed form") {
    for (double alpha : {0.3, 0.7, 1.0})
        for (int i = 1; i <= 19; ++i) {
            const double x = i / 10.0;
            CHECK(std::abs(usd_probability(alpha, 1, x) - oracle::two_state(alpha, x)) < 1e-10);
            CHECK(std::abs(usd_probability_two_state(alpha, x) - oracle::two_state(alpha, x)) < 1e-14);
        }
}

TEST_CASE("usd_probability against Eigen for remapped sets") {
    for (double alpha : {0.5, 1.0, 1.5})
        for (int n = 2; n <= 4; ++n)
            for (double x : {0.13, 0.5, 0.77, 1.31, 1.9}) {
                const double ref = std::max(oracle::eigenvalues(oracle::gram(alpha, n, x)).front(), 0.0);
                CHECK(std::abs(usd_probability(alpha, n, x) - ref) < 1e-10);
            }
}

TEST_CASE("usd_ratio examples and errors") {
    CHECK(usd_ratio(1.0, 1, 1.0) == 1.0);
    CHECK(usd_ratio(1.0, 1, 0.5) == doctest::Approx((1 - std::exp(-1.0)) / (1 - std::exp(-2.0))).epsilon(1e-12));
    CHECK(usd_ratio(1.0, 1, 0.5) == doctest::Approx(0.731059).epsilon(1e-6));
    CHECK(usd_ratio(1.0, 2, 2.0) < 1e-12);
    // x = 2 doubles every state of the N = 2 set: brute-force eigensolve agrees.
    CHECK(std::abs(oracle::eigenvalues(oracle::gram(1.0, 2, 2.0)).front()) < 1e-12);

    CHECK_THROWS_AS(usd_ratio(0.0, 1, 0.5), ipa::DomainError);
}

TEST_CASE("usd_ratio is bounded and pinned at x = 1") {
    const auto xs = ipa::uniform_grid(0.0, 2.0, 0.05);
    for (double alpha : {0.5, 1.0, 2.0})
        for (int n = 1; n <= 4; ++n) {
            CHECK(std::abs(usd_ratio(alpha, n, 1.0) - 1.0) < 1e-12);
            for (double x : xs) {
                const double f = usd_ratio(alpha, n, x);
                CHECK(f >= 0.0);
                CHECK(f <= 1.0);
            }
        }
}

TEST_CASE("usd_asymptotic") {
    CHECK(usd_asymptotic(0.1, 1) == doctest::Approx(0.02).epsilon(1e-12));
    CHECK(usd_asymptotic(1.0, 2) == doctest::Approx(4.0 / 6.0).epsilon(1e-12));
    const double exact = usd_probability(0.1, 1, 1.0);
    CHECK(exact == doctest::Approx(0.019801).epsilon(1e-5));
    CHECK(exact / usd_asymptotic(0.1, 1) == doctest::Approx(0.990).epsilon(1e-3));
    for (int n = 1; n <= 3; ++n) {
        const double ratio = usd_probability(0.1, n, 1.0) / usd_asymptotic(0.1, n);
        CHECK(ratio >= 0.98);
        CHECK(ratio <= 1.02);
    }
    CHECK_THROWS_AS(usd_asymptotic(-1.0, 1), ipa::DomainError);
}

TEST_CASE("usd_curve matches pointwise evaluation") {
    const auto xs = ipa::uniform_grid(0.0, 2.0, 0.01);
    REQUIRE(xs.size() == 201);
    CHECK(xs[100] == 1.0);
    CHECK(xs[200] == 2.0);
    const auto curve = usd_curve(1.0, 3, xs);
    for (std::size_t i = 0; i < xs.size(); i += 17) {
        CHECK(curve[i].x == xs[i]);
        CHECK(curve[i].p_usd == usd_probability(1.0, 3, xs[i]));
        CHECK(curve[i].ratio == usd_ratio(1.0, 3, xs[i]));
    }
    CHECK(curve[100].ratio == 1.0);
}
