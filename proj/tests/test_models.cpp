#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "quasi1d/cell.hpp"
#include "quasi1d/errors.hpp"
#include "quasi1d/kinetics.hpp"
#include "quasi1d/models.hpp"
#include "quasi1d/reduction.hpp"
#include "support.hpp"

using namespace quasi1d;
using testsupport::close;

namespace {

// The inter-star chain of the N-periodic cell: interiors 1..N-1 with
// forward rate xi_k^+ and backward rate xi_k^-.
LinearChain periodic_chain(const ChainCoefficients& c) {
    LinearChain chain;
    for (int k = 0; k <= c.N; ++k) chain.states.push_back(k);
    chain.rate_fwd.resize(c.N - 1);
    chain.rate_back.resize(c.N - 1);
    for (int k = 1; k < c.N; ++k) {
        chain.rate_fwd(k - 1) = c.xi_plus(k);
        chain.rate_back(k - 1) = c.xi_minus(k);
    }
    return chain;
}

}  // namespace

TEST_CASE("coefficient identities hold on random periodic families") {
    std::mt19937 rng(808);
    for (int trial = 0; trial < 100; ++trial) {
        const int N = 1 + trial % 8;
        const ChainCoefficients c = chain_coefficients(
            testsupport::random_rates(rng, N), testsupport::random_rates(rng, N));

        CHECK(c.Lambda(0) == 1.0);
        CHECK(c.Upsilon(0) == 0.0);
        CHECK(close(c.r.sum(), c.sum_r, 1e-12));
        CHECK(close(c.r(N - 1), c.Gamma() / c.xi_plus(0), 1e-12));
        CHECK(close(c.Delta, c.rho.prod(), 1e-12));
        for (int k = 1; k < N; ++k) {
            CHECK(close(c.r(k - 1), c.z(k - 1) + c.w(k - 1), 1e-12));
            CHECK(c.h(k - 1) > 0.0);
            CHECK(c.h(k - 1) < 1.0);
        }

        if (N >= 2) {
            const LinearChain chain = periodic_chain(c);
            // The recursion weight equals the chain removal weight, and the
            // accumulated time coefficient equals the chain cost.
            CHECK(close(c.Gamma(), gamma(chain), 1e-12));
            CHECK(close(c.Upsilon(N - 1), chain_cost(chain), 1e-12));
            // Orientation identity for the chain weight.
            double prod = 1.0;
            for (int i = 0; i < chain.rate_fwd.size(); ++i)
                prod *= chain.rate_back(i) / chain.rate_fwd(i);
            CHECK(close(gamma(reversed(chain)) * prod, gamma(chain), 1e-12));
            // Total-resistance identity: sum_k r_k decomposes into the
            // boundary term plus the costs of both chain orientations.
            const double rhs = c.Gamma() / c.xi_plus(0) + chain_cost(chain) +
                               c.Delta * chain_cost(reversed(chain));
            CHECK(close(c.sum_r, rhs, 1e-10));
        }
    }
}

TEST_CASE("z and w reproduce the double-sum forms they compress") {
    std::mt19937 rng(809);
    std::uniform_real_distribution<double> ux(-2.0, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
        const int N = 2 + trial % 7;
        const ChainCoefficients c = chain_coefficients(
            testsupport::random_rates(rng, N), testsupport::random_rates(rng, N));
        Eigen::ArrayXd x(N);  // x_k used for k = 1..N-1
        for (int k = 0; k < N; ++k) x(k) = ux(rng);
        auto rho_at = [&](int j) { return c.rho(j % N); };

        double lhs_z = 0.0;
        for (int i = 1; i <= N - 1; ++i)
            for (int k = 1; k <= i; ++k) {
                double prod = 1.0;
                for (int j = k + 1; j <= i; ++j) prod *= rho_at(j);
                lhs_z += x(k) / c.xi_plus(k) * prod;
            }
        double lhs_w = 0.0;
        for (int m = N; m <= 2 * N - 2; ++m)
            for (int k = m - N + 1; k <= N - 1; ++k) {
                double prod = 1.0;
                for (int j = k + 1; j <= m; ++j) prod *= rho_at(j);
                lhs_w += x(k) / c.xi_plus(k) * prod;
            }
        // The x_k carry random signs, so the sums can cancel; compare
        // against the total term mass instead of the (possibly tiny) result.
        double rhs_z = 0.0, rhs_w = 0.0, mass = 1.0;
        for (int k = 1; k <= N - 1; ++k) {
            rhs_z += x(k) * c.z(k - 1);
            rhs_w += x(k) * c.w(k - 1);
            mass += std::abs(x(k)) * (c.z(k - 1) + c.w(k - 1));
        }
        CHECK(std::abs(lhs_z - rhs_z) <= 1e-10 * mass);
        CHECK(std::abs(lhs_w - rhs_w) <= 1e-10 * mass);
    }
}

TEST_CASE("periodic closed forms: spots and special cases") {
    SUBCASE("homogeneous") {
        for (int N : {1, 2, 5}) {
            const double a = 2.0, b = 0.5;
            const PeriodicLinearModel m(Eigen::ArrayXd::Constant(N, a),
                                        Eigen::ArrayXd::Constant(N, b));
            CHECK(close(periodic_velocity(m), (a - b) / N, 1e-13));
            CHECK(close(periodic_diffusion(m), (a + b) / (N * N), 1e-13));
        }
    }
    SUBCASE("balanced rates have zero drift and sigma^2 = 2a/N^2") {
        const int N = 4;
        const double a = 1.7;
        const PeriodicLinearModel m(Eigen::ArrayXd::Constant(N, a),
                                    Eigen::ArrayXd::Constant(N, a));
        CHECK(std::abs(periodic_velocity(m)) <= 1e-14);
        CHECK(close(periodic_diffusion(m), 2 * a / (N * N), 1e-13));
    }
    SUBCASE("2-periodic spot") {
        Eigen::ArrayXd p(2), m2(2);
        p << 2.0, 3.0;
        m2 << 1.0, 1.0;
        const PeriodicLinearModel m(p, m2);
        CHECK(close(periodic_velocity(m), 5.0 / 7.0, 1e-14));
        CHECK(close(periodic_diffusion(m), 293.0 / 343.0, 1e-14));
    }
    SUBCASE("2-periodic equals the two-state closed form on random rates") {
        std::mt19937 rng(555);
        for (int trial = 0; trial < 50; ++trial) {
            const Eigen::ArrayXd q = testsupport::random_rates(rng, 4);
            Eigen::ArrayXd p(2), mm(2);
            p << q(0), q(1);
            mm << q(2), q(3);
            const double S = q.sum();
            const double vD = (q(0) * q(1) - q(2) * q(3)) / S;
            const double sD = (q(0) * q(1) + q(2) * q(3)) / S -
                              2 * std::pow(q(0) * q(1) - q(2) * q(3), 2) / (S * S * S);
            const PeriodicLinearModel m(p, mm);
            CHECK(close(periodic_velocity(m), vD, 1e-12));
            CHECK(close(periodic_diffusion(m), sD, 1e-12));
        }
    }
    SUBCASE("rate scaling is linear in both outputs") {
        std::mt19937 rng(556);
        const Eigen::ArrayXd p = testsupport::random_rates(rng, 3);
        const Eigen::ArrayXd mm = testsupport::random_rates(rng, 3);
        const PeriodicLinearModel m(p, mm), fast(3.5 * p, 3.5 * mm);
        CHECK(close(periodic_velocity(fast), 3.5 * periodic_velocity(m), 1e-12));
        CHECK(close(periodic_diffusion(fast), 3.5 * periodic_diffusion(m), 1e-12));
    }
}

TEST_CASE("periodic closed forms match the exact pipelines on generated cells") {
    std::mt19937 rng(606);
    for (int trial = 0; trial < 20; ++trial) {
        const PeriodicLinearModel m = testsupport::random_periodic(rng, 1 + trial % 8);
        const FundamentalCell raw = generate_cell(m);
        CHECK(check_cell(raw).empty());
        const ValidatedCell cell = ValidatedCell::validate(raw);
        CHECK(close(periodic_velocity(m), velocity_from(two_cell_stats(cell)), 1e-10));
        CHECK(close(periodic_diffusion(m), diffusion_from(two_cell_stats(cell)), 1e-10));

        // First-return time identity for the generated cell.
        const SkeletonStats s = single_cell_stats(cell);
        const double nu = m.chain.xi_plus(0) + m.chain.xi_minus(0);
        CHECK(close(s.e_j1, m.chain.xi_plus(0) / nu * m.chain.sum_r / m.chain.Gamma(),
                    1e-10));
    }
}

TEST_CASE("parallel closed forms: spots and pipeline agreement") {
    SUBCASE("symmetric chains") {
        std::mt19937 rng(707);
        for (int trial = 0; trial < 10; ++trial) {
            const double a = testsupport::log_uniform_rate(rng);
            const double b = testsupport::log_uniform_rate(rng);
            const ParallelChainModel m(Eigen::ArrayXd::Constant(2, a),
                                       Eigen::ArrayXd::Constant(2, b),
                                       Eigen::ArrayXd::Constant(2, a),
                                       Eigen::ArrayXd::Constant(2, b));
            CHECK(close(parallel_velocity(m), 2.0 / 3.0 * (a - b), 1e-12));
            CHECK(close(parallel_diffusion(m),
                        (10 * a * a + 16 * a * b + 10 * b * b) / (27 * (a + b)), 1e-12));
        }
        const double a = 1.3;
        const ParallelChainModel eq(Eigen::ArrayXd::Constant(2, a),
                                    Eigen::ArrayXd::Constant(2, a),
                                    Eigen::ArrayXd::Constant(2, a),
                                    Eigen::ArrayXd::Constant(2, a));
        CHECK(std::abs(parallel_velocity(eq)) <= 1e-14);
        CHECK(close(parallel_diffusion(eq), 2 * a / 3.0, 1e-12));
    }
    SUBCASE("alpha=2, beta=1 spot") {
        const ParallelChainModel m(Eigen::ArrayXd::Constant(2, 2.0),
                                   Eigen::ArrayXd::Constant(2, 1.0),
                                   Eigen::ArrayXd::Constant(2, 2.0),
                                   Eigen::ArrayXd::Constant(2, 1.0));
        CHECK(close(m.nu0, 6.0, 1e-15));
        CHECK(close(parallel_velocity(m), 2.0 / 3.0, 1e-14));
        CHECK(close(parallel_diffusion(m), 82.0 / 81.0, 1e-14));
    }
    SUBCASE("random instances match both pipelines") {
        std::mt19937 rng(708);
        for (int trial = 0; trial < 10; ++trial) {
            const ParallelChainModel m =
                testsupport::random_parallel(rng, 2 + trial % 4, 2 + (trial / 2) % 4);
            const ValidatedCell cell = ValidatedCell::validate(generate_cell(m));
            CHECK(close(parallel_velocity(m), velocity_from(two_cell_stats(cell)),
                        1e-10));
            CHECK(close(parallel_diffusion(m), diffusion_from(two_cell_stats(cell)),
                        1e-10));
            CHECK(close(parallel_velocity(m), velocity_from(single_cell_stats(cell)),
                        1e-10));
            CHECK(close(parallel_diffusion(m), diffusion_from(single_cell_stats(cell)),
                        1e-10));
        }
    }
    SUBCASE("generated cell shape") {
        const ParallelChainModel m(Eigen::ArrayXd::Constant(2, 1.0),
                                   Eigen::ArrayXd::Constant(2, 1.0),
                                   Eigen::ArrayXd::Constant(3, 1.0),
                                   Eigen::ArrayXd::Constant(3, 1.0));
        const FundamentalCell cell = generate_cell(m);
        CHECK(cell.vertices.size() == 5);  // 0, a1, b1, b2, 1
        CHECK(cell.edges.size() == 10);    // 2(N1+N2)
        CHECK(check_cell(cell).empty());
    }
}

TEST_CASE("identical-chain lumping and the published reference value") {
    SUBCASE("lumped 2-periodic equals the parallel closed form") {
        std::mt19937 rng(909);
        for (int trial = 0; trial < 50; ++trial) {
            const double a = testsupport::log_uniform_rate(rng);
            const double b = testsupport::log_uniform_rate(rng);
            const ParallelChainModel par(Eigen::ArrayXd::Constant(2, a),
                                         Eigen::ArrayXd::Constant(2, b),
                                         Eigen::ArrayXd::Constant(2, a),
                                         Eigen::ArrayXd::Constant(2, b));
            const PeriodicLinearModel lump = lump_identical(a, b);
            CHECK(close(parallel_velocity(par), periodic_velocity(lump), 1e-12));
            CHECK(close(parallel_diffusion(par), periodic_diffusion(lump), 1e-12));
        }
        const PeriodicLinearModel lump = lump_identical(2.0, 1.0);
        CHECK(lump.chain.xi_plus(0) == 4.0);
        CHECK(lump.chain.xi_plus(1) == 2.0);
        CHECK(lump.chain.xi_minus(0) == 2.0);
        CHECK(lump.chain.xi_minus(1) == 1.0);
    }
    SUBCASE("documented discrepancy at alpha=2, beta=1") {
        const ParallelChainModel par(Eigen::ArrayXd::Constant(2, 2.0),
                                     Eigen::ArrayXd::Constant(2, 1.0),
                                     Eigen::ArrayXd::Constant(2, 2.0),
                                     Eigen::ArrayXd::Constant(2, 1.0));
        const double half = 0.5 * parallel_diffusion(par);
        const double published = published_diffusion_reference(2.0, 1.0);
        CHECK(close(half, 41.0 / 81.0, 1e-13));
        CHECK(close(published, 124.0 / 81.0, 1e-13));
        CHECK(std::abs(published - half) > 1.0);  // 83/81 apart
    }
    SUBCASE("published value degenerates to 20a/27 at beta = 0") {
        for (double a : {0.5, 1.0, 3.0}) {
            CHECK(close(published_diffusion_reference(a, 0.0), 20.0 * a / 27.0, 1e-14));
        }
    }
}

TEST_CASE("model constructors reject invalid rates") {
    Eigen::ArrayXd good = Eigen::ArrayXd::Constant(2, 1.0);
    Eigen::ArrayXd zero = Eigen::ArrayXd::Zero(2);
    Eigen::ArrayXd one = Eigen::ArrayXd::Constant(1, 1.0);
    CHECK_THROWS_AS(PeriodicLinearModel(good, zero), Error);
    CHECK_THROWS_AS(PeriodicLinearModel(good, one), Error);
    CHECK_THROWS_AS(PeriodicLinearModel(Eigen::ArrayXd(0), Eigen::ArrayXd(0)), Error);
    CHECK_THROWS_AS(ParallelChainModel(one, one, good, good), Error);
    CHECK_THROWS_AS(ParallelChainModel(good, zero, good, good), Error);
    CHECK_THROWS_AS(published_diffusion_reference(-1.0, 1.0), Error);
    CHECK_THROWS_AS(published_diffusion_reference(1.0, -1.0), Error);
}
