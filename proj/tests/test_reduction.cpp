#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>
#include <vector>

#include "quasi1d/errors.hpp"
#include "quasi1d/linsolve.hpp"
#include "quasi1d/reduction.hpp"
#include "quasi1d/walk.hpp"
#include "support.hpp"

using namespace quasi1d;
using testsupport::close;

namespace {

LinearChain explicit_chain(const std::vector<int>& states,
                           const std::vector<double>& fwd,
                           const std::vector<double>& back) {
    LinearChain c;
    c.states = states;
    c.rate_fwd = Eigen::Map<const Eigen::VectorXd>(fwd.data(), fwd.size());
    c.rate_back = Eigen::Map<const Eigen::VectorXd>(back.data(), back.size());
    return c;
}

std::vector<int> star_protect(const AbsorbingWalkGraph& g) {
    return {g.index_of(star_name(-1)), g.start, g.index_of(star_name(1))};
}

}  // namespace

TEST_CASE("chain weight and cost functionals on hand-sized chains") {
    SUBCASE("one interior vertex") {
        const LinearChain c = explicit_chain({7, 3, 9}, {4.0}, {2.0});
        CHECK(gamma(c) == doctest::Approx(1.5).epsilon(1e-15));       // 1 + 2/4
        CHECK(chain_cost(c) == doctest::Approx(0.25).epsilon(1e-15)); // 1/4
        const LinearChain r = reversed(c);
        CHECK(r.states == std::vector<int>{9, 3, 7});
        CHECK(r.rate_fwd(0) == 2.0);
        CHECK(r.rate_back(0) == 4.0);
        CHECK(gamma(r) == doctest::Approx(3.0).epsilon(1e-15));       // 1 + 4/2
        CHECK(chain_cost(r) == doctest::Approx(0.5).epsilon(1e-15));  // 1/2
    }
    SUBCASE("two interior vertices") {
        // rho_1 = 3/2, rho_2 = 1/4.
        const LinearChain c = explicit_chain({0, 1, 2, 3}, {2.0, 4.0}, {3.0, 1.0});
        CHECK(gamma(c) == doctest::Approx(1.0 + 1.5 + 1.5 * 0.25).epsilon(1e-15));
        // c = (1 + rho_2)/r_1^+ + 1/r_2^+ = 1.25/2 + 0.25.
        CHECK(chain_cost(c) == doctest::Approx(0.875).epsilon(1e-15));
    }
    SUBCASE("unit-rate chain of n segments has Gamma = n") {
        for (int n = 2; n <= 6; ++n) {
            LinearChain c;
            for (int i = 0; i <= n; ++i) c.states.push_back(i);
            c.rate_fwd = Eigen::VectorXd::Ones(n - 1);
            c.rate_back = Eigen::VectorXd::Ones(n - 1);
            CHECK(gamma(c) == doctest::Approx(double(n)).epsilon(1e-14));
        }
    }
    SUBCASE("reversal is an involution") {
        std::mt19937 rng(5);
        const LinearChain c = explicit_chain(
            {4, 8, 15, 16, 23},
            {testsupport::log_uniform_rate(rng), testsupport::log_uniform_rate(rng),
             testsupport::log_uniform_rate(rng)},
            {testsupport::log_uniform_rate(rng), testsupport::log_uniform_rate(rng),
             testsupport::log_uniform_rate(rng)});
        const LinearChain back = reversed(reversed(c));
        CHECK(back.states == c.states);
        CHECK((back.rate_fwd - c.rate_fwd).norm() == 0.0);
        CHECK((back.rate_back - c.rate_back).norm() == 0.0);
    }
}

TEST_CASE("chain discovery on the two-cell graph of a periodic path cell") {
    std::mt19937 rng(31);
    const auto cell = ValidatedCell::validate(
        generate_cell(testsupport::random_periodic(rng, 4)));
    const AbsorbingWalkGraph g = build_two_cell(cell);
    const ChainFamily family = find_linear_chains(g, star_protect(g));

    REQUIRE(family.chains.size() == 2);
    std::set<int> interiors;
    for (const auto& c : family.chains) {
        CHECK(c.states.size() == 5);  // star + 3 interior copies + star
        CHECK(g.states[c.front()].find("_*") != std::string::npos);
        CHECK(g.states[c.back()].find("_*") != std::string::npos);
        for (std::size_t i = 1; i + 1 < c.states.size(); ++i)
            CHECK(interiors.insert(c.states[i]).second);
        // Orientation-dependent weights are tied by the ratio product.
        double prod = 1.0;
        for (int i = 0; i < c.rate_fwd.size(); ++i)
            prod *= c.rate_back(i) / c.rate_fwd(i);
        CHECK(close(gamma(reversed(c)) * prod, gamma(c), 1e-12));
    }
    CHECK(interiors.size() == 6);  // every non-star state is removed
}

TEST_CASE("cycles of eligible states are skipped, not misparsed") {
    // Hub h on a bidirectional triangle with m1, m2; pendant x keeps h
    // ineligible (degree 3) and the graph connected. The closed loop
    // h-m1-m2-h must not yield a removable chain.
    AbsorbingWalkGraph g;
    g.states = {"h", "m1", "m2", "x"};
    g.out.resize(4);
    g.absorbing.assign(4, 0);
    auto link = [&](int a, int b, double r1, double r2) {
        g.out[a].push_back({b, r1});
        g.out[b].push_back({a, r2});
    };
    link(0, 1, 1.0, 2.0);
    link(1, 2, 3.0, 4.0);
    link(2, 0, 5.0, 6.0);
    link(0, 3, 7.0, 8.0);
    g.start = 0;

    const ChainFamily family = find_linear_chains(g, {});
    CHECK(family.chains.empty());
    const ReducedGraph rg = reduce_graph(g, family);
    CHECK(rg.graph.state_count() == 4);
    CHECK(rg.source.isZero(0.0));
}

TEST_CASE("reduction reproduces the hand-computed symmetric parallel reduction") {
    // Two identical chains (alpha = 2 forward, beta = 1 backward, one
    // interior each) between consecutive stars. Each removed chain
    // contributes alpha^2/(alpha+beta) = 4/3 forward and
    // beta^2/(alpha+beta) = 1/3 backward, and the total time source at the
    // middle star is 2.
    Eigen::ArrayXd p(2), m(2);
    p << 2.0, 2.0;
    m << 1.0, 1.0;
    const auto cell =
        ValidatedCell::validate(generate_cell(ParallelChainModel(p, m, p, m)));
    const AbsorbingWalkGraph g = build_two_cell(cell);
    const ChainFamily family = find_linear_chains(g, star_protect(g));
    REQUIRE(family.chains.size() == 4);  // two per cell copy
    const ReducedGraph rg = reduce_graph(g, family);

    REQUIRE(rg.graph.state_count() == 3);  // only the stars survive
    const int s0 = rg.index_of(star_name(0));
    const int sp = rg.index_of(star_name(1));
    const int sm = rg.index_of(star_name(-1));
    REQUIRE(s0 >= 0);
    CHECK(close(rg.graph.rate(s0, sp), 8.0 / 3.0, 1e-12));
    CHECK(close(rg.graph.rate(s0, sm), 2.0 / 3.0, 1e-12));
    CHECK(close(rg.source(s0), 2.0, 1e-12));

    const HittingSolution phi = reduced_hitting(rg, {sp}, {sm});
    const HittingSolution psi = reduced_expected_time(rg, {sp, sm});
    CHECK(close(phi.at(s0), 0.8, 1e-12));   // (8/3) / (8/3 + 2/3)
    CHECK(close(psi.at(s0), 0.9, 1e-12));   // (1 + 2) / (10/3)
}

TEST_CASE("hitting probabilities and expected times survive reduction") {
    std::mt19937 rng(4242);
    for (int trial = 0; trial < 30; ++trial) {
        const auto cell = ValidatedCell::validate(
            testsupport::random_chain_bearing_cell(rng, trial));
        const AbsorbingWalkGraph g = build_two_cell(cell);
        const int plus = g.index_of(star_name(1));
        const int minus = g.index_of(star_name(-1));
        const ChainFamily family = find_linear_chains(g, star_protect(g));
        CHECK(!family.chains.empty());
        const ReducedGraph rg = reduce_graph(g, family);
        CHECK(rg.graph.state_count() < g.state_count());

        const HittingSolution phi_full = hitting_probability(g, {plus}, {minus});
        const HittingSolution psi_full = expected_hitting_time(g, {plus, minus});
        const HittingSolution phi_red =
            reduced_hitting(rg, {rg.to_reduced[plus]}, {rg.to_reduced[minus]});
        const HittingSolution psi_red =
            reduced_expected_time(rg, {rg.to_reduced[plus], rg.to_reduced[minus]});

        for (int i = 0; i < g.state_count(); ++i) {
            const int j = rg.to_reduced[i];
            if (j < 0) continue;
            CHECK(close(phi_red.at(j), phi_full.at(i), 1e-10));
            CHECK(close(psi_red.at(j), psi_full.at(i), 1e-10));
        }
    }
}

TEST_CASE("invalid families are rejected") {
    std::mt19937 rng(99);
    const auto cell = ValidatedCell::validate(
        generate_cell(testsupport::random_periodic(rng, 5)));
    const AbsorbingWalkGraph g = build_two_cell(cell);
    const ChainFamily family = find_linear_chains(g, star_protect(g));
    REQUIRE(family.chains.size() == 2);

    SUBCASE("a chain listed twice shares interiors") {
        ChainFamily bad = family;
        bad.chains.push_back(bad.chains[0]);
        CHECK_THROWS_AS(reduce_graph(g, bad), InvalidFamilyError);
    }
    SUBCASE("a chain together with its reversal") {
        ChainFamily bad = family;
        bad.chains[1] = reversed(bad.chains[0]);
        CHECK_THROWS_AS(reduce_graph(g, bad), InvalidFamilyError);
    }
    SUBCASE("tampered rates no longer match the graph") {
        ChainFamily bad = family;
        bad.chains[0].rate_fwd(0) *= 2.0;
        CHECK_THROWS_AS(reduce_graph(g, bad), InvalidFamilyError);
    }
    SUBCASE("too-short chains") {
        ChainFamily bad = family;
        bad.chains[0].states.resize(2);
        bad.chains[0].rate_fwd.resize(0);
        bad.chains[0].rate_back.resize(0);
        CHECK_THROWS_AS(reduce_graph(g, bad), InvalidFamilyError);
    }
    SUBCASE("reduced solves insist on absorbing targets") {
        const ReducedGraph rg = reduce_graph(g, family);
        const int s0 = rg.index_of(star_name(0));
        CHECK_THROWS_AS(reduced_expected_time(rg, {s0}), Error);
    }
}
