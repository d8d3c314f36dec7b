#pragma once
// Shared test helpers: deterministic random model/cell generators (rates
// log-uniform in [0.1, 10]) and approximate-equality predicates.

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "quasi1d/cell.hpp"
#include "quasi1d/models.hpp"

namespace testsupport {

inline double log_uniform_rate(std::mt19937& rng) {
    std::uniform_real_distribution<double> u(std::log(0.1), std::log(10.0));
    return std::exp(u(rng));
}

inline Eigen::ArrayXd random_rates(std::mt19937& rng, int n) {
    Eigen::ArrayXd out(n);
    for (int i = 0; i < n; ++i) out(i) = log_uniform_rate(rng);
    return out;
}

inline quasi1d::PeriodicLinearModel random_periodic(std::mt19937& rng, int N) {
    return quasi1d::PeriodicLinearModel(random_rates(rng, N), random_rates(rng, N));
}

inline quasi1d::ParallelChainModel random_parallel(std::mt19937& rng, int N1, int N2) {
    return quasi1d::ParallelChainModel(random_rates(rng, N1), random_rates(rng, N1),
                                       random_rates(rng, N2), random_rates(rng, N2));
}

// Strongly connected cell on 2 + n_interior vertices: a bidirectional ring
// through every vertex in shuffled order guarantees strong connectivity;
// n_extra_edges additional random edges are sprinkled on top.
inline quasi1d::FundamentalCell random_cell(std::mt19937& rng, int n_interior,
                                            int n_extra_edges) {
    quasi1d::FundamentalCell cell;
    cell.underline = "u";
    cell.overline = "w";
    cell.vertices = {"u", "w"};
    for (int i = 0; i < n_interior; ++i) cell.vertices.push_back("m" + std::to_string(i));
    const int n = static_cast<int>(cell.vertices.size());

    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin() + 1, order.end(), rng);

    std::set<std::pair<int, int>> present;
    auto add = [&](int a, int b) {
        if (a == b || !present.insert({a, b}).second) return;
        cell.edges.push_back(
            {cell.vertices[a], cell.vertices[b], log_uniform_rate(rng)});
    };
    for (int i = 0; i < n; ++i) {
        add(order[i], order[(i + 1) % n]);
        add(order[(i + 1) % n], order[i]);
    }
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int e = 0; e < n_extra_edges; ++e) add(pick(rng), pick(rng));
    return cell;
}

// Cell whose two-cell walk graph contains removable linear chains: rotates
// through periodic paths, parallel chains, and periodic paths decorated
// with a pendant vertex (the pendant's anchor breaks one chain, the rest
// survive).
inline quasi1d::FundamentalCell random_chain_bearing_cell(std::mt19937& rng, int which) {
    switch (which % 3) {
        case 0: {
            std::uniform_int_distribution<int> nd(2, 8);
            return generate_cell(random_periodic(rng, nd(rng)));
        }
        case 1: {
            std::uniform_int_distribution<int> nd(2, 5);
            return generate_cell(random_parallel(rng, nd(rng), nd(rng)));
        }
        default: {
            std::uniform_int_distribution<int> nd(3, 8);
            quasi1d::FundamentalCell cell = generate_cell(random_periodic(rng, nd(rng)));
            cell.vertices.push_back("p");
            cell.edges.push_back({"p", "1", log_uniform_rate(rng)});
            cell.edges.push_back({"1", "p", log_uniform_rate(rng)});
            return cell;
        }
    }
}

inline double rel_diff(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

// Relative-or-absolute closeness, the form used by every agreement check.
inline bool close(double a, double b, double tol) {
    return rel_diff(a, b) <= tol || std::abs(a - b) <= tol;
}

}  // namespace testsupport
