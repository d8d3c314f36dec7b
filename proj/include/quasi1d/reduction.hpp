#pragma once
// Removal of linear chains from absorbing walk graphs.
//
// A linear chain x_0, ..., x_n (n >= 2) is a path whose interior vertices
// x_1..x_{n-1} carry exactly the chain edges: out-edges to both neighbors,
// in-edges from no one else. Removing the interiors and reconnecting the
// endpoints with effective rates
//     rbar(x_0, x_n) = r(x_0, x_1) / Gamma(chain)
// (plus the symmetric term for the reversed chain) preserves the hitting
// probabilities of the remaining vertices exactly; expected hitting times
// are preserved after adding the source 1 + c(x) on endpoint rows, where
// c accounts for time spent inside removed chains. Second moments are NOT
// preserved; diffusion must be computed on unreduced graphs.

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "quasi1d/linsolve.hpp"
#include "quasi1d/walk.hpp"

namespace quasi1d {

struct LinearChain {
    std::vector<int> states;      // x_0..x_n in the host graph (n+1 entries)
    Eigen::VectorXd rate_back;    // r_i^- = r(x_i, x_{i-1}), i = 1..n-1
    Eigen::VectorXd rate_fwd;     // r_i^+ = r(x_i, x_{i+1}), i = 1..n-1

    int segments() const { return static_cast<int>(states.size()) - 1; }
    int front() const { return states.front(); }
    int back() const { return states.back(); }
};

// Gamma(chain) = 1 + sum_{i=1..n-1} prod_{j<=i} (r_j^- / r_j^+), evaluated
// with Horner-style nesting. Gamma >= 1; equals n for a unit-rate chain of
// n segments.
double gamma(const LinearChain& chain);

// c(chain) = sum_{1<=k<=j<=n-1} (1/r_k^+) prod_{m=k+1..j} (r_m^-/r_m^+).
// The expected time the walk spends inside the chain, weighted by entry
// odds; the k = j term is 1/r_k^+.
double chain_cost(const LinearChain& chain);

// The same chain traversed from x_n to x_0.
LinearChain reversed(const LinearChain& chain);

struct ChainFamily {
    std::vector<LinearChain> chains;
};

// All maximal removable chains of g whose interiors avoid the protected
// states; exactly one orientation per chain is returned (lexicographically
// smaller endpoint-name pair first). Chains whose two endpoints coincide
// are skipped (removing them would create self-edges). The result always
// satisfies the family preconditions of reduce_graph.
ChainFamily find_linear_chains(const AbsorbingWalkGraph& g,
                               const std::vector<int>& protected_states);

struct ReducedGraph {
    AbsorbingWalkGraph graph;     // surviving states, effective rates
    Eigen::VectorXd source;       // c(x) per surviving state (0 off endpoints)
    std::vector<int> kept;        // original index of each surviving state
    std::vector<int> to_reduced;  // original -> reduced index, -1 if removed

    int index_of(const std::string& name) const { return graph.index_of(name); }
};

// Remove every chain of the family. Throws InvalidFamilyError if a chain is
// not a valid linear chain of g, if interiors are shared, or if a chain
// appears together with its reversal.
ReducedGraph reduce_graph(const AbsorbingWalkGraph& g, const ChainFamily& family);

// Hitting probabilities on the reduced graph (sources play no role); agrees
// with hitting_probability on the host graph at every surviving state.
HittingSolution reduced_hitting(const ReducedGraph& rg, const std::vector<int>& A,
                                const std::vector<int>& D);

// Expected hitting times on the reduced graph: interior right-hand side is
// 1 + c(x); agrees with expected_hitting_time on the host graph at every
// surviving state.
HittingSolution reduced_expected_time(const ReducedGraph& rg,
                                      const std::vector<int>& A);

}  // namespace quasi1d
