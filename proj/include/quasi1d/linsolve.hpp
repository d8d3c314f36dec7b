#pragma once
// First-passage linear systems on absorbing jump-rate graphs, all of the
// form   sum_y r(x,y) (f(x) - f(y)) = rhs(x)   at interior states, with f
// pinned on absorbing states. Interiors are assembled densely and solved
// with an LU factorization (partial pivoting); the residual of every solve
// is checked against tol * (1 + max|rhs|). These systems have a unique
// solution on finite graphs where absorption is reachable from every
// interior state, and that solution equals the minimal nonnegative one of
// the probabilistic definition.

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "quasi1d/walk.hpp"

namespace quasi1d {

inline constexpr double kSolveTolerance = 1e-9;

struct HittingSolution {
    Eigen::VectorXd values;      // one entry per graph state (boundary included)
    std::vector<int> target;     // the set A
    std::vector<int> avoid;      // the set D (empty where not applicable)
    double residual = 0.0;       // max-norm residual of the interior system

    double at(int state) const { return values(state); }
};

// Generic assembly/solve used by every named operation below and by the
// reduced-graph solves. boundary_values has one entry per state; only the
// absorbing entries are read. rhs has one entry per state; only interior
// entries are read. Throws SingularSystemError / ToleranceNotMetError.
Eigen::VectorXd solve_generator_system(const AbsorbingWalkGraph& g,
                                       const Eigen::VectorXd& boundary_values,
                                       const Eigen::VectorXd& rhs,
                                       double* residual_out = nullptr);

// P_x(hit A before D); value 1 on A, 0 on D and on every other absorbing
// state. A and D must be disjoint, nonempty subsets of the absorbing set.
HittingSolution hitting_probability(const AbsorbingWalkGraph& g,
                                    const std::vector<int>& A,
                                    const std::vector<int>& D);

// E_x(time to hit A); 0 on A. A must contain every absorbing state that is
// reachable from the interior (pass the full absorbing set for graphs built
// by this library).
HittingSolution expected_hitting_time(const AbsorbingWalkGraph& g,
                                      const std::vector<int>& A);

// E_x(T^2) for the absorption time T: same operator with source 2 * E_x(T).
HittingSolution second_moment_hitting_time(const AbsorbingWalkGraph& g,
                                           const std::vector<int>& A);

// E_x(T ; hit A before D): same operator with source P_x(hit A before D).
HittingSolution restricted_first_moment(const AbsorbingWalkGraph& g,
                                        const std::vector<int>& A,
                                        const std::vector<int>& D);

// ------------------------------------------------- tridiagonal recursion
//
// Boundary-value recursion  x_0 = 0, x_N = a,
//   x_{i+1} - x_i = rho_i (x_i - x_{i-1}) - alpha_i,   i = 1..N-1,
// solved in closed form:
//   x_1 = (a + Y_N) / L_N,   x_k = L_k x_1 - Y_k,
// with L_k = 1 + sum_{i<=k-1} prod_{j<=i} rho_j and
// Y_k = sum_{i<=k-1} sum_{n<=i} alpha_n prod_{j=n+1..i} rho_j
// (empty sums are 0, empty products are 1; L_1 = 1, Y_1 = 0).

struct RecursionResult {
    Eigen::VectorXd x;        // x_0..x_N
    Eigen::VectorXd lambda;   // L_1..L_N   (lambda(k-1) = L_k)
    Eigen::VectorXd upsilon;  // Y_1..Y_N

    double Lambda(int k) const { return lambda(k - 1); }
    double Upsilon(int k) const { return upsilon(k - 1); }
};

// rho and alpha have N-1 entries (N >= 1); rho must be positive.
RecursionResult tridiagonal_recursion(double a, const Eigen::VectorXd& rho,
                                      const Eigen::VectorXd& alpha);

}  // namespace quasi1d
