#include "quasi1d/linsolve.hpp"

#include <algorithm>
#include <cmath>

#include "quasi1d/errors.hpp"

namespace quasi1d {

Eigen::VectorXd solve_generator_system(const AbsorbingWalkGraph& g,
                                       const Eigen::VectorXd& boundary_values,
                                       const Eigen::VectorXd& rhs, double* residual_out) {
    const int n = g.state_count();
    std::vector<int> interior;
    std::vector<int> loc(n, -1);
    for (int i = 0; i < n; ++i)
        if (!g.absorbing[i]) {
            loc[i] = static_cast<int>(interior.size());
            interior.push_back(i);
        }

    Eigen::VectorXd values = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i)
        if (g.absorbing[i]) values(i) = boundary_values(i);

    const int m = static_cast<int>(interior.size());
    if (m == 0) {
        if (residual_out) *residual_out = 0.0;
        return values;
    }

    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(m, m);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
    for (int i = 0; i < m; ++i) {
        const int x = interior[i];
        b(i) = rhs(x);
        for (const auto& [y, r] : g.out[x]) {
            M(i, i) += r;
            if (loc[y] >= 0)
                M(i, loc[y]) -= r;
            else
                b(i) += r * boundary_values(y);
        }
    }

    Eigen::VectorXd sol = M.partialPivLu().solve(b);
    if (!sol.allFinite())
        throw SingularSystemError("first-passage system is numerically singular");

    const double residual = (M * sol - b).cwiseAbs().maxCoeff();
    const double tol = kSolveTolerance * (1.0 + b.cwiseAbs().maxCoeff());
    if (residual_out) *residual_out = residual;
    if (!(residual <= tol))
        throw ToleranceNotMetError("first-passage solve residual too large", residual, tol);

    for (int i = 0; i < m; ++i) values(interior[i]) = sol(i);
    return values;
}

static void require_absorbing_subset(const AbsorbingWalkGraph& g, const std::vector<int>& S,
                                     const char* which) {
    for (int s : S) {
        if (s < 0 || s >= g.state_count() || !g.absorbing[s])
            throw Error(std::string(which) + " set must contain absorbing states only");
    }
}

HittingSolution hitting_probability(const AbsorbingWalkGraph& g, const std::vector<int>& A,
                                    const std::vector<int>& D) {
    if (A.empty()) throw Error("hitting_probability: target set is empty");
    require_absorbing_subset(g, A, "target");
    require_absorbing_subset(g, D, "avoid");
    for (int a : A)
        if (std::find(D.begin(), D.end(), a) != D.end())
            throw Error("hitting_probability: target and avoid sets overlap");

    Eigen::VectorXd boundary = Eigen::VectorXd::Zero(g.state_count());
    for (int a : A) boundary(a) = 1.0;
    HittingSolution sol;
    sol.target = A;
    sol.avoid = D;
    sol.values = solve_generator_system(g, boundary, Eigen::VectorXd::Zero(g.state_count()),
                                        &sol.residual);
    return sol;
}

HittingSolution expected_hitting_time(const AbsorbingWalkGraph& g, const std::vector<int>& A) {
    if (A.empty()) throw Error("expected_hitting_time: target set is empty");
    require_absorbing_subset(g, A, "target");
    HittingSolution sol;
    sol.target = A;
    sol.values = solve_generator_system(g, Eigen::VectorXd::Zero(g.state_count()),
                                        Eigen::VectorXd::Ones(g.state_count()), &sol.residual);
    return sol;
}

HittingSolution second_moment_hitting_time(const AbsorbingWalkGraph& g,
                                           const std::vector<int>& A) {
    HittingSolution psi = expected_hitting_time(g, A);
    HittingSolution sol;
    sol.target = A;
    sol.values = solve_generator_system(g, Eigen::VectorXd::Zero(g.state_count()),
                                        2.0 * psi.values, &sol.residual);
    return sol;
}

HittingSolution restricted_first_moment(const AbsorbingWalkGraph& g, const std::vector<int>& A,
                                        const std::vector<int>& D) {
    HittingSolution phi = hitting_probability(g, A, D);
    HittingSolution sol;
    sol.target = A;
    sol.avoid = D;
    sol.values = solve_generator_system(g, Eigen::VectorXd::Zero(g.state_count()), phi.values,
                                        &sol.residual);
    return sol;
}

// ------------------------------------------------- tridiagonal recursion

RecursionResult tridiagonal_recursion(double a, const Eigen::VectorXd& rho,
                                      const Eigen::VectorXd& alpha) {
    const int N = static_cast<int>(rho.size()) + 1;
    if (alpha.size() != rho.size())
        throw Error("tridiagonal_recursion: rho and alpha sizes differ");
    if (!std::isfinite(a)) throw Error("tridiagonal_recursion: boundary value not finite");
    for (int i = 0; i < rho.size(); ++i)
        if (!(rho(i) > 0.0) || !std::isfinite(rho(i)))
            throw Error("tridiagonal_recursion: rho entries must be positive and finite");

    RecursionResult res;
    res.lambda.resize(N);
    res.upsilon.resize(N);
    res.lambda(0) = 1.0;  // L_1
    res.upsilon(0) = 0.0;  // Y_1
    double P = 1.0, S = 0.0;
    for (int k = 2; k <= N; ++k) {
        P *= rho(k - 2);
        res.lambda(k - 1) = res.lambda(k - 2) + P;
        S = rho(k - 2) * S + alpha(k - 2);
        res.upsilon(k - 1) = res.upsilon(k - 2) + S;
    }

    res.x.resize(N + 1);
    res.x(0) = 0.0;
    const double x1 = (a + res.Upsilon(N)) / res.Lambda(N);
    for (int k = 1; k < N; ++k) res.x(k) = res.Lambda(k) * x1 - res.Upsilon(k);
    res.x(N) = a;  // exact by construction of x1
    return res;
}

}  // namespace quasi1d
