#include "quasi1d/models.hpp"

#include <cmath>
#include <string>

#include "quasi1d/errors.hpp"

namespace quasi1d {

static void require_positive(const Eigen::ArrayXd& a, const char* name) {
    for (int i = 0; i < a.size(); ++i)
        if (!(a(i) > 0.0) || !std::isfinite(a(i)))
            throw Error(std::string(name) + " rates must be strictly positive and finite");
}

ChainCoefficients chain_coefficients(const Eigen::ArrayXd& xi_plus,
                                     const Eigen::ArrayXd& xi_minus) {
    if (xi_plus.size() != xi_minus.size() || xi_plus.size() < 1)
        throw Error("chain_coefficients: rate arrays must be nonempty and equal-sized");
    require_positive(xi_plus, "forward");
    require_positive(xi_minus, "backward");

    ChainCoefficients c;
    c.N = static_cast<int>(xi_plus.size());
    const int N = c.N;
    c.xi_plus = xi_plus;
    c.xi_minus = xi_minus;
    c.rho = xi_minus / xi_plus;
    c.Delta = c.rho.prod();
    auto rho_at = [&](int j) { return c.rho(((j % N) + N) % N); };

    // r_k = (1/xi_k^+) (1 + sum_{i=1..N-1} prod_{j=1..i} rho_{k+j}), k=1..N.
    c.r.resize(N);
    for (int k = 1; k <= N; ++k) {
        double t = 0.0;
        for (int i = N - 1; i >= 1; --i) t = rho_at(k + i) * (1.0 + t);
        c.r(k - 1) = (1.0 + t) / xi_plus(k % N);
    }
    c.sum_r = c.r.sum();

    // L_k = 1 + rho_1 + ... + rho_1..rho_{k-1};  Y_k per the time recursion.
    c.Lambda.resize(N);
    c.Upsilon.resize(N);
    c.Lambda(0) = 1.0;
    c.Upsilon(0) = 0.0;
    double P = 1.0, S = 0.0;
    for (int k = 2; k <= N; ++k) {
        P *= c.rho(k - 1);
        c.Lambda(k - 1) = c.Lambda(k - 2) + P;
        S = c.rho(k - 1) * S + 1.0 / xi_plus(k - 1);
        c.Upsilon(k - 1) = c.Upsilon(k - 2) + S;
    }

    c.w.resize(N - 1);
    c.z.resize(N - 1);
    c.h.resize(N - 1);
    c.kk.resize(N - 1);
    for (int k = 1; k < N; ++k) {
        // z_k: ratio products truncated at rho_{N-1}; w_k: the wrapped tail.
        double t = 0.0;
        for (int j = N - 1; j >= k + 1; --j) t = c.rho(j) * (1.0 + t);
        c.z(k - 1) = (1.0 + t) / xi_plus(k);

        double prod = 1.0;
        for (int j = k + 1; j <= N - 1; ++j) prod *= c.rho(j);
        double acc = 0.0;
        for (int m = N; m <= N + k - 1; ++m) {
            prod *= rho_at(m);
            acc += prod;
        }
        c.w(k - 1) = acc / xi_plus(k);

        c.h(k - 1) = c.Lambda(k - 1) / c.Lambda(N - 1);
        c.kk(k - 1) = c.Lambda(k - 1) * c.Upsilon(N - 1) / c.Lambda(N - 1) - c.Upsilon(k - 1);
    }
    return c;
}

// ------------------------------------------------------- periodic model

PeriodicLinearModel::PeriodicLinearModel(const Eigen::ArrayXd& xi_plus,
                                         const Eigen::ArrayXd& xi_minus)
    : chain(chain_coefficients(xi_plus, xi_minus)) {}

double periodic_velocity(const PeriodicLinearModel& m) {
    return (1.0 - m.chain.Delta) / m.chain.sum_r;
}

double periodic_diffusion(const PeriodicLinearModel& m) {
    const ChainCoefficients& c = m.chain;
    const int N = c.N;
    const double v = periodic_velocity(m);
    double quad = 0.0, cross = 0.0;
    for (int k = 1; k < N; ++k) {
        quad += 2.0 * c.kk(k - 1) * c.r(k - 1);
        cross += c.w(k - 1) - c.h(k - 1) * c.r(k - 1);
    }
    return ((1.0 + c.Delta) + v * v * quad + 2.0 * v * cross) / c.sum_r;
}

FundamentalCell generate_cell(const PeriodicLinearModel& m) {
    const int N = m.N();
    FundamentalCell cell;
    for (int k = 0; k <= N; ++k) cell.vertices.push_back(std::to_string(k));
    cell.underline = "0";
    cell.overline = std::to_string(N);
    for (int k = 0; k < N; ++k)
        cell.edges.push_back(
            {std::to_string(k), std::to_string(k + 1), m.chain.xi_plus(k)});
    for (int k = 1; k <= N; ++k)
        cell.edges.push_back(
            {std::to_string(k), std::to_string(k - 1), m.chain.xi_minus(k % N)});
    return cell;
}

// ------------------------------------------------------- parallel model

ParallelChainModel::ParallelChainModel(const Eigen::ArrayXd& up_plus,
                                       const Eigen::ArrayXd& up_minus,
                                       const Eigen::ArrayXd& down_plus,
                                       const Eigen::ArrayXd& down_minus)
    : upper(chain_coefficients(up_plus, up_minus)),
      lower(chain_coefficients(down_plus, down_minus)) {
    if (upper.N < 2 || lower.N < 2)
        throw Error("parallel model: each chain needs length >= 2");
    nu0 = up_plus(0) + up_minus(0) + down_plus(0) + down_minus(0);
}

double parallel_velocity(const ParallelChainModel& m) {
    const double rN1 = m.upper.r(m.N1() - 1), rN2 = m.lower.r(m.N2() - 1);
    const double num = (1.0 - m.upper.Delta) / rN1 + (1.0 - m.lower.Delta) / rN2;
    const double den = m.upper.sum_r / rN1 + m.lower.sum_r / rN2 - 1.0;
    return num / den;
}

double parallel_diffusion(const ParallelChainModel& m) {
    // Per-chain pieces weighted by the forward entry rate xi_0^+ of each
    // chain; assembled through the first-return moments of the excursion.
    const double nu0 = m.nu0;
    const double rN1 = m.upper.r(m.N1() - 1), rN2 = m.lower.r(m.N2() - 1);
    const double c0 = m.upper.sum_r / rN1 + m.lower.sum_r / rN2 - 2.0;
    const double G1 = m.upper.Gamma(), G2 = m.lower.Gamma();
    const double rp = m.upper.xi_plus(0) / G1 + m.lower.xi_plus(0) / G2;
    const double rm = m.upper.xi_plus(0) * m.upper.Delta / G1 +
                      m.lower.xi_plus(0) * m.lower.Delta / G2;
    const double e_j1 = (1.0 + c0) / nu0;
    const double v = (rp - rm) / (1.0 + c0);
    const double pq_over = (rp + rm) / (1.0 + c0);

    auto cross = [&](const ChainCoefficients& c) {
        double hr_w = 0.0;
        for (int k = 1; k < c.N; ++k) hr_w += c.h(k - 1) * c.r(k - 1) - c.w(k - 1);
        return c.xi_plus(0) / (nu0 * c.Gamma()) * ((1.0 - c.Delta) / nu0 + hr_w);
    };
    auto quad = [&](const ChainCoefficients& c) {
        double kkr = 0.0;
        for (int k = 1; k < c.N; ++k) kkr += 2.0 * c.kk(k - 1) * c.r(k - 1);
        return c.xi_plus(0) / (nu0 * c.Gamma()) * kkr;
    };
    const double diff = cross(m.upper) + cross(m.lower);
    const double e_j1_sq = 2.0 * e_j1 / nu0 + quad(m.upper) + quad(m.lower);
    return pq_over + v * v * e_j1_sq / e_j1 - 2.0 * v * diff / e_j1;
}

FundamentalCell generate_cell(const ParallelChainModel& m) {
    FundamentalCell cell;
    cell.vertices.push_back("0");
    for (int k = 1; k < m.N1(); ++k) cell.vertices.push_back("a" + std::to_string(k));
    for (int k = 1; k < m.N2(); ++k) cell.vertices.push_back("b" + std::to_string(k));
    cell.vertices.push_back("1");
    cell.underline = "0";
    cell.overline = "1";

    auto add_chain = [&](const char* prefix, const ChainCoefficients& c) {
        const int n = c.N;
        auto name = [&](int k) {
            if (k == 0) return std::string("0");
            if (k == n) return std::string("1");
            return prefix + std::to_string(k);
        };
        cell.edges.push_back({"0", name(1), c.xi_plus(0)});
        for (int k = 1; k < n; ++k) {
            cell.edges.push_back({name(k), name(k + 1), c.xi_plus(k)});
            cell.edges.push_back({name(k), name(k - 1), c.xi_minus(k)});
        }
        cell.edges.push_back({"1", name(n - 1), c.xi_minus(0)});
    };
    add_chain("a", m.upper);
    add_chain("b", m.lower);
    return cell;
}

// ----------------------------------------------------- lumping & record

PeriodicLinearModel lump_identical(double alpha, double beta) {
    Eigen::ArrayXd xp(2), xm(2);
    xp << 2.0 * alpha, alpha;
    xm << 2.0 * beta, beta;
    return PeriodicLinearModel(xp, xm);
}

double published_diffusion_reference(double alpha, double beta) {
    if (!(alpha > 0.0) || !(beta >= 0.0) || !std::isfinite(alpha) || !std::isfinite(beta))
        throw Error("published_diffusion_reference: need alpha > 0, beta >= 0");
    return (20.0 * alpha * alpha + 16.0 * alpha * beta + 12.0 * beta * beta) /
           (27.0 * (alpha + beta));
}

}  // namespace quasi1d
