#pragma once
// Closed-form evaluators for two families with explicit v / sigma^2:
//
//   * N-periodic nearest-neighbor chain: site k jumps right with rate
//     xi_k^+ and left with rate xi_k^-, rates periodic with period N.
//   * two parallel chains joining consecutive stars (lengths N1, N2 >= 2),
//     rates xi (upper) and eta (lower) along each chain.
//
// Arrays are stored 0-based in site order: entry k holds xi_k^+/-, indices
// taken mod N (so xi_N = xi_0). Both evaluators report per-cell skeleton
// units; an N-periodic cell spans N sites, so the physical site velocity is
// N * v.

#include <Eigen/Dense>

#include "quasi1d/cell.hpp"

namespace quasi1d {

// Everything Prop-style closed forms need about one periodic rate family:
//   rho_k = xi_k^- / xi_k^+              Delta = rho_0 ... rho_{N-1}
//   r_k   = (1/xi_k^+)(1 + rho_{k+1} + ... + rho_{k+1}...rho_{k+N-1})
//   L_k   = 1 + rho_1 + ... + rho_1...rho_{k-1}     (L_1 = 1, Gamma = L_N)
//   Y_k   = sum_{i<k} sum_{n<=i} (1/xi_n^+) prod_{j=n+1..i} rho_j
//   z_k   = (1/xi_k^+)(1 + rho_{k+1} + ... + rho_{k+1}...rho_{N-1})
//   w_k   = (1/xi_k^+)(rho_{k+1}...rho_N + ... + rho_{k+1}...rho_{N+k-1})
//   h_k   = L_k / L_N          kk_k = L_k Y_N / L_N - Y_k
// Identities: r_k = z_k + w_k (k < N), r_N = Gamma / xi_0^+.
struct ChainCoefficients {
    int N = 0;
    Eigen::ArrayXd xi_plus, xi_minus;  // size N, index k mod N
    Eigen::ArrayXd rho;                // size N
    double Delta = 0.0;
    Eigen::ArrayXd r;                  // size N,   r(k-1)   = r_k,  k = 1..N
    Eigen::ArrayXd Lambda, Upsilon;    // size N,   (k-1)    = L_k / Y_k
    Eigen::ArrayXd w, z, h, kk;        // size N-1, (k-1),   k = 1..N-1
    double sum_r = 0.0;

    double Gamma() const { return Lambda(N - 1); }
};

ChainCoefficients chain_coefficients(const Eigen::ArrayXd& xi_plus,
                                     const Eigen::ArrayXd& xi_minus);

struct PeriodicLinearModel {
    ChainCoefficients chain;
    int N() const { return chain.N; }

    // Rates must be strictly positive and finite, sizes equal, N >= 1.
    PeriodicLinearModel(const Eigen::ArrayXd& xi_plus,
                        const Eigen::ArrayXd& xi_minus);
};

// v = (1 - Delta) / sum_k r_k
double periodic_velocity(const PeriodicLinearModel& m);

// sigma^2 = [ (1+Delta) + v^2 sum_{k<N} 2 kk_k r_k
//             + 2v sum_{k<N} (w_k - h_k r_k) ] / sum_k r_k
double periodic_diffusion(const PeriodicLinearModel& m);

// Path cell 0..N with the model's rates (vertex k -> k+1 at xi_k^+,
// k -> k-1 at xi_k^-, the overline's back edge carrying xi_0^-).
FundamentalCell generate_cell(const PeriodicLinearModel& m);

struct ParallelChainModel {
    ChainCoefficients upper, lower;    // xi, eta families
    double nu0 = 0.0;                  // total exit rate of a star
    int N1() const { return upper.N; }
    int N2() const { return lower.N; }

    // N1, N2 >= 2 (each chain has at least one interior vertex).
    ParallelChainModel(const Eigen::ArrayXd& up_plus, const Eigen::ArrayXd& up_minus,
                       const Eigen::ArrayXd& down_plus, const Eigen::ArrayXd& down_minus);
};

// v = [ (1-Delta1)/r^1_{N1} + (1-Delta2)/r^2_{N2} ]
//     / [ sum r^1 / r^1_{N1} + sum r^2 / r^2_{N2} - 1 ]
double parallel_velocity(const ParallelChainModel& m);
double parallel_diffusion(const ParallelChainModel& m);

// Cell {0, a1..a_{N1-1}, b1..b_{N2-1}, 1} with both chains between the
// marked vertices.
FundamentalCell generate_cell(const ParallelChainModel& m);

// Two identical parallel chains of length 2 (rates alpha forward, beta
// backward everywhere) lump exactly onto a 2-periodic chain with
// xi_0 = (2 alpha, 2 beta), xi_1 = (alpha, beta); per-cell v and sigma^2
// coincide with the parallel model's.
PeriodicLinearModel lump_identical(double alpha, double beta);

// Previously published diffusion constant for the symmetric two-chain
// model, site units with star spacing 2:
//   D = (20 a^2 + 16 a b + 12 b^2) / (27 (a + b)).
// Kept verbatim as a literature reference; it differs from sigma^2/2 =
// (5 a^2 + 8 a b + 5 b^2) / (27 (a + b)) except in degenerate limits.
// Accepts beta = 0 to allow evaluating that limit.
double published_diffusion_reference(double alpha, double beta);

}  // namespace quasi1d
