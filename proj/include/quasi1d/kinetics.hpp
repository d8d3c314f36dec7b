#pragma once
// Exact velocity and diffusion coefficient of the skeleton walk, by three
// independent routes that must agree to solver precision:
//
//   * single-cell: first-return decomposition of the excursion from a star.
//     J1 = first return to a star state after leaving; p~/q~ the
//     probabilities that the return advances one cell right/left.
//       v      = (p~ - q~) / E(J1)
//       sigma2 = (p~+q~)/E(J1) + v^2 E(J1^2)/E(J1)
//                - 2v (E(J1;+) - E(J1;-)) / E(J1)
//   * two-cell: one full renewal cycle S = first hit of {-1_*, 1_*} from
//     0_*. With X the cell displacement of the cycle,
//       v      = E(X) / E(S)
//       sigma2 = Var(X - vS) / E(S)
//   * reduced: chains removed from the two-cell graph; hitting probability
//     and expected time survive reduction, so v (not sigma2) is available.
//
// Everything reports per-cell skeleton units; rescale externally for
// physical site units.

#include "quasi1d/cell.hpp"
#include "quasi1d/reduction.hpp"
#include "quasi1d/walk.hpp"

namespace quasi1d {

// First-return (single-cell) statistics of the excursion from a star.
struct SkeletonStats {
    double p_tilde = 0.0;      // P(return advances +1 cell)
    double q_tilde = 0.0;      // P(return advances -1 cell)
    double e_j1 = 0.0;         // E(J1)
    double e_j1_sq = 0.0;      // E(J1^2)
    double e_j1_plus = 0.0;    // E(J1; advance +1)
    double e_j1_minus = 0.0;   // E(J1; advance -1)
};

// Full-cycle (two-cell) statistics of the excursion between stars.
struct CycleStats {
    double p_plus = 0.0;       // P(cycle ends at 1_*)
    double p_minus = 0.0;      // P(cycle ends at -1_*)
    double e_s = 0.0;          // E(S)
    double e_s_sq = 0.0;       // E(S^2)
    double e_s_plus = 0.0;     // E(S; end at 1_*)
    double e_s_minus = 0.0;    // E(S; end at -1_*)
};

SkeletonStats single_cell_stats(const ValidatedCell& cell);
CycleStats two_cell_stats(const ValidatedCell& cell);

double velocity_from(const SkeletonStats& s);
double diffusion_from(const SkeletonStats& s);
double velocity_from(const CycleStats& s);
double diffusion_from(const CycleStats& s);

// Velocity through the chain-removal route: build the two-cell graph,
// remove every maximal chain protected at {-1_*, 0_*, 1_*}, solve the
// reduced hitting/time systems. Returns v = (2 phi(0_*) - 1) / psi(0_*).
struct ReducedVelocityResult {
    double v = 0.0;
    double phi0 = 0.0;         // P(hit 1_* first) at 0_*
    double psi0 = 0.0;         // E(S) at 0_*
    int chains_removed = 0;
    int reduced_states = 0;
};
ReducedVelocityResult reduced_velocity(const ValidatedCell& cell);

}  // namespace quasi1d
