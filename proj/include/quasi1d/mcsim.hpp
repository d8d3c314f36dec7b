#pragma once
// Monte Carlo verification layer.
//
// Two complementary simulations are provided:
//
//  1. Renewal-reward sampling of skeleton cycles. Starting from the central
//     star state of the two-cell absorbing graph, each cycle runs a jump
//     chain until absorption at a neighbouring star and records the
//     (direction, duration) pair: direction in {-1,+1} counted in cells,
//     duration the total holding time. Cycle i uses its own random stream,
//     so the sample set is a pure function of (seed, n_cycles).
//     estimate_v_sigma turns the samples into point estimates of the
//     asymptotic velocity v = E(X)/E(T) and diffusion coefficient
//     sigma^2 = Var(X - v T)/E(T), with bootstrap standard errors.
//
//  2. Time-changed cumulative process. Replicas of W(t) = sum of rewards of
//     cycles completed by time t are evaluated on a time grid; clt_check
//     compares the empirical mean/variance slopes with v and sigma^2 and
//     applies a normality test to the standardised terminal values
//     (W(t) - v t) / sqrt(sigma^2 t).

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "quasi1d/cell.hpp"
#include "quasi1d/rng.hpp"
#include "quasi1d/walk.hpp"

namespace quasi1d {

// One completed skeleton cycle: signed displacement in cells and elapsed time.
struct RenewalSample {
    double direction = 0.0;  // +1 or -1 (cells)
    double duration = 0.0;   // holding time until the next star is reached
};

// Run a single excursion of the absorbing walk from its start state, using
// the given stream. Returns (absorbed state index, elapsed time, n_jumps).
// Throws CycleCapExceededError after `jump_cap` jumps without absorption.
struct ExcursionResult {
    int absorbed_state = -1;
    double duration = 0.0;
    std::uint64_t jumps = 0;
};
ExcursionResult run_excursion(const AbsorbingWalkGraph& graph, RngStream& rng,
                              std::uint64_t jump_cap = 1000000000ULL);

// Sample n independent skeleton cycles of the given cell.
std::vector<RenewalSample> simulate_cycles(const ValidatedCell& cell, std::size_t n,
                                           std::uint64_t seed);

// A point estimate with a bootstrap standard error.
struct EstimateWithError {
    double point = 0.0;
    double std_error = 0.0;
};

struct VelocityDiffusionEstimate {
    EstimateWithError v;
    EstimateWithError sigma_sq;
    std::size_t n_samples = 0;
    std::uint64_t seed = 0;
};

// Plug-in estimators with bootstrap (B resamples) standard errors.
VelocityDiffusionEstimate estimate_v_sigma(const std::vector<RenewalSample>& samples,
                                           std::uint64_t seed, std::size_t n_bootstrap = 200);

// Secondary sanity estimator: one long trajectory cut into n_batches
// equal-time windows. v comes from the overall slope, sigma^2 from the
// scatter of windowed increments around v * dt, standard errors from the
// batch spread. Noisier than the renewal estimator; kept as an independent
// cross-check that does not rely on the cycle decomposition.
VelocityDiffusionEstimate batch_means_estimate(const ValidatedCell& cell, double t_total,
                                               std::size_t n_batches, std::uint64_t seed);

// A cumulative process built from i.i.d. (reward, waiting time) pairs. The
// sampler draws one pair per call; replicas of W(t) are formed by summing
// rewards of renewals completed by each grid time.
struct CumulativeProcessSpec {
    std::function<std::pair<double, double>(RngStream&)> sample;  // (reward, wait)

    static CumulativeProcessSpec from_cell(const ValidatedCell& cell);
};

// Matrix of replica trajectories: row r, column j = W_r(grid[j]).
Eigen::MatrixXd simulate_time_change(const CumulativeProcessSpec& spec,
                                     const std::vector<double>& grid,
                                     std::size_t n_replicas, std::uint64_t seed);

// Law-of-large-numbers / central-limit diagnostics at terminal time t.
struct CltReport {
    double t = 0.0;
    std::size_t n_replicas = 0;
    double mean_over_t = 0.0;        // empirical E(W(t))/t, should approach v
    double var_over_t = 0.0;         // empirical Var(W(t))/t, should approach sigma^2
    double v_expected = 0.0;
    double sigma_sq_expected = 0.0;
    double anderson_darling = 0.0;   // A^2 statistic of standardised W(t)
    bool anderson_darling_retried = false;
    bool normality_ok = false;       // A^2 below the 1% critical value 3.857
};

// Anderson-Darling A^2 statistic against the standard normal (fully
// specified null). Input must be nonempty; values are sorted internally.
double anderson_darling_normal(std::vector<double> z);

// Critical value of A^2 at significance 0.01 for a fully specified normal.
inline constexpr double kAndersonDarlingCritical1pc = 3.857;

// Simulate n_replicas of W(t), compare slopes with the supplied v/sigma^2,
// and test normality of the standardised terminal values. If the normality
// test fails at 1%, it is rerun once on a derived seed (a 1% test is
// expected to fail one run in a hundred); both outcomes are reported.
CltReport clt_check(const CumulativeProcessSpec& spec, double t, std::size_t n_replicas,
                    std::uint64_t seed, double v_expected, double sigma_sq_expected);

}  // namespace quasi1d
