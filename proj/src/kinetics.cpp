#include "quasi1d/kinetics.hpp"

#include "quasi1d/errors.hpp"
#include "quasi1d/linsolve.hpp"

namespace quasi1d {

SkeletonStats single_cell_stats(const ValidatedCell& cell) {
    const OneCellSystem sys = build_one_cell(cell);
    const AbsorbingWalkGraph& g = sys.graph;
    const std::vector<int> over = {sys.overline_copy};
    const std::vector<int> under = {sys.underline_copy};
    const std::vector<int> both = {sys.underline_copy, sys.overline_copy};

    const HittingSolution phi_p = hitting_probability(g, over, under);
    const HittingSolution phi_m = hitting_probability(g, under, over);
    const HittingSolution psi = expected_hitting_time(g, both);
    const HittingSolution m2 = second_moment_hitting_time(g, both);
    const HittingSolution w_p = restricted_first_moment(g, over, under);
    const HittingSolution w_m = restricted_first_moment(g, under, over);

    const double nu = sys.exit_rate;
    SkeletonStats s;
    for (const FirstJump& j : sys.jumps) {
        const double weight = j.rate / nu;
        s.e_j1 += weight * psi.at(j.state);
        s.e_j1_sq += weight * m2.at(j.state);
        if (j.forward) {
            s.p_tilde += weight * phi_p.at(j.state);
            s.e_j1_plus += weight * w_p.at(j.state);
        } else {
            s.q_tilde += weight * phi_m.at(j.state);
            s.e_j1_minus += weight * w_m.at(j.state);
        }
    }
    // The exponential holding time at the star is independent of the rest
    // of the excursion: it adds 1/nu to E(J1), 2 E(J1)/nu to E(J1^2), and
    // p/nu (q/nu) to the restricted first moments.
    s.e_j1 += 1.0 / nu;
    s.e_j1_sq += 2.0 * s.e_j1 / nu;
    s.e_j1_plus += s.p_tilde / nu;
    s.e_j1_minus += s.q_tilde / nu;
    return s;
}

CycleStats two_cell_stats(const ValidatedCell& cell) {
    const AbsorbingWalkGraph g = build_two_cell(cell);
    const int start = g.start;
    const std::vector<int> plus = {g.index_of(star_name(1))};
    const std::vector<int> minus = {g.index_of(star_name(-1))};
    const std::vector<int> both = {minus[0], plus[0]};

    CycleStats s;
    s.p_plus = hitting_probability(g, plus, minus).at(start);
    s.p_minus = hitting_probability(g, minus, plus).at(start);
    s.e_s = expected_hitting_time(g, both).at(start);
    s.e_s_sq = second_moment_hitting_time(g, both).at(start);
    s.e_s_plus = restricted_first_moment(g, plus, minus).at(start);
    s.e_s_minus = restricted_first_moment(g, minus, plus).at(start);
    return s;
}

double velocity_from(const SkeletonStats& s) { return (s.p_tilde - s.q_tilde) / s.e_j1; }

double diffusion_from(const SkeletonStats& s) {
    const double v = velocity_from(s);
    return (s.p_tilde + s.q_tilde) / s.e_j1 + v * v * s.e_j1_sq / s.e_j1 -
           2.0 * v * (s.e_j1_plus - s.e_j1_minus) / s.e_j1;
}

double velocity_from(const CycleStats& s) { return (s.p_plus - s.p_minus) / s.e_s; }

double diffusion_from(const CycleStats& s) {
    // sigma^2 = Var(X - vS) / E(S) with X = +/-1 the cycle displacement.
    const double v = velocity_from(s);
    const double ex = s.p_plus - s.p_minus;
    const double var_x = (s.p_plus + s.p_minus) - ex * ex;
    const double var_s = s.e_s_sq - s.e_s * s.e_s;
    const double cov = (s.e_s_plus - s.e_s_minus) - ex * s.e_s;
    return (var_x + v * v * var_s - 2.0 * v * cov) / s.e_s;
}

ReducedVelocityResult reduced_velocity(const ValidatedCell& cell) {
    const AbsorbingWalkGraph g = build_two_cell(cell);
    const int minus_host = g.index_of(star_name(-1));
    const int plus_host = g.index_of(star_name(1));
    const ChainFamily family = find_linear_chains(g, {minus_host, g.start, plus_host});
    const ReducedGraph rg = reduce_graph(g, family);

    const int start = rg.to_reduced[g.start];
    const std::vector<int> plus = {rg.to_reduced[plus_host]};
    const std::vector<int> minus = {rg.to_reduced[minus_host]};

    ReducedVelocityResult res;
    res.phi0 = reduced_hitting(rg, plus, minus).at(start);
    res.psi0 = reduced_expected_time(rg, {minus[0], plus[0]}).at(start);
    res.v = (2.0 * res.phi0 - 1.0) / res.psi0;
    res.chains_removed = static_cast<int>(family.chains.size());
    res.reduced_states = rg.graph.state_count();
    return res;
}

}  // namespace quasi1d
