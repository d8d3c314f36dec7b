#pragma once
// Finite absorbing jump-rate graphs cut out of the quasi-1d lattice.
//
// Star states are the lattice copies of the underline vertex; the skeleton
// process records the last visited star. Two constructions feed the exact
// pipelines:
//   * two-cell graph: cells -1 and 0 plus the star 1_*, absorbing at the
//     neighboring stars -1_* / 1_*, started at 0_*. One excursion of this
//     graph is one skeleton renewal cycle.
//   * one-cell graph: a single copy of the cell with both marked vertices
//     absorbing, plus the distribution of the first jump out of a star.

#include <string>
#include <unordered_map>
#include <vector>

#include "quasi1d/cell.hpp"

namespace quasi1d {

// State names: stars print as "<n>_*"; other lattice states as "<base>@<n>".
std::string star_name(int n);
std::string lattice_state_name(const std::string& base, int n);

struct AbsorbingWalkGraph {
    std::vector<std::string> states;
    std::vector<std::vector<std::pair<int, double>>> out;  // out[i]: (j, rate)
    std::vector<char> absorbing;                           // flags, no out-edges
    int start = -1;                                        // -1 when unused

    int state_count() const { return static_cast<int>(states.size()); }
    int index_of(const std::string& name) const;           // -1 if unknown
    double exit_rate(int i) const;
    double rate(int i, int j) const;                       // 0 if no edge
    std::vector<int> absorbing_states() const;

    // True iff every non-absorbing state can reach some absorbing state and
    // absorbing states have no out-edges. Holds by construction for graphs
    // built here; exposed for tests.
    bool invariants_hold() const;

  private:
    mutable std::unordered_map<std::string, int> index_;   // lazy name lookup
};

// Two-cell construction. States: (v, n) for v != overline, n in {-1, 0},
// plus 1_*; edges of both cell copies with endpoints through the shared
// stars; -1_* and 1_* absorbing (their out-edges are suppressed).
AbsorbingWalkGraph build_two_cell(const ValidatedCell& cell);

// First jump out of a star state: forward jumps follow edges out of the
// underline vertex, backward jumps follow edges out of the overline vertex
// (relabeled one cell down by shift invariance). Both land in the same
// one-cell graph.
struct FirstJump {
    int state;    // landing state in the one-cell graph
    double rate;
    bool forward;
};

enum class CycleOutcome { AdvancePlus, AdvanceMinus, ReturnToStart };

struct OneCellSystem {
    AbsorbingWalkGraph graph;   // copy of the cell, both marks absorbing
    int underline_copy = -1;
    int overline_copy = -1;
    std::vector<FirstJump> jumps;
    double exit_rate = 0.0;     // total rate out of a star state

    // Outcome of the excursion given the first jump taken and the absorbing
    // state eventually hit. Forward jumps: overline copy => advanced one
    // cell (+1), underline copy => returned to the start star. Backward
    // jumps: overline copy => returned (it is the start star one cell
    // down), underline copy => advanced minus one cell.
    CycleOutcome outcome(const FirstJump& jump, int absorbed_state) const;
};

OneCellSystem build_one_cell(const ValidatedCell& cell);

}  // namespace quasi1d
