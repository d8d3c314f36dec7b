#include "quasi1d/walk.hpp"

#include <queue>
#include <sstream>

#include "quasi1d/errors.hpp"

namespace quasi1d {

std::string star_name(int n) {
    std::ostringstream os;
    os << n << "_*";
    return os.str();
}

std::string lattice_state_name(const std::string& base, int n) {
    std::ostringstream os;
    os << base << "@" << n;
    return os.str();
}

int AbsorbingWalkGraph::index_of(const std::string& name) const {
    if (index_.empty())
        for (int i = 0; i < state_count(); ++i) index_.emplace(states[i], i);
    auto it = index_.find(name);
    return it == index_.end() ? -1 : it->second;
}

double AbsorbingWalkGraph::exit_rate(int i) const {
    double total = 0.0;
    for (const auto& [j, r] : out[i]) {
        (void)j;
        total += r;
    }
    return total;
}

double AbsorbingWalkGraph::rate(int i, int j) const {
    double total = 0.0;
    for (const auto& [k, r] : out[i])
        if (k == j) total += r;
    return total;
}

std::vector<int> AbsorbingWalkGraph::absorbing_states() const {
    std::vector<int> a;
    for (int i = 0; i < state_count(); ++i)
        if (absorbing[i]) a.push_back(i);
    return a;
}

bool AbsorbingWalkGraph::invariants_hold() const {
    const int n = state_count();
    for (int i = 0; i < n; ++i)
        if (absorbing[i] && !out[i].empty()) return false;
    // Reverse reachability from the absorbing set must cover every state.
    std::vector<std::vector<int>> rev(n);
    for (int i = 0; i < n; ++i)
        for (const auto& [j, r] : out[i]) {
            (void)r;
            rev[j].push_back(i);
        }
    std::vector<char> hit(n, 0);
    std::queue<int> q;
    for (int i = 0; i < n; ++i)
        if (absorbing[i]) {
            hit[i] = 1;
            q.push(i);
        }
    while (!q.empty()) {
        int x = q.front();
        q.pop();
        for (int y : rev[x])
            if (!hit[y]) {
                hit[y] = 1;
                q.push(y);
            }
    }
    for (int i = 0; i < n; ++i)
        if (!hit[i]) return false;
    return true;
}

// ------------------------------------------------------------- two-cell

AbsorbingWalkGraph build_two_cell(const ValidatedCell& cell) {
    const auto& raw = cell.raw();
    const int over = cell.overline();
    const int under = cell.underline();

    AbsorbingWalkGraph g;
    // State order: cell -1 block, cell 0 block (cell vertex order, overline
    // skipped), then the star 1_*. The copy of the underline in cell n IS
    // the star n_*.
    std::vector<std::vector<int>> id(2, std::vector<int>(cell.vertex_count(), -1));
    auto add_state = [&](const std::string& name, bool absorbing) {
        g.states.push_back(name);
        g.absorbing.push_back(absorbing ? 1 : 0);
        return static_cast<int>(g.states.size()) - 1;
    };
    for (int n = 0; n < 2; ++n) {  // n = 0 -> cell -1, n = 1 -> cell 0
        const int cell_index = n - 1;
        for (int v = 0; v < cell.vertex_count(); ++v) {
            if (v == over) continue;
            const bool star = (v == under);
            const std::string name =
                star ? star_name(cell_index) : lattice_state_name(raw.vertices[v], cell_index);
            id[n][v] = add_state(name, star && cell_index == -1);
        }
    }
    const int star1 = add_state(star_name(1), true);
    g.out.resize(g.states.size());
    g.start = id[1][under];  // 0_*

    // state of cell vertex v in lattice cell n: the overline is the next
    // cell's underline.
    auto state_of = [&](int v, int n) {
        if (v == over) return n + 1 == 1 ? star1 : id[n + 2][under];
        return id[n + 1][v];
    };
    for (int n = -1; n <= 0; ++n) {
        for (const auto& e : raw.edges) {
            const int from = state_of(cell.index_of(e.from), n);
            const int to = state_of(cell.index_of(e.to), n);
            if (g.absorbing[from]) continue;  // -1_* and 1_* keep no out-edges
            g.out[from].emplace_back(to, e.rate);
        }
    }
    return g;
}

// ------------------------------------------------------------- one-cell

static AbsorbingWalkGraph build_one_cell_graph(const ValidatedCell& cell) {
    const auto& raw = cell.raw();
    AbsorbingWalkGraph g;
    g.states = raw.vertices;
    g.absorbing.assign(g.states.size(), 0);
    g.absorbing[cell.underline()] = 1;
    g.absorbing[cell.overline()] = 1;
    g.out.resize(g.states.size());
    for (const auto& e : raw.edges) {
        const int from = cell.index_of(e.from);
        if (g.absorbing[from]) continue;
        g.out[from].emplace_back(cell.index_of(e.to), e.rate);
    }
    return g;
}

CycleOutcome OneCellSystem::outcome(const FirstJump& jump, int absorbed_state) const {
    if (absorbed_state == overline_copy)
        return jump.forward ? CycleOutcome::AdvancePlus : CycleOutcome::ReturnToStart;
    if (absorbed_state == underline_copy)
        return jump.forward ? CycleOutcome::ReturnToStart : CycleOutcome::AdvanceMinus;
    throw Error("outcome: state " + graph.states.at(absorbed_state) + " is not a marked copy");
}

OneCellSystem build_one_cell(const ValidatedCell& cell) {
    OneCellSystem sys;
    sys.graph = build_one_cell_graph(cell);
    sys.underline_copy = cell.underline();
    sys.overline_copy = cell.overline();
    for (const auto& e : cell.raw().edges) {
        const int from = cell.index_of(e.from);
        const int to = cell.index_of(e.to);
        if (from == cell.underline())
            sys.jumps.push_back({to, e.rate, true});
        else if (from == cell.overline())
            sys.jumps.push_back({to, e.rate, false});
    }
    for (const auto& j : sys.jumps) sys.exit_rate += j.rate;
    return sys;
}

}  // namespace quasi1d
