#include "quasi1d/reduction.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "quasi1d/errors.hpp"

namespace quasi1d {

// ------------------------------------------------------ chain functionals

double gamma(const LinearChain& chain) {
    const int interior = chain.segments() - 1;
    double t = 0.0;
    for (int i = interior - 1; i >= 0; --i)
        t = (chain.rate_back(i) / chain.rate_fwd(i)) * (1.0 + t);
    return 1.0 + t;
}

double chain_cost(const LinearChain& chain) {
    const int interior = chain.segments() - 1;
    double c = 0.0, t = 0.0;
    for (int k = interior - 1; k >= 0; --k) {
        const double rho_next =
            k + 1 < interior ? chain.rate_back(k + 1) / chain.rate_fwd(k + 1) : 0.0;
        t = 1.0 + rho_next * t;
        c += t / chain.rate_fwd(k);
    }
    return c;
}

LinearChain reversed(const LinearChain& chain) {
    LinearChain rev;
    rev.states.assign(chain.states.rbegin(), chain.states.rend());
    rev.rate_fwd = chain.rate_back.reverse();
    rev.rate_back = chain.rate_fwd.reverse();
    return rev;
}

// --------------------------------------------------------- chain finding

namespace {

struct Adjacency {
    // Sorted target / source index lists per state (deterministic order).
    std::vector<std::vector<int>> outs, ins;
};

Adjacency adjacency_of(const AbsorbingWalkGraph& g) {
    const int n = g.state_count();
    Adjacency adj;
    adj.outs.resize(n);
    adj.ins.resize(n);
    for (int i = 0; i < n; ++i)
        for (const auto& [j, r] : g.out[i]) {
            (void)r;
            adj.outs[i].push_back(j);
            adj.ins[j].push_back(i);
        }
    for (auto& v : adj.outs) std::sort(v.begin(), v.end());
    for (auto& v : adj.ins) std::sort(v.begin(), v.end());
    return adj;
}

// A state may sit in the interior of a chain iff it is unprotected,
// non-absorbing, jumps to exactly two distinct neighbors, and receives
// edges from no one else (missing in-edges are fine; they occur next to
// absorbing endpoints, which send nothing back).
bool interior_capable(int v, const Adjacency& adj, const AbsorbingWalkGraph& g,
                      const std::vector<char>& is_protected) {
    if (g.absorbing[v] || is_protected[v]) return false;
    const auto& o = adj.outs[v];
    if (o.size() != 2 || o[0] == o[1]) return false;
    for (int u : adj.ins[v])
        if (u != o[0] && u != o[1]) return false;
    return true;
}

}  // namespace

ChainFamily find_linear_chains(const AbsorbingWalkGraph& g,
                               const std::vector<int>& protected_states) {
    const int n = g.state_count();
    std::vector<char> is_protected(n, 0);
    for (int p : protected_states) is_protected.at(p) = 1;

    const Adjacency adj = adjacency_of(g);
    std::vector<char> eligible(n, 0);
    for (int v = 0; v < n; ++v)
        eligible[v] = interior_capable(v, adj, g, is_protected) ? 1 : 0;

    ChainFamily family;
    std::vector<char> consumed(n, 0);
    for (int seed = 0; seed < n; ++seed) {
        if (!eligible[seed] || consumed[seed]) continue;

        // Grow the maximal path whose interior runs through `seed`. Returns
        // true when the path closes into a loop (endpoints join up), which
        // ends all extension.
        std::vector<int> path = {adj.outs[seed][0], seed, adj.outs[seed][1]};
        auto extend = [&](bool at_back) -> bool {
            while (true) {
                const int end = at_back ? path.back() : path.front();
                const int prev = at_back ? path[path.size() - 2] : path[1];
                if (!eligible[end]) return false;
                const auto& o = adj.outs[end];
                if (o[0] != prev && o[1] != prev) return false;  // no continuation
                const int next = o[0] == prev ? o[1] : o[0];
                const bool revisit =
                    std::find(path.begin(), path.end(), next) != path.end();
                if (revisit && next != (at_back ? path.front() : path.back()))
                    throw Error("find_linear_chains: eligible states form a cycle");
                if (at_back)
                    path.push_back(next);
                else
                    path.insert(path.begin(), next);
                if (revisit) return true;  // loop closed through both endpoints
            }
        };
        if (!extend(true)) extend(false);

        for (std::size_t i = 1; i + 1 < path.size(); ++i) consumed[path[i]] = 1;
        if (path.front() == path.back()) continue;  // removal would self-loop

        // Canonical orientation: lexicographically smaller endpoint pair.
        const std::string& a = g.states[path.front()];
        const std::string& b = g.states[path.back()];
        if (std::make_pair(b, a) < std::make_pair(a, b))
            std::reverse(path.begin(), path.end());

        LinearChain chain;
        chain.states = path;
        const int interior = static_cast<int>(path.size()) - 2;
        chain.rate_fwd.resize(interior);
        chain.rate_back.resize(interior);
        for (int i = 1; i <= interior; ++i) {
            chain.rate_fwd(i - 1) = g.rate(path[i], path[i + 1]);
            chain.rate_back(i - 1) = g.rate(path[i], path[i - 1]);
        }
        family.chains.push_back(std::move(chain));
    }
    return family;
}

// -------------------------------------------------------------- removal

namespace {

void validate_family(const AbsorbingWalkGraph& g, const ChainFamily& family) {
    const Adjacency adj = adjacency_of(g);
    const std::vector<char> none(g.state_count(), 0);
    std::set<int> interiors;
    std::set<std::vector<int>> paths;

    for (const auto& chain : family.chains) {
        const int n = chain.segments();
        if (n < 2) throw InvalidFamilyError("chain has fewer than two segments");
        if (chain.front() == chain.back())
            throw InvalidFamilyError("chain endpoints coincide (would create a self-loop)");
        if (chain.rate_fwd.size() != n - 1 || chain.rate_back.size() != n - 1)
            throw InvalidFamilyError("chain rate arrays do not match its length");
        for (int s : chain.states)
            if (s < 0 || s >= g.state_count())
                throw InvalidFamilyError("chain names a state outside the graph");

        std::vector<int> rev_states(chain.states.rbegin(), chain.states.rend());
        if (paths.count(rev_states))
            throw InvalidFamilyError("family contains a chain together with its reversal");
        if (!paths.insert(chain.states).second)
            throw InvalidFamilyError("family contains a duplicate chain");

        for (int i = 1; i < n; ++i) {
            const int v = chain.states[i];
            if (!interior_capable(v, adj, g, none))
                throw InvalidFamilyError("state '" + g.states[v] +
                                         "' cannot be a chain interior");
            const int prev = chain.states[i - 1], next = chain.states[i + 1];
            if ((adj.outs[v][0] != std::min(prev, next)) ||
                (adj.outs[v][1] != std::max(prev, next)))
                throw InvalidFamilyError("chain interior '" + g.states[v] +
                                         "' does not join its chain neighbors");
            if (chain.rate_fwd(i - 1) != g.rate(v, next) ||
                chain.rate_back(i - 1) != g.rate(v, prev))
                throw InvalidFamilyError("chain rates disagree with the graph");
            if (!interiors.insert(v).second)
                throw InvalidFamilyError("state '" + g.states[v] +
                                         "' is interior to two chains");
        }
    }
    for (const auto& chain : family.chains)
        for (int e : {chain.front(), chain.back()})
            if (interiors.count(e))
                throw InvalidFamilyError("state '" + g.states[e] +
                                         "' is both endpoint and interior");
}

}  // namespace

ReducedGraph reduce_graph(const AbsorbingWalkGraph& g, const ChainFamily& family) {
    validate_family(g, family);
    const int n = g.state_count();

    std::vector<char> removed(n, 0);
    for (const auto& chain : family.chains)
        for (int i = 1; i < chain.segments(); ++i) removed[chain.states[i]] = 1;

    ReducedGraph rg;
    rg.to_reduced.assign(n, -1);
    for (int i = 0; i < n; ++i) {
        if (removed[i]) continue;
        rg.to_reduced[i] = static_cast<int>(rg.kept.size());
        rg.kept.push_back(i);
        rg.graph.states.push_back(g.states[i]);
        rg.graph.absorbing.push_back(g.absorbing[i]);
    }
    const int m = static_cast<int>(rg.kept.size());
    rg.graph.out.resize(m);
    rg.graph.start = g.start >= 0 ? rg.to_reduced[g.start] : -1;
    rg.source = Eigen::VectorXd::Zero(m);

    // Host edges between survivors carry over unchanged (every chain edge
    // touches a removed interior, so none slips through); each chain
    // orientation contributes an effective endpoint-to-endpoint rate and an
    // expected-time source at the endpoint it exits, provided the entry
    // edge exists (it does not out of absorbing endpoints).
    std::map<std::pair<int, int>, double> rate_acc;  // reduced (from,to) -> rate
    for (int i = 0; i < n; ++i) {
        if (removed[i]) continue;
        for (const auto& [j, r] : g.out[i])
            if (!removed[j]) rate_acc[{rg.to_reduced[i], rg.to_reduced[j]}] += r;
    }
    for (const auto& chain : family.chains) {
        for (const LinearChain& c : {chain, reversed(chain)}) {
            const double entry = g.rate(c.front(), c.states[1]);
            if (entry == 0.0) continue;
            const double G = gamma(c);
            rate_acc[{rg.to_reduced[c.front()], rg.to_reduced[c.back()]}] += entry / G;
            rg.source(rg.to_reduced[c.front()]) += entry * chain_cost(c) / G;
        }
    }
    for (const auto& [edge, r] : rate_acc) rg.graph.out[edge.first].emplace_back(edge.second, r);
    return rg;
}

HittingSolution reduced_hitting(const ReducedGraph& rg, const std::vector<int>& A,
                                const std::vector<int>& D) {
    return hitting_probability(rg.graph, A, D);
}

HittingSolution reduced_expected_time(const ReducedGraph& rg, const std::vector<int>& A) {
    if (A.empty()) throw Error("reduced_expected_time: target set is empty");
    for (int a : A)
        if (a < 0 || a >= rg.graph.state_count() || !rg.graph.absorbing[a])
            throw Error("reduced_expected_time: target must contain absorbing states only");
    HittingSolution sol;
    sol.target = A;
    const Eigen::VectorXd rhs = Eigen::VectorXd::Ones(rg.graph.state_count()) + rg.source;
    sol.values = solve_generator_system(rg.graph, Eigen::VectorXd::Zero(rg.graph.state_count()),
                                        rhs, &sol.residual);
    return sol;
}

}  // namespace quasi1d
