// quasi1d command-line tool: validate cells, compute exact velocity and
// diffusion by three pipelines, reduce chains, evaluate closed-form models,
// run Monte Carlo estimation, and cross-compare everything.
//
// Exit codes: 0 success, 1 validation/input error, 2 solver failure,
// 3 agreement failure (compare). Results go to stdout, diagnostics to
// stderr; every subcommand supports --json.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "quasi1d/cell.hpp"
#include "quasi1d/errors.hpp"
#include "quasi1d/kinetics.hpp"
#include "quasi1d/mcsim.hpp"
#include "quasi1d/models.hpp"
#include "quasi1d/reduction.hpp"
#include "quasi1d/walk.hpp"

using nlohmann::json;
using namespace quasi1d;

#ifndef QUASI1D_VERSION
#define QUASI1D_VERSION "0.1.0"
#endif

namespace {

// ------------------------------------------------------------- plumbing

std::string fnv1a_digest(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

json make_report(const std::string& command, const std::string& digest, double wall,
                 json results) {
    return json{{"command", command},
                {"input_digest", digest},
                {"tool_version", QUASI1D_VERSION},
                {"wall_time_seconds", wall},
                {"results", std::move(results)}};
}

void emit_report(const json& report, bool as_json) {
    if (as_json) std::cout << report.dump(2) << "\n";
}

double max_rate(const FundamentalCell& cell) {
    double r = 0.0;
    for (const auto& e : cell.edges) r = std::max(r, e.rate);
    return r;
}

// -------------------------------------------------- topology recognition

// Rate of edge u -> v in the cell, 0 when absent.
double cell_rate(const ValidatedCell& cell, int u, int v) {
    for (const auto& [j, r] : cell.out(u))
        if (j == v) return r;
    return 0.0;
}

// Walk a path from `from`, never stepping back, until `to`; empty on any
// branching, revisit, or dead end.
std::vector<int> trace_path(const ValidatedCell& cell, int from, int first, int to) {
    std::vector<int> seq = {from, first};
    while (seq.back() != to) {
        const int cur = seq.back(), prev = seq[seq.size() - 2];
        int next = -1, n_fwd = 0;
        for (const auto& [j, r] : cell.out(cur)) {
            (void)r;
            if (j != prev) {
                next = j;
                ++n_fwd;
            }
        }
        if (n_fwd != 1) return {};
        for (int s : seq)
            if (s == next) return {};
        seq.push_back(next);
        if (seq.size() > static_cast<std::size_t>(cell.vertex_count())) return {};
    }
    return seq;
}

// A cell is N-periodic-linear iff its vertices form one path from the
// underline to the overline carrying forward and backward rates on every
// segment and nothing else.
std::optional<PeriodicLinearModel> detect_periodic(const ValidatedCell& cell) {
    if (cell.out(cell.underline()).size() != 1) return std::nullopt;
    const int first = cell.out(cell.underline())[0].first;
    const std::vector<int> seq = trace_path(cell, cell.underline(), first, cell.overline());
    if (seq.empty() || static_cast<int>(seq.size()) != cell.vertex_count())
        return std::nullopt;
    const int N = static_cast<int>(seq.size()) - 1;
    if (cell.raw().edges.size() != static_cast<std::size_t>(2 * N)) return std::nullopt;

    Eigen::ArrayXd xp(N), xm(N);
    for (int k = 0; k < N; ++k) {
        xp(k) = cell_rate(cell, seq[k], seq[k + 1]);
        xm((k + 1) % N) = cell_rate(cell, seq[k + 1], seq[k]);
        if (xp(k) == 0.0 || xm((k + 1) % N) == 0.0) return std::nullopt;
    }
    return PeriodicLinearModel(xp, xm);
}

// A cell is parallel-chain iff exactly two vertex-disjoint bidirectional
// paths of length >= 2 join the marked vertices and exhaust the cell.
std::optional<ParallelChainModel> detect_parallel(const ValidatedCell& cell) {
    const int under = cell.underline(), over = cell.overline();
    if (cell.out(under).size() != 2) return std::nullopt;
    const int head1 = cell.out(under)[0].first;
    const int head2 = cell.out(under)[1].first;
    const std::vector<int> seq1 = trace_path(cell, under, head1, over);
    const std::vector<int> seq2 = trace_path(cell, under, head2, over);
    if (seq1.size() < 3 || seq2.size() < 3) return std::nullopt;
    const int N1 = static_cast<int>(seq1.size()) - 1;
    const int N2 = static_cast<int>(seq2.size()) - 1;
    if (2 + (N1 - 1) + (N2 - 1) != cell.vertex_count()) return std::nullopt;
    for (int i = 1; i < N1; ++i)
        for (int j = 1; j < N2; ++j)
            if (seq1[i] == seq2[j]) return std::nullopt;
    if (cell.raw().edges.size() != static_cast<std::size_t>(2 * (N1 + N2)))
        return std::nullopt;

    auto extract = [&](const std::vector<int>& seq, int N, Eigen::ArrayXd& p,
                       Eigen::ArrayXd& m) {
        p.resize(N);
        m.resize(N);
        p(0) = cell_rate(cell, under, seq[1]);
        m(0) = cell_rate(cell, over, seq[N - 1]);
        for (int k = 1; k < N; ++k) {
            p(k) = cell_rate(cell, seq[k], seq[k + 1]);
            m(k) = cell_rate(cell, seq[k], seq[k - 1]);
        }
        return (p > 0.0).all() && (m > 0.0).all();
    };
    Eigen::ArrayXd up, um, dp, dm;
    if (!extract(seq1, N1, up, um) || !extract(seq2, N2, dp, dm)) return std::nullopt;
    return ParallelChainModel(up, um, dp, dm);
}

// ------------------------------------------------------------ subcommands

struct CommonArgs {
    std::string cell_path;
    bool as_json = false;
    double cell_length = 1.0;
};

int cmd_validate(const CommonArgs& args) {
    Timer timer;
    const std::string text = read_file(args.cell_path);
    const FundamentalCell cell = cell_from_json_text(text);
    const auto bad = check_cell(cell);

    json violations = json::array();
    for (const auto& v : bad)
        violations.push_back({{"kind", to_string(v.kind)}, {"detail", v.detail}});
    json results = {{"valid", bad.empty()}, {"violations", violations}};
    const json report =
        make_report("validate", fnv1a_digest(text), timer.seconds(), results);
    emit_report(report, args.as_json);
    if (!args.as_json) {
        if (bad.empty()) {
            std::cout << args.cell_path << ": valid cell (" << cell.vertices.size()
                      << " vertices, " << cell.edges.size() << " edges)\n";
        } else {
            std::cout << args.cell_path << ": INVALID\n";
            for (const auto& v : bad)
                std::cout << "  " << to_string(v.kind) << ": " << v.detail << "\n";
        }
    }
    return bad.empty() ? 0 : 1;
}

int cmd_compute(const CommonArgs& args, const std::string& method) {
    Timer timer;
    const std::string text = read_file(args.cell_path);
    const ValidatedCell cell = ValidatedCell::validate(cell_from_json_text(text));
    const double d = args.cell_length, d2 = d * d;

    json results = {{"method", method}, {"cell_length", d}};
    if (method == "single-cell" || method == "all") {
        const SkeletonStats s = single_cell_stats(cell);
        results["single_cell"] = {{"v", velocity_from(s) * d},
                                  {"sigma_sq", diffusion_from(s) * d2},
                                  {"intermediates",
                                   {{"p_tilde", s.p_tilde},
                                    {"q_tilde", s.q_tilde},
                                    {"e_j1", s.e_j1},
                                    {"e_j1_sq", s.e_j1_sq},
                                    {"e_j1_plus", s.e_j1_plus},
                                    {"e_j1_minus", s.e_j1_minus}}}};
    }
    if (method == "two-cell" || method == "all") {
        const CycleStats s = two_cell_stats(cell);
        results["two_cell"] = {{"v", velocity_from(s) * d},
                               {"sigma_sq", diffusion_from(s) * d2},
                               {"intermediates",
                                {{"p_plus", s.p_plus},
                                 {"p_minus", s.p_minus},
                                 {"e_s", s.e_s},
                                 {"e_s_sq", s.e_s_sq},
                                 {"e_s_plus", s.e_s_plus},
                                 {"e_s_minus", s.e_s_minus}}}};
    }
    if (method == "reduced" || method == "all") {
        const ReducedVelocityResult r = reduced_velocity(cell);
        results["reduced"] = {{"v", r.v * d},
                              {"intermediates",
                               {{"hit_plus_probability", r.phi0},
                                {"expected_cycle_time", r.psi0},
                                {"chains_removed", r.chains_removed},
                                {"reduced_states", r.reduced_states}}}};
    }
    const json report = make_report("compute", fnv1a_digest(text), timer.seconds(), results);
    emit_report(report, args.as_json);
    if (!args.as_json) {
        for (const char* key : {"single_cell", "two_cell", "reduced"}) {
            if (!results.contains(key)) continue;
            std::cout << key << ": v = " << fmt(results[key]["v"].get<double>());
            if (results[key].contains("sigma_sq"))
                std::cout << ", sigma^2 = " << fmt(results[key]["sigma_sq"].get<double>());
            std::cout << "\n";
        }
    }
    return 0;
}

int cmd_reduce(const CommonArgs& args, const std::string& emit_path) {
    Timer timer;
    const std::string text = read_file(args.cell_path);
    const ValidatedCell cell = ValidatedCell::validate(cell_from_json_text(text));

    const AbsorbingWalkGraph g = build_two_cell(cell);
    const std::vector<int> protect = {g.index_of(star_name(-1)), g.start,
                                      g.index_of(star_name(1))};
    const ChainFamily family = find_linear_chains(g, protect);
    const ReducedGraph rg = reduce_graph(g, family);
    const ReducedVelocityResult rv = reduced_velocity(cell);

    json chains = json::array();
    for (const auto& c : family.chains) {
        json names = json::array();
        for (int s : c.states) names.push_back(g.states[s]);
        chains.push_back({{"states", names},
                          {"gamma", gamma(c)},
                          {"cost", chain_cost(c)},
                          {"gamma_reversed", gamma(reversed(c))},
                          {"cost_reversed", chain_cost(reversed(c))}});
    }
    json results = {{"host_states", g.state_count()},
                    {"reduced_states", rg.graph.state_count()},
                    {"chains_removed", static_cast<int>(family.chains.size())},
                    {"chains", chains},
                    {"v", rv.v * args.cell_length},
                    {"hit_plus_probability", rv.phi0},
                    {"expected_cycle_time", rv.psi0}};

    if (!emit_path.empty()) {
        json out = {{"states", rg.graph.states},
                    {"start", rg.graph.start >= 0 ? json(rg.graph.states[rg.graph.start])
                                                  : json(nullptr)},
                    {"absorbing", json::array()},
                    {"edges", json::array()},
                    {"time_source", json::object()}};
        for (int i = 0; i < rg.graph.state_count(); ++i) {
            if (rg.graph.absorbing[i]) out["absorbing"].push_back(rg.graph.states[i]);
            if (rg.source(i) != 0.0) out["time_source"][rg.graph.states[i]] = rg.source(i);
            for (const auto& [j, r] : rg.graph.out[i])
                out["edges"].push_back({{"from", rg.graph.states[i]},
                                        {"to", rg.graph.states[j]},
                                        {"rate", r}});
        }
        std::ofstream f(emit_path);
        if (!f) throw Error("cannot write: " + emit_path);
        f << out.dump(2) << "\n";
        results["emitted"] = emit_path;
    }

    const json report = make_report("reduce", fnv1a_digest(text), timer.seconds(), results);
    emit_report(report, args.as_json);
    if (!args.as_json) {
        std::cout << "two-cell graph: " << g.state_count() << " states; reduced: "
                  << rg.graph.state_count() << " states (" << family.chains.size()
                  << " chains removed)\n";
        for (const auto& c : chains)
            std::cout << "  chain " << c["states"].dump()
                      << "  gamma = " << fmt(c["gamma"].get<double>())
                      << "  cost = " << fmt(c["cost"].get<double>()) << "\n";
        std::cout << "v = " << fmt(results["v"].get<double>()) << "\n";
        if (!emit_path.empty()) std::cout << "reduced graph written to " << emit_path << "\n";
    }
    return 0;
}

int model_report(const std::string& family, const FundamentalCell& cell, double v,
                 double sigma_sq, json extra, const CommonArgs& args,
                 const std::string& emit_path) {
    Timer timer;
    const double d = args.cell_length;
    json results = {{"family", family},
                    {"v", v * d},
                    {"sigma_sq", sigma_sq * d * d},
                    {"cell_length", d}};
    results.update(extra);
    const std::string cell_text = cell_to_json_text(cell);
    if (!emit_path.empty()) {
        save_cell(cell, emit_path);
        results["emitted"] = emit_path;
    }
    const json report = make_report("model", fnv1a_digest(cell_text), timer.seconds(),
                                    results);
    emit_report(report, args.as_json);
    if (!args.as_json) {
        std::cout << family << " model: v = " << fmt(results["v"].get<double>())
                  << ", sigma^2 = " << fmt(results["sigma_sq"].get<double>()) << "\n";
        for (auto& [k, val] : extra.items()) std::cout << "  " << k << " = " << val << "\n";
        if (!emit_path.empty()) std::cout << "cell written to " << emit_path << "\n";
    }
    return 0;
}

int cmd_model_lumped(double alpha, double beta, const CommonArgs& args,
                     const std::string& emit_path) {
    Timer timer;
    Eigen::ArrayXd p(2), m(2);
    p << alpha, alpha;
    m << beta, beta;
    const ParallelChainModel par(p, m, p, m);
    const PeriodicLinearModel lumped = lump_identical(alpha, beta);
    const double sig_par = parallel_diffusion(par);
    const double sig_lump = periodic_diffusion(lumped);
    const double v_par = parallel_velocity(par);
    const double published = published_diffusion_reference(alpha, beta);

    json results = {{"family", "lumped"},
                    {"alpha", alpha},
                    {"beta", beta},
                    {"v", v_par},
                    {"sigma_sq", sig_par},
                    {"sigma_sq_lumped", sig_lump},
                    {"half_sigma_sq", 0.5 * sig_par},
                    {"published_reference_D", published}};
    const FundamentalCell cell = generate_cell(par);
    if (!emit_path.empty()) {
        save_cell(cell, emit_path);
        results["emitted"] = emit_path;
    }
    const json report = make_report("model", fnv1a_digest(cell_to_json_text(cell)),
                                    timer.seconds(), results);
    emit_report(report, args.as_json);
    if (!args.as_json) {
        std::cout << "identical-chain parallel model (alpha = " << fmt(alpha)
                  << ", beta = " << fmt(beta) << ")\n"
                  << "  v = " << fmt(v_par) << "\n"
                  << "  sigma^2 (parallel closed form) = " << fmt(sig_par) << "\n"
                  << "  sigma^2 (lumped 2-periodic)    = " << fmt(sig_lump) << "\n"
                  << "  sigma^2 / 2                    = " << fmt(0.5 * sig_par) << "\n"
                  << "  previously published D         = " << fmt(published) << "\n";
        if (!emit_path.empty()) std::cout << "cell written to " << emit_path << "\n";
    }
    return 0;
}

struct McArgs {
    std::size_t cycles = 100000;
    std::size_t replicas = 1000;
    std::uint64_t seed = 12345;
    double clt_t = 0.0;  // 0 = skip
};

json clt_to_json(const CltReport& r) {
    return {{"t", r.t},
            {"n_replicas", r.n_replicas},
            {"mean_over_t", r.mean_over_t},
            {"var_over_t", r.var_over_t},
            {"v_expected", r.v_expected},
            {"sigma_sq_expected", r.sigma_sq_expected},
            {"anderson_darling", r.anderson_darling},
            {"anderson_darling_retried", r.anderson_darling_retried},
            {"normality_ok", r.normality_ok}};
}

int cmd_simulate(const CommonArgs& args, const McArgs& mc) {
    Timer timer;
    const std::string text = read_file(args.cell_path);
    const ValidatedCell cell = ValidatedCell::validate(cell_from_json_text(text));
    const double d = args.cell_length, d2 = d * d;

    const CycleStats exact = two_cell_stats(cell);
    const double v_ex = velocity_from(exact), s_ex = diffusion_from(exact);

    const auto samples = simulate_cycles(cell, mc.cycles, mc.seed);
    const VelocityDiffusionEstimate est = estimate_v_sigma(samples, mc.seed);
    const double zv = est.v.std_error > 0.0 ? (est.v.point - v_ex) / est.v.std_error : 0.0;
    const double zs = est.sigma_sq.std_error > 0.0
                          ? (est.sigma_sq.point - s_ex) / est.sigma_sq.std_error
                          : 0.0;

    json results = {{"n_cycles", est.n_samples},
                    {"seed", mc.seed},
                    {"v_hat", est.v.point * d},
                    {"se_v", est.v.std_error * d},
                    {"sigma_sq_hat", est.sigma_sq.point * d2},
                    {"se_sigma", est.sigma_sq.std_error * d2},
                    {"exact_v", v_ex * d},
                    {"exact_sigma_sq", s_ex * d2},
                    {"z_scores", {{"v", zv}, {"sigma_sq", zs}}}};
    if (mc.clt_t > 0.0) {
        const CumulativeProcessSpec spec = CumulativeProcessSpec::from_cell(cell);
        CltReport rep = clt_check(spec, mc.clt_t, mc.replicas, mc.seed, v_ex, s_ex);
        rep.mean_over_t *= d;
        rep.var_over_t *= d2;
        rep.v_expected *= d;
        rep.sigma_sq_expected *= d2;
        results["clt_report"] = clt_to_json(rep);
    }
    const json report = make_report("simulate", fnv1a_digest(text), timer.seconds(), results);
    emit_report(report, args.as_json);
    if (!args.as_json) {
        std::cout << "renewal-reward over " << est.n_samples << " cycles (seed " << mc.seed
                  << ")\n"
                  << "  v       = " << fmt(results["v_hat"].get<double>()) << " +/- "
                  << fmt(results["se_v"].get<double>())
                  << "   (exact " << fmt(results["exact_v"].get<double>()) << ", z = "
                  << fmt(zv) << ")\n"
                  << "  sigma^2 = " << fmt(results["sigma_sq_hat"].get<double>()) << " +/- "
                  << fmt(results["se_sigma"].get<double>())
                  << "   (exact " << fmt(results["exact_sigma_sq"].get<double>())
                  << ", z = " << fmt(zs) << ")\n";
        if (results.contains("clt_report")) {
            const json& c = results["clt_report"];
            std::cout << "  time-changed process at t = " << fmt(c["t"].get<double>())
                      << " over " << c["n_replicas"].get<std::size_t>() << " replicas:\n"
                      << "    mean/t = " << fmt(c["mean_over_t"].get<double>())
                      << "  (v = " << fmt(c["v_expected"].get<double>()) << ")\n"
                      << "    var/t  = " << fmt(c["var_over_t"].get<double>())
                      << "  (sigma^2 = " << fmt(c["sigma_sq_expected"].get<double>()) << ")\n"
                      << "    Anderson-Darling A^2 = "
                      << fmt(c["anderson_darling"].get<double>())
                      << (c["normality_ok"].get<bool>() ? "  (normality not rejected"
                                                        : "  (normality REJECTED")
                      << (c["anderson_darling_retried"].get<bool>() ? ", after one retry)"
                                                                    : ")")
                      << "\n";
        }
    }
    return 0;
}

int cmd_compare(const CommonArgs& args, const McArgs& mc) {
    Timer timer;
    const std::string text = read_file(args.cell_path);
    const ValidatedCell cell = ValidatedCell::validate(cell_from_json_text(text));
    const double d = args.cell_length, d2 = d * d;

    const SkeletonStats s1 = single_cell_stats(cell);
    const CycleStats s2 = two_cell_stats(cell);
    const ReducedVelocityResult rv = reduced_velocity(cell);
    std::vector<double> v_exact = {velocity_from(s1), velocity_from(s2), rv.v};
    std::vector<double> sig_exact = {diffusion_from(s1), diffusion_from(s2)};

    std::string family = "none";
    std::optional<double> v_closed, sig_closed;
    if (auto per = detect_periodic(cell)) {
        family = "periodic";
        v_closed = periodic_velocity(*per);
        sig_closed = periodic_diffusion(*per);
    } else if (auto par = detect_parallel(cell)) {
        family = "parallel";
        v_closed = parallel_velocity(*par);
        sig_closed = parallel_diffusion(*par);
    }
    if (v_closed) {
        v_exact.push_back(*v_closed);
        sig_exact.push_back(*sig_closed);
    }

    const auto samples = simulate_cycles(cell, mc.cycles, mc.seed);
    const VelocityDiffusionEstimate est = estimate_v_sigma(samples, mc.seed);

    // Exact columns must agree to 1e-9 relative; the scale floor keeps the
    // check meaningful when v is exactly zero (symmetric rates).
    const double floor = std::max(1.0, max_rate(cell.raw()));
    double max_rel = 0.0;
    auto spread = [&](const std::vector<double>& xs) {
        for (std::size_t i = 0; i < xs.size(); ++i)
            for (std::size_t j = i + 1; j < xs.size(); ++j) {
                const double denom =
                    std::max({std::abs(xs[i]), std::abs(xs[j]), floor * 1e-3});
                max_rel = std::max(max_rel, std::abs(xs[i] - xs[j]) / denom);
            }
    };
    spread(v_exact);
    spread(sig_exact);
    const bool exact_pass = max_rel <= 1e-9;
    const double zv = est.v.std_error > 0.0
                          ? (est.v.point - velocity_from(s2)) / est.v.std_error
                          : 0.0;
    const double zs = est.sigma_sq.std_error > 0.0
                          ? (est.sigma_sq.point - diffusion_from(s2)) / est.sigma_sq.std_error
                          : 0.0;
    const bool mc_pass = std::abs(zv) <= 3.0 && std::abs(zs) <= 3.0;
    const bool pass = exact_pass && mc_pass;

    json results = {
        {"v",
         {{"single_cell", velocity_from(s1) * d},
          {"two_cell", velocity_from(s2) * d},
          {"reduced", rv.v * d},
          {"monte_carlo", est.v.point * d},
          {"monte_carlo_se", est.v.std_error * d}}},
        {"sigma_sq",
         {{"single_cell", diffusion_from(s1) * d2},
          {"two_cell", diffusion_from(s2) * d2},
          {"monte_carlo", est.sigma_sq.point * d2},
          {"monte_carlo_se", est.sigma_sq.std_error * d2}}},
        {"closed_form_family", family},
        {"n_cycles", est.n_samples},
        {"seed", mc.seed},
        {"agreement",
         {{"pass", pass},
          {"exact_pass", exact_pass},
          {"mc_pass", mc_pass},
          {"max_rel_exact", max_rel},
          {"z_v", zv},
          {"z_sigma", zs}}}};
    if (v_closed) {
        results["v"]["closed_form"] = *v_closed * d;
        results["sigma_sq"]["closed_form"] = *sig_closed * d2;
    }

    const json report = make_report("compare", fnv1a_digest(text), timer.seconds(), results);
    emit_report(report, args.as_json);
    if (!args.as_json) {
        auto row = [&](const char* name, const json& r, bool has_reduced) {
            std::cout << name << "\n"
                      << "  single-cell:  " << fmt(r["single_cell"].get<double>()) << "\n"
                      << "  two-cell:     " << fmt(r["two_cell"].get<double>()) << "\n";
            if (has_reduced)
                std::cout << "  reduced:      " << fmt(r["reduced"].get<double>()) << "\n";
            if (r.contains("closed_form"))
                std::cout << "  closed-form:  " << fmt(r["closed_form"].get<double>())
                          << "  (" << family << ")\n";
            std::cout << "  monte-carlo:  " << fmt(r["monte_carlo"].get<double>()) << " +/- "
                      << fmt(r["monte_carlo_se"].get<double>()) << "\n";
        };
        row("v", results["v"], true);
        row("sigma^2", results["sigma_sq"], false);
        std::cout << "agreement: " << (pass ? "PASS" : "FAIL")
                  << "  (max exact rel dev " << fmt(max_rel) << "; |z_v| = " << fmt(std::abs(zv))
                  << ", |z_sigma| = " << fmt(std::abs(zs)) << ")\n";
    }
    return pass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"velocity and diffusion of periodic quasi-1d random walks"};
    app.require_subcommand(1);
    app.set_version_flag("--version", QUASI1D_VERSION);

    CommonArgs c_validate, c_compute, c_reduce, c_model, c_simulate, c_compare;
    McArgs mc_simulate, mc_compare;
    std::string method = "all";
    std::string emit_reduce, emit_periodic, emit_parallel, emit_lumped;
    std::vector<double> xi_plus, xi_minus, up_plus, up_minus, down_plus, down_minus;
    double alpha = 1.0, beta = 1.0;

    auto* validate = app.add_subcommand("validate", "check a cell file");
    validate->add_option("cell", c_validate.cell_path, "cell JSON file")->required();
    validate->add_flag("--json", c_validate.as_json, "machine-readable report");

    auto* compute = app.add_subcommand("compute", "exact v and sigma^2");
    compute->add_option("cell", c_compute.cell_path, "cell JSON file")->required();
    compute->add_option("--method", method, "single-cell | two-cell | reduced | all")
        ->check(CLI::IsMember({"single-cell", "two-cell", "reduced", "all"}));
    compute->add_option("--cell-length", c_compute.cell_length,
                        "physical cell length (scales v by d, sigma^2 by d^2)")
        ->check(CLI::PositiveNumber);
    compute->add_flag("--json", c_compute.as_json, "machine-readable report");

    auto* reduce = app.add_subcommand("reduce", "remove linear chains from the two-cell graph");
    reduce->add_option("cell", c_reduce.cell_path, "cell JSON file")->required();
    reduce->add_option("--emit", emit_reduce, "write the reduced graph to this file");
    reduce->add_option("--cell-length", c_reduce.cell_length, "physical cell length")->check(CLI::PositiveNumber);
    reduce->add_flag("--json", c_reduce.as_json, "machine-readable report");

    auto* model = app.add_subcommand("model", "closed-form model evaluators");
    model->require_subcommand(1);
    auto* periodic = model->add_subcommand("periodic", "N-periodic nearest-neighbor chain");
    periodic->add_option("--xi-plus", xi_plus, "forward rates xi_0^+,...")
        ->required()
        ->delimiter(',');
    periodic->add_option("--xi-minus", xi_minus, "backward rates xi_0^-,...")
        ->required()
        ->delimiter(',');
    periodic->add_option("--emit", emit_periodic, "write the generated cell to this file");
    periodic->add_option("--cell-length", c_model.cell_length, "physical cell length")->check(CLI::PositiveNumber);
    periodic->add_flag("--json", c_model.as_json, "machine-readable report");
    auto* parallel = model->add_subcommand("parallel", "two parallel chains between stars");
    parallel->add_option("--up-plus", up_plus, "upper chain forward rates")
        ->required()
        ->delimiter(',');
    parallel->add_option("--up-minus", up_minus, "upper chain backward rates")
        ->required()
        ->delimiter(',');
    parallel->add_option("--down-plus", down_plus, "lower chain forward rates")
        ->required()
        ->delimiter(',');
    parallel->add_option("--down-minus", down_minus, "lower chain backward rates")
        ->required()
        ->delimiter(',');
    parallel->add_option("--emit", emit_parallel, "write the generated cell to this file");
    parallel->add_option("--cell-length", c_model.cell_length, "physical cell length")->check(CLI::PositiveNumber);
    parallel->add_flag("--json", c_model.as_json, "machine-readable report");
    auto* lumped = model->add_subcommand(
        "lumped", "identical parallel chains vs their 2-periodic lumping");
    lumped->add_option("--alpha", alpha, "forward rate")->required();
    lumped->add_option("--beta", beta, "backward rate")->required();
    lumped->add_option("--emit", emit_lumped, "write the generated cell to this file");
    lumped->add_flag("--json", c_model.as_json, "machine-readable report");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimation and CLT check");
    simulate->add_option("cell", c_simulate.cell_path, "cell JSON file")->required();
    simulate->add_option("--cycles", mc_simulate.cycles, "number of renewal cycles");
    simulate->add_option("--replicas", mc_simulate.replicas, "replicas for the CLT check");
    simulate->add_option("--seed", mc_simulate.seed, "random seed");
    simulate->add_option("--clt-t", mc_simulate.clt_t,
                         "terminal time for the time-changed process check");
    simulate->add_option("--cell-length", c_simulate.cell_length, "physical cell length")->check(CLI::PositiveNumber);
    simulate->add_flag("--json", c_simulate.as_json, "machine-readable report");

    auto* compare = app.add_subcommand("compare", "cross-check all pipelines on one cell");
    compare->add_option("cell", c_compare.cell_path, "cell JSON file")->required();
    compare->add_option("--cycles", mc_compare.cycles, "Monte Carlo cycles");
    compare->add_option("--seed", mc_compare.seed, "random seed");
    compare->add_option("--cell-length", c_compare.cell_length, "physical cell length")->check(CLI::PositiveNumber);
    compare->add_flag("--json", c_compare.as_json, "machine-readable report");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(validate)) return cmd_validate(c_validate);
        if (app.got_subcommand(compute)) return cmd_compute(c_compute, method);
        if (app.got_subcommand(reduce)) return cmd_reduce(c_reduce, emit_reduce);
        if (app.got_subcommand(model)) {
            if (model->got_subcommand(periodic)) {
                Eigen::ArrayXd xp = Eigen::Map<Eigen::ArrayXd>(xi_plus.data(), xi_plus.size());
                Eigen::ArrayXd xm =
                    Eigen::Map<Eigen::ArrayXd>(xi_minus.data(), xi_minus.size());
                const PeriodicLinearModel m(xp, xm);
                return model_report("periodic", generate_cell(m), periodic_velocity(m),
                                    periodic_diffusion(m),
                                    {{"N", m.N()},
                                     {"Delta", m.chain.Delta},
                                     {"Gamma", m.chain.Gamma()},
                                     {"sum_r", m.chain.sum_r}},
                                    c_model, emit_periodic);
            }
            if (model->got_subcommand(parallel)) {
                auto arr = [](std::vector<double>& v) {
                    return Eigen::ArrayXd(Eigen::Map<Eigen::ArrayXd>(v.data(), v.size()));
                };
                const ParallelChainModel m(arr(up_plus), arr(up_minus), arr(down_plus),
                                           arr(down_minus));
                return model_report("parallel", generate_cell(m), parallel_velocity(m),
                                    parallel_diffusion(m),
                                    {{"N1", m.N1()},
                                     {"N2", m.N2()},
                                     {"nu0", m.nu0},
                                     {"Delta1", m.upper.Delta},
                                     {"Delta2", m.lower.Delta},
                                     {"Gamma1", m.upper.Gamma()},
                                     {"Gamma2", m.lower.Gamma()}},
                                    c_model, emit_parallel);
            }
            return cmd_model_lumped(alpha, beta, c_model, emit_lumped);
        }
        if (app.got_subcommand(simulate)) return cmd_simulate(c_simulate, mc_simulate);
        if (app.got_subcommand(compare)) return cmd_compare(c_compare, mc_compare);
    } catch (const CellValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const SingularSystemError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 2;
    } catch (const ToleranceNotMetError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
