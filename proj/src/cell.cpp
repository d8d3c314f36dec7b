#include "quasi1d/cell.hpp"

#include <cmath>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>
#include <utility>

#include <json.hpp>

namespace quasi1d {

const char* to_string(CellViolation::Kind k) {
    switch (k) {
        case CellViolation::Kind::MarkedVertexMissing: return "MarkedVertexMissing";
        case CellViolation::Kind::UnderlineEqualsOverline: return "UnderlineEqualsOverline";
        case CellViolation::Kind::NonPositiveRate: return "NonPositiveRate";
        case CellViolation::Kind::NotStronglyConnected: return "NotStronglyConnected";
        case CellViolation::Kind::SelfLoop: return "SelfLoop";
        case CellViolation::Kind::DuplicateEdge: return "DuplicateEdge";
        case CellViolation::Kind::UnknownVertex: return "UnknownVertex";
        case CellViolation::Kind::DuplicateVertex: return "DuplicateVertex";
        case CellViolation::Kind::Empty: return "Empty";
    }
    return "?";
}

static std::string format_violations(const std::vector<CellViolation>& v) {
    std::ostringstream os;
    os << "invalid cell (" << v.size() << " violation" << (v.size() == 1 ? "" : "s") << "):";
    for (const auto& x : v) os << "\n  " << to_string(x.kind) << ": " << x.detail;
    return os.str();
}

CellValidationError::CellValidationError(std::vector<CellViolation> v)
    : Error(format_violations(v)), violations(std::move(v)) {}

// ----------------------------------------------------------- validation

std::vector<CellViolation> check_cell(const FundamentalCell& cell) {
    using K = CellViolation::Kind;
    std::vector<CellViolation> bad;

    if (cell.vertices.empty()) {
        bad.push_back({K::Empty, "cell has no vertices"});
        return bad;
    }

    std::unordered_map<std::string, int> index;
    for (const auto& name : cell.vertices) {
        auto [it, fresh] = index.emplace(name, static_cast<int>(index.size()));
        if (!fresh) bad.push_back({K::DuplicateVertex, "vertex '" + name + "' listed twice"});
    }

    for (const std::string* mark : {&cell.underline, &cell.overline}) {
        if (!index.count(*mark))
            bad.push_back({K::MarkedVertexMissing,
                           "marked vertex '" + *mark + "' is not in the vertex list"});
    }
    if (cell.underline == cell.overline)
        bad.push_back({K::UnderlineEqualsOverline,
                       "both marks name the same vertex '" + cell.underline + "'"});

    const int n = static_cast<int>(index.size());
    std::vector<std::vector<int>> fwd(n), rev(n);
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& e : cell.edges) {
        bool known = true;
        for (const std::string* end : {&e.from, &e.to}) {
            if (!index.count(*end)) {
                bad.push_back({K::UnknownVertex,
                               "edge (" + e.from + " -> " + e.to + ") uses unknown vertex '" +
                                   *end + "'"});
                known = false;
            }
        }
        if (e.from == e.to)
            bad.push_back({K::SelfLoop, "self-loop at vertex '" + e.from + "'"});
        if (!(e.rate > 0.0) || !std::isfinite(e.rate)) {
            std::ostringstream os;
            os << "edge (" << e.from << " -> " << e.to << ") has rate " << e.rate;
            bad.push_back({K::NonPositiveRate, os.str()});
        }
        if (!seen.insert({e.from, e.to}).second)
            bad.push_back({K::DuplicateEdge,
                           "edge (" + e.from + " -> " + e.to + ") appears more than once"});
        if (known && e.from != e.to) {
            fwd[index[e.from]].push_back(index[e.to]);
            rev[index[e.to]].push_back(index[e.from]);
        }
    }

    // Strong connectivity of the cell graph itself: every ordered vertex
    // pair must be joined by an oriented path. One forward and one backward
    // search from vertex 0 suffice; the detail names a witnessing pair.
    auto unreachable_from = [&](const std::vector<std::vector<int>>& adj) -> int {
        std::vector<char> hit(n, 0);
        std::queue<int> q;
        hit[0] = 1;
        q.push(0);
        while (!q.empty()) {
            int x = q.front();
            q.pop();
            for (int y : adj[x])
                if (!hit[y]) {
                    hit[y] = 1;
                    q.push(y);
                }
        }
        for (int i = 0; i < n; ++i)
            if (!hit[i]) return i;
        return -1;
    };
    if (int i = unreachable_from(fwd); i >= 0)
        bad.push_back({K::NotStronglyConnected,
                       "no oriented path from '" + cell.vertices[0] + "' to '" +
                           cell.vertices[i] + "'"});
    else if (int j = unreachable_from(rev); j >= 0)
        bad.push_back({K::NotStronglyConnected,
                       "no oriented path from '" + cell.vertices[j] + "' to '" +
                           cell.vertices[0] + "'"});

    return bad;
}

ValidatedCell ValidatedCell::validate(const FundamentalCell& cell) {
    auto bad = check_cell(cell);
    if (!bad.empty()) throw CellValidationError(std::move(bad));
    return ValidatedCell(cell);
}

ValidatedCell::ValidatedCell(FundamentalCell cell) : cell_(std::move(cell)) {
    for (const auto& name : cell_.vertices)
        index_.emplace(name, static_cast<int>(index_.size()));
    out_.resize(cell_.vertices.size());
    for (const auto& e : cell_.edges)
        out_[index_.at(e.from)].emplace_back(index_.at(e.to), e.rate);
    underline_ = index_.at(cell_.underline);
    overline_ = index_.at(cell_.overline);
}

int ValidatedCell::index_of(const std::string& v) const {
    auto it = index_.find(v);
    return it == index_.end() ? -1 : it->second;
}

// -------------------------------------------------------- transformations

FundamentalCell mirrored_cell(const FundamentalCell& cell) {
    FundamentalCell m = cell;
    auto swap_mark = [&](std::string& v) {
        if (v == cell.underline)
            v = cell.overline;
        else if (v == cell.overline)
            v = cell.underline;
    };
    for (auto& e : m.edges) {
        swap_mark(e.from);
        swap_mark(e.to);
    }
    return m;
}

FundamentalCell scaled_cell(const FundamentalCell& cell, double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw Error("scaled_cell: scale factor must be positive and finite");
    FundamentalCell s = cell;
    for (auto& e : s.edges) e.rate *= lambda;
    return s;
}

// --------------------------------------------------------------- JSON I/O

FundamentalCell cell_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("cell JSON: ") + e.what());
    }
    try {
        FundamentalCell cell;
        cell.vertices = j.at("vertices").get<std::vector<std::string>>();
        cell.underline = j.at("underline").get<std::string>();
        cell.overline = j.at("overline").get<std::string>();
        for (const auto& je : j.at("edges")) {
            CellEdge e;
            e.from = je.at("from").get<std::string>();
            e.to = je.at("to").get<std::string>();
            e.rate = je.at("rate").get<double>();
            cell.edges.push_back(std::move(e));
        }
        return cell;
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("cell JSON: ") + e.what());
    }
}

std::string cell_to_json_text(const FundamentalCell& cell) {
    nlohmann::json j;
    j["vertices"] = cell.vertices;
    j["underline"] = cell.underline;
    j["overline"] = cell.overline;
    j["edges"] = nlohmann::json::array();
    for (const auto& e : cell.edges)
        j["edges"].push_back({{"from", e.from}, {"to", e.to}, {"rate", e.rate}});
    return j.dump(2) + "\n";
}

FundamentalCell load_cell(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open cell file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return cell_from_json_text(buf.str());
}

ValidatedCell load_validated_cell(const std::string& path) {
    return ValidatedCell::validate(load_cell(path));
}

void save_cell(const FundamentalCell& cell, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write cell file: " + path);
    out << cell_to_json_text(cell);
    if (!out) throw Error("write failed: " + path);
}

}  // namespace quasi1d
