#pragma once
// Fundamental cell of a periodic quasi-1d lattice: a finite strongly
// connected directed graph with positive jump rates and two marked vertices.
// The lattice is built by gluing copies of the cell, identifying the
// "overline" vertex of copy n with the "underline" vertex of copy n+1.
//
// All types here are immutable after construction and safe to share across
// threads.

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "quasi1d/errors.hpp"

namespace quasi1d {

struct CellEdge {
    std::string from;
    std::string to;
    double rate = 0.0;
};

// Raw cell as read from user input; not yet checked.
struct FundamentalCell {
    std::vector<std::string> vertices;
    std::string underline;  // left boundary vertex of the cell
    std::string overline;   // right boundary vertex, glued to the next cell
    std::vector<CellEdge> edges;
};

// Structural checks; returns every violation found (empty == valid).
std::vector<CellViolation> check_cell(const FundamentalCell& cell);

// A cell that passed validation, with index maps and adjacency prebuilt.
class ValidatedCell {
  public:
    // Throws CellValidationError listing all violations on bad input.
    static ValidatedCell validate(const FundamentalCell& cell);

    const FundamentalCell& raw() const { return cell_; }
    const std::vector<std::string>& vertices() const { return cell_.vertices; }
    int vertex_count() const { return static_cast<int>(cell_.vertices.size()); }
    int underline() const { return underline_; }
    int overline() const { return overline_; }
    int index_of(const std::string& v) const;  // -1 if unknown

    // Out-adjacency: list of (target vertex index, rate).
    const std::vector<std::pair<int, double>>& out(int v) const { return out_[v]; }

  private:
    explicit ValidatedCell(FundamentalCell cell);
    FundamentalCell cell_;
    std::unordered_map<std::string, int> index_;
    std::vector<std::vector<std::pair<int, double>>> out_;
    int underline_ = -1;
    int overline_ = -1;
};

// Mirror the lattice about a star state: the two marked vertices exchange
// their incidences (every edge endpoint equal to one mark is relabeled to
// the other); rates and the marks themselves are unchanged. The mirrored
// walk runs the original one backward, so v changes sign and sigma^2 is
// preserved.
FundamentalCell mirrored_cell(const FundamentalCell& cell);

// Same cell with every rate multiplied by lambda > 0 (time rescaling).
FundamentalCell scaled_cell(const FundamentalCell& cell, double lambda);

// ------------------------------------------------------------ JSON I/O
//
// Format:
//   { "vertices": ["0","1"], "underline": "0", "overline": "1",
//     "edges": [ {"from":"0","to":"1","rate":2.0}, ... ] }

FundamentalCell cell_from_json_text(const std::string& text);
std::string cell_to_json_text(const FundamentalCell& cell);
FundamentalCell load_cell(const std::string& path);        // parse only
ValidatedCell load_validated_cell(const std::string& path);
void save_cell(const FundamentalCell& cell, const std::string& path);

}  // namespace quasi1d
