#pragma once

// Parameter sweeps over (AI accuracy, meta-AUC), inversion search and
// complementarity bookkeeping.

#include "metasense/team_accuracy.hpp"

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace metasense {

// n evenly spaced values from lo to hi inclusive. n = 1 yields {lo}.
struct GridRange {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t n = 0;

    // Parses "lo:hi:n". Throws std::invalid_argument on malformed or empty ranges.
    static GridRange parse(std::string_view text);

    std::vector<double> values() const;
    // Inserts factor - 1 points between neighbours.
    GridRange refined(std::size_t factor) const;
};

struct GridCell {
    double theta_m;
    double auc;
    double combined;
    Method method;
};

// Row-major: theta_m is the slow index, auc the fast one. method must be
// closed_form or quadrature. Logit-normal humans at auc = 0.5 fall back to
// quadrature because the bivariate approximation divides by d; the cell
// records the method actually used.
std::vector<GridCell> sweep_grid(const HumanSpec& human, const GridRange& theta,
                                 const GridRange& auc, Method method, unsigned threads = 0);

struct ModelPoint {
    double theta_m;
    double auc;
};

// Model A is less accurate but more sensitive than model B, and does better.
struct InversionPair {
    ModelPoint model_a;
    ModelPoint model_b;
    double combined_a;
    double combined_b;
    double margin;
};

inline constexpr double kDefaultMinMargin = 0.005;

// Every inverted pair of cells with margin >= min_margin (and > 0), sorted
// by descending margin, ties broken by grid position.
std::vector<InversionPair> find_inversions(std::span<const GridCell> grid,
                                           double min_margin = kDefaultMinMargin);

struct ComplementarityReport {
    double joint;
    double human_alone;
    double ai_alone;
    bool incidence;
    double magnitude;
};

ComplementarityReport complementarity(double joint, double human_alone, double ai_alone);

}  // namespace metasense
