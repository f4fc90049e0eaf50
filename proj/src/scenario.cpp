#include "metasense/scenario.hpp"

#include "parallel.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>

namespace metasense {

namespace {

double parse_number(const std::string& field, std::string_view whole) {
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(field.c_str(), &end);
    if (field.empty() || errno != 0 || end != field.c_str() + field.size() || !std::isfinite(v)) {
        throw std::invalid_argument("bad number '" + field + "' in range '" + std::string(whole) + "'");
    }
    return v;
}

}  // namespace

GridRange GridRange::parse(std::string_view text) {
    std::vector<std::string> parts;
    std::string current;
    for (char ch : text) {
        if (ch == ':') {
            parts.push_back(current);
            current.clear();
        } else {
            current.push_back(ch);
        }
    }
    parts.push_back(current);
    if (parts.size() != 3) {
        throw std::invalid_argument("range must look like lo:hi:n, got '" + std::string(text) + "'");
    }
    GridRange r;
    r.lo = parse_number(parts[0], text);
    r.hi = parse_number(parts[1], text);
    const double count = parse_number(parts[2], text);
    if (count < 1.0 || count != std::floor(count)) {
        throw std::invalid_argument("range '" + std::string(text) + "' needs a positive integer count");
    }
    r.n = static_cast<std::size_t>(count);
    if (r.hi < r.lo) {
        throw std::invalid_argument("range '" + std::string(text) + "' has hi < lo");
    }
    return r;
}

std::vector<double> GridRange::values() const {
    if (n == 0) {
        throw std::invalid_argument("empty grid range");
    }
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = lo + step * static_cast<double>(i);
    }
    out.back() = hi;
    return out;
}

GridRange GridRange::refined(std::size_t factor) const {
    if (factor == 0) throw std::invalid_argument("refinement factor must be positive");
    GridRange r = *this;
    if (n > 1) r.n = (n - 1) * factor + 1;
    return r;
}

std::vector<GridCell> sweep_grid(const HumanSpec& human, const GridRange& theta,
                                 const GridRange& auc, Method method, unsigned threads) {
    if (method != Method::closed_form && method != Method::quadrature) {
        throw std::invalid_argument("grid sweeps support closed-form or quadrature evaluation");
    }
    validate(human);
    const std::vector<double> thetas = theta.values();
    const std::vector<double> aucs = auc.values();
    for (double t : thetas) (void)Probability(t);
    std::vector<double> ds;
    ds.reserve(aucs.size());
    for (double a : aucs) ds.push_back(d_from_auc(a));

    std::vector<GridCell> cells(thetas.size() * aucs.size());
    detail::parallel_for(cells.size(), threads, [&](std::size_t idx) {
        const std::size_t i = idx / aucs.size();
        const std::size_t j = idx % aucs.size();
        const CombinedAccuracy c = combined_accuracy(human, Probability(thetas[i]), ds[j], method);
        cells[idx] = {thetas[i], aucs[j], c.value, c.method};
    });
    return cells;
}

std::vector<InversionPair> find_inversions(std::span<const GridCell> grid, double min_margin) {
    if (!(min_margin >= 0.0)) {
        throw std::invalid_argument("min_margin must be >= 0");
    }
    struct Found {
        std::size_t a;
        std::size_t b;
        double margin;
    };
    std::vector<Found> found;
    for (std::size_t a = 0; a < grid.size(); ++a) {
        for (std::size_t b = 0; b < grid.size(); ++b) {
            const GridCell& ca = grid[a];
            const GridCell& cb = grid[b];
            if (!(ca.theta_m < cb.theta_m && ca.auc > cb.auc)) continue;
            const double margin = ca.combined - cb.combined;
            if (margin > 0.0 && margin >= min_margin) {
                found.push_back({a, b, margin});
            }
        }
    }
    std::sort(found.begin(), found.end(), [](const Found& x, const Found& y) {
        if (x.margin != y.margin) return x.margin > y.margin;
        return std::tie(x.a, x.b) < std::tie(y.a, y.b);
    });

    std::vector<InversionPair> out;
    out.reserve(found.size());
    for (const auto& f : found) {
        const GridCell& ca = grid[f.a];
        const GridCell& cb = grid[f.b];
        out.push_back({{ca.theta_m, ca.auc}, {cb.theta_m, cb.auc}, ca.combined, cb.combined, f.margin});
    }
    return out;
}

ComplementarityReport complementarity(double joint, double human_alone, double ai_alone) {
    for (double v : {joint, human_alone, ai_alone}) {
        if (!(v >= 0.0 && v <= 1.0)) {
            std::ostringstream msg;
            msg << "accuracies must lie in [0,1], got " << v;
            throw std::domain_error(msg.str());
        }
    }
    const double best_solo = std::max(human_alone, ai_alone);
    return {joint, human_alone, ai_alone, joint > best_solo, joint - best_solo};
}

}  // namespace metasense
