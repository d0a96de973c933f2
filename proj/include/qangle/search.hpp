#pragma once

// Parameter sweeps and derivative-free minimization of delta_x * Delta_p / hbar
// over state families.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qangle/families.hpp"
#include "qangle/parallel.hpp"
#include "qangle/uncertainty.hpp"

namespace qangle {

struct SweepRow {
    double value = 0.0;
    std::optional<InequalityReport> report;
    // Guard or input error for this point; empty when `report` is set.
    std::string error;
};

struct SweepResult {
    std::string axis;
    std::vector<SweepRow> rows;
};

struct SweepOptions {
    // Scale the grid domain by value / reference for each point (dilation sweeps).
    bool scale_grid = false;
    double reference = 1.0;
    unsigned threads = 1;
};

inline SweepResult sweep(const FamilySpec& family, const GridSpec& grid, const std::string& axis,
                         const std::vector<double>& values, const Config& cfg = {}, const SweepOptions& opts = {}) {
    SweepResult out{axis, std::vector<SweepRow>(values.size())};
    detail::parallel_for(values.size(), opts.threads, [&](std::size_t i) {
        SweepRow& row = out.rows[i];
        row.value = values[i];
        try {
            FamilySpec spec = family;
            set_param(spec, axis, values[i]);
            GridSpec g = grid;
            if (opts.scale_grid) {
                const double f = values[i] / opts.reference;
                g = GridSpec(grid.x_min() * f, grid.x_max() * f, grid.size());
            }
            row.report = analyze_state(make_state(spec, g, cfg), cfg);
        } catch (const Error& e) {
            row.error = e.what();
        }
    });
    return out;
}

struct SearchOptions {
    std::vector<std::string> free_params;
    std::vector<double> init;
    int budget = 200;
    // Picks the sign of each initial +-5% simplex perturbation.
    std::uint64_t seed = 0;
    double diameter_tol = 1e-6;

    // Simplex coefficients.
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;
};

struct Evaluation {
    std::vector<double> params;
    // +inf when the point violates a guard.
    double product_over_hbar;
    std::string error;
};

// An evaluated point whose product fell below hbar (1 - 1e-4).
struct TheoremViolation {
    std::vector<double> params;
    double product_over_hbar;
};

struct SearchResult {
    std::vector<std::string> free_params;
    std::vector<double> best_params;
    double best_product_over_hbar = std::numeric_limits<double>::infinity();
    int evaluations_used = 0;
    // Best value seen after each evaluation; nonincreasing.
    std::vector<double> trace;
    std::vector<Evaluation> evaluations;
    std::vector<TheoremViolation> findings;
    std::string stop_reason;
};

namespace detail {

class ProductObjective {
public:
    ProductObjective(const FamilySpec& family, const GridSpec& grid, const Config& cfg,
                     const std::vector<std::string>& names, int budget, SearchResult& out)
        : family_(family), grid_(grid), cfg_(cfg), names_(names), budget_(budget), out_(out) {}

    bool exhausted() const { return out_.evaluations_used >= budget_; }

    double operator()(const std::vector<double>& x) {
        Evaluation ev{x, std::numeric_limits<double>::infinity(), {}};
        try {
            FamilySpec spec = family_;
            for (std::size_t i = 0; i < names_.size(); ++i) set_param(spec, names_[i], x[i]);
            const auto rep = check_uncertainty(make_state(spec, grid_, cfg_), cfg_);
            ev.product_over_hbar = rep.product_over_hbar;
            if (!std::isfinite(ev.product_over_hbar)) ev.product_over_hbar = std::numeric_limits<double>::infinity();
        } catch (const Error& e) {
            ev.error = e.what();
        }
        ++out_.evaluations_used;
        if (ev.product_over_hbar < 1.0 - tolerance::theorem_rel) {
            out_.findings.push_back({x, ev.product_over_hbar});
        }
        if (out_.best_params.empty() || ev.product_over_hbar < out_.best_product_over_hbar) {
            out_.best_product_over_hbar = ev.product_over_hbar;
            out_.best_params = x;
        }
        out_.trace.push_back(out_.best_product_over_hbar);
        const double v = ev.product_over_hbar;
        out_.evaluations.push_back(std::move(ev));
        return v;
    }

private:
    const FamilySpec& family_;
    const GridSpec& grid_;
    const Config& cfg_;
    const std::vector<std::string>& names_;
    int budget_;
    SearchResult& out_;
};

} // namespace detail

// Nelder-Mead descent on the product. Guard-violating points score +inf.
// Stops when the budget of objective evaluations is spent or the simplex
// diameter drops below diameter_tol.
inline SearchResult minimize_product(const FamilySpec& family, const GridSpec& grid, const SearchOptions& opts,
                                     const Config& cfg = {}) {
    const std::size_t dim = opts.free_params.size();
    if (dim == 0) throw InitError("no free parameters");
    if (opts.init.size() != dim) throw InitError("init has " + std::to_string(opts.init.size()) +
                                                 " values for " + std::to_string(dim) + " parameters");
    if (opts.budget < 1) throw ParameterError("search: budget >= 1");

    SearchResult out;
    out.free_params = opts.free_params;
    detail::ProductObjective f(family, grid, cfg, opts.free_params, opts.budget, out);

    std::vector<std::vector<double>> x{opts.init};
    std::vector<double> fx{f(opts.init)};
    if (!std::isfinite(fx[0])) throw InitError(out.evaluations.front().error);

    std::mt19937_64 rng(opts.seed);
    for (std::size_t i = 0; i < dim && !f.exhausted(); ++i) {
        auto v = opts.init;
        const double step = v[i] != 0.0 ? 0.05 * std::abs(v[i]) : 0.05;
        v[i] += (rng() >> 63) ? -step : step;
        fx.push_back(f(v));
        x.push_back(std::move(v));
    }
    if (x.size() < dim + 1) {
        out.stop_reason = "budget";
        return out;
    }

    auto lerp = [dim](const std::vector<double>& from, const std::vector<double>& to, double t) {
        std::vector<double> p(dim);
        for (std::size_t i = 0; i < dim; ++i) p[i] = from[i] + t * (to[i] - from[i]);
        return p;
    };

    std::vector<std::size_t> order(dim + 1);
    while (true) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
        const std::size_t best = order.front(), worst = order.back(), second = order[dim - 1];

        double diameter = 0.0;
        for (std::size_t v = 0; v <= dim; ++v) {
            double d2 = 0.0;
            for (std::size_t i = 0; i < dim; ++i) d2 += (x[v][i] - x[best][i]) * (x[v][i] - x[best][i]);
            diameter = std::max(diameter, std::sqrt(d2));
        }
        if (diameter < opts.diameter_tol) {
            out.stop_reason = "converged";
            break;
        }
        if (f.exhausted()) {
            out.stop_reason = "budget";
            break;
        }

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t v = 0; v <= dim; ++v) {
            if (v == worst) continue;
            for (std::size_t i = 0; i < dim; ++i) centroid[i] += x[v][i] / static_cast<double>(dim);
        }

        const auto xr = lerp(centroid, x[worst], -opts.reflection);
        const double fr = f(xr);
        if (fr < fx[best]) {
            if (f.exhausted()) { x[worst] = xr; fx[worst] = fr; continue; }
            const auto xe = lerp(centroid, xr, opts.expansion);
            const double fe = f(xe);
            if (fe < fr) { x[worst] = xe; fx[worst] = fe; }
            else { x[worst] = xr; fx[worst] = fr; }
            continue;
        }
        if (fr < fx[second]) {
            x[worst] = xr;
            fx[worst] = fr;
            continue;
        }
        if (f.exhausted()) continue;

        bool accepted = false;
        if (fr < fx[worst]) {
            const auto xc = lerp(centroid, xr, opts.contraction);
            const double fc = f(xc);
            if (fc <= fr) { x[worst] = xc; fx[worst] = fc; accepted = true; }
        } else {
            const auto xc = lerp(centroid, x[worst], opts.contraction);
            const double fc = f(xc);
            if (fc < fx[worst]) { x[worst] = xc; fx[worst] = fc; accepted = true; }
        }
        if (accepted) continue;

        for (std::size_t v = 0; v <= dim && !f.exhausted(); ++v) {
            if (v == best) continue;
            x[v] = lerp(x[best], x[v], opts.shrink);
            fx[v] = f(x[v]);
        }
    }
    return out;
}

} // namespace qangle
