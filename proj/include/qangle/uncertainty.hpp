#pragma once

// Tail-quantile width, the overlap estimate behind the bound
// delta_x * Delta_p >= hbar, the step-by-step verifier of that estimate, the
// shift-generator (certainty) bound and the Kennard comparison.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qangle/core_state.hpp"
#include "qangle/operators.hpp"

namespace qangle {

namespace tolerance {
inline constexpr double theorem_rel = 1e-4;
inline constexpr double snapped_theorem_rel = 1e-6;
inline constexpr double angle = 1e-6;
inline constexpr double kennard_rel = 1e-4;
inline constexpr double chain_slack = 1e-10;
inline constexpr double chain_residual = 1e-12;
inline constexpr double certainty_margin = 1e-6;
} // namespace tolerance

struct ThresholdConstants {
    double epsilon;
    double cos1;

    // epsilon = 1/2 - (1/2) sqrt(1 - cos^2 1) = (1 - sin 1)/2
    static ThresholdConstants standard() noexcept { return {0.5 - 0.5 * std::sin(1.0), std::cos(1.0)}; }

    static ThresholdConstants from(const Config& cfg) noexcept {
        auto c = standard();
        if (cfg.epsilon_override) c.epsilon = *cfg.epsilon_override;
        return c;
    }

    // 2 sqrt(eps (1 - eps)); equals cos 1 for the standard threshold.
    double overlap_bound() const noexcept { return 2.0 * std::sqrt(epsilon * (1.0 - epsilon)); }
};

// Continuous CDF of the position distribution. Cell j = [x_j, x_j + dx) carries
// the mass |psi_j|^2 dx. Each interior knot gets the midpoint-rule endpoint
// term (m_j - m_{j-1}) / 24, limited by minmod over the neighbouring
// differences so that it vanishes at steps and extrema. Inside a cell the
// density is reconstructed linearly with a monotonized-central slope limiter.
// F stays nondecreasing, and piecewise-constant profiles (boxcars, plateaus)
// are reproduced exactly.
class CumulativeDistribution {
public:
    template <GridState S>
    explicit CumulativeDistribution(const S& psi) : grid_(psi.grid()) {
        const std::size_t n = grid_.size();
        const auto amp = psi.amplitudes();
        mass_.resize(n);
        double total = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            mass_[j] = std::norm(amp[j]);
            total += mass_[j];
        }
        if (!(total > 0.0)) throw ZeroStateError();
        for (auto& m : mass_) m /= total;

        discrete_.resize(n + 1);
        discrete_[0] = 0.0;
        for (std::size_t j = 0; j < n; ++j) discrete_[j + 1] = discrete_[j] + mass_[j];
        for (auto& k : discrete_) k = std::min(k, 1.0);
        discrete_[n] = 1.0;

        auto m = [&](std::ptrdiff_t j) { return j >= 0 && j < static_cast<std::ptrdiff_t>(n) ? mass_[j] : 0.0; };
        knots_ = discrete_;
        for (std::size_t j = 1; j < n; ++j) {
            const auto i = static_cast<std::ptrdiff_t>(j);
            const double d = m(i) - m(i - 1);
            knots_[j] += minmod(d, m(i + 1) - m(i), m(i - 1) - m(i - 2)) / 24.0;
        }
        for (auto& k : knots_) k = std::clamp(k, 0.0, 1.0);

        cell_.resize(n);
        for (std::size_t j = 0; j < n; ++j) cell_[j] = knots_[j + 1] - knots_[j];
        slope_.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double left = j > 0 ? cell_[j - 1] : 0.0;
            const double right = j + 1 < n ? cell_[j + 1] : 0.0;
            const double dm = cell_[j] - left;
            const double dp = right - cell_[j];
            slope_[j] = minmod(2.0 * dm, 2.0 * dp, 0.5 * (dm + dp));
        }
    }

    double operator()(double x) const noexcept {
        if (!(x > grid_.x_min())) return 0.0;
        if (!(x < grid_.x_max())) return 1.0;
        const double t = (x - grid_.x_min()) / grid_.dx();
        std::size_t k = static_cast<std::size_t>(t);
        if (k >= cell_.size()) return 1.0;
        const double th = t - static_cast<double>(k);
        const double v = knots_[k] + cell_[k] * th + 0.5 * slope_[k] * (th * th - th);
        return std::min(knots_[k + 1], std::max(knots_[k], v));
    }

    // Mass of the grid points with index < j.
    double knot(std::size_t j) const noexcept { return discrete_[j]; }
    const GridSpec& grid() const noexcept { return grid_; }

private:
    static double minmod(double a, double b, double c) noexcept {
        if (a > 0 && b > 0 && c > 0) return std::min({a, b, c});
        if (a < 0 && b < 0 && c < 0) return std::max({a, b, c});
        return 0.0;
    }

    GridSpec grid_;
    std::vector<double> mass_;
    std::vector<double> discrete_;
    std::vector<double> knots_;
    std::vector<double> cell_;
    std::vector<double> slope_;
};

template <GridState S>
double interpolated_cdf(const S& psi, double x) {
    return CumulativeDistribution(psi)(x);
}

struct TailQuantiles {
    double l;
    double r;
};

namespace detail {

// Absorbs rounding in the cumulative sums so that a plateau at the level
// counts as lying on it.
inline constexpr double level_slack = 1e-14;

// sup{x : F(x) <= level}
inline double rightmost_at_or_below(const CumulativeDistribution& F, double level) {
    double lo = F.grid().x_min();
    double hi = F.grid().x_max();
    for (int it = 0; it < 2000; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (F(mid) <= level + level_slack ? lo : hi) = mid;
    }
    return lo;
}

// inf{x : F(x) >= level}
inline double leftmost_at_or_above(const CumulativeDistribution& F, double level) {
    double lo = F.grid().x_min();
    double hi = F.grid().x_max();
    for (int it = 0; it < 2000; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (F(mid) >= level - level_slack ? hi : lo) = mid;
    }
    return hi;
}

} // namespace detail

// l is the largest and r the smallest point solving F(l) = eps, F(r) = 1 - eps,
// which resolves CDF plateaus toward the narrowest interval.
inline TailQuantiles tail_quantiles(const CumulativeDistribution& F, double epsilon) {
    return {detail::rightmost_at_or_below(F, epsilon), detail::leftmost_at_or_above(F, 1.0 - epsilon)};
}

template <GridState S>
TailQuantiles tail_quantiles(const S& psi, const Config& cfg = {}) {
    return tail_quantiles(CumulativeDistribution(psi), ThresholdConstants::from(cfg).epsilon);
}

struct WidthReport {
    double epsilon;
    double l;
    double r;
    double delta_x;
    // Lattice translation used by the overlap estimate, shift_steps * dx.
    double shift_used;
    long long shift_steps;
    // Grid points with index >= split_index carry mass <= eps; split_point
    // separates them from the rest and equals r unless r had to move right.
    std::size_t split_index;
    double split_point;
};

// split_index is the first grid index right of r, moved further right while
// the points from it upward carry more than eps. shift_used is then the
// smallest lattice shift K*dx for which the points left of
// x_{split_index - K} carry mass <= eps as well, so both tails of the overlap
// estimate stay below eps exactly on the grid.
inline WidthReport width_report(const CumulativeDistribution& F, double epsilon) {
    const auto q = tail_quantiles(F, epsilon);
    const auto& g = F.grid();
    std::size_t split = detail::count_at_or_below(g, q.r);
    while (split < g.size() && F.knot(split) < 1.0 - epsilon) ++split;
    const double split_point = split > 0 ? std::max(q.r, g.x(split - 1)) : q.r;
    long long k = 0;
    while (F.knot(split - static_cast<std::size_t>(k)) > epsilon) ++k;
    return {epsilon, q.l, q.r, q.r - q.l, static_cast<double>(k) * g.dx(), k, split, split_point};
}

template <GridState S>
WidthReport width_report(const S& psi, const Config& cfg = {}) {
    return width_report(CumulativeDistribution(psi), ThresholdConstants::from(cfg).epsilon);
}

// |<psi| e^{-i s P/hbar} |psi>| at s = shift_used; bounded by cos 1.
inline double overlap_after_shift(const WaveFunction& psi, const Config& cfg = {}) {
    const auto w = width_report(psi, cfg);
    return std::abs(inner(psi, translate(psi, w.shift_used, cfg)));
}

struct ProofStep {
    std::string name;
    bool passed = false;
    // Slack of the inequality (>= 0 when it holds) or residual of the identity.
    double value = 0.0;
};

struct ProofChainTrace {
    WidthReport width;
    double cos1 = 0.0;
    double overlap_bound = 0.0;

    // Upper edge of the commuted lower window (-inf, c]; grid points <= c are
    // exactly those sent to points <= r by the shift.
    double commuted_edge = 0.0;

    complex s;           // <psi| T psi>
    complex a, b;        // split terms over (-inf, r] and (r, inf)
    double abs_sum = 0;  // |A| + |B|
    complex a_commuted, b_commuted;
    double cs_a = 0, cs_b = 0;

    double mass_below_l = 0, mass_below_r = 0, mass_above_l = 0, mass_above_r = 0;
    double mass_below_commuted = 0, mass_above_commuted = 0;

    double final_bound = 0;  // cs_a + cs_b

    std::array<ProofStep, 6> steps;

    bool all_passed() const noexcept {
        for (const auto& st : steps) if (!st.passed) return false;
        return true;
    }

    // 1-based index of the first failing step.
    std::optional<int> first_failure() const noexcept {
        for (std::size_t i = 0; i < steps.size(); ++i) if (!steps[i].passed) return static_cast<int>(i + 1);
        return std::nullopt;
    }
};

class StepFailure : public Error {
public:
    StepFailure(int step_index, ProofChainTrace t)
        : Error("proof chain step " + std::to_string(step_index) + " (" +
                t.steps[static_cast<std::size_t>(step_index - 1)].name + ") failed"),
          step(step_index), trace(std::move(t)) {}
    int step;
    ProofChainTrace trace;
};

struct ProofChainOptions {
    // Off: translate by the raw width delta_x instead of the lattice shift.
    // Test hook; breaks the exact commutation in step 4.
    bool snap_shift = true;
};

namespace detail {

inline bool bit_equal(const StateVector& x, const StateVector& y) {
    const auto a = x.amplitudes();
    const auto b = y.amplitudes();
    if (a.size() != b.size()) return false;
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (a[j].real() != b[j].real() || a[j].imag() != b[j].imag()) return false;
        if (std::signbit(a[j].real()) != std::signbit(b[j].real())) return false;
        if (std::signbit(a[j].imag()) != std::signbit(b[j].imag())) return false;
    }
    return true;
}

} // namespace detail

// Recomputes every line of the overlap estimate on the grid and checks it.
inline ProofChainTrace trace_proof_chain(const WaveFunction& psi, const Config& cfg = {},
                                         const ProofChainOptions& opts = {}) {
    const auto consts = ThresholdConstants::from(cfg);
    const CumulativeDistribution F(psi);
    const auto& g = psi.grid();

    ProofChainTrace t;
    t.width = width_report(F, consts.epsilon);
    t.cos1 = consts.cos1;
    t.overlap_bound = consts.overlap_bound();

    const double r = t.width.split_point;
    double shift = t.width.shift_used;
    if (opts.snap_shift) {
        const long long c_idx = static_cast<long long>(t.width.split_index) - t.width.shift_steps - 1;
        t.commuted_edge = g.x_min() + static_cast<double>(c_idx) * g.dx();
    } else {
        shift = t.width.delta_x;
        t.commuted_edge = r - shift;
    }

    const Window below_r = Window::at_most(r);
    const Window above_r = Window::above(r);
    const Window below_c = Window::at_most(t.commuted_edge);
    const Window above_c = Window::above(t.commuted_edge);

    const StateVector shifted = translate(psi.vector(), shift, cfg);
    const StateVector lower = project(shifted, below_r);
    const StateVector upper = project(shifted, above_r);

    t.s = inner(psi, shifted);
    t.a = inner(psi, lower);
    t.b = inner(psi, upper);
    t.abs_sum = std::abs(t.a) + std::abs(t.b);

    // (1) the two windows split T psi with no overlap and no gap
    {
        std::vector<complex> sum(lower.size());
        for (std::size_t j = 0; j < sum.size(); ++j) sum[j] = lower[j] + upper[j];
        const bool exact = detail::bit_equal(StateVector(g, std::move(sum)), shifted);
        const double res = std::abs(t.s - (t.a + t.b));
        t.steps[0] = {"window split", exact && res <= tolerance::chain_residual, res};
    }
    // (2) triangle inequality
    {
        const double slack = t.abs_sum - std::abs(t.s);
        t.steps[1] = {"triangle inequality", slack >= -tolerance::chain_slack, slack};
    }
    // (3) projectors are idempotent
    {
        const bool exact = detail::bit_equal(project(lower, below_r), lower) &&
                           detail::bit_equal(project(upper, above_r), upper);
        t.steps[2] = {"projector idempotence", exact, exact ? 0.0 : 1.0};
    }

    t.mass_below_l = window_mass(psi, Window::at_most(t.width.l));
    t.mass_above_l = window_mass(psi, Window::above(t.width.l));
    t.mass_below_r = window_mass(psi, below_r);
    t.mass_above_r = window_mass(psi, above_r);
    t.mass_below_commuted = window_mass(psi, below_c);
    t.mass_above_commuted = window_mass(psi, above_c);

    // (4) Omega_(-inf,r] T = T Omega_(-inf,c], and both tails carry <= eps
    {
        t.a_commuted = inner(psi, project(translate(project(psi, below_c), shift, cfg), below_r));
        t.b_commuted = inner(psi, project(translate(project(psi, above_c), shift, cfg), above_r));
        const double res = std::max(std::abs(t.a - t.a_commuted), std::abs(t.b - t.b_commuted));
        const double tail_cap = consts.epsilon + tolerance::chain_residual;
        const bool tails = t.mass_below_commuted <= tail_cap && t.mass_above_r <= tail_cap;
        t.steps[3] = {"translation commutes with window", res <= tolerance::chain_residual && tails, res};
    }
    // (5) Cauchy-Schwarz on both terms
    {
        t.cs_a = std::sqrt(t.mass_below_r) * std::sqrt(t.mass_below_commuted);
        t.cs_b = std::sqrt(t.mass_above_r) * std::sqrt(t.mass_above_commuted);
        const double slack = std::min(t.cs_a - std::abs(t.a_commuted), t.cs_b - std::abs(t.b_commuted));
        t.steps[4] = {"Cauchy-Schwarz", slack >= -tolerance::chain_slack, slack};
    }
    // (6) sqrt((1-q) p) + sqrt(q (1-p)) <= 2 sqrt(eps (1-eps)) = cos 1 for p, q <= eps
    {
        t.final_bound = t.cs_a + t.cs_b;
        const double slack = consts.cos1 - t.final_bound;
        t.steps[5] = {"threshold bound cos 1", slack >= -tolerance::chain_slack, slack};
    }
    return t;
}

// As trace_proof_chain, but throws StepFailure naming the first violated step.
inline ProofChainTrace verify_proof_chain(const WaveFunction& psi, const Config& cfg = {},
                                          const ProofChainOptions& opts = {}) {
    auto t = trace_proof_chain(psi, cfg, opts);
    if (auto k = t.first_failure()) throw StepFailure(*k, std::move(t));
    return t;
}

struct CertaintyRow {
    double shift;
    double angle;
    double bound;   // shift * Delta_p / hbar
    double margin;  // bound - angle
};

// angle(psi, e^{-iaP/hbar} psi) against a * Delta_p / hbar for each shift a.
inline std::vector<CertaintyRow> verify_certainty_bound(const WaveFunction& psi, const std::vector<double>& shifts,
                                                        const Config& cfg = {}) {
    const double dp = momentum_moments(psi, cfg).stddev;
    std::vector<CertaintyRow> rows;
    rows.reserve(shifts.size());
    for (double a : shifts) {
        if (!(a >= 0.0)) throw ParameterError("certainty: shift >= 0");
        const double angle = quantum_angle(psi, translate(psi, a, cfg));
        const double bound = a * dp / cfg.hbar;
        rows.push_back({a, angle, bound, bound - angle});
    }
    return rows;
}

struct InequalityReport {
    WidthReport width;
    double delta_x = 0;
    double delta_p = 0;
    double product_over_hbar = 0;
    // shift_used * Delta_p / hbar; the bound holds exactly at the lattice shift.
    double snapped_product_over_hbar = 0;
    double overlap_at_shift = 0;
    double angle_at_shift = 0;
    bool passes_theorem = false;
    bool passes_snapped = false;
    bool passes_angle = false;

    // Filled by check_kennard.
    double delta_x_std = std::numeric_limits<double>::quiet_NaN();
    double kennard_product_over_hbar = std::numeric_limits<double>::quiet_NaN();
    bool passes_kennard = false;
};

inline InequalityReport check_uncertainty(const WaveFunction& psi, const Config& cfg = {}) {
    (void)position_moments(psi, cfg);  // wraparound guard
    InequalityReport rep;
    rep.width = width_report(psi, cfg);
    rep.delta_x = rep.width.delta_x;
    rep.delta_p = momentum_moments(psi, cfg).stddev;
    rep.product_over_hbar = rep.delta_x * rep.delta_p / cfg.hbar;
    rep.snapped_product_over_hbar = rep.width.shift_used * rep.delta_p / cfg.hbar;

    const WaveFunction moved = translate(psi, rep.width.shift_used, cfg);
    rep.overlap_at_shift = std::abs(inner(psi, moved));
    rep.angle_at_shift = quantum_angle(psi, moved);

    rep.passes_theorem = rep.product_over_hbar >= 1.0 - tolerance::theorem_rel;
    rep.passes_snapped = rep.snapped_product_over_hbar >= 1.0 - tolerance::snapped_theorem_rel;
    rep.passes_angle = rep.angle_at_shift >= 1.0 - tolerance::angle;
    return rep;
}

inline void check_kennard(const WaveFunction& psi, InequalityReport& rep, const Config& cfg = {}) {
    const auto mx = position_moments(psi, cfg);
    const auto mp = momentum_moments(psi, cfg);
    rep.delta_x_std = mx.stddev;
    rep.kennard_product_over_hbar = mx.stddev * mp.stddev / cfg.hbar;
    rep.passes_kennard = rep.kennard_product_over_hbar >= 0.5 * (1.0 - tolerance::kennard_rel);
}

// check_uncertainty followed by check_kennard.
inline InequalityReport analyze_state(const WaveFunction& psi, const Config& cfg = {}) {
    auto rep = check_uncertainty(psi, cfg);
    check_kennard(psi, rep, cfg);
    return rep;
}

} // namespace qangle
