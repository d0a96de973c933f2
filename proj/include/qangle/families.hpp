#pragma once

// Deterministic generators for the test-state corpus.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "qangle/core_state.hpp"
#include "qangle/fft.hpp"
#include "qangle/uncertainty.hpp"

namespace qangle {

enum class FamilyKind { gaussian, boxcar, superposition, chirped_gaussian, plateau, random_bandlimited };

inline std::string_view to_string(FamilyKind k) {
    switch (k) {
        case FamilyKind::gaussian: return "gaussian";
        case FamilyKind::boxcar: return "boxcar";
        case FamilyKind::superposition: return "superposition";
        case FamilyKind::chirped_gaussian: return "chirped_gaussian";
        case FamilyKind::plateau: return "plateau";
        case FamilyKind::random_bandlimited: return "random_bandlimited";
    }
    return "unknown";
}

inline FamilyKind family_kind_from_string(std::string_view s) {
    for (auto k : {FamilyKind::gaussian, FamilyKind::boxcar, FamilyKind::superposition,
                   FamilyKind::chirped_gaussian, FamilyKind::plateau, FamilyKind::random_bandlimited}) {
        if (to_string(k) == s) return k;
    }
    throw ParameterError("family: unknown kind '" + std::string(s) + "'");
}

// One Gaussian packet; |psi|^2 has standard deviation sigma.
struct GaussianComponent {
    double x0 = 0.0;
    double sigma = 1.0;
    double p0 = 0.0;
    double chirp = 0.0;
    complex weight{1.0, 0.0};
};

struct FamilySpec {
    FamilyKind kind = FamilyKind::gaussian;
    // gaussian, chirped_gaussian
    double x0 = 0.0;
    double sigma = 1.0;
    double p0 = 0.0;
    double chirp = 0.0;
    // boxcar [left, right)
    double left = 0.0;
    double right = 1.0;
    // superposition
    std::vector<GaussianComponent> components;
    // random_bandlimited
    double band_fraction = 0.2;
    std::uint64_t seed = 0;

    static FamilySpec gaussian(double x0, double sigma, double p0 = 0.0) {
        FamilySpec s;
        s.kind = FamilyKind::gaussian;
        s.x0 = x0;
        s.sigma = sigma;
        s.p0 = p0;
        return s;
    }
    static FamilySpec chirped_gaussian(double x0, double sigma, double chirp, double p0 = 0.0) {
        auto s = gaussian(x0, sigma, p0);
        s.kind = FamilyKind::chirped_gaussian;
        s.chirp = chirp;
        return s;
    }
    static FamilySpec boxcar(double left, double right) {
        FamilySpec s;
        s.kind = FamilyKind::boxcar;
        s.left = left;
        s.right = right;
        return s;
    }
    static FamilySpec superposition(std::vector<GaussianComponent> parts) {
        FamilySpec s;
        s.kind = FamilyKind::superposition;
        s.components = std::move(parts);
        return s;
    }
    static FamilySpec plateau() {
        FamilySpec s;
        s.kind = FamilyKind::plateau;
        return s;
    }
    static FamilySpec random_bandlimited(std::uint64_t seed, double band_fraction) {
        FamilySpec s;
        s.kind = FamilyKind::random_bandlimited;
        s.seed = seed;
        s.band_fraction = band_fraction;
        return s;
    }
};

// Named scalar parameters, used by sweeps and searches. Component fields are
// addressed as "c<i>.x0", "c<i>.sigma", "c<i>.p0", "c<i>.chirp", "c<i>.re", "c<i>.im".
inline double& param_ref(FamilySpec& s, std::string_view name) {
    if (name == "x0") return s.x0;
    if (name == "sigma") return s.sigma;
    if (name == "p0") return s.p0;
    if (name == "chirp") return s.chirp;
    if (name == "left") return s.left;
    if (name == "right") return s.right;
    if (name == "band_fraction") return s.band_fraction;
    if (name.size() > 2 && name[0] == 'c') {
        const auto dot = name.find('.');
        if (dot != std::string_view::npos && dot > 1) {
            std::size_t idx = 0;
            for (char ch : name.substr(1, dot - 1)) {
                if (ch < '0' || ch > '9') throw ParameterError("family: unknown parameter '" + std::string(name) + "'");
                idx = idx * 10 + static_cast<std::size_t>(ch - '0');
            }
            if (idx >= s.components.size()) {
                throw ParameterError("family: no component for parameter '" + std::string(name) + "'");
            }
            auto& c = s.components[idx];
            const auto field = name.substr(dot + 1);
            if (field == "x0") return c.x0;
            if (field == "sigma") return c.sigma;
            if (field == "p0") return c.p0;
            if (field == "chirp") return c.chirp;
            // std::complex guarantees array-compatible layout {re, im}.
            if (field == "re") return reinterpret_cast<double(&)[2]>(c.weight)[0];
            if (field == "im") return reinterpret_cast<double(&)[2]>(c.weight)[1];
        }
    }
    throw ParameterError("family: unknown parameter '" + std::string(name) + "'");
}

inline void set_param(FamilySpec& s, std::string_view name, double value) {
    if (name == "seed") {
        if (!(value >= 0.0) || value != std::floor(value)) throw ParameterError("family: seed is a nonnegative integer");
        s.seed = static_cast<std::uint64_t>(value);
        return;
    }
    param_ref(s, name) = value;
}

inline double get_param(const FamilySpec& s, std::string_view name) {
    if (name == "seed") return static_cast<double>(s.seed);
    return param_ref(const_cast<FamilySpec&>(s), name);
}

namespace detail {

// Uniform double in [0, 1) from the top 53 bits; independent of the standard
// library's distribution implementations.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double standard_normal(std::mt19937_64& rng) {
    const double u1 = 1.0 - uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

inline bool is_lattice_point(const GridSpec& g, double x) {
    const double t = (x - g.x_min()) / g.dx();
    return std::abs(t - std::round(t)) <= 1e-9;
}

inline std::size_t lattice_index(const GridSpec& g, double x) {
    return static_cast<std::size_t>(std::llround((x - g.x_min()) / g.dx()));
}

inline void check_gaussian_guards(const GridSpec& g, double x0, double sigma) {
    if (!std::isfinite(x0) || !std::isfinite(sigma)) throw ParameterError("gaussian: finite parameters");
    if (!(sigma >= 4.0 * g.dx())) throw ParameterError("gaussian: sigma >= 4*dx");
    if (!(g.length() >= 16.0 * sigma)) throw ParameterError("gaussian: domain >= 16*sigma");
    if (!(x0 - 8.0 * sigma >= g.x_min() && x0 + 8.0 * sigma <= g.x_max())) {
        throw ParameterError("gaussian: x0 +- 8*sigma inside domain");
    }
}

inline complex gaussian_value(const GaussianComponent& c, double x, double hbar) {
    const double d = x - c.x0;
    const double envelope = std::exp(-d * d / (4.0 * c.sigma * c.sigma));
    return envelope * std::polar(1.0, (c.p0 * x + c.chirp * d * d) / hbar);
}

} // namespace detail

// Mass eps on [0, 0.1), nothing on [0.1, 0.2), the remaining 1 - eps spread
// uniformly over [0.2, 1.0): the CDF is flat at eps across [0.1, 0.2].
inline WaveFunction make_plateau_state(const GridSpec& g, const Config& cfg = {}) {
    for (double edge : {0.0, 0.1, 0.2, 1.0}) {
        if (!detail::is_lattice_point(g, edge) || edge < g.x_min() || edge > g.x_max()) {
            throw ParameterError("plateau: segment edges 0, 0.1, 0.2, 1.0 on lattice points inside domain");
        }
    }
    const double eps = ThresholdConstants::from(cfg).epsilon;
    const std::size_t i0 = detail::lattice_index(g, 0.0);
    const std::size_t i1 = detail::lattice_index(g, 0.1);
    const std::size_t i2 = detail::lattice_index(g, 0.2);
    const std::size_t i3 = detail::lattice_index(g, 1.0);
    const double first = std::sqrt(eps / (static_cast<double>(i1 - i0) * g.dx()));
    const double rest = std::sqrt((1.0 - eps) / (static_cast<double>(i3 - i2) * g.dx()));
    std::vector<complex> amp(g.size(), complex{0.0, 0.0});
    for (std::size_t j = i0; j < i1; ++j) amp[j] = first;
    for (std::size_t j = i2; j < i3; ++j) amp[j] = rest;
    return normalize(std::move(amp), g, cfg);
}

namespace detail {

// Random complex amplitudes on the lattice momenta of an inner band, shaped by
// a Gaussian envelope of seeded width and center, then cut to the allowed
// band exactly. The envelope keeps the state far from the periodic seam; the
// margin between inner and allowed band (5 hbar/sigma_env) keeps the cut
// below 1e-10 in amplitude.
inline WaveFunction make_random_bandlimited(const FamilySpec& s, const GridSpec& g, const Config& cfg) {
    if (!(s.band_fraction > 0.0 && s.band_fraction <= 0.4)) {
        throw ParameterError("random_bandlimited: band_fraction in (0, 0.4]");
    }
    const std::size_t n = g.size();
    std::mt19937_64 rng(s.seed);
    const double L = g.length();
    const double mid = 0.5 * (g.x_min() + g.x_max());
    const double center = mid + (2.0 * uniform01(rng) - 1.0) * (3.0 / 32.0) * L;
    const double sigma_env = (0.01875 + 0.028125 * uniform01(rng)) * L;
    if (!(sigma_env >= 4.0 * g.dx())) throw ParameterError("random_bandlimited: envelope sigma >= 4*dx");

    const double dp = g.dp(cfg.hbar);
    const long long band = static_cast<long long>(std::floor(s.band_fraction * static_cast<double>(n / 2)));
    const long long margin = static_cast<long long>(std::ceil(5.0 * cfg.hbar / (sigma_env * dp)));
    const long long inner = band - margin;
    if (inner < 0) throw ParameterError("random_bandlimited: band wider than envelope margin");

    const long long nn = static_cast<long long>(n);
    auto bin_of = [nn](long long k) { return static_cast<std::size_t>((k + nn) % nn); };

    std::vector<complex> work(n, complex{0.0, 0.0});
    for (long long k = -inner; k <= inner; ++k) {
        const double re = standard_normal(rng);
        const double im = standard_normal(rng);
        work[bin_of(k)] = complex{re, im};
    }
    fft::inverse<double>(work);
    for (std::size_t j = 0; j < n; ++j) {
        const double d = g.x(j) - center;
        work[j] *= std::exp(-d * d / (4.0 * sigma_env * sigma_env));
    }
    fft::forward<double>(work);
    for (std::size_t bin = 0; bin < n; ++bin) {
        const long long k = bin < n / 2 ? static_cast<long long>(bin) : static_cast<long long>(bin) - nn;
        if (std::llabs(k) > band) work[bin] = complex{0.0, 0.0};
    }
    fft::inverse<double>(work);
    return normalize(std::move(work), g, cfg);
}

} // namespace detail

inline WaveFunction make_state(const FamilySpec& s, const GridSpec& g, const Config& cfg = {}) {
    cfg.validate();
    const std::size_t n = g.size();
    std::vector<complex> amp(n, complex{0.0, 0.0});

    switch (s.kind) {
        case FamilyKind::gaussian:
        case FamilyKind::chirped_gaussian: {
            detail::check_gaussian_guards(g, s.x0, s.sigma);
            const GaussianComponent c{s.x0, s.sigma, s.p0, s.kind == FamilyKind::chirped_gaussian ? s.chirp : 0.0};
            if (!std::isfinite(c.p0) || !std::isfinite(c.chirp)) throw ParameterError("gaussian: finite parameters");
            for (std::size_t j = 0; j < n; ++j) amp[j] = detail::gaussian_value(c, g.x(j), cfg.hbar);
            break;
        }
        case FamilyKind::superposition: {
            if (s.components.empty()) throw ParameterError("superposition: at least one component");
            for (const auto& c : s.components) {
                detail::check_gaussian_guards(g, c.x0, c.sigma);
                if (!std::isfinite(c.p0) || !std::isfinite(c.chirp) || !std::isfinite(std::abs(c.weight))) {
                    throw ParameterError("superposition: finite parameters");
                }
                // Each packet enters with unit L2 norm times its weight.
                const double unit = 1.0 / std::sqrt(c.sigma * std::sqrt(2.0 * std::numbers::pi));
                for (std::size_t j = 0; j < n; ++j) amp[j] += c.weight * unit * detail::gaussian_value(c, g.x(j), cfg.hbar);
            }
            break;
        }
        case FamilyKind::boxcar: {
            if (!(s.left < s.right)) throw ParameterError("boxcar: left < right");
            if (!(s.left >= g.x_min() && s.right <= g.x_max())) throw ParameterError("boxcar: inside domain");
            if (!detail::is_lattice_point(g, s.left) || !detail::is_lattice_point(g, s.right)) {
                throw ParameterError("boxcar: lattice-aligned edges");
            }
            const std::size_t i0 = detail::lattice_index(g, s.left);
            const std::size_t i1 = detail::lattice_index(g, s.right);
            for (std::size_t j = i0; j < i1; ++j) amp[j] = 1.0;
            break;
        }
        case FamilyKind::plateau:
            return make_plateau_state(g, cfg);
        case FamilyKind::random_bandlimited:
            return detail::make_random_bandlimited(s, g, cfg);
    }
    try {
        return normalize(std::move(amp), g, cfg);
    } catch (const ZeroStateError&) {
        throw ParameterError("family: state has nonzero norm");
    }
}

// Grid and seeds of the built-in random corpus.
struct CorpusDefaults {
    static constexpr std::size_t count = 200;
    static constexpr std::uint64_t base_seed = 2006;
    static GridSpec grid() { return {-16.0, 16.0, 2048}; }
};

// Corpus entry i: its own seed and a band fraction drawn from [0.1, 0.4).
inline std::vector<FamilySpec> corpus_specs(std::size_t count = CorpusDefaults::count,
                                            std::uint64_t base_seed = CorpusDefaults::base_seed) {
    std::vector<FamilySpec> out;
    out.reserve(count);
    std::mt19937_64 rng(base_seed);
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint64_t seed = rng();
        const double band = 0.1 + 0.3 * detail::uniform01(rng);
        out.push_back(FamilySpec::random_bandlimited(seed, band));
    }
    return out;
}

} // namespace qangle
