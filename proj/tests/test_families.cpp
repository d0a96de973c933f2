#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <string>

#include "qangle/families.hpp"
#include "qangle/uncertainty.hpp"

using namespace qangle;

TEST(Gaussian, MomentsMatchParameters) {
    const GridSpec g(-16, 16, 4096);
    const auto psi = make_state(FamilySpec::gaussian(0.0, 1.0), g);
    const auto m = position_moments(psi);
    EXPECT_NEAR(m.mean, 0.0, 1e-12);
    EXPECT_NEAR(m.stddev, 1.0, 1e-10);
    const auto shifted = position_moments(make_state(FamilySpec::gaussian(-3.0, 0.7, 2.0), g));
    EXPECT_NEAR(shifted.mean, -3.0, 1e-12);
    EXPECT_NEAR(shifted.stddev, 0.7, 1e-10);
    EXPECT_NEAR(momentum_moments(make_state(FamilySpec::gaussian(-3.0, 0.7, 2.0), g)).mean, 2.0, 1e-10);
}

TEST(Boxcar, UnitAmplitudeOnCells) {
    const GridSpec g(-2, 2, 512);
    ASSERT_DOUBLE_EQ(g.dx(), 1.0 / 128);
    const auto psi = make_state(FamilySpec::boxcar(0.0, 1.0), g);
    int support = 0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        if (psi[j] != complex{0.0, 0.0}) {
            ++support;
            EXPECT_NEAR(psi[j].real(), 1.0, 1e-14);
            EXPECT_GE(g.x(j), 0.0);
            EXPECT_LT(g.x(j), 1.0);
        }
    }
    EXPECT_EQ(support, 128);
}

TEST(Plateau, FlatCdfAndUnitMass) {
    const auto psi = make_plateau_state(GridSpec(-0.8, 2.4, 1024));
    const double eps = ThresholdConstants::standard().epsilon;
    EXPECT_NEAR(psi.vector().squared_norm(), 1.0, 1e-14);
    EXPECT_NEAR(interpolated_cdf(psi, 0.15), eps, 1e-15);
    EXPECT_NEAR(interpolated_cdf(psi, 1.0), 1.0, 1e-14);
    EXPECT_THROW((void)make_plateau_state(GridSpec(-1, 2, 1024)), ParameterError);
}

TEST(Superposition, ComponentsEnterWithUnitNorm) {
    const GridSpec g(-16, 16, 2048);
    const auto one = make_state(FamilySpec::superposition({{-4.0, 1.0, 0.0, 0.0, {1.0, 0.0}}}), g);
    const auto ref = make_state(FamilySpec::gaussian(-4.0, 1.0), g);
    for (std::size_t j = 0; j < g.size(); ++j) EXPECT_NEAR(std::abs(one[j] - ref[j]), 0.0, 1e-14);

    // Far-separated equal-weight packets split the mass evenly.
    const auto two = make_state(FamilySpec::superposition({{-5.0, 0.5, 0, 0, {1, 0}}, {5.0, 0.5, 0, 0, {0, 1}}}), g);
    EXPECT_NEAR(window_mass(two, Window::at_most(0.0)), 0.5, 1e-12);
}

TEST(RandomBandlimited, DeterministicPerSeed) {
    const auto g = CorpusDefaults::grid();
    const auto a = make_state(FamilySpec::random_bandlimited(42, 0.3), g);
    const auto b = make_state(FamilySpec::random_bandlimited(42, 0.3), g);
    const auto c = make_state(FamilySpec::random_bandlimited(43, 0.3), g);
    EXPECT_TRUE(a.vector() == b.vector());
    EXPECT_FALSE(a.vector() == c.vector());
}

TEST(RandomBandlimited, SpectrumInsideBand) {
    const auto g = CorpusDefaults::grid();
    const auto psi = make_state(FamilySpec::random_bandlimited(3, 0.2), g);
    const auto view = to_momentum(psi);
    const long long band = static_cast<long long>(std::floor(0.2 * 1024));
    double outside = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (std::llabs(view.wavenumber(i)) > band) outside += std::norm(view.amplitudes()[i]) * view.dp();
    }
    EXPECT_LT(outside, 1e-24);
    EXPECT_LT(window_mass(psi, Window::at_most(g.x(5))) + window_mass(psi, Window::above(g.x(g.size() - 6))), 1e-8);
}

TEST(Guards, RejectUnresolvableParameters) {
    const GridSpec g(-16, 16, 1024);
    EXPECT_THROW((void)make_state(FamilySpec::gaussian(0.0, 0.1), g), ParameterError);   // sigma < 4 dx
    EXPECT_THROW((void)make_state(FamilySpec::gaussian(0.0, 3.0), g), ParameterError);   // L < 16 sigma
    EXPECT_THROW((void)make_state(FamilySpec::gaussian(10.0, 1.0), g), ParameterError);  // off the edge
    EXPECT_THROW((void)make_state(FamilySpec::boxcar(0.0, 0.01), g), ParameterError);    // off lattice
    EXPECT_THROW((void)make_state(FamilySpec::boxcar(1.0, 0.0), g), ParameterError);
    EXPECT_THROW((void)make_state(FamilySpec::random_bandlimited(1, 0.9), g), ParameterError);
    EXPECT_THROW((void)make_state(FamilySpec::superposition({}), g), ParameterError);
}

TEST(Params, SetAndGet) {
    auto s = FamilySpec::superposition({{0, 1, 0, 0, {1, 0}}, {2, 1, 0, 0, {1, 0}}});
    set_param(s, "c1.sigma", 0.75);
    set_param(s, "c0.im", 0.5);
    EXPECT_EQ(s.components[1].sigma, 0.75);
    EXPECT_EQ(s.components[0].weight, complex(1.0, 0.5));
    EXPECT_EQ(get_param(s, "c1.sigma"), 0.75);
    EXPECT_THROW(set_param(s, "c2.x0", 1.0), ParameterError);
    EXPECT_THROW(set_param(s, "width", 1.0), ParameterError);

    auto gsp = FamilySpec::gaussian(0, 1);
    set_param(gsp, "sigma", 2.0);
    EXPECT_EQ(gsp.sigma, 2.0);
    EXPECT_EQ(family_kind_from_string(to_string(FamilyKind::chirped_gaussian)), FamilyKind::chirped_gaussian);
    EXPECT_THROW((void)family_kind_from_string("lorentzian"), ParameterError);
}

TEST(Corpus, Reproducible) {
    // Rounding to 1e-10 makes the digest insensitive to last-bit noise.
    auto digest = [] {
        std::string s;
        for (const auto& spec : corpus_specs(30)) {
            const auto rep = check_uncertainty(make_state(spec, CorpusDefaults::grid()));
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.10f;", rep.product_over_hbar);
            s += buf;
        }
        return s;
    };
    EXPECT_EQ(digest(), digest());
    const auto a = corpus_specs(5), b = corpus_specs(5);
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_EQ(a[i].seed, b[i].seed);
        EXPECT_EQ(a[i].band_fraction, b[i].band_fraction);
        EXPECT_GE(a[i].band_fraction, 0.1);
        EXPECT_LT(a[i].band_fraction, 0.4);
    }
}
