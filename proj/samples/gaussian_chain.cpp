// Prints the width, momentum spread and the six proof-chain steps for a
// Gaussian packet of the given width (default 1).
#include <cstdio>
#include <cstdlib>

#include "qangle/qangle.hpp"

int main(int argc, char** argv) {
    const double sigma = argc > 1 ? std::strtod(argv[1], nullptr) : 1.0;
    const qangle::GridSpec grid(-16 * sigma, 16 * sigma, 4096);
    const auto psi = qangle::make_state(qangle::FamilySpec::gaussian(0.0, sigma), grid);

    const auto rep = qangle::analyze_state(psi);
    std::printf("delta_x         %.12g\n", rep.delta_x);
    std::printf("Delta_p         %.12g\n", rep.delta_p);
    std::printf("product / hbar  %.12g\n", rep.product_over_hbar);
    std::printf("Kennard product %.12g\n", rep.kennard_product_over_hbar);

    const auto trace = qangle::trace_proof_chain(psi);
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        const auto& s = trace.steps[i];
        std::printf("step %zu %-34s %s  %.12g\n", i + 1, s.name.c_str(), s.passed ? "pass" : "FAIL", s.value);
    }
    return trace.all_passed() ? 0 : 2;
}
