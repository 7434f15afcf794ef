// Three slightly different pulse shapes observed at the Nyquist rate:
// alternating minimization settles on their anchor pulse.

#include <pulsestream/pulsestream.hpp>

#include <cstdio>

using namespace pulsestream;

int main() {
    const Domain d(96);
    const Support shifts({5, 40, 70}, d);
    const Vector alphas = (Vector(3) << 2.0, -1.0, 0.5).finished();

    std::vector<Vector> pulses;
    Rng rng(11);
    for (int i = 0; i < 3; ++i) {
        Vector p(7);
        for (Index l = 0; l < p.size(); ++l) p[l] = std::exp(-0.5 * (l - 3.0) * (l - 3.0)) + 0.1 * rng.normal();
        pulses.push_back(p / p.norm());
    }

    RecoveryConfig cfg;
    cfg.max_inner_iters = 500;
    const auto fp = anchor_pulse_fixed_point(pulses, alphas, shifts, ImpulseResponse::flat(7, d), cfg);
    const Vector rhs = anchor_pulse_closed_form(pulses, alphas, fp.h.coefficients());

    std::printf("anchor pulse after %ld iterations:\n", static_cast<long>(fp.iterations));
    for (Index l = 0; l < fp.h.length(); ++l) std::printf("  %+.6f\n", fp.h.coefficients()[l]);
    std::printf("self-consistency residual: %.2e\n", (fp.h.coefficients() - rhs / rhs.norm()).norm());
    return 0;
}
