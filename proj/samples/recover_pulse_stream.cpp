// Draws one pulse stream, takes M = 100 Gaussian measurements and compares
// iterative support estimation against CoSaMP with K = S * F.

#include <pulsestream/pulsestream.hpp>

#include <cstdio>

using namespace pulsestream;

int main() {
    const PulseModel model(Domain(1024), 6, 11, 85);
    const std::uint64_t seed = 1;

    const auto truth = random_instance(model, mix_seed(seed, 1));
    const auto phi = gaussian_matrix(100, model.domain.size(), mix_seed(seed, 2));
    const Vector y = phi.apply(truth.z);

    RecoveryConfig cfg;
    cfg.restarts = 64;
    cfg.residual_tol = 1e-8 * y.norm();
    const auto alg2 = iterative_support_estimation(y, phi, model, cfg);
    const Vector base = cosamp(y, phi, model.sparsity(), cfg);

    std::printf("true spikes     :");
    for (Index i : truth.x.support().indices()) std::printf(" %ld", static_cast<long>(i));
    std::printf("\nestimated spikes:");
    for (Index i : alg2.x_hat.support().indices()) std::printf(" %ld", static_cast<long>(i));
    std::printf("\n\nnormalized MSE\n  iterative support estimation  %.3e  (restart %ld)\n  CoSaMP                        %.3e\n",
                normalized_mse(truth.z, alg2.z_hat), static_cast<long>(alg2.start), normalized_mse(truth.z, base));
    return 0;
}
