#include "ncl/mcdof.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ncl/random.hpp"

namespace ncl {

McDfEstimate estimate_df(const EstimatorOracle& oracle, const Eigen::VectorXd& y, double epsilon,
                         int repeats, std::uint64_t seed) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
    if (repeats < 1) throw std::invalid_argument("repeats must be >= 1");

    const Eigen::Index n = y.size();
    Eigen::VectorXd base;
    try {
        base = oracle(y);
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("oracle failed on base targets: ") + e.what());
    }
    if (base.size() != n) throw std::runtime_error("oracle returned wrong-length predictions");

    McDfEstimate est;
    est.epsilon = epsilon;
    est.repeats = repeats;
    est.per_repeat.reserve(static_cast<std::size_t>(repeats));
    for (int r = 0; r < repeats; ++r) {
        auto rng = make_rng(seed, /*stream=*/0xdf00ULL + static_cast<std::uint64_t>(r));
        std::normal_distribution<double> gauss(0.0, 1.0);
        Eigen::VectorXd probe(n);
        for (Eigen::Index i = 0; i < n; ++i) probe(i) = gauss(rng);

        Eigen::VectorXd perturbed;
        try {
            perturbed = oracle(y + epsilon * probe);
        } catch (const std::exception& e) {
            throw std::runtime_error("oracle failed on repeat " + std::to_string(r) + ": " +
                                     e.what());
        }
        est.per_repeat.push_back(probe.dot(perturbed - base) / epsilon);
    }

    double sum = 0.0;
    for (double v : est.per_repeat) sum += v;
    est.value = sum / static_cast<double>(repeats);
    double ss = 0.0;
    for (double v : est.per_repeat) ss += (v - est.value) * (v - est.value);
    const double sample_std =
        repeats > 1 ? std::sqrt(ss / static_cast<double>(repeats - 1)) : 0.0;
    est.std_error = sample_std / std::sqrt(static_cast<double>(repeats));
    return est;
}

} // namespace ncl
