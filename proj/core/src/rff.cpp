#include "ncl/rff.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ncl/random.hpp"

namespace ncl {

double frequency_heuristic(const Eigen::MatrixXd& X, std::uint64_t seed) {
    const Eigen::Index n = X.rows();
    if (n < 2) throw std::invalid_argument("need at least 2 points");

    std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    const Eigen::Index cap = 1000;
    if (n > cap) {
        auto rng = make_rng(seed, /*stream=*/0x5a3);
        std::shuffle(idx.begin(), idx.end(), rng);
        idx.resize(static_cast<std::size_t>(cap));
    }

    std::vector<double> dists;
    dists.reserve(idx.size() * (idx.size() - 1) / 2);
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = i + 1; j < idx.size(); ++j)
            dists.push_back((X.row(idx[i]) - X.row(idx[j])).norm());

    const std::size_t mid = dists.size() / 2;
    std::nth_element(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(mid), dists.end());
    const double m = dists[mid];
    if (m <= 0.0) throw std::runtime_error("all sampled points identical, bandwidth undefined");
    return 1.0 / (2.0 * m * m);
}

RffEnsemble sample_rff(Eigen::Index d, Eigen::Index H, int M, double gamma, std::uint64_t seed) {
    if (d < 1 || H < 1 || M < 1) throw std::invalid_argument("d, H, M must all be >= 1");
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");

    RffEnsemble basis;
    basis.gamma = gamma;
    basis.seed = seed;
    basis.frequencies.reserve(static_cast<std::size_t>(M));
    basis.phases.reserve(static_cast<std::size_t>(M));

    const double freq_std = std::sqrt(2.0 * gamma);
    constexpr double two_pi = 2.0 * M_PI;
    for (int m = 0; m < M; ++m) {
        auto rng = make_rng(seed, /*stream=*/0x0f0f0000ULL + static_cast<std::uint64_t>(m));
        std::normal_distribution<double> gauss(0.0, freq_std);
        std::uniform_real_distribution<double> unif(0.0, two_pi);
        Eigen::MatrixXd z(H, d);
        Eigen::VectorXd b(H);
        for (Eigen::Index i = 0; i < H; ++i)
            for (Eigen::Index j = 0; j < d; ++j) z(i, j) = gauss(rng);
        for (Eigen::Index i = 0; i < H; ++i) b(i) = unif(rng);
        basis.frequencies.push_back(std::move(z));
        basis.phases.push_back(std::move(b));
    }
    return basis;
}

Eigen::MatrixXd evaluate(const RffEnsemble& basis, const Eigen::MatrixXd& X) {
    if (X.cols() != basis.dims())
        throw std::invalid_argument("feature dimension mismatch: X has " +
                                    std::to_string(X.cols()) + " cols, basis expects " +
                                    std::to_string(basis.dims()));
    const Eigen::Index H = basis.features_per_member();
    const Eigen::Index n = X.rows();
    Eigen::MatrixXd phi(basis.total_features(), n);
    for (int m = 0; m < basis.members(); ++m) {
        // H x N block: cos(Z_m X^T + b_m)
        phi.middleRows(m * H, H) =
            ((basis.frequencies[static_cast<std::size_t>(m)] * X.transpose()).colwise() +
             basis.phases[static_cast<std::size_t>(m)])
                .array()
                .cos();
    }
    return phi;
}

} // namespace ncl
