#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace ncl {

// Fixed random Fourier feature basis: M members, each mapping R^d -> R^H via
// x |-> cos(Z_m x + b_m) with Gaussian frequencies Z_m and uniform phases b_m.
struct RffEnsemble {
    std::vector<Eigen::MatrixXd> frequencies;  // M entries, each H x d
    std::vector<Eigen::VectorXd> phases;       // M entries, each H, in [0, 2*pi)
    double gamma = 0.0;                        // kernel bandwidth, k(x,y) = exp(-gamma*|x-y|^2)
    std::uint64_t seed = 0;

    int members() const { return static_cast<int>(frequencies.size()); }
    Eigen::Index features_per_member() const {
        return frequencies.empty() ? 0 : frequencies.front().rows();
    }
    Eigen::Index dims() const { return frequencies.empty() ? 0 : frequencies.front().cols(); }
    Eigen::Index total_features() const { return members() * features_per_member(); }
};

// Median-pairwise-distance bandwidth heuristic: gamma = 1/(2 m^2) with m the
// median Euclidean distance over a subsample of at most 1000 points.
double frequency_heuristic(const Eigen::MatrixXd& X, std::uint64_t seed);

// Frequencies i.i.d. Gaussian(0, 2*gamma) (spectral measure of the Gaussian
// kernel), phases i.i.d. uniform [0, 2*pi).
RffEnsemble sample_rff(Eigen::Index d, Eigen::Index H, int M, double gamma, std::uint64_t seed);

// Stacked feature matrix, Q x N with Q = H*M; column n is
// [phi_1(x_n); ...; phi_M(x_n)].
Eigen::MatrixXd evaluate(const RffEnsemble& basis, const Eigen::MatrixXd& X);

} // namespace ncl
