#pragma once

#include <vector>

#include <Eigen/Dense>

namespace ncl {

// Empirical second-moment structures of the stacked feature map:
// gram_full = (1/N) Phi Phi^T, its per-member diagonal blocks, and the
// feature/target moment (1/N) Phi y.
struct GramBundle {
    Eigen::MatrixXd gram_full;                   // Q x Q
    std::vector<Eigen::MatrixXd> diag_blocks;    // M blocks, H x H, full rank
    Eigen::VectorXd phi_y;                       // Q
    Eigen::Index n_samples = 0;
    int members = 0;
    Eigen::Index features_per_member = 0;

    Eigen::Index q() const { return gram_full.rows(); }
};

// Diagonally whitened gram P = D^{-1/2} G D^{-1/2} (D = block-diagonal of G)
// with its full symmetric eigendecomposition. Eigenvalues lie in [0, M],
// sum to H*M, and drive every degrees-of-freedom and solve path.
struct WhitenedGram {
    Eigen::MatrixXd p;                           // Q x Q
    Eigen::VectorXd eigenvalues;                 // descending, clamped to [0, inf)
    Eigen::MatrixXd eigenvectors;                // orthonormal columns
    std::vector<Eigen::MatrixXd> whitener_blocks;  // M symmetric PD H x H inverse sqrts
    Eigen::Index rank_p = 0;
    double zero_tol = 0.0;                       // eigenvalue <= zero_tol counts as zero
    int members = 0;
    Eigen::Index features_per_member = 0;

    Eigen::Index q() const { return members * features_per_member; }

    // Block-diagonal whitener applied to a stacked Q-vector / Q x K matrix.
    Eigen::VectorXd apply_whitener(const Eigen::VectorXd& v) const;
    Eigen::MatrixXd apply_whitener(const Eigen::MatrixXd& v) const;

    // Reciprocal of M(1-lambda) + lambda*rho with the pseudo-inverse
    // convention: zero where the denominator vanishes (only possible at
    // lambda = 1 on null eigenvalues).
    Eigen::VectorXd shrinkage(double lambda) const;

    // (M(1-lambda)*D + lambda*G)^+ materialized as a Q x Q matrix via the
    // whitened eigendecomposition. Diagnostic-scale only.
    Eigen::MatrixXd regularized_pinv(double lambda) const;
};

GramBundle compute_gram(const Eigen::MatrixXd& phi, const Eigen::VectorXd& y, int members);

// Recompute only the target moment (1/N) Phi y; gram_full and the whitening
// are shared across output columns.
Eigen::VectorXd target_moment(const Eigen::MatrixXd& phi, const Eigen::VectorXd& y);

WhitenedGram whiten(const GramBundle& g);

} // namespace ncl
