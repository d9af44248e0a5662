#include "ncl/gram.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ncl {

Eigen::VectorXd WhitenedGram::apply_whitener(const Eigen::VectorXd& v) const {
    return apply_whitener(Eigen::MatrixXd(v)).col(0);
}

Eigen::MatrixXd WhitenedGram::apply_whitener(const Eigen::MatrixXd& v) const {
    if (v.rows() != q()) throw std::invalid_argument("whitener dimension mismatch");
    Eigen::MatrixXd out(v.rows(), v.cols());
    const Eigen::Index h = features_per_member;
    for (int m = 0; m < members; ++m)
        out.middleRows(m * h, h) =
            whitener_blocks[static_cast<std::size_t>(m)] * v.middleRows(m * h, h);
    return out;
}

Eigen::VectorXd WhitenedGram::shrinkage(double lambda) const {
    if (lambda < 0.0 || lambda > 1.0) throw std::invalid_argument("lambda must lie in [0,1]");
    Eigen::VectorXd g(eigenvalues.size());
    const double md = static_cast<double>(members) * (1.0 - lambda);
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        // below 1 the operator is invertible and the raw eigenvalue is exact;
        // at 1 the null directions (eigenvalue under the cutoff) are dropped
        // per the pseudo-inverse convention
        const double rho = eigenvalues(i);
        const double denom = md + lambda * rho;
        g(i) = lambda < 1.0 ? 1.0 / denom : (rho > zero_tol ? 1.0 / denom : 0.0);
    }
    return g;
}

Eigen::MatrixXd WhitenedGram::regularized_pinv(double lambda) const {
    const Eigen::VectorXd g = shrinkage(lambda);
    const Eigen::MatrixXd inner =
        eigenvectors * g.asDiagonal() * eigenvectors.transpose();
    return apply_whitener(Eigen::MatrixXd(apply_whitener(inner).transpose())).transpose();
}

GramBundle compute_gram(const Eigen::MatrixXd& phi, const Eigen::VectorXd& y, int members) {
    const Eigen::Index q = phi.rows();
    const Eigen::Index n = phi.cols();
    if (n != y.size()) throw std::invalid_argument("phi/y sample count mismatch");
    if (members < 1 || q % members != 0)
        throw std::invalid_argument("feature count not divisible by member count");
    const Eigen::Index h = q / members;

    GramBundle g;
    g.n_samples = n;
    g.members = members;
    g.features_per_member = h;
    g.gram_full = (phi * phi.transpose()) / static_cast<double>(n);
    g.gram_full = 0.5 * (g.gram_full + g.gram_full.transpose());  // kill roundoff asymmetry
    g.phi_y = phi * y / static_cast<double>(n);

    g.diag_blocks.reserve(static_cast<std::size_t>(members));
    for (int m = 0; m < members; ++m) {
        Eigen::MatrixXd block = g.gram_full.block(m * h, m * h, h, h);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block, Eigen::EigenvaluesOnly);
        const double tol = static_cast<double>(h) * std::numeric_limits<double>::epsilon() *
                           std::max(es.eigenvalues().maxCoeff(), 0.0);
        if (es.eigenvalues().minCoeff() <= tol)
            throw std::runtime_error("rank-deficient member gram block, member " +
                                     std::to_string(m));
        g.diag_blocks.push_back(std::move(block));
    }
    return g;
}

Eigen::VectorXd target_moment(const Eigen::MatrixXd& phi, const Eigen::VectorXd& y) {
    if (phi.cols() != y.size()) throw std::invalid_argument("phi/y sample count mismatch");
    return phi * y / static_cast<double>(phi.cols());
}

WhitenedGram whiten(const GramBundle& g) {
    const Eigen::Index h = g.features_per_member;
    WhitenedGram wg;
    wg.members = g.members;
    wg.features_per_member = h;

    wg.whitener_blocks.reserve(static_cast<std::size_t>(g.members));
    for (int m = 0; m < g.members; ++m) {
        const Eigen::MatrixXd& block = g.diag_blocks[static_cast<std::size_t>(m)];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block);
        const double tol = static_cast<double>(h) * std::numeric_limits<double>::epsilon() *
                           std::max(es.eigenvalues().maxCoeff(), 0.0);
        if (es.eigenvalues().minCoeff() <= tol)
            throw std::runtime_error("member gram block not positive definite, member " +
                                     std::to_string(m));
        const Eigen::VectorXd inv_sqrt = es.eigenvalues().array().rsqrt();
        wg.whitener_blocks.push_back(es.eigenvectors() * inv_sqrt.asDiagonal() *
                                     es.eigenvectors().transpose());
    }

    // P_{l,m} = W_l G_{l,m} W_m, assembled as W G W with block-diagonal W
    wg.p = wg.apply_whitener(Eigen::MatrixXd(wg.apply_whitener(g.gram_full).transpose()))
               .transpose();
    wg.p = 0.5 * (wg.p + wg.p.transpose());

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(wg.p);
    // reverse into descending order
    const Eigen::Index q = wg.p.rows();
    wg.eigenvalues.resize(q);
    wg.eigenvectors.resize(q, q);
    for (Eigen::Index i = 0; i < q; ++i) {
        wg.eigenvalues(i) = es.eigenvalues()(q - 1 - i);
        wg.eigenvectors.col(i) = es.eigenvectors().col(q - 1 - i);
    }

    // sqrt-eps rank cutoff: eigenvalues below it carry O(eps*|P|) absolute
    // error, which the 1/rho weights at lambda = 1 would amplify past any
    // useful accuracy in the trace and smoother routes
    wg.zero_tol = static_cast<double>(q) *
                  std::sqrt(std::numeric_limits<double>::epsilon()) *
                  std::max(wg.eigenvalues.maxCoeff(), 0.0);
    wg.eigenvalues = wg.eigenvalues.cwiseMax(0.0);  // roundoff negatives
    wg.rank_p = 0;
    for (Eigen::Index i = 0; i < q; ++i)
        if (wg.eigenvalues(i) > wg.zero_tol) ++wg.rank_p;
    return wg;
}

} // namespace ncl
