#include "ncl/ensemble.hpp"

#include <stdexcept>

namespace ncl {

FittedEnsemble fit(const WhitenedGram& wg, const GramBundle& g, double lambda) {
    return fit(wg, g.phi_y, lambda);
}

FittedEnsemble fit(const WhitenedGram& wg, const Eigen::VectorXd& phi_y, double lambda) {
    if (lambda < 0.0 || lambda > 1.0) throw std::invalid_argument("lambda must lie in [0,1]");
    if (phi_y.size() != wg.q()) throw std::invalid_argument("target moment size mismatch");

    const Eigen::VectorXd shrink = wg.shrinkage(lambda);
    const Eigen::VectorXd z = wg.eigenvectors.transpose() * wg.apply_whitener(phi_y);
    const Eigen::VectorXd beta =
        wg.apply_whitener(Eigen::VectorXd(wg.eigenvectors * shrink.cwiseProduct(z).eval()));

    FittedEnsemble fe;
    fe.lambda = lambda;
    fe.beta = beta;
    fe.members = wg.members;
    fe.features_per_member = wg.features_per_member;
    return fe;
}

Predictions predict(const FittedEnsemble& fe, const RffEnsemble& basis, const Eigen::MatrixXd& X) {
    if (basis.members() != fe.members || basis.features_per_member() != fe.features_per_member)
        throw std::invalid_argument("basis does not match fitted ensemble");
    const Eigen::MatrixXd phi = evaluate(basis, X);
    const Eigen::Index h = fe.features_per_member;

    Predictions out;
    out.members.resize(fe.members, X.rows());
    for (int m = 0; m < fe.members; ++m)
        out.members.row(m) = fe.member_weight(m).transpose() * phi.middleRows(m * h, h);
    out.ensemble = out.members.colwise().mean();
    return out;
}

Eigen::VectorXd predict_stacked(const FittedEnsemble& fe, const Eigen::MatrixXd& phi) {
    if (phi.rows() != fe.beta.size()) throw std::invalid_argument("feature matrix size mismatch");
    return phi.transpose() * fe.beta;
}

SmootherMatrix smoother_matrix(const WhitenedGram& wg, const Eigen::MatrixXd& phi, double lambda,
                               Eigen::Index n_guard) {
    const Eigen::Index n = phi.cols();
    if (n > n_guard)
        throw std::invalid_argument("smoother matrix guarded to N <= " + std::to_string(n_guard));
    // S = (1/N) Phi^T A^+ Phi with A^+ = W V diag(g) V^T W; form the half
    // product B = diag(g)^{1/2} V^T W Phi so S = (1/N) B^T B stays symmetric PSD.
    const Eigen::VectorXd half = wg.shrinkage(lambda).cwiseSqrt();
    const Eigen::MatrixXd b = half.asDiagonal() * (wg.eigenvectors.transpose() * wg.apply_whitener(phi));
    SmootherMatrix sm;
    sm.lambda = lambda;
    sm.s = (b.transpose() * b) / static_cast<double>(n);
    sm.s = 0.5 * (sm.s + sm.s.transpose());
    return sm;
}

double ncl_loss(const Eigen::VectorXd& member_preds, double y, double lambda) {
    const auto m = static_cast<double>(member_preds.size());
    if (m < 1) throw std::invalid_argument("need at least one member");
    const double ensemble = member_preds.mean();
    const double avg_sq_err = (member_preds.array() - y).square().sum() / m;
    const double diversity = (member_preds.array() - ensemble).square().sum() / m;
    return avg_sq_err - lambda * diversity;
}

DecompositionReport ambiguity(const Eigen::VectorXd& member_preds, double y) {
    const auto m = static_cast<double>(member_preds.size());
    if (m < 1) throw std::invalid_argument("need at least one member");
    DecompositionReport rep;
    const double ensemble = member_preds.mean();
    rep.ensemble_error = (ensemble - y) * (ensemble - y);
    rep.average_member_error = (member_preds.array() - y).square().sum() / m;
    rep.diversity = (member_preds.array() - ensemble).square().sum() / m;
    return rep;
}

namespace {
double mean_squared_deviation(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (a.size() != b.size()) throw std::invalid_argument("length mismatch");
    return (a - b).squaredNorm() / static_cast<double>(a.size());
}
} // namespace

double emp_error(const Eigen::VectorXd& preds, const Eigen::VectorXd& y) {
    return mean_squared_deviation(preds, y);
}

double true_error(const Eigen::VectorXd& preds, const Eigen::VectorXd& mu_values) {
    return mean_squared_deviation(preds, mu_values);
}

} // namespace ncl
