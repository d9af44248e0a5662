#pragma once

#include <string>

#include <Eigen/Dense>

#include "ncl/gram.hpp"
#include "ncl/rff.hpp"

namespace ncl {

// Closed-form negatively correlated ensemble at diversity lambda.
// beta is canonical; the stacked member weights are M*beta.
struct FittedEnsemble {
    double lambda = 0.0;
    Eigen::VectorXd beta;  // Q
    int members = 0;
    Eigen::Index features_per_member = 0;
    std::string basis_ref;

    Eigen::VectorXd member_weight(int m) const {
        return static_cast<double>(members) *
               beta.segment(m * features_per_member, features_per_member);
    }
};

struct Predictions {
    Eigen::VectorXd ensemble;  // N'
    Eigen::MatrixXd members;   // M x N'
};

struct SmootherMatrix {
    Eigen::MatrixXd s;  // N x N, symmetric, eigenvalues in [0,1]
    double lambda = 0.0;
};

struct DecompositionReport {
    double ensemble_error = 0.0;
    double average_member_error = 0.0;
    double diversity = 0.0;  // ensemble_error = average_member_error - diversity
};

// beta = (M(1-lambda) D + lambda G)^+ (1/N) Phi y, routed through the
// whitened eigendecomposition.
FittedEnsemble fit(const WhitenedGram& wg, const GramBundle& g, double lambda);

// Same solve against a replacement target moment; used for multi-output fits
// and noise redraws where only (1/N) Phi y changes.
FittedEnsemble fit(const WhitenedGram& wg, const Eigen::VectorXd& phi_y, double lambda);

Predictions predict(const FittedEnsemble& fe, const RffEnsemble& basis, const Eigen::MatrixXd& X);

// Fitted train values directly from a precomputed feature matrix.
Eigen::VectorXd predict_stacked(const FittedEnsemble& fe, const Eigen::MatrixXd& phi);

// S = (1/N) Phi^T (M(1-lambda) D + lambda G)^+ Phi. Diagnostic object,
// refused above n_guard samples.
SmootherMatrix smoother_matrix(const WhitenedGram& wg, const Eigen::MatrixXd& phi, double lambda,
                               Eigen::Index n_guard = 5000);

// (1/M) sum (f_m - y)^2 - lambda (1/M) sum (f_m - F)^2
double ncl_loss(const Eigen::VectorXd& member_preds, double y, double lambda);

DecompositionReport ambiguity(const Eigen::VectorXd& member_preds, double y);

double emp_error(const Eigen::VectorXd& preds, const Eigen::VectorXd& y);
double true_error(const Eigen::VectorXd& preds, const Eigen::VectorXd& mu_values);

} // namespace ncl
