#pragma once

#include <deque>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "iaq/timeseries.hpp"

namespace iaq {

// Binomial fractional-difference weights c_j = (-1)^j * binom(alpha, j),
// computed by the multiplicative recurrence c_j = c_{j-1} * (1 - (alpha+1)/j).
// c_0 = 1, c_1 = -alpha.
struct GlWeights {
    double alpha = 1.0;
    int horizon = 64;
    std::vector<double> w; // size horizon + 1
};

// alpha in (0, 2], horizon >= 1.
GlWeights gl_weights(double alpha, int horizon);

// Linear (optionally extended) state model with per-state fractional orders.
// A is the discrete transition increment: the prediction applies
//   x-(k+1) = f(x(k)) - sum_{j>=1} c_j x(k+1-j),
// whose j=1 term contributes +alpha*x(k), so at alpha=1 the effective
// transition is A + I. The built-in instance discretizes a continuous
// companion matrix as A = A_c * dt^alpha.
struct FractionalStateModel {
    Eigen::MatrixXd A; // n x n
    Eigen::MatrixXd B; // n x m, zero columns when unforced
    Eigen::MatrixXd C; // p x n
    std::vector<double> orders; // n fractional orders, each in (0, 2]
    Eigen::MatrixXd Q; // n x n process noise (per step)
    Eigen::MatrixXd R; // p x p measurement noise
    double dt = 1.0;
    int horizon = 64;

    // Extended mode: caller-supplied maps with their Jacobians. When f is
    // empty the linear maps above are used. No automatic differentiation.
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> f;
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> f_jacobian;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> h;
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> h_jacobian;

    int n() const { return static_cast<int>(A.rows()); }
    int p() const { return static_cast<int>(C.rows()); }

    // Per-state GL weight rows, built once per model.
    const std::vector<GlWeights>& weights() const;

private:
    mutable std::vector<GlWeights> weights_;
};

// Quadruple-pole companion model derived from a Matern-5/2-style length scale:
// lambda = sqrt(5)/l, continuous last row [-lambda^4, -4*lambda^3, -6*lambda^2,
// -4*lambda] (characteristic polynomial (s + lambda)^4), observation picks the
// first state. Discretized
// A = A_c * dt^alpha, Q = q * dt^alpha on the driven (4,4) entry, R = r.
FractionalStateModel matern_model(double l, double dt, double q = 1e-6,
                                  double r = 0.25, double alpha = 1.0,
                                  int horizon = 64);

// The continuous companion matrix alone (before dt^alpha scaling).
Eigen::Matrix4d matern_companion(double lambda);

// Continuous poles of the model, reported as cluster means: numerically
// coincident eigenvalues (a defective multiple pole splits by ~eps^(1/4)
// under QR iteration) are grouped and each is replaced by its cluster mean,
// which is accurate to machine precision for a companion multiple pole.
// Returned sorted by real part, one entry per eigenvalue (multiplicity kept).
std::vector<std::complex<double>> continuous_poles(const Eigen::MatrixXd& A_c,
                                                   double cluster_rtol = 1e-3);

// Estimate, covariance, and the bounded history the fractional recursion
// needs. history holds past posteriors most recent first, length min(k, horizon).
struct FilterState {
    Eigen::VectorXd x;
    Eigen::MatrixXd P;
    std::deque<std::pair<Eigen::VectorXd, Eigen::MatrixXd>> history;
    long k = 0;          // steps advanced so far
    bool is_prior = false;
};

// Zero state, P = diag{p0}, empty history.
FilterState initial_state(const FractionalStateModel& model, double p0 = 0.1);

// Time update. Pushes the current posterior into history, returns the prior
// at k+1:
//   x- = f(x) - sum_{j=1..min(k+1,L)} c_j x(k+1-j)
//   P- = (F + U1) P (F + U1)' + Q + sum_{j=2..min(k+1,L)} Uj P(k+1-j) Uj'
// with Uj = diag(|c_j| per state). P- is symmetrized.
FilterState predict(const FractionalStateModel& model, const FilterState& state);

// Measurement update in Joseph form; y disengaged = gap, posterior := prior
// (predict-only imputation). Innovation covariance must be invertible.
FilterState update(const FractionalStateModel& model, const FilterState& prior,
                   const std::optional<Eigen::VectorXd>& y);

struct FuseOptions {
    // The state prior is zero-mean, so absolute signals are centered on the
    // mean of the non-gap samples before filtering and restored after.
    bool center = true;
    // Start x[0] at the first non-gap (centered) value instead of zero.
    bool init_from_first = true;
    double p0 = 0.1;
};

// Runs predict/update across the series; output sample k is C*x posterior.
// Gaps become filled predictions; the output has no gap markers.
TimeSeries fuse_series(const FractionalStateModel& model, const TimeSeries& series,
                       const FuseOptions& opts = {});

} // namespace iaq
