#include "iaq/fkalman.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Eigenvalues>

#include "iaq/errors.hpp"

namespace iaq {

GlWeights gl_weights(double alpha, int horizon) {
    if (!(alpha > 0 && alpha <= 2))
        throw UsageError("fractional order must be in (0, 2], got " +
                         std::to_string(alpha));
    if (horizon < 1)
        throw UsageError("GL horizon must be >= 1");
    GlWeights g;
    g.alpha = alpha;
    g.horizon = horizon;
    g.w.resize(static_cast<std::size_t>(horizon) + 1);
    g.w[0] = 1.0;
    for (int j = 1; j <= horizon; ++j)
        g.w[j] = g.w[j - 1] * (1.0 - (alpha + 1.0) / j);
    return g;
}

const std::vector<GlWeights>& FractionalStateModel::weights() const {
    if (weights_.size() != static_cast<std::size_t>(n())) {
        weights_.clear();
        weights_.reserve(orders.size());
        for (double a : orders) weights_.push_back(gl_weights(a, horizon));
    }
    return weights_;
}

Eigen::Matrix4d matern_companion(double lambda) {
    Eigen::Matrix4d A = Eigen::Matrix4d::Zero();
    A(0, 1) = A(1, 2) = A(2, 3) = 1.0;
    const double l2 = lambda * lambda;
    A(3, 0) = -l2 * l2;
    A(3, 1) = -4.0 * l2 * lambda;
    A(3, 2) = -6.0 * l2;
    A(3, 3) = -4.0 * lambda;
    return A;
}

FractionalStateModel matern_model(double l, double dt, double q, double r,
                                  double alpha, int horizon) {
    if (!(l > 0) || !(dt > 0) || !(q > 0) || !(r > 0))
        throw UsageError("matern_model requires l, dt, q, r > 0");
    const double lambda = std::sqrt(5.0) / l;
    const double scale = std::pow(dt, alpha);

    FractionalStateModel m;
    m.A = matern_companion(lambda) * scale;
    m.B = Eigen::MatrixXd::Zero(4, 1);
    m.B(3, 0) = 1.0;
    m.C = Eigen::MatrixXd::Zero(1, 4);
    m.C(0, 0) = 1.0;
    m.orders.assign(4, alpha);
    m.Q = Eigen::MatrixXd::Zero(4, 4);
    m.Q(3, 3) = q * scale;
    m.R = Eigen::MatrixXd::Constant(1, 1, r);
    m.dt = dt;
    m.horizon = horizon;
    m.weights(); // build the cache eagerly; validates alpha
    return m;
}

std::vector<std::complex<double>> continuous_poles(const Eigen::MatrixXd& A_c,
                                                   double cluster_rtol) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(A_c);
    if (es.info() != Eigen::Success)
        throw NumericalError("eigenvalue computation failed");
    std::vector<std::complex<double>> eig(es.eigenvalues().data(),
                                          es.eigenvalues().data() + A_c.rows());

    double scale = 0;
    for (const auto& e : eig) scale = std::max(scale, std::abs(e));
    const double tol = cluster_rtol * std::max(scale, 1.0);

    // Greedy clustering; a defective multiple eigenvalue splits under QR
    // iteration but its cluster mean is accurate, so report the means.
    std::vector<std::vector<std::complex<double>>> clusters;
    for (const auto& e : eig) {
        bool placed = false;
        for (auto& c : clusters) {
            std::complex<double> mean{0, 0};
            for (const auto& m : c) mean += m;
            mean /= static_cast<double>(c.size());
            if (std::abs(e - mean) < tol) {
                c.push_back(e);
                placed = true;
                break;
            }
        }
        if (!placed) clusters.push_back({e});
    }

    std::vector<std::complex<double>> out;
    for (const auto& c : clusters) {
        std::complex<double> mean{0, 0};
        for (const auto& m : c) mean += m;
        mean /= static_cast<double>(c.size());
        // Conjugate-symmetric input: drop a stray imaginary residue on means
        // of real clusters.
        if (std::abs(mean.imag()) < tol * 1e-6) mean = {mean.real(), 0.0};
        for (std::size_t i = 0; i < c.size(); ++i) out.push_back(mean);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return out;
}

FilterState initial_state(const FractionalStateModel& model, double p0) {
    FilterState s;
    s.x = Eigen::VectorXd::Zero(model.n());
    s.P = Eigen::MatrixXd::Identity(model.n(), model.n()) * p0;
    return s;
}

namespace {

Eigen::VectorXd apply_f(const FractionalStateModel& m, const Eigen::VectorXd& x) {
    return m.f ? m.f(x) : Eigen::VectorXd(m.A * x);
}

Eigen::MatrixXd jacobian_f(const FractionalStateModel& m, const Eigen::VectorXd& x) {
    return m.f_jacobian ? m.f_jacobian(x) : m.A;
}

Eigen::VectorXd apply_h(const FractionalStateModel& m, const Eigen::VectorXd& x) {
    return m.h ? m.h(x) : Eigen::VectorXd(m.C * x);
}

Eigen::MatrixXd jacobian_h(const FractionalStateModel& m, const Eigen::VectorXd& x) {
    return m.h_jacobian ? m.h_jacobian(x) : m.C;
}

} // namespace

namespace {

void check_shapes(const FractionalStateModel& m) {
    const auto n = m.A.rows();
    if (m.A.cols() != n || m.C.cols() != n || m.Q.rows() != n || m.Q.cols() != n ||
        m.R.rows() != m.C.rows() || m.R.cols() != m.C.rows() ||
        static_cast<Eigen::Index>(m.orders.size()) != n)
        throw UsageError("model shapes disagree: A must be n x n, C p x n, "
                         "Q n x n, R p x p, with n fractional orders");
}

} // namespace

FilterState predict(const FractionalStateModel& model, const FilterState& state) {
    check_shapes(model);
    const int n = model.n();
    const auto& W = model.weights();
    const long lags = std::min<long>(state.k + 1, model.horizon);
    if (state.k > 0 && state.history.empty())
        throw NumericalError("filter history is empty at step " +
                             std::to_string(state.k));

    // Fractional memory of the mean: sum_j c_j x(k+1-j); j=1 is the current
    // posterior, j>=2 walks the history (most recent first).
    Eigen::VectorXd mem(n);
    for (int i = 0; i < n; ++i) mem(i) = W[i].w[1] * state.x(i);
    Eigen::MatrixXd Psum = Eigen::MatrixXd::Zero(n, n);
    for (long j = 2; j <= lags; ++j) {
        const auto& [xj, Pj] = state.history[static_cast<std::size_t>(j - 2)];
        Eigen::VectorXd cj(n);
        for (int i = 0; i < n; ++i) cj(i) = W[i].w[static_cast<std::size_t>(j)];
        mem += cj.asDiagonal() * xj;
        const Eigen::VectorXd cj_abs = cj.cwiseAbs();
        Psum += cj_abs.asDiagonal() * Pj * cj_abs.asDiagonal();
    }

    FilterState prior;
    prior.x = apply_f(model, state.x) - mem;

    Eigen::VectorXd c1_abs(n);
    for (int i = 0; i < n; ++i) c1_abs(i) = std::abs(W[i].w[1]);
    const Eigen::MatrixXd G = jacobian_f(model, state.x) +
                              Eigen::MatrixXd(c1_abs.asDiagonal());
    Eigen::MatrixXd P = G * state.P * G.transpose() + model.Q + Psum;
    prior.P = 0.5 * (P + P.transpose());

    prior.history = state.history;
    prior.history.emplace_front(state.x, state.P);
    while (prior.history.size() > static_cast<std::size_t>(model.horizon))
        prior.history.pop_back();
    prior.k = state.k + 1;
    prior.is_prior = true;
    return prior;
}

FilterState update(const FractionalStateModel& model, const FilterState& prior,
                   const std::optional<Eigen::VectorXd>& y) {
    if (!prior.is_prior)
        throw UsageError("update requires the state returned by predict");
    FilterState post = prior;
    post.is_prior = false;
    if (!y) return post; // gap: predict-only imputation

    const Eigen::MatrixXd H = jacobian_h(model, prior.x);
    const Eigen::MatrixXd S = H * prior.P * H.transpose() + model.R;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(S);
    if (!lu.isInvertible())
        throw NumericalError("innovation covariance is singular (|S| ~ 0); "
                             "check R and the model scales");
    const Eigen::MatrixXd K = prior.P * H.transpose() * lu.inverse();

    post.x = prior.x + K * (*y - apply_h(model, prior.x));
    const Eigen::MatrixXd IKH =
        Eigen::MatrixXd::Identity(model.n(), model.n()) - K * H;
    Eigen::MatrixXd P =
        IKH * prior.P * IKH.transpose() + K * model.R * K.transpose();
    post.P = 0.5 * (P + P.transpose());
    return post;
}

TimeSeries fuse_series(const FractionalStateModel& model, const TimeSeries& series,
                       const FuseOptions& opts) {
    if (series.values.empty())
        throw DataError("fuse_series: empty series");
    model.weights();

    double mean = 0;
    if (opts.center) {
        double sum = 0;
        std::size_t cnt = 0;
        for (const auto& v : series.values)
            if (v) { sum += *v; ++cnt; }
        if (cnt > 0) mean = sum / static_cast<double>(cnt);
    }

    FilterState state = initial_state(model, opts.p0);
    if (opts.init_from_first) {
        for (const auto& v : series.values)
            if (v) { state.x(0) = *v - mean; break; }
    }

    TimeSeries out = series;
    for (std::size_t k = 0; k < series.values.size(); ++k) {
        try {
            state = predict(model, state);
            std::optional<Eigen::VectorXd> y;
            if (series.values[k])
                y = Eigen::VectorXd::Constant(1, *series.values[k] - mean);
            state = update(model, state, y);
        } catch (const NumericalError& e) {
            throw NumericalError(std::string(e.what()) + " (at sample " +
                                 std::to_string(k) + ")");
        }
        out.values[k] = (model.C * state.x)(0) + mean;
    }
    return out;
}

} // namespace iaq
