#include "iaq/sysid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "iaq/errors.hpp"

namespace iaq {

double FractionalTransferFunction::max_den_exponent() const {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& t : den) m = std::max(m, t.exp);
    return m;
}

double FractionalTransferFunction::commensurate_alpha(int state_dim) const {
    return max_den_exponent() / state_dim;
}

void validate_ftf(const FractionalTransferFunction& ftf) {
    if (ftf.den.empty())
        throw DataError("transfer function has an empty denominator");
    double max_num = -std::numeric_limits<double>::infinity();
    for (const auto& t : ftf.num) {
        if (!std::isfinite(t.coef) || !std::isfinite(t.exp) || t.exp < 0)
            throw DataError("numerator term not finite or exponent negative");
        max_num = std::max(max_num, t.exp);
    }
    for (const auto& t : ftf.den) {
        if (!std::isfinite(t.coef) || !std::isfinite(t.exp) || t.exp < 0)
            throw DataError("denominator term not finite or exponent negative");
    }
    if (!ftf.num.empty() && !(ftf.max_den_exponent() > max_num))
        throw DataError("improper transfer function: max denominator exponent "
                        "must exceed max numerator exponent");
}

namespace {

// Binomial weights of (1-z)^alpha up to lag N.
std::vector<double> binom_weights(double alpha, std::size_t N) {
    std::vector<double> c(N + 1);
    c[0] = 1.0;
    for (std::size_t j = 1; j <= N; ++j)
        c[j] = c[j - 1] * (1.0 - (alpha + 1.0) / static_cast<double>(j));
    return c;
}

struct PreparedTerm {
    double scale; // coef * dt^-exp
    std::vector<double> w;
};

} // namespace

std::vector<double> simulate_ftf(const FractionalTransferFunction& ftf,
                                 const std::vector<double>& input, double dt) {
    validate_ftf(ftf);
    if (!(dt > 0))
        throw UsageError("simulate_ftf: dt must be positive");
    const std::size_t N = input.size();
    if (N == 0)
        throw DataError("simulate_ftf: empty input");

    std::vector<PreparedTerm> den, num;
    den.reserve(ftf.den.size());
    num.reserve(ftf.num.size());
    double d0 = 0, d0_abs = 0;
    for (const auto& t : ftf.den) {
        den.push_back({t.coef * std::pow(dt, -t.exp), binom_weights(t.exp, N - 1)});
        d0 += den.back().scale;
        d0_abs += std::abs(den.back().scale);
    }
    if (std::abs(d0) <= 1e-14 * d0_abs || d0 == 0)
        throw NumericalError("singular discrete operator: the denominator's "
                             "instantaneous coefficients cancel");
    for (const auto& t : ftf.num)
        num.push_back({t.coef * std::pow(dt, -t.exp), binom_weights(t.exp, N - 1)});

    // Numerator drive v[k] = sum_j scale_j * sum_m w_m u[k-m], precomputed.
    std::vector<double> v(N, 0.0);
    for (const auto& tm : num)
        for (std::size_t k = 0; k < N; ++k) {
            double acc = 0;
            for (std::size_t m = 0; m <= k; ++m) acc += tm.w[m] * input[k - m];
            v[k] += tm.scale * acc;
        }

    std::vector<double> y(N, 0.0);
    for (std::size_t k = 1; k < N; ++k) {
        double lag = 0;
        for (const auto& tm : den) {
            double acc = 0;
            for (std::size_t m = 1; m <= k; ++m) acc += tm.w[m] * y[k - m];
            lag += tm.scale * acc;
        }
        y[k] = (v[k] - lag) / d0;
    }
    return y;
}

TimeSeries simulate_ftf(const FractionalTransferFunction& ftf, const TimeSeries& input,
                        double dt) {
    const auto u = input.dense("simulate_ftf input");
    const auto y = simulate_ftf(ftf, u, dt);
    TimeSeries out = input;
    for (std::size_t i = 0; i < y.size(); ++i) out.values[i] = y[i];
    return out;
}

OutputErrorStats output_error(const std::vector<double>& y_r,
                              const std::vector<double>& y_m) {
    if (y_r.size() != y_m.size())
        throw DataError("output_error: length mismatch");
    if (y_r.empty())
        throw DataError("output_error: empty series");
    OutputErrorStats s;
    s.eps.resize(y_r.size());
    double sq = 0;
    for (std::size_t i = 0; i < y_r.size(); ++i) {
        s.eps[i] = y_r[i] - y_m[i];
        s.eps_max = std::max(s.eps_max, std::abs(s.eps[i]));
        sq += s.eps[i] * s.eps[i];
    }
    s.eps_mse = sq / static_cast<double>(y_r.size());
    return s;
}

// ---- identification ----

namespace {

constexpr double kPenaltyBase = 1e30;

// Uniform in [0,1) from the raw engine stream; the standard distributions are
// implementation-defined, this mapping is not.
double canon(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct Packing {
    FractionalTransferFunction tmpl; // denominator sorted, leading coef 1
    bool fit_numerator;
    std::size_t nd, nn;

    explicit Packing(FractionalTransferFunction t, bool fit_num)
        : tmpl(std::move(t)), fit_numerator(fit_num) {
        std::sort(tmpl.den.begin(), tmpl.den.end(),
                  [](const FtfTerm& a, const FtfTerm& b) { return a.exp > b.exp; });
        const double lead = tmpl.den.front().coef;
        if (lead == 0)
            throw DataError("identify: leading denominator coefficient is zero");
        for (auto& t2 : tmpl.den) t2.coef /= lead;
        for (auto& t2 : tmpl.num) t2.coef /= lead;
        nd = tmpl.den.size();
        nn = tmpl.num.size();
    }

    std::size_t dim() const {
        return nd + (nd - 1) + (fit_numerator ? 2 * nn : 0);
    }

    std::vector<double> pack() const {
        std::vector<double> x;
        x.reserve(dim());
        for (const auto& t : tmpl.den) x.push_back(t.exp);
        for (std::size_t i = 1; i < nd; ++i) x.push_back(tmpl.den[i].coef);
        if (fit_numerator) {
            for (const auto& t : tmpl.num) x.push_back(t.coef);
            for (const auto& t : tmpl.num) x.push_back(t.exp);
        }
        return x;
    }

    FractionalTransferFunction unpack(const std::vector<double>& x) const {
        FractionalTransferFunction f = tmpl;
        std::size_t i = 0;
        for (auto& t : f.den) t.exp = x[i++];
        f.den[0].coef = 1.0;
        for (std::size_t d = 1; d < nd; ++d) f.den[d].coef = x[i++];
        if (fit_numerator) {
            for (auto& t : f.num) t.coef = x[i++];
            for (auto& t : f.num) t.exp = x[i++];
        }
        return f;
    }

    // Indices of exponent coordinates (for bounds and jitter).
    bool is_exponent(std::size_t i) const {
        if (i < nd) return true;
        if (!fit_numerator) return false;
        return i >= nd + (nd - 1) + nn;
    }
};

struct Objective {
    const Packing& pk;
    const std::vector<double>& y;
    const std::vector<double>& u;
    double dt;
    const IdentifyOptions& opts;
    double y_absmax;
    mutable long evals = 0;

    double operator()(const std::vector<double>& x_in) const {
        ++evals;
        double pen = 0;
        std::vector<double> x = x_in;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (pk.is_exponent(i)) {
                if (x[i] < opts.exponent_lo) {
                    pen += (opts.exponent_lo - x[i]) * (opts.exponent_lo - x[i]);
                    x[i] = opts.exponent_lo;
                } else if (x[i] > opts.exponent_hi) {
                    pen += (x[i] - opts.exponent_hi) * (x[i] - opts.exponent_hi);
                    x[i] = opts.exponent_hi;
                }
            } else if (std::abs(x[i]) > opts.coef_limit) {
                pen += (std::abs(x[i]) - opts.coef_limit) *
                       (std::abs(x[i]) - opts.coef_limit);
                x[i] = std::copysign(opts.coef_limit, x[i]);
            }
        }
        FractionalTransferFunction cand = pk.unpack(x);
        std::vector<double> ym;
        try {
            ym = simulate_ftf(cand, u, dt);
        } catch (const std::exception&) {
            return kPenaltyBase + pen;
        }
        double sq = 0;
        for (std::size_t i = 0; i < ym.size(); ++i) {
            const double d = ym[i] - y[i];
            sq += d * d;
            if (!std::isfinite(sq) || std::abs(ym[i]) > 1e12 * (1.0 + y_absmax))
                return kPenaltyBase + pen;
        }
        const double mse = sq / static_cast<double>(ym.size());
        return mse * (1.0 + pen) + pen;
    }
};

struct NmResult {
    std::vector<double> x;
    double f = 0;
    bool by_tolerance = false;
};

// Plain Nelder-Mead: reflect 1, expand 2, contract 0.5, shrink 0.5.
NmResult nelder_mead(const Objective& f, const std::vector<double>& x0,
                     const std::vector<double>& steps, int max_iter, double ftol,
                     double xtol) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> pts(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += steps[i];
    std::vector<double> vals(n + 1);
    for (std::size_t i = 0; i <= n; ++i) vals[i] = f(pts[i]);

    std::vector<std::size_t> order(n + 1);
    bool by_tol = false;
    for (int it = 0; it < max_iter; ++it) {
        std::iota(order.begin(), order.end(), 0u);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (vals[a] != vals[b]) return vals[a] < vals[b];
            return a < b;
        });
        {
            std::vector<std::vector<double>> p2(n + 1);
            std::vector<double> v2(n + 1);
            for (std::size_t i = 0; i <= n; ++i) {
                p2[i] = std::move(pts[order[i]]);
                v2[i] = vals[order[i]];
            }
            pts = std::move(p2);
            vals = std::move(v2);
        }
        if (vals[n] - vals[0] <= ftol * (std::abs(vals[0]) + 1e-300)) {
            by_tol = true;
            break;
        }
        double spread = 0;
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t d = 0; d < n; ++d)
                spread = std::max(spread, std::abs(pts[i][d] - pts[0][d]));
        if (spread <= xtol) {
            by_tol = true;
            break;
        }

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t d = 0; d < n; ++d) centroid[d] += pts[i][d];
        }
        for (double& c : centroid) c /= static_cast<double>(n);

        auto blend = [&](double t) {
            std::vector<double> p(n);
            for (std::size_t d = 0; d < n; ++d)
                p[d] = centroid[d] + t * (centroid[d] - pts[n][d]);
            return p;
        };

        const auto xr = blend(1.0);
        const double fr = f(xr);
        if (fr < vals[0]) {
            const auto xe = blend(2.0);
            const double fe = f(xe);
            if (fe < fr) { pts[n] = xe; vals[n] = fe; }
            else { pts[n] = xr; vals[n] = fr; }
        } else if (fr < vals[n - 1]) {
            pts[n] = xr;
            vals[n] = fr;
        } else {
            const auto xc = blend(-0.5);
            const double fc = f(xc);
            if (fc < vals[n]) {
                pts[n] = xc;
                vals[n] = fc;
            } else {
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t d = 0; d < n; ++d)
                        pts[i][d] = pts[0][d] + 0.5 * (pts[i][d] - pts[0][d]);
                    vals[i] = f(pts[i]);
                }
            }
        }
    }
    std::size_t ib = 0;
    for (std::size_t i = 1; i <= n; ++i)
        if (vals[i] < vals[ib]) ib = i;
    return {pts[ib], vals[ib], by_tol};
}

} // namespace

FitReport identify(const std::vector<double>& y_r, const std::vector<double>& input,
                   double dt, const FractionalTransferFunction& tmpl,
                   const IdentifyOptions& opts) {
    validate_ftf(tmpl);
    if (y_r.size() != input.size())
        throw DataError("identify: response and input lengths differ");
    if (y_r.size() < 2)
        throw DataError("identify: need at least 2 samples");

    const std::size_t nsim = std::min(y_r.size(), opts.sim_cap);
    const std::vector<double> y(y_r.begin(), y_r.begin() + nsim);
    const std::vector<double> u(input.begin(), input.begin() + nsim);

    Packing pk(tmpl, opts.fit_numerator);
    double y_absmax = 0;
    for (double v : y) y_absmax = std::max(y_absmax, std::abs(v));
    Objective obj{pk, y, u, dt, opts, y_absmax};

    const std::vector<double> x0 = pk.pack();
    const std::size_t n = x0.size();
    const double f0 = obj(x0);

    std::mt19937_64 rng(opts.seed);
    std::vector<double> best_x = x0;
    double best_f = f0;
    bool best_by_tol = false;

    auto steps_for = [&](const std::vector<double>& xs, double exp_step,
                         double coef_rel) {
        std::vector<double> s(n);
        for (std::size_t i = 0; i < n; ++i)
            s[i] = pk.is_exponent(i)
                       ? exp_step
                       : (xs[i] != 0 ? coef_rel * std::abs(xs[i]) : 0.01);
        return s;
    };

    for (int r = 0; r < std::max(1, opts.restarts); ++r) {
        std::vector<double> xs = x0;
        if (r > 0) {
            for (std::size_t i = 0; i < n; ++i) {
                if (pk.is_exponent(i)) {
                    xs[i] += (2.0 * canon(rng) - 1.0) * 0.3;
                    xs[i] = std::clamp(xs[i], opts.exponent_lo, opts.exponent_hi);
                } else {
                    xs[i] *= std::exp((2.0 * canon(rng) - 1.0) * 0.5);
                }
            }
        }
        NmResult res = nelder_mead(obj, xs, steps_for(xs, 0.08, 0.2),
                                   opts.max_iterations, opts.ftol, opts.xtol);
        // Polish: restart the simplex tightly around the found point.
        res = nelder_mead(obj, res.x, steps_for(res.x, 0.01, 0.02),
                          opts.max_iterations, opts.ftol, opts.xtol);
        if (res.f < best_f) {
            best_x = res.x;
            best_f = res.f;
            best_by_tol = res.by_tolerance;
        }
        if (best_f < opts.good_enough_mse) break;
    }

    if (best_f >= kPenaltyBase)
        throw NumericalError("identify: every candidate simulation diverged");

    // The returned model honors the search box.
    for (std::size_t i = 0; i < n; ++i) {
        if (pk.is_exponent(i))
            best_x[i] = std::clamp(best_x[i], opts.exponent_lo, opts.exponent_hi);
        else
            best_x[i] = std::clamp(best_x[i], -opts.coef_limit, opts.coef_limit);
    }

    FitReport rep;
    rep.model = pk.unpack(best_x);
    const auto ym = simulate_ftf(rep.model, u, dt);
    const auto stats = output_error(y, ym);
    rep.eps_max = stats.eps_max;
    rep.eps_mse = stats.eps_mse;
    rep.iterations = obj.evals;
    rep.converged = best_by_tol || best_f < opts.good_enough_mse;
    return rep;
}

// ---- JSON ----

namespace {

std::vector<FtfTerm> terms_from_json(const nlohmann::json& arr, const char* which) {
    if (!arr.is_array())
        throw DataError(std::string("transfer function JSON: '") + which +
                        "' must be an array of [coef, exp] pairs");
    std::vector<FtfTerm> out;
    for (const auto& t : arr) {
        if (!t.is_array() || t.size() != 2)
            throw DataError(std::string("transfer function JSON: each '") + which +
                            "' entry must be a [coef, exp] pair");
        out.push_back({t[0].get<double>(), t[1].get<double>()});
    }
    return out;
}

} // namespace

FractionalTransferFunction ftf_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("transfer function JSON: ") + e.what());
    }
    FractionalTransferFunction f;
    f.num = j.contains("num") ? terms_from_json(j["num"], "num")
                              : std::vector<FtfTerm>{{1.0, 0.0}};
    f.den = terms_from_json(j.at("den"), "den");
    validate_ftf(f);
    return f;
}

FractionalTransferFunction load_ftf(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open transfer function file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ftf_from_json(ss.str());
}

std::string ftf_to_json(const FractionalTransferFunction& ftf) {
    nlohmann::json j;
    j["num"] = nlohmann::json::array();
    j["den"] = nlohmann::json::array();
    for (const auto& t : ftf.num) j["num"].push_back({t.coef, t.exp});
    for (const auto& t : ftf.den) j["den"].push_back({t.coef, t.exp});
    return j.dump(2);
}

} // namespace iaq
