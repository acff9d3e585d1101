#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "iaq/timeseries.hpp"

namespace iaq {

// One term coef * s^exp of a fractional-order transfer function.
struct FtfTerm {
    double coef = 0;
    double exp = 0;
};

// G(s) = sum(num) / sum(den). den non-empty; the system must be proper:
// max denominator exponent > max numerator exponent.
struct FractionalTransferFunction {
    std::vector<FtfTerm> num{{1.0, 0.0}};
    std::vector<FtfTerm> den;

    double max_den_exponent() const;
    // Common base order heuristic: max denominator exponent / state dimension.
    double commensurate_alpha(int state_dim = 4) const;
};

void validate_ftf(const FractionalTransferFunction& ftf);

// JSON schema: {"num": [[coef, exp], ...], "den": [[coef, exp], ...]}.
FractionalTransferFunction ftf_from_json(const std::string& text);
FractionalTransferFunction load_ftf(const std::string& path);
std::string ftf_to_json(const FractionalTransferFunction& ftf);

// Discrete solve of sum_i a_i D^{alpha_i} y = sum_j b_j D^{beta_j} u with each
// D^alpha realized by binomial weights over the full history (no truncation;
// short windows only). y[0] := 0, samples k >= 1 solved at t_k = k*dt.
// A vanishing discrete leading coefficient is a numerical error.
std::vector<double> simulate_ftf(const FractionalTransferFunction& ftf,
                                 const std::vector<double>& input, double dt);
TimeSeries simulate_ftf(const FractionalTransferFunction& ftf,
                        const TimeSeries& input, double dt);

struct OutputErrorStats {
    std::vector<double> eps; // y_r - y_m
    double eps_max = 0;      // max |eps|
    double eps_mse = 0;      // (1/N) sum eps^2
};

OutputErrorStats output_error(const std::vector<double>& y_r,
                              const std::vector<double>& y_m);

struct FitReport {
    FractionalTransferFunction model;
    double eps_max = 0;
    double eps_mse = 0;
    long iterations = 0; // objective evaluations spent
    bool converged = false;
};

struct IdentifyOptions {
    int restarts = 5;          // first start is the template itself
    int max_iterations = 3000; // simplex iterations per start
    std::uint64_t seed = 1;
    double exponent_lo = 0.0;
    double exponent_hi = 5.0;
    double coef_limit = 1e4;
    bool fit_numerator = false; // numerator taken from the template when false
    std::size_t sim_cap = 10000; // samples per candidate simulation
    double ftol = 1e-14;
    double xtol = 1e-10;
    double good_enough_mse = 1e-12; // stop restarting below this
};

// Output-error fit: minimizes eps_mse(simulate(candidate), y_r) over the
// denominator exponents and the non-leading denominator coefficients (the
// leading coefficient is normalized to 1 to fix the common-scaling gauge),
// plus numerator terms when fit_numerator. Derivative-free simplex search
// with seeded multi-start; per-coordinate relative initial steps; candidates
// whose simulation diverges get a penalty objective. Deterministic per seed.
// Never returns a report worse than the template evaluated as-is.
FitReport identify(const std::vector<double>& y_r, const std::vector<double>& input,
                   double dt, const FractionalTransferFunction& tmpl,
                   const IdentifyOptions& opts = {});

} // namespace iaq
