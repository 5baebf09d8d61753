#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fqsalem/constructions.hpp"
#include "fqsalem/spectrum.hpp"

namespace fqsalem {

inline constexpr const char* kLibraryVersion = "0.1.0";

/// Threshold size descriptor for the random-set experiments:
/// "const:<c>", "log", or "loglog".
struct CFun {
    enum class Kind { kConst, kLog, kLogLog };
    Kind kind = Kind::kConst;
    double value = 1.0;

    static CFun parse(const std::string& text);
    double operator()(double q) const;
    std::string str() const;
};

struct ExperimentConfig {
    std::string recipe;
    std::vector<std::string> q_grid;  // field specs
    std::uint32_t dim = 3;
    std::vector<double> p_grid;
    double band_lo = 0.125;
    double band_hi = 8.0;
    double slope_max = 0.1;

    // Monte Carlo settings.
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    double alpha = 1.0;
    double mc_p = 4.0;
    CFun cfun{};
    double max_exceedance = -1.0;  // < 0 disables the assertion

    unsigned workers = 1;  // execution detail, not part of the config hash

    /// Deterministic serialization of everything that affects measured values.
    std::string canonical() const;
    void validate() const;
};

struct CellMeasurement {
    std::string field_spec;
    double q = 0;
    std::uint64_t set_size = 0;
    std::uint64_t trial = 0;  // Monte Carlo only
    double p = 0;
    double lp = 0;
    double s_emp = 0;
    double s_theory = 0;   // NaN when the recipe carries no prediction
    double predicted = 0;  // q^{-d} (#E)^{1-s_theory}, or the threshold for MC
    double ratio = 0;
    bool in_band = true;
};

struct AssertionResult {
    std::string id;
    bool pass = false;
    double value = 0;
    std::string detail;
};

struct CellError {
    std::string field_spec;
    std::string message;
};

struct RunRecord {
    std::string config_hash;
    std::string library_version;
    std::vector<CellMeasurement> cells;
    std::vector<AssertionResult> assertions;
    std::vector<CellError> errors;
    double wall_ms = 0;

    bool all_pass() const;
    /// Deterministic payload: everything except the wall clock, so equal
    /// configs serialize bit-identically across runs and worker counts.
    std::string to_json() const;
};

/// Builds the recipe over the q-grid, profiles it at every p, asserts the
/// ratio band where the recipe carries an exponent prediction, fits the
/// log-ratio slope across the grid per p, and checks closed-form spectra
/// entrywise where one is attached. Per-q failures are recorded and the
/// sweep continues.
RunRecord sweep(const ExperimentConfig& config);

/// Random-set exceedance experiment: per q and trial draws a uniform set of
/// size floor(q^alpha) with a derived seed and measures
/// P(||T||_p > C(q) q^{-d} q^{alpha/2}) with a Wilson interval.
RunRecord monte_carlo(const ExperimentConfig& config);

std::string sweep_csv(const RunRecord& record, const ExperimentConfig& config);

double fit_log_slope(const std::vector<double>& xs, const std::vector<double>& ys);

struct WilsonInterval {
    double lo = 0;
    double hi = 1;
};
WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                               double z = 1.959963984540054);

}  // namespace fqsalem
