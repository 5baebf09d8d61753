#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "fqsalem/lattice.hpp"

namespace fqsalem {

inline constexpr double kInfP = std::numeric_limits<double>::infinity();

enum class TransformMethod {
    kStaged,        // per-axis relabelling + m radix-p digit stages
    kPerAxisNaive,  // per-axis O(q^2) kernel products, kept as a cross-check
};

struct TransformOptions {
    TransformMethod method = TransformMethod::kStaged;
    felem twist = 1;      // evaluate against chi_c(a) = chi(c*a)
    unsigned workers = 1; // parallelism over complementary slices per axis
};

/// Values of the transform of an indicator over the whole box:
/// entry idx(x) holds q^{-d} * sum_{y in E} chi(-x.y).
class FourierTable {
public:
    FourierTable(Ambient amb, std::vector<std::complex<double>> values,
                 std::uint64_t set_size, felem twist);

    const Ambient& ambient() const { return amb_; }
    const std::vector<std::complex<double>>& values() const { return values_; }
    std::complex<double> at(std::uint64_t idx) const { return values_[idx]; }
    std::uint64_t set_size() const { return set_size_; }
    felem twist() const { return twist_; }

private:
    Ambient amb_;
    std::vector<std::complex<double>> values_;
    std::uint64_t set_size_;
    felem twist_;
};

FourierTable fourier_transform(const PointSet& set, const TransformOptions& opts = {});

/// ( q^{-d} sum_{x != 0} |T(x)|^p )^{1/p}; the maximum over x != 0 for
/// p = infinity. The origin is always excluded. Throws for p < 1.
double lp_norm(const FourierTable& table, double p);

/// The exact s with q^d * ||T||_p = (#E)^{1-s}; +infinity when the norm
/// vanishes. Requires #E >= 2.
double salem_exponent_from(double lp, std::uint64_t ambient_size, std::uint64_t set_size);
double salem_exponent(const PointSet& set, double p);

struct SpectralBounds {
    double trivial;        // q^{-d} #E
    double interpolation;  // q^{-d} (#E)^{1-1/max(p,2)}
    double lower;          // sqrt(1 - #E/q^d) * q^{-d} sqrt(#E), valid for p >= 2
};
SpectralBounds spectral_bounds(std::uint64_t ambient_size, std::uint64_t set_size, double p);

/// | sum_x |T(x)|^2 - q^{-d} #E | / (q^{-d} #E); zero up to rounding.
double plancherel_residual(const FourierTable& table);
double plancherel_residual(const PointSet& set);

struct ProfileRecord {
    double p;
    double lp;
    double s_emp;  // +infinity sentinel when lp == 0
    SpectralBounds bounds;
};

struct SpectralProfile {
    std::string field_spec;
    std::uint32_t dim;
    std::string set_name;
    std::uint64_t set_size;
    std::uint64_t ambient_size;
    std::vector<ProfileRecord> records;
};

/// One record per grid entry; the grid must be ascending within [1, inf].
SpectralProfile spectral_profile(const PointSet& set, const std::vector<double>& p_grid,
                                 const std::string& set_name = "",
                                 const TransformOptions& opts = {});

/// Columns: field,d,set_name,set_size,p,lp_norm,s_emp,bound_trivial,
/// bound_interp,bound_lower with p = infinity serialized as "inf".
std::string profile_csv(const SpectralProfile& profile);

std::string format_p(double p);
double parse_p(const std::string& token);

}  // namespace fqsalem
