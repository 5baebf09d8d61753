#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fqsalem/lattice.hpp"
#include "fqsalem/spectrum.hpp"

namespace fqsalem {

/// E_1 + ... + E_k together with the fiber counts
/// f(z) = #{(x_1, ..., x_k) : x_i in E_i, sum x_i = z}.
struct SumsetResult {
    PointSet set;
    std::vector<std::uint64_t> fibers;
};
SumsetResult sumset(const std::vector<const PointSet*>& parts);

PointSet difference_set(const PointSet& e);

/// Number of scalar-multiple classes of non-zero differences.
std::uint64_t direction_count(const PointSet& e);

/// D(E) = {|x - y|^2 : x, y in E}, ascending.
std::vector<felem> distance_set(const PointSet& e);

struct SphericalEnergy {
    std::vector<double> energy;              // t -> sum_{|m|^2 = t, m != 0} |T(m)|^2
    std::vector<std::uint64_t> sphere_sizes; // t -> #{m : |m|^2 = t}
    double mattila;                          // q^{3d+1} (#E)^{-4} sum_{t != 0} energy(t)^2
    double gensalem_max;                     // max_{t != 0} energy(t)
    felem gensalem_argmax;
    double gensalem_threshold;               // q^eps q^{-3d/2-1} (#E)^2, reported not asserted
    double epsilon;
};
SphericalEnergy spherical_energy(const FourierTable& table, double epsilon = 0.05);
SphericalEnergy spherical_energy(const PointSet& e, double epsilon = 0.05);

struct DistanceReport {
    std::string field_spec;
    std::uint32_t dim;
    std::uint64_t set_size;
    std::uint64_t distance_count;
    double mattila;
    double bound_mattila;   // q when the Mattila value vanishes, else min(q, q/M)
    double s_emp4;
    double bound_exponent;  // min(q, q^{1-d} (#E)^{4 s_emp(4)})
    double ratio_mattila;
    double ratio_exponent;
};
/// Needs odd q and #E >= 2.
DistanceReport distance_bound_report(const PointSet& e);
std::string distance_csv(const DistanceReport& rep);

/// Row-major d x d matrices A with A^T A = I, enumerated by column search.
using OrthMatrix = std::vector<felem>;
std::vector<OrthMatrix> orthogonal_group(const Field& field, std::uint32_t d);

/// Auditable counting convention: vertices are ordered (k+1)-tuples of
/// DISTINCT points, and a signature is the full (k+1)x(k+1) matrix of
/// squared distances.
inline constexpr const char* kSimplexConvention =
    "ordered (k+1)-tuples of distinct points; full squared-distance-matrix signatures";

struct SimplexCensus {
    std::uint32_t k = 0;
    std::uint64_t signature_count = 0;  // distinct squared-distance matrices of
                                        // ordered (k+1)-tuples of distinct points
    std::optional<std::uint64_t> orbit_count;  // exact orbits under translations + O_d
    std::string degenerate_note;
};
/// The orbit oracle is skipped (with a note) when |O_d| times the tuple count
/// exceeds the census budget; the signature census is always returned.
SimplexCensus simplex_census(const PointSet& e, std::uint32_t k, bool with_orbit_oracle);
std::string census_csv(const PointSet& e, const std::string& set_name, const SimplexCensus& c);

/// The exact counting chain behind the sumset lower bound:
/// (prod #E_i)^2 <= #(sum E_i) * (q^{-d} prod (#E_i)^2 + q^{2kd} prod ||T_i||_{2p_i}^2)
/// for Hoelder conjugate p_i. slack is max(0, lhs/rhs - 1) and must vanish.
struct SumsetBoundReport {
    double lhs = 0;
    double rhs = 0;
    double slack = 0;
    std::uint64_t sumset_size = 0;
    double fiber_l2 = 0;                    // sum_z f(z)^2
    double fiber_plancherel_residual = 0;   // vs q^{(2k-1)d} sum_m prod |T_i(m)|^2
};
SumsetBoundReport sumset_bound_check(const std::vector<const PointSet*>& parts,
                                     const std::vector<double>& ps);

/// Two-sided control of ||T_{E+E}||_p by ||T_E||_{2p}^2 for Sidon E:
/// q^d ||T_E||_{2p}^2 / 2 - q^{-d} #E <= ||T_{E+E}||_p <= q^{-d} #E + q^d ||T_E||_{2p}^2 / 2.
struct SidonSumReport {
    double lower = 0;
    double value = 0;
    double upper = 0;
    bool holds = false;
    double s_emp = 0;      // exponent of E at this p
    double two_over_p = 0;
};
SidonSumReport sidon_sum_check(const PointSet& e, double p);

}  // namespace fqsalem
