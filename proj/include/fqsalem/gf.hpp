#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace fqsalem {

/// Canonical index of a field element: idx = sum coeffs[i] * p^i, so 0 is the
/// additive and 1 the multiplicative identity.
using felem = std::uint32_t;

/// A univariate polynomial over the field, coefficient list in ascending
/// degree, entries are element indices.
using Poly = std::vector<felem>;

/// Exact arithmetic in GF(p^m) for q = p^m up to 2^20, with the trace-based
/// additive character chi(a) = exp(2*pi*i*Tr(a)/p).
///
/// The modulus polynomial is monic, irreducible over Z_p, and stored as a
/// coefficient vector c0..cm (empty for m = 1). When none is supplied the
/// lexicographically smallest irreducible (comparing c0, c1, ... in order) is
/// selected, so element indices are reproducible across machines and runs.
///
/// All tables are immutable after construction; instances are safe to share
/// across threads.
class Field {
public:
    /// Builds GF(p^m). Throws std::invalid_argument for non-prime p, a
    /// reducible or malformed modulus, or q > 2^20.
    static Field make(std::uint32_t p, std::uint32_t m,
                      std::vector<std::uint32_t> modulus = {});

    /// Accepts "p", "p^m", "p^m/c0,c1,...,cm", or a plain prime power such as
    /// "49". The two short forms select the canonical modulus.
    static Field parse(std::string_view spec);

    /// "p" for prime fields, otherwise "p^m/c0,c1,...,cm".
    std::string spec_string() const;

    std::uint32_t p() const { return p_; }
    std::uint32_t m() const { return m_; }
    std::uint64_t q() const { return q_; }
    const std::vector<std::uint32_t>& modulus() const { return modulus_; }

    felem add(felem a, felem b) const;
    felem sub(felem a, felem b) const;
    felem neg(felem a) const;
    felem mul(felem a, felem b) const;
    /// Multiplicative inverse; throws std::domain_error on 0.
    felem inv(felem a) const;
    felem pow(felem a, std::uint64_t e) const;

    /// Tr(a) = a + a^p + ... + a^(p^(m-1)), reduced into [0, p).
    std::uint32_t trace(felem a) const { return trace_tab_[a]; }

    /// chi(a) = exp(2*pi*i*Tr(a)/p); non-trivial since Tr is onto Z_p.
    std::complex<double> chi(felem a) const { return chi_tab_[a]; }

    /// The set {x : x^2 = a}, ascending by index. Size 0 or 2 for a != 0 in
    /// odd characteristic; size 1 when p = 2 (squaring is a bijection).
    std::vector<felem> sqrt(felem a) const;

    std::vector<std::uint32_t> to_coeffs(felem a) const;
    felem from_coeffs(const std::vector<std::uint32_t>& coeffs) const;

    felem eval_poly(const Poly& f, felem x) const;

    /// p-th roots of unity: unit_root(r) = exp(2*pi*i*r/p) for r in [0, p).
    std::complex<double> unit_root(std::uint32_t r) const { return roots_[r % p_]; }

    /// Permutation b -> idx(G*coeffs(b)) for the Gram matrix G[i][j] =
    /// Tr(t^(i+j)) of the trace form. Satisfies Tr(a*b) = coeffs(a) . coeffs(gram_perm(b))
    /// digitwise mod p, which turns each transform axis pass into a plain
    /// (Z_p)^m DFT after index relabelling.
    const std::vector<felem>& gram_perm() const { return gram_perm_; }

    bool operator==(const Field& o) const {
        return p_ == o.p_ && m_ == o.m_ && modulus_ == o.modulus_;
    }
    bool operator!=(const Field& o) const { return !(*this == o); }

private:
    Field() = default;
    void init_tables();

    std::uint32_t p_ = 0;
    std::uint32_t m_ = 0;
    std::uint64_t q_ = 0;
    std::vector<std::uint32_t> modulus_;  // c0..cm, empty for m == 1

    std::vector<std::uint32_t> trace_tab_;           // q entries in [0, p)
    std::vector<std::complex<double>> chi_tab_;      // q entries
    std::vector<std::complex<double>> roots_;        // p-th roots of unity
    std::vector<felem> mul_tab_;                     // q*q when q <= 256
    std::vector<std::vector<std::uint32_t>> redpow_; // t^(m+i) reduced, m > 1
    std::vector<felem> gram_perm_;

    struct SqrtCache {
        std::once_flag flag;
        std::vector<felem> tab;  // smallest root per square, q as sentinel
    };
    std::shared_ptr<SqrtCache> sqrt_cache_;  // built on first use, then read-only

    felem mul_slow(felem a, felem b) const;
};

/// Largest supported point count q^d; the dense representations scan the full
/// box, so this caps every ambient.
inline constexpr std::uint64_t kMaxAmbientSize = std::uint64_t(1) << 24;

/// Largest supported field size.
inline constexpr std::uint64_t kMaxFieldSize = std::uint64_t(1) << 20;

}  // namespace fqsalem
