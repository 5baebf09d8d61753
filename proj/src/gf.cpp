#include "fqsalem/gf.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace fqsalem {
namespace {

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t f = 2; f * f <= n; ++f)
        if (n % f == 0) return false;
    return true;
}

using ZpPoly = std::vector<std::uint32_t>;  // ascending coefficients in [0, p)

std::size_t degree(const ZpPoly& f) {
    std::size_t d = f.size();
    while (d > 0 && f[d - 1] == 0) --d;
    return d == 0 ? 0 : d - 1;
}

// Remainder of a by b over Z_p, b non-zero.
ZpPoly poly_mod(ZpPoly a, const ZpPoly& b, std::uint32_t p) {
    const std::size_t db = degree(b);
    const std::uint32_t lead = b[db];
    // Modular inverse of the leading coefficient by Fermat.
    std::uint64_t lead_inv = 1, base = lead, e = p - 2;
    while (e) {
        if (e & 1) lead_inv = lead_inv * base % p;
        base = base * base % p;
        e >>= 1;
    }
    while (degree(a) >= db && !(degree(a) == 0 && a[0] == 0)) {
        const std::size_t da = degree(a);
        if (da < db) break;
        const std::uint64_t factor = a[da] * lead_inv % p;
        if (factor != 0) {
            for (std::size_t i = 0; i <= db; ++i) {
                std::uint64_t sub = factor * b[i] % p;
                a[da - db + i] = static_cast<std::uint32_t>(
                    (a[da - db + i] + p - sub) % p);
            }
        }
        a[da] = 0;
        if (da == db) break;
    }
    return a;
}

bool poly_is_zero(const ZpPoly& f) {
    return std::all_of(f.begin(), f.end(), [](std::uint32_t c) { return c == 0; });
}

// Exhaustive factor search: a monic polynomial of degree m >= 2 is reducible
// iff some monic divisor of degree in [1, m/2] divides it.
bool is_irreducible(const ZpPoly& f, std::uint32_t p) {
    const std::size_t m = degree(f);
    if (m == 0) return false;
    if (m == 1) return true;
    for (std::size_t k = 1; k <= m / 2; ++k) {
        std::uint64_t count = 1;
        for (std::size_t i = 0; i < k; ++i) count *= p;
        for (std::uint64_t n = 0; n < count; ++n) {
            ZpPoly g(k + 1, 0);
            std::uint64_t v = n;
            for (std::size_t i = 0; i < k; ++i) {
                g[i] = static_cast<std::uint32_t>(v % p);
                v /= p;
            }
            g[k] = 1;
            if (poly_is_zero(poly_mod(f, g, p))) return false;
        }
    }
    return true;
}

// First irreducible monic polynomial of degree m in lexicographic order of
// the tuple (c0, c1, ..., c_{m-1}).
ZpPoly canonical_modulus(std::uint32_t p, std::uint32_t m) {
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < m; ++i) count *= p;
    for (std::uint64_t n = 0; n < count; ++n) {
        ZpPoly f(m + 1, 0);
        std::uint64_t v = n;
        for (std::uint32_t i = m; i-- > 0;) {  // c0 is the most significant digit
            f[i] = static_cast<std::uint32_t>(v % p);
            v /= p;
        }
        f[m] = 1;
        if (is_irreducible(f, p)) return f;
    }
    throw std::logic_error("no irreducible polynomial found");  // unreachable
}

}  // namespace

Field Field::make(std::uint32_t p, std::uint32_t m, std::vector<std::uint32_t> modulus) {
    if (!is_prime(p)) throw std::invalid_argument("field characteristic must be prime, got " + std::to_string(p));
    if (m == 0) throw std::invalid_argument("extension degree must be positive");
    std::uint64_t q = 1;
    for (std::uint32_t i = 0; i < m; ++i) {
        q *= p;
        if (q > kMaxFieldSize)
            throw std::invalid_argument("field size p^m exceeds the supported limit 2^20");
    }
    if (m == 1) {
        if (!modulus.empty())
            throw std::invalid_argument("prime fields take no modulus polynomial");
    } else if (modulus.empty()) {
        modulus = canonical_modulus(p, m);
    } else {
        if (modulus.size() != m + 1 || modulus.back() != 1)
            throw std::invalid_argument("modulus must be monic of degree m");
        for (std::uint32_t c : modulus)
            if (c >= p) throw std::invalid_argument("modulus coefficients must lie in [0, p)");
        if (!is_irreducible(modulus, p))
            throw std::invalid_argument("modulus polynomial is reducible over Z_p");
    }

    Field f;
    f.p_ = p;
    f.m_ = m;
    f.q_ = q;
    f.modulus_ = std::move(modulus);
    f.init_tables();
    return f;
}

Field Field::parse(std::string_view spec) {
    const std::string s(spec);
    auto parse_u32 = [](const std::string& t) -> std::uint32_t {
        if (t.empty() || t[0] < '0' || t[0] > '9')
            throw std::invalid_argument("bad field spec token: " + t);
        std::size_t pos = 0;
        unsigned long v = std::stoul(t, &pos);
        if (pos != t.size() || v > 0xffffffffUL)
            throw std::invalid_argument("bad field spec token: " + t);
        return static_cast<std::uint32_t>(v);
    };
    const auto caret = s.find('^');
    if (caret == std::string::npos) {
        const std::uint64_t n = parse_u32(s);
        if (n < 2) throw std::invalid_argument("field size must be at least 2");
        std::uint64_t p = 2;
        while (n % p != 0) ++p;
        std::uint32_t m = 0;
        std::uint64_t v = n;
        while (v % p == 0) {
            v /= p;
            ++m;
        }
        if (v != 1)
            throw std::invalid_argument("'" + s + "' is not a prime power");
        return make(static_cast<std::uint32_t>(p), m);
    }
    const std::uint32_t p = parse_u32(s.substr(0, caret));
    const auto slash = s.find('/', caret);
    const std::uint32_t m = parse_u32(
        s.substr(caret + 1, (slash == std::string::npos ? s.size() : slash) - caret - 1));
    std::vector<std::uint32_t> modulus;
    if (slash != std::string::npos) {
        std::string rest = s.substr(slash + 1);
        std::size_t pos = 0;
        while (pos <= rest.size()) {
            auto comma = rest.find(',', pos);
            if (comma == std::string::npos) comma = rest.size();
            modulus.push_back(parse_u32(rest.substr(pos, comma - pos)));
            pos = comma + 1;
        }
    }
    return make(p, m, std::move(modulus));
}

std::string Field::spec_string() const {
    if (m_ == 1) return std::to_string(p_);
    std::string s = std::to_string(p_) + "^" + std::to_string(m_) + "/";
    for (std::size_t i = 0; i < modulus_.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(modulus_[i]);
    }
    return s;
}

felem Field::add(felem a, felem b) const {
    if (m_ == 1) return (a + b) % p_;
    felem r = 0, scale = 1;
    for (std::uint32_t i = 0; i < m_; ++i) {
        r += (a % p_ + b % p_) % p_ * scale;
        a /= p_;
        b /= p_;
        scale *= p_;
    }
    return r;
}

felem Field::sub(felem a, felem b) const { return add(a, neg(b)); }

felem Field::neg(felem a) const {
    if (m_ == 1) return a == 0 ? 0 : p_ - a;
    felem r = 0, scale = 1;
    for (std::uint32_t i = 0; i < m_; ++i) {
        const felem d = a % p_;
        r += (d == 0 ? 0 : p_ - d) * scale;
        a /= p_;
        scale *= p_;
    }
    return r;
}

felem Field::mul_slow(felem a, felem b) const {
    if (m_ == 1) return static_cast<felem>(std::uint64_t(a) * b % p_);
    std::vector<std::uint64_t> conv(2 * m_ - 1, 0);
    std::vector<std::uint32_t> da = to_coeffs(a), db = to_coeffs(b);
    for (std::uint32_t i = 0; i < m_; ++i) {
        if (da[i] == 0) continue;
        for (std::uint32_t j = 0; j < m_; ++j)
            conv[i + j] += std::uint64_t(da[i]) * db[j];
    }
    // Fold degrees >= m through the reduction table for t^(m+i).
    for (std::uint32_t k = 2 * m_ - 2; k >= m_; --k) {
        const std::uint64_t c = conv[k] % p_;
        if (c != 0)
            for (std::uint32_t j = 0; j < m_; ++j)
                conv[j] += c * redpow_[k - m_][j];
        conv[k] = 0;
        if (k == m_) break;
    }
    felem r = 0, scale = 1;
    for (std::uint32_t i = 0; i < m_; ++i) {
        r += static_cast<felem>(conv[i] % p_) * scale;
        scale *= p_;
    }
    return r;
}

felem Field::mul(felem a, felem b) const {
    if (!mul_tab_.empty()) return mul_tab_[std::size_t(a) * q_ + b];
    return mul_slow(a, b);
}

felem Field::pow(felem a, std::uint64_t e) const {
    felem r = 1;
    while (e) {
        if (e & 1) r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

felem Field::inv(felem a) const {
    if (a == 0) throw std::domain_error("inversion of 0 in GF(" + std::to_string(q_) + ")");
    return pow(a, q_ - 2);
}

std::vector<std::uint32_t> Field::to_coeffs(felem a) const {
    std::vector<std::uint32_t> c(m_);
    for (std::uint32_t i = 0; i < m_; ++i) {
        c[i] = a % p_;
        a /= p_;
    }
    return c;
}

felem Field::from_coeffs(const std::vector<std::uint32_t>& coeffs) const {
    if (coeffs.size() > m_)
        throw std::invalid_argument("coefficient vector longer than extension degree");
    felem r = 0, scale = 1;
    for (std::uint32_t i = 0; i < m_; ++i) {
        const std::uint32_t c = i < coeffs.size() ? coeffs[i] : 0;
        if (c >= p_) throw std::invalid_argument("coefficient out of range [0, p)");
        r += c * scale;
        scale *= p_;
    }
    return r;
}

felem Field::eval_poly(const Poly& f, felem x) const {
    felem acc = 0;
    for (std::size_t i = f.size(); i-- > 0;) acc = add(mul(acc, x), f[i]);
    return acc;
}

std::vector<felem> Field::sqrt(felem a) const {
    std::call_once(sqrt_cache_->flag, [this] {
        auto& tab = sqrt_cache_->tab;
        tab.assign(q_, static_cast<felem>(q_));
        for (felem x = 0; x < q_; ++x) {
            const felem sq = mul(x, x);
            if (tab[sq] == static_cast<felem>(q_) || x < tab[sq]) tab[sq] = x;
        }
    });
    const felem r = sqrt_cache_->tab[a];
    if (r == static_cast<felem>(q_)) return {};
    const felem nr = neg(r);
    if (nr == r) return {r};
    return {std::min(r, nr), std::max(r, nr)};
}

void Field::init_tables() {
    if (m_ > 1) {
        // redpow_[i] = coefficients of t^(m+i) reduced modulo the modulus.
        redpow_.assign(m_ - 1, std::vector<std::uint32_t>(m_, 0));
        std::vector<std::uint32_t> cur(m_);
        for (std::uint32_t j = 0; j < m_; ++j)
            cur[j] = (p_ - modulus_[j]) % p_;  // t^m = -(c0 + ... + c_{m-1} t^{m-1})
        redpow_[0] = cur;
        for (std::uint32_t i = 1; i + 1 < m_; ++i) {
            std::vector<std::uint32_t> next(m_, 0);
            const std::uint32_t top = cur[m_ - 1];
            for (std::uint32_t j = m_ - 1; j > 0; --j) next[j] = cur[j - 1];
            next[0] = 0;
            if (top != 0)
                for (std::uint32_t j = 0; j < m_; ++j)
                    next[j] = static_cast<std::uint32_t>(
                        (next[j] + std::uint64_t(top) * redpow_[0][j]) % p_);
            redpow_[i] = next;
            cur = next;
        }
    }

    if (q_ <= 256) {
        mul_tab_.resize(std::size_t(q_) * q_);
        for (felem a = 0; a < q_; ++a)
            for (felem b = 0; b < q_; ++b)
                mul_tab_[std::size_t(a) * q_ + b] = mul_slow(a, b);
    }

    roots_.resize(p_);
    for (std::uint32_t r = 0; r < p_; ++r) {
        const double ang = 2.0 * std::numbers::pi * r / p_;
        roots_[r] = {std::cos(ang), std::sin(ang)};
    }

    // Tr(t^k) for k <= 2m-2 drives both the trace table (by linearity) and
    // the Gram matrix of the trace form.
    std::vector<std::uint32_t> basis_tr(2 * m_ - 1);
    {
        felem tk = 1;
        const felem t = m_ == 1 ? 1 : from_coeffs({0, 1});
        for (std::uint32_t k = 0; k < 2 * m_ - 1; ++k) {
            felem s = 0, e = tk;
            for (std::uint32_t j = 0; j < m_; ++j) {
                s = add(s, e);
                e = pow(e, p_);
            }
            if (s >= p_) throw std::logic_error("trace escaped the prime subfield");
            basis_tr[k] = s;
            tk = mul(tk, t);
        }
    }

    trace_tab_.resize(q_);
    chi_tab_.resize(q_);
    for (felem a = 0; a < q_; ++a) {
        felem v = a;
        std::uint64_t s = 0;
        for (std::uint32_t i = 0; i < m_; ++i) {
            s += std::uint64_t(v % p_) * basis_tr[i];
            v /= p_;
        }
        trace_tab_[a] = static_cast<std::uint32_t>(s % p_);
        chi_tab_[a] = roots_[trace_tab_[a]];
    }

    gram_perm_.resize(q_);
    if (m_ == 1) {
        for (felem b = 0; b < q_; ++b) gram_perm_[b] = b;
    } else {
        for (felem b = 0; b < q_; ++b) {
            felem v = b;
            std::vector<std::uint64_t> out(m_, 0);
            for (std::uint32_t j = 0; j < m_; ++j) {
                const std::uint64_t digit = v % p_;
                v /= p_;
                if (digit)
                    for (std::uint32_t i = 0; i < m_; ++i)
                        out[i] += digit * basis_tr[i + j];
            }
            felem r = 0, scale = 1;
            for (std::uint32_t i = 0; i < m_; ++i) {
                r += static_cast<felem>(out[i] % p_) * scale;
                scale *= p_;
            }
            gram_perm_[b] = r;
        }
    }

    sqrt_cache_ = std::make_shared<SqrtCache>();
}

}  // namespace fqsalem
