#include "fqsalem/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "fqsalem/detail/numeric.hpp"

namespace fqsalem {
namespace {

using cdouble = std::complex<double>;

// One axis pass, staged: relabel b -> gram_perm(twist*b), then m independent
// radix-p digit DFTs with kernel exp(-2*pi*i*j*k/p). No twiddles between
// stages since the additive group is (Z_p)^m, not Z_{p^m}.
struct AxisPlan {
    std::uint32_t p, m;
    std::uint64_t q;
    std::vector<felem> perm;       // composed relabelling per input index
    std::vector<cdouble> dft;      // p x p kernel, row-major
    std::vector<cdouble> chi_neg;  // conj(chi(k)), for the naive kernel
    const Field* field;
};

AxisPlan make_plan(const Field& f, felem twist, TransformMethod method) {
    AxisPlan plan;
    plan.p = f.p();
    plan.m = f.m();
    plan.q = f.q();
    plan.field = &f;
    plan.perm.resize(plan.q);
    if (method == TransformMethod::kStaged) {
        const auto& gp = f.gram_perm();
        for (felem b = 0; b < plan.q; ++b) plan.perm[b] = gp[f.mul(twist, b)];
        plan.dft.resize(std::size_t(plan.p) * plan.p);
        for (std::uint32_t j = 0; j < plan.p; ++j)
            for (std::uint32_t k = 0; k < plan.p; ++k)
                plan.dft[std::size_t(j) * plan.p + k] =
                    std::conj(f.unit_root(std::uint32_t(std::uint64_t(j) * k % plan.p)));
    } else {
        for (felem b = 0; b < plan.q; ++b) plan.perm[b] = f.mul(twist, b);
        plan.chi_neg.resize(plan.q);
        for (felem k = 0; k < plan.q; ++k) plan.chi_neg[k] = std::conj(f.chi(k));
    }
    return plan;
}

void line_staged(const AxisPlan& plan, cdouble* line, cdouble* scratch) {
    const std::uint64_t q = plan.q;
    const std::uint32_t p = plan.p;
    for (std::uint64_t b = 0; b < q; ++b) scratch[plan.perm[b]] = line[b];
    std::uint64_t stride = 1;
    std::vector<cdouble> tmp(p);
    for (std::uint32_t s = 0; s < plan.m; ++s) {
        const std::uint64_t groups = q / (stride * p);
        for (std::uint64_t g = 0; g < groups; ++g) {
            for (std::uint64_t lo = 0; lo < stride; ++lo) {
                const std::uint64_t base = g * stride * p + lo;
                for (std::uint32_t k = 0; k < p; ++k) tmp[k] = scratch[base + k * stride];
                for (std::uint32_t j = 0; j < p; ++j) {
                    const cdouble* row = &plan.dft[std::size_t(j) * p];
                    cdouble acc{0.0, 0.0};
                    for (std::uint32_t k = 0; k < p; ++k) acc += row[k] * tmp[k];
                    scratch[base + j * stride] = acc;
                }
            }
        }
        stride *= p;
    }
    std::copy(scratch, scratch + q, line);
}

void line_naive(const AxisPlan& plan, cdouble* line, cdouble* scratch) {
    const std::uint64_t q = plan.q;
    const Field& f = *plan.field;
    for (felem a = 0; a < q; ++a) {
        cdouble acc{0.0, 0.0};
        for (felem b = 0; b < q; ++b) acc += line[b] * plan.chi_neg[f.mul(a, plan.perm[b])];
        scratch[a] = acc;
    }
    std::copy(scratch, scratch + q, line);
}

}  // namespace

FourierTable::FourierTable(Ambient amb, std::vector<cdouble> values,
                           std::uint64_t set_size, felem twist)
    : amb_(std::move(amb)), values_(std::move(values)), set_size_(set_size), twist_(twist) {}

FourierTable fourier_transform(const PointSet& set, const TransformOptions& opts) {
    const Ambient& amb = set.ambient();
    const std::uint64_t n = amb.size;
    const std::uint64_t q = amb.field.q();
    if (opts.twist == 0) throw std::invalid_argument("character twist must be non-zero");

    std::vector<cdouble> vals(n, cdouble{0.0, 0.0});
    set.for_each_index([&](std::uint64_t idx) { vals[idx] = cdouble{1.0, 0.0}; });

    const AxisPlan plan = make_plan(amb.field, opts.twist, opts.method);
    const std::uint64_t lines = n / q;
    for (std::uint32_t axis = 0; axis < amb.dim; ++axis) {
        std::uint64_t stride = 1;
        for (std::uint32_t i = 0; i < axis; ++i) stride *= q;
        detail::parallel_for(lines, opts.workers, [&](std::uint64_t lo, std::uint64_t hi) {
            std::vector<cdouble> line(q), scratch(q);
            for (std::uint64_t l = lo; l < hi; ++l) {
                const std::uint64_t low = l % stride;
                const std::uint64_t high = l / stride;
                const std::uint64_t base = high * stride * q + low;
                for (std::uint64_t t = 0; t < q; ++t) line[t] = vals[base + t * stride];
                if (opts.method == TransformMethod::kStaged)
                    line_staged(plan, line.data(), scratch.data());
                else
                    line_naive(plan, line.data(), scratch.data());
                for (std::uint64_t t = 0; t < q; ++t) vals[base + t * stride] = line[t];
            }
        });
    }
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& v : vals) v *= scale;
    return FourierTable(amb, std::move(vals), set.size(), opts.twist);
}

double lp_norm(const FourierTable& table, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm requires p >= 1");
    const auto& vals = table.values();
    const std::uint64_t n = table.ambient().size;
    if (std::isinf(p)) {
        double mx = 0.0;
        for (std::uint64_t i = 1; i < n; ++i) mx = std::max(mx, std::abs(vals[i]));
        return mx;
    }
    detail::Accumulator acc;
    if (p == 2.0) {
        for (std::uint64_t i = 1; i < n; ++i) acc.add(std::norm(vals[i]));
    } else if (p == 4.0) {
        for (std::uint64_t i = 1; i < n; ++i) {
            const double m2 = std::norm(vals[i]);
            acc.add(m2 * m2);
        }
    } else if (p == 8.0) {
        for (std::uint64_t i = 1; i < n; ++i) {
            const double m2 = std::norm(vals[i]);
            acc.add(m2 * m2 * m2 * m2);
        }
    } else {
        for (std::uint64_t i = 1; i < n; ++i) acc.add(std::pow(std::abs(vals[i]), p));
    }
    return std::pow(acc.value() / static_cast<double>(n), 1.0 / p);
}

double salem_exponent_from(double lp, std::uint64_t ambient_size, std::uint64_t set_size) {
    if (set_size < 2) throw std::invalid_argument("salem exponent requires #E >= 2");
    // A vanishing off-origin spectrum (possible only for the full box) shows
    // up as rounding dust; treat q^d * lp below 1e-12 * #E as zero.
    if (static_cast<double>(ambient_size) * lp <= 1e-12 * static_cast<double>(set_size))
        return kInfP;
    return 1.0 - std::log(static_cast<double>(ambient_size) * lp) /
                     std::log(static_cast<double>(set_size));
}

double salem_exponent(const PointSet& set, double p) {
    const FourierTable t = fourier_transform(set);
    return salem_exponent_from(lp_norm(t, p), set.ambient().size, set.size());
}

SpectralBounds spectral_bounds(std::uint64_t ambient_size, std::uint64_t set_size, double p) {
    const double n = static_cast<double>(ambient_size);
    const double e = static_cast<double>(set_size);
    SpectralBounds b{};
    b.trivial = e / n;
    const double pp = std::isinf(p) ? p : std::max(p, 2.0);
    b.interpolation = std::pow(e, 1.0 - 1.0 / pp) / n;
    b.lower = std::sqrt(std::max(0.0, 1.0 - e / n)) * std::sqrt(e) / n;
    return b;
}

double plancherel_residual(const FourierTable& table) {
    const std::uint64_t n = table.ambient().size;
    if (table.set_size() == 0) return 0.0;
    detail::Accumulator acc;
    for (std::uint64_t i = 0; i < n; ++i) acc.add(std::norm(table.values()[i]));
    const double expected = static_cast<double>(table.set_size()) / static_cast<double>(n);
    return std::abs(acc.value() - expected) / expected;
}

double plancherel_residual(const PointSet& set) {
    return plancherel_residual(fourier_transform(set));
}

SpectralProfile spectral_profile(const PointSet& set, const std::vector<double>& p_grid,
                                 const std::string& set_name, const TransformOptions& opts) {
    for (std::size_t i = 0; i < p_grid.size(); ++i) {
        if (!(p_grid[i] >= 1.0)) throw std::invalid_argument("profile grid entries must be >= 1");
        if (i && !(p_grid[i] >= p_grid[i - 1]))
            throw std::invalid_argument("profile grid must be ascending");
    }
    const FourierTable table = fourier_transform(set, opts);
    SpectralProfile prof;
    prof.field_spec = set.ambient().field.spec_string();
    prof.dim = set.ambient().dim;
    prof.set_name = set_name;
    prof.set_size = set.size();
    prof.ambient_size = set.ambient().size;
    for (double p : p_grid) {
        ProfileRecord rec{};
        rec.p = p;
        rec.lp = lp_norm(table, p);
        rec.s_emp = set.size() >= 2 ? salem_exponent_from(rec.lp, prof.ambient_size, set.size())
                                    : std::numeric_limits<double>::quiet_NaN();
        rec.bounds = spectral_bounds(prof.ambient_size, set.size(), p);
        prof.records.push_back(rec);
    }
    return prof;
}

namespace {
std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find(',') == std::string::npos && s.find('"') == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}
}  // namespace

std::string format_p(double p) { return std::isinf(p) ? "inf" : fmt_double(p); }

double parse_p(const std::string& token) {
    if (token == "inf" || token == "Inf" || token == "INF") return kInfP;
    const double p = std::stod(token);
    if (!(p >= 1.0)) throw std::invalid_argument("p must be >= 1 or 'inf'");
    return p;
}

std::string profile_csv(const SpectralProfile& prof) {
    std::string out =
        "field,d,set_name,set_size,p,lp_norm,s_emp,bound_trivial,bound_interp,bound_lower\n";
    for (const auto& r : prof.records) {
        out += prof.field_spec + "," + std::to_string(prof.dim) + "," +
               csv_field(prof.set_name) + "," +
               std::to_string(prof.set_size) + "," + format_p(r.p) + "," + fmt_double(r.lp) +
               "," + fmt_double(r.s_emp) + "," + fmt_double(r.bounds.trivial) + "," +
               fmt_double(r.bounds.interpolation) + "," + fmt_double(r.bounds.lower) + "\n";
    }
    return out;
}

}  // namespace fqsalem
