#include "fqsalem/charsums.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

#include "fqsalem/constructions.hpp"
#include "fqsalem/detail/numeric.hpp"
#include "fqsalem/spectrum.hpp"

namespace fqsalem {
namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::complex<double> sum_over_images(const Field& f, const std::vector<Point>& images,
                                     const Point& z) {
    std::complex<double> acc{0.0, 0.0};
    for (const Point& y : images) {
        felem e = 0;
        for (std::size_t j = 0; j < z.size(); ++j) e = f.add(e, f.mul(z[j], y[j]));
        acc += f.chi(e);
    }
    return acc;
}

CharSumGrid grid_from_images(const Field& f, const std::vector<Point>& images,
                             std::uint32_t d, SumKind kind) {
    const Ambient amb(f, d);
    CharSumGrid grid{amb, kind, std::vector<std::complex<double>>(amb.size)};
    for (std::uint64_t zi = 0; zi < amb.size; ++zi)
        grid.values[zi] = sum_over_images(f, images, amb.decode(zi));
    return grid;
}

std::vector<Point> poly_images(const Field& f, const std::vector<Poly>& polys) {
    std::vector<Point> images(f.q(), Point(polys.size()));
    for (felem x = 0; x < f.q(); ++x)
        for (std::size_t j = 0; j < polys.size(); ++j)
            images[x][j] = f.eval_poly(polys[j], x);
    return images;
}

std::vector<Point> kloosterman_images(const Field& f, bool with_zero) {
    std::vector<Point> images;
    if (with_zero) images.push_back(Point{0, 0});
    for (felem x = 1; x < f.q(); ++x) images.push_back(Point{x, f.inv(x)});
    return images;
}

CharSpectrumLink link_from_images(const Field& f, const std::vector<Point>& images,
                                  std::uint32_t d) {
    const Ambient amb(f, d);
    PointSet image_set(amb);
    for (const Point& y : images) image_set.insert_point(y);

    CharSpectrumLink link;
    link.image_size = image_set.size();
    link.injective = image_set.size() == images.size();
    if (!link.injective) return link;

    const FourierTable table = fourier_transform(image_set);
    const double qd = static_cast<double>(amb.size);
    for (std::uint64_t zi = 0; zi < amb.size; ++zi) {
        const std::complex<double> lhs = qd * std::conj(table.values()[zi]);
        const std::complex<double> rhs = sum_over_images(f, images, amb.decode(zi));
        link.max_residual = std::max(link.max_residual, std::abs(lhs - rhs));
    }
    return link;
}

}  // namespace

std::complex<double> char_sum(const Field& field, const std::vector<Poly>& f, const Point& z) {
    require(f.size() == z.size(), "dimension mismatch between map and frequency");
    return sum_over_images(field, poly_images(field, f), z);
}

CharSumGrid char_sum_grid(const Field& field, const std::vector<Poly>& f) {
    require(!f.empty(), "char sum grid needs at least one coordinate polynomial");
    return grid_from_images(field, poly_images(field, f),
                            static_cast<std::uint32_t>(f.size()), SumKind::kGeneral);
}

CharSumGrid kloosterman_grid(const Field& field) {
    return grid_from_images(field, kloosterman_images(field, false), 2, SumKind::kKloosterman);
}

CharSumGrid weil_grid(const Field& field) {
    return grid_from_images(field, poly_images(field, {Poly{0, 1}, Poly{0, 0, 1}}), 2,
                            SumKind::kWeil);
}

double charsum_lp(const CharSumGrid& grid, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("charsum moment requires p >= 1");
    const std::uint64_t n = grid.ambient.size;
    if (std::isinf(p)) {
        double mx = 0.0;
        for (std::uint64_t i = 1; i < n; ++i) mx = std::max(mx, std::abs(grid.values[i]));
        return mx;
    }
    detail::Accumulator acc;
    for (std::uint64_t i = 1; i < n; ++i) acc.add(std::pow(std::abs(grid.values[i]), p));
    return std::pow(acc.value() / static_cast<double>(n), 1.0 / p);
}

CharSpectrumLink char_spectrum_link(const Field& field, const std::vector<Poly>& f,
                                    std::uint32_t d) {
    require(f.size() == d, "one polynomial per coordinate required");
    return link_from_images(field, poly_images(field, f), d);
}

KloostermanCheck kloosterman_pointwise_check(const Field& field) {
    require(field.q() % 2 == 1, "the inverse-curve fiber analysis needs odd q");
    const std::uint64_t q = field.q();
    const CharSumGrid grid = kloosterman_grid(field);
    const Ambient& amb = grid.ambient;

    KloostermanCheck check;
    check.worst_ratio = 0.0;
    const double bound = 2.0 * std::sqrt(static_cast<double>(q));
    for (std::uint64_t zi = 0; zi < amb.size; ++zi) {
        const Point z = amb.decode(zi);
        if (z[0] == 0 || z[1] == 0) continue;
        check.worst_ratio = std::max(check.worst_ratio, std::abs(grid.values[zi]) / bound);
    }
    check.pointwise_ok = check.worst_ratio <= 1.0 + 1e-9;

    // Fiber counts of the extended curve E = {(x, 1/x)} u {(0,0)}.
    const std::vector<Point> images = kloosterman_images(field, true);
    std::map<std::uint64_t, std::uint64_t> fibers;
    for (const Point& u : images)
        for (const Point& v : images) {
            const Point s{field.add(u[0], v[0]), field.add(u[1], v[1])};
            ++fibers[amb.encode(s)];
        }
    std::map<std::uint64_t, std::uint64_t> seen;  // fiber value -> multiplicity
    for (const auto& [slot, count] : fibers) ++seen[count];
    for (const auto& [value, times] : seen) check.fiber_values.push_back(value);
    check.zero_fiber = fibers.count(0) ? fibers.at(0) : 0;

    // The two orderings of {(0,0), f(y)} always hit a curve point; the curve
    // pair solving x^2 - xy + y^2 = 0 adds two more when -3 is a non-zero
    // square (q = 1 mod 3) and folds onto the diagonal rep in characteristic 3.
    std::vector<std::uint64_t> allowed{1, 2, q};
    if (field.p() == 3) allowed.push_back(3);
    if (q % 3 == 1) allowed.push_back(4);
    check.fibers_ok = std::all_of(
        check.fiber_values.begin(), check.fiber_values.end(), [&](std::uint64_t v) {
            return std::find(allowed.begin(), allowed.end(), v) != allowed.end();
        });
    return check;
}

WeilPointwiseReport weil_pointwise_check(const Field& field, const std::vector<Poly>& f) {
    require(!f.empty(), "weil check needs coordinate polynomials");
    const auto d = static_cast<std::uint32_t>(f.size());
    const Ambient amb(field, d);
    const std::vector<Point> images = poly_images(field, f);
    const double sq = std::sqrt(static_cast<double>(field.q()));

    std::size_t maxlen = 0;
    for (const Poly& fi : f) maxlen = std::max(maxlen, fi.size());

    WeilPointwiseReport rep;
    rep.ok = true;
    for (std::uint64_t zi = 1; zi < amb.size; ++zi) {
        const Point z = amb.decode(zi);
        // Combined phase polynomial sum_j z_j f_j; only non-constant shapes count.
        std::size_t deg = 0;
        for (std::size_t t = 1; t < maxlen; ++t) {
            felem c = 0;
            for (std::uint32_t j = 0; j < d; ++j)
                if (t < f[j].size()) c = field.add(c, field.mul(z[j], f[j][t]));
            if (c != 0) deg = t;
        }
        if (deg == 0) {
            ++rep.constant_phases;
            continue;
        }
        if (deg % field.p() == 0) {
            ++rep.char_divides_degree;
            continue;
        }
        const double value = std::abs(sum_over_images(field, images, z));
        ++rep.asserted;
        if (deg == 1) {
            if (value > 1e-6) rep.ok = false;
            continue;
        }
        const double bound = (static_cast<double>(deg) - 1.0) * sq;
        rep.worst_ratio = std::max(rep.worst_ratio, value / bound);
        if (value > bound + 1e-6) rep.ok = false;
    }
    return rep;
}

std::string grid_csv(const CharSumGrid& grid) {
    const Ambient& amb = grid.ambient;
    std::string out = amb.dim == 2 ? "a,b,re,im,abs\n" : "z,re,im,abs\n";
    for (std::uint64_t zi = 0; zi < amb.size; ++zi) {
        const auto v = grid.values[zi];
        if (amb.dim == 2) {
            const Point z = amb.decode(zi);
            out += std::to_string(z[0]) + "," + std::to_string(z[1]);
        } else {
            out += std::to_string(zi);
        }
        out += "," + fmt_double(v.real()) + "," + fmt_double(v.imag()) + "," +
               fmt_double(std::abs(v)) + "\n";
    }
    return out;
}

std::string moment_summary_json(const CharSumGrid& grid, const std::vector<double>& ps) {
    const double q = static_cast<double>(grid.ambient.field.q());
    std::string kind = grid.kind == SumKind::kWeil          ? "weil"
                       : grid.kind == SumKind::kKloosterman ? "kloosterman"
                                                            : "general";
    double ref = q;  // trivial pointwise bound
    if (grid.kind == SumKind::kWeil) ref = 2.0 * std::sqrt(q);
    if (grid.kind == SumKind::kKloosterman) ref = 3.0 * std::sqrt(q);

    std::string out = "{\"kind\":\"" + kind + "\",\"field\":\"" +
                      grid.ambient.field.spec_string() + "\",\"moments\":[";
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const double value = charsum_lp(grid, ps[i]);
        if (i) out += ',';
        out += "{\"p\":\"" + format_p(ps[i]) + "\",\"value\":" + fmt_double(value) +
               ",\"bound\":" + fmt_double(ref) + ",\"ratio\":" + fmt_double(value / ref) + "}";
    }
    return out + "]}";
}

/// Exposed for tests that exercise the extended inverse curve.
std::vector<Point> kloosterman_extended_images(const Field& field) {
    return kloosterman_images(field, true);
}

CharSpectrumLink char_spectrum_link_images(const Field& field,
                                           const std::vector<Point>& images,
                                           std::uint32_t d) {
    return link_from_images(field, images, d);
}

}  // namespace fqsalem
