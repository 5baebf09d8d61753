#include "fqsalem/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "fqsalem/constructions.hpp"
#include "fqsalem/detail/numeric.hpp"

namespace fqsalem {
namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

std::uint64_t add_indices(const Ambient& amb, std::uint64_t a, const Point& y) {
    Point x = amb.decode(a);
    for (std::uint32_t j = 0; j < amb.dim; ++j) x[j] = amb.field.add(x[j], y[j]);
    return amb.encode(x);
}

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

SumsetResult sumset(const std::vector<const PointSet*>& parts) {
    require(parts.size() >= 2, "sumset needs at least two sets");
    const Ambient& amb = parts[0]->ambient();
    for (const PointSet* p : parts)
        require(p->ambient() == amb, "ambient mismatch in sumset");

    std::vector<std::uint64_t> fibers(amb.size, 0);
    parts[0]->for_each_index([&](std::uint64_t i) { fibers[i] = 1; });
    for (std::size_t pi = 1; pi < parts.size(); ++pi) {
        std::vector<Point> shifts;
        parts[pi]->for_each_index(
            [&](std::uint64_t i) { shifts.push_back(amb.decode(i)); });
        std::vector<std::uint64_t> next(amb.size, 0);
        for (std::uint64_t z = 0; z < amb.size; ++z) {
            if (fibers[z] == 0) continue;
            for (const Point& y : shifts) next[add_indices(amb, z, y)] += fibers[z];
        }
        fibers.swap(next);
    }

    PointSet out(amb);
    for (std::uint64_t z = 0; z < amb.size; ++z)
        if (fibers[z]) out.insert(z);
    return {std::move(out), std::move(fibers)};
}

PointSet difference_set(const PointSet& e) {
    require(e.size() >= 1, "difference set of an empty set");
    const PointSet neg = e.negated();
    return sumset({&e, &neg}).set;
}

std::uint64_t direction_count(const PointSet& e) {
    require(e.size() >= 1, "direction count of an empty set");
    if (e.size() == 1) return 0;
    const Ambient& amb = e.ambient();
    const PointSet diff = difference_set(e);
    std::unordered_set<std::uint64_t> reps;
    diff.for_each_index([&](std::uint64_t i) {
        if (i == 0) return;
        Point v = amb.decode(i);
        std::uint32_t lead = 0;
        while (v[lead] == 0) ++lead;
        const felem scale = amb.field.inv(v[lead]);
        for (std::uint32_t j = 0; j < amb.dim; ++j) v[j] = amb.field.mul(v[j], scale);
        reps.insert(amb.encode(v));
    });
    return reps.size();
}

std::vector<felem> distance_set(const PointSet& e) {
    require(e.size() >= 1, "distance set of an empty set");
    const Ambient& amb = e.ambient();
    const PointSet diff = difference_set(e);
    std::set<felem> values;
    diff.for_each_index(
        [&](std::uint64_t i) { values.insert(norm_sq(amb, amb.decode(i))); });
    return {values.begin(), values.end()};
}

SphericalEnergy spherical_energy(const FourierTable& table, double epsilon) {
    const Ambient& amb = table.ambient();
    const std::uint64_t q = amb.field.q();
    std::vector<detail::Accumulator> acc(q);
    std::vector<std::uint64_t> sizes(q, 0);
    for (std::uint64_t i = 0; i < amb.size; ++i) {
        const felem t = norm_sq(amb, amb.decode(i));
        ++sizes[t];
        if (i != 0) acc[t].add(std::norm(table.values()[i]));
    }
    SphericalEnergy out;
    out.energy.resize(q);
    for (std::uint64_t t = 0; t < q; ++t) out.energy[t] = acc[t].value();
    out.sphere_sizes = std::move(sizes);
    out.epsilon = epsilon;

    require(table.set_size() > 0, "spherical energy statistics need a non-empty set");
    const double n = static_cast<double>(table.set_size());
    const double qq = static_cast<double>(q);

    detail::Accumulator sq;
    out.gensalem_max = 0.0;
    out.gensalem_argmax = 0;
    for (std::uint64_t t = 1; t < q; ++t) {
        sq.add(out.energy[t] * out.energy[t]);
        if (out.energy[t] > out.gensalem_max) {
            out.gensalem_max = out.energy[t];
            out.gensalem_argmax = static_cast<felem>(t);
        }
    }
    out.mattila = std::pow(qq, 3.0 * amb.dim + 1.0) / (n * n * n * n) * sq.value();
    out.gensalem_threshold =
        std::pow(qq, epsilon) * std::pow(qq, -1.5 * amb.dim - 1.0) * n * n;
    return out;
}

SphericalEnergy spherical_energy(const PointSet& e, double epsilon) {
    return spherical_energy(fourier_transform(e), epsilon);
}

DistanceReport distance_bound_report(const PointSet& e) {
    const Ambient& amb = e.ambient();
    require(amb.field.q() % 2 == 1, "distance bound report needs odd q");
    require(e.size() >= 2, "distance bound report needs #E >= 2");
    const double q = static_cast<double>(amb.field.q());

    const FourierTable table = fourier_transform(e);
    const SphericalEnergy energy = spherical_energy(table);
    DistanceReport rep;
    rep.field_spec = amb.field.spec_string();
    rep.dim = amb.dim;
    rep.set_size = e.size();
    rep.distance_count = distance_set(e).size();
    rep.mattila = energy.mattila;
    rep.bound_mattila = energy.mattila > 0.0 ? std::min(q, q / energy.mattila) : q;
    rep.s_emp4 = salem_exponent_from(lp_norm(table, 4.0), amb.size, e.size());
    const double grow =
        std::pow(q, 1.0 - static_cast<double>(amb.dim)) *
        std::pow(static_cast<double>(e.size()), 4.0 * std::min(rep.s_emp4, 1e3));
    rep.bound_exponent = std::min(q, grow);
    rep.ratio_mattila = static_cast<double>(rep.distance_count) / rep.bound_mattila;
    rep.ratio_exponent = static_cast<double>(rep.distance_count) / rep.bound_exponent;
    return rep;
}

std::string distance_csv(const DistanceReport& r) {
    std::string out =
        "field,d,set_size,distance_count,mattila,bound_mattila,s_emp4,bound_exponent,"
        "ratio_mattila,ratio_exponent\n";
    out += r.field_spec + "," + std::to_string(r.dim) + "," + std::to_string(r.set_size) +
           "," + std::to_string(r.distance_count) + "," + fmt_double(r.mattila) + "," +
           fmt_double(r.bound_mattila) + "," + fmt_double(r.s_emp4) + "," +
           fmt_double(r.bound_exponent) + "," + fmt_double(r.ratio_mattila) + "," +
           fmt_double(r.ratio_exponent) + "\n";
    return out;
}

std::vector<OrthMatrix> orthogonal_group(const Field& field, std::uint32_t d) {
    require(d >= 1, "orthogonal group needs d >= 1");
    std::uint64_t box = 1;
    for (std::uint32_t i = 0; i < d; ++i) {
        box *= field.q();
        require(box <= (std::uint64_t(1) << 16), "orthogonal group enumeration budget exceeded");
    }
    const Ambient amb(field, d);

    std::vector<Point> units;
    for (std::uint64_t i = 0; i < amb.size; ++i) {
        const Point v = amb.decode(i);
        if (norm_sq(amb, v) == 1) units.push_back(v);
    }

    std::vector<OrthMatrix> group;
    std::vector<const Point*> cols;
    std::function<void()> extend = [&] {
        if (cols.size() == d) {
            OrthMatrix m(std::size_t(d) * d);
            for (std::uint32_t c = 0; c < d; ++c)
                for (std::uint32_t r = 0; r < d; ++r) m[std::size_t(r) * d + c] = (*cols[c])[r];
            group.push_back(std::move(m));
            return;
        }
        for (const Point& cand : units) {
            bool ok = true;
            for (const Point* prev : cols)
                if (dot(amb, *prev, cand) != 0) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            cols.push_back(&cand);
            extend();
            cols.pop_back();
        }
    };
    extend();
    return group;
}

namespace {

using u128 = unsigned __int128;

// Packed upper-triangle squared-distance matrix of an ordered tuple.
u128 signature_key(const Ambient& amb, const std::vector<Point>& pts) {
    u128 key = 0;
    const u128 base = amb.field.q();
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            Point diff(amb.dim);
            for (std::uint32_t c = 0; c < amb.dim; ++c)
                diff[c] = amb.field.sub(pts[i][c], pts[j][c]);
            key = key * base + norm_sq(amb, diff);
        }
    return key;
}

void for_each_tuple(const std::vector<std::uint64_t>& members, std::uint32_t arity,
                    const std::function<void(const std::vector<std::uint64_t>&)>& fn) {
    std::vector<std::uint64_t> tuple(arity);
    std::vector<bool> used(members.size(), false);
    std::function<void(std::uint32_t)> rec = [&](std::uint32_t pos) {
        if (pos == arity) {
            fn(tuple);
            return;
        }
        for (std::size_t i = 0; i < members.size(); ++i) {
            if (used[i]) continue;
            used[i] = true;
            tuple[pos] = members[i];
            rec(pos + 1);
            used[i] = false;
        }
    };
    rec(0);
}

}  // namespace

SimplexCensus simplex_census(const PointSet& e, std::uint32_t k, bool with_orbit_oracle) {
    const Ambient& amb = e.ambient();
    require(k >= 1 && k <= amb.dim, "simplex order must satisfy 1 <= k <= d");
    SimplexCensus census;
    census.k = k;
    if (e.size() < k + 1) {
        census.degenerate_note = "fewer than k+1 points";
        if (with_orbit_oracle) census.orbit_count = 0;
        return census;
    }

    double tuples = 1;
    for (std::uint32_t i = 0; i <= k; ++i) tuples *= static_cast<double>(e.size() - i);
    require(tuples <= double(1ULL << 24), "simplex census budget exceeded");

    const auto members = e.indices();
    std::set<u128> signatures;
    for_each_tuple(members, k + 1, [&](const std::vector<std::uint64_t>& tuple) {
        std::vector<Point> pts;
        pts.reserve(tuple.size());
        for (std::uint64_t idx : tuple) pts.push_back(amb.decode(idx));
        signatures.insert(signature_key(amb, pts));
    });
    census.signature_count = signatures.size();

    if (!with_orbit_oracle) return census;

    std::vector<OrthMatrix> group;
    try {
        group = orthogonal_group(amb.field, amb.dim);
    } catch (const std::invalid_argument&) {
        census.degenerate_note = "orbit oracle skipped: orthogonal group budget exceeded";
        return census;
    }
    if (tuples * static_cast<double>(group.size()) > double(1ULL << 26)) {
        census.degenerate_note = "orbit oracle skipped: budget exceeded";
        return census;
    }

    // Canonical orbit representative: pin the first vertex to the origin and
    // minimize the encoded image over the orthogonal group.
    std::set<u128> orbits;
    for_each_tuple(members, k + 1, [&](const std::vector<std::uint64_t>& tuple) {
        std::vector<Point> diffs(k);
        const Point x0 = amb.decode(tuple[0]);
        for (std::uint32_t i = 0; i < k; ++i) {
            Point xi = amb.decode(tuple[i + 1]);
            for (std::uint32_t c = 0; c < amb.dim; ++c)
                xi[c] = amb.field.sub(xi[c], x0[c]);
            diffs[i] = std::move(xi);
        }
        u128 best = 0;
        bool first = true;
        Point img(amb.dim);
        for (const OrthMatrix& A : group) {
            u128 key = 0;
            for (std::uint32_t i = 0; i < k; ++i) {
                for (std::uint32_t r = 0; r < amb.dim; ++r) {
                    felem s = 0;
                    for (std::uint32_t c = 0; c < amb.dim; ++c)
                        s = amb.field.add(s, amb.field.mul(A[std::size_t(r) * amb.dim + c],
                                                           diffs[i][c]));
                    img[r] = s;
                }
                key = key * static_cast<u128>(amb.size) + amb.encode(img);
            }
            if (first || key < best) {
                best = key;
                first = false;
            }
        }
        orbits.insert(best);
    });
    census.orbit_count = orbits.size();
    if (census.signature_count < *census.orbit_count)
        census.degenerate_note =
            "signatures merge non-congruent tuples (degenerate distance patterns)";
    return census;
}

std::string census_csv(const PointSet& e, const std::string& set_name,
                       const SimplexCensus& c) {
    const Ambient& amb = e.ambient();
    std::string out = "field,d,set,k,signature_count,orbit_count,upper_bound\n";
    double upper = 1;
    for (std::uint32_t i = 1; i <= c.k * (c.k + 1) / 2; ++i)
        upper *= static_cast<double>(amb.field.q());
    out += amb.field.spec_string() + "," + std::to_string(amb.dim) + "," +
           csv_field(set_name) + "," + std::to_string(c.k) + "," +
           std::to_string(c.signature_count) + "," +
           (c.orbit_count ? std::to_string(*c.orbit_count) : std::string()) + "," +
           fmt_double(upper) + "\n";
    return out;
}

SumsetBoundReport sumset_bound_check(const std::vector<const PointSet*>& parts,
                                     const std::vector<double>& ps) {
    require(parts.size() >= 2 && ps.size() == parts.size(),
            "sumset bound check needs k >= 2 sets and k exponents");
    double conj = 0;
    for (double p : ps) {
        require(p >= 1.0, "Hoelder exponents must be >= 1");
        conj += 1.0 / p;
    }
    require(std::abs(conj - 1.0) < 1e-9, "Hoelder conjugacy violated: sum 1/p_i != 1");

    const Ambient& amb = parts[0]->ambient();
    const std::size_t k = parts.size();
    const SumsetResult sum = sumset(parts);

    double prod_sizes = 1;
    for (const PointSet* e : parts) prod_sizes *= static_cast<double>(e->size());

    detail::Accumulator fiber_sq;
    for (std::uint64_t z = 0; z < amb.size; ++z) {
        const double f = static_cast<double>(sum.fibers[z]);
        fiber_sq.add(f * f);
    }

    std::vector<FourierTable> tables;
    tables.reserve(k);
    for (const PointSet* e : parts) tables.push_back(fourier_transform(*e));

    // sum_z f(z)^2 = q^{(2k-1)d} sum_m prod |T_i(m)|^2 exactly.
    detail::Accumulator cross;
    for (std::uint64_t m = 0; m < amb.size; ++m) {
        double prod = 1;
        for (const FourierTable& t : tables) prod *= std::norm(t.values()[m]);
        cross.add(prod);
    }
    const double qd = static_cast<double>(amb.size);
    const double plancherel_rhs = std::pow(qd, 2.0 * k - 1.0) * cross.value();

    SumsetBoundReport rep;
    rep.sumset_size = sum.set.size();
    rep.fiber_l2 = fiber_sq.value();
    rep.fiber_plancherel_residual =
        std::abs(fiber_sq.value() - plancherel_rhs) / std::max(1.0, fiber_sq.value());

    double norm_prod = 1;
    for (std::size_t i = 0; i < k; ++i) {
        const double np = lp_norm(tables[i], std::isinf(ps[i]) ? kInfP : 2.0 * ps[i]);
        norm_prod *= np * np;
    }
    rep.lhs = prod_sizes * prod_sizes;
    rep.rhs = static_cast<double>(rep.sumset_size) *
              (prod_sizes * prod_sizes / qd + std::pow(qd, 2.0 * k) * norm_prod);
    rep.slack = rep.rhs > 0 ? std::max(0.0, rep.lhs / rep.rhs - 1.0) : 0.0;
    return rep;
}

SidonSumReport sidon_sum_check(const PointSet& e, double p) {
    require(p >= 1.0, "sidon sum check needs p >= 1");
    require(is_sidon(e).sidon, "sidon sum check requires a Sidon set");
    const Ambient& amb = e.ambient();
    const double qd = static_cast<double>(amb.size);

    const FourierTable te = fourier_transform(e);
    const SumsetResult sum = sumset({&e, &e});
    const FourierTable tsum = fourier_transform(sum.set);

    const double n2p = lp_norm(te, std::isinf(p) ? kInfP : 2.0 * p);
    SidonSumReport rep;
    rep.value = lp_norm(tsum, p);
    rep.lower = 0.5 * qd * n2p * n2p - static_cast<double>(e.size()) / qd;
    rep.upper = static_cast<double>(e.size()) / qd + 0.5 * qd * n2p * n2p;
    const double tol = 1e-12 * std::max(1.0, rep.upper);
    rep.holds = rep.lower <= rep.value + tol && rep.value <= rep.upper + tol;
    rep.s_emp = e.size() >= 2
                    ? salem_exponent_from(lp_norm(te, p), amb.size, e.size())
                    : std::numeric_limits<double>::quiet_NaN();
    rep.two_over_p = std::isinf(p) ? 0.0 : 2.0 / p;
    return rep;
}

}  // namespace fqsalem
