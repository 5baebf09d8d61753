#include "fqsalem/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace fqsalem {
namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

bool minus_one_is_square(const Field& f) {
    return !f.sqrt(f.neg(1)).empty();
}

std::uint64_t pow_u64(std::uint64_t b, std::uint32_t e) {
    std::uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

}  // namespace

PointSet sphere(const Ambient& amb, felem r) {
    require(r < amb.field.q(), "sphere radius out of range");
    PointSet s(amb);
    for (std::uint64_t i = 0; i < amb.size; ++i)
        if (norm_sq(amb, amb.decode(i)) == r) s.insert(i);
    return s;
}

PointSet cone_c(const Ambient& amb) {
    require(amb.dim >= 3, "cone C needs d >= 3");
    const Field& f = amb.field;
    PointSet s(amb);
    for (std::uint64_t i = 0; i < amb.size; ++i) {
        const Point z = amb.decode(i);
        if (z[amb.dim - 1] == 0) continue;
        felem lhs = 0;
        for (std::uint32_t j = 0; j + 2 < amb.dim; ++j) lhs = f.add(lhs, f.mul(z[j], z[j]));
        if (lhs == f.mul(z[amb.dim - 2], z[amb.dim - 1])) s.insert(i);
    }
    return s;
}

PointSet cone_d(const Ambient& amb) {
    require(amb.dim >= 3, "cone D needs d >= 3");
    const Field& f = amb.field;
    PointSet s(amb);
    for (std::uint64_t i = 0; i < amb.size; ++i) {
        const Point z = amb.decode(i);
        if (z[amb.dim - 1] == 0) continue;
        felem lhs = 0;
        for (std::uint32_t j = 0; j + 1 < amb.dim; ++j) lhs = f.add(lhs, f.mul(z[j], z[j]));
        if (lhs == f.mul(z[amb.dim - 1], z[amb.dim - 1])) s.insert(i);
    }
    return s;
}

PointSet cylinder(const Ambient& amb, felem r) {
    require(amb.dim >= 3, "cylinder needs d >= 3");
    require(r != 0 && r < amb.field.q(),
            "cylinder radius must be non-zero (radius zero follows the cone analysis)");
    const Field& f = amb.field;
    PointSet s(amb);
    for (std::uint64_t i = 0; i < amb.size; ++i) {
        const Point z = amb.decode(i);
        felem lhs = 0;
        for (std::uint32_t j = 0; j + 1 < amb.dim; ++j) lhs = f.add(lhs, f.mul(z[j], z[j]));
        if (lhs == r) s.insert(i);
    }
    return s;
}

PointSet paraboloid(const Ambient& amb, felem y) {
    require(amb.dim >= 2, "paraboloid needs d >= 2");
    require(y != 0 && y < amb.field.q(), "paraboloid scale must be non-zero");
    const Field& f = amb.field;
    PointSet s(amb);
    const felem yinv = f.inv(y);
    // z_d is determined: one point per choice of the first d-1 coordinates.
    Point z(amb.dim, 0);
    std::uint64_t base_count = 1;
    for (std::uint32_t j = 0; j + 1 < amb.dim; ++j) base_count *= f.q();
    for (std::uint64_t b = 0; b < base_count; ++b) {
        std::uint64_t v = b;
        felem lhs = 0;
        for (std::uint32_t j = 0; j + 1 < amb.dim; ++j) {
            z[j] = static_cast<felem>(v % f.q());
            v /= f.q();
            lhs = f.add(lhs, f.mul(z[j], z[j]));
        }
        z[amb.dim - 1] = f.mul(lhs, yinv);
        s.insert_point(z);
    }
    return s;
}

PointSet diagonal(const Ambient& amb, std::uint32_t n) {
    require(n >= 1 && amb.dim % n == 0, "diagonal block size must divide d");
    const Field& f = amb.field;
    PointSet s(amb);
    const std::uint64_t reps = pow_u64(f.q(), n);
    Point z(amb.dim);
    for (std::uint64_t k = 0; k < reps; ++k) {
        std::uint64_t v = k;
        Point block(n);
        for (std::uint32_t j = 0; j < n; ++j) {
            block[j] = static_cast<felem>(v % f.q());
            v /= f.q();
        }
        for (std::uint32_t j = 0; j < amb.dim; ++j) z[j] = block[j % n];
        s.insert_point(z);
    }
    return s;
}

PointSet kloosterman_curve(const Ambient& amb) {
    require(amb.dim >= 2, "the inverse curve needs d >= 2");
    const Field& f = amb.field;
    PointSet s(amb);
    Point z(amb.dim);
    for (felem k = 1; k < f.q(); ++k) {
        for (std::uint32_t j = 0; j + 1 < amb.dim; ++j) z[j] = k;
        z[amb.dim - 1] = f.inv(k);
        s.insert_point(z);
    }
    return s;
}

PointSet polynomial_curve(const Ambient& amb, const std::vector<Poly>& fs) {
    require(fs.size() == amb.dim, "one polynomial per coordinate required");
    for (const Poly& f : fs) {
        require(!f.empty(), "empty polynomial");
        require(f.size() <= 65, "polynomial degree exceeds the configured maximum 64");
        for (felem c : f) require(c < amb.field.q(), "polynomial coefficient out of range");
    }
    PointSet s(amb);
    Point z(amb.dim);
    for (felem k = 0; k < amb.field.q(); ++k) {
        for (std::uint32_t j = 0; j < amb.dim; ++j) z[j] = amb.field.eval_poly(fs[j], k);
        s.insert_point(z);
    }
    return s;
}

PointSet subspace_complement(const Ambient& amb, std::uint32_t k) {
    require(k >= 1 && k < amb.dim, "subspace dimension must satisfy 1 <= k < d");
    PointSet sub(amb);
    const std::uint64_t qk = pow_u64(amb.field.q(), k);
    for (std::uint64_t i = 0; i < qk; ++i) sub.insert(i);  // F_q^k x {0}: low coordinates free
    return sub.complemented();
}

PointSet direct_sum(const PointSet& e, const PointSet& f) {
    require(e.ambient().field == f.ambient().field, "direct sum needs a common field");
    const Ambient amb(e.ambient().field, e.ambient().dim + f.ambient().dim);
    PointSet s(amb);
    const std::uint64_t shift = e.ambient().size;
    const auto ei = e.indices();
    const auto fi = f.indices();
    for (std::uint64_t b : fi)
        for (std::uint64_t a : ei) s.insert(a + b * shift);
    return s;
}

PointSet random_set(const Ambient& amb, double alpha, std::uint64_t seed) {
    require(alpha > 0.0 && alpha <= static_cast<double>(amb.dim),
            "alpha must lie in (0, d]");
    const double target = std::pow(static_cast<double>(amb.field.q()), alpha);
    const std::uint64_t n = static_cast<std::uint64_t>(target + 1e-9);
    require(n <= amb.size, "requested size exceeds the ambient");

    // Algorithm R reservoir over [0, q^d) with a fixed 53-bit uniform mapping;
    // every step is pinned by the standard, so draws agree across platforms.
    std::mt19937_64 eng(seed);
    auto below = [&eng](std::uint64_t k) {
        const double u = static_cast<double>(eng() >> 11) * 0x1.0p-53;
        const auto j = static_cast<std::uint64_t>(u * static_cast<double>(k));
        return j >= k ? k - 1 : j;
    };
    std::vector<std::uint64_t> reservoir(n);
    for (std::uint64_t i = 0; i < n; ++i) reservoir[i] = i;
    for (std::uint64_t i = n; i < amb.size; ++i) {
        const std::uint64_t j = below(i + 1);
        if (j < n) reservoir[j] = i;
    }
    std::sort(reservoir.begin(), reservoir.end());
    return PointSet::from_indices(amb, reservoir);
}

AnnihilatorPlane annihilator_of_plane(const Ambient& amb) {
    require(amb.dim == 3, "annihilator construction is implemented for d = 3");
    require(amb.field.q() % 2 == 1, "annihilator construction needs odd q");
    const Field& f = amb.field;

    // Scan direction representatives (first non-zero coordinate equal to 1)
    // against all base points: the line {a + s*v} lies in the sphere of
    // radius |a|^2 exactly when |v|^2 = 0, a.v = 0 and |a|^2 != 0.
    for (std::uint64_t vi = 1; vi < amb.size; ++vi) {
        const Point v = amb.decode(vi);
        std::uint32_t lead = 0;
        while (v[lead] == 0) ++lead;
        if (v[lead] != 1) continue;
        if (norm_sq(amb, v) != 0) continue;
        for (std::uint64_t ai = 0; ai < amb.size; ++ai) {
            const Point a = amb.decode(ai);
            const felem t = norm_sq(amb, a);
            if (t == 0) continue;
            if (dot(amb, a, v) != 0) continue;

            AnnihilatorPlane out{PointSet(amb), PointSet(amb), t, a, v};
            Point y(amb.dim);
            for (felem s = 0; s < f.q(); ++s) {
                for (std::uint32_t j = 0; j < amb.dim; ++j)
                    y[j] = f.add(a[j], f.mul(s, v[j]));
                out.line.insert_point(y);
            }
            for (std::uint64_t xi = 0; xi < amb.size; ++xi) {
                const Point x = amb.decode(xi);
                if (dot(amb, x, a) == 0 && dot(amb, x, v) == 0) out.annihilator.insert(xi);
            }
            return out;
        }
    }
    throw std::runtime_error(
        "no affine line inside a sphere of non-zero radius exists for this field");
}

SidonReport is_sidon(const PointSet& set) {
    const Ambient& amb = set.ambient();
    const bool char2 = amb.field.p() == 2;
    const auto members = set.indices();
    std::vector<std::uint32_t> fibers(amb.size, 0);

    std::uint64_t violating = amb.size;  // sentinel
    for (std::uint64_t ui : members) {
        const Point u = amb.decode(ui);
        for (std::uint64_t vi : members) {
            Point w = amb.decode(vi);
            for (std::uint32_t j = 0; j < amb.dim; ++j) w[j] = amb.field.add(w[j], u[j]);
            const std::uint64_t si = amb.encode(w);
            if (char2 && si == 0) continue;  // x + x = 0 is unavoidable in characteristic 2
            if (++fibers[si] > 2) {
                violating = si;
                break;
            }
        }
        if (violating != amb.size) break;
    }
    if (violating == amb.size) return {true, std::nullopt};

    // Collect unordered representations of the violating sum.
    const Point s = amb.decode(violating);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> reps;
    for (std::uint64_t ui : members) {
        const Point u = amb.decode(ui);
        Point w(amb.dim);
        for (std::uint32_t j = 0; j < amb.dim; ++j) w[j] = amb.field.sub(s[j], u[j]);
        const std::uint64_t vi = amb.encode(w);
        if (vi >= ui && set.contains(vi)) reps.emplace_back(ui, vi);
    }
    SidonReport rep{false, std::nullopt};
    if (reps.size() >= 2) {
        rep.witness = {amb.decode(reps[0].first), amb.decode(reps[0].second),
                       amb.decode(reps[1].first), amb.decode(reps[1].second)};
    }
    return rep;
}

std::uint32_t poly_span_dim(const Field& field, const std::vector<Poly>& fs) {
    std::size_t cols = 0;
    for (const Poly& f : fs) cols = std::max(cols, f.size());
    if (cols <= 1) return 0;
    --cols;  // constant coefficients do not affect the phase as a function shape
    std::vector<std::vector<felem>> rows;
    for (const Poly& f : fs) {
        std::vector<felem> r(cols, 0);
        for (std::size_t j = 1; j < f.size(); ++j) r[j - 1] = f[j];
        rows.push_back(std::move(r));
    }
    std::uint32_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
        std::size_t pivot = rank;
        while (pivot < rows.size() && rows[pivot][c] == 0) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[rank], rows[pivot]);
        const felem inv = field.inv(rows[rank][c]);
        for (std::size_t j = c; j < cols; ++j) rows[rank][j] = field.mul(rows[rank][j], inv);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == rank || rows[r][c] == 0) continue;
            const felem factor = rows[r][c];
            for (std::size_t j = c; j < cols; ++j)
                rows[r][j] = field.sub(rows[r][j], field.mul(factor, rows[rank][j]));
        }
        ++rank;
    }
    return rank;
}

// ---------------------------------------------------------------------------
// Recipe grammar

SetRecipe SetRecipe::parse(const std::string& text) {
    SetRecipe r;
    const auto open = text.find('(');
    if (open == std::string::npos) {
        r.name = text;
        return r;
    }
    require(!text.empty() && text.back() == ')', "recipe must end with ')'");
    r.name = text.substr(0, open);
    const std::string inner = text.substr(open + 1, text.size() - open - 2);
    std::size_t start = 0;
    int depth = 0;
    for (std::size_t i = 0; i <= inner.size(); ++i) {
        if (i < inner.size() && inner[i] == '[') ++depth;
        if (i < inner.size() && inner[i] == ']') --depth;
        if (i == inner.size() || (inner[i] == ',' && depth == 0)) {
            const std::string tok = inner.substr(start, i - start);
            start = i + 1;
            if (tok.empty()) continue;
            const auto eq = tok.find('=');
            require(eq != std::string::npos, "recipe parameter must be key=value: " + tok);
            r.params.emplace_back(tok.substr(0, eq), tok.substr(eq + 1));
        }
    }
    require(depth == 0, "unbalanced brackets in recipe");
    return r;
}

std::string SetRecipe::canonical() const {
    std::string s = name + "(";
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (i) s += ',';
        s += params[i].first + "=" + params[i].second;
    }
    return s + ")";
}

bool SetRecipe::has(const std::string& key) const {
    return std::any_of(params.begin(), params.end(),
                       [&](const auto& kv) { return kv.first == key; });
}

std::string SetRecipe::get(const std::string& key, const std::string& fallback) const {
    for (const auto& kv : params)
        if (kv.first == key) return kv.second;
    return fallback;
}

Poly parse_poly_token(const std::string& token, const Field& field) {
    require(!token.empty(), "empty polynomial token");
    if (token[0] == 'k') {
        if (token == "k") return Poly{0, 1};
        require(token.size() > 2 && token[1] == '^', "bad polynomial token: " + token);
        const unsigned long e = std::stoul(token.substr(2));
        require(e >= 1 && e <= 64, "monomial exponent out of range: " + token);
        Poly f(e + 1, 0);
        f[e] = 1;
        return f;
    }
    Poly f;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= token.size(); ++i) {
        if (i == token.size() || token[i] == ':') {
            const unsigned long c = std::stoul(token.substr(start, i - start));
            require(c < field.q(), "coefficient out of range in: " + token);
            f.push_back(static_cast<felem>(c));
            start = i + 1;
        }
    }
    return f;
}

namespace {

std::vector<Poly> parse_poly_list(const std::string& value, const Field& field) {
    require(value.size() >= 2 && value.front() == '[' && value.back() == ']',
            "polynomial list must be bracketed: " + value);
    std::vector<Poly> out;
    const std::string inner = value.substr(1, value.size() - 2);
    std::size_t start = 0;
    for (std::size_t i = 0; i <= inner.size(); ++i) {
        if (i == inner.size() || inner[i] == ',') {
            const std::string tok = inner.substr(start, i - start);
            start = i + 1;
            if (!tok.empty()) out.push_back(parse_poly_token(tok, field));
        }
    }
    require(!out.empty(), "empty polynomial list");
    return out;
}

felem parse_elem(const SetRecipe& r, const std::string& key, const Field& field,
                 std::optional<felem> fallback = std::nullopt) {
    if (!r.has(key)) {
        require(fallback.has_value(), r.name + " requires parameter " + key);
        return *fallback;
    }
    const unsigned long v = std::stoul(r.get(key));
    require(v < field.q(), "parameter " + key + " out of range [0, q)");
    return static_cast<felem>(v);
}

void require_odd_q(const Ambient& amb, const std::string& what) {
    require(amb.field.p() != 2, what + " is a quadratic-form construction and needs odd q");
}

double quad_surface_exponent(double p, std::uint32_t d) {
    // (p(d-2)+2) / (2p(d-1)) with the p = infinity limit built in.
    if (std::isinf(p)) return (d - 2.0) / (2.0 * (d - 1.0));
    return (p * (d - 2.0) + 2.0) / (2.0 * p * (d - 1.0));
}

}  // namespace

BuiltSet build_recipe(const Ambient& amb, const SetRecipe& recipe) {
    const Field& f = amb.field;
    const std::uint32_t d = amb.dim;
    BuiltSet out{PointSet(amb), recipe.canonical(), nullptr, std::nullopt, {}};

    if (recipe.name == "sphere") {
        const felem r = parse_elem(recipe, "r", f);
        require_odd_q(amb, "sphere");
        if (r == 0) {
            require(d >= 3 || minus_one_is_square(f),
                    "radius-zero sphere with d = 2 needs -1 to be a square in F_q "
                    "(otherwise it degenerates to {0})");
            out.set = sphere(amb, 0);
            out.s_theory = [d](double p) {
                if (std::isinf(p)) return (d - 2.0) / (2.0 * (d - 1.0));
                return (d - 2.0) / (2.0 * (d - 1.0)) + 1.0 / (p * (d - 1.0));
            };
        } else {
            out.set = sphere(amb, r);
            out.s_theory = [](double) { return 0.5; };
        }
    } else if (recipe.name == "coneC") {
        require_odd_q(amb, "coneC");
        out.set = cone_c(amb);
        out.s_theory = [d](double p) { return quad_surface_exponent(p, d); };
    } else if (recipe.name == "coneD") {
        require_odd_q(amb, "coneD");
        out.set = cone_d(amb);
        out.s_theory = [d](double p) { return quad_surface_exponent(p, d); };
    } else if (recipe.name == "cylinder") {
        require_odd_q(amb, "cylinder");
        out.set = cylinder(amb, parse_elem(recipe, "r", f));
        out.s_theory = [d](double p) { return quad_surface_exponent(p, d); };
    } else if (recipe.name == "paraboloid") {
        require_odd_q(amb, "paraboloid");
        out.set = paraboloid(amb, parse_elem(recipe, "y", f, felem(1)));
        out.s_theory = [](double) { return 0.5; };
    } else if (recipe.name == "diagonal") {
        const auto n = static_cast<std::uint32_t>(std::stoul(recipe.get("n", "1")));
        out.set = diagonal(amb, n);
        out.s_theory = [](double p) { return std::isinf(p) ? 0.0 : 1.0 / p; };
        // Exact spectrum: q^{n-d} on the subspace of frequencies whose
        // coordinate sums vanish blockwise.
        PointSet support(amb);
        for (std::uint64_t i = 0; i < amb.size; ++i) {
            const Point y = amb.decode(i);
            bool in = true;
            for (std::uint32_t j = 0; j < n && in; ++j) {
                felem s = 0;
                for (std::uint32_t c = j; c < d; c += n) s = f.add(s, y[c]);
                in = s == 0;
            }
            if (in) support.insert(i);
        }
        const double mag = std::pow(static_cast<double>(f.q()),
                                    static_cast<double>(n) - static_cast<double>(d));
        out.closed_form = ClosedFormSpectrum{std::move(support), mag};
    } else if (recipe.name == "kloosterman") {
        out.set = kloosterman_curve(amb);
        if (d == 2)
            out.s_theory = [](double) { return 0.5; };
        else
            out.s_theory = [](double p) {
                return std::isinf(p) ? 0.0 : std::min(0.5, 2.0 / p);
            };
    } else if (recipe.name == "curve" || recipe.name == "veronese") {
        std::vector<Poly> fs;
        if (recipe.name == "veronese") {
            for (std::uint32_t j = 1; j <= d; ++j) {
                Poly mono(j + 1, 0);
                mono[j] = 1;
                fs.push_back(std::move(mono));
            }
        } else {
            fs = parse_poly_list(recipe.get("f"), f);
            require(fs.size() == d, "curve needs exactly d polynomials");
        }
        out.set = polynomial_curve(amb, fs);
        const std::uint32_t n = poly_span_dim(f, fs);
        bool degree_flag = false;
        for (const Poly& fi : fs) {
            std::size_t deg = fi.size();
            while (deg > 0 && fi[deg - 1] == 0) --deg;
            if (deg >= 1) --deg;
            if (deg >= 1 && deg % f.p() == 0) degree_flag = true;
        }
        if (out.set.size() < f.q())
            out.notes.push_back("duplicate points collapsed: cardinality " +
                                std::to_string(out.set.size()) + " < q");
        if (degree_flag) {
            out.notes.push_back(
                "a component degree is divisible by the characteristic; "
                "exponent prediction suppressed");
        } else if (n == d) {
            out.s_theory = [](double) { return 0.5; };
        } else if (n >= 1) {
            out.s_theory = [n](double p) {
                return std::isinf(p) ? 0.0 : std::min(0.5, static_cast<double>(n) / p);
            };
        }
        out.notes.push_back("phase span dimension " + std::to_string(n));
    } else if (recipe.name == "complement") {
        const auto k = static_cast<std::uint32_t>(std::stoul(recipe.get("k", "1")));
        out.set = subspace_complement(amb, k);
        out.s_theory = [d, k](double p) {
            const double base = 1.0 - static_cast<double>(k) / d;
            return std::isinf(p) ? base : base + static_cast<double>(k) / (p * d);
        };
        PointSet support(amb);  // {z : z_1 = ... = z_k = 0}
        for (std::uint64_t i = 0; i < amb.size; ++i) {
            const Point z = amb.decode(i);
            bool in = true;
            for (std::uint32_t j = 0; j < k && in; ++j) in = z[j] == 0;
            if (in) support.insert(i);
        }
        support.erase(0);
        const double mag = std::pow(static_cast<double>(f.q()),
                                    static_cast<double>(k) - static_cast<double>(d));
        out.closed_form = ClosedFormSpectrum{std::move(support), mag};
    } else if (recipe.name == "annihilator") {
        AnnihilatorPlane plane = annihilator_of_plane(amb);
        out.set = plane.annihilator;
        out.s_theory = [](double p) { return std::isinf(p) ? 0.0 : 1.0 / p; };
        // Exact spectrum: q^{-d} #E on the span of the line's base point and
        // direction, zero elsewhere.
        PointSet support(amb);
        Point y(amb.dim);
        for (felem a = 0; a < f.q(); ++a)
            for (felem b = 0; b < f.q(); ++b) {
                for (std::uint32_t j = 0; j < amb.dim; ++j)
                    y[j] = f.add(f.mul(a, plane.base[j]), f.mul(b, plane.direction[j]));
                support.insert_point(y);
            }
        const double mag = static_cast<double>(out.set.size()) / static_cast<double>(amb.size);
        out.closed_form = ClosedFormSpectrum{std::move(support), mag};
        out.notes.push_back("line of radius-" + std::to_string(plane.t) + " sphere annihilated");
    } else if (recipe.name == "random") {
        const double alpha = std::stod(recipe.get("alpha", "1"));
        const std::uint64_t seed = std::stoull(recipe.get("seed", "0"));
        out.set = random_set(amb, alpha, seed);
    } else if (recipe.name == "full") {
        out.set = PointSet::full(amb);
    } else {
        throw std::invalid_argument("unknown recipe '" + recipe.name + "'");
    }
    return out;
}

BuiltSet build_recipe(const Ambient& amb, const std::string& recipe_text) {
    return build_recipe(amb, SetRecipe::parse(recipe_text));
}

}  // namespace fqsalem
