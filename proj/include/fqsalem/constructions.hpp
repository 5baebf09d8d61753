#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fqsalem/lattice.hpp"

namespace fqsalem {

/// {y : |y|^2 = r}.
PointSet sphere(const Ambient& amb, felem r);

/// {z : z_1^2 + ... + z_{d-2}^2 = z_{d-1} z_d, z_d != 0}; needs d >= 3.
PointSet cone_c(const Ambient& amb);

/// {z : z_1^2 + ... + z_{d-1}^2 = z_d^2, z_d != 0}; needs d >= 3.
PointSet cone_d(const Ambient& amb);

/// Sphere of radius r in the first d-1 coordinates, last coordinate free.
/// Needs d >= 3 and r != 0 (radius zero follows a different analysis).
PointSet cylinder(const Ambient& amb, felem r);

/// {z : z_1^2 + ... + z_{d-1}^2 = z_d * y} for y != 0; the graph {(k, k^2)}
/// in dimension 2 with y = 1.
PointSet paraboloid(const Ambient& amb, felem y);

/// {(k, ..., k) : k in F_q^n} embedded by repetition; needs n | d.
PointSet diagonal(const Ambient& amb, std::uint32_t n);

/// {(k, ..., k, k^{-1}) : k in F_q^*}.
PointSet kloosterman_curve(const Ambient& amb);

/// {(f_1(k), ..., f_d(k)) : k in F_q}; duplicate points collapse.
PointSet polynomial_curve(const Ambient& amb, const std::vector<Poly>& fs);

/// Complement of F_q^k x {0}^(d-k); needs 1 <= k < d.
PointSet subspace_complement(const Ambient& amb, std::uint32_t k);

/// E + F in F_q^(dim E + dim F), E coordinates first.
PointSet direct_sum(const PointSet& e, const PointSet& f);

/// Uniformly chosen subset of size floor(q^alpha), reproducible across
/// platforms for a given (field, d, alpha, seed).
PointSet random_set(const Ambient& amb, double alpha, std::uint64_t seed);

/// An affine line {base + s*direction} inside the sphere of radius t != 0,
/// found by scanning (point, direction) pairs, together with its annihilator
/// E = {x : x.y = 0 for every y on the line}. Needs d = 3 and odd q.
struct AnnihilatorPlane {
    PointSet line;
    PointSet annihilator;
    felem t;
    Point base;
    Point direction;
};
AnnihilatorPlane annihilator_of_plane(const Ambient& amb);

/// Fiber test over E+E: every sum must have the minimal number of ordered
/// representations. On failure carries a quadruple a+b = c+d with
/// {a,b} != {c,d}.
struct SidonReport {
    bool sidon = false;
    std::optional<std::array<Point, 4>> witness;
};
SidonReport is_sidon(const PointSet& set);

/// Rank of the polynomial family modulo constant polynomials; the phase
/// z_1 f_1 + ... + z_d f_d is non-constant for all z != 0 exactly when this
/// equals d.
std::uint32_t poly_span_dim(const Field& field, const std::vector<Poly>& fs);

/// Recipe grammar: name(key=value,...). Polynomials are written as "k",
/// "k^3", a constant, or an ascending coefficient list "c0:c1:c2";
/// lists use brackets, e.g. curve(f=[k,k^2]).
struct SetRecipe {
    std::string name;
    std::vector<std::pair<std::string, std::string>> params;

    static SetRecipe parse(const std::string& text);
    std::string canonical() const;
    bool has(const std::string& key) const;
    std::string get(const std::string& key, const std::string& fallback = "") const;
};

/// Exact magnitude spectrum where one is known: |T| = magnitude on
/// support \ {0}, 0 on other non-zero frequencies, q^{-d} #E at 0.
struct ClosedFormSpectrum {
    PointSet support;
    double magnitude;
};

struct BuiltSet {
    PointSet set;
    std::string label;
    /// Predicted exponent s(p), empty when the recipe carries none.
    std::function<double(double)> s_theory;
    std::optional<ClosedFormSpectrum> closed_form;
    std::vector<std::string> notes;
};

BuiltSet build_recipe(const Ambient& amb, const SetRecipe& recipe);
BuiltSet build_recipe(const Ambient& amb, const std::string& recipe_text);

Poly parse_poly_token(const std::string& token, const Field& field);

}  // namespace fqsalem
