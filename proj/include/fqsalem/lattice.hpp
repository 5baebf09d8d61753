#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fqsalem/gf.hpp"

namespace fqsalem {

/// A point of F_q^d, coordinate 0 first.
using Point = std::vector<felem>;

/// The box F_q^d with the canonical point index
/// idx(x) = sum idx(x_i) * q^i (coordinate 0 least significant).
struct Ambient {
    Field field;
    std::uint32_t dim;
    std::uint64_t size;  // q^d

    Ambient(Field f, std::uint32_t d);

    std::uint64_t encode(const Point& x) const;
    Point decode(std::uint64_t idx) const;

    bool operator==(const Ambient& o) const {
        return dim == o.dim && field == o.field;
    }
    bool operator!=(const Ambient& o) const { return !(*this == o); }
};

/// Bilinear form x . y = sum x_i * y_i.
felem dot(const Ambient& amb, const Point& x, const Point& y);

/// |m|^2 = m_1^2 + ... + m_d^2 = dot(m, m).
felem norm_sq(const Ambient& amb, const Point& m);

/// Dense subset of F_q^d backed by a bit array of length q^d with a cached
/// cardinality. Mutable while being built, treated as frozen afterwards;
/// concurrent reads are fine, concurrent mutation is not supported.
class PointSet {
public:
    explicit PointSet(Ambient amb);

    static PointSet empty(const Ambient& amb) { return PointSet(amb); }
    static PointSet full(const Ambient& amb);
    static PointSet from_points(const Ambient& amb, const std::vector<Point>& pts);
    static PointSet from_indices(const Ambient& amb, const std::vector<std::uint64_t>& idx);

    const Ambient& ambient() const { return amb_; }
    std::uint64_t size() const { return count_; }

    bool contains(std::uint64_t idx) const;
    bool contains_point(const Point& x) const { return contains(amb_.encode(x)); }

    void insert(std::uint64_t idx);
    void insert_point(const Point& x) { insert(amb_.encode(x)); }
    void erase(std::uint64_t idx);

    PointSet united(const PointSet& other) const;
    PointSet complemented() const;
    PointSet translated(const Point& v) const;
    PointSet negated() const;  // x -> -x

    /// Recomputes the cardinality from the bits; equals size() by invariant.
    std::uint64_t recount() const;

    /// Ascending member indices.
    std::vector<std::uint64_t> indices() const;

    void for_each_index(const std::function<void(std::uint64_t)>& fn) const;

private:
    Ambient amb_;
    std::vector<std::uint64_t> words_;
    std::uint64_t count_ = 0;
};

/// Set file payload: {"field": spec, "d": d, "indices": [...], "name": ...}.
/// Indices are emitted sorted so files are byte-comparable.
std::string set_to_json(const PointSet& set, const std::string& name = "");
PointSet set_from_json(const std::string& text, std::string* name_out = nullptr);

void save_set(const PointSet& set, const std::string& path, const std::string& name = "");
PointSet load_set(const std::string& path, std::string* name_out = nullptr);

}  // namespace fqsalem
