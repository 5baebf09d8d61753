#include "fqsalem/lattice.hpp"

#include <bit>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace fqsalem {

Ambient::Ambient(Field f, std::uint32_t d) : field(std::move(f)), dim(d), size(1) {
    if (d == 0) throw std::invalid_argument("ambient dimension must be positive");
    for (std::uint32_t i = 0; i < d; ++i) {
        if (size > kMaxAmbientSize / field.q())
            throw std::invalid_argument("q^d exceeds the configured memory budget 2^24");
        size *= field.q();
    }
}

std::uint64_t Ambient::encode(const Point& x) const {
    if (x.size() != dim) throw std::invalid_argument("point dimension mismatch");
    std::uint64_t idx = 0;
    for (std::uint32_t i = dim; i-- > 0;) {
        if (x[i] >= field.q()) throw std::out_of_range("coordinate index out of range");
        idx = idx * field.q() + x[i];
    }
    return idx;
}

Point Ambient::decode(std::uint64_t idx) const {
    if (idx >= size) throw std::out_of_range("point index out of range");
    Point x(dim);
    for (std::uint32_t i = 0; i < dim; ++i) {
        x[i] = static_cast<felem>(idx % field.q());
        idx /= field.q();
    }
    return x;
}

felem dot(const Ambient& amb, const Point& x, const Point& y) {
    if (x.size() != amb.dim || y.size() != amb.dim)
        throw std::invalid_argument("ambient mismatch in dot product");
    felem s = 0;
    for (std::uint32_t i = 0; i < amb.dim; ++i)
        s = amb.field.add(s, amb.field.mul(x[i], y[i]));
    return s;
}

felem norm_sq(const Ambient& amb, const Point& m) { return dot(amb, m, m); }

PointSet::PointSet(Ambient amb)
    : amb_(std::move(amb)), words_((amb_.size + 63) / 64, 0) {}

PointSet PointSet::full(const Ambient& amb) {
    PointSet s(amb);
    for (std::uint64_t i = 0; i < amb.size; ++i) s.words_[i >> 6] |= std::uint64_t(1) << (i & 63);
    s.count_ = amb.size;
    return s;
}

PointSet PointSet::from_points(const Ambient& amb, const std::vector<Point>& pts) {
    PointSet s(amb);
    for (const Point& p : pts) s.insert(amb.encode(p));
    return s;
}

PointSet PointSet::from_indices(const Ambient& amb, const std::vector<std::uint64_t>& idx) {
    PointSet s(amb);
    for (std::uint64_t i : idx) s.insert(i);
    return s;
}

bool PointSet::contains(std::uint64_t idx) const {
    if (idx >= amb_.size) throw std::out_of_range("point index out of range");
    return (words_[idx >> 6] >> (idx & 63)) & 1;
}

void PointSet::insert(std::uint64_t idx) {
    if (idx >= amb_.size) throw std::out_of_range("point index out of range");
    std::uint64_t& w = words_[idx >> 6];
    const std::uint64_t bit = std::uint64_t(1) << (idx & 63);
    if (!(w & bit)) {
        w |= bit;
        ++count_;
    }
}

void PointSet::erase(std::uint64_t idx) {
    if (idx >= amb_.size) throw std::out_of_range("point index out of range");
    std::uint64_t& w = words_[idx >> 6];
    const std::uint64_t bit = std::uint64_t(1) << (idx & 63);
    if (w & bit) {
        w &= ~bit;
        --count_;
    }
}

PointSet PointSet::united(const PointSet& other) const {
    if (amb_ != other.amb_) throw std::invalid_argument("ambient mismatch in union");
    PointSet s(amb_);
    for (std::size_t i = 0; i < words_.size(); ++i) s.words_[i] = words_[i] | other.words_[i];
    s.count_ = s.recount();
    return s;
}

PointSet PointSet::complemented() const {
    PointSet s(amb_);
    for (std::size_t i = 0; i < words_.size(); ++i) s.words_[i] = ~words_[i];
    // Clear bits beyond q^d.
    const std::uint64_t tail = amb_.size & 63;
    if (tail) s.words_.back() &= (std::uint64_t(1) << tail) - 1;
    s.count_ = amb_.size - count_;
    return s;
}

PointSet PointSet::translated(const Point& v) const {
    if (v.size() != amb_.dim) throw std::invalid_argument("ambient mismatch in translate");
    PointSet s(amb_);
    for_each_index([&](std::uint64_t idx) {
        Point x = amb_.decode(idx);
        for (std::uint32_t i = 0; i < amb_.dim; ++i) x[i] = amb_.field.add(x[i], v[i]);
        s.insert(amb_.encode(x));
    });
    return s;
}

PointSet PointSet::negated() const {
    PointSet s(amb_);
    for_each_index([&](std::uint64_t idx) {
        Point x = amb_.decode(idx);
        for (std::uint32_t i = 0; i < amb_.dim; ++i) x[i] = amb_.field.neg(x[i]);
        s.insert(amb_.encode(x));
    });
    return s;
}

std::uint64_t PointSet::recount() const {
    std::uint64_t n = 0;
    for (std::uint64_t w : words_) n += std::popcount(w);
    return n;
}

std::vector<std::uint64_t> PointSet::indices() const {
    std::vector<std::uint64_t> out;
    out.reserve(count_);
    for_each_index([&](std::uint64_t idx) { out.push_back(idx); });
    return out;
}

void PointSet::for_each_index(const std::function<void(std::uint64_t)>& fn) const {
    for (std::size_t wi = 0; wi < words_.size(); ++wi) {
        std::uint64_t w = words_[wi];
        while (w) {
            const int b = std::countr_zero(w);
            fn((std::uint64_t(wi) << 6) | unsigned(b));
            w &= w - 1;
        }
    }
}

std::string set_to_json(const PointSet& set, const std::string& name) {
    nlohmann::json j;
    j["field"] = set.ambient().field.spec_string();
    j["d"] = set.ambient().dim;
    j["indices"] = set.indices();
    if (!name.empty()) j["name"] = name;
    return j.dump();
}

PointSet set_from_json(const std::string& text, std::string* name_out) {
    const auto j = nlohmann::json::parse(text);
    const Field f = Field::parse(j.at("field").get<std::string>());
    const Ambient amb(f, j.at("d").get<std::uint32_t>());
    const auto idx = j.at("indices").get<std::vector<std::uint64_t>>();
    for (std::size_t i = 1; i < idx.size(); ++i)
        if (idx[i] <= idx[i - 1])
            throw std::invalid_argument("set file indices must be strictly ascending");
    if (name_out) *name_out = j.value("name", "");
    return PointSet::from_indices(amb, idx);
}

void save_set(const PointSet& set, const std::string& path, const std::string& name) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << set_to_json(set, name) << '\n';
}

PointSet load_set(const std::string& path, std::string* name_out) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return set_from_json(ss.str(), name_out);
}

}  // namespace fqsalem
