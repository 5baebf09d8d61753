#include <doctest.h>

#include <random>

#include "fqsalem/lattice.hpp"

using namespace fqsalem;

TEST_CASE("dot products") {
    const Ambient a53(Field::make(5, 1), 3);
    CHECK(dot(a53, {1, 2, 3}, {4, 0, 1}) == 2);  // 4 + 0 + 3 = 7 = 2 mod 5
    CHECK(dot(a53, {1, 2, 3}, {0, 0, 0}) == 0);

    const Ambient a52(Field::make(5, 1), 2);
    CHECK(dot(a52, {3, 4}, {3, 4}) == 0);  // isotropic: 9 + 16 = 25
    CHECK(norm_sq(a52, {3, 4}) == 0);
    CHECK(norm_sq(a52, {0, 0}) == 0);

    const Ambient a72(Field::make(7, 1), 2);
    CHECK(norm_sq(a72, {1, 2}) == 5);

    CHECK_THROWS_AS(dot(a53, {1, 2}, {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("dot is bilinear on random triples") {
    const Ambient amb(Field::make(3, 2), 3);
    std::mt19937_64 rng(7);
    for (int i = 0; i < 100; ++i) {
        const Point x = amb.decode(rng() % amb.size);
        const Point y = amb.decode(rng() % amb.size);
        const Point z = amb.decode(rng() % amb.size);
        Point xy(amb.dim);
        for (std::uint32_t j = 0; j < amb.dim; ++j) xy[j] = amb.field.add(x[j], y[j]);
        CHECK(dot(amb, xy, z) == amb.field.add(dot(amb, x, z), dot(amb, y, z)));
    }
}

TEST_CASE("index encoding round trips") {
    for (const Ambient& amb : {Ambient(Field::make(2, 4), 3), Ambient(Field::make(5, 1), 2),
                               Ambient(Field::make(7, 1), 3)}) {
        for (std::uint64_t i = 0; i < amb.size; ++i) CHECK(amb.encode(amb.decode(i)) == i);
    }
    // Sampled above 2^16.
    const Ambient big(Field::make(3, 2), 5);  // 9^5 = 59049
    std::mt19937_64 rng(1);
    for (int i = 0; i < 2000; ++i) {
        const std::uint64_t idx = rng() % big.size;
        CHECK(big.encode(big.decode(idx)) == idx);
    }
    // Coordinate 0 is least significant.
    const Ambient a52(Field::make(5, 1), 2);
    CHECK(a52.encode({3, 2}) == 3 + 2 * 5);
}

TEST_CASE("ambient budget") {
    CHECK_THROWS_AS(Ambient(Field::make(2, 13), 2), std::invalid_argument);  // 2^26
    CHECK_THROWS_AS(Ambient(Field::make(5, 1), 0), std::invalid_argument);
}

TEST_CASE("point set operations") {
    const Ambient amb(Field::make(5, 1), 2);
    PointSet full = PointSet::full(amb);
    CHECK(full.size() == 25);
    CHECK(full.complemented().size() == 0);

    PointSet e(amb);
    e.insert_point({1, 2});
    e.insert_point({3, 3});
    e.insert_point({1, 2});  // duplicate
    CHECK(e.size() == 2);
    CHECK(e.recount() == 2);
    e.erase(amb.encode({1, 2}));
    CHECK(e.size() == 1);
    e.insert_point({1, 2});

    CHECK(e.complemented().size() == 23);
    CHECK(e.translated({1, 1}).size() == e.size());
    CHECK(e.translated({1, 1}).contains_point({2, 3}));
    CHECK(e.negated().contains_point({4, 3}));
    CHECK(e.united(e.complemented()).size() == 25);

    CHECK_THROWS_AS(e.insert(25), std::out_of_range);
    CHECK_THROWS_AS(e.contains(99), std::out_of_range);
    const Ambient other(Field::make(5, 1), 3);
    CHECK_THROWS_AS(e.united(PointSet(other)), std::invalid_argument);
}

TEST_CASE("set files round trip and enforce sortedness") {
    const Ambient amb(Field::make(2, 2), 2);
    PointSet e(amb);
    e.insert(3);
    e.insert(1);
    e.insert(14);

    const std::string text = set_to_json(e, "sample");
    std::string name;
    const PointSet back = set_from_json(text, &name);
    CHECK(name == "sample");
    CHECK(back.size() == e.size());
    CHECK(back.indices() == e.indices());

    CHECK_THROWS_AS(
        set_from_json(R"({"field":"5","d":1,"indices":[3,1]})", nullptr),
        std::invalid_argument);
    CHECK_THROWS_AS(
        set_from_json(R"({"field":"5","d":1,"indices":[1,1]})", nullptr),
        std::invalid_argument);
    CHECK_THROWS_AS(set_from_json(R"({"field":"5","d":1,"indices":[9]})", nullptr),
                    std::out_of_range);
}
