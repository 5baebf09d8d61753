#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "fqsalem/gf.hpp"

using namespace fqsalem;

namespace {

// School-book irreducibility of a monic quadratic over Z_p: no roots.
bool quadratic_irreducible(std::uint32_t p, std::uint32_t c0, std::uint32_t c1) {
    for (std::uint32_t x = 0; x < p; ++x)
        if ((x * x + c1 * x + c0) % p == 0) return false;
    return true;
}

}  // namespace

TEST_CASE("prime field construction") {
    const Field f = Field::make(5, 1);
    CHECK(f.q() == 5);
    CHECK(f.spec_string() == "5");
    CHECK(f.modulus().empty());
}

TEST_CASE("canonical modulus for GF(4) is the unique irreducible quadratic") {
    // Oracle: scan the four monic quadratics over Z_2 directly.
    int irreducible_count = 0;
    std::uint32_t found_c0 = 9, found_c1 = 9;
    for (std::uint32_t c0 = 0; c0 < 2; ++c0)
        for (std::uint32_t c1 = 0; c1 < 2; ++c1)
            if (quadratic_irreducible(2, c0, c1)) {
                ++irreducible_count;
                found_c0 = c0;
                found_c1 = c1;
            }
    REQUIRE(irreducible_count == 1);
    CHECK(found_c0 == 1);
    CHECK(found_c1 == 1);

    const Field f4 = Field::make(2, 2);
    CHECK(f4.modulus() == std::vector<std::uint32_t>{1, 1, 1});
    CHECK(f4.spec_string() == "2^2/1,1,1");
}

TEST_CASE("explicit modulus t^2+1 over Z_3 is accepted") {
    // -1 = 2 is not among the squares {0, 1} mod 3.
    const Field f9 = Field::make(3, 2, {1, 0, 1});
    CHECK(f9.q() == 9);
    CHECK(Field::parse(f9.spec_string()) == f9);
}

TEST_CASE("construction errors") {
    CHECK_THROWS_AS(Field::make(4, 1), std::invalid_argument);
    CHECK_THROWS_AS(Field::make(6, 2), std::invalid_argument);
    CHECK_THROWS_AS(Field::make(3, 2, {1, 2, 1}), std::invalid_argument);  // (t+1)^2
    CHECK_THROWS_AS(Field::make(3, 2, {1, 0, 2}), std::invalid_argument);  // not monic
    CHECK_THROWS_AS(Field::make(2, 21), std::invalid_argument);            // above 2^20
    CHECK_THROWS_AS(Field::make(5, 1, {1, 1}), std::invalid_argument);
}

TEST_CASE("field spec parsing") {
    CHECK(Field::parse("49").q() == 49);
    CHECK(Field::parse("49").p() == 7);
    CHECK(Field::parse("2^2").q() == 4);
    CHECK(Field::parse("2^2/1,1,1") == Field::make(2, 2));
    CHECK_THROWS_AS(Field::parse("12"), std::invalid_argument);
    CHECK_THROWS_AS(Field::parse("1"), std::invalid_argument);
}

TEST_CASE("inverses match exhaustive search") {
    const Field f7 = Field::make(7, 1);
    CHECK(f7.inv(3) == 5);  // 3 * 5 = 15 = 1 mod 7
    for (const auto& f : {Field::make(7, 1), Field::make(2, 3), Field::make(3, 2)}) {
        for (felem a = 1; a < f.q(); ++a) {
            felem found = 0;
            for (felem b = 1; b < f.q(); ++b)
                if (f.mul(a, b) == 1) found = b;
            CHECK(f.inv(a) == found);
            CHECK(f.mul(f.inv(a), a) == 1);
        }
        CHECK_THROWS_AS(f.inv(0), std::domain_error);
    }
}

TEST_CASE("GF(4) multiplication reduces t^2 by the modulus") {
    const Field f4 = Field::make(2, 2);
    const felem t = 2;  // coefficients (0, 1)
    CHECK(f4.mul(t, t) == 3);  // t^2 = t + 1
}

TEST_CASE("additive inverses") {
    for (const auto& f : {Field::make(5, 1), Field::make(2, 4), Field::make(3, 3)})
        for (felem a = 0; a < f.q(); ++a) CHECK(f.add(a, f.neg(a)) == 0);
}

TEST_CASE("trace values") {
    const Field f4 = Field::make(2, 2);
    CHECK(f4.trace(2) == 1);  // Tr(t) = t + t^2 = 1
    CHECK(f4.trace(0) == 0);
    const Field f11 = Field::make(11, 1);
    for (felem a = 0; a < 11; ++a) CHECK(f11.trace(a) == a);
    // Z_p-linearity.
    const Field f27 = Field::make(3, 3);
    for (felem a = 0; a < 27; ++a)
        for (felem b = 0; b < 27; ++b)
            CHECK((f27.trace(a) + f27.trace(b)) % 3 == f27.trace(f27.add(a, b)));
}

TEST_CASE("character values and multiplicativity") {
    const Field f5 = Field::make(5, 1);
    const double ang = 2.0 * std::numbers::pi / 5.0;
    CHECK(std::abs(f5.chi(1) - std::complex<double>{std::cos(ang), std::sin(ang)}) < 1e-15);

    const Field f4 = Field::make(2, 2);
    CHECK(std::abs(f4.chi(2) - std::complex<double>{-1.0, 0.0}) < 1e-15);

    for (const auto& f : {Field::make(5, 1), Field::make(2, 3), Field::make(3, 2),
                          Field::make(11, 1), Field::make(2, 7)}) {
        std::complex<double> sum{0, 0};
        bool nontrivial = false;
        for (felem a = 0; a < f.q(); ++a) {
            CHECK(std::abs(std::abs(f.chi(a)) - 1.0) < 1e-12);
            sum += f.chi(a);
            if (std::abs(f.chi(a) - std::complex<double>{1, 0}) > 1e-9) nontrivial = true;
            for (felem b = 0; b < f.q(); ++b)
                CHECK(std::abs(f.chi(a) * f.chi(b) - f.chi(f.add(a, b))) < 1e-12);
        }
        CHECK(std::abs(sum) < 1e-10);
        CHECK(nontrivial);
    }
}

TEST_CASE("Frobenius fixes the trace") {
    for (const auto& f : {Field::make(2, 7), Field::make(3, 4), Field::make(5, 3),
                          Field::make(11, 2)})
        for (felem a = 0; a < f.q(); ++a) CHECK(f.trace(f.pow(a, f.p())) == f.trace(a));
}

TEST_CASE("multiplicative group is cyclic") {
    for (const auto& f : {Field::make(7, 1), Field::make(2, 4), Field::make(3, 3),
                          Field::make(61, 1)}) {
        bool found = false;
        for (felem g = 1; g < f.q() && !found; ++g) {
            std::uint64_t order = 1;
            felem x = g;
            while (x != 1) {
                x = f.mul(x, g);
                ++order;
            }
            found = order == f.q() - 1;
        }
        CHECK(found);
    }
}

TEST_CASE("square roots") {
    const Field f7 = Field::make(7, 1);
    CHECK(f7.sqrt(2) == std::vector<felem>{3, 4});
    CHECK(f7.sqrt(3).empty());  // squares mod 7 are {0, 1, 2, 4}
    CHECK(f7.sqrt(0) == std::vector<felem>{0});

    for (const auto& f : {Field::make(7, 1), Field::make(3, 2), Field::make(13, 1)})
        for (felem a = 1; a < f.q(); ++a) {
            const auto roots = f.sqrt(a);
            CHECK((roots.size() == 0 || roots.size() == 2));
            for (felem r : roots) CHECK(f.mul(r, r) == a);
        }

    // Squaring is a bijection in characteristic 2.
    const Field f16 = Field::make(2, 4);
    for (felem a = 0; a < 16; ++a) {
        const auto roots = f16.sqrt(a);
        REQUIRE(roots.size() == 1);
        CHECK(f16.mul(roots[0], roots[0]) == a);
    }
}
