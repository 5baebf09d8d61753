#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "fqsalem/constructions.hpp"
#include "fqsalem/spectrum.hpp"
#include "support.hpp"

using namespace fqsalem;
using testsupport::parabola;

TEST_CASE("sphere point counts") {
    const Ambient a52(Field::make(5, 1), 2);
    CHECK(sphere(a52, 1).size() == 4);
    CHECK(sphere(a52, 0).size() == 9);  // -1 = 2^2 mod 5: two lines through 0
    const Ambient a72(Field::make(7, 1), 2);
    CHECK(sphere(a72, 0).size() == 1);  // -1 is a non-residue mod 7
    CHECK(sphere(a72, 0).contains_point({0, 0}));
}

TEST_CASE("cones") {
    const Ambient a53(Field::make(5, 1), 3);
    const PointSet d3 = cone_d(a53);
    CHECK(d3.size() == 16);  // four spheres of four points
    const PointSet c3 = cone_c(a53);
    CHECK(c3.size() == 20);  // z_2 solved uniquely for each (z_1, z_3 != 0)
    CHECK_FALSE(d3.contains_point({1, 2, 0}));  // z_d = 0 excluded
    CHECK_THROWS_AS(cone_c(Ambient(Field::make(5, 1), 2)), std::invalid_argument);
}

TEST_CASE("cylinder is a sphere times a line") {
    const Field f5 = Field::make(5, 1);
    const Ambient a53(f5, 3);
    const PointSet cyl = cylinder(a53, 1);
    CHECK(cyl.size() == 20);
    const PointSet prod =
        direct_sum(sphere(Ambient(f5, 2), 1), PointSet::full(Ambient(f5, 1)));
    CHECK(prod.indices() == cyl.indices());
    CHECK_THROWS_AS(cylinder(a53, 0), std::invalid_argument);
}

TEST_CASE("paraboloid in the plane is the parabola graph") {
    const Ambient a52(Field::make(5, 1), 2);
    const PointSet pb = paraboloid(a52, 1);
    CHECK(pb.size() == 5);
    CHECK(pb.indices() == parabola(a52).indices());
    for (felem k = 0; k < 5; ++k)
        CHECK(pb.contains_point({k, static_cast<felem>((k * k) % 5)}));
}

TEST_CASE("diagonal sets") {
    const Ambient a52(Field::make(5, 1), 2);
    const PointSet diag = diagonal(a52, 1);
    CHECK(diag.size() == 5);
    for (felem k = 0; k < 5; ++k) CHECK(diag.contains_point({k, k}));
    CHECK_THROWS_AS(diagonal(Ambient(Field::make(5, 1), 3), 2), std::invalid_argument);

    const BuiltSet built = build_recipe(a52, "diagonal(n=1)");
    REQUIRE(built.closed_form.has_value());
    CHECK(built.closed_form->support.size() == 5);  // q^{n(d/n - 1)} frequencies
    CHECK(built.closed_form->magnitude == doctest::Approx(0.2));
    CHECK(built.s_theory(2.0) == doctest::Approx(0.5));
    CHECK(built.s_theory(kInfP) == 0.0);

    // Blocked diagonal: d = 4, n = 2 over F_3.
    const Ambient a34(Field::make(3, 1), 4);
    const BuiltSet blocked = build_recipe(a34, "diagonal(n=2)");
    CHECK(blocked.set.size() == 9);
    CHECK(blocked.closed_form->support.size() == 9);  // q^{n(m-1)} with m = 2
}

TEST_CASE("inverse curve") {
    const Ambient a52(Field::make(5, 1), 2);
    const PointSet kl = kloosterman_curve(a52);
    CHECK(kl.size() == 4);
    CHECK(kl.contains_point({2, 3}));  // 2 * 3 = 6 = 1
    const FourierTable t = fourier_transform(kl);
    const double bound = 2.0 * std::sqrt(5.0) / 25.0;
    for (std::uint64_t i = 0; i < a52.size; ++i) {
        const Point z = a52.decode(i);
        if (z[0] != 0 && z[1] != 0) CHECK(std::abs(t.at(i)) <= bound + 1e-12);
    }
}

TEST_CASE("veronese curve attains the gauss-sum sup norm") {
    const Ambient a52(Field::make(5, 1), 2);
    const BuiltSet v = build_recipe(a52, "veronese()");
    CHECK(v.set.size() == 5);
    CHECK(v.set.indices() == parabola(a52).indices());
    REQUIRE(v.s_theory);
    CHECK(v.s_theory(4.0) == doctest::Approx(0.5));

    // Independent oracle: |sum_x chi(x^2)| evaluated directly.
    std::complex<double> gauss{0, 0};
    const Field& f = a52.field;
    for (felem x = 0; x < 5; ++x) gauss += f.chi(f.mul(x, x));
    CHECK(std::abs(gauss) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-12));
    const FourierTable t = fourier_transform(v.set);
    CHECK(lp_norm(t, kInfP) == doctest::Approx(std::abs(gauss) / 25.0).epsilon(1e-12));
    CHECK(salem_exponent_from(lp_norm(t, kInfP), 25, 5) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("polynomial curves") {
    const Ambient a52(Field::make(5, 1), 2);
    const PointSet same = polynomial_curve(a52, {Poly{0, 1}, Poly{0, 1}});
    CHECK(same.indices() == diagonal(a52, 1).indices());

    // Duplicate points collapse and are reported.
    const BuiltSet dup = build_recipe(a52, "curve(f=[k^2,k^2])");
    CHECK(dup.set.size() == 3);
    REQUIRE(!dup.notes.empty());
    CHECK(dup.notes[0].find("collapsed") != std::string::npos);

    // Span rank ignores constant shifts: {k, k+1} behaves like the diagonal.
    CHECK(poly_span_dim(a52.field, {Poly{0, 1}, Poly{1, 1}}) == 1);
    CHECK(poly_span_dim(a52.field, {Poly{0, 1}, Poly{0, 0, 1}}) == 2);
    CHECK(poly_span_dim(a52.field, {Poly{3}, Poly{1}}) == 0);
    const BuiltSet shifted = build_recipe(a52, "curve(f=[k,1:1])");
    REQUIRE(shifted.s_theory);
    CHECK(shifted.s_theory(4.0) == doctest::Approx(0.25));  // min(1/2, n/p) with n = 1

    // Characteristic dividing a component degree suppresses the prediction.
    const Ambient a22(Field::make(2, 2), 2);
    const BuiltSet frob = build_recipe(a22, "curve(f=[k,k^2])");
    CHECK(!frob.s_theory);
}

TEST_CASE("subspace complement") {
    const Ambient a32(Field::make(3, 1), 2);
    const BuiltSet built = build_recipe(a32, "complement(k=1)");
    CHECK(built.set.size() == 6);
    CHECK_FALSE(built.set.contains_point({1, 0}));
    CHECK(built.set.contains_point({1, 1}));

    const FourierTable t = fourier_transform(built.set);
    CHECK(std::abs(std::abs(t.at(a32.encode({0, 1}))) - 1.0 / 3.0) < 1e-12);
    REQUIRE(built.closed_form.has_value());
    CHECK(built.closed_form->support.size() == 2);  // q - 1 off-origin frequencies
    CHECK(built.s_theory(kInfP) == doctest::Approx(0.5));  // 1 - k/d
    CHECK(built.s_theory(2.0) == doctest::Approx(0.75));
    CHECK_THROWS_AS(subspace_complement(a32, 2), std::invalid_argument);
}

TEST_CASE("direct sums factor through the transform") {
    const Field f5 = Field::make(5, 1);
    const Ambient a52(f5, 2), a51(f5, 1);

    const PointSet s = sphere(a52, 1);
    PointSet zero(a51);
    zero.insert(0);
    const PointSet prod = direct_sum(s, zero);
    CHECK(prod.size() == 4);
    CHECK(prod.ambient().dim == 3);

    const FourierTable tp = fourier_transform(prod);
    const FourierTable ts = fourier_transform(s);
    const FourierTable tz = fourier_transform(zero);
    for (std::uint64_t i = 0; i < prod.ambient().size; ++i) {
        const std::complex<double> expect = ts.at(i % 25) * tz.at(i / 25);
        CHECK(std::abs(tp.at(i) - expect) < 1e-12);
    }

    PointSet z1(a51);
    z1.insert(0);
    const PointSet zz = direct_sum(z1, z1);
    CHECK(zz.size() == 1);
    CHECK(zz.contains(0));

    CHECK_THROWS_AS(direct_sum(s, PointSet(Ambient(Field::make(7, 1), 1))),
                    std::invalid_argument);

    std::mt19937_64 rng(4);
    for (int rep = 0; rep < 5; ++rep) {
        const PointSet e = testsupport::bernoulli_set(a52, 0.4, rng());
        const PointSet g = testsupport::bernoulli_set(a51, 0.6, rng());
        if (e.size() == 0 || g.size() == 0) continue;
        const PointSet sum = direct_sum(e, g);
        CHECK(sum.size() == e.size() * g.size());
        const FourierTable tsum = fourier_transform(sum);
        const FourierTable te = fourier_transform(e);
        const FourierTable tg = fourier_transform(g);
        double worst = 0;
        for (std::uint64_t i = 0; i < sum.ambient().size; ++i)
            worst = std::max(worst, std::abs(tsum.at(i) - te.at(i % 25) * tg.at(i / 25)));
        CHECK(worst < 1e-9);
    }
}

TEST_CASE("seeded random sets") {
    const Ambient a91(Field::make(3, 2), 1);
    const PointSet r = random_set(a91, 0.5, 7);
    CHECK(r.size() == 3);  // floor(9^0.5)
    CHECK(random_set(a91, 0.5, 7).indices() == r.indices());
    CHECK(random_set(a91, 0.5, 8).indices() != r.indices());

    const Ambient a72(Field::make(7, 1), 2);
    CHECK(random_set(a72, 2.0, 1).size() == 49);  // floor(7^2) fills the plane
    CHECK_THROWS_AS(random_set(a72, 2.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(random_set(a72, 0.0, 1), std::invalid_argument);

    // Uniformity smoke check: every index is hit about #draws * n / N times.
    std::vector<std::uint32_t> hits(a91.size, 0);
    for (std::uint64_t seed = 0; seed < 3000; ++seed)
        for (std::uint64_t i : random_set(a91, 0.5, seed).indices()) ++hits[i];
    for (std::uint32_t h : hits) {
        CHECK(h > 800);
        CHECK(h < 1200);  // expectation 1000
    }
}

TEST_CASE("annihilator of a line inside a non-degenerate sphere") {
    const Ambient a53(Field::make(5, 1), 3);
    const AnnihilatorPlane plane = annihilator_of_plane(a53);
    CHECK(plane.t != 0);
    CHECK(plane.line.size() == 5);
    plane.line.for_each_index([&](std::uint64_t i) {
        CHECK(norm_sq(a53, a53.decode(i)) == plane.t);
    });
    CHECK(plane.annihilator.size() == 5);  // two independent linear conditions
    plane.annihilator.for_each_index([&](std::uint64_t i) {
        const Point x = a53.decode(i);
        plane.line.for_each_index([&](std::uint64_t j) {
            CHECK(dot(a53, x, a53.decode(j)) == 0);
        });
    });

    // Exact spectrum: q^{-d} #E on span{base, direction}, zero elsewhere.
    const BuiltSet built = build_recipe(a53, "annihilator()");
    REQUIRE(built.closed_form.has_value());
    CHECK(built.closed_form->support.size() == 25);
    const FourierTable t = fourier_transform(built.set);
    double worst = 0;
    for (std::uint64_t i = 0; i < a53.size; ++i) {
        const double expect = i == 0 ? built.set.size() / 125.0
                              : built.closed_form->support.contains(i)
                                  ? built.closed_form->magnitude
                                  : 0.0;
        worst = std::max(worst, std::abs(std::abs(t.at(i)) - expect));
    }
    CHECK(worst < 1e-9);

    // The L^p profile collapses to the flat exponent 1/p.
    for (double p : {2.0, 4.0}) {
        const double lp = lp_norm(t, p);
        const double exact = std::pow(24.0 / 125.0 * std::pow(25.0, -p), 1.0 / p);
        CHECK(lp == doctest::Approx(exact).epsilon(1e-12));
    }

    CHECK_THROWS_AS(annihilator_of_plane(Ambient(Field::make(2, 2), 3)),
                    std::invalid_argument);
}

TEST_CASE("sidon detection") {
    const Ambient a52(Field::make(5, 1), 2);
    CHECK(is_sidon(parabola(a52)).sidon);

    const SidonReport diag_report = is_sidon(diagonal(a52, 1));
    CHECK_FALSE(diag_report.sidon);
    REQUIRE(diag_report.witness.has_value());
    const auto& w = *diag_report.witness;
    Point lhs(2), rhs(2);
    for (int j = 0; j < 2; ++j) {
        lhs[j] = a52.field.add(w[0][j], w[1][j]);
        rhs[j] = a52.field.add(w[2][j], w[3][j]);
    }
    CHECK(lhs == rhs);
    const bool same_pair = (w[0] == w[2] && w[1] == w[3]) || (w[0] == w[3] && w[1] == w[2]);
    CHECK_FALSE(same_pair);

    PointSet single(a52);
    single.insert(7);
    CHECK(is_sidon(single).sidon);

    // Characteristic 2: x + x = 0 for every x is unavoidable and does not
    // count against the set; repeated sums of distinct pairs still do.
    const Ambient a42(Field::make(2, 2), 2);
    PointSet ok2(a42);
    ok2.insert_point({0, 0});
    ok2.insert_point({1, 0});
    ok2.insert_point({0, 1});
    CHECK(is_sidon(ok2).sidon);
    PointSet line2(a42);
    for (felem x = 0; x < 4; ++x) line2.insert_point({x, 0});
    CHECK_FALSE(is_sidon(line2).sidon);
}

TEST_CASE("recipe grammar") {
    const SetRecipe r = SetRecipe::parse("sphere(r=0)");
    CHECK(r.name == "sphere");
    CHECK(r.get("r") == "0");
    CHECK(r.canonical() == "sphere(r=0)");

    const SetRecipe curve = SetRecipe::parse("curve(f=[k,k^2,k^3])");
    CHECK(curve.get("f") == "[k,k^2,k^3]");
    CHECK(SetRecipe::parse("coneD()").name == "coneD");
    CHECK(SetRecipe::parse("coneD").params.empty());

    CHECK_THROWS_AS(SetRecipe::parse("curve(f=[k,k^2)"), std::invalid_argument);
    CHECK_THROWS_AS(SetRecipe::parse("sphere(r)"), std::invalid_argument);

    const Ambient a52(Field::make(5, 1), 2);
    CHECK_THROWS_AS(build_recipe(a52, "pyramid()"), std::invalid_argument);
    CHECK_THROWS_AS(build_recipe(a52, "sphere()"), std::invalid_argument);

    const Field f5 = Field::make(5, 1);
    CHECK(parse_poly_token("k", f5) == Poly{0, 1});
    CHECK(parse_poly_token("k^3", f5) == Poly{0, 0, 0, 1});
    CHECK(parse_poly_token("3", f5) == Poly{3});
    CHECK(parse_poly_token("1:0:2", f5) == Poly{1, 0, 2});
    CHECK_THROWS_AS(parse_poly_token("k^0", f5), std::invalid_argument);
}

TEST_CASE("radius-zero sphere flattens in odd dimension") {
    // In d = 3 the transform of S_0 vanishes identically on S_0 \ {0} (the
    // quadratic-character twist cancels the would-be spike) and the largest
    // off-origin value is exactly q^{-2} = q^{-d} sqrt(#S_0): the set attains
    // the optimal uniform bound at every p.
    for (const std::string spec : {"5", "9", "13"}) {
        const Field f = Field::parse(spec);
        const Ambient amb(f, 3);
        const PointSet s0 = sphere(amb, 0);
        const double q = static_cast<double>(f.q());
        CHECK(s0.size() == static_cast<std::uint64_t>(q * q));
        const FourierTable t = fourier_transform(s0);
        double spike = 0;
        for (std::uint64_t i = 1; i < amb.size; ++i)
            if (norm_sq(amb, amb.decode(i)) == 0)
                spike = std::max(spike, std::abs(t.at(i)));
        CHECK(spike < 1e-12);
        CHECK(lp_norm(t, kInfP) == doctest::Approx(1.0 / (q * q)).epsilon(1e-12));
        CHECK(salem_exponent_from(lp_norm(t, kInfP), amb.size, s0.size()) ==
              doctest::Approx(0.5).epsilon(1e-9));
    }

    // The C-cone carries an exact axis spike of modulus q^{-2}: its level
    // sets all have exactly q^{d-2} points, so the frequency (0, 0, z) sums
    // the full multiplicative shell. That spike alone pins s_emp near 1/2
    // for large p in d = 3.
    const Ambient a53(Field::make(5, 1), 3);
    const FourierTable tc = fourier_transform(cone_c(a53));
    CHECK(std::abs(tc.at(a53.encode({0, 0, 1}))) == doctest::Approx(0.04).epsilon(1e-12));
}

TEST_CASE("recipe hypothesis guards") {
    // Radius zero in the plane needs -1 to be a square.
    CHECK(build_recipe(Ambient(Field::make(5, 1), 2), "sphere(r=0)").set.size() == 9);
    CHECK_THROWS_AS(build_recipe(Ambient(Field::make(7, 1), 2), "sphere(r=0)"),
                    std::invalid_argument);
    // Quadratic constructions refuse characteristic 2.
    CHECK_THROWS_AS(build_recipe(Ambient(Field::make(2, 2), 3), "coneD()"),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_recipe(Ambient(Field::make(2, 3), 2), "sphere(r=1)"),
                    std::invalid_argument);
}
