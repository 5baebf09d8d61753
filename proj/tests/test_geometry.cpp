#include <doctest.h>

#include <cmath>
#include <random>

#include "fqsalem/constructions.hpp"
#include "fqsalem/geometry.hpp"
#include "support.hpp"

using namespace fqsalem;
using testsupport::bernoulli_set;
using testsupport::parabola;

TEST_CASE("sumsets and fibers in one dimension") {
    const Ambient a51(Field::make(5, 1), 1);
    PointSet e(a51);
    e.insert(0);
    e.insert(1);
    const SumsetResult sum = sumset({&e, &e});
    CHECK(sum.set.indices() == std::vector<std::uint64_t>{0, 1, 2});
    CHECK(sum.fibers == std::vector<std::uint64_t>{1, 2, 1, 0, 0});

    PointSet one(a51);
    one.insert(1);
    CHECK(sumset({&one, &one}).set.indices() == std::vector<std::uint64_t>{2});

    CHECK_THROWS_AS(sumset({&e}), std::invalid_argument);
    const PointSet other(Ambient(Field::make(7, 1), 1));
    CHECK_THROWS_AS(sumset({&e, &other}), std::invalid_argument);
}

TEST_CASE("parabola sumset saturates the sidon count") {
    const Ambient a52(Field::make(5, 1), 2);
    const PointSet par = parabola(a52);
    const SumsetResult sum = sumset({&par, &par});
    CHECK(sum.set.size() == 15);  // #E (#E + 1) / 2
    CHECK(sumset({&par, &par, &par}).set.size() == 25);  // 3E already fills the plane

    // Fiber identity against the product of transforms.
    const FourierTable t = fourier_transform(par);
    double fiber_sq = 0;
    for (std::uint64_t z = 0; z < a52.size; ++z)
        fiber_sq += double(sum.fibers[z]) * double(sum.fibers[z]);
    double cross = 0;
    for (std::uint64_t m = 0; m < a52.size; ++m) cross += std::norm(t.at(m)) * std::norm(t.at(m));
    const double rhs = std::pow(25.0, 3.0) * cross;  // q^{(2k-1)d} with k = 2, d = 2
    CHECK(fiber_sq == doctest::Approx(rhs).epsilon(1e-9));
}

TEST_CASE("difference and direction counts") {
    const Ambient a52(Field::make(5, 1), 2);
    const PointSet par = parabola(a52);
    CHECK(difference_set(par).size() == 21);
    CHECK(direction_count(par) == 5);

    PointSet single(a52);
    single.insert_point({2, 3});
    CHECK(difference_set(single).indices() == std::vector<std::uint64_t>{0});
    CHECK(direction_count(single) == 0);

    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 5; ++rep) {
        const PointSet e = bernoulli_set(a52, 0.25, rng());
        if (e.size() < 2) continue;
        CHECK(difference_set(e).size() <= 5 * direction_count(e) + 1);
    }
}

TEST_CASE("distance sets") {
    const Ambient a52(Field::make(5, 1), 2);
    CHECK(distance_set(PointSet::full(a52)).size() == 5);
    CHECK(distance_set(parabola(a52)).size() == 5);

    PointSet two(a52);
    two.insert_point({0, 0});
    two.insert_point({1, 0});
    CHECK(distance_set(two) == std::vector<felem>{0, 1});
}

TEST_CASE("spherical energies partition the off-origin mass") {
    const Ambient a53(Field::make(5, 1), 3);
    std::mt19937_64 rng(9);
    for (int rep = 0; rep < 4; ++rep) {
        const PointSet e = bernoulli_set(a53, 0.2 + 0.2 * rep, rng());
        if (e.size() == 0) continue;
        const FourierTable t = fourier_transform(e);
        const SphericalEnergy en = spherical_energy(t);

        double total = 0;
        for (double v : en.energy) total += v;
        double offorigin = 0;
        for (std::uint64_t i = 1; i < a53.size; ++i) offorigin += std::norm(t.at(i));
        CHECK(total == doctest::Approx(offorigin).epsilon(1e-9));

        std::uint64_t sphere_total = 0;
        for (std::uint64_t n : en.sphere_sizes) sphere_total += n;
        CHECK(sphere_total == a53.size);

        // Explicit-constant bound: the squared per-sphere sums are controlled
        // by the largest punctured sphere times the fourth-power mass.
        double lhs = 0;
        for (std::uint64_t tval = 0; tval < 5; ++tval) lhs += en.energy[tval] * en.energy[tval];
        std::uint64_t max_sphere = 0;
        for (std::uint64_t tval = 0; tval < 5; ++tval) {
            const std::uint64_t sz = en.sphere_sizes[tval] - (tval == 0 ? 1 : 0);
            max_sphere = std::max(max_sphere, sz);
        }
        const double l4 = lp_norm(t, 4);
        const double rhs = double(max_sphere) * 125.0 * std::pow(l4, 4.0);
        CHECK(lhs <= rhs * (1 + 1e-12) + 1e-18);
    }

    // Full space: all energies vanish.
    const SphericalEnergy full_en = spherical_energy(PointSet::full(a53));
    for (double v : full_en.energy) CHECK(v < 1e-18);
    CHECK(full_en.mattila < 1e-12);
}

TEST_CASE("annihilator energy concentrates on its sphere") {
    const Ambient a53(Field::make(5, 1), 3);
    const AnnihilatorPlane plane = annihilator_of_plane(a53);
    const SphericalEnergy en = spherical_energy(plane.annihilator);
    CHECK(en.energy[plane.t] == doctest::Approx(2.0 / 125.0).epsilon(1e-9));
    CHECK(en.gensalem_max == doctest::Approx(2.0 / 125.0).epsilon(1e-9));
}

TEST_CASE("distance bound reports") {
    const Ambient a52(Field::make(5, 1), 2);
    const DistanceReport full = distance_bound_report(PointSet::full(a52));
    CHECK(full.distance_count == 5);
    CHECK(full.mattila < 1e-12);
    CHECK(full.bound_mattila == doctest::Approx(5.0));

    const DistanceReport par = distance_bound_report(parabola(a52));
    CHECK(par.distance_count == 5);
    CHECK(par.ratio_mattila > 0);

    // Unit spheres realize every distance; the count sits right on the
    // fourth-moment bound across the grid.
    for (const std::string spec : {"5", "7", "9", "11", "13"}) {
        const Ambient amb(Field::parse(spec), 3);
        const DistanceReport rep = distance_bound_report(sphere(amb, 1));
        CHECK(rep.distance_count == amb.field.q());
        CHECK(rep.ratio_mattila >= 0.125);
    }

    CHECK_THROWS_AS(distance_bound_report(PointSet::full(Ambient(Field::make(2, 2), 2))),
                    std::invalid_argument);
}

TEST_CASE("orthogonal groups by exhaustive matrix oracle") {
    const Field f5 = Field::make(5, 1);
    CHECK(orthogonal_group(f5, 1).size() == 2);

    // Oracle: scan all 2x2 matrices directly.
    for (const Field& f : {Field::make(3, 1), Field::make(5, 1), Field::make(7, 1)}) {
        std::uint64_t oracle = 0;
        const auto q = static_cast<felem>(f.q());
        for (felem a = 0; a < q; ++a)
            for (felem b = 0; b < q; ++b)
                for (felem c = 0; c < q; ++c)
                    for (felem d = 0; d < q; ++d) {
                        const bool unit_cols = f.add(f.mul(a, a), f.mul(c, c)) == 1 &&
                                               f.add(f.mul(b, b), f.mul(d, d)) == 1;
                        const bool orth = f.add(f.mul(a, b), f.mul(c, d)) == 0;
                        if (unit_cols && orth) ++oracle;
                    }
        CHECK(orthogonal_group(f, 2).size() == oracle);
    }
    CHECK(orthogonal_group(f5, 2).size() == 8);
    CHECK(orthogonal_group(f5, 3).size() == 240);  // 2 q (q^2 - 1)
}

TEST_CASE("simplex censuses") {
    const Ambient a52(Field::make(5, 1), 2);
    const SimplexCensus t1 = simplex_census(PointSet::full(a52), 1, true);
    CHECK(t1.signature_count == 5);  // one class per squared distance, 0 included
    REQUIRE(t1.orbit_count.has_value());
    CHECK(*t1.orbit_count == 5);

    std::mt19937_64 rng(13);
    for (const Field& f : {Field::make(3, 1), Field::make(5, 1), Field::make(7, 1)}) {
        const Ambient amb(f, 2);
        for (std::uint32_t k = 1; k <= 2; ++k)
            for (int rep = 0; rep < 4; ++rep) {
                const PointSet e = bernoulli_set(amb, 0.35, rng());
                if (e.size() < k + 1) continue;
                const SimplexCensus c = simplex_census(e, k, true);
                REQUIRE(c.orbit_count.has_value());
                CHECK(c.signature_count <= *c.orbit_count);
            }
    }

    CHECK_THROWS_AS(simplex_census(PointSet::full(a52), 3, false), std::invalid_argument);

    // Oracle skipped when the group times the tuples blows the budget.
    const Ambient a17(Field::make(17, 1), 2);
    const PointSet big = testsupport::bernoulli_set(a17, 0.5, 2);
    REQUIRE(big.size() > 100);
    const SimplexCensus skipped = simplex_census(big, 2, true);
    CHECK_FALSE(skipped.orbit_count.has_value());
    CHECK(skipped.degenerate_note.find("skipped") != std::string::npos);
    CHECK(skipped.signature_count > 0);
}

TEST_CASE("sumset bound chain has zero slack") {
    const Ambient a52(Field::make(5, 1), 2);
    const PointSet par = parabola(a52);
    const SumsetBoundReport rep = sumset_bound_check({&par, &par}, {2.0, 2.0});
    CHECK(rep.sumset_size == 15);
    CHECK(rep.slack == 0.0);
    CHECK(rep.lhs <= rep.rhs);
    CHECK(rep.fiber_plancherel_residual < 1e-9);

    PointSet s1(a52), s2(a52);
    s1.insert_point({1, 2});
    s2.insert_point({3, 3});
    const SumsetBoundReport deg = sumset_bound_check({&s1, &s2}, {2.0, 2.0});
    CHECK(deg.sumset_size == 1);
    CHECK(deg.lhs == 1.0);
    CHECK(deg.slack == 0.0);

    CHECK_THROWS_AS(sumset_bound_check({&par, &par}, {2.0, 3.0}), std::invalid_argument);

    std::mt19937_64 rng(21);
    for (int rep2 = 0; rep2 < 5; ++rep2) {
        const PointSet a = bernoulli_set(a52, 0.3, rng());
        const PointSet b = bernoulli_set(a52, 0.3, rng());
        const PointSet c = bernoulli_set(a52, 0.3, rng());
        if (a.size() == 0 || b.size() == 0 || c.size() == 0) continue;
        const SumsetBoundReport r3 =
            sumset_bound_check({&a, &b, &c}, {3.0, 3.0, 3.0});
        CHECK(r3.slack == 0.0);
        CHECK(r3.fiber_plancherel_residual < 1e-9);
    }
}

TEST_CASE("difference sets of square-summable sets grow with the exponent") {
    const Ambient a72(Field::make(7, 1), 2);
    std::mt19937_64 rng(33);
    for (int rep = 0; rep < 5; ++rep) {
        const PointSet e = bernoulli_set(a72, 0.15, rng());
        if (e.size() < 2) continue;
        const double s4 = salem_exponent(e, 4.0);
        const double lower =
            std::min(std::pow(double(e.size()), 4.0 * s4), double(a72.size)) / 8.0;
        CHECK(double(difference_set(e).size()) >= lower);
    }
}

TEST_CASE("sidon sum control") {
    const Ambient a52(Field::make(5, 1), 2);
    const PointSet par = parabola(a52);
    for (double p : {2.0, 4.0}) {
        const SidonSumReport rep = sidon_sum_check(par, p);
        CHECK(rep.holds);
        CHECK(rep.lower <= rep.value + 1e-12);
        CHECK(rep.value <= rep.upper + 1e-12);
    }
    CHECK(sidon_sum_check(par, 4.0).s_emp >= 0.5 - 1e-9);
    CHECK_THROWS_AS(sidon_sum_check(diagonal(a52, 1), 2.0), std::invalid_argument);
}
