#include <doctest.h>

#include <cmath>
#include <set>

#include "cml/errors.hpp"
#include "cml/tangent.hpp"

using namespace cml;

TEST_CASE("theta closed form: M3 of F_{5,1}") {
    // anchor (3/5, 3/5), side 1/5: extreme corners give atan(4/3) - atan(3/4)
    SquareRat m3{Rat(3, 5), Rat(3, 5), Rat(1, 5)};
    const double want = std::atan2(4.0, 3.0) - std::atan2(3.0, 4.0);
    CHECK(std::abs(theta_of_square(m3) - want) < 1e-12);
    CHECK_THROWS_AS(theta_of_square(SquareRat{Rat(0), Rat(0), Rat(1)}), UnmappedCircle);
}

TEST_CASE("theta is scale invariant") {
    // exact as angles; the documented double-precision slack is 1e-12
    SquareRat sq{Rat(3, 5), Rat(7, 25), Rat(1, 25)};
    for (int n : {5, 7, 25}) {
        SquareRat scaled{sq.x0 * Rat(n), sq.y0 * Rat(n), sq.side * Rat(n)};
        CHECK(std::abs(theta_of_square(scaled) - theta_of_square(sq)) < 1e-12);
    }
}

TEST_CASE("theta invariant under diagonal reflection") {
    SquareRat sq{Rat(3, 5), Rat(1, 5), Rat(1, 5)};
    SquareRat swapped{sq.y0, sq.x0, sq.side};
    CHECK(std::abs(theta_of_square(sq) - theta_of_square(swapped)) < 1e-15);
}

TEST_CASE("annulus representatives: counts and disjointness") {
    for (int d = 1; d <= 3; ++d) {
        auto reps = annulus_circles(CarpetSpec::fnp(5, 1), d);
        long long want = 4;
        for (int t = 1; t < d; ++t) want *= 21;
        CHECK(static_cast<long long>(reps.size()) == want);
        // all inside the closed annulus, disjoint interiors
        double area = 0;
        for (const auto& sq : reps) {
            CHECK(Rat(0) < sq.x0);
            CHECK(sq.x0 + sq.side <= Rat(5));
            CHECK(!(sq.x0 < Rat(1) && sq.y0 < Rat(1)));
            area += sq.side.to_double() * sq.side.to_double();
        }
        CHECK(area < 24.0); // total square area stays under the annulus area
    }
    CHECK(annulus_circles(CarpetSpec::sm(3), 1).size() == 1);
}

TEST_CASE("window construction counts") {
    // w=0: exactly the level-d holes of the carpet
    auto w0 = build_window(CarpetSpec::fnp(5, 1), 0, 2, WindowKind::Origin);
    CHECK(w0.circles.size() == 88);
    // w=1, d=1: the four unit-square holes plus the four scaled-copy holes
    auto w1 = build_window(CarpetSpec::fnp(5, 1), 1, 1, WindowKind::Origin);
    CHECK(w1.circles.size() == 8);
    int in_annulus = 0;
    for (const auto& c : w1.circles) in_annulus += c.in_annulus ? 1 : 0;
    CHECK(in_annulus == 4);
    // corner kind, w=0, d=1: 12 generation-1 holes across three quadrants
    auto corner = build_window(CarpetSpec::fnp(5, 1), 0, 1, WindowKind::Corner);
    CHECK(corner.circles.size() == 12);
    std::set<std::pair<Rat, Rat>> anchors;
    for (const auto& c : corner.circles) {
        CHECK(c.quadrant >= 1);
        anchors.insert({c.sq.x0, c.sq.y0});
    }
    CHECK(anchors.size() == 12); // pairwise distinct squares
}

TEST_CASE("window nesting: the unit-square copy persists inside the scaled copy") {
    // n^j F restricted to [0,1]^2 equals F, so every depth-(d-1) hole of the
    // j=0 copy reappears among the j=1 copy's holes
    auto shallow = build_window(CarpetSpec::fnp(5, 1), 0, 1, WindowKind::Origin);
    auto deep = build_window(CarpetSpec::fnp(5, 1), 1, 2, WindowKind::Origin);
    std::set<SquareRat> all;
    for (const auto& c : deep.circles) all.insert(c.sq);
    for (const auto& c : shallow.circles) CHECK(all.count(c.sq) == 1);
}

TEST_CASE("projection mass at depth 1 matches the four closed-form shadows") {
    auto rep = projection_mass(CarpetSpec::fnp(5, 1), 1);
    REQUIRE(rep.entries.size() == 4);
    // squares of side 1 anchored at (1,1), (3,1), (1,3), (3,3) in [0,5]^2
    auto th = [](double ax, double ay) { return std::atan2(ay + 1, ax) - std::atan2(ay, ax + 1); };
    const double want =
        th(1, 1) * th(1, 1) + 2 * th(3, 1) * th(3, 1) + th(3, 3) * th(3, 3);
    CHECK(std::abs(rep.mass - want * 4.0 / (M_PI * M_PI)) < 1e-12);
    CHECK(rep.mass > 0);
}

TEST_CASE("projection mass bound with the measured constant") {
    for (int d = 1; d <= 3; ++d) {
        auto rep = projection_mass(CarpetSpec::fnp(5, 1), d);
        CHECK(rep.K > 0);
        CHECK(rep.mass > 0);
        CHECK(rep.mass <= rep.bound);
        CHECK(rep.slack >= 0);
    }
    auto s3 = projection_mass(CarpetSpec::sm(3), 2);
    CHECK(s3.mass <= s3.bound);
}

TEST_CASE("per-orbit totals agree between representative annuli") {
    // the n-scaled annulus carries the same shadow widths
    auto reps = annulus_circles(CarpetSpec::fnp(5, 1), 2);
    double direct = 0, scaled = 0;
    for (const auto& sq : reps) {
        direct += theta_of_square(sq);
        SquareRat up{sq.x0 * Rat(5), sq.y0 * Rat(5), sq.side * Rat(5)};
        scaled += theta_of_square(up);
    }
    CHECK(std::abs(direct - scaled) < 1e-12);
}

TEST_CASE("sampled admissibility of the projection distribution") {
    auto window = build_window(CarpetSpec::fnp(5, 1), 1, 2, WindowKind::Origin);
    auto paths = default_sample_paths(CarpetSpec::fnp(5, 1), 1, 2);
    auto rep = admissibility_sample(window, paths);
    CHECK(!rep.violation);
    CHECK(rep.min_sum >= 1.0 - 1e-9);
    // the zero distribution is flagged
    auto zero = admissibility_sample(window, paths, 0.0);
    CHECK(zero.violation);
}

TEST_CASE("third transfer: exact one-third accounting") {
    auto rep = third_transfer(CarpetSpec::fnp(5, 1), 2);
    CHECK(rep.mass_ratio == Rat(1, 3));
    CHECK(std::abs(rep.mass_corner - rep.mass_origin / 3.0) < 1e-15);
    for (const auto& e : rep.entries) {
        CHECK(e.rho_corner == e.rho_origin / 3.0);
        // the unique axis reflection lands on the original square or on its
        // diagonal mirror (for the rotated copies), which carries the same
        // shadow width
        const SquareRat mirror{e.origin_sq.y0, e.origin_sq.x0, e.origin_sq.side};
        for (const auto& csq : e.corner_sqs) {
            SquareRat back = csq;
            if (back.x0.num < 0) back.x0 = -(back.x0 + back.side);
            if (back.y0.num < 0) back.y0 = -(back.y0 + back.side);
            CHECK((back == e.origin_sq || back == mirror));
            CHECK(std::abs(theta_of_square(back) - theta_of_square(e.origin_sq)) < 1e-12);
        }
    }
    // sampled three-quadrant paths stay admissible
    CHECK(!rep.corner_samples.violation);
    CHECK(rep.corner_samples.min_sum >= 1.0 - 1e-9);
}

TEST_CASE("quadrant copies reject boundary squares") {
    CHECK_THROWS_AS(quadrant_copies(SquareRat{Rat(0), Rat(1), Rat(1)}), UnmappedCircle);
    auto copies = quadrant_copies(SquareRat{Rat(1, 5), Rat(1, 5), Rat(1, 5)});
    CHECK(copies[0].x0 == Rat(-2, 5)); // i F image
    CHECK(copies[1].x0 == Rat(-2, 5)); // -F image
    CHECK(copies[2].x0 == Rat(1, 5));  // -i F image
}

TEST_CASE("tg-report json") {
    auto rep = projection_mass(CarpetSpec::fnp(5, 1), 2);
    auto j = projection_report_to_json(rep);
    CHECK(j.at("schema") == "tg-report/1");
    CHECK(j.at("entries").size() == rep.entries.size());
    CHECK(j.at("K").get<double>() == rep.K);
}
