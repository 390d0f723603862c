#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mdfol/coadjoint.hpp"
#include "test_support.hpp"

using namespace mdfol;
using mdfol::testing::random_covector;
using mdfol::testing::random_element;
using mdfol::testing::random_family;

TEST_CASE("kirillov form vanishes when F kills the derived ideal") {
    const Covector f{7.0, 0.0, 0.0, 0.0, 0.0};
    for (const auto& fam : {MD5Family::f11(1.0, -1.0, 0.5), MD5Family::f12(2.0, 1.0),
                            MD5Family::f13(-1.0, 2.0)}) {
        CHECK(kirillov_form(fam, f).matrix.max_abs() == 0.0);
        CHECK(orbit_dimension(fam, f) == 0);
    }
}

TEST_CASE("kirillov form entries follow the structure constants") {
    // F dual to X2, phi = pi/2: <F,[X1,X3]> = -sin(pi/2) = -1, and
    // <F,[X1,X2]> = cos(pi/2), which is only zero up to rounding.
    const auto fam = MD5Family::f12(1.0, kPi / 2.0);
    const auto b = kirillov_form(fam, Covector{0.0, 1.0, 0.0, 0.0, 0.0}).matrix;
    CHECK(std::abs(b(0, 1)) < 1e-16);
    CHECK(b(0, 2) == cplx(-1.0));
    CHECK(b(2, 0) == cplx(1.0));
    CHECK(std::abs(b(0, 3)) == 0.0);
    CHECK(std::abs(b(0, 4)) == 0.0);

    // the Jordan tail couples delta and sigma: this row pins the placement
    // of the off-diagonal 1 in the F13 block
    const auto fam13 = MD5Family::f13(2.0, kPi / 3.0);
    const auto b13 = kirillov_form(fam13, Covector{0.0, 0.0, 0.0, 1.0, 1.0}).matrix;
    CHECK(b13(0, 3) == cplx(2.0));
    CHECK(b13(0, 4) == cplx(3.0));
}

TEST_CASE("kirillov form is skew with zero interior block") {
    Rng rng(41, "coadjoint/skew");
    for (int n = 0; n < 50; ++n) {
        const auto fam = random_family(rng);
        const auto b = kirillov_form(fam, random_covector(rng)).matrix;
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j) {
                CHECK(b(i, j) == -b(j, i));
                if (i > 0 && j > 0) CHECK(b(i, j) == cplx(0.0));
            }
    }
}

TEST_CASE("orbit dimension dichotomy") {
    const Tolerances tol;
    CHECK(orbit_dimension(MD5Family::f12(1.0, 1.0), Covector{5.0, 0.0, 0.0, 0.0, 0.0}, tol) == 0);
    CHECK(orbit_dimension(MD5Family::f12(1.0, kPi / 2.0), Covector{0.0, 1.0, 0.0, 0.0, 0.0}, tol) == 2);
    CHECK(orbit_dimension(MD5Family::f11(1.0, -1.0, kPi / 4.0), Covector{0.0, 0.0, 0.0, 1.0, 0.0}, tol) == 2);

    Rng rng(42, "coadjoint/dichotomy");
    for (int n = 0; n < 10000; ++n) {
        const auto fam = random_family(rng);
        Covector f = random_covector(rng);
        const bool degenerate = (n % 10 == 0);
        if (degenerate) f.beta = f.gamma = f.delta = f.sigma = 0.0;
        const int dim = orbit_dimension(fam, f, tol);
        const bool tail_zero = f.beta == 0.0 && f.gamma == 0.0 && f.delta == 0.0 && f.sigma == 0.0;
        CHECK(dim == (tail_zero ? 0 : 2));
    }
}

TEST_CASE("orbit chart fixes the base point at (alpha, 0)") {
    Rng rng(43, "coadjoint/chart-base");
    for (int n = 0; n < 100; ++n) {
        const auto fam = random_family(rng);
        const auto f = random_covector(rng);
        CHECK(max_abs_diff(orbit_point(fam, f, f.alpha, 0.0), f) == 0.0);
    }
}

TEST_CASE("orbit chart matches hand-evaluated points") {
    // F12, phi = pi/2: the middle pair only rotates, the tail scales by
    // e^a; at a = ln 2 the tail doubles.
    const auto fam = MD5Family::f12(1.0, kPi / 2.0);
    const Covector f{0.0, 1.0, 0.0, 1.0, 1.0};
    const auto p = orbit_point(fam, f, 3.0, std::log(2.0));
    CHECK(p.alpha == 3.0);
    CHECK(std::abs(p.beta - std::cos(std::log(2.0))) < 1e-14);
    CHECK(std::abs(p.gamma + std::sin(std::log(2.0))) < 1e-14);
    CHECK(std::abs(p.delta - 2.0) < 1e-14);
    CHECK(std::abs(p.sigma - 2.0) < 1e-14);

    // F13 secular term: delta feeds the fifth coordinate linearly in a
    const auto fam13 = MD5Family::f13(1.0, kPi / 2.0);
    const auto q = orbit_point(fam13, Covector{0.0, 0.0, 0.0, 1.0, 0.0}, 0.0, 1.0);
    CHECK(q.alpha == 0.0);
    CHECK(std::abs(q.beta) == 0.0);
    CHECK(std::abs(q.gamma) == 0.0);
    CHECK(std::abs(q.delta - std::exp(1.0)) < 1e-15);
    CHECK(std::abs(q.sigma - std::exp(1.0)) < 1e-15);

    // F11 splits the tail rates
    const auto fam11 = MD5Family::f11(1.0, -1.0, kPi / 2.0);
    const auto r = orbit_point(fam11, Covector{0.0, 0.0, 0.0, 1.0, 1.0}, 0.0, std::log(3.0));
    CHECK(std::abs(r.delta - 3.0) < 1e-14);
    CHECK(std::abs(r.sigma - 1.0 / 3.0) < 1e-14);
}

TEST_CASE("chart image stays in the 2-dimensional stratum") {
    Rng rng(44, "coadjoint/chart-image");
    for (int n = 0; n < 200; ++n) {
        const auto fam = random_family(rng);
        Covector f = random_covector(rng);
        if (sq(f.beta) + sq(f.gamma) + sq(f.delta) + sq(f.sigma) == 0.0) f.beta = 1.0;
        const auto p = orbit_point(fam, f, rng.next_uniform(-3.0, 3.0), rng.next_uniform(-3.0, 3.0));
        CHECK(orbit_dimension(fam, p) == 2);
    }
}

TEST_CASE("coadjoint flow at t = 0 is the identity") {
    Rng rng(45, "coadjoint/flow-zero");
    for (int n = 0; n < 50; ++n) {
        const auto fam = random_family(rng);
        const auto f = random_covector(rng);
        CHECK(max_abs_diff(coadjoint_flow(fam, f, random_element(rng), 0.0), f) == 0.0);
    }
}

TEST_CASE("flow along the generator reproduces the chart parameter") {
    // This is the convention pin: flowing by X1 for time a lands exactly
    // on the chart point (alpha, a).
    Rng rng(46, "coadjoint/flow-pin");
    for (int n = 0; n < 200; ++n) {
        const auto fam = random_family(rng);
        const auto f = random_covector(rng);
        const double a = rng.next_uniform(-2.0, 2.0);
        const auto via_flow = coadjoint_flow(fam, f, LieElement::basis(1), a);
        const auto via_chart = orbit_point(fam, f, f.alpha, a);
        CHECK(max_abs_diff(via_flow, via_chart) < 1e-12);
    }
}

TEST_CASE("ideal directions only shift the first coordinate") {
    Rng rng(47, "coadjoint/flow-ideal");
    for (int n = 0; n < 100; ++n) {
        const auto fam = random_family(rng);
        const auto f = random_covector(rng);
        const double t = rng.next_uniform(-3.0, 3.0);
        const auto g = coadjoint_flow(fam, f, LieElement::basis(4), t);
        CHECK(g.beta == f.beta);
        CHECK(g.gamma == f.gamma);
        CHECK(g.delta == f.delta);
        CHECK(g.sigma == f.sigma);
        // ad of X4 is square-zero, so the series stops at the linear term
        const double lam = fam.lambda1();
        CHECK(std::abs(g.alpha - (f.alpha - t * lam * f.delta)) < 1e-14);
    }
}

TEST_CASE("flow preserves orbit dimension exactly") {
    Rng rng(48, "coadjoint/flow-dim");
    for (int n = 0; n < 200; ++n) {
        const auto fam = random_family(rng);
        Covector f = random_covector(rng);
        if (n % 5 == 0) f.beta = f.gamma = f.delta = f.sigma = 0.0;
        const auto g = coadjoint_flow(fam, f, random_element(rng), rng.next_uniform(-3.0, 3.0));
        CHECK(orbit_dimension(fam, g) == orbit_dimension(fam, f));
    }
}

TEST_CASE("flow satisfies the one-parameter group law") {
    Rng rng(49, "coadjoint/flow-group");
    for (int n = 0; n < 100; ++n) {
        const auto fam = random_family(rng);
        const auto f = random_covector(rng);
        const auto u = random_element(rng);
        const double t = rng.next_uniform(-2.0, 2.0);
        const double s = rng.next_uniform(-2.0, 2.0);
        const auto stepped = coadjoint_flow(fam, coadjoint_flow(fam, f, u, t), u, s);
        const auto direct = coadjoint_flow(fam, f, u, s + t);
        CHECK(max_abs_diff(stepped, direct) < 1e-8);
    }
}

TEST_CASE("match_orbit recovers chart parameters") {
    const auto fam = MD5Family::f12(1.0, 1.0);
    const Covector f{1.5, 1.0, -0.5, 0.25, 0.0};

    const auto self = match_orbit(fam, f, f);
    REQUIRE(self.has_value());
    CHECK(self->x == f.alpha);
    CHECK(std::abs(self->a) < 1e-12);

    const auto g = orbit_point(fam, f, 2.0, 1.0);
    const auto m = match_orbit(fam, f, g);
    REQUIRE(m.has_value());
    CHECK(std::abs(m->x - 2.0) < 1e-10);
    CHECK(std::abs(m->a - 1.0) < 1e-10);
    CHECK(m->residual < 1e-10);
}

TEST_CASE("match_orbit rejects points off the orbit") {
    const auto fam = MD5Family::f12(1.0, kPi / 2.0);
    const Covector f{0.0, 1.0, 0.0, 0.0, 0.0};
    Covector g = f;
    g.sigma = 1.0;  // the orbit of f keeps delta = sigma = 0 identically
    CHECK_FALSE(match_orbit(fam, f, g).has_value());

    CHECK_THROWS_AS(match_orbit(fam, Covector{1.0, 0.0, 0.0, 0.0, 0.0}, f), std::invalid_argument);
}

TEST_CASE("match_orbit handles the purely periodic chart") {
    // phi = pi/2 with zero tail: the flow only rotates the middle pair, so
    // a is determined modulo 2 pi and membership is decided by the angle.
    const auto fam = MD5Family::f12(1.0, kPi / 2.0);
    const Covector f{0.0, 1.0, 0.0, 0.0, 0.0};
    const auto g = orbit_point(fam, f, 1.0, 2.5);
    const auto m = match_orbit(fam, f, g);
    REQUIRE(m.has_value());
    CHECK(std::abs(m->a - 2.5) < 1e-10);

    Covector off = g;
    off.beta *= 1.5;  // wrong modulus, right angle
    off.gamma *= 1.5;
    CHECK_FALSE(match_orbit(fam, f, off).has_value());
}

TEST_CASE("match_orbit closes the loop against the flow oracle") {
    const Tolerances tol;
    Rng rng(50, "coadjoint/match-flow");
    int checked = 0;
    for (int n = 0; n < 300; ++n) {
        const auto fam = random_family(rng);
        Covector f = random_covector(rng);
        if (sq(f.beta) + sq(f.gamma) + sq(f.delta) + sq(f.sigma) == 0.0) continue;
        const auto u = random_element(rng);
        const auto g = coadjoint_flow(fam, f, u, rng.next_uniform(-3.0, 3.0));
        const auto m = match_orbit(fam, f, g, tol);
        REQUIRE(m.has_value());
        CHECK(m->residual < tol.match_tol);
        ++checked;
    }
    CHECK(checked > 250);
}
