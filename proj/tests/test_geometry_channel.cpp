#include <catch2/catch_amalgamated.hpp>

#include "mfris/channel.hpp"
#include "mfris/geometry.hpp"
#include "mfris/units.hpp"

using namespace mfris;

namespace {

NetworkGeometry desk_geometry() {
    NetworkGeometry g;
    g.bs_position = {0, 0, 5};
    g.user_positions[0] = {{0, 30, 0}, {0, 35, 0}};
    g.user_positions[1] = {{10, 40, 0}, {10, 45, 0}};
    g.region.lo = {5, 10, 10};
    g.region.hi = {5, 45, 10};
    g.antennas_bs = 2;
    g.elements_y = 2;
    g.elements_z = 2;
    g.spacing_ratio = 0.5;
    return g;
}

} // namespace

TEST_CASE("path_loss reference values") {
    CHECK(path_loss(1.0, 2.2, 0.01) == Catch::Approx(0.01).epsilon(1e-14));
    CHECK(path_loss(10.0, 2.0, 0.01) == Catch::Approx(1.0e-4).epsilon(1e-12));
    // independent route through logs
    double expected = std::exp(std::log(0.01) - 2.2 * std::log(30.0));
    CHECK(path_loss(30.0, 2.2, 0.01) == Catch::Approx(expected).epsilon(1e-12));
    CHECK(expected == Catch::Approx(5.6278e-6).epsilon(1e-3));
    CHECK_THROWS_AS(path_loss(0.0, 2.0, 0.01), std::domain_error);
    CHECK_THROWS_AS(path_loss(-1.0, 2.0, 0.01), std::domain_error);
}

TEST_CASE("path_loss monotonicity") {
    double prev = path_loss(1.0, 2.2, 0.01);
    for (double d = 2.0; d < 100.0; d += 1.7) {
        double cur = path_loss(d, 2.2, 0.01);
        CHECK(cur < prev);
        prev = cur;
    }
    CHECK(path_loss(7.0, 2.2, 0.02) > path_loss(7.0, 2.2, 0.01));
}

TEST_CASE("angles_from_positions") {
    auto a = angles_from_positions({0, 0, 0}, {1, 0, 0});
    CHECK(a.vertical == Catch::Approx(0.0).margin(1e-15));
    CHECK(a.horizontal == Catch::Approx(0.0).margin(1e-15));

    auto up = angles_from_positions({0, 0, 0}, {0, 0, 1});
    CHECK(up.vertical == Catch::Approx(M_PI / 2).epsilon(1e-12));

    auto down = angles_from_positions({0, 0, 5}, {0, 30, 0});
    CHECK(down.vertical == Catch::Approx(-std::atan(5.0 / 30.0)).epsilon(1e-12));
    CHECK(down.horizontal == Catch::Approx(M_PI / 2).epsilon(1e-12));

    CHECK_THROWS_AS(angles_from_positions({1, 2, 3}, {1, 2, 3}), std::domain_error);
}

TEST_CASE("los_component zero angles gives all ones") {
    auto g = desk_geometry();
    MatrixXcd H = los_component(g, {0, 0, 0, 0});
    REQUIRE(H.rows() == 4);
    REQUIRE(H.cols() == 2);
    CHECK((H.array() - 1.0).abs().maxCoeff() < 1e-14);
}

TEST_CASE("los_component z-axis factor at broadside") {
    auto g = desk_geometry();
    g.antennas_bs = 1;
    // sin(phi) sin(theta) = 1 forces a phase step of pi along z
    MatrixXcd H = los_component(g, {M_PI / 2, M_PI / 2, 0, 0});
    REQUIRE(H.rows() == 4);
    // element order m = iz * M_y + iy: first two rows iz = 0, last two iz = 1
    CHECK(std::abs(H(0, 0) - std::complex<double>(1, 0)) < 1e-12);
    CHECK(std::abs(H(1, 0) - std::complex<double>(1, 0)) < 1e-12);
    CHECK(std::abs(H(2, 0) - std::polar(1.0, -M_PI)) < 1e-12);
    CHECK(std::abs(H(3, 0) - std::polar(1.0, -M_PI)) < 1e-12);
}

TEST_CASE("los_component entries have unit modulus") {
    auto g = desk_geometry();
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        LosAngles ang{rng.uniform(-M_PI, M_PI), rng.uniform(-M_PI, M_PI),
                      rng.uniform(-M_PI, M_PI), rng.uniform(-M_PI, M_PI)};
        MatrixXcd H = los_component(g, ang);
        CHECK(H.rows() == g.elements());
        CHECK(H.cols() == g.antennas_bs);
        CHECK((H.array().abs() - 1.0).abs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("rician limits") {
    auto g = desk_geometry();
    FadingParams f;
    Vec3 loc{5, 20, 10};

    f.rician_bs = f.rician_bu = f.rician_su = std::numeric_limits<double>::infinity();
    auto pure_los = sample_channels(g, f, loc, 1);
    RayAngles aoa = angles_from_positions(loc, g.bs_position);
    RayAngles aod = angles_from_positions(g.bs_position, loc);
    MatrixXcd expected = pure_los.L_bs * los_component(g, {aoa.vertical, aoa.horizontal,
                                                           aod.vertical, aod.horizontal});
    CHECK((pure_los.H - expected).norm() < 1e-12);

    f.rician_bs = f.rician_bu = f.rician_su = 0.0;
    auto pure_nlos = sample_channels(g, f, loc, 1);
    CHECK((pure_nlos.H - pure_nlos.L_bs * pure_nlos.H_nlos).norm() < 1e-14);
}

TEST_CASE("small-scale second moment is unity") {
    auto g = desk_geometry();
    FadingParams f;
    f.rician_bs = db_to_linear(3.0);
    Vec3 loc{5, 20, 10};
    double acc = 0.0;
    long count = 0;
    for (int rep = 0; rep < 1250; ++rep) {
        auto cs = sample_channels(g, f, loc, 1000 + rep);
        acc += cs.H_hat.squaredNorm();
        count += cs.H_hat.size();
    }
    double mean = acc / static_cast<double>(count);
    CHECK(mean == Catch::Approx(1.0).epsilon(0.05));
}

TEST_CASE("sampling is reproducible and location-aware") {
    auto g = desk_geometry();
    FadingParams f;
    Vec3 loc{5, 20, 10};
    auto a = sample_channels(g, f, loc, 42);
    auto b = sample_channels(g, f, loc, 42);
    CHECK(a.H == b.H);
    CHECK(a.h[0][1] == b.h[0][1]);
    CHECK(a.g[1][0] == b.g[1][0]);

    auto c = sample_channels(g, f, loc, 43);
    CHECK(a.H != c.H);

    CHECK_THROWS_AS(sample_channels(g, f, Vec3{0, 0, 0}, 42), std::invalid_argument);
}

TEST_CASE("rebuild keeps NLoS frozen") {
    auto g = desk_geometry();
    FadingParams f;
    Vec3 loc{5, 20, 10};
    auto cs = sample_channels(g, f, loc, 9);
    MatrixXcd H0 = cs.H;
    MatrixXcd N0 = cs.H_nlos;
    VectorXcd h0 = cs.h[0][0];

    cs.rebuild_at({5, 40, 10});
    CHECK(cs.H_nlos == N0);
    CHECK((cs.H - H0).norm() > 1e-9);       // LoS and path loss moved
    CHECK((cs.h[0][0] - h0).norm() < 1e-15); // BS-user link unaffected

    cs.rebuild_at(loc);
    CHECK((cs.H - H0).norm() < 1e-12);
}
