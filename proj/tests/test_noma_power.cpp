#include <catch2/catch_amalgamated.hpp>

#include "mfris/noma.hpp"
#include "mfris/rng.hpp"

using namespace mfris;
using namespace mfris::noma;

namespace {

DirectionAllocationInput make_input(std::initializer_list<double> gamma,
                                    std::initializer_list<double> r) {
    DirectionAllocationInput in;
    in.gamma = Eigen::Map<const VectorXd>(gamma.begin(), gamma.size());
    in.r_min = Eigen::Map<const VectorXd>(r.begin(), r.size());
    return in;
}

DirectionAllocationInput random_feasible(Rng& rng, int J) {
    for (;;) {
        DirectionAllocationInput in;
        in.gamma.resize(J);
        in.r_min.resize(J);
        for (int j = 0; j < J; ++j) {
            in.gamma(j) = rng.uniform(0.5, 50.0);
            in.r_min(j) = rng.uniform(0.0, 1.5);
        }
        std::sort(in.gamma.data(), in.gamma.data() + J);
        if (is_feasible(in)) return in;
    }
}

// closed form of the feasibility threshold: sum_j prod_{i<j}(1+r_i) r_j / gamma_j
double product_form_sum(const DirectionAllocationInput& in) {
    double total = 0.0;
    double prod = 1.0;
    for (int j = 0; j < in.users(); ++j) {
        total += prod * in.r_min(j) / in.gamma(j);
        prod *= 1.0 + in.r_min(j);
    }
    return total;
}

} // namespace

TEST_CASE("minimum power recursion") {
    auto single = make_input({2.0}, {1.0});
    CHECK(min_power_coeffs(single)(0) == Catch::Approx(0.5).epsilon(1e-14));

    auto two = make_input({2.0, 10.0}, {1.0, 1.0});
    VectorXd pbar = min_power_coeffs(two);
    CHECK(pbar(0) == Catch::Approx(0.6).epsilon(1e-14));
    CHECK(pbar(1) == Catch::Approx(0.1).epsilon(1e-14));

    auto relaxed = make_input({1.0, 4.0}, {0.0, 0.0});
    CHECK(min_power_coeffs(relaxed).sum() == 0.0);
}

TEST_CASE("recursion agrees with the product form") {
    Rng rng(4);
    for (int t = 0; t < 200; ++t) {
        int J = 2 + static_cast<int>(rng.uniform() * 2.0);
        DirectionAllocationInput in;
        in.gamma.resize(J);
        in.r_min.resize(J);
        for (int j = 0; j < J; ++j) {
            in.gamma(j) = rng.uniform(0.2, 30.0);
            in.r_min(j) = rng.uniform(0.0, 2.0);
        }
        std::sort(in.gamma.data(), in.gamma.data() + J);
        CHECK(min_power_coeffs(in).sum() ==
              Catch::Approx(product_form_sum(in)).epsilon(1e-12));
    }
}

TEST_CASE("feasibility test") {
    CHECK(is_feasible(make_input({2.0, 10.0}, {1.0, 1.0})));
    CHECK_FALSE(is_feasible(make_input({1.0, 4.0}, {1.0, 1.0})));
    CHECK(is_feasible(make_input({0.01, 0.02}, {0.0, 0.0})));
}

TEST_CASE("optimal allocation") {
    auto two = make_input({2.0, 10.0}, {1.0, 1.0});
    VectorXd p = optimal_power_allocation(two);
    CHECK(p(0) == Catch::Approx(0.75).epsilon(1e-12));
    CHECK(p(1) == Catch::Approx(0.25).epsilon(1e-12));
    CHECK(p.sum() == Catch::Approx(1.0).epsilon(1e-14));

    // per-user rates at the optimum
    double r1 = std::log2(1.0 + 2.0 * 0.75 / (2.0 * 0.25 + 1.0));
    double r2 = std::log2(1.0 + 10.0 * 0.25);
    CHECK(r1 == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(r2 == Catch::Approx(std::log2(3.5)).epsilon(1e-12));

    auto sole = make_input({3.0}, {0.5});
    CHECK(optimal_power_allocation(sole)(0) == Catch::Approx(1.0).epsilon(1e-14));

    // exactly exhausted budget: p* = pbar
    auto tight = make_input({2.0, 4.0}, {1.0, 1.0});
    VectorXd pbar = min_power_coeffs(tight);
    CHECK(pbar.sum() == Catch::Approx(1.0).epsilon(1e-14));
    VectorXd popt = optimal_power_allocation(tight);
    CHECK((popt - pbar).cwiseAbs().maxCoeff() < 1e-12);

    CHECK_THROWS_AS(optimal_power_allocation(make_input({1.0, 4.0}, {1.0, 1.0})),
                    FeasibilityError);
}

TEST_CASE("direction sum rate") {
    auto two = make_input({2.0, 10.0}, {1.0, 1.0});
    VectorXd p = optimal_power_allocation(two);
    CHECK(direction_sum_rate(two, p) ==
          Catch::Approx(1.0 + std::log2(3.5)).epsilon(1e-12));
    CHECK(optimal_sum_rate(two) == Catch::Approx(1.0 + std::log2(3.5)).epsilon(1e-12));

    // equal gains: the sum telescopes to log2(1 + gamma) for any allocation
    auto equal = make_input({5.0, 5.0, 5.0}, {0.0, 0.0, 0.0});
    VectorXd uniform = VectorXd::Constant(3, 1.0 / 3.0);
    CHECK(direction_sum_rate(equal, uniform) ==
          Catch::Approx(std::log2(6.0)).epsilon(1e-12));
    VectorXd skew(3);
    skew << 0.6, 0.3, 0.1;
    CHECK(direction_sum_rate(equal, skew) == Catch::Approx(std::log2(6.0)).epsilon(1e-12));

    VectorXd last_only = VectorXd::Zero(2);
    last_only(1) = 1.0;
    auto in2 = make_input({2.0, 8.0}, {0.0, 0.0});
    CHECK(direction_sum_rate(in2, last_only) == Catch::Approx(std::log2(9.0)).epsilon(1e-12));
}

TEST_CASE("grid oracle") {
    auto two = make_input({2.0, 10.0}, {1.0, 1.0});
    auto res = oracle_grid_search(two, 1e-4);
    VectorXd popt = optimal_power_allocation(two);
    CHECK(std::abs(res.p(0) - popt(0)) <= 1e-3);
    CHECK(std::abs(res.p(1) - popt(1)) <= 1e-3);

    auto free2 = make_input({1.0, 4.0}, {0.0, 0.0});
    auto res2 = oracle_grid_search(free2, 1e-3);
    CHECK(res2.p(1) == Catch::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(oracle_grid_search(make_input({1.0, 4.0}, {1.0, 1.0}), 1e-3),
                    FeasibilityError);
    CHECK_THROWS_AS(oracle_grid_search(make_input({1.0, 2.0}, {0.0, 0.0}), 0.5),
                    std::invalid_argument);
}

TEST_CASE("closed form matches the oracle on random instances") {
    Rng rng(99);
    for (int t = 0; t < 60; ++t) {
        int J = (t % 2) ? 3 : 2;
        auto in = random_feasible(rng, J);
        auto oracle = oracle_grid_search(in, 1e-2);
        double closed = optimal_sum_rate(in);
        CHECK(closed >= oracle.rate - 1e-12);     // oracle is a restriction
        CHECK(closed - oracle.rate <= 0.5);       // coarse grid, value-resolution bound
        CHECK(direction_sum_rate(in, optimal_power_allocation(in)) ==
              Catch::Approx(closed).epsilon(1e-10));
    }
}

TEST_CASE("rate-splitting identity") {
    Rng rng(123);
    for (int t = 0; t < 100; ++t) {
        int J = (t % 2) ? 3 : 2;
        auto in = random_feasible(rng, J);
        // random feasible p: convex mix of pbar and a random simplex point
        VectorXd pbar = min_power_coeffs(in);
        VectorXd rnd(J);
        double s = 0.0;
        for (int j = 0; j < J; ++j) {
            rnd(j) = rng.uniform();
            s += rnd(j);
        }
        rnd = rnd / s * (1.0 - pbar.sum());
        VectorXd p = pbar + rnd;

        double tail = 0.0;
        for (int j = J - 1; j >= 0; --j) {
            double direct = log2p1(in.gamma(j) * p(j) / (in.gamma(j) * tail + 1.0));
            auto split = rate_split_terms(in, p, j);
            CHECK(std::abs(direct - (split.base + split.delta)) < 1e-10);
            tail += p(j);
        }
    }
}

TEST_CASE("optimum pins early users at their floors") {
    Rng rng(321);
    for (int t = 0; t < 50; ++t) {
        int J = (t % 2) ? 3 : 2;
        auto in = random_feasible(rng, J);
        VectorXd p = optimal_power_allocation(in);
        CHECK(p.sum() == Catch::Approx(1.0).epsilon(1e-12));
        double tail = 0.0;
        for (int j = J - 1; j >= 0; --j) {
            double sinr = in.gamma(j) * p(j) / (in.gamma(j) * tail + 1.0);
            if (j < J - 1) CHECK(std::abs(sinr - in.r_min(j)) < 1e-9);
            else CHECK(sinr >= in.r_min(j) - 1e-12);
            tail += p(j);
        }
    }
}

TEST_CASE("scaling all gains keeps the allocation on the simplex") {
    auto in = make_input({1.5, 6.0, 20.0}, {0.5, 0.8, 0.2});
    VectorXd base = optimal_power_allocation(in);
    for (double c : {1.0001, 1.01, 2.0, 10.0}) {
        DirectionAllocationInput scaled = in;
        scaled.gamma *= c;
        VectorXd p = optimal_power_allocation(scaled);
        CHECK(p.sum() == Catch::Approx(1.0).epsilon(1e-12));
        if (c < 1.001) CHECK((p - base).cwiseAbs().maxCoeff() < 1e-3);
    }
}
