#include <catch2/catch_amalgamated.hpp>

#include <mudiv/analysis.hpp>

#include <cmath>
#include <vector>

using namespace mudiv;

namespace {

double rel_err(double got, double want) {
    return std::fabs(got - want) / std::max(1e-300, std::fabs(want));
}

std::vector<double> error_sequence(SnrPoint snr, const FadingModel& f, const ErrorModel& e,
                                   int max_n) {
    std::vector<double> seq;
    seq.reserve(max_n);
    for (int n = 1; n <= max_n; ++n) seq.push_back(avg_error_fixed_n(snr, n, f, e));
    return seq;
}

std::vector<double> capacity_sequence(SnrPoint snr, const FadingModel& f, int max_n) {
    std::vector<double> seq;
    seq.reserve(max_n);
    for (int n = 1; n <= max_n; ++n) seq.push_back(ergodic_capacity_fixed_n(snr, n, f));
    return seq;
}

} // namespace

TEST_CASE("discrete complete monotonicity check") {
    SECTION("1/(N+1) is c.m.") {
        std::vector<double> seq;
        for (int n = 0; n <= 40; ++n) seq.push_back(1.0 / (n + 1.0));
        CHECK(check_cm(seq, 5, 1e-12).passed());
    }
    SECTION("N^2 fails at order 1") {
        std::vector<double> seq;
        for (int n = 0; n <= 10; ++n) seq.push_back(static_cast<double>(n) * n);
        const auto rep = check_cm(seq, 1, 1e-12);
        REQUIRE_FALSE(rep.passed());
        CHECK(rep.first_violation->order == 1);
    }
    SECTION("error-rate sequence is c.m. (rho = 4)") {
        const auto seq = error_sequence(SnrPoint{4.0}, FadingModel::rayleigh(),
                                        ErrorModel::exp_form(1, 1), 40);
        CHECK(check_cm(seq, 4, 1e-9).passed());
    }
    CHECK_THROWS_AS(check_cm(std::vector<double>{1.0, 2.0}, 2, 1e-9), std::length_error);
}

TEST_CASE("completely monotone derivative check") {
    SECTION("log(N+1) has a c.m. derivative") {
        std::vector<double> seq;
        for (int n = 0; n <= 40; ++n) seq.push_back(std::log(n + 1.0));
        CHECK(check_cmd(seq, 4, 1e-12).passed());
    }
    SECTION("e^N fails at order 1") {
        std::vector<double> seq;
        for (int n = 0; n <= 12; ++n) seq.push_back(std::exp(static_cast<double>(n)));
        const auto rep = check_cmd(seq, 1, 1e-12);
        REQUIRE_FALSE(rep.passed());
        CHECK(rep.first_violation->order == 1);
    }
    SECTION("capacity sequence has a c.m. derivative (rho = 10)") {
        const auto seq = capacity_sequence(SnrPoint{10.0}, FadingModel::rayleigh(), 40);
        CHECK(check_cmd(seq, 3, 1e-9).passed());
    }
    CHECK_THROWS_AS(check_cmd(std::vector<double>{1.0, 2.0, 3.0}, 2, 1e-9), std::length_error);
}

TEST_CASE("laplace-transform ordering on the PGF grid") {
    const auto p1 = UserCountModel::poisson(1.0);
    const auto p2 = UserCountModel::poisson(2.0);
    CHECK(lt_order_check(p1, p2).relation == LtRelation::x_le_y);
    CHECK(lt_order_check(p2, p1).relation == LtRelation::y_le_x);

    SECTION("geometric at equal mean is dominated by Poisson") {
        const auto geo = UserCountModel::geometric(0.5); // mean 1
        const auto v = lt_order_check(geo, p1);
        CHECK(v.relation == LtRelation::x_le_y);
        CHECK(pgf(geo, 0.0) >= std::exp(-1.0));
    }

    SECTION("reflexivity reports dominance with zero violation") {
        const auto v = lt_order_check(p2, p2);
        CHECK(v.relation == LtRelation::x_le_y);
        CHECK(v.max_violation == 0.0);
        CHECK(lt_order_check(p2, UserCountModel::poisson(2.0)).relation == LtRelation::x_le_y);
    }

    SECTION("crossing PGFs are incomparable") {
        // det(1): U(t) = t, zero mass at 0, mean 1; geom(0.25): U(0) = 0.25,
        // mean 3. U_det < U_geo at t = 0 and U_det > U_geo near t = 1.
        const auto v = lt_order_check(UserCountModel::deterministic(1),
                                      UserCountModel::geometric(0.25));
        CHECK(v.relation == LtRelation::incomparable);
        CHECK(v.max_violation > 0.0);
    }

    SECTION("transitive across the worked examples") {
        const auto geo = UserCountModel::geometric(0.5);
        REQUIRE(lt_order_check(geo, p1).relation == LtRelation::x_le_y);
        REQUIRE(lt_order_check(p1, p2).relation == LtRelation::x_le_y);
        CHECK(lt_order_check(geo, p2).relation == LtRelation::x_le_y);
    }

    CHECK_THROWS_AS(lt_order_check(p1, p2, 5), std::domain_error);
}

TEST_CASE("ordering consequences for the metrics") {
    const auto ray = FadingModel::rayleigh();
    const auto exp1 = ErrorModel::exp_form(1, 1);
    std::vector<SnrPoint> grid;
    for (double db : {0.0, 5.0, 10.0, 15.0, 20.0}) grid.push_back(SnrPoint::from_db(db));

    CHECK(ordering_consequence_check(UserCountModel::geometric(0.2), UserCountModel::poisson(4.0),
                                     ray, exp1, grid));
    CHECK(ordering_consequence_check(UserCountModel::poisson(4.0), UserCountModel::poisson(4.0),
                                     ray, exp1, grid));
    CHECK(ordering_consequence_check(UserCountModel::poisson(2.0), UserCountModel::poisson(8.0),
                                     ray, exp1, grid));

    CHECK_THROWS_AS(ordering_consequence_check(UserCountModel::deterministic(1),
                                               UserCountModel::geometric(0.25), ray, exp1, grid),
                    std::invalid_argument);
}

TEST_CASE("jensen gap") {
    const auto ray = FadingModel::rayleigh();
    const auto exp1 = ErrorModel::exp_form(1, 1);

    CHECK(std::fabs(jensen_gap(SnrPoint{4.0}, UserCountModel::deterministic(3), ray, exp1)) <
          1e-10);

    SECTION("matches the mixture-minus-real-N oracle") {
        const auto pois = UserCountModel::poisson(4.0);
        const double gap = jensen_gap(SnrPoint{4.0}, pois, ray, exp1);
        CHECK(gap > 0.0);
        double mix = pmf(pois, 0) * exp1.error_at_zero_snr();
        double mass = pmf(pois, 0);
        for (std::uint64_t k = 1; 1.0 - mass >= 1e-12; ++k) {
            const double p = pmf(pois, k);
            mix += p * avg_error_fixed_n(SnrPoint{4.0}, static_cast<double>(k), ray, exp1);
            mass += p;
        }
        const double oracle = mix - avg_error_fixed_n(SnrPoint{4.0}, 4.0, ray, exp1);
        CHECK(rel_err(gap, oracle) < 1e-7);
    }

    CHECK(jensen_gap(SnrPoint{4.0}, UserCountModel::poisson(16.0), ray, exp1) <
          jensen_gap(SnrPoint{4.0}, UserCountModel::poisson(4.0), ray, exp1));

    CHECK_THROWS_AS(jensen_gap(SnrPoint{4.0}, UserCountModel::geometric(0.9), ray, exp1),
                    std::domain_error);
}

TEST_CASE("jensen tightness scan") {
    const auto ray = FadingModel::rayleigh();
    const std::vector<double> lambdas{4.0, 16.0, 64.0, 256.0};
    const SnrPoint snr = SnrPoint::from_db(6.0);

    for (const auto& err : {ErrorModel::exp_form(1, 1), ErrorModel::q_form(1, 2)}) {
        const auto scan = jensen_tightness_scan(snr, lambdas, ray, err);
        REQUIRE(scan.size() == 4);
        for (std::size_t i = 1; i < scan.size(); ++i) CHECK(scan[i].gap < scan[i - 1].gap);
        const double a = scan[scan.size() - 2].normalized_gap;
        const double b = scan.back().normalized_gap;
        CHECK(std::max(a, b) / std::min(a, b) < 2.0);
        CHECK(scan.back().normalized_gap <= scan.front().normalized_gap);
    }

    CHECK_THROWS_AS(
        jensen_tightness_scan(snr, std::vector<double>{0.5, 2.0}, ray, ErrorModel::exp_form()),
        std::domain_error);
    CHECK_THROWS_AS(
        jensen_tightness_scan(snr, std::vector<double>{4.0, 2.0}, ray, ErrorModel::exp_form()),
        std::domain_error);
}

TEST_CASE("t(u) construction") {
    const auto ray = FadingModel::rayleigh();

    SECTION("Rayleigh + exponential closed form (eta = 1)") {
        for (double rho : {0.5, 2.0, 5.0}) {
            const auto err = ErrorModel::exp_form(1.0, 1.0);
            for (double u : {0.05, 0.3, std::log(2.0), 1.0, 3.0}) {
                const double closed = rho * std::pow(-std::expm1(-u), rho - 1.0) * std::exp(-u);
                CHECK(rel_err(t_function(u, SnrPoint{rho}, err, ray), closed) < 1e-10);
            }
        }
        CHECK(rel_err(t_function(std::log(2.0), SnrPoint{2.0}, ErrorModel::exp_form(1, 1), ray),
                      0.5) < 1e-10);
    }

    SECTION("Rayleigh + Q-form closed form") {
        for (double er : {2.0, 3.0}) {
            const auto err = ErrorModel::q_form(1.0, 2.0);
            const double rho = er / 2.0;
            for (double u : {0.05, 0.3, 1.0, 2.0}) {
                const double om = -std::expm1(-u); // 1 - e^-u
                const double closed = std::sqrt(er) * std::pow(om, 0.5 * er - 1.0) *
                                      std::exp(-u) /
                                      (2.0 * std::sqrt(-2.0 * M_PI * std::log(om)));
                CHECK(rel_err(t_function(u, SnrPoint{rho}, err, ray), closed) < 1e-8);
            }
        }
    }

    CHECK(t_function(40.0, SnrPoint{1.0}, ErrorModel::exp_form(1, 1), ray) < 1e-15);
    CHECK(t_function(1000.0, SnrPoint{1.0}, ErrorModel::exp_form(1, 1), ray) == 0.0);
    CHECK_THROWS_AS(t_function(0.0, SnrPoint{1.0}, ErrorModel::exp_form(1, 1), ray),
                    std::domain_error);
}

TEST_CASE("regular-variation exponent estimate") {
    const auto ray = FadingModel::rayleigh();
    for (double er : {1.0, 2.0, 4.0}) {
        auto t_exp = [&, er](double u) {
            return t_function(u, SnrPoint{er}, ErrorModel::exp_form(1.0, 1.0), ray);
        };
        CHECK(std::fabs(rv_exponent_estimate(t_exp, 2.0) - (er - 1.0)) < 0.02);
        auto t_qf = [&, er](double u) {
            return t_function(u, SnrPoint{er / 2.0}, ErrorModel::q_form(1.0, 2.0), ray);
        };
        CHECK(std::fabs(rv_exponent_estimate(t_qf, 2.0) - (0.5 * er - 1.0)) < 0.02);
    }

    SECTION("instability is reported") {
        auto wild = [](double u) { return 1.5 + std::sin(1.0 / u); };
        CHECK_THROWS_AS(rv_exponent_estimate(wild, 2.0), std::runtime_error);
    }
    CHECK_THROWS_AS(rv_exponent_estimate([](double) { return 1.0; }, 1.0), std::domain_error);
}

TEST_CASE("diversity-order fit") {
    const auto ray = FadingModel::rayleigh();
    const auto exp1 = ErrorModel::exp_form(1, 1);

    auto curve_for = [&](const UserCountModel& users, const FadingModel& fading,
                         const ErrorModel& err) {
        std::vector<std::pair<double, double>> curve;
        for (double db = 35.0; db <= 45.0001; db += 1.0)
            curve.emplace_back(db,
                               avg_error_random_n(SnrPoint::from_db(db), users, fading, err));
        return curve;
    };

    CHECK(std::fabs(diversity_order_fit(curve_for(UserCountModel::zt_poisson(2.0), ray, exp1),
                                        {35.0, 45.0}) -
                    1.0) < 0.15);
    CHECK(std::fabs(diversity_order_fit(curve_for(UserCountModel::deterministic(2), ray, exp1),
                                        {35.0, 45.0}) -
                    2.0) < 0.2);
    CHECK(std::fabs(diversity_order_fit(
                        curve_for(UserCountModel::deterministic(1), FadingModel::nakagami(2.0),
                                  exp1),
                        {35.0, 45.0}) -
                    2.0) < 0.2);

    SECTION("too few points in the window") {
        std::vector<std::pair<double, double>> tiny{{35.0, 1e-3}, {36.0, 8e-4}, {37.0, 6e-4}};
        CHECK_THROWS_AS(diversity_order_fit(tiny, {35.0, 45.0}), std::length_error);
    }
}
