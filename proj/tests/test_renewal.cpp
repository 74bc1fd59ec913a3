#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "copoly/renewal.hpp"

using namespace copoly;

TEST_CASE("renewal mass: base values and the convolution identity") {
    const auto law = ReturnLaw::srw(1 << 14);
    const RenewalMassTable u(law, 512);
    CHECK(u.value(0) == 1.0);
    CHECK(u.value(1) == law.mass(1));
    // second-pass re-verification, independent of construction order
    for (std::int64_t n : {2, 3, 17, 100, 512}) {
        double s = 0.0;
        for (std::int64_t m = n; m >= 1; --m) s += law.mass(m) * u.value(n - m);
        CHECK(u.value(n) == Catch::Approx(s).epsilon(1e-12));
    }
}

TEST_CASE("renewal theorem: u_n E[tau] -> 1 for alpha = 2") {
    const auto law = ReturnLaw::zipf(2.0, 1 << 17);
    const double mean_tau = law.mean_increment();
    CHECK(std::isfinite(mean_tau));
    const RenewalMassTable u(law, 10000);
    CHECK(std::fabs(u.value(10000) * mean_tau - 1.0) <= 0.01);
}

TEST_CASE("alpha = 1: u_n log n roughly constant") {
    const auto law = ReturnLaw::zipf(1.0, 1 << 14);
    const RenewalMassTable u(law, 10000);
    const double a = u.value(1000) * std::log(1000.0);
    const double b = u.value(10000) * std::log(10000.0);
    const double ratio = a / b;
    CHECK(ratio > 0.8);
    CHECK(ratio < 1.25);
}

TEST_CASE("sample_path: deterministic under fixed seed, increments follow K") {
    const auto law = ReturnLaw::srw(1 << 14);
    CounterRng r1(42, 0), r2(42, 0);
    const auto p1 = sample_path(law, 1000, r1);
    const auto p2 = sample_path(law, 1000, r2);
    CHECK(p1.points == p2.points);
    CHECK(p1.signs == p2.signs);
    CHECK(p1.points.back() >= 1000);

    // increment frequencies for n <= 10 over 1e6 draws, within 4 stderr
    CounterRng rng(7, 1);
    const int draws = 1000000;
    std::vector<int> count(11, 0);
    for (int i = 0; i < draws; ++i) {
        const auto inc = law.sample_increment(rng);
        if (inc <= 10) ++count[static_cast<std::size_t>(inc)];
    }
    for (std::int64_t n = 1; n <= 10; ++n) {
        const double p = law.mass(n);
        const double freq = static_cast<double>(count[static_cast<std::size_t>(n)]) / draws;
        const double se = std::sqrt(p * (1.0 - p) / draws);
        CHECK(std::fabs(freq - p) < 4.0 * se);
    }
}

TEST_CASE("occupation fraction tends to 1/2 for integrable tails") {
    const auto law = ReturnLaw::zipf(2.0, 1 << 17);
    const std::int64_t n = 100000;
    double acc = 0.0;
    const int paths = 200;
    for (int s = 0; s < paths; ++s) {
        CounterRng rng(11, static_cast<std::uint64_t>(s));
        const auto p = sample_path(law, n, rng);
        acc += static_cast<double>(p.delta_sum()) / static_cast<double>(n);
    }
    CHECK(std::fabs(acc / paths - 0.5) < 0.02);
}

TEST_CASE("conditioned sampler: every path ends at the horizon; N=1 trivial") {
    const auto law = ReturnLaw::srw(1 << 14);
    const RenewalMassTable u(law, 64);
    for (int s = 0; s < 50; ++s) {
        CounterRng rng(3, static_cast<std::uint64_t>(s));
        const auto p = sample_conditioned(law, 64, rng, u);
        REQUIRE(!p.points.empty());
        CHECK(p.points.back() == 64);
        CHECK(std::is_sorted(p.points.begin(), p.points.end()));
    }
    const RenewalMassTable u1(law, 1);
    CounterRng rng(5, 0);
    const auto p = sample_conditioned(law, 1, rng, u1);
    CHECK(p.points == std::vector<std::int64_t>{1});
}

TEST_CASE("conditioned sampler: exact first-increment marginal at N=20") {
    const auto law = ReturnLaw::srw(1 << 14);
    const std::int64_t n = 20;
    const RenewalMassTable u(law, n);
    const int draws = 1000000;
    std::vector<int> count(6, 0);
    for (int s = 0; s < draws; ++s) {
        CounterRng rng(1234, static_cast<std::uint64_t>(s));
        const auto p = sample_conditioned(law, n, rng, u);
        const std::int64_t first = p.points.front();
        if (first <= 5) ++count[static_cast<std::size_t>(first)];
    }
    for (std::int64_t m = 1; m <= 5; ++m) {
        const double p_exact = law.mass(m) * u.value(n - m) / u.value(n);
        const double freq = static_cast<double>(count[static_cast<std::size_t>(m)]) / draws;
        const double se = std::sqrt(p_exact * (1.0 - p_exact) / draws);
        CHECK(std::fabs(freq - p_exact) < 4.0 * se);
    }
}

TEST_CASE("delta_laplace: q=0 exact, values in [0,1], decreasing in q") {
    const auto law = ReturnLaw::srw(1 << 14);
    const auto e0 = delta_laplace(law, 500, 0.0, 40, false, 9);
    CHECK(e0.mean == 1.0);
    CHECK(e0.stderr_ == 0.0);

    // same seed -> same paths -> pointwise monotone in q
    const auto e1 = delta_laplace(law, 500, 1.0, 300, true, 10);
    const auto e8 = delta_laplace(law, 500, 8.0, 300, true, 10);
    const auto e64 = delta_laplace(law, 500, 64.0, 300, true, 10);
    CHECK(e1.mean <= 1.0);
    CHECK(e8.mean <= e1.mean);
    CHECK(e64.mean <= e8.mean);
    CHECK(e64.mean >= 0.0);
    CHECK_THROWS_AS(delta_laplace(law, 100, -1.0, 10, false, 1), std::domain_error);
}

TEST_CASE("renewal-count scaling for alpha < 1 (stable scaling proxy)") {
    const auto law = ReturnLaw::srw(1 << 17);
    const auto median_ratio = [&](std::int64_t n) {
        std::vector<double> ys;
        ys.reserve(1000);
        for (int s = 0; s < 1000; ++s) {
            CounterRng rng(77, static_cast<std::uint64_t>(s) + (static_cast<std::uint64_t>(n) << 20));
            const auto p = sample_path(law, n, rng);
            ys.push_back(static_cast<double>(p.points.size()) / std::pow(n, law.alpha()));
        }
        std::nth_element(ys.begin(), ys.begin() + 500, ys.end());
        return ys[500];
    };
    const double m4 = median_ratio(10000);
    const double m5 = median_ratio(100000);
    CHECK(m5 / m4 > 0.5);
    CHECK(m5 / m4 < 2.0);
}

TEST_CASE("mass table horizon errors") {
    const auto law = ReturnLaw::srw(256);
    CHECK_THROWS_AS(RenewalMassTable(law, 257), std::out_of_range);
    const RenewalMassTable u(law, 16);
    CHECK_THROWS_AS(u.value(17), std::out_of_range);
}
