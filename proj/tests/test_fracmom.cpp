#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "copoly/fracmom.hpp"
#include "copoly/renewal.hpp"

using namespace copoly;

namespace {
constexpr std::int64_t kHorizon = std::int64_t{1} << 17;

/// Exact A_i = E[(Zc_i)^gamma] for Rademacher charges by full enumeration.
std::vector<double> exact_rademacher_moments(const ModelSpec& model, std::int64_t n_end,
                                             double gamma) {
    std::vector<double> a(static_cast<std::size_t>(n_end) + 1, 0.0);
    a[0] = 1.0;
    for (std::int64_t i = 1; i <= n_end; ++i) {
        double acc = 0.0;
        const double p = std::pow(0.5, static_cast<double>(i));
        for (std::int64_t bits = 0; bits < (std::int64_t{1} << i); ++bits) {
            std::vector<double> w(static_cast<std::size_t>(i));
            for (std::int64_t b = 0; b < i; ++b)
                w[static_cast<std::size_t>(b)] = (bits >> b) & 1 ? 1.0 : -1.0;
            const auto s = DisorderSample::from_values(std::move(w));
            const double lz =
                constrained_logZ_profile(model, s, i).values[static_cast<std::size_t>(i)];
            acc += p * std::exp(gamma * lz);
        }
        a[static_cast<std::size_t>(i)] = acc;
    }
    return a;
}

}  // namespace

TEST_CASE("fractional subadditivity (sum a)^gamma <= sum a^gamma") {
    CounterRng rng(5, 0);
    for (int rep = 0; rep < 200; ++rep) {
        const double gamma = 0.05 + 0.9 * rng.uniform01();
        double total = 0.0, frac = 0.0;
        const int n = 1 + static_cast<int>(rng.uniform01() * 10);
        for (int i = 0; i < n; ++i) {
            const double x = std::exp(6.0 * (rng.uniform01() - 0.5));
            total += x;
            frac += std::pow(x, gamma);
        }
        CHECK(std::pow(total, gamma) <= frac * (1.0 + 1e-12));
    }
}

TEST_CASE("parameter recipes") {
    // alpha > 1: gamma mid-window, k = integer part of 1/(lambda^2 (1-rho))
    const auto p1 = parameter_recipe(2.0, 1.0, 0.9);
    CHECK(p1.k == 10);
    CHECK(p1.gamma > 2.0 / 3.0);
    CHECK(p1.gamma < 0.9);
    CHECK(p1.origin == RecipeOrigin::AlphaGt1);
    // FP-noise snap: 1/(1-0.95) should give exactly 20
    CHECK(parameter_recipe(2.0, 1.0, 0.95).k == 20);

    // alpha <= 1: k = |log(c lambda^2)|/(c lambda^2), gamma = 1 - 1/log k
    const auto p2 = parameter_recipe(0.5, 0.5, 0.1);
    CHECK(p2.k == 147);
    CHECK(p2.gamma == Catch::Approx(1.0 - 1.0 / std::log(147.0)).epsilon(1e-12));
    CHECK(p2.gamma == Catch::Approx(0.7996).margin(5e-4));
    CHECK(p2.origin == RecipeOrigin::AlphaLe1);

    CHECK_THROWS_AS(parameter_recipe(2.0, 1.0, 0.5), std::domain_error);  // rho < 2/(1+alpha)
    CHECK_THROWS_AS(parameter_recipe(0.5, 2.0, 0.5), std::domain_error);  // c lambda^2 >= 1
    CHECK_THROWS_AS(parameter_recipe(0.5, 1.0, 0.9), std::domain_error);  // k=2, gamma <= 0
}

TEST_CASE("b_weight: lambda=0 and the h -> infinity limit") {
    const auto law = ReturnLaw::zipf(1.0, kHorizon);
    const double gamma = 0.8;
    {
        const ModelSpec m(law, {DisorderKind::Gaussian}, {0.0, 0.7});
        for (std::int64_t j : {1, 5, 40}) {
            CHECK(b_weight(m, gamma, j) ==
                  Catch::Approx(std::pow(law.mass(j), gamma)).epsilon(1e-10));
        }
    }
    {
        const ModelSpec m(law, {DisorderKind::Gaussian}, {1.0, 400.0});
        const double expect = std::pow(law.mass(3), gamma) * std::pow(0.5, gamma);
        CHECK(b_weight(m, gamma, 3) == Catch::Approx(expect).epsilon(1e-8));
    }
}

TEST_CASE("b_weight: exact never exceeds universal") {
    const auto law = ReturnLaw::srw(kHorizon);
    for (const auto dk : {DisorderKind::Gaussian, DisorderKind::Rademacher}) {
        for (double lambda : {0.5, 1.0}) {
            for (double h : {0.2, 0.8}) {
                const ModelSpec m(law, {dk}, {lambda, h});
                for (double gamma : {0.6, 0.9}) {
                    for (std::int64_t j : {1, 3, 10, 25}) {
                        CHECK(b_weight(m, gamma, j, BWeightMode::Exact) <=
                              b_weight(m, gamma, j, BWeightMode::Universal) * (1.0 + 1e-12));
                    }
                }
            }
        }
    }
}

TEST_CASE("b_weight: gaussian quadrature vs direct Monte Carlo at j=1") {
    const auto law = ReturnLaw::zipf(1.0, kHorizon);
    const ModelSpec m(law, {DisorderKind::Gaussian}, {1.0, 1.0});
    const double gamma = 0.75;
    const double quad = b_weight(m, gamma, 1);
    CounterRng rng(31337, 0);
    const std::int64_t n = 10000000;
    double s1 = 0.0, s2 = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        const double v = std::exp(gamma * log_phi(rng.gaussian() + 1.0));
        s1 += v;
        s2 += v * v;
    }
    const double mean = s1 / static_cast<double>(n) * std::pow(law.mass(1), gamma);
    const double sd = std::sqrt((s2 / n - (s1 / n) * (s1 / n)) / n) * std::pow(law.mass(1), gamma);
    CHECK(std::fabs(quad - mean) < 4.0 * sd);
}

TEST_CASE("b_weight: rademacher falls back to universal beyond j=30") {
    const auto law = ReturnLaw::zipf(1.5, kHorizon);
    const ModelSpec m(law, {DisorderKind::Rademacher}, {0.7, 0.7});
    bool fell_back = false;
    const double v = b_weight(m, 0.8, 31, BWeightMode::Exact, &fell_back);
    CHECK(fell_back);
    CHECK(v == b_weight(m, 0.8, 31, BWeightMode::Universal));
    fell_back = true;
    (void)b_weight(m, 0.8, 30, BWeightMode::Exact, &fell_back);
    CHECK(!fell_back);
}

TEST_CASE("b_tail_upper: preconditions") {
    const auto law = ReturnLaw::zipf(1.0, kHorizon);
    const ModelSpec ok(law, {DisorderKind::Gaussian}, {1.0, 1.0});
    CHECK_THROWS_AS(b_tail_upper(ok, 0.4, 10), std::domain_error);  // (1+a)g <= 1
    const ModelSpec low_h(law, {DisorderKind::Gaussian}, {1.0, 0.1});
    CHECK_THROWS_AS(b_tail_upper(low_h, 0.9, 10), std::domain_error);  // h < h^(gamma)
}

TEST_CASE("b_tail_upper: dominates and stays near the direct partial sum") {
    // lambda = 0: B(j) = K(j)^gamma exactly, so the certified bound can be
    // compared against plain partial summation out to 1e6.
    const auto law = ReturnLaw::zipf(1.0, std::int64_t{1} << 20);
    const double gamma = 0.9;
    double direct = 0.0;
    for (std::int64_t j = 100; j <= 1000000; ++j) direct += std::pow(law.mass(j), gamma);
    const ModelSpec m(law, {DisorderKind::Gaussian}, {0.0, 0.0});
    const double bound = b_tail_upper(m, gamma, 100);
    CHECK(bound >= direct * (1.0 - 1e-9));
    CHECK(bound <= direct * 1.1);
    // monotonicity
    CHECK(b_tail_upper(m, gamma, 101) <= b_tail_upper(m, gamma, 100));
}

TEST_CASE("fractional moments: A_0 exact, lambda=0 deterministic, Jensen") {
    const auto law = ReturnLaw::zipf(2.0, kHorizon);
    {
        const ModelSpec m(law, {DisorderKind::Gaussian}, {0.0, 0.4});
        const double gamma = 0.8;
        const auto up = fractional_moment_estimates(m, gamma, 6, 50, 0.99, 1);
        REQUIRE(up.size() == 6);
        CHECK(up[0] == 1.0);
        const RenewalMassTable u(law, 5);
        for (std::int64_t i = 1; i < 6; ++i) {
            CHECK(up[static_cast<std::size_t>(i)] ==
                  Catch::Approx(std::pow(u.value(i), gamma)).epsilon(1e-12));
        }
    }
    {
        const ModelSpec m(law, {DisorderKind::Gaussian}, {1.0, 0.95});
        const double gamma = 0.78;
        const auto data = detail::fractional_moments_full(m, gamma, 12, 4000, 0.99, 7, 0);
        for (std::int64_t i = 1; i < 12; ++i) {
            const double annealed = annealed_constrained_logZ(m, i);
            CHECK(data.mean[static_cast<std::size_t>(i)] <=
                  std::exp(gamma * annealed) + 3.0 * data.stderr_[static_cast<std::size_t>(i)]);
        }
    }
}

TEST_CASE("moment inequality chain on exact Rademacher enumeration") {
    const auto law = ReturnLaw::zipf(1.5, kHorizon);
    const ModelSpec m(law, {DisorderKind::Rademacher}, {0.6, 0.5});
    const double gamma = 0.85;
    const std::int64_t n_end = 9;
    const auto a = exact_rademacher_moments(m, n_end, gamma);

    // B(j) exact (binomial enumeration inside b_weight)
    std::vector<double> b(static_cast<std::size_t>(n_end) + 1, 0.0);
    for (std::int64_t j = 1; j <= n_end; ++j)
        b[static_cast<std::size_t>(j)] = b_weight(m, gamma, j, BWeightMode::Exact);

    for (std::int64_t k = 1; k <= n_end; ++k) {
        double rhs = 0.0;
        for (std::int64_t j = k; j <= n_end; ++j) {
            double inner = 0.0;
            for (std::int64_t i = 0; i < k; ++i)
                inner += b[static_cast<std::size_t>(j - i)] * a[static_cast<std::size_t>(i)];
            rhs += a[static_cast<std::size_t>(n_end - j)] * inner;
        }
        CHECK(a[static_cast<std::size_t>(n_end)] <= rhs * (1.0 + 1e-10));
    }
}

TEST_CASE("iteration bound A_N <= max_{j<=N-k} A_j when the premise holds") {
    // deep delocalized point: h above h^(1)(lambda)
    const auto law = ReturnLaw::zipf(2.0, kHorizon);
    const DisorderLaw dis{DisorderKind::Rademacher};
    const double lambda = 0.6;
    const double h = 1.2 * h_m_curve(dis, 1.0, lambda);
    const ModelSpec m(law, dis, {lambda, h});
    const double gamma = 0.8;
    const std::int64_t n_end = 9;
    const auto a = exact_rademacher_moments(m, n_end, gamma);

    for (std::int64_t k = 2; k <= 4; ++k) {
        double premise = 0.0;
        for (std::int64_t i = 0; i < k; ++i)
            premise += a[static_cast<std::size_t>(i)] * b_tail_upper(m, gamma, k - i);
        if (premise <= 1.0) {
            INFO("premise holds at k = " << k << " (U = " << premise << ")");
            for (std::int64_t n = k; n <= n_end; ++n) {
                double amax = 0.0;
                for (std::int64_t j = 0; j <= n - k; ++j)
                    amax = std::max(amax, a[static_cast<std::size_t>(j)]);
                CHECK(a[static_cast<std::size_t>(n)] <= amax * (1.0 + 1e-12));
            }
        }
    }
}

TEST_CASE("delocalization certificate: verdicts and errors") {
    const auto law = ReturnLaw::zipf(0.5, kHorizon);
    const DisorderLaw dis{DisorderKind::Gaussian};

    // lambda = 0: no coupling
    const ModelSpec no_coupling(law, dis, {0.0, 0.5});
    CHECK_THROWS_AS(
        delocalization_certificate(no_coupling, FracParams{0.8, 5, RecipeOrigin::Manual}, 100,
                                   0.99, 1),
        std::domain_error);

    // localized point: certificate must be inconclusive (here h < h^(gamma),
    // so the analytic tail is unavailable and u stays infinite)
    const ModelSpec localized(law, dis, {1.0, 0.0});
    const auto inc = delocalization_certificate(localized, FracParams{0.8, 5, RecipeOrigin::Manual},
                                                200, 0.99, 2);
    CHECK(inc.verdict == Delocalization::Inconclusive);
    CHECK(std::isinf(inc.u_value));

    // invalid gamma for the tail sum
    const ModelSpec m2(law, dis, {1.0, 0.9});
    CHECK_THROWS_AS(
        delocalization_certificate(m2, FracParams{0.5, 5, RecipeOrigin::Manual}, 100, 0.99, 3),
        std::domain_error);
}

TEST_CASE("delocalization certificate fires in the guaranteed strip") {
    // alpha = 2, lambda = 1, h just below h^(1) = 1; rho = 0.95 recipe
    const auto law = ReturnLaw::zipf(2.0, kHorizon);
    const ModelSpec m(law, {DisorderKind::Gaussian}, {1.0, 0.975});
    const auto params = parameter_recipe(2.0, 1.0, 0.95);
    const auto cert = delocalization_certificate(m, params, 4000, 0.99, 99);
    CHECK(cert.verdict == Delocalization::Delocalized);
    CHECK(cert.u_value <= 1.0);
    CHECK(cert.a_upper.size() == static_cast<std::size_t>(params.k));
    CHECK(cert.a_upper[0] == 1.0);
    CHECK(cert.b_tails.size() == static_cast<std::size_t>(params.k));
    // re-verify the U arithmetic from the stored record
    double u = 0.0;
    for (std::size_t i = 0; i < cert.a_upper.size(); ++i) u += cert.a_upper[i] * cert.b_tails[i];
    CHECK(u == Catch::Approx(cert.u_value).epsilon(1e-12));
}
