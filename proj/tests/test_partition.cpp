#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "copoly/partition.hpp"
#include "copoly/renewal.hpp"

using namespace copoly;

namespace {

constexpr std::int64_t kHorizon = 4096;

DisorderSample gaussian_sample(std::int64_t n, std::uint64_t seed, std::uint64_t idx = 0) {
    return DisorderSample::draw({DisorderKind::Gaussian}, n, seed, idx);
}

}  // namespace

TEST_CASE("N=1: single excursion") {
    const auto law = ReturnLaw::srw(kHorizon);
    const ModelSpec model(law, {DisorderKind::Gaussian}, {1.3, 0.4});
    const auto s = gaussian_sample(1, 11);
    const auto p = constrained_logZ_profile(model, s, 1);
    CHECK(p.values[0] == 0.0);
    const double expect = std::log(law.mass(1)) + log_phi(1.3 * (s.omega[0] + 0.4));
    CHECK(p.values[1] == Catch::Approx(expect).epsilon(1e-13));
    CHECK(brute_force_logZ(model, s, 1, true) == Catch::Approx(expect).epsilon(1e-12));
}

TEST_CASE("lambda=0: profile equals the renewal mass function") {
    const auto law = ReturnLaw::zipf(0.8, kHorizon);
    const ModelSpec model(law, {DisorderKind::Gaussian}, {0.0, 0.7});
    const auto s = gaussian_sample(64, 5);
    const auto p = constrained_logZ_profile(model, s, 64);
    const RenewalMassTable u(law, 64);
    for (std::int64_t i = 0; i <= 64; ++i)
        CHECK(p.values[static_cast<std::size_t>(i)] ==
              Catch::Approx(u.log_value(i)).epsilon(1e-11).margin(1e-11));
    // free partition function at lambda=0 is P(renewal covers N) = 1
    CHECK(free_logZ(model, s, 64) == Catch::Approx(0.0).margin(1e-11));
}

TEST_CASE("oracle equivalence: DP vs brute force, both modes, both laws") {
    const std::vector<ReturnLaw> laws{ReturnLaw::srw(kHorizon), ReturnLaw::zipf(0.5, kHorizon),
                                      ReturnLaw::heavy_head(0.5, 8, kHorizon)};
    int idx = 0;
    for (const auto& law : laws) {
        for (const auto dkind : {DisorderKind::Gaussian, DisorderKind::Rademacher}) {
            const DisorderLaw dis{dkind};
            for (int rep = 0; rep < 4; ++rep) {
                const std::int64_t n = 6 + (rep * 3) % 9;  // 6..14
                const ModelSpec model(law, dis, {0.3 + 0.4 * rep, 0.1 * rep});
                const auto s = DisorderSample::draw(dis, n, 77, static_cast<std::uint64_t>(idx++));
                const auto p = constrained_logZ_profile(model, s, n);
                const double dp_c = p.values[static_cast<std::size_t>(n)];
                const double bf_c = brute_force_logZ(model, s, n, true);
                CHECK(std::fabs(dp_c - bf_c) <=
                      1e-10 * std::max(1.0, std::fabs(bf_c)));
                const double dp_f = free_logZ_from_profile(p, s, n);
                const double bf_f = brute_force_logZ(model, s, n, false);
                CHECK(std::fabs(dp_f - bf_f) <=
                      1e-10 * std::max(1.0, std::fabs(bf_f)));
            }
        }
    }
}

TEST_CASE("explicit-sign enumeration equals phi-integrated enumeration") {
    const auto law = ReturnLaw::srw(kHorizon);
    for (int rep = 0; rep < 3; ++rep) {
        const ModelSpec model(law, {DisorderKind::Gaussian}, {1.1, 0.25});
        const auto s = gaussian_sample(8, 31, static_cast<std::uint64_t>(rep));
        for (bool constrained : {true, false}) {
            const double a = brute_force_logZ(model, s, 8, constrained,
                                              BruteForceMode::PhiIntegrated);
            const double b = brute_force_logZ(model, s, 8, constrained,
                                              BruteForceMode::ExplicitSigns);
            CHECK(a == Catch::Approx(b).epsilon(1e-12));
        }
    }
}

TEST_CASE("brute force refuses N > 16") {
    const auto law = ReturnLaw::srw(kHorizon);
    const ModelSpec model(law, {DisorderKind::Gaussian}, {1.0, 0.0});
    const auto s = gaussian_sample(17, 3);
    CHECK_THROWS_AS(brute_force_logZ(model, s, 17, true), std::domain_error);
}

TEST_CASE("free logZ: all-zero charges dominate the single-excursion bound") {
    const auto law = ReturnLaw::srw(kHorizon);
    const ModelSpec model(law, {DisorderKind::Gaussian}, {1.7, 0.0});
    auto s = DisorderSample::from_values(std::vector<double>(40, 0.0));
    const double lz = free_logZ(model, s, 40);
    CHECK(lz >= std::log(law.tail(40)) - std::log(2.0));
}

TEST_CASE("decomposition identity over the straddling excursion") {
    // Z_N = sum_{j=k}^N sum_{i<k} Z_{N-j} K(j-i) phi(lambda omega(N-j,N-i]
    //       + lambda h (j-i)) Zc(window (N-i, N]), for every cut k.
    const auto law = ReturnLaw::zipf(1.2, kHorizon);
    const DisorderLaw dis{DisorderKind::Gaussian};
    for (int rep = 0; rep < 3; ++rep) {
        const std::int64_t n = 120 + 40 * rep;  // up to 200
        const ModelSpec model(law, dis, {0.8, 0.3});
        const auto s = DisorderSample::draw(dis, n, 99, static_cast<std::uint64_t>(rep));
        const auto prefix_profile = constrained_logZ_profile(model, s, n);
        const double lhs = prefix_profile.values[static_cast<std::size_t>(n)];
        for (const std::int64_t k : {std::int64_t{1}, n / 3, n - 1}) {
            // suffix windows (N-i, N] for i < k, each on its shifted charges
            std::vector<double> suffix_logz(static_cast<std::size_t>(k));
            for (std::int64_t i = 0; i < k; ++i) {
                if (i == 0) {
                    suffix_logz[0] = 0.0;
                    continue;
                }
                std::vector<double> w(s.omega.end() - i, s.omega.end());
                const auto shifted = DisorderSample::from_values(std::move(w));
                suffix_logz[static_cast<std::size_t>(i)] =
                    constrained_logZ_profile(model, shifted, i)
                        .values[static_cast<std::size_t>(i)];
            }
            LogSumAccumulator acc;
            const double lambda = model.coupling.lambda, lh = lambda * model.coupling.h;
            for (std::int64_t j = k; j <= n; ++j) {
                for (std::int64_t i = 0; i < k; ++i) {
                    const double om = s.prefix[static_cast<std::size_t>(n - i)] -
                                      s.prefix[static_cast<std::size_t>(n - j)];
                    acc.add(prefix_profile.values[static_cast<std::size_t>(n - j)] +
                            std::log(law.mass(j - i)) +
                            log_phi(lambda * om + lh * static_cast<double>(j - i)) +
                            suffix_logz[static_cast<std::size_t>(i)]);
                }
            }
            CHECK(std::fabs(acc.value() - lhs) < 1e-9);
        }
    }
}

TEST_CASE("monotonicity: log Zc nonincreasing in h for fixed charges") {
    const auto law = ReturnLaw::srw(kHorizon);
    const auto s = gaussian_sample(48, 17);
    double prev = 1e300;
    for (double h = 0.0; h <= 1.6; h += 0.2) {
        const ModelSpec model(law, {DisorderKind::Gaussian}, {1.0, h});
        const double lz = constrained_logZ_profile(model, s, 48).values[48];
        CHECK(lz <= prev + 1e-12);
        prev = lz;
    }
}

TEST_CASE("annealed: h = h^(1)(lambda) collapses to the renewal mass") {
    const auto law = ReturnLaw::srw(kHorizon);
    const DisorderLaw dis{DisorderKind::Gaussian};
    const double lambda = 0.9;
    const double h1 = h_m_curve(dis, 1.0, lambda);
    const ModelSpec model(law, dis, {lambda, h1});
    const RenewalMassTable u(law, 60);
    CHECK(annealed_constrained_logZ(model, 60) ==
          Catch::Approx(u.log_value(60)).margin(1e-10));

    const ModelSpec zero(law, dis, {0.0, 0.4});
    CHECK(annealed_constrained_logZ(zero, 60) ==
          Catch::Approx(u.log_value(60)).margin(1e-11));
}

TEST_CASE("annealed equals exact disorder average on a tiny Rademacher system") {
    // enumerate all 2^N charge vectors exactly
    const auto law = ReturnLaw::srw(kHorizon);
    const DisorderLaw dis{DisorderKind::Rademacher};
    const std::int64_t n = 8;
    const ModelSpec model(law, dis, {0.8, 0.35});
    LogSumAccumulator acc;
    for (int bits = 0; bits < (1 << n); ++bits) {
        std::vector<double> w(static_cast<std::size_t>(n));
        for (std::int64_t i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = (bits >> i) & 1 ? 1.0 : -1.0;
        const auto s = DisorderSample::from_values(std::move(w));
        acc.add(constrained_logZ_profile(model, s, n).values[static_cast<std::size_t>(n)]);
    }
    const double exact = acc.value() - n * std::log(2.0);
    CHECK(annealed_constrained_logZ(model, n) == Catch::Approx(exact).epsilon(1e-11));
}

TEST_CASE("free energy estimate: lambda=0 is deterministic") {
    const auto law = ReturnLaw::zipf(0.6, kHorizon);
    const ModelSpec model(law, {DisorderKind::Gaussian}, {0.0, 0.2});
    const auto est = free_energy_estimate(model, 32, 25, 123);
    const RenewalMassTable u(law, 32);
    CHECK(est.mean == Catch::Approx(u.log_value(32) / 32.0).epsilon(1e-13));
    CHECK(est.stderr_ == 0.0);
    CHECK(est.n_samples == 25);
}

TEST_CASE("Jensen: quenched mean below annealed value") {
    const auto law = ReturnLaw::srw(kHorizon);
    const ModelSpec model(law, {DisorderKind::Gaussian}, {1.0, 0.5});
    const std::int64_t n = 48;
    const auto est = free_energy_estimate(model, n, 400, 2718);
    const double annealed = annealed_constrained_logZ(model, n) / static_cast<double>(n);
    CHECK(est.mean <= annealed + 3.0 * est.stderr_);
}

TEST_CASE("determinism: identical estimates for any worker count") {
    const auto law = ReturnLaw::srw(kHorizon);
    const ModelSpec model(law, {DisorderKind::Gaussian}, {1.0, 0.3});
    const auto a = free_energy_estimate(model, 40, 101, 555, 0.99, 1);
    const auto b = free_energy_estimate(model, 40, 101, 555, 0.99, 2);
    const auto c = free_energy_estimate(model, 40, 101, 555, 0.99, 7);
    CHECK(a.mean == b.mean);
    CHECK(a.stderr_ == b.stderr_);
    CHECK(a.mean == c.mean);
    CHECK(a.stderr_ == c.stderr_);
}

TEST_CASE("statistical super-additivity of E log Zc") {
    const auto law = ReturnLaw::srw(kHorizon);
    const ModelSpec model(law, {DisorderKind::Gaussian}, {1.0, 0.4});
    const auto pairs = std::vector<std::pair<std::int64_t, std::int64_t>>{{64, 64}, {128, 256}};
    for (const auto& [n1, n2] : pairs) {
        const auto ea = free_energy_estimate(model, n1, 300, 31);
        const auto eb = free_energy_estimate(model, n2, 300, 32);
        const auto eab = free_energy_estimate(model, n1 + n2, 300, 33);
        const double na = static_cast<double>(n1), nb = static_cast<double>(n2);
        const double lhs = eab.mean;
        const double rhs = ea.mean * na / (na + nb) + eb.mean * nb / (na + nb);
        const double pooled =
            std::sqrt(eab.stderr_ * eab.stderr_ +
                      ea.stderr_ * ea.stderr_ * na * na / ((na + nb) * (na + nb)) +
                      eb.stderr_ * eb.stderr_ * nb * nb / ((na + nb) * (na + nb)));
        CHECK(lhs >= rhs - 3.0 * pooled);
    }
}

TEST_CASE("localization certificate: decided and undecided regimes") {
    const auto law = ReturnLaw::srw(kHorizon);
    const DisorderLaw dis{DisorderKind::Gaussian};

    // lambda=0: estimand (1/N) log u_N < 0 for every N
    const ModelSpec free_model(law, dis, {0.0, 0.0});
    const auto v0 = localization_certificate(free_model, {16, 32}, 20, 0.99, 1);
    CHECK(v0.verdict == Localization::Undecided);

    // far above h^(1): annealed < 0, never certifies
    const ModelSpec deloc(law, dis, {1.0, 2.0});
    const auto v2 = localization_certificate(deloc, {16, 32, 64}, 60, 0.99, 2);
    CHECK(v2.verdict == Localization::Undecided);

    // well inside the localized phase: h = 0 at lambda = 1
    const ModelSpec loc(law, dis, {1.0, 0.0});
    const auto v1 = localization_certificate(loc, {16, 32, 64}, 200, 0.99, 3);
    CHECK(v1.verdict == Localization::Localized);
    CHECK(v1.estimate.lower() > 0.0);

    CHECK_THROWS_AS(localization_certificate(loc, {32, 16}, 10, 0.99, 4),
                    std::invalid_argument);
}

TEST_CASE("profile preconditions") {
    const auto law = ReturnLaw::srw(64);
    const ModelSpec model(law, {DisorderKind::Gaussian}, {1.0, 0.0});
    const auto s = gaussian_sample(8, 1);
    CHECK_THROWS_AS(constrained_logZ_profile(model, s, 65), std::out_of_range);
    CHECK_THROWS_AS(constrained_logZ_profile(model, s, 9), std::invalid_argument);
}
