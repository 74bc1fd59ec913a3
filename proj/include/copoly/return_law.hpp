// Inter-arrival (return) laws K(.) of the underlying renewal process.
//
// Every law stores exact masses K(1..n_max) plus the survival table
// P(tau > n); beyond n_max an analytic power-law tail takes over. All data
// is immutable after construction and shared by value copies.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "copoly/numeric.hpp"
#include "copoly/rng.hpp"

namespace copoly {

enum class ReturnLawKind { SRW, Zipf, HeavyHead, CustomTable };

namespace detail {

/// Euler-Maclaurin estimate of sum_{n > N} n^{-s}, s > 1.
inline double power_tail_gt(double N, double s) {
    const double a = N + 1.0;
    return std::pow(a, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(a, -s) +
           (s / 12.0) * std::pow(a, -s - 1.0) -
           (s * (s + 1.0) * (s + 2.0) / 720.0) * std::pow(a, -s - 3.0);
}

}  // namespace detail

class ReturnLaw {
    struct Data {
        ReturnLawKind kind = ReturnLawKind::Zipf;
        double alpha = 0.0;
        double c_k = 0.0;            // K(n) ~ c_k * n^{-(1+alpha)}
        std::int64_t n_max = 0;
        std::int64_t head_end = 0;   // last index whose mass is not pure power law
        double tail_scale = 0.0;     // exact coefficient of the power-law part
        double analytic_tail = 0.0;  // analytic P(tau > n_max)
        std::vector<double> mass;    // [0] unused
        std::vector<double> tail;    // tail[n] = P(tau > n), forward-built
        std::string name;
    };

public:
    ReturnLawKind kind() const { return d_->kind; }
    double alpha() const { return d_->alpha; }
    double c_k() const { return d_->c_k; }
    std::int64_t n_max() const { return d_->n_max; }
    std::int64_t head_end() const { return d_->head_end; }
    const std::string& name() const { return d_->name; }
    const std::vector<double>& mass_table() const { return d_->mass; }
    const std::vector<double>& tail_table() const { return d_->tail; }

    /// K(n). Throws on n = 0 (domain) and n > n_max (range).
    double mass(std::int64_t n) const {
        if (n < 1) throw std::domain_error("return_mass: n must be >= 1");
        if (n > d_->n_max) throw std::out_of_range("return_mass: n beyond precomputed horizon");
        return d_->mass[static_cast<std::size_t>(n)];
    }

    /// P(tau > n); tail(0) = 1.
    double tail(std::int64_t n) const {
        if (n < 0) throw std::domain_error("return_tail: n must be >= 0");
        if (n > d_->n_max) throw std::out_of_range("return_tail: n beyond precomputed horizon");
        return d_->tail[static_cast<std::size_t>(n)];
    }

    /// Analytic estimate of P(tau > n_max), used by the normalization check.
    double analytic_tail_bound() const { return d_->analytic_tail; }

    /// Certified bound on sup_{j >= j0} j^{1+alpha} K(j). Exact for power-law
    /// tails; for SRW it comes from C(2n,n) 4^{-n} <= 1/sqrt(pi n).
    double tail_sup_coeff(std::int64_t j0) const {
        if (j0 <= d_->head_end)
            throw std::domain_error("tail_sup_coeff: j0 must lie beyond the head");
        if (d_->kind == ReturnLawKind::SRW)
            return 1.0 / (2.0 * std::sqrt(M_PI) * (1.0 - 0.5 / static_cast<double>(j0)));
        return d_->tail_scale;
    }

    /// E[tau_1] including the analytic tail; +inf when alpha <= 1.
    double mean_increment() const {
        if (d_->alpha <= 1.0) return std::numeric_limits<double>::infinity();
        std::vector<double> terms(static_cast<std::size_t>(d_->n_max));
        for (std::int64_t n = 1; n <= d_->n_max; ++n)
            terms[static_cast<std::size_t>(n - 1)] =
                static_cast<double>(n) * d_->mass[static_cast<std::size_t>(n)];
        const double tail_part =
            d_->tail_scale * detail::power_tail_gt(static_cast<double>(d_->n_max), d_->alpha);
        return pairwise_sum(terms) + tail_part;
    }

    /// Inverse-CDF sample of tau_1. Beyond n_max the Pareto tail matched
    /// continuously at the horizon takes over; the induced bias is bounded by
    /// the normalization tolerance.
    std::int64_t sample_increment(CounterRng& rng) const {
        const double v = rng.uniform01();  // in (0,1]
        const auto& tail = d_->tail;
        const double horizon_tail = tail[static_cast<std::size_t>(d_->n_max)];
        if (v > horizon_tail) {
            // smallest n with tail[n] < v
            std::int64_t lo = 1, hi = d_->n_max;
            while (lo < hi) {
                const std::int64_t mid = lo + (hi - lo) / 2;
                if (tail[static_cast<std::size_t>(mid)] < v)
                    hi = mid;
                else
                    lo = mid + 1;
            }
            return lo;
        }
        if (!(horizon_tail > 0.0)) return d_->n_max;
        const double x = static_cast<double>(d_->n_max) *
                         std::pow(v / horizon_tail, -1.0 / d_->alpha);
        if (x >= 4.0e18) return std::int64_t{4000000000000000000};
        return std::max<std::int64_t>(d_->n_max, static_cast<std::int64_t>(std::ceil(x)));
    }

    // Factories ------------------------------------------------------------

    /// First-return law of the simple random walk in half-time units:
    /// K(n) = C(2n,n) / ((2n-1) 4^n), alpha = 1/2, with the exact identity
    /// P(tau > n) = C(2n,n) 4^{-n} as the analytic tail.
    static ReturnLaw srw(std::int64_t n_max = kDefaultHorizon) {
        auto d = std::make_shared<Data>();
        d->kind = ReturnLawKind::SRW;
        d->alpha = 0.5;
        d->c_k = 1.0 / (2.0 * std::sqrt(M_PI));
        d->n_max = n_max;
        d->head_end = 0;
        d->name = "srw";
        d->mass.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
        double r = 1.0;  // C(2n,n) 4^{-n}
        for (std::int64_t n = 1; n <= n_max; ++n) {
            r *= static_cast<double>(2 * n - 1) / static_cast<double>(2 * n);
            d->mass[static_cast<std::size_t>(n)] = r / static_cast<double>(2 * n - 1);
        }
        d->analytic_tail = r;
        d->tail_scale = d->c_k;  // only used for reporting; tail_sup_coeff overrides
        finish(*d);
        return ReturnLaw(std::move(d));
    }

    /// K(n) = n^{-(1+alpha)} / norm, exactly normalized by partial sums plus
    /// an integral-comparison tail. Optional head entries override small-n
    /// masses; the power-law part is rescaled to keep total mass 1.
    static ReturnLaw zipf(double alpha, std::int64_t n_max = kDefaultHorizon,
                          const std::vector<std::pair<std::int64_t, double>>& head = {}) {
        if (!(alpha > 0.0)) throw std::domain_error("zipf: alpha must be positive");
        auto d = std::make_shared<Data>();
        d->kind = ReturnLawKind::Zipf;
        d->alpha = alpha;
        d->n_max = n_max;
        d->name = "zipf";
        build_power_law(*d, alpha, head);
        finish(*d);
        return ReturnLaw(std::move(d));
    }

    /// Head masses proportional to 1/(n log^2(n+1)) up to n0 (the alpha=0-style
    /// shape), glued to a power-law tail with exponent alpha. head_frac < 0
    /// selects the fraction the ideal alpha=0 law would put on [1, n0].
    static ReturnLaw heavy_head(double alpha, std::int64_t n0,
                                std::int64_t n_max = kDefaultHorizon, double head_frac = -1.0) {
        if (!(alpha > 0.0)) throw std::domain_error("heavy_head: alpha must be positive");
        if (n0 < 1 || n0 >= n_max) throw std::domain_error("heavy_head: need 1 <= n0 < n_max");
        std::vector<double> w(static_cast<std::size_t>(n0));
        for (std::int64_t n = 1; n <= n0; ++n)
            w[static_cast<std::size_t>(n - 1)] =
                1.0 / (static_cast<double>(n) * std::pow(std::log(static_cast<double>(n) + 1.0), 2));
        const double head_sum = pairwise_sum(w);
        if (head_frac < 0.0) {
            // integral tail of the ideal law: int_{n0}^inf dx/(x log^2(x+1)) ~ 1/log(n0+1)
            const double ideal_tail = 1.0 / std::log(static_cast<double>(n0) + 1.0);
            head_frac = head_sum / (head_sum + ideal_tail);
        }
        if (!(head_frac > 0.0 && head_frac < 1.0))
            throw std::domain_error("heavy_head: head fraction must be in (0,1)");
        std::vector<std::pair<std::int64_t, double>> head(static_cast<std::size_t>(n0));
        for (std::int64_t n = 1; n <= n0; ++n)
            head[static_cast<std::size_t>(n - 1)] = {
                n, head_frac * w[static_cast<std::size_t>(n - 1)] / head_sum};
        auto d = std::make_shared<Data>();
        d->kind = ReturnLawKind::HeavyHead;
        d->alpha = alpha;
        d->n_max = n_max;
        d->name = "heavyhead" + std::to_string(n0);
        build_power_law(*d, alpha, head);
        finish(*d);
        return ReturnLaw(std::move(d));
    }

    /// Explicit head masses plus a declared analytic tail K(n) = cK n^{-(1+alpha)}
    /// for n beyond the head. Head + tail must account for total mass 1 within
    /// tol; masses are then renormalized so internal identities hold exactly.
    static ReturnLaw custom_table(const std::vector<std::pair<std::int64_t, double>>& head,
                                  double alpha, double ck_tail,
                                  std::int64_t n_max = kDefaultHorizon, double tol = 1e-8) {
        if (!(alpha > 0.0)) throw std::domain_error("custom_table: alpha must be positive");
        if (head.empty()) throw std::domain_error("custom_table: empty head");
        std::int64_t head_end = 0;
        double head_sum = 0.0;
        for (const auto& [n, p] : head) {
            if (n < 1 || !(p > 0.0)) throw std::domain_error("custom_table: bad head entry");
            head_end = std::max(head_end, n);
            head_sum += p;
        }
        if (head_end >= n_max) throw std::domain_error("custom_table: head exceeds horizon");
        const double s = 1.0 + alpha;
        const double tail_sum = ck_tail * (partial_power_sum(head_end + 1, n_max, s) +
                                           detail::power_tail_gt(static_cast<double>(n_max), s));
        const double total = head_sum + tail_sum;
        if (std::fabs(total - 1.0) > tol)
            throw std::runtime_error("custom_table: head + analytic tail sums to " +
                                     std::to_string(total) + ", not 1");
        auto d = std::make_shared<Data>();
        d->kind = ReturnLawKind::CustomTable;
        d->alpha = alpha;
        d->n_max = n_max;
        d->head_end = head_end;
        d->name = "custom";
        d->mass.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
        for (const auto& [n, p] : head) d->mass[static_cast<std::size_t>(n)] = p / total;
        d->tail_scale = ck_tail / total;
        d->c_k = d->tail_scale;
        for (std::int64_t n = head_end + 1; n <= n_max; ++n)
            d->mass[static_cast<std::size_t>(n)] =
                d->tail_scale * std::pow(static_cast<double>(n), -s);
        d->analytic_tail = d->tail_scale * detail::power_tail_gt(static_cast<double>(n_max), s);
        for (std::int64_t n = 1; n <= n_max; ++n)
            if (!(d->mass[static_cast<std::size_t>(n)] > 0.0))
                throw std::runtime_error("custom_table: K(n) must be positive for all n in range");
        finish(*d);
        return ReturnLaw(std::move(d));
    }

    /// Text format: lines "n<TAB>K(n)", footer "tail<TAB>alpha<TAB>C_K".
    static ReturnLaw load_custom_table(const std::string& path,
                                       std::int64_t n_max = kDefaultHorizon) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open custom law file: " + path);
        std::vector<std::pair<std::int64_t, double>> head;
        double alpha = -1.0, ck = -1.0;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::istringstream ls(line);
            std::string first;
            ls >> first;
            if (first == "tail") {
                if (!(ls >> alpha >> ck))
                    throw std::runtime_error("custom law file: malformed tail footer");
            } else {
                std::int64_t n = 0;
                double p = 0.0;
                try {
                    n = std::stoll(first);
                } catch (...) {
                    throw std::runtime_error("custom law file: bad index '" + first + "'");
                }
                if (!(ls >> p)) throw std::runtime_error("custom law file: missing probability");
                head.emplace_back(n, p);
            }
        }
        if (alpha < 0.0 || ck < 0.0)
            throw std::runtime_error("custom law file: missing 'tail alpha C_K' footer");
        return custom_table(head, alpha, ck, n_max);
    }

    static constexpr std::int64_t kDefaultHorizon = std::int64_t{1} << 20;

private:
    explicit ReturnLaw(std::shared_ptr<const Data> d) : d_(std::move(d)) {}

    static double partial_power_sum(std::int64_t from, std::int64_t to, double s) {
        std::vector<double> terms;
        terms.reserve(static_cast<std::size_t>(std::max<std::int64_t>(to - from + 1, 0)));
        for (std::int64_t n = from; n <= to; ++n)
            terms.push_back(std::pow(static_cast<double>(n), -s));
        return pairwise_sum(terms);
    }

    // Fill the non-head range with an exactly renormalized power law.
    static void build_power_law(Data& d, double alpha,
                                const std::vector<std::pair<std::int64_t, double>>& head) {
        const double s = 1.0 + alpha;
        d.mass.assign(static_cast<std::size_t>(d.n_max) + 1, 0.0);
        double head_sum = 0.0;
        std::int64_t head_end = 0;
        for (const auto& [n, p] : head) {
            if (n < 1 || n > d.n_max) throw std::domain_error("head index out of range");
            if (!(p > 0.0) || head_sum + p >= 1.0)
                throw std::domain_error("head masses must be positive with total < 1");
            d.mass[static_cast<std::size_t>(n)] = p;
            head_sum += p;
            head_end = std::max(head_end, n);
        }
        d.head_end = head_end;
        std::vector<double> w;
        w.reserve(static_cast<std::size_t>(d.n_max));
        for (std::int64_t n = 1; n <= d.n_max; ++n)
            w.push_back(n <= head_end ? 0.0 : std::pow(static_cast<double>(n), -s));
        const double body = pairwise_sum(w);
        const double tail_em = detail::power_tail_gt(static_cast<double>(d.n_max), s);
        const double scale = (1.0 - head_sum) / (body + tail_em);
        for (std::int64_t n = head_end + 1; n <= d.n_max; ++n)
            d.mass[static_cast<std::size_t>(n)] = scale * w[static_cast<std::size_t>(n - 1)];
        d.tail_scale = scale;
        d.c_k = scale;
        d.analytic_tail = scale * tail_em;
        for (std::int64_t n = 1; n <= d.n_max; ++n)
            if (!(d.mass[static_cast<std::size_t>(n)] > 0.0))
                throw std::logic_error("return law: K(n) must be positive in range");
    }

    // Forward-built survival table; the recurrence tail[n-1] - mass[n] is then
    // reproducible bit for bit. Also checks normalization against the law's
    // analytic tail.
    static void finish(Data& d) {
        d.tail.assign(static_cast<std::size_t>(d.n_max) + 1, 0.0);
        d.tail[0] = 1.0;
        for (std::int64_t n = 1; n <= d.n_max; ++n)
            d.tail[static_cast<std::size_t>(n)] =
                d.tail[static_cast<std::size_t>(n - 1)] - d.mass[static_cast<std::size_t>(n)];
        const double gap = d.tail[static_cast<std::size_t>(d.n_max)] - d.analytic_tail;
        if (std::fabs(gap) > 1e-10)
            throw std::logic_error("return law: normalization check failed, gap = " +
                                   std::to_string(gap));
    }

    std::shared_ptr<const Data> d_;
};

inline double return_mass(const ReturnLaw& law, std::int64_t n) { return law.mass(n); }
inline double return_tail(const ReturnLaw& law, std::int64_t n) { return law.tail(n); }

}  // namespace copoly
