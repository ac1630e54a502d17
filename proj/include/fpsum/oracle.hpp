#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <vector>

#include "fpsum/errors.hpp"
#include "fpsum/population.hpp"
#include "fpsum/rng.hpp"

namespace fpsum {

inline constexpr std::size_t kDefaultDpBudget = 100'000'000;

/// Exact lattice law of the sample sum S_nN.
class ExactDistribution {
  public:
    ExactDistribution(Rational offset, Rational step, std::vector<double> probs, Design design)
        : offset_(offset), step_(step), probs_(std::move(probs)), design_(design) {
        double sum = std::accumulate(probs_.begin(), probs_.end(), 0.0);
        if (std::abs(sum - 1.0) > 1e-12) throw Error("oracle pmf does not sum to 1");
        cum_.resize(probs_.size() + 1, 0.0);
        for (std::size_t i = 0; i < probs_.size(); ++i) cum_[i + 1] = cum_[i] + probs_[i];
        offset_d_ = offset_.to_double();
        step_d_ = step_.to_double();
    }

    [[nodiscard]] const Rational& offset() const { return offset_; }
    [[nodiscard]] const Rational& step() const { return step_; }
    [[nodiscard]] const std::vector<double>& probs() const { return probs_; }
    [[nodiscard]] const Design& design() const { return design_; }
    [[nodiscard]] std::size_t size() const { return probs_.size(); }

    [[nodiscard]] Rational value(std::size_t i) const {
        return offset_ + Rational(static_cast<std::int64_t>(i)) * step_;
    }
    [[nodiscard]] double value_d(std::size_t i) const { return offset_d_ + static_cast<double>(i) * step_d_; }

    [[nodiscard]] double mean() const {
        double acc = 0.0;
        for (std::size_t i = 0; i < probs_.size(); ++i) acc += probs_[i] * value_d(i);
        return acc;
    }

    /// Central moment E (S - ES)^r, exact lattice summation (r <= 8).
    [[nodiscard]] double central_moment(int r) const {
        if (r < 0 || r > 8) throw UnsupportedOrder("exact_moments supports r <= 8");
        double mu = mean(), acc = 0.0;
        for (std::size_t i = 0; i < probs_.size(); ++i)
            acc += probs_[i] * PopulationElement::int_pow(value_d(i) - mu, r);
        return acc;
    }

    /// Left-continuous CDF P{S < x}.
    [[nodiscard]] double cdf_left(double x) const { return cdf(x, false); }
    /// P{S <= x}.
    [[nodiscard]] double cdf_incl(double x) const { return cdf(x, true); }

    /// Characteristic function of (S - center)/scale, exact atom sum.
    [[nodiscard]] std::complex<double> chf_standardized(double t, double center, double scale) const {
        std::complex<double> acc = 0.0;
        for (std::size_t i = 0; i < probs_.size(); ++i)
            if (probs_[i] > 0.0) acc += probs_[i] * std::polar(1.0, t * (value_d(i) - center) / scale);
        return acc;
    }

  private:
    [[nodiscard]] double cdf(double x, bool inclusive) const {
        if (probs_.empty()) return 0.0;
        double pos = (x - offset_d_) / step_d_;
        double nearest = std::round(pos);
        double frac = pos - nearest;
        std::int64_t k;
        if (std::abs(frac) <= 1e-9) {
            k = static_cast<std::int64_t>(nearest) - (inclusive ? 0 : 1);
        } else {
            k = static_cast<std::int64_t>(std::floor(pos));
        }
        if (k < 0) return 0.0;
        std::size_t idx = std::min(static_cast<std::size_t>(k + 1), probs_.size());
        return cum_[idx];
    }

    Rational offset_;
    Rational step_;
    std::vector<double> probs_;
    Design design_;
    std::vector<double> cum_;
    double offset_d_, step_d_;
};

/// Exact law of S_nN by dynamic programming over elements with state
/// (elements chosen, lattice position).  The recursion carries the Bernoulli
/// weights q / p per skip/take branch, so the final layer only needs one
/// division by P{Bin(N, p) = n}; this is the counting DP of the subset
/// average up to an invertible scaling.  Handles n = N (full independent sum).
inline ExactDistribution exact_distribution(const Population& pop, const Design& design,
                                            std::size_t budget = kDefaultDpBudget) {
    const int N = pop.size();
    if (design.N != N) throw ParseError("design N does not match population size");
    const int n = design.n;
    const double p = design.p(), q = design.q();

    std::vector<std::vector<std::pair<std::int64_t, double>>> atoms(static_cast<std::size_t>(N));
    std::int64_t kmax = 0;
    for (int m = 0; m < N; ++m) {
        auto idx = pop.lattice_indices(m);
        const auto& probs = pop.element(m).atom_probs();
        for (std::size_t i = 0; i < idx.size(); ++i) {
            atoms[static_cast<std::size_t>(m)].emplace_back(idx[i], probs[i]);
            kmax = std::max(kmax, idx[i]);
        }
    }

    const std::size_t span = static_cast<std::size_t>(kmax) * static_cast<std::size_t>(n) + 1;
    const std::size_t cells = static_cast<std::size_t>(N + 1) * static_cast<std::size_t>(n + 1) * span;
    if (cells > budget)
        throw BudgetExceeded("oracle DP state space exceeds budget: " + std::to_string(cells) +
                                 " cells (budget " + std::to_string(budget) + ")",
                             cells);

    std::vector<std::vector<double>> layer(static_cast<std::size_t>(n) + 1,
                                           std::vector<double>(span, 0.0));
    layer[0][0] = 1.0;
    for (int m = 0; m < N; ++m) {
        const auto& law = atoms[static_cast<std::size_t>(m)];
        for (int j = std::min(m + 1, n); j >= 1; --j) {
            auto& cur = layer[static_cast<std::size_t>(j)];
            const auto& below = layer[static_cast<std::size_t>(j - 1)];
            for (double& x : cur) x *= q;
            const std::size_t limit = static_cast<std::size_t>(kmax) * static_cast<std::size_t>(j - 1) + 1;
            for (std::size_t K = 0; K < std::min(below.size(), limit); ++K) {
                double mass = below[K];
                if (mass == 0.0) continue;
                for (const auto& [k, prob] : law) cur[K + static_cast<std::size_t>(k)] += p * mass * prob;
            }
        }
        for (double& x : layer[0]) x *= q;
    }

    double log_c = std::lgamma(N + 1.0) - std::lgamma(n + 1.0) - std::lgamma(N - n + 1.0);
    double log_w = n * std::log(p) + (N > n ? (N - n) * std::log(q) : 0.0);
    double d = std::exp(log_c + log_w);

    std::vector<double>& raw = layer[static_cast<std::size_t>(n)];
    std::size_t first = 0, last = raw.size();
    while (first < last && raw[first] == 0.0) ++first;
    while (last > first && raw[last - 1] == 0.0) --last;
    std::vector<double> probs(raw.begin() + static_cast<std::ptrdiff_t>(first),
                              raw.begin() + static_cast<std::ptrdiff_t>(last));
    for (double& x : probs) x /= d;

    Rational offset = Rational(n) * pop.lattice_base() +
                      Rational(static_cast<std::int64_t>(first)) * pop.lattice_step();
    return ExactDistribution(offset, pop.lattice_step(), std::move(probs), design);
}

/// Independent cross-validation of the DP: averages the conditional
/// convolution over all C(N, n) subsets.  Refuses N > 20.
inline ExactDistribution enumerate_subsets(const Population& pop, const Design& design) {
    const int N = pop.size();
    if (N > 20) throw TooLarge("enumerate_subsets refuses N > 20");
    if (design.N != N) throw ParseError("design N does not match population size");
    const int n = design.n;

    std::vector<std::vector<std::pair<std::int64_t, double>>> atoms(static_cast<std::size_t>(N));
    std::int64_t kmax = 0;
    for (int m = 0; m < N; ++m) {
        auto idx = pop.lattice_indices(m);
        const auto& probs = pop.element(m).atom_probs();
        for (std::size_t i = 0; i < idx.size(); ++i) {
            atoms[static_cast<std::size_t>(m)].emplace_back(idx[i], probs[i]);
            kmax = std::max(kmax, idx[i]);
        }
    }
    const std::size_t span = static_cast<std::size_t>(kmax) * static_cast<std::size_t>(n) + 1;

    std::vector<double> total(span, 0.0);
    std::vector<int> pick(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pick[static_cast<std::size_t>(i)] = i;
    double subsets = 0.0;
    std::vector<double> conv, next;
    for (;;) {
        conv.assign(1, 1.0);
        for (int i = 0; i < n; ++i) {
            const auto& law = atoms[static_cast<std::size_t>(pick[static_cast<std::size_t>(i)])];
            next.assign(conv.size() + static_cast<std::size_t>(kmax), 0.0);
            for (std::size_t K = 0; K < conv.size(); ++K) {
                if (conv[K] == 0.0) continue;
                for (const auto& [k, prob] : law) next[K + static_cast<std::size_t>(k)] += conv[K] * prob;
            }
            conv.swap(next);
        }
        for (std::size_t K = 0; K < conv.size(); ++K) total[K] += conv[K];
        subsets += 1.0;

        int i = n - 1;
        while (i >= 0 && pick[static_cast<std::size_t>(i)] == i + N - n) --i;
        if (i < 0) break;
        ++pick[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < n; ++j)
            pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
    }

    std::size_t first = 0, last = total.size();
    while (first < last && total[first] == 0.0) ++first;
    while (last > first && total[last - 1] == 0.0) --last;
    std::vector<double> probs(total.begin() + static_cast<std::ptrdiff_t>(first),
                              total.begin() + static_cast<std::ptrdiff_t>(last));
    for (double& x : probs) x /= subsets;

    Rational offset = Rational(n) * pop.lattice_base() +
                      Rational(static_cast<std::int64_t>(first)) * pop.lattice_step();
    return ExactDistribution(offset, pop.lattice_step(), std::move(probs), design);
}

/// Monte Carlo draws of S_nN: Fisher-Yates selection of n indices without
/// replacement, then one draw from each chosen law.  Replicate r uses the
/// (seed, r) stream, so results are reproducible under any scheduling.
inline std::vector<double> sample_srswor(const Population& pop, const Design& design,
                                         std::size_t count, std::uint64_t seed) {
    if (count < 1) throw ParseError("sample count must be >= 1");
    const int N = pop.size();
    if (design.N != N) throw ParseError("design N does not match population size");
    const int n = design.n;

    std::vector<double> sums(count);
    std::vector<int> indices(static_cast<std::size_t>(N));
    for (std::size_t r = 0; r < count; ++r) {
        SplitRng rng(seed, r);
        for (int i = 0; i < N; ++i) indices[static_cast<std::size_t>(i)] = i;
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            std::uint64_t j = static_cast<std::uint64_t>(i) +
                              rng.next_below(static_cast<std::uint64_t>(N - i));
            std::swap(indices[static_cast<std::size_t>(i)], indices[j]);
            const auto& e = pop.element(indices[static_cast<std::size_t>(i)]);
            double u = rng.next_double();
            double acc = 0.0;
            std::size_t a = 0;
            for (; a + 1 < e.atom_probs().size(); ++a) {
                acc += e.atom_probs()[a];
                if (u < acc) break;
            }
            sum += e.atom_values()[a];
        }
        sums[r] = sum;
    }
    return sums;
}

inline double exact_moments(const ExactDistribution& dist, int r) { return dist.central_moment(r); }

/// sup_x |ECDF(x) - F(x)| against an exact lattice law; the sup is attained
/// at atoms, evaluated on both sides with a half-step tolerance absorbing
/// float drift in the sampled sums.
inline double ecdf_sup_distance(std::vector<double> samples, const ExactDistribution& dist) {
    std::sort(samples.begin(), samples.end());
    const double M = static_cast<double>(samples.size());
    const double h = dist.step().to_double();
    double sup = 0.0;
    double cum = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        if (dist.probs()[i] == 0.0) continue;
        double v = dist.value_d(i);
        double below = static_cast<double>(std::lower_bound(samples.begin(), samples.end(), v - 0.25 * h) -
                                           samples.begin()) /
                       M;
        double upto = static_cast<double>(std::upper_bound(samples.begin(), samples.end(), v + 0.25 * h) -
                                          samples.begin()) /
                      M;
        sup = std::max(sup, std::abs(below - cum));
        cum += dist.probs()[i];
        sup = std::max(sup, std::abs(upto - cum));
    }
    return sup;
}

}  // namespace fpsum
