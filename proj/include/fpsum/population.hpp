#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "fpsum/errors.hpp"
#include "fpsum/rational.hpp"

namespace fpsum {

inline constexpr double kProbSumTol = 1e-12;

/// Finite-support law on an arithmetic progression offset + k*step.
/// A single atom of probability 1 encodes a non-random score.
class LatticeDistribution {
  public:
    LatticeDistribution(Rational offset, Rational step, std::vector<double> probs)
        : offset_(offset), step_(step), probs_(std::move(probs)) {
        validate();
    }

    /// Builds the minimal lattice through the given atoms: step is the gcd of
    /// the support differences (1 for a single atom), gaps get probability 0.
    static LatticeDistribution from_atoms(std::vector<Rational> support, std::vector<double> probs) {
        if (support.empty() || support.size() != probs.size())
            throw ParseError("support/probs must be non-empty and of equal length");
        std::vector<std::size_t> order(support.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return support[a] < support[b]; });
        for (std::size_t i = 1; i < order.size(); ++i)
            if (support[order[i - 1]] == support[order[i]]) throw ParseError("duplicate support point");

        Rational lo = support[order.front()];
        Rational step = Rational(1);
        if (support.size() > 1) {
            step = Rational(0);
            for (std::size_t i : order) step = Rational::gcd(step, support[i] - lo);
        }
        std::int64_t span = Rational::exact_quotient(support[order.back()] - lo, step);
        std::vector<double> grid(static_cast<std::size_t>(span) + 1, 0.0);
        for (std::size_t i : order)
            grid[static_cast<std::size_t>(Rational::exact_quotient(support[i] - lo, step))] = probs[i];
        return LatticeDistribution(lo, step, std::move(grid));
    }

    [[nodiscard]] const Rational& offset() const { return offset_; }
    [[nodiscard]] const Rational& step() const { return step_; }
    [[nodiscard]] const std::vector<double>& probs() const { return probs_; }
    [[nodiscard]] Rational value(std::size_t index) const {
        return offset_ + Rational(static_cast<std::int64_t>(index)) * step_;
    }

    /// Non-zero atoms as (value, probability), in increasing value order.
    [[nodiscard]] std::vector<std::pair<Rational, double>> atoms() const {
        std::vector<std::pair<Rational, double>> out;
        for (std::size_t i = 0; i < probs_.size(); ++i)
            if (probs_[i] > 0.0) out.emplace_back(value(i), probs_[i]);
        return out;
    }

    [[nodiscard]] bool is_degenerate() const {
        int nonzero = 0;
        for (double p : probs_)
            if (p > 0.0) ++nonzero;
        return nonzero == 1;
    }

  private:
    void validate() const {
        if (!(step_ > Rational(0))) throw ParseError("lattice step must be positive");
        if (probs_.empty()) throw ParseError("lattice law needs at least one point");
        double sum = 0.0;
        bool any = false;
        for (double p : probs_) {
            if (p < 0.0 || !std::isfinite(p)) throw ParseError("probabilities must be finite and >= 0");
            if (p > 0.0) any = true;
            sum += p;
        }
        if (!any) throw ParseError("lattice law needs a positive-probability atom");
        if (std::abs(sum - 1.0) > kProbSumTol) throw ParseError("probabilities must sum to 1");
    }

    Rational offset_;
    Rational step_;
    std::vector<double> probs_;
};

/// One population element Y_m: a finite-support random variable, or a fixed
/// score when the law is a single atom.
class PopulationElement {
  public:
    explicit PopulationElement(LatticeDistribution law) : law_(std::move(law)), atoms_(law_.atoms()) {
        for (const auto& [v, p] : atoms_) {
            atom_values_.push_back(v.to_double());
            atom_probs_.push_back(p);
        }
    }

    static PopulationElement score(Rational value) {
        return PopulationElement(LatticeDistribution(value, Rational(1), {1.0}));
    }

    [[nodiscard]] const LatticeDistribution& law() const { return law_; }
    [[nodiscard]] bool is_degenerate() const { return atoms_.size() == 1; }
    [[nodiscard]] const std::vector<std::pair<Rational, double>>& atoms() const { return atoms_; }
    [[nodiscard]] const std::vector<double>& atom_values() const { return atom_values_; }
    [[nodiscard]] const std::vector<double>& atom_probs() const { return atom_probs_; }

    [[nodiscard]] double mean() const {
        double acc = 0.0;
        for (std::size_t i = 0; i < atom_values_.size(); ++i) acc += atom_probs_[i] * atom_values_[i];
        return acc;
    }

    /// E (Y - center)^k, exact finite sum.
    [[nodiscard]] double power_moment(int k, double center) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < atom_values_.size(); ++i)
            acc += atom_probs_[i] * int_pow(atom_values_[i] - center, k);
        return acc;
    }

    /// E |Y - center|^k, k possibly fractional.
    [[nodiscard]] double abs_moment(double k, double center) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < atom_values_.size(); ++i)
            acc += atom_probs_[i] * std::pow(std::abs(atom_values_[i] - center), k);
        return acc;
    }

    static double int_pow(double x, int k) {
        double acc = 1.0;
        for (int j = 0; j < k; ++j) acc *= x;
        return acc;
    }

  private:
    LatticeDistribution law_;
    std::vector<std::pair<Rational, double>> atoms_;
    std::vector<double> atom_values_;
    std::vector<double> atom_probs_;
};

/// The population pi_N.  On construction computes the common refinement
/// lattice of all element supports (always commensurable for rational inputs;
/// construction fails with RationalOverflow otherwise).
class Population {
  public:
    explicit Population(std::vector<PopulationElement> elements) : elements_(std::move(elements)) {
        if (elements_.size() < 2) throw ParseError("population needs N >= 2 elements");
        base_ = elements_.front().atoms().front().first;
        for (const auto& e : elements_)
            for (const auto& [v, p] : e.atoms())
                if (v < base_) base_ = v;
        Rational g(0);
        for (const auto& e : elements_)
            for (const auto& [v, p] : e.atoms()) g = Rational::gcd(g, v - base_);
        step_ = g.is_zero() ? Rational(1) : g;
    }

    [[nodiscard]] int size() const { return static_cast<int>(elements_.size()); }
    [[nodiscard]] const std::vector<PopulationElement>& elements() const { return elements_; }
    [[nodiscard]] const PopulationElement& element(int m) const { return elements_[static_cast<std::size_t>(m)]; }

    /// Common lattice: every atom of every element equals base + k*step with
    /// integer k >= 0.
    [[nodiscard]] const Rational& lattice_base() const { return base_; }
    [[nodiscard]] const Rational& lattice_step() const { return step_; }

    [[nodiscard]] std::vector<std::int64_t> lattice_indices(int m) const {
        std::vector<std::int64_t> out;
        for (const auto& [v, p] : elements_[static_cast<std::size_t>(m)].atoms())
            out.push_back(Rational::exact_quotient(v - base_, step_));
        return out;
    }

    [[nodiscard]] bool all_degenerate() const {
        for (const auto& e : elements_)
            if (!e.is_degenerate()) return false;
        return true;
    }

    [[nodiscard]] double max_abs_support() const {
        double m = 0.0;
        for (const auto& e : elements_)
            for (double v : e.atom_values()) m = std::max(m, std::abs(v));
        return m;
    }

  private:
    std::vector<PopulationElement> elements_;
    Rational base_{0};
    Rational step_{1};
};

/// Sampling design: n of N without replacement, p = n/N.
struct Design {
    int n = 1;
    int N = 2;

    Design(int n_, int N_) : n(n_), N(N_) {
        if (N < 2) throw ParseError("design needs N >= 2");
        if (n < 1 || n > N) throw ParseError("design needs 1 <= n <= N");
    }

    [[nodiscard]] double p() const { return static_cast<double>(n) / static_cast<double>(N); }
    [[nodiscard]] double q() const { return 1.0 - p(); }
    [[nodiscard]] double nq() const { return static_cast<double>(n) * q(); }
    [[nodiscard]] bool full_sample() const { return n == N; }

    void require_partial(const char* who) const {
        if (full_sample()) throw DegenerateDesign(std::string(who) + " requires n < N (q > 0)");
    }
};

}  // namespace fpsum
