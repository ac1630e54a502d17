#pragma once

#include <complex>
#include <map>
#include <utility>
#include <vector>

#include "fpsum/special.hpp"

namespace fpsum {

using Complex = std::complex<double>;

/// Polynomial in t with complex coefficients, coeffs[a] multiplies t^a.
struct UnivariatePoly {
    std::vector<Complex> coeffs;

    [[nodiscard]] Complex eval(double t) const {
        Complex acc = 0.0;
        for (std::size_t a = coeffs.size(); a-- > 0;) acc = acc * t + coeffs[a];
        return acc;
    }
    [[nodiscard]] Complex coeff(std::size_t a) const {
        return a < coeffs.size() ? coeffs[a] : Complex(0.0);
    }
    UnivariatePoly& operator+=(const UnivariatePoly& other) {
        if (other.coeffs.size() > coeffs.size()) coeffs.resize(other.coeffs.size());
        for (std::size_t a = 0; a < other.coeffs.size(); ++a) coeffs[a] += other.coeffs[a];
        return *this;
    }
};

/// Sparse bivariate polynomial sum c_{ab} t^a tau^b over complex coefficients.
/// Arithmetic is exact over the monomial map; no evaluation grid is involved.
class BivariatePolynomial {
  public:
    using Monomial = std::pair<int, int>;  // (power of t, power of tau)

    BivariatePolynomial() = default;

    void add_term(int a, int b, Complex c) {
        if (c == Complex(0.0)) return;
        coeffs_[{a, b}] += c;
    }

    [[nodiscard]] Complex coeff(int a, int b) const {
        auto it = coeffs_.find({a, b});
        return it == coeffs_.end() ? Complex(0.0) : it->second;
    }

    [[nodiscard]] const std::map<Monomial, Complex>& terms() const { return coeffs_; }
    [[nodiscard]] bool empty() const { return coeffs_.empty(); }

    [[nodiscard]] int degree() const {
        int d = 0;
        for (const auto& [mon, c] : coeffs_)
            if (c != Complex(0.0)) d = std::max(d, mon.first + mon.second);
        return d;
    }
    [[nodiscard]] int min_degree() const {
        int d = -1;
        for (const auto& [mon, c] : coeffs_)
            if (c != Complex(0.0)) {
                int total = mon.first + mon.second;
                if (d < 0 || total < d) d = total;
            }
        return d < 0 ? 0 : d;
    }

    [[nodiscard]] Complex eval(double t, double tau) const {
        Complex acc = 0.0;
        for (const auto& [mon, c] : coeffs_) {
            double mono = 1.0;
            for (int i = 0; i < mon.first; ++i) mono *= t;
            for (int i = 0; i < mon.second; ++i) mono *= tau;
            acc += c * mono;
        }
        return acc;
    }

    friend BivariatePolynomial operator+(const BivariatePolynomial& x, const BivariatePolynomial& y) {
        BivariatePolynomial out = x;
        for (const auto& [mon, c] : y.coeffs_) out.coeffs_[mon] += c;
        return out;
    }
    friend BivariatePolynomial operator*(const BivariatePolynomial& x, const BivariatePolynomial& y) {
        BivariatePolynomial out;
        for (const auto& [mx, cx] : x.coeffs_)
            for (const auto& [my, cy] : y.coeffs_)
                out.coeffs_[{mx.first + my.first, mx.second + my.second}] += cx * cy;
        return out;
    }
    friend BivariatePolynomial operator*(Complex s, const BivariatePolynomial& x) {
        BivariatePolynomial out;
        for (const auto& [mon, c] : x.coeffs_) out.coeffs_[mon] = s * c;
        return out;
    }

  private:
    std::map<Monomial, Complex> coeffs_;
};

/// Integrates tau out against the standard normal weight: every tau^b is
/// replaced by its Gaussian moment.  Exact; no quadrature.
inline UnivariatePoly integrate_out_tau(const BivariatePolynomial& poly) {
    UnivariatePoly out;
    for (const auto& [mon, c] : poly.terms()) {
        double g = gaussian_moment(mon.second);
        if (g == 0.0) continue;
        if (static_cast<std::size_t>(mon.first) >= out.coeffs.size())
            out.coeffs.resize(static_cast<std::size_t>(mon.first) + 1);
        out.coeffs[static_cast<std::size_t>(mon.first)] += c * g;
    }
    return out;
}

}  // namespace fpsum
