#pragma once

#include <cmath>

#include "fpsum/errors.hpp"
#include "fpsum/moments.hpp"
#include "fpsum/special.hpp"

namespace fpsum {

struct LdCoefficients {
    double l0 = 0.0;
    double l1 = 0.0;
};

/// Choice for the quadratic-coefficient term whose printed form does not
/// reduce to the score case: the square of the summed third moments
/// (default; consistent with the cumulant series N(k4 - 3 k3^2)/24) or the
/// sum of squares as printed.  Only the score path is validated end to end;
/// general-population l1 values carry no independent check.
enum class Ell1Variant { SquareOfSum, SumOfSquares };

/// Cramer-series coefficients from population moments.  The sums carry the
/// sqrt(N) (for l0) and N (for l1) normalization that makes the score case
/// reproduce the closed forms of ld_coefficients_scores.
inline LdCoefficients ld_coefficients_general(const MomentSummary& ms,
                                              Ell1Variant variant = Ell1Variant::SquareOfSum) {
    LdCoefficients out;
    double rootN = std::sqrt(static_cast<double>(ms.N));
    out.l0 = rootN * ms.sum_z3 / 6.0;
    double last = variant == Ell1Variant::SquareOfSum ? ms.sum_z3 * ms.sum_z3 : ms.sum_z3_sq;
    double bracket = ms.sum_z4 / 3.0 - ms.sum_z2_sq - ms.sum_z2xi * ms.sum_z2xi - last;
    out.l1 = static_cast<double>(ms.N) * bracket / 8.0;
    return out;
}

/// Score-case closed forms:
///   l0 = (1-2p) A3 / 6 sqrt(pq),
///   l1 = (1-6pq) A4 / 24pq - (1-2p)^2 / 8pq - A3^2 / 8pq.
inline LdCoefficients ld_coefficients_scores(const ScoreSummary& ss, const Design& design) {
    design.require_partial("ld_coefficients_scores");
    double p = design.p(), q = design.q(), pq = p * q;
    LdCoefficients out;
    out.l0 = (1.0 - 2.0 * p) * ss.A3 / (6.0 * std::sqrt(pq));
    out.l1 = (1.0 - 6.0 * pq) * ss.A4 / (24.0 * pq) - (1.0 - 2.0 * p) * (1.0 - 2.0 * p) / (8.0 * pq) -
             ss.A3 * ss.A3 / (8.0 * pq);
    return out;
}

enum class TailSide { Upper, Lower };

struct TailRatioValue {
    double value = 1.0;
    bool range_warning = false;  // x beyond the o(sqrt N) validity scale
};

/// Tail-ratio approximants
///   (1 - P_N(x)) / (1 - Phi(x)) ~ exp{ x^3 L(x/sqrt N) / sqrt N },
///   P_N(-x) / Phi(-x)           ~ exp{ -x^3 L(-x/sqrt N) / sqrt N },
/// with L truncated at linear order; the (1 + O((x+1)/sqrt N)) factor carries
/// an unknown constant and is not modeled.
class TailRatioModel {
  public:
    TailRatioModel(LdCoefficients coeffs, int N) : coeffs_(coeffs), N_(N) {}

    [[nodiscard]] const LdCoefficients& coefficients() const { return coeffs_; }
    [[nodiscard]] int N() const { return N_; }

    /// terms = 1 keeps only l0; terms = 2 keeps l0 + l1 v.
    [[nodiscard]] TailRatioValue ratio(double x, TailSide side, int terms = 2) const {
        if (x < 0.0) throw ParseError("tail_ratio takes x >= 0; use side for the lower tail");
        double rootN = std::sqrt(static_cast<double>(N_));
        double v = (side == TailSide::Upper ? x : -x) / rootN;
        double L = coeffs_.l0 + (terms >= 2 ? coeffs_.l1 * v : 0.0);
        double exponent = x * x * x * L / rootN;
        if (side == TailSide::Lower) exponent = -exponent;
        TailRatioValue out;
        out.value = std::exp(exponent);
        out.range_warning = x > 0.5 * rootN;
        return out;
    }

  private:
    LdCoefficients coeffs_;
    int N_;
};

inline TailRatioValue tail_ratio(const TailRatioModel& model, double x, TailSide side, int terms = 2) {
    return model.ratio(x, side, terms);
}

}  // namespace fpsum
