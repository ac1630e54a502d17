#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fpsum/diagnostics.hpp"
#include "fpsum/errors.hpp"
#include "fpsum/moments.hpp"
#include "fpsum/oracle.hpp"
#include "fpsum/population.hpp"
#include "fpsum/rational.hpp"

namespace fpsum {

struct PopulationSpec {
    Population population;
    int n = 1;
};

namespace detail {

/// Accepts decimal strings (exact) and JSON integers; JSON floats go through
/// their shortest round-trip decimal, which is the text the user wrote in
/// every non-pathological case.
inline Rational rational_from_json(const nlohmann::json& j) {
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_number_float()) {
        char buf[32];
        auto res = std::to_chars(buf, buf + sizeof(buf), j.get<double>());
        return Rational::parse(std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)));
    }
    throw ParseError("expected a decimal string or number, got: " + j.dump());
}

}  // namespace detail

/// Population spec schema:
///   {"elements": [ {"support": [...], "probs": [...]} | {"score": x}, ... ],
///    "n": int}
/// Supports and scores are decimal strings (or integers) parsed as exact
/// rationals on a common lattice.
inline PopulationSpec population_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("elements") || !j.contains("n"))
        throw ParseError("population spec needs 'elements' and 'n'");
    if (!j["n"].is_number_integer()) throw ParseError("'n' must be an integer");
    std::vector<PopulationElement> elements;
    for (const auto& ej : j["elements"]) {
        if (ej.contains("score")) {
            elements.push_back(PopulationElement::score(detail::rational_from_json(ej["score"])));
        } else if (ej.contains("support") && ej.contains("probs")) {
            if (!ej["support"].is_array() || !ej["probs"].is_array())
                throw ParseError("'support' and 'probs' must be arrays");
            std::vector<Rational> support;
            std::vector<double> probs;
            for (const auto& v : ej["support"]) support.push_back(detail::rational_from_json(v));
            for (const auto& v : ej["probs"]) {
                if (!v.is_number()) throw ParseError("'probs' entries must be numbers");
                probs.push_back(v.get<double>());
            }
            elements.emplace_back(LatticeDistribution::from_atoms(std::move(support), std::move(probs)));
        } else {
            throw ParseError("element needs 'score' or 'support'+'probs': " + ej.dump());
        }
    }
    PopulationSpec spec{Population(std::move(elements)), j["n"].get<int>()};
    if (spec.n < 1 || spec.n > spec.population.size())
        throw ParseError("'n' must satisfy 1 <= n <= N");
    return spec;
}

inline PopulationSpec load_population(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open population file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("malformed JSON in " + path + ": " + e.what());
    }
    return population_from_json(j);
}

inline std::string format_full(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

/// pmf export: one "value,probability" row per lattice point with positive
/// mass; values are exact decimal strings.
inline std::string pmf_to_csv(const ExactDistribution& dist) {
    std::ostringstream out;
    out << "value,probability\n";
    for (std::size_t i = 0; i < dist.size(); ++i)
        if (dist.probs()[i] > 0.0)
            out << dist.value(i).to_decimal_string() << "," << format_full(dist.probs()[i]) << "\n";
    return out.str();
}

inline nlohmann::json to_json(const MomentSummary& ms) {
    nlohmann::json j;
    j["N"] = ms.N;
    j["n"] = ms.n;
    j["p"] = ms.p;
    j["gamma"] = ms.gamma;
    j["sigma2"] = ms.sigma2;
    j["alpha"] = {{"a20", ms.a20}, {"a02", ms.a02}, {"a30", ms.a30}, {"a21", ms.a21},
                  {"a03", ms.a03}, {"a40", ms.a40}, {"a31", ms.a31}, {"a22", ms.a22},
                  {"a04", ms.a04}, {"a20_2", ms.a20_2}};
    j["lambda1"] = ms.lambda1;
    j["lambda2"] = ms.lambda2;
    j["sum_z2"] = ms.sum_z2;
    j["sum_z3"] = ms.sum_z3;
    j["sum_z4"] = ms.sum_z4;
    j["sum_z2_sq"] = ms.sum_z2_sq;
    j["sum_z2xi"] = ms.sum_z2xi;
    j["sum_z3_sq"] = ms.sum_z3_sq;
    j["V"] = {ms.V[1], ms.V[2], ms.V[3], ms.V[4], ms.V[5]};
    return j;
}

inline nlohmann::json to_json(const RatioSummary& rs) {
    nlohmann::json j;
    j["delta"] = rs.delta;
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : rs.entries) {
        entries.push_back({{"k", e.k},
                           {"beta", e.beta},
                           {"beta1", e.beta1},
                           {"beta2", e.beta2},
                           {"beta_hat", e.beta_hat},
                           {"mu", e.mu},
                           {"kappa", e.kappa}});
    }
    j["orders"] = entries;
    j["T"] = {rs.T[1], rs.T[2], rs.T[3]};
    j["T_alt"] = {rs.T_alt[1], rs.T_alt[2], rs.T_alt[3]};
    j["T_tilde"] = {rs.T_tilde[1], rs.T_tilde[2], rs.T_tilde[3]};
    return j;
}

inline nlohmann::json to_json(const RateBundle& rb) {
    return {{"j", rb.j},           {"delta", rb.delta},
            {"k", rb.k},           {"beta_rate", rb.beta_rate},
            {"beta_hat_rate", rb.beta_hat_rate}, {"mu_rate", rb.mu_rate},
            {"chi_d0", rb.chi_d0}, {"chi_d1_beta", rb.chi_d1_beta},
            {"chi_d1_hat", rb.chi_d1_hat}, {"chi_beta", rb.chi_beta},
            {"chi_hat", rb.chi_hat}};
}

inline nlohmann::json to_json(const DiagnosticsReport& rep) {
    nlohmann::json j;
    j["N"] = rep.N;
    j["n"] = rep.n;
    j["delta"] = rep.delta;
    j["gamma"] = rep.gamma;
    j["sigma2"] = rep.sigma2;
    j["delta_j"] = {rep.delta_j[1], rep.delta_j[2], rep.delta_j[3]};
    j["chf_error"] = {rep.chf_error[1], rep.chf_error[2], rep.chf_error[3]};
    nlohmann::json lind = nlohmann::json::array();
    for (auto [eps, val] : rep.lindeberg_curve) lind.push_back({{"eps", eps}, {"l2n", val}});
    j["lindeberg"] = lind;
    nlohmann::json rates = nlohmann::json::array();
    for (const auto& rb : rep.rates) rates.push_back(to_json(rb));
    j["rates"] = rates;
    j["T"] = {rep.T[1], rep.T[2], rep.T[3]};
    j["T_tilde"] = {rep.T_tilde[1], rep.T_tilde[2], rep.T_tilde[3]};
    j["moment_residuals"] = {{"m3_exact", rep.moments.m3_exact},
                             {"m4_exact", rep.moments.m4_exact},
                             {"r3", rep.moments.r3},
                             {"r4", rep.moments.r4}};
    j["chi"] = {{"chi1", rep.chi.chi1},
                {"chi2", rep.chi.chi2},
                {"chi_min", rep.chi.chi_min},
                {"sup_mean_abs", rep.chi.sup_mean_abs},
                {"sup_abs_mean", rep.chi.sup_abs_mean}};
    nlohmann::json tails = nlohmann::json::array();
    for (const auto& row : rep.tail_table)
        tails.push_back({{"x", row[0]}, {"exact_ratio", row[1]}, {"approx_ratio", row[2]},
                         {"plain_normal_error", row[3]}});
    j["tail_table"] = tails;
    return j;
}

/// Deterministic 64-bit FNV-1a, used for the config hash embedded in reports.
inline std::uint64_t fnv1a(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL) {
    std::uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace fpsum
