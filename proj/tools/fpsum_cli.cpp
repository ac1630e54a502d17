// fpsum: batch front-end for finite-population sample-sum approximation.
//
// Reads a population spec (JSON), runs one of the subcommands and writes a
// deterministic JSON or CSV report to stdout or --out.  Exit codes:
//   0  success
//   2  parse/config error (bad JSON, bad grid, bad flags)
//   3  domain error (zero variance, n = N where q > 0 is needed, non-score
//      population passed to a score-only path, zero spread)
//   4  resource error (DP budget, enumeration cap, quadrature failure)

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fpsum/fpsum.hpp"
#include "fpsum/io.hpp"

namespace {

using namespace fpsum;

struct RunConfig {
    std::string pop_path;
    std::string cmd;
    int order = 3;
    double delta = 1.0;
    std::uint64_t seed = 0;
    std::uint64_t mc_count = 100000;
    std::string grid = "-4:4:0.25";
    std::string t_grid;
    std::string format = "json";
    std::string out_path;
};

std::vector<double> parse_grid(const std::string& spec) {
    double a = 0.0, b = 0.0, step = 0.0;
    char extra = 0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%lf%c", &a, &b, &step, &extra) != 3)
        throw ParseError("grid must be 'a:b:step', got '" + spec + "'");
    if (!(step > 0.0) || b < a) throw ParseError("grid needs step > 0 and b >= a: '" + spec + "'");
    std::vector<double> grid;
    for (double x = a; x <= b + 1e-12 * (1.0 + std::abs(b)); x += step) grid.push_back(x);
    if (grid.empty()) throw ParseError("grid is empty: '" + spec + "'");
    return grid;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open population file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string hash_string(const RunConfig& cfg, const std::string& pop_bytes) {
    std::string canon = cfg.cmd + "|" + std::to_string(cfg.order) + "|" + format_full(cfg.delta) +
                        "|" + cfg.grid + "|" + cfg.t_grid + "|" + cfg.format;
    if (cfg.cmd == "mc")
        canon += "|seed=" + std::to_string(cfg.seed) + "|count=" + std::to_string(cfg.mc_count);
    std::uint64_t h = fnv1a(canon, fnv1a(pop_bytes));
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

nlohmann::json report_head(const RunConfig& cfg, const std::string& hash) {
    nlohmann::json j;
    j["library"] = kLibraryName;
    j["version"] = kLibraryVersion;
    j["schema_version"] = 1;
    j["config_hash"] = hash;
    j["command"] = cfg.cmd;
    return j;
}

std::string csv_head(const std::string& hash) {
    return std::string("# ") + kLibraryName + " " + kLibraryVersion + " config=" + hash + "\n";
}

void emit(const RunConfig& cfg, const std::string& text) {
    if (cfg.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(cfg.out_path, std::ios::binary);
    if (!out) throw ParseError("cannot open output file: " + cfg.out_path);
    out << text;
}

int run(const RunConfig& cfg) {
    const std::string pop_bytes = read_file(cfg.pop_path);
    const std::string hash = hash_string(cfg, pop_bytes);
    PopulationSpec spec = [&] {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(pop_bytes);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("malformed population JSON: ") + e.what());
        }
        return population_from_json(j);
    }();
    Population& pop = spec.population;
    Design design(spec.n, pop.size());

    if (cfg.cmd == "moments") {
        MomentSummary ms = moment_summary(pop, design);
        RatioSummary rs = ratio_summary(pop, design, cfg.delta);
        if (cfg.format == "json") {
            nlohmann::json j = report_head(cfg, hash);
            j["moments"] = to_json(ms);
            j["ratios"] = to_json(rs);
            emit(cfg, j.dump(2) + "\n");
        } else {
            std::ostringstream out;
            out << csv_head(hash) << "key,value\n";
            out << "N," << ms.N << "\nn," << ms.n << "\n";
            out << "gamma," << format_full(ms.gamma) << "\nsigma2," << format_full(ms.sigma2) << "\n";
            out << "lambda1," << format_full(ms.lambda1) << "\nlambda2," << format_full(ms.lambda2) << "\n";
            out << "sum_z3," << format_full(ms.sum_z3) << "\n";
            for (const auto& e : rs.entries) {
                out << "beta_" << format_full(e.k) << "," << format_full(e.beta) << "\n";
                out << "beta_hat_" << format_full(e.k) << "," << format_full(e.beta_hat) << "\n";
                out << "mu_" << format_full(e.k) << "," << format_full(e.mu) << "\n";
            }
            for (int j = 1; j <= 3; ++j)
                out << "T_" << j << "," << format_full(rs.T[static_cast<std::size_t>(j)]) << "\n";
            emit(cfg, out.str());
        }
        return 0;
    }

    if (cfg.cmd == "approx") {
        std::vector<double> grid = parse_grid(cfg.grid);
        MomentSummary ms = moment_summary(pop, design);
        EdgeworthApproximant ea = cdf_approximant(ms, cfg.order);
        std::vector<double> tgrid;
        if (!cfg.t_grid.empty()) tgrid = parse_grid(cfg.t_grid);
        if (cfg.format == "json") {
            nlohmann::json j = report_head(cfg, hash);
            j["order"] = cfg.order;
            nlohmann::json rows = nlohmann::json::array();
            for (double u : grid) rows.push_back({{"u", u}, {"cdf", ea.cdf(u)}});
            j["cdf_table"] = rows;
            if (!tgrid.empty()) {
                nlohmann::json crows = nlohmann::json::array();
                for (double t : tgrid) {
                    Complex w = ea.chf(t);
                    crows.push_back({{"t", t}, {"re", w.real()}, {"im", w.imag()}});
                }
                j["chf_table"] = crows;
            }
            emit(cfg, j.dump(2) + "\n");
        } else {
            std::ostringstream out;
            out << csv_head(hash) << "u,cdf_W" << cfg.order << "\n";
            for (double u : grid) out << format_full(u) << "," << format_full(ea.cdf(u)) << "\n";
            if (!tgrid.empty()) {
                out << "t,re_W" << cfg.order << ",im_W" << cfg.order << "\n";
                for (double t : tgrid) {
                    Complex w = ea.chf(t);
                    out << format_full(t) << "," << format_full(w.real()) << ","
                        << format_full(w.imag()) << "\n";
                }
            }
            emit(cfg, out.str());
        }
        return 0;
    }

    if (cfg.cmd == "chf") {
        std::vector<double> grid = parse_grid(cfg.grid);
        MomentSummary ms = moment_summary(pop, design);
        ChfEvaluator chf(pop, design);
        EdgeworthApproximant ea = chf_approximant(ms, cfg.order);
        if (cfg.format == "json") {
            nlohmann::json j = report_head(cfg, hash);
            j["order"] = cfg.order;
            nlohmann::json rows = nlohmann::json::array();
            for (double t : grid) {
                Complex phi = chf.phi_n(t);
                Complex w = ea.chf(t);
                rows.push_back({{"t", t},
                                {"re_phi", phi.real()},
                                {"im_phi", phi.imag()},
                                {"re_w", w.real()},
                                {"im_w", w.imag()},
                                {"abs_err", std::abs(phi - w)}});
            }
            j["table"] = rows;
            emit(cfg, j.dump(2) + "\n");
        } else {
            std::ostringstream out;
            out << csv_head(hash) << "t,re_phi,im_phi,re_W" << cfg.order << ",im_W" << cfg.order
                << ",abs_err\n";
            for (double t : grid) {
                Complex phi = chf.phi_n(t);
                Complex w = ea.chf(t);
                out << format_full(t) << "," << format_full(phi.real()) << ","
                    << format_full(phi.imag()) << "," << format_full(w.real()) << ","
                    << format_full(w.imag()) << "," << format_full(std::abs(phi - w)) << "\n";
            }
            emit(cfg, out.str());
        }
        return 0;
    }

    if (cfg.cmd == "exact") {
        ExactDistribution dist = exact_distribution(pop, design);
        if (cfg.format == "json") {
            nlohmann::json j = report_head(cfg, hash);
            nlohmann::json rows = nlohmann::json::array();
            for (std::size_t i = 0; i < dist.size(); ++i)
                if (dist.probs()[i] > 0.0)
                    rows.push_back({{"value", dist.value(i).to_decimal_string()},
                                    {"probability", dist.probs()[i]}});
            j["pmf"] = rows;
            j["mean"] = dist.mean();
            j["variance"] = dist.central_moment(2);
            emit(cfg, j.dump(2) + "\n");
        } else {
            emit(cfg, csv_head(hash) + pmf_to_csv(dist));
        }
        return 0;
    }

    if (cfg.cmd == "mc") {
        auto samples = sample_srswor(pop, design, cfg.mc_count, cfg.seed);
        double mean = 0.0;
        for (double s : samples) mean += s;
        mean /= static_cast<double>(samples.size());
        double var = 0.0;
        for (double s : samples) var += (s - mean) * (s - mean);
        var /= static_cast<double>(samples.size());
        std::optional<double> sup;
        try {
            ExactDistribution dist = exact_distribution(pop, design);
            sup = ecdf_sup_distance(samples, dist);
        } catch (const BudgetExceeded&) {
            // exact comparison skipped; summary statistics still reported
        }
        double band = std::sqrt(std::log(2.0 / 0.01) / (2.0 * static_cast<double>(samples.size())));
        if (cfg.format == "json") {
            nlohmann::json j = report_head(cfg, hash);
            j["count"] = cfg.mc_count;
            j["seed"] = cfg.seed;
            j["mean"] = mean;
            j["variance"] = var;
            j["dkw_band_99"] = band;
            if (sup) j["ecdf_sup_distance"] = *sup;
            emit(cfg, j.dump(2) + "\n");
        } else {
            std::ostringstream out;
            out << csv_head(hash) << "key,value\n";
            out << "count," << cfg.mc_count << "\nseed," << cfg.seed << "\n";
            out << "mean," << format_full(mean) << "\nvariance," << format_full(var) << "\n";
            out << "dkw_band_99," << format_full(band) << "\n";
            if (sup) out << "ecdf_sup_distance," << format_full(*sup) << "\n";
            emit(cfg, out.str());
        }
        return 0;
    }

    if (cfg.cmd == "tail") {
        std::vector<double> grid = parse_grid(cfg.grid);
        MomentSummary ms = moment_summary(pop, design);
        TailRatioModel model(ld_coefficients_general(ms), ms.N);
        std::optional<ExactDistribution> dist;
        try {
            dist = exact_distribution(pop, design);
        } catch (const BudgetExceeded&) {
        }
        double center = design.n * ms.gamma, scale = ms.sigma_sqrt_n();
        auto rows = nlohmann::json::array();
        std::ostringstream out;
        out << csv_head(hash)
            << "x,upper_approx,lower_approx,upper_exact,lower_exact,range_warning\n";
        for (double x : grid) {
            if (x < 0.0) continue;
            TailRatioValue up = model.ratio(x, TailSide::Upper);
            TailRatioValue lo = model.ratio(x, TailSide::Lower);
            double upper_exact = std::numeric_limits<double>::quiet_NaN();
            double lower_exact = std::numeric_limits<double>::quiet_NaN();
            if (dist) {
                upper_exact = (1.0 - dist->cdf_left(x * scale + center)) / std_normal_sf(x);
                lower_exact = dist->cdf_left(-x * scale + center) / std_normal_cdf(-x);
            }
            rows.push_back({{"x", x},
                            {"upper_approx", up.value},
                            {"lower_approx", lo.value},
                            {"upper_exact", upper_exact},
                            {"lower_exact", lower_exact},
                            {"range_warning", up.range_warning}});
            out << format_full(x) << "," << format_full(up.value) << "," << format_full(lo.value)
                << "," << format_full(upper_exact) << "," << format_full(lower_exact) << ","
                << (up.range_warning ? 1 : 0) << "\n";
        }
        if (cfg.format == "json") {
            nlohmann::json j = report_head(cfg, hash);
            j["l0"] = model.coefficients().l0;
            j["l1"] = model.coefficients().l1;
            j["table"] = rows;
            emit(cfg, j.dump(2) + "\n");
        } else {
            emit(cfg, out.str());
        }
        return 0;
    }

    if (cfg.cmd == "compare") {
        DiagnosticsOptions opt;
        opt.delta = cfg.delta;
        DiagnosticsReport rep = build_diagnostics(pop, design, opt);
        if (cfg.format == "json") {
            nlohmann::json j = report_head(cfg, hash);
            j["report"] = to_json(rep);
            emit(cfg, j.dump(2) + "\n");
        } else {
            std::ostringstream out;
            out << csv_head(hash)
                << "N,n,j,delta_j,chf_error,beta_rate,beta_hat_rate,mu_rate,T,T_tilde\n";
            for (int j = 1; j <= 3; ++j) {
                const RateBundle& rb = rep.rates[static_cast<std::size_t>(j - 1)];
                out << rep.N << "," << rep.n << "," << j << ","
                    << format_full(rep.delta_j[static_cast<std::size_t>(j)]) << ","
                    << format_full(rep.chf_error[static_cast<std::size_t>(j)]) << ","
                    << format_full(rb.beta_rate) << "," << format_full(rb.beta_hat_rate) << ","
                    << format_full(rb.mu_rate) << ","
                    << format_full(rep.T[static_cast<std::size_t>(j)]) << ","
                    << format_full(rep.T_tilde[static_cast<std::size_t>(j)]) << "\n";
            }
            emit(cfg, out.str());
        }
        return 0;
    }

    throw ParseError("unknown command: " + cfg.cmd);
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    CLI::App app{
        "fpsum: normal/Edgeworth approximations, Berry-Esseen rate diagnostics and\n"
        "Cramer-type tail ratios for a sample sum drawn without replacement from a\n"
        "finite population of independent lattice random elements.\n"};
    app.footer(
        "CSV column reference:\n"
        "  moments: key,value rows (gamma, sigma2, lambda1, lambda2, beta_k, mu_k, T_j ...)\n"
        "  approx:  u,cdf_Wj             (CDF approximant on the u grid)\n"
        "  chf:     t,re_phi,im_phi,re_Wj,im_Wj,abs_err\n"
        "  exact:   value,probability    (exact pmf, decimal-string values)\n"
        "  mc:      key,value rows (count, seed, mean, variance, dkw_band_99, ...)\n"
        "  tail:    x,upper_approx,lower_approx,upper_exact,lower_exact,range_warning\n"
        "  compare: N,n,j,delta_j,chf_error,beta_rate,beta_hat_rate,mu_rate,T,T_tilde\n"
        "Every report embeds the library version and a config hash.");
    app.add_option("--pop", cfg.pop_path, "population spec file (JSON)")->required();
    app.add_option("--cmd", cfg.cmd, "one of moments|approx|chf|exact|mc|tail|compare")
        ->required()
        ->check(CLI::IsMember({"moments", "approx", "chf", "exact", "mc", "tail", "compare"}));
    app.add_option("--order", cfg.order, "expansion order j (1..3)")->check(CLI::Range(1, 3));
    app.add_option("--delta", cfg.delta, "moment exponent delta in (0,1]");
    app.add_option("--seed", cfg.seed, "Monte Carlo seed");
    app.add_option("--mc-count", cfg.mc_count, "Monte Carlo sample count");
    app.add_option("--grid", cfg.grid, "evaluation grid 'a:b:step' (u, t or x per command)");
    app.add_option("--t-grid", cfg.t_grid, "optional ch.f. grid for approx");
    app.add_option("--format", cfg.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", cfg.out_path, "output path (default stdout)");
    app.set_version_flag("--version", std::string(kLibraryName) + " " + kLibraryVersion);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (!(cfg.delta > 0.0 && cfg.delta <= 1.0)) throw ParseError("delta must lie in (0,1]");
        return run(cfg);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const RationalOverflow& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ZeroVariance& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const DegenerateDesign& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const NotScorePopulation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ZeroSpread& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const BudgetExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const TooLarge& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const CombinatorialOverflow& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const QuadratureFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
