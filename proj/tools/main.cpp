#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <thread>

#include "hrb/audit.hpp"
#include "hrb/csv.hpp"
#include "hrb/lab.hpp"
#include "hrb/probe.hpp"
#include "hrb/rng.hpp"
#include "hrb/weights.hpp"

namespace {

constexpr const char* kVersion = "hrb 0.1.0";

struct RunConfig {
    long ell = 1;
    double p = 2.0;
    std::string family = "sw";
    double lambda = 0.0;
    long n_max = 100;
    long trials = 1000;
    unsigned long long seed = 1234;
    std::vector<long> N_list = {32, 64, 128, 256, 512};
    std::string precision = "standard";
    std::string out;
    std::string format = "csv";
    int threads = 0;
    double epsilon = 0.25;
    long K = 4;
    double inflate = 1.0;
    std::string kind = "criticality";

    bool ell_set = false, p_set = false;  // scan uses defaults grids otherwise

    int digits() const { return precision == "extended" ? 32 : 17; }
    hrb::PrecisionCtx ctx() const {
        return hrb::parse_mode(precision) == hrb::Mode::extended
                   ? hrb::PrecisionCtx::extended()
                   : hrb::PrecisionCtx::standard();
    }
    int n_threads() const {
        if (threads > 0) return threads;
        unsigned hw = std::thread::hardware_concurrency();
        return hw ? static_cast<int>(hw) : 1;
    }
};

void load_config_file(const std::string& path, RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    nlohmann::json j;
    in >> j;
    if (!j.is_object()) throw std::invalid_argument("config must be a flat JSON object");
    for (auto& [key, val] : j.items()) {
        if (key == "ell") { cfg.ell = val.get<long>(); cfg.ell_set = true; }
        else if (key == "p") { cfg.p = val.get<double>(); cfg.p_set = true; }
        else if (key == "family") cfg.family = val.get<std::string>();
        else if (key == "lambda") cfg.lambda = val.get<double>();
        else if (key == "n_max") cfg.n_max = val.get<long>();
        else if (key == "trials") cfg.trials = val.get<long>();
        else if (key == "seed") cfg.seed = val.get<unsigned long long>();
        else if (key == "N_list") cfg.N_list = val.get<std::vector<long>>();
        else if (key == "precision") cfg.precision = val.get<std::string>();
        else if (key == "out") cfg.out = val.get<std::string>();
        else if (key == "format") cfg.format = val.get<std::string>();
        else if (key == "threads") cfg.threads = val.get<int>();
        else if (key == "epsilon") cfg.epsilon = val.get<double>();
        else if (key == "K") cfg.K = val.get<long>();
        else if (key == "inflate") cfg.inflate = val.get<double>();
        else if (key == "kind") cfg.kind = val.get<std::string>();
        else throw std::invalid_argument("unknown config key: " + key);
    }
}

void add_common_flags(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--ell", cfg.ell, "difference order ell >= 1")
        ->each([&](const std::string&) { cfg.ell_set = true; });
    cmd->add_option("--p", cfg.p, "exponent p > 1")
        ->each([&](const std::string&) { cfg.p_set = true; });
    cmd->add_option("--family", cfg.family, "weight family");
    cmd->add_option("--lambda", cfg.lambda, "lambda (lambda_family only)");
    cmd->add_option("--n-max", cfg.n_max, "largest index n");
    cmd->add_option("--trials", cfg.trials, "number of random trials");
    cmd->add_option("--seed", cfg.seed, "RNG seed");
    cmd->add_option("--N-list", cfg.N_list, "cutoff sizes for sweeps");
    cmd->add_option("--precision", cfg.precision, "standard|extended");
    cmd->add_option("--out", cfg.out, "output file (default stdout)");
    cmd->add_option("--format", cfg.format, "csv|json");
    cmd->add_option("--threads", cfg.threads, "worker threads (0 = hardware)");
    cmd->add_option("--epsilon", cfg.epsilon, "mollifier ramp margin");
    cmd->add_option("--K", cfg.K, "series depth");
    cmd->add_option("--kind", cfg.kind, "probe kind: criticality|optimality|p2_oracle");
    cmd->add_option("--inflate", cfg.inflate, "debug: multiply the weight by this factor");
}

std::vector<std::pair<std::string, std::string>> config_echo(const RunConfig& cfg) {
    std::ostringstream nl;
    for (size_t i = 0; i < cfg.N_list.size(); ++i)
        nl << (i ? " " : "") << cfg.N_list[i];
    return {
        {"ell", std::to_string(cfg.ell)},
        {"p", hrb::fmt_double(cfg.p)},
        {"family", cfg.family},
        {"lambda", hrb::fmt_double(cfg.lambda)},
        {"n_max", std::to_string(cfg.n_max)},
        {"trials", std::to_string(cfg.trials)},
        {"seed", std::to_string(cfg.seed)},
        {"N_list", nl.str()},
        {"precision", cfg.precision},
        {"format", cfg.format},
        {"threads", std::to_string(cfg.threads)},
        {"epsilon", hrb::fmt_double(cfg.epsilon)},
        {"K", std::to_string(cfg.K)},
        {"inflate", hrb::fmt_double(cfg.inflate)},
        {"kind", cfg.kind},
    };
}

/// Table rows plus column names; rendered as CSV or JSON with the resolved
/// config embedded either way.
struct Report {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

void emit(const RunConfig& cfg, const Report& rep) {
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!cfg.out.empty()) {
        file.open(cfg.out);
        if (!file) throw std::runtime_error("cannot open output file: " + cfg.out);
        os = &file;
    }
    if (cfg.format == "json") {
        nlohmann::json j;
        j["version"] = kVersion;
        for (auto& [k, v] : config_echo(cfg)) j["config"][k] = v;
        j["rows"] = nlohmann::json::array();
        for (const auto& row : rep.rows) {
            nlohmann::json r;
            for (size_t i = 0; i < rep.columns.size(); ++i) r[rep.columns[i]] = row[i];
            j["rows"].push_back(std::move(r));
        }
        *os << j.dump(2) << "\n";
        return;
    }
    if (cfg.format != "csv") throw std::invalid_argument("format must be csv or json");
    hrb::CsvWriter w(*os);
    w.comment(kVersion);
    for (auto& [k, v] : config_echo(cfg)) w.comment(k + "=" + v);
    w.header(rep.columns);
    for (const auto& row : rep.rows) w.row(row);
}

/// Deterministic parallel map over [0, count): chunks run on a pool, results
/// are merged in index order.
template <typename F>
void parallel_for_ordered(long count, int threads, F&& fn) {
    if (threads <= 1 || count <= 1) {
        for (long i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::future<void>> futs;
    std::atomic<long> next{0};
    // fn(i) must only touch slot i of preallocated outputs, so any schedule
    // yields identical results
    for (int t = 0; t < threads; ++t)
        futs.push_back(std::async(std::launch::async, [&] {
            for (long i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        }));
    for (auto& f : futs) f.get();
}

int cmd_weights(const RunConfig& cfg) {
    hrb::WeightSpec spec{hrb::parse_family(cfg.family), cfg.ell, cfg.p, cfg.lambda};
    spec.validate();
    hrb::PrecisionCtx ctx = cfg.ctx();
    Report rep;
    bool crossed = spec.family == hrb::Family::sw ||
                   spec.family == hrb::Family::sw_closed_p2 ||
                   spec.family == hrb::Family::sw_closed_hardy ||
                   spec.family == hrb::Family::kpp || spec.family == hrb::Family::fkp;
    rep.columns = {"n", "value"};
    if (crossed) rep.columns.push_back("cross_check");
    std::vector<std::vector<std::string>> rows(static_cast<size_t>(cfg.n_max - cfg.ell + 1));
    parallel_for_ordered(cfg.n_max - cfg.ell + 1, cfg.n_threads(), [&](long i) {
        long n = cfg.ell + i;
        double v = hrb::weight_value(spec, n, ctx);
        std::vector<std::string> row{std::to_string(n), hrb::fmt_double(v, cfg.digits())};
        if (crossed) {
            double alt;
            switch (spec.family) {
                case hrb::Family::sw:
                    alt = hrb::rho_sw_gamma(cfg.ell, cfg.p, n, ctx);
                    break;
                case hrb::Family::kpp:
                case hrb::Family::fkp:
                    alt = hrb::rho_tilde_dd(1, cfg.p, n).to_double();
                    break;
                default:
                    alt = hrb::rho_sw_product(cfg.ell, cfg.p, n, ctx);
                    break;
            }
            row.push_back(hrb::fmt_double(alt, cfg.digits()));
        }
        rows[static_cast<size_t>(i)] = std::move(row);
    });
    rep.rows = std::move(rows);
    emit(cfg, rep);
    return 0;
}

int cmd_verify(const RunConfig& cfg) {
    if (cfg.trials < 1) throw std::invalid_argument("verify: trials must be >= 1");
    hrb::Family fam = hrb::parse_family(cfg.family);
    hrb::CorpusSummary sum = hrb::run_corpus(cfg.ell, cfg.p, fam, cfg.trials, cfg.seed,
                                             cfg.ctx(), 50, cfg.inflate);
    Report rep;
    rep.columns = {"trial", "ell", "p", "family", "lhs", "rhs", "gap", "sum_Rq", "sum_Rp"};
    for (const auto& r : sum.rows)
        rep.rows.push_back({std::to_string(r.trial), std::to_string(r.ell),
                            hrb::fmt_double(r.p), hrb::family_name(r.family),
                            hrb::fmt_double(r.lhs, cfg.digits()),
                            hrb::fmt_double(r.rhs, cfg.digits()),
                            hrb::fmt_double(r.gap, cfg.digits()),
                            hrb::fmt_double(r.sum_Rq, cfg.digits()),
                            hrb::fmt_double(r.sum_Rp, cfg.digits())});
    emit(cfg, rep);

    long violations = sum.violations;
    for (const auto& r : sum.rows) {
        if (r.violation)
            std::cerr << "violation: trial " << r.trial << " seed " << cfg.seed
                      << " ell " << r.ell << " p " << r.p << " gap " << r.gap << "\n";
    }
    if (cfg.inflate > 1.0) {
        // violation search beyond the random corpus: delta sequences and
        // truncated parameter-sequence profiles see the inflated weight first
        hrb::WeightSpec spec{fam, cfg.ell, cfg.p,
                             fam == hrb::Family::lambda_family ? cfg.lambda : 0.0};
        spec.validate();
        hrb::PrecisionCtx ctx = cfg.ctx();
        for (long n = cfg.ell; n <= cfg.ell + 200; ++n) {
            double gap = hrb::functional_gap(hrb::LatticeSeq::delta(n), cfg.ell, cfg.p,
                                             spec, ctx);
            // delta gap with inflated weight: lhs - inflate * rhs
            double lhs = hrb::lp_energy(hrb::LatticeSeq::delta(n), cfg.ell, cfg.p);
            double rhs = (lhs - gap) * cfg.inflate;
            if (lhs - rhs < -1e-10 * lhs) {
                std::cerr << "violation: delta sequence at n=" << n << "\n";
                ++violations;
            }
        }
        for (long N : {4L, 8L, 16L, 32L, 64L, 128L, 256L, 512L}) {
            hrb::LatticeSeq u = hrb::build_uN(cfg.ell, cfg.p, {hrb::CutoffKind::truncation, N, cfg.epsilon});
            double lhs = hrb::lp_energy(u, cfg.ell, cfg.p);
            double rhs = cfg.inflate *
                         hrb::weighted_lp_sum(u, cfg.ell, cfg.p, [&](long n) {
                             return hrb::weight_value(spec, n, ctx);
                         });
            if (lhs - rhs < -1e-10 * lhs) {
                std::cerr << "violation: truncated profile at N=" << N << "\n";
                ++violations;
            }
        }
    }
    std::cerr << "min gap/lhs " << sum.min_gap_rel << ", violations " << violations;
    if (fam == hrb::Family::sw)
        std::cerr << ", ratio gap/sum_Rq max " << sum.ratio_low_max
                  << ", gap/sum_Rp min " << sum.ratio_high_min;
    std::cerr << "\n";
    return violations == 0 ? 0 : 1;
}

int cmd_audit(const RunConfig& cfg) {
    hrb::Family fam = hrb::parse_family(cfg.family);
    long hi = std::max(cfg.n_max, cfg.ell + 10);
    hrb::SeqOracle oracle;
    if (fam == hrb::Family::sw)
        oracle = hrb::make_g_oracle_cached(cfg.ell, cfg.p, hi + 2 * cfg.ell + 2);
    else if (fam == hrb::Family::sw_tilde)
        oracle = hrb::make_g_tilde_oracle(cfg.ell, cfg.p);
    else
        throw std::invalid_argument("audit: family must be sw or sw_tilde");

    auto reports = hrb::check_A1_A2_A3(oracle, cfg.ell, hi, true);
    // A4 probes a fixed geometric ladder well past n_max; use the unbounded
    // evaluator, not the window cache
    std::function<hrb::DDouble(long)> gfun =
        fam == hrb::Family::sw
            ? std::function<hrb::DDouble(long)>(
                  [&](long n) { return hrb::g_seq_dd(cfg.ell, cfg.p, n); })
            : std::function<hrb::DDouble(long)>(
                  [&](long n) { return hrb::g_tilde_seq_dd(cfg.ell, cfg.p, n); });
    hrb::A4Fit a4 = hrb::check_A4(gfun, cfg.ell, cfg.p);

    Report rep;
    rep.columns = {"ell", "p", "assumption_or_item", "window_lo", "window_hi",
                   "passed", "first_violation_n", "min_margin"};
    bool all_ok = true;
    for (const auto& r : reports) {
        all_ok = all_ok && r.passed;
        rep.rows.push_back(
            {std::to_string(cfg.ell), hrb::fmt_double(cfg.p), r.item,
             std::to_string(r.n_lo), std::to_string(r.n_hi),
             r.passed ? "1" : "0",
             r.first_violation ? std::to_string(r.first_violation->second) : "",
             hrb::fmt_double(r.min_margin, cfg.digits())});
    }
    all_ok = all_ok && a4.passed;
    rep.rows.push_back({std::to_string(cfg.ell), hrb::fmt_double(cfg.p),
                        "A4_fit (" + a4.note + ")", "16", "2048",
                        a4.passed ? "1" : "0", "",
                        hrb::fmt_double(a4.residual_order, cfg.digits())});
    emit(cfg, rep);
    return all_ok ? 0 : 1;
}

int cmd_probe(const RunConfig& cfg) {
    Report rep;
    rep.columns = {"N", "remainder_total", "denominator", "rayleigh_quotient",
                   "fitted_rate"};
    bool ok = true;
    if (cfg.kind == "criticality" || cfg.kind == "optimality") {
        hrb::SweepResult res =
            cfg.kind == "criticality"
                ? hrb::criticality_sweep(cfg.ell, cfg.p, cfg.N_list, cfg.epsilon)
                : hrb::optimality_sweep(cfg.ell, cfg.p, cfg.N_list, cfg.epsilon);
        for (const auto& r : res.records) {
            rep.rows.push_back({std::to_string(r.N),
                                hrb::fmt_double(r.remainder, cfg.digits()),
                                hrb::fmt_double(r.rhs, cfg.digits()),
                                hrb::fmt_double(r.quotient, cfg.digits()),
                                hrb::fmt_double(res.fitted_rate, cfg.digits())});
            if (r.quotient < 1.0 - 1e-9) ok = false;
        }
        if (res.inconclusive)
            std::cerr << "inconclusive: p close to 1, decay not resolvable at this scale\n";
    } else if (cfg.kind == "p2_oracle") {
        hrb::WeightSpec spec{hrb::parse_family(cfg.family), cfg.ell, cfg.p, cfg.lambda};
        spec.validate();
        double prev = std::numeric_limits<double>::infinity();
        for (long M : cfg.N_list) {
            double lam = hrb::p2_quotient_oracle(cfg.ell, spec, cfg.ell, M,
                                                 cfg.inflate, cfg.ctx());
            rep.rows.push_back({std::to_string(M), "", "",
                                hrb::fmt_double(lam, cfg.digits()), ""});
            if (lam < 1.0 - 1e-8 || lam > prev * (1.0 + 1e-10)) ok = false;
            prev = lam;
        }
    } else {
        throw std::invalid_argument("probe: kind must be criticality, optimality or p2_oracle");
    }
    emit(cfg, rep);
    return ok ? 0 : 1;
}

int cmd_scan(const RunConfig& cfg) {
    std::vector<long> ells = cfg.ell_set ? std::vector<long>{cfg.ell}
                                         : std::vector<long>{1, 2, 3, 4};
    std::vector<double> ps = cfg.p_set ? std::vector<double>{cfg.p}
                                       : std::vector<double>{1.5, 2.0, 3.0};
    // parallel over (ell, p) cells, merged in cell order
    std::vector<std::vector<hrb::ScanRow>> cells(ells.size() * ps.size());
    parallel_for_ordered(static_cast<long>(cells.size()), cfg.n_threads(), [&](long i) {
        long ell = ells[static_cast<size_t>(i) / ps.size()];
        double p = ps[static_cast<size_t>(i) % ps.size()];
        cells[static_cast<size_t>(i)] = hrb::conjecture_scan({ell}, {p}, cfg.n_max, cfg.K);
    });
    Report rep;
    rep.columns = {"ell", "p", "item", "passed", "margin", "note"};
    bool all_ok = true;
    for (const auto& cell : cells)
        for (const auto& r : cell) {
            all_ok = all_ok && r.passed;
            rep.rows.push_back({std::to_string(r.ell), hrb::fmt_double(r.p), r.item,
                                r.passed ? "1" : "0",
                                hrb::fmt_double(r.margin, cfg.digits()), r.note});
        }
    emit(cfg, rep);
    return all_ok ? 0 : 1;
}

int cmd_lemma(const RunConfig& cfg) {
    std::vector<double> ts;
    for (int i = 0; i <= 100; ++i) ts.push_back(i / 100.0);
    std::vector<hrb::cplx> zs;
    hrb::SplitMix64 rng(cfg.seed);
    for (long i = 0; i < std::max(1L, cfg.trials / 10); ++i)
        zs.push_back(hrb::cplx(rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)));
    hrb::LemmaProbeResult res = hrb::scalar_lemma_probe(cfg.p, ts, zs);
    Report rep;
    rep.columns = {"p", "grid_points", "min_M", "p2_identity_dev",
                   "ratio_ML_min", "ratio_ML_max", "ratio_MU_min", "ratio_MU_max",
                   "negative_ratio_found"};
    rep.rows.push_back({hrb::fmt_double(cfg.p), std::to_string(res.grid_points),
                        hrb::fmt_double(res.min_M, cfg.digits()),
                        hrb::fmt_double(res.max_p2_identity_dev, cfg.digits()),
                        hrb::fmt_double(res.ratio_ML_min, cfg.digits()),
                        hrb::fmt_double(res.ratio_ML_max, cfg.digits()),
                        hrb::fmt_double(res.ratio_MU_min, cfg.digits()),
                        hrb::fmt_double(res.ratio_MU_max, cfg.digits()),
                        res.negative_ratio_found ? "1" : "0"});
    emit(cfg, rep);
    bool ok = res.min_M >= -1e-12 && !res.negative_ratio_found;
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    // --config is resolved before flag parsing so flags override file keys
    for (int i = 1; i < argc - 1; ++i) {
        if (std::string(argv[i]) == "--config") {
            try {
                load_config_file(argv[i + 1], cfg);
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
                return 2;
            }
        }
    }

    CLI::App app{"discrete weighted-inequality workbench"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file (flags override)");

    auto* weights = app.add_subcommand("weights", "weight value tables");
    auto* verify = app.add_subcommand("verify", "randomized inequality corpus");
    auto* audit = app.add_subcommand("audit", "assumption audits");
    auto* probe = app.add_subcommand("probe", "cutoff/bump sweeps and the p=2 oracle");
    auto* scan = app.add_subcommand("scan", "conjecture evidence scan");
    auto* lemma = app.add_subcommand("lemma", "scalar lemma explorer");
    for (auto* cmd : {weights, verify, audit, probe, scan, lemma}) {
        add_common_flags(cmd, cfg);
        cmd->add_option("--config", config_path, "JSON config file (flags override)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (weights->parsed()) return cmd_weights(cfg);
        if (verify->parsed()) return cmd_verify(cfg);
        if (audit->parsed()) return cmd_audit(cfg);
        if (probe->parsed()) return cmd_probe(cfg);
        if (scan->parsed()) return cmd_scan(cfg);
        if (lemma->parsed()) return cmd_lemma(cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
