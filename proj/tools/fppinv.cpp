#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "fppinv/parallel.hpp"
#include "fppinv/theorem.hpp"

using namespace fppinv;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ModelArgs {
    std::string family;
    double theta = 1.0;
    double kappa = 1.0;
    std::string atoms;

    WeightModel build() const {
        if (family == "atoms") {
            std::vector<std::pair<double, double>> list;
            std::stringstream ss(atoms);
            for (std::string item; std::getline(ss, item, ',');) {
                const auto colon = item.find(':');
                if (colon == std::string::npos) throw UsageError("--atoms expects value:mass pairs, e.g. 0:0.5,1:0.5");
                list.emplace_back(std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1)));
            }
            return WeightModel::atoms(list);
        }
        return WeightModel::from_name(family, theta, kappa);
    }

    void add(CLI::App* app, bool required) {
        auto* f = app->add_option("--family", family, "halfuniform | powertail | atom01 | atoms");
        if (required) f->required();
        app->add_option("--theta", theta, "halfuniform scale");
        app->add_option("--kappa", kappa, "powertail exponent");
        app->add_option("--atoms", atoms, "value:mass list for --family atoms");
    }

    json to_json() const { return {{"family", family}, {"theta", theta}, {"kappa", kappa}, {"atoms", atoms}}; }
};

struct QArgs {
    std::string table;
    std::vector<double> inline_q;

    void add(CLI::App* app) {
        app->add_option("--qtable", table, "CSV from the scaling subcommand, or k,q rows");
        app->add_option("--q", inline_q, "q_0,q_1,... given inline")->delimiter(',');
    }

    std::vector<double> load() const {
        if (!inline_q.empty()) return inline_q;
        if (table.empty()) return {};
        std::ifstream in(table);
        if (!in) throw UsageError("cannot open q table '" + table + "'");
        return read_q_table(in);
    }
};

struct Output {
    std::string path;
    std::ostringstream body;

    void add(CLI::App* app) { app->add_option("--out", path, "write CSV here instead of stdout"); }
};

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::ostringstream os;
    os << std::put_time(std::gmtime(&t), "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

void emit(const Output& out, json manifest, const std::vector<std::string>& argv,
          std::chrono::steady_clock::time_point start) {
    const std::string body = out.body.str();
    manifest["version"] = kVersion;
    manifest["generator"] = kGeneratorId;
    manifest["argv"] = argv;
    manifest["timestamp"] = utc_now();
    manifest["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream digest;
    digest << std::hex << std::setw(16) << std::setfill('0') << fnv1a(body);
    manifest["body_fnv1a64"] = digest.str();
    const std::string text = "# manifest: " + manifest.dump() + "\n" + body;
    if (out.path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out.path);
    if (!f) throw UsageError("cannot write '" + out.path + "'");
    f << text;
    std::ofstream(out.path + ".manifest.json") << manifest.dump(2) << '\n';
}

std::string fmt(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os << std::setprecision(10) << x;
    return os.str();
}

template <class... Ts>
void row(std::ostream& os, const Ts&... xs) {
    bool first = true;
    auto put = [&](const auto& x) {
        if (!first) os << ',';
        first = false;
        if constexpr (std::is_floating_point_v<std::decay_t<decltype(x)>>) os << fmt(x);
        else os << x;
    };
    (put(xs), ...);
    os << '\n';
}

int pow3(int k) {
    int s = 1;
    while (k-- > 0) s *= 3;
    return s;
}

int run(int argc, char** argv) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<std::string> args(argv + 1, argv + argc);

    CLI::App app{"Critical first-passage percolation coupled to invasion percolation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    std::uint64_t seed = 1;
    int jobs = 1;
    std::int64_t samples = 100;
    Output out;

    // scaling
    auto* sc = app.add_subcommand("scaling", "estimate q_k = p_{3^k}, and optionally L(p) and the four-arm products");
    ModelArgs sc_model;
    sc_model.add(sc, true);
    int kmax = 2;
    double eps = 0.05, tol = 0.005;
    int max_scale = 1024;
    std::vector<double> pgrid;
    std::int64_t pi4_samples = 2000;
    sc->add_option("--kmax", kmax, "largest k")->check(CLI::Range(0, 12));
    sc->add_option("--samples", samples, "base samples per probe (doubled up to 16x when undecided)");
    sc->add_option("--seed", seed);
    sc->add_option("--eps", eps, "crossing threshold 1 - eps")->check(CLI::Range(0.0, 1.0));
    sc->add_option("--tol", tol, "bisection tolerance in p");
    sc->add_option("--max-scale", max_scale, "cap on the L(p) search");
    sc->add_option("--pgrid", pgrid, "p values for L(p) and L^2 pi4(L) (p - 1/2)")->delimiter(',');
    sc->add_option("--pi4-samples", pi4_samples);
    sc->add_option("--jobs", jobs);
    out.add(sc);

    // gap
    auto* gp = app.add_subcommand("gap", "Monte Carlo E[T^inv - T] at each n");
    ModelArgs gp_model;
    gp_model.family = "atom01";
    gp_model.add(gp, false);
    QArgs gp_q;
    gp_q.add(gp);
    std::vector<int> ns;
    GapOptions gopt;
    double margin = 0.05;
    std::string per_sample;
    bool no_events = false;
    gp->add_option("--n", ns, "scales, e.g. 27,81")->delimiter(',')->required();
    gp->add_option("--samples", samples);
    gp->add_option("--seed", seed);
    gp->add_option("--K", gopt.K, "far boundary at K 3^{k+3}");
    gp->add_option("--jobs", jobs);
    gp->add_option("--box-factor", gopt.box_factor, "config box B(box_factor n)");
    gp->add_option("--enlarge", gopt.max_enlargements, "box doublings after a truncation");
    gp->add_option("--M", gopt.M, "stabilization touch radius (default 3n)");
    gp->add_option("--window", gopt.window, "stabilization window (default 4 |E(B(n))|)");
    gp->add_option("--margin", margin, "alpha = (1 - margin) beta r");
    gp->add_flag("--no-events", no_events, "skip E_k detection and circuit diagnostics");
    gp->add_option("--per-sample", per_sample, "also write one CSV row per sample here");
    out.add(gp);

    // event-a
    auto* ea = app.add_subcommand("event-a", "deterministic summable-case configuration with gap >= b");
    EventASpec espec;
    std::string table_out;
    ea->add_option("--a", espec.a);
    ea->add_option("--b", espec.b);
    ea->add_option("--r", espec.R, "R, a multiple of 10 with R >= 10 b / a");
    ea->add_option("--outer", espec.outer, "outer box radius (default 4R)");
    ea->add_option("--table", table_out, "dump the edge table here");
    out.add(ea);

    // ek
    auto* ek = app.add_subcommand("ek", "E_k detection frequency and gain bounds");
    ModelArgs ek_model;
    ek_model.family = "atom01";
    ek_model.add(ek, false);
    QArgs ek_q;
    ek_q.add(ek);
    std::vector<int> ks;
    int K = 3;
    std::int64_t max_edges = 60'000'000;
    ek->add_option("--k", ks, "k values, e.g. 0,1")->delimiter(',')->required();
    ek->add_option("--samples", samples);
    ek->add_option("--seed", seed);
    ek->add_option("--K", K);
    ek->add_option("--jobs", jobs);
    ek->add_option("--margin", margin);
    ek->add_option("--max-edges", max_edges, "refuse boxes with more edges than this");
    out.add(ek);

    // replay
    auto* rp = app.add_subcommand("replay", "re-run the command recorded in a manifest");
    std::string manifest_path;
    std::string replay_out;
    rp->add_option("manifest", manifest_path, "manifest JSON or CSV with a manifest line")->required();
    rp->add_option("--out", replay_out, "output path replacing the recorded one (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    if (samples < 1) throw UsageError("--samples must be at least 1");
    if (jobs < 1) throw UsageError("--jobs must be at least 1");

    if (*rp) {
        std::ifstream in(manifest_path);
        if (!in) throw UsageError("cannot open '" + manifest_path + "'");
        std::string first;
        std::getline(in, first);
        const std::string prefix = "# manifest: ";
        json m;
        if (first.rfind(prefix, 0) == 0) {
            m = json::parse(first.substr(prefix.size()));
        } else {
            in.seekg(0);
            m = json::parse(in);
        }
        std::vector<std::string> recorded = m.at("argv").get<std::vector<std::string>>();
        std::vector<std::string> again;
        for (std::size_t i = 0; i < recorded.size(); ++i) {
            if (recorded[i] == "--out") {
                ++i;
                continue;
            }
            if (recorded[i].rfind("--out=", 0) == 0) continue;
            again.push_back(recorded[i]);
        }
        if (!replay_out.empty()) {
            again.push_back("--out");
            again.push_back(replay_out);
        }
        std::vector<char*> ptrs{argv[0]};
        for (auto& s : again) ptrs.push_back(s.data());
        return run(int(ptrs.size()), ptrs.data());
    }

    if (*sc) {
        const WeightModel model = sc_model.build();
        SearchOptions opt;
        opt.epsilon = eps;
        opt.max_scale = max_scale;
        opt.base_samples = samples;
        opt.max_samples = 16 * samples;
        opt.jobs = jobs;
        auto& os = out.body;
        write_scaling_csv_header(os);
        const auto qs = q_sequence(kmax, seed, tol, opt);
        for (std::size_t k = 0; k < qs.size(); ++k) {
            std::int64_t used = 0;
            for (const auto& [p, L] : qs[k].probes)
                for (const auto& pr : L.probes) used += pr.freq.trials;
            write_csv_row(os, "q", qs[k].n, qs[k].p_hat, qs[k].p_hat, qs[k].lo, qs[k].hi, used, seed);
        }
        for (std::size_t k = 1; k < qs.size(); ++k) {
            const double x = model.inverse(qs[k].p_hat);
            write_csv_row(os, "Finv_q", qs[k].n, qs[k].p_hat, x, x, x, 0, seed);
        }
        if (!pgrid.empty()) {
            const auto rel = check_scaling_relation(pgrid, seed, pi4_samples, 10.0, opt);
            for (const auto& r : rel.rows) {
                const auto& last = r.L.probes.back().freq;
                write_csv_row(os, "L", r.L.resolved ? r.L.L : -1, r.p, r.L.resolved ? r.L.L : NAN,
                              r.L.bracket_lo, r.L.resolved ? r.L.L : NAN, last.trials, seed);
                if (!r.L.resolved) continue;
                write_csv_row(os, "pi4", r.L.L, 0.5, r.pi4.freq.estimate, r.pi4.freq.lo, r.pi4.freq.hi,
                              r.pi4.freq.trials, seed);
                write_csv_row(os, "L2_pi4_dp", r.L.L, r.p, r.product, r.product_lo, r.product_hi,
                              r.pi4.freq.trials, seed);
            }
        }
        json m = {{"subcommand", "scaling"}, {"model", sc_model.to_json()}, {"kmax", kmax}, {"samples", samples},
                  {"seed", seed}, {"eps", eps}, {"tol", tol}, {"max_scale", max_scale}, {"pgrid", pgrid},
                  {"pi4_samples", pi4_samples}, {"jobs", jobs}};
        emit(out, m, args, start);
        return 0;
    }

    if (*gp) {
        const WeightModel model = gp_model.build();
        const std::vector<double> q = gp_q.load();
        int need = -1;
        for (int n : ns) {
            if (n < 1) throw UsageError("--n values must be positive");
            if (!no_events) need = std::max(need, floor_log(n, 3) - 2);
        }
        if (int(q.size()) < need + 1 || (need >= 0 && q.size() < 2)) {
            throw UsageError("a q table reaching k = " + std::to_string(need) +
                             " is needed; run `fppinv scaling --family " + gp_model.family + " --kmax " +
                             std::to_string(std::max(need, 1)) + " --out q.csv` and pass --qtable q.csv");
        }
        AlphaBeta ab;
        if (need >= 0) ab = choose_alpha_beta(q, margin);
        gopt.samples = samples;
        gopt.seed = seed;
        gopt.jobs = jobs;
        gopt.detect_events = !no_events;

        auto& os = out.body;
        row(os, "n", "samples", "failures", "truncations", "T_mean", "T_lo", "T_hi", "Tinv_mean", "Tinv_lo",
            "Tinv_hi", "gap_mean", "gap_lo", "gap_hi", "S1", "S2", "gap_over_S2", "invariant_violations",
            "gain_failures", "seed");
        std::ofstream ps;
        if (!per_sample.empty()) {
            ps.open(per_sample);
            row(ps, "n", "index", "seed", "box_radius", "truncations", "T", "T_inv", "diff", "steps", "last_reentry",
                "events", "circuit_gaps", "decoupling_ok", "monotone_ok", "failed");
        }
        bool any_failed = false;
        json rows = json::array();
        for (int n : ns) {
            const GapEstimate est = estimate_gap(model, n, q, ab, gopt);
            any_failed = any_failed || est.failures > 0;
            row(os, n, est.samples.size(), est.failures, est.truncations, est.T.mean, est.T.lo, est.T.hi,
                est.T_inv.mean, est.T_inv.lo, est.T_inv.hi, est.diff.mean, est.diff.lo, est.diff.hi, est.sums.s1,
                est.sums.s2, est.diff.mean / est.sums.s2, est.invariant_violations, est.gain_failures, seed);
            for (const auto& s : est.samples) {
                if (!ps.is_open()) break;
                std::string ev, cg;
                for (std::size_t k = 0; k < s.event.size(); ++k) {
                    ev += (k ? ";" : "") + std::to_string(s.event[k]);
                    cg += (k ? ";" : "") + fmt(s.circuit_gap[k]);
                }
                row(ps, n, s.index, s.seed, s.box_radius, s.truncations, s.T, s.T_inv, s.diff, s.invasion_steps,
                    s.last_reentry, ev, cg, int(s.decoupling_ok), int(s.monotone_ok), int(s.failed));
            }
        }
        json m = {{"subcommand", "gap"},   {"model", gp_model.to_json()}, {"n", ns},
                  {"samples", samples},    {"seed", seed},                {"q", q},
                  {"alpha", ab.alpha},     {"beta", ab.beta},             {"K", gopt.K},
                  {"box_factor", gopt.box_factor}, {"max_enlargements", gopt.max_enlargements},
                  {"stop_rule", {{"kind", "stabilize"}, {"M", gopt.M}, {"window", gopt.window}}},
                  {"events", !no_events},  {"jobs", jobs}};
        emit(out, m, args, start);
        return any_failed ? 3 : 0;
    }

    if (*ea) {
        espec.validate();
        const WeightModel model = event_A_model(espec);
        const LatticeConfig cfg = build_event_A_config(espec);
        if (!table_out.empty()) {
            std::ofstream f(table_out);
            f << "# x1 y1 x2 y2 omega; model " << model.describe() << '\n';
            write_edge_table(f, cfg);
        }
        const EventAReport rep = verify_event_A(model, cfg, espec);
        auto& os = out.body;
        row(os, "n", "T", "T_inv", "gap", "gap_at_least_b");
        for (const auto& r : rep.rows) row(os, r.n, r.T, r.T_inv, r.gap, int(r.gap >= espec.b));
        os << "# gap >= b for all n: " << (rep.gap_at_least_b ? "pass" : "fail")
           << "; gap constant: " << (rep.gap_constant ? "yes" : "no") << "; invasion steps " << rep.invasion_steps
           << '\n';
        json m = {{"subcommand", "event-a"}, {"a", espec.a}, {"b", espec.b}, {"R", espec.R},
                  {"outer", espec.outer_radius()}, {"model", model.describe()},
                  {"stop_rule", {{"kind", "touch"}, {"M", espec.outer_radius()}}}};
        emit(out, m, args, start);
        return rep.gap_at_least_b ? 0 : 1;
    }

    if (*ek) {
        const WeightModel model = ek_model.build();
        const std::vector<double> q = ek_q.load();
        int kmax_needed = 0;
        for (int k : ks) {
            if (k < 0 || k > 12) throw UsageError("--k values must lie in [0, 12]");
            kmax_needed = std::max(kmax_needed, k + 1);
        }
        if (int(q.size()) < kmax_needed + 1) {
            throw UsageError("a q table reaching k = " + std::to_string(kmax_needed) +
                             " is needed; run `fppinv scaling --family " + ek_model.family + " --kmax " +
                             std::to_string(kmax_needed) + " --out q.csv` and pass --qtable q.csv");
        }
        const AlphaBeta ab = choose_alpha_beta(q, margin);
        auto& os = out.body;
        row(os, "k", "samples", "detected", "freq", "ci_lo", "ci_hi", "witness_ok", "truncated", "inv_bound_ok",
            "t_bound_ok", "in_G", "gain_ok", "alpha", "beta", "seed");
        bool truncated_any = false;
        for (int k : ks) {
            const EkSpec spec = EkSpec::make(k, q, ab, K);
            const int far = spec.far_radius();
            const std::int64_t edges = Grid(Box::centered(far)).num_edges();
            if (edges > max_edges) {
                throw UsageError("k = " + std::to_string(k) + " needs the box B(" + std::to_string(far) + ") with " +
                                 std::to_string(edges) + " edges, above --max-edges " + std::to_string(max_edges));
            }
            const std::uint64_t stream = scale_seed(seed ^ 0xE4E4E4E4ull, pow3(k));
            struct Tally {
                int detected = 0, ok = 0, truncated = 0, inv_ok = 0, t_ok = 0, in_G = 0, gain = 0;
            };
            std::vector<Tally> per(static_cast<std::size_t>(samples));
            parallel_for(samples, jobs, [&](std::int64_t i) {
                Tally& t = per[std::size_t(i)];
                const auto cfg = LatticeConfig::sample(Box::centered(far), sub_seed(stream, std::uint64_t(i)));
                const auto w = detect_E_k(cfg, spec);
                if (!w) return;
                t.detected = 1;
                t.ok = verify_witness(cfg, spec, *w).ok;
                const auto pair = circuit_pair(cfg, k);
                try {
                    const auto inv = invade(cfg, StopRule::touch(far));
                    if (pair) {
                        const auto g = check_gain_on_Ek(model, cfg, inv, spec, *pair);
                        t.inv_ok = g.inv_ok;
                        t.t_ok = g.t_ok;
                        t.in_G = g.in_G;
                        t.gain = g.in_G && g.gain_ok;
                    }
                } catch (const TruncationError&) {
                    t.truncated = 1;
                }
            });
            Tally sum;
            for (const auto& t : per) {
                sum.detected += t.detected;
                sum.ok += t.ok;
                sum.truncated += t.truncated;
                sum.inv_ok += t.inv_ok;
                sum.t_ok += t.t_ok;
                sum.in_G += t.in_G;
                sum.gain += t.gain;
            }
            truncated_any = truncated_any || sum.truncated > 0;
            const Proportion f = wilson(sum.detected, samples);
            row(os, k, samples, sum.detected, f.estimate, f.lo, f.hi, sum.ok, sum.truncated, sum.inv_ok, sum.t_ok,
                sum.in_G, sum.gain, ab.alpha, ab.beta, seed);
        }
        json m = {{"subcommand", "ek"}, {"model", ek_model.to_json()}, {"k", ks}, {"samples", samples},
                  {"seed", seed},       {"q", q},                     {"alpha", ab.alpha}, {"beta", ab.beta},
                  {"K", K},             {"jobs", jobs},
                  {"stop_rule", {{"kind", "touch"}, {"M", "K 3^{k+3}"}}}};
        emit(out, m, args, start);
        return truncated_any ? 3 : 0;
    }
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const TruncationError& e) {
        std::cerr << "truncated: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
