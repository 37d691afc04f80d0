#include "fppinv/theorem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fppinv/parallel.hpp"

namespace fppinv {

namespace {

void require_levels(const std::vector<double>& q) {
    if (q.size() < 2) throw DomainError("need at least two levels q_0, q_1");
    for (double v : q) {
        if (!(v > 0.5 && v <= 1.0)) throw DomainError("levels q_k must lie in (1/2, 1]");
    }
}

int pow3(int k) {
    int s = 1;
    for (int i = 0; i < k; ++i) s *= 3;
    return s;
}

bool in_good_set(double a, double b, bool strict) {
    if (a == 0.0 && b == 0.0) return true;
    return strict ? a < 2.0 * b : a <= 2.0 * b;
}

bool nondecreasing(const std::vector<std::optional<double>>& xs) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!xs[i]) return false;
        if (i > 0 && *xs[i] < *xs[i - 1]) return false;
    }
    return true;
}

}  // namespace

bool alpha_beta_valid(const std::vector<double>& q, double alpha, double beta) {
    if (!(alpha > 1.0) || !(beta > 0.0 && beta < 1.0)) return false;
    for (std::size_t k = 0; k + 1 < q.size(); ++k) {
        if (!(0.5 + alpha * (q[k + 1] - 0.5) < 0.5 + beta * (q[k] - 0.5))) return false;
    }
    return true;
}

AlphaBeta choose_alpha_beta(const std::vector<double>& q, double margin) {
    require_levels(q);
    if (!(margin > 0.0 && margin < 1.0)) throw DomainError("margin must lie in (0,1)");
    AlphaBeta ab;
    ab.r = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < q.size(); ++k) ab.r = std::min(ab.r, (q[k] - 0.5) / (q[k + 1] - 0.5));
    if (!(ab.r > 1.0)) {
        throw DomainError("no admissible (alpha, beta): min_k (q_k - 1/2)/(q_{k+1} - 1/2) = " + std::to_string(ab.r) +
                          " is not above 1");
    }
    if (std::isinf(ab.r)) ab.r = 1e6;
    ab.beta = 2.0 / (1.0 + ab.r);
    ab.alpha = (1.0 - margin) * ab.beta * ab.r;
    if (!(ab.alpha > 1.0)) ab.alpha = 0.5 * (1.0 + ab.beta * ab.r);
    if (!alpha_beta_valid(q, ab.alpha, ab.beta)) throw DomainError("levels too close to separate by (alpha, beta)");
    return ab;
}

EkSpec EkSpec::make(int k, const std::vector<double>& q, const AlphaBeta& ab, int K) {
    if (k < 0 || k > 12) throw DomainError("k must lie in [0, 12]");
    if (int(q.size()) < k + 2) throw DomainError("E_k needs q_k and q_{k+1}");
    if (K < 1) throw DomainError("K must be at least 1");
    EkSpec s;
    s.k = k;
    s.alpha = ab.alpha;
    s.beta = ab.beta;
    s.q_k = q[std::size_t(k)];
    s.q_k1 = q[std::size_t(k + 1)];
    s.K = K;
    return s;
}

int EkSpec::scale() const { return pow3(k); }

HalfBox EkSpec::box(int i) const {
    const int s = scale();
    switch (i) {
        case 1: return {-s, 3 * s, s, 5 * s};
        case 2: return {-s, 5 * s, s, 7 * s};
        case 3: return {-s, 7 * s, s, 9 * s};
        case 4: return {3 * s, -3 * s, 9 * s, 3 * s};
        default: throw DomainError("box index must be 1..4");
    }
}

std::pair<double, double> EkSpec::interval(int i) const {
    if (i >= 1 && i <= 3) return {q_k1, 0.5 + alpha * (q_k1 - 0.5)};
    if (i == 4) return {0.5 + beta * (q_k - 0.5), q_k};
    throw DomainError("interval index must be 1..4");
}

std::optional<CircuitPair> circuit_pair(const LatticeConfig& cfg, int k) {
    const int s = pow3(k);
    if (!cfg.box().contains(Box::centered(27 * s))) throw DomainError("circuit pair needs B(3^{k+3}) in the box");
    const LatticeConfig sub = cfg.restricted(Box::centered(27 * s));
    auto C = outermost_circuit(sub, 0.5, Annulus(s, 3 * s));
    if (!C) return std::nullopt;
    auto D = innermost_circuit(sub, 0.5, Annulus(9 * s, 27 * s));
    if (!D) return std::nullopt;
    return CircuitPair{std::move(*C), std::move(*D)};
}

GainReport check_gain_on_Ek(const WeightModel& model, const LatticeConfig& cfg, const InvasionCluster& inv,
                            const EkSpec& spec, const CircuitPair& pair) {
    GainReport g;
    g.t_inv = invasion_passage_time(model, cfg, inv, pair.C.vertices, pair.D.vertices).value_or_infinity();
    g.t = passage_time(model, cfg, pair.C.vertices, pair.D.vertices).value_or_infinity();
    const double xk = model.inverse(spec.q_k);
    const double xk1 = model.inverse(spec.q_k1);
    g.inv_bound = 3.0 * xk1;
    g.t_bound = xk;
    g.inv_ok = g.t_inv >= g.inv_bound;
    g.t_ok = g.t <= g.t_bound;
    g.in_G = in_good_set(xk, xk1, false);
    g.gain_ok = g.t_inv - g.t >= xk1;
    return g;
}

std::vector<int> good_indices(const std::vector<double>& x, bool strict) {
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (!(x[k] >= 0.0)) throw DomainError("sequence must be nonnegative");
        if (k > 0 && x[k] > x[k - 1]) throw DomainError("sequence must be nonincreasing");
    }
    std::vector<int> G;
    for (std::size_t k = 0; k + 1 < x.size(); ++k) {
        if (in_good_set(x[k], x[k + 1], strict)) G.push_back(int(k));
    }
    return G;
}

void EventASpec::validate() const {
    if (!(a > 0.0 && a < b)) throw DomainError("event A needs 0 < a < b");
    if (R <= 0 || R % 10 != 0) throw DomainError("event A needs R a positive multiple of 10");
    if (double(R) * a < 10.0 * b) throw DomainError("event A needs R >= 10 b / a");
    if (outer_radius() < 2 * R) throw DomainError("event A needs the outer box to contain B(2R)");
}

WeightModel event_A_model(const EventASpec& spec) {
    spec.validate();
    const double m = 1.0 / 6.0;
    return WeightModel::atoms({{0.0, 0.5}, {0.75 * spec.a, m}, {spec.a, m}, {spec.b, 0.5 - 2 * m}});
}

LatticeConfig build_event_A_config(const EventASpec& spec) {
    spec.validate();
    const WeightModel model = event_A_model(spec);
    const int R = spec.R;
    const int outer = spec.outer_radius();
    const Vertex hole{-R / 2, 0};
    const int hole_r = R / 5;
    auto near_hole = [&](Vertex v) { return std::max(std::abs(v.x - hole.x), std::abs(v.y - hole.y)) <= hole_r; };

    auto weight = [&](const Edge& e) {
        const int na = linf_norm(e.a), nb = linf_norm(e.b);
        const bool axis = e.a.y == 0 && e.b.y == 0;
        if (axis && e.a.x >= R) return spec.a;
        if (na == R && nb == R) return 0.0;
        if (axis && e.b.x <= 0 && e.a.x >= -R) return 0.75 * spec.a;
        if (na > R || nb > R) return spec.b;
        if ((na <= R / 2) != (nb <= R / 2)) return spec.b;
        if (near_hole(e.a) && near_hole(e.b)) return spec.b;
        return 0.0;
    };

    std::vector<std::pair<Edge, double>> table;
    for (const Edge& e : edges_of_box(Box::centered(outer))) table.emplace_back(e, model.omega_for_atom(weight(e)));
    return LatticeConfig::from_table(Box::centered(outer), table);
}

EventAReport verify_event_A(const WeightModel& model, const LatticeConfig& cfg, const EventASpec& spec) {
    spec.validate();
    const int outer = spec.outer_radius();
    if (cfg.box() != Box::centered(outer)) throw DomainError("event A config must live on B(outer)");
    const InvasionCluster inv = invade(cfg, StopRule::touch(outer));
    const auto w = weight_field(model, cfg);
    const auto T = boundary_profile(cfg.grid(), w, 2 * spec.R);
    const auto Tinv = boundary_profile(cfg.grid(), w, 2 * spec.R, &inv.invaded);

    constexpr double inf = std::numeric_limits<double>::infinity();
    EventAReport rep;
    rep.invasion_steps = inv.steps;
    rep.gap_at_least_b = true;
    rep.gap_constant = true;
    for (int n = spec.R; n <= 2 * spec.R; ++n) {
        EventARow row;
        row.n = n;
        row.T = T[std::size_t(n)].value_or(inf);
        row.T_inv = Tinv[std::size_t(n)].value_or(inf);
        row.gap = row.T_inv - row.T;
        rep.gap_at_least_b = rep.gap_at_least_b && row.gap >= spec.b;
        if (!rep.rows.empty()) rep.gap_constant = rep.gap_constant && row.gap == rep.rows.front().gap;
        rep.rows.push_back(row);
    }
    return rep;
}

PaintedEk painted_ek_config() {
    const std::vector<double> q = {0.8, 0.6};
    const AlphaBeta ab = choose_alpha_beta(q);
    const EkSpec spec = EkSpec::make(0, q, ab, 3);
    const int far = spec.far_radius();

    std::vector<std::pair<Edge, double>> table;
    auto put = [&](Vertex a, Vertex b, double w) { table.emplace_back(Edge::between(a, b), w); };
    for (const int r : {2, 10}) {
        for (const Edge& e : edges_of_box(Box::centered(r))) {
            if (linf_norm(e.a) == r && linf_norm(e.b) == r) table.emplace_back(e, 0.3);
        }
    }
    put({0, 2}, {0, 3}, 0.62);
    put({0, 3}, {0, 4}, 0.62);
    put({0, 4}, {0, 5}, 0.62);
    for (int y = 5; y < 10; ++y) put({0, y}, {0, y + 1}, 0.3);
    put({2, 0}, {3, 0}, 0.3);
    put({3, 0}, {4, 0}, 0.7);
    for (int x = 4; x < 10; ++x) put({x, 0}, {x + 1, 0}, 0.3);
    for (int x = 10; x < far; ++x) put({x, 0}, {x + 1, 0}, 0.55);
    return {q, ab, spec, LatticeConfig::from_table(Box::centered(far), table, 0.95)};
}

GapEstimate estimate_gap(const WeightModel& model, int n, const std::vector<double>& q, const AlphaBeta& ab,
                         const GapOptions& opt) {
    if (n < 1) throw DomainError("n must be at least 1");
    if (opt.samples < 1) throw DomainError("samples must be at least 1");
    if (opt.box_factor < 3) throw DomainError("box factor must be at least 3");
    if (opt.K < 1 || opt.K > opt.box_factor) throw DomainError("K must lie in [1, box factor]");
    if (opt.max_enlargements < 0) throw DomainError("max_enlargements must be nonnegative");

    GapEstimate est;
    est.n = n;
    est.options = opt;
    if (int(q.size()) > floor_log(n, 3)) {
        est.sums = partial_sums(model, n, q);
    } else {
        est.sums = partial_sums(model, n, std::vector<double>(std::size_t(floor_log(n, 3)) + 1, 0.5));
        est.sums.s2 = est.sums.ratio = std::numeric_limits<double>::quiet_NaN();
    }
    const int k_max = opt.detect_events ? floor_log(n, 3) - 3 : -1;
    if (k_max >= 0 && int(q.size()) < k_max + 2) throw DomainError("q table too short for event detection");
    if (k_max >= 0 && !alpha_beta_valid(q, ab.alpha, ab.beta)) throw DomainError("alpha, beta invalid for q");
    const std::uint64_t stream = scale_seed(opt.seed, n);
    const StopRule rule = StopRule::stabilize(n, opt.M, opt.window);
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();

    est.samples.resize(std::size_t(opt.samples));
    std::vector<std::int64_t> violations(std::size_t(opt.samples), 0);
    parallel_for(opt.samples, opt.jobs, [&](std::int64_t i) {
        GapSample& s = est.samples[std::size_t(i)];
        std::int64_t& bad = violations[std::size_t(i)];
        s.index = i;
        s.seed = sub_seed(stream, std::uint64_t(i));
        s.box_radius = opt.box_factor * n;
        std::optional<LatticeConfig> cfg;
        std::optional<InvasionCluster> inv;
        for (int attempt = 0; attempt <= opt.max_enlargements; ++attempt) {
            cfg = LatticeConfig::sample(Box::centered(s.box_radius), s.seed);
            try {
                inv = invade(*cfg, rule);
                break;
            } catch (const TruncationError&) {
                ++s.truncations;
                if (attempt < opt.max_enlargements) s.box_radius *= 2;
            }
        }
        if (!inv) {
            s.failed = true;
            return;
        }
        s.invasion_steps = inv->steps;
        s.last_reentry = inv->last_reentry_step;

        const auto w = weight_field(model, *cfg);
        const auto T = boundary_profile(cfg->grid(), w, n);
        const auto Tinv = boundary_profile(cfg->grid(), w, n, &inv->invaded);
        s.monotone_ok = nondecreasing(T) && nondecreasing(Tinv);
        if (!s.monotone_ok || !T[std::size_t(n)] || !Tinv[std::size_t(n)]) {
            ++bad;
            s.failed = !T[std::size_t(n)] || !Tinv[std::size_t(n)];
            if (s.failed) return;
        }
        s.T = *T[std::size_t(n)];
        s.T_inv = *Tinv[std::size_t(n)];
        s.diff = s.T_inv - s.T;
        if (s.diff < 0) ++bad;

        for (int k = 0; k <= k_max; ++k) {
            const EkSpec spec = EkSpec::make(k, q, ab, opt.K);
            const auto witness = detect_E_k(*cfg, spec);
            s.event.push_back(witness ? 1 : 0);
            int ok = 1;
            if (witness) {
                ok = verify_witness(*cfg, spec, *witness).ok ? 1 : 0;
                if (!ok) ++bad;
            }
            s.witness_ok.push_back(ok);

            double gap = nan;
            int gain = -1;
            if (const auto pair = circuit_pair(*cfg, k)) {
                const int sc = spec.scale();
                const LatticeConfig sub = cfg->restricted(Box::centered(27 * sc));
                if (!verify_circuit(sub, pair->C, Annulus(sc, 3 * sc)) ||
                    !verify_circuit(sub, pair->D, Annulus(9 * sc, 27 * sc))) {
                    ++bad;
                }
                const auto contained = check_circuit_containment(*cfg, *inv, {pair->C, pair->D});
                const GainReport g = check_gain_on_Ek(model, *cfg, *inv, spec, *pair);
                if (contained[0] && contained[1]) gap = g.t_inv - g.t;
                if (witness && g.in_G) gain = g.gain_ok ? 1 : 0;
            }
            s.circuit_gap.push_back(gap);
            s.gain_ok.push_back(gain);
        }
        for (int r = 0; r < 3; ++r) {
            double sum = 0;
            for (int k = r; k <= k_max; k += 3) {
                if (!std::isnan(s.circuit_gap[std::size_t(k)])) sum += s.circuit_gap[std::size_t(k)];
            }
            s.decoupling[std::size_t(r)] = sum;
            if (sum > s.diff + 1e-9 * (1.0 + std::abs(s.diff))) s.decoupling_ok = false;
        }
        if (!s.decoupling_ok) ++bad;
    });

    std::vector<double> Ts, Tinvs, diffs;
    std::vector<std::int64_t> hits(std::size_t(std::max(0, k_max + 1)), 0);
    for (std::size_t i = 0; i < est.samples.size(); ++i) {
        const GapSample& s = est.samples[i];
        est.truncations += s.truncations;
        est.invariant_violations += violations[i];
        if (s.failed) {
            ++est.failures;
            continue;
        }
        Ts.push_back(s.T);
        Tinvs.push_back(s.T_inv);
        diffs.push_back(s.diff);
        for (std::size_t k = 0; k < s.event.size(); ++k) hits[k] += s.event[k];
        for (const int g : s.gain_ok) est.gain_failures += g == 0;
    }
    if (diffs.empty()) return est;
    est.T = mean_ci(Ts);
    est.T_inv = mean_ci(Tinvs);
    est.diff = mean_ci(diffs);
    for (const std::int64_t h : hits) est.event_freq.push_back(wilson(h, std::int64_t(diffs.size())));
    return est;
}

}  // namespace fppinv
