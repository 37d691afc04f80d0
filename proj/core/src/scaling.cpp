#include "fppinv/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "fppinv/parallel.hpp"
#include "fppinv/percolation.hpp"

namespace fppinv {

namespace {

std::int64_t count_crossings(int n, int m, double p, std::int64_t from, std::int64_t to, std::uint64_t stream,
                             int jobs) {
    const Box rect = Box::rect(n, m);
    std::vector<std::uint8_t> hit(std::size_t(to - from), 0);
    parallel_for(to - from, jobs, [&](std::int64_t i) {
        const LatticeConfig cfg = LatticeConfig::sample(rect, sub_seed(stream, std::uint64_t(from + i)));
        hit[std::size_t(i)] = has_left_right_crossing(cfg, p, rect);
    });
    std::int64_t c = 0;
    for (auto h : hit) c += h;
    return c;
}

void require_p(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p must lie in [0,1]");
}

}  // namespace

std::uint64_t scale_seed(std::uint64_t seed, std::int64_t n, std::int64_t m) {
    return mix64(mix64(seed ^ 0x3C6EF372FE94F82Bull) ^ mix64(std::uint64_t(n) * 0x9E3779B97F4A7C15ull + std::uint64_t(m)));
}

SigmaEstimate estimate_sigma(int n, int m, double p, std::int64_t samples, std::uint64_t seed, int jobs, double z) {
    if (samples < 1) throw DomainError("samples must be at least 1");
    if (n < 0 || m < 0) throw DomainError("rectangle sides must be nonnegative");
    require_p(p);
    const std::int64_t hits = count_crossings(n, m, p, 0, samples, scale_seed(seed, n, m), jobs);
    return {n, m, p, seed, wilson(hits, samples, z)};
}

ScaleProbe probe_scale(int n, double p, std::uint64_t seed, const SearchOptions& opt) {
    const double threshold = 1.0 - opt.epsilon;
    const std::uint64_t stream = scale_seed(seed, n, n);
    std::int64_t done = 0, hits = 0;
    std::int64_t target = std::max<std::int64_t>(1, opt.base_samples);
    ScaleProbe probe{n, false, {}};
    while (true) {
        hits += count_crossings(n, n, p, done, target, stream, opt.jobs);
        done = target;
        probe.freq = wilson(hits, done, opt.z);
        if (probe.freq.lo > threshold) {
            probe.passed = true;
            return probe;
        }
        if (probe.freq.hi <= threshold || done >= opt.max_samples) return probe;
        target = std::min(2 * done, opt.max_samples);
    }
}

LEstimate estimate_L(double p, std::uint64_t seed, const SearchOptions& opt) {
    if (!(p > 0.5 && p <= 1.0)) throw DomainError("estimate_L needs p in (1/2, 1]");
    if (opt.max_scale < 1) throw DomainError("max_scale must be at least 1");
    LEstimate est;
    est.p = p;
    auto test = [&](int n) {
        est.probes.push_back(probe_scale(n, p, seed, opt));
        return est.probes.back().passed;
    };
    int lo = 0, hi = -1;
    for (int n = 1;; n = std::min(2 * n, opt.max_scale)) {
        if (test(n)) {
            hi = n;
            break;
        }
        lo = n;
        if (n == opt.max_scale) break;
    }
    if (hi < 0) {
        est.bracket_lo = lo;
        return est;
    }
    while (hi - lo > 1) {
        const int mid = lo + (hi - lo) / 2;
        (test(mid) ? hi : lo) = mid;
    }
    est.resolved = true;
    est.L = hi;
    est.bracket_lo = lo;
    return est;
}

PnEstimate estimate_p_n(int n, std::uint64_t seed, double tol, const SearchOptions& opt) {
    if (n < 1) throw DomainError("p_n needs n >= 1");
    if (!(tol > 0)) throw DomainError("tolerance must be positive");
    PnEstimate est;
    est.n = n;
    SearchOptions capped = opt;
    capped.max_scale = n;
    bool moved = false;
    while (est.hi - est.lo > tol) {
        const double mid = 0.5 * (est.lo + est.hi);
        LEstimate L = estimate_L(mid, seed, capped);
        const bool ok = L.resolved && L.L <= n;
        est.probes.emplace_back(mid, std::move(L));
        if (ok) {
            est.hi = mid;
        } else {
            est.lo = mid;
            moved = true;
        }
    }
    est.degenerate = !moved;
    est.p_hat = est.hi;
    return est;
}

std::vector<PnEstimate> q_sequence(int k_max, std::uint64_t seed, double tol, const SearchOptions& opt) {
    if (k_max < 0 || k_max > 12) throw DomainError("k_max must lie in [0, 12]");
    std::vector<PnEstimate> out;
    int scale = 1;
    for (int k = 0; k <= k_max; ++k, scale *= 3) out.push_back(estimate_p_n(scale, seed, tol, opt));
    return out;
}

Pi4Estimate estimate_pi4(int n, std::int64_t samples, std::uint64_t seed, int jobs, double p, double z) {
    if (samples < 1) throw DomainError("samples must be at least 1");
    require_p(p);
    const Box box = Box::centered(n);
    const std::uint64_t stream = scale_seed(seed ^ 0xA4A4A4A4ull, n);
    std::vector<std::uint8_t> hit(std::size_t(samples), 0);
    parallel_for(samples, jobs, [&](std::int64_t i) {
        const LatticeConfig cfg = LatticeConfig::sample(box, sub_seed(stream, std::uint64_t(i)));
        hit[std::size_t(i)] = four_arm_event(cfg, p, p, n);
    });
    std::int64_t c = 0;
    for (auto h : hit) c += h;
    return {n, p, seed, wilson(c, samples, z)};
}

double exact_pi4_n1() {
    const Box box = Box::centered(1);
    const auto edges = edges_of_box(box);
    std::int64_t hits = 0;
    const std::int64_t patterns = std::int64_t(1) << edges.size();
    for (std::int64_t mask = 0; mask < patterns; ++mask) {
        std::vector<std::pair<Edge, double>> table;
        for (std::size_t i = 0; i < edges.size(); ++i) table.emplace_back(edges[i], (mask >> i) & 1 ? 0.25 : 0.75);
        const LatticeConfig cfg = LatticeConfig::from_table(box, table);
        hits += four_arm_event(cfg, 0.5, 0.5, 1);
    }
    return double(hits) / double(patterns);
}

ScalingRelation check_scaling_relation(const std::vector<double>& p_grid, std::uint64_t seed,
                                       std::int64_t pi4_samples, double band, const SearchOptions& opt) {
    ScalingRelation rel;
    rel.band = band;
    double mn = 0, mx = 0;
    bool all = true;
    for (double p : p_grid) {
        if (!(p > 0.5 && p < 1.0)) throw DomainError("scaling grid points must lie in (1/2, 1)");
        ScalingRow row;
        row.p = p;
        row.L = estimate_L(p, seed, opt);
        if (!row.L.resolved) {
            all = false;
            rel.rows.push_back(std::move(row));
            continue;
        }
        const int L = row.L.L;
        row.pi4 = estimate_pi4(L, pi4_samples, seed, opt.jobs, 0.5, opt.z);
        const double f = double(L) * double(L) * (p - 0.5);
        row.product = f * row.pi4.freq.estimate;
        row.product_lo = f * row.pi4.freq.lo;
        row.product_hi = f * row.pi4.freq.hi;
        if (rel.rows.empty() || row.product < mn) mn = row.product;
        if (rel.rows.empty() || row.product > mx) mx = row.product;
        rel.rows.push_back(std::move(row));
    }
    rel.spread = mn > 0 ? mx / mn : 0.0;
    rel.within_band = all && mn > 0 && rel.spread <= band;
    return rel;
}

int floor_log(std::int64_t n, int base) {
    if (n < 1 || base < 2) throw DomainError("floor_log needs n >= 1 and base >= 2");
    int k = 0;
    while (n >= base) {
        n /= base;
        ++k;
    }
    return k;
}

PartialSums partial_sums(const WeightModel& model, int n, const std::vector<double>& q) {
    PartialSums s;
    s.n = n;
    const int k2 = floor_log(n, 2);
    const int k3 = floor_log(n, 3);
    for (int k = 1; k <= k2; ++k) s.s1 += model.inverse(0.5 + std::ldexp(1.0, -k));
    if (int(q.size()) <= k3) throw DomainError("q table must cover k <= floor(log3 n)");
    for (int k = 1; k <= k3; ++k) s.s2 += model.inverse(q[std::size_t(k)]);
    s.ratio = s.s1 > 0 ? s.s2 / s.s1 : 0.0;
    return s;
}

void write_scaling_csv_header(std::ostream& os) { os << "quantity,scale,p,estimate,ci_lo,ci_hi,samples,seed\n"; }

void write_csv_row(std::ostream& os, const std::string& quantity, double scale, double p, double estimate,
                   double lo, double hi, std::int64_t samples, std::uint64_t seed) {
    std::ostringstream line;
    line.precision(10);
    line << quantity << ',' << scale << ',' << p << ',' << estimate << ',' << lo << ',' << hi << ',' << samples << ','
         << seed << '\n';
    os << line.str();
}

std::vector<double> read_q_table(std::istream& is) {
    std::map<int, double> q;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
        try {
            if (f.size() >= 4 && f[0] == "q") {
                q[floor_log(std::int64_t(std::stod(f[1])), 3)] = std::stod(f[3]);
            } else if (f.size() == 2) {
                q[std::stoi(f[0])] = std::stod(f[1]);
            }
        } catch (const std::invalid_argument&) {
            continue;  // header
        }
    }
    std::vector<double> out;
    for (const auto& [k, v] : q) {
        if (k != int(out.size())) throw DomainError("q table has a gap at k = " + std::to_string(out.size()));
        if (!(v > 0.5 && v <= 1.0)) throw DomainError("q table values must lie in (1/2, 1]");
        out.push_back(v);
    }
    if (out.empty()) throw DomainError("q table is empty");
    return out;
}

}  // namespace fppinv
