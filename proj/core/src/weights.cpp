#include "fppinv/weights.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace fppinv {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

WeightModel WeightModel::half_uniform(double theta) {
    if (!(theta > 0)) throw DomainError("halfuniform requires theta > 0");
    return WeightModel(HalfUniform{theta});
}

WeightModel WeightModel::power_tail(double kappa) {
    if (!(kappa > 0)) throw DomainError("powertail requires kappa > 0");
    return WeightModel(PowerTail{kappa});
}

WeightModel WeightModel::atoms(std::vector<std::pair<double, double>> atoms) {
    std::sort(atoms.begin(), atoms.end());
    if (atoms.empty() || atoms.front().first != 0.0) throw DomainError("atom list must contain the atom at 0");
    Atoms a;
    double total = 0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (atoms[i].first < 0 || !(atoms[i].second > 0)) throw DomainError("atoms need values >= 0 and positive masses");
        if (i > 0 && atoms[i].first == atoms[i - 1].first) throw DomainError("duplicate atom value");
        total += atoms[i].second;
        a.cumulative.push_back(total);
    }
    if (atoms.front().second != 0.5) throw DomainError("the atom at 0 must have mass exactly 1/2");
    if (std::abs(total - 1.0) > 1e-12) throw DomainError("atom masses must sum to 1");
    a.cumulative.back() = 1.0;
    a.atoms = std::move(atoms);
    return WeightModel(std::move(a));
}

WeightModel WeightModel::table(std::vector<std::pair<double, double>> points) {
    if (points.size() < 2) throw DomainError("table needs at least two breakpoints");
    if (points.front() != std::pair<double, double>{0.0, 0.5}) throw DomainError("table must start at (0, 1/2)");
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (points[i].first < points[i - 1].first || points[i].second < points[i - 1].second) {
            throw DomainError("table breakpoints must be nondecreasing in x and F");
        }
    }
    // Right-continuity: a jump at 0 would make F(0) > 1/2.
    for (std::size_t i = 1; i < points.size() && points[i].first == 0.0; ++i) {
        if (points[i].second != 0.5) throw DomainError("table must have F(0) = 1/2");
    }
    if (points.back().second != 1.0) throw DomainError("table must end at F = 1");
    return WeightModel(Table{std::move(points)});
}

WeightModel WeightModel::from_name(const std::string& family, double theta, double kappa) {
    if (family == "halfuniform") return half_uniform(theta);
    if (family == "powertail") return power_tail(kappa);
    if (family == "atom01") return atoms({{0.0, 0.5}, {1.0, 0.5}});
    throw DomainError("unknown weight family '" + family + "'");
}

double WeightModel::inverse(double t) const {
    if (!(t > 0.0) || t > 1.0) throw DomainError("F^{-1} is defined for t in (0,1]");
    if (t <= 0.5) return 0.0;
    return std::visit(
        overloaded{
            [&](const HalfUniform& f) { return f.theta * (2.0 * t - 1.0); },
            [&](const PowerTail& f) { return std::pow(2.0 * t - 1.0, 1.0 / f.kappa); },
            [&](const Atoms& f) {
                const auto it = std::lower_bound(f.cumulative.begin(), f.cumulative.end(), t);
                return f.atoms[std::size_t(it - f.cumulative.begin())].first;
            },
            [&](const Table& f) {
                const auto& pts = f.points;
                std::size_t i = 0;
                while (pts[i].second < t) ++i;
                const auto& [x1, f1] = pts[i];
                const auto& [x0, f0] = pts[i - 1];
                if (x0 == x1) return x1;
                return x0 + (t - f0) / (f1 - f0) * (x1 - x0);
            },
        },
        family_);
}

double WeightModel::cdf(double x) const {
    if (x < 0) return 0.0;
    return std::visit(
        overloaded{
            [&](const HalfUniform& f) { return 0.5 + 0.5 * std::min(x / f.theta, 1.0); },
            [&](const PowerTail& f) { return 0.5 + 0.5 * std::pow(std::min(x, 1.0), f.kappa); },
            [&](const Atoms& f) {
                double c = 0;
                for (std::size_t i = 0; i < f.atoms.size() && f.atoms[i].first <= x; ++i) c = f.cumulative[i];
                return c;
            },
            [&](const Table& f) {
                const auto& pts = f.points;
                if (x >= pts.back().first) return 1.0;
                // last breakpoint with abscissa <= x gives right-continuous value at jumps
                std::size_t i = 0;
                while (i + 1 < pts.size() && pts[i + 1].first <= x) ++i;
                const auto& [x0, f0] = pts[i];
                const auto& [x1, f1] = pts[i + 1];
                return f0 + (x - x0) / (x1 - x0) * (f1 - f0);
            },
        },
        family_);
}

double WeightModel::omega_for_atom(double value) const {
    const auto* a = std::get_if<Atoms>(&family_);
    if (!a) throw DomainError("omega_for_atom needs an atomic weight model");
    for (std::size_t i = 0; i < a->atoms.size(); ++i) {
        if (a->atoms[i].first == value) {
            const double lo = i == 0 ? 0.0 : a->cumulative[i - 1];
            return 0.5 * (lo + a->cumulative[i]);
        }
    }
    throw DomainError("value is not an atom of the model");
}

std::string WeightModel::describe() const {
    std::ostringstream os;
    std::visit(overloaded{
                   [&](const HalfUniform& f) { os << "halfuniform(theta=" << f.theta << ")"; },
                   [&](const PowerTail& f) { os << "powertail(kappa=" << f.kappa << ")"; },
                   [&](const Atoms& f) {
                       os << "atoms(";
                       for (std::size_t i = 0; i < f.atoms.size(); ++i) {
                           os << (i ? "," : "") << f.atoms[i].first << ':' << f.atoms[i].second;
                       }
                       os << ")";
                   },
                   [&](const Table& f) { os << "table(" << f.points.size() << " breakpoints)"; },
               },
               family_);
    return os.str();
}

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t index) { return mix64(mix64(seed) ^ (index * 0xD6E8FEB86659FD93ull)); }

double edge_uniform(std::uint64_t seed, const Edge& e) {
    const std::uint64_t h = mix64(mix64(seed) ^ mix64(edge_key(e) ^ 0x5851F42D4C957F2Dull));
    return (double(h >> 11) + 0.5) * 0x1.0p-53;
}

LatticeConfig::LatticeConfig(const Box& box, std::uint64_t seed, std::string gen)
    : box_(box), grid_(box), seed_(seed), generator_(std::move(gen)), omega_(std::size_t(grid_.num_edges())) {}

LatticeConfig LatticeConfig::sample(const Box& box, std::uint64_t seed) {
    LatticeConfig cfg(box, seed, kGeneratorId);
    const std::uint64_t s = mix64(seed);
    for (std::int64_t i = 0; i < cfg.grid_.num_edges(); ++i) {
        const std::uint64_t h = mix64(s ^ mix64(edge_key(cfg.grid_.edge(i)) ^ 0x5851F42D4C957F2Dull));
        cfg.omega_[std::size_t(i)] = (double(h >> 11) + 0.5) * 0x1.0p-53;
    }
    return cfg;
}

LatticeConfig LatticeConfig::from_table(const Box& box, const std::vector<std::pair<Edge, double>>& entries,
                                        std::optional<double> fill) {
    LatticeConfig cfg(box, 0, "edge-table");
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::fill(cfg.omega_.begin(), cfg.omega_.end(), fill.value_or(nan));
    for (const auto& [e, w] : entries) cfg.set_omega(e, w);
    if (!fill) {
        for (std::int64_t i = 0; i < cfg.grid_.num_edges(); ++i) {
            if (std::isnan(cfg.omega_[std::size_t(i)])) {
                throw DomainError("edge table is missing edge " + to_string(cfg.grid_.edge(i)));
            }
        }
    }
    return cfg;
}

void LatticeConfig::set_omega(const Edge& e, double w) {
    if (!(w >= 0.0 && w <= 1.0)) throw DomainError("omega values must lie in [0,1]");
    omega_[std::size_t(grid_.require_edge(e))] = w;
}

LatticeConfig LatticeConfig::restricted(const Box& b) const {
    if (!box_.contains(b)) throw DomainError("sub-box exceeds the config box");
    LatticeConfig sub(b, seed_, generator_);
    for (std::int64_t i = 0; i < sub.grid_.num_edges(); ++i) {
        sub.omega_[std::size_t(i)] = omega_[std::size_t(grid_.edge_index(sub.grid_.edge(i)))];
    }
    return sub;
}

double weight_of(const WeightModel& model, const LatticeConfig& cfg, const Edge& e) {
    const double w = cfg.omega(e);
    return w <= 0.0 ? 0.0 : model.inverse(w);
}

std::vector<double> weight_field(const WeightModel& model, const LatticeConfig& cfg) {
    std::vector<double> t(cfg.omegas().size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double w = cfg.omegas()[i];
        t[i] = w <= 0.0 ? 0.0 : model.inverse(w);
    }
    return t;
}

void write_descriptor(std::ostream& os, const LatticeConfig& cfg) {
    const Box& b = cfg.box();
    os << "seed " << cfg.seed() << "\ngenerator " << cfg.generator_id() << "\nbox " << b.x0 << ' ' << b.y0 << ' '
       << b.x1 << ' ' << b.y1 << '\n';
}

LatticeConfig read_descriptor(std::istream& is) {
    std::string key, gen;
    std::uint64_t seed = 0;
    Box b;
    bool have_seed = false, have_box = false;
    while (is >> key) {
        if (key == "seed") {
            is >> seed;
            have_seed = true;
        } else if (key == "generator") {
            is >> gen;
        } else if (key == "box") {
            is >> b.x0 >> b.y0 >> b.x1 >> b.y1;
            have_box = true;
        } else {
            throw DomainError("unknown descriptor key '" + key + "'");
        }
    }
    if (!have_seed || !have_box) throw DomainError("descriptor needs seed and box");
    if (gen != kGeneratorId) throw DomainError("unsupported generator '" + gen + "'");
    return LatticeConfig::sample(b, seed);
}

void write_edge_table(std::ostream& os, const LatticeConfig& cfg) {
    os.precision(17);
    for (std::int64_t i = 0; i < cfg.grid().num_edges(); ++i) {
        const Edge e = cfg.grid().edge(i);
        os << e.a.x << ' ' << e.a.y << ' ' << e.b.x << ' ' << e.b.y << ' ' << cfg.omega_at(i) << '\n';
    }
}

std::vector<std::pair<Edge, double>> read_edge_table(std::istream& is) {
    std::vector<std::pair<Edge, double>> out;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        Vertex u, v;
        double w;
        if (!(ls >> u.x)) continue;
        if (!(ls >> u.y >> v.x >> v.y >> w)) {
            throw DomainError("edge table line " + std::to_string(lineno) + ": expected x1 y1 x2 y2 omega");
        }
        out.emplace_back(Edge::between(u, v), w);
    }
    return out;
}

Box bounding_box(const std::vector<std::pair<Edge, double>>& entries) {
    if (entries.empty()) throw DomainError("empty edge table");
    Box b{entries[0].first.a.x, entries[0].first.a.y, entries[0].first.a.x, entries[0].first.a.y};
    for (const auto& [e, w] : entries) {
        for (const Vertex v : {e.a, e.b}) {
            b.x0 = std::min(b.x0, v.x);
            b.y0 = std::min(b.y0, v.y);
            b.x1 = std::max(b.x1, v.x);
            b.y1 = std::max(b.y1, v.y);
        }
    }
    return b;
}

}  // namespace fppinv
