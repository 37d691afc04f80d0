#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fppinv/lattice.hpp"

namespace fppinv {

/// Edge-weight distribution F with an atom of mass 1/2 at zero (the critical case).
class WeightModel {
public:
    /// F = 1/2 delta_0 + 1/2 Uniform(0, theta].
    struct HalfUniform {
        double theta;
    };
    /// F(x) = 1/2 + x^kappa / 2 on [0,1].
    struct PowerTail {
        double kappa;
    };
    /// Finite atoms (value, mass); the atom at 0 carries mass 1/2.
    struct Atoms {
        std::vector<std::pair<double, double>> atoms;
        std::vector<double> cumulative;
    };
    /// Breakpoints (x, F(x)) joined linearly; a repeated x encodes a jump.
    struct Table {
        std::vector<std::pair<double, double>> points;
    };

    static WeightModel half_uniform(double theta = 1.0);
    static WeightModel power_tail(double kappa);
    static WeightModel atoms(std::vector<std::pair<double, double>> atoms);
    static WeightModel table(std::vector<std::pair<double, double>> points);

    /// Named presets used by the command line: halfuniform, powertail, atom01, atoms, table.
    static WeightModel from_name(const std::string& family, double theta = 1.0, double kappa = 1.0);

    /// F^{-1}(t) = inf{x : F(x) >= t} for t in (0,1].
    double inverse(double t) const;
    /// The distribution function itself (right-continuous).
    double cdf(double x) const;

    /// For atomic models: the midpoint of the omega-interval that F^{-1} maps onto the
    /// atom at `value`. Throws if `value` is not an atom.
    double omega_for_atom(double value) const;

    std::string describe() const;
    const auto& family() const { return family_; }

private:
    explicit WeightModel(std::variant<HalfUniform, PowerTail, Atoms, Table> f) : family_(std::move(f)) {}
    std::variant<HalfUniform, PowerTail, Atoms, Table> family_;
};

inline constexpr const char* kGeneratorId = "splitmix64-edgekey-v1";

/// Keyed hash used for all seed derivation.
std::uint64_t mix64(std::uint64_t x);
/// Sub-seed of sample `index` under a master seed; independent of the number of workers.
std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t index);
/// The uniform value of an edge under a seed, in (0,1).
double edge_uniform(std::uint64_t seed, const Edge& e);

/// The coupled uniforms omega_e on every edge of a finite box.
class LatticeConfig {
public:
    /// Counter-based sample: omega_e depends only on (seed, edge), so a larger box with
    /// the same seed agrees with a smaller one on shared edges.
    static LatticeConfig sample(const Box& box, std::uint64_t seed);

    /// Explicit edge table. Edges of the box missing from `entries` take `fill`; without
    /// `fill`, every box edge must be listed.
    static LatticeConfig from_table(const Box& box, const std::vector<std::pair<Edge, double>>& entries,
                                    std::optional<double> fill = std::nullopt);

    const Box& box() const { return box_; }
    const Grid& grid() const { return grid_; }
    std::uint64_t seed() const { return seed_; }
    const std::string& generator_id() const { return generator_; }

    double omega(const Edge& e) const { return omega_[std::size_t(grid_.require_edge(e))]; }
    double omega_at(std::int64_t idx) const { return omega_[std::size_t(idx)]; }
    const std::vector<double>& omegas() const { return omega_; }

    /// e is p-open iff omega_e <= p; its dual edge shares the state.
    bool is_p_open(const Edge& e, double p) const { return omega(e) <= p; }
    bool open_at(std::int64_t idx, double p) const { return omega_[std::size_t(idx)] <= p; }

    /// Replaces one value; used to paint deterministic configurations.
    void set_omega(const Edge& e, double w);

    /// The same omega values on a sub-box.
    LatticeConfig restricted(const Box& b) const;

private:
    LatticeConfig(const Box& box, std::uint64_t seed, std::string gen);
    Box box_;
    Grid grid_;
    std::uint64_t seed_ = 0;
    std::string generator_;
    std::vector<double> omega_;
};

/// t_e = F^{-1}(omega_e).
double weight_of(const WeightModel& model, const LatticeConfig& cfg, const Edge& e);
/// t_e for every edge of the config box, indexed like the grid.
std::vector<double> weight_field(const WeightModel& model, const LatticeConfig& cfg);

/// Descriptor text (seed, generator id, box); omega values are regenerated on load.
void write_descriptor(std::ostream& os, const LatticeConfig& cfg);
LatticeConfig read_descriptor(std::istream& is);

/// Edge table text: one line `x1 y1 x2 y2 omega` per edge, '#' starts a comment.
void write_edge_table(std::ostream& os, const LatticeConfig& cfg);
std::vector<std::pair<Edge, double>> read_edge_table(std::istream& is);
/// Smallest box holding every listed edge.
Box bounding_box(const std::vector<std::pair<Edge, double>>& entries);

}  // namespace fppinv
