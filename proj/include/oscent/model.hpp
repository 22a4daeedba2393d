#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace oscent {

/// CODATA 2018 exact values.
inline constexpr double kReducedPlanck = 1.054571817e-34;  // J s
inline constexpr double kBoltzmann = 1.380649e-23;         // J / K

/// SI description of the trapped, pairwise-coupled ensemble.
struct PhysicalParams {
  double mass = 0.0;               // kg
  double trap_frequency = 0.0;     // rad / s
  double coupling_constant = 0.0;  // N / m
  double hbar = kReducedPlanck;
  double boltzmann = kBoltzmann;

  /// Throws InvalidArgument unless m > 0, Omega > 0 and kappa >= 0.
  void validate() const;
};

/// Characteristic length, energy and temperature of the trap.
struct UnitSystem {
  double length = 0.0;       // m
  double energy = 0.0;       // J
  double temperature = 0.0;  // K
};

/// kappa / (m Omega^2).
double coupling_ratio(const PhysicalParams& params);

UnitSystem natural_units(const PhysicalParams& params);

/// Particle count and dimensionless coupling ratio. Every numeric API of the
/// library works in natural units on top of this pair.
class EnsembleSpec {
 public:
  EnsembleSpec(std::int64_t n_particles, double coupling_ratio);

  static EnsembleSpec from_physical(std::int64_t n_particles, const PhysicalParams& params);

  std::int64_t n_particles() const { return n_; }
  double coupling_ratio() const { return r_; }

 private:
  std::int64_t n_;
  double r_;
};

/// A split of the particle indices {0, ..., N-1} into K nonempty, disjoint
/// blocks. Blocks keep the order they were given in; indices inside a block
/// are stored sorted.
class Partition {
 public:
  /// Validates `blocks` as a set partition of {0, ..., n-1}.
  static Partition make(std::int64_t n, const std::vector<std::vector<std::int64_t>>& blocks);

  /// K = 1.
  static Partition trivial(std::int64_t n);
  /// K = N, one particle per block.
  static Partition full(std::int64_t n);
  /// K blocks of N/K consecutive indices each; requires K | N.
  static Partition equal_blocks(std::int64_t n, std::int64_t k);

  std::int64_t n_particles() const { return n_; }
  std::int64_t block_count() const { return static_cast<std::int64_t>(offsets_.size()) - 1; }
  std::int64_t block_size(std::int64_t j) const;
  std::span<const std::int64_t> block(std::int64_t j) const;
  std::vector<std::int64_t> block_sizes() const;

  bool is_trivial() const { return block_count() == 1; }
  bool is_full() const { return block_count() == n_; }

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  Partition(std::int64_t n, std::vector<std::int64_t> members, std::vector<std::int64_t> offsets);

  std::int64_t n_ = 0;
  std::vector<std::int64_t> members_;
  std::vector<std::int64_t> offsets_;
};

}  // namespace oscent
