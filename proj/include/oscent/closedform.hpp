#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "oscent/model.hpp"

namespace oscent {

/// Quantum numbers of one block of a K-partition: one excitation of the
/// block's centre-of-mass coordinate and N_j - 1 excitations of the relative
/// coordinates.
struct BlockExcitation {
  std::int64_t parallel = 0;
  std::vector<std::int64_t> perpendicular;

  friend bool operator==(const BlockExcitation&, const BlockExcitation&) = default;
};

/// One BlockExcitation per block of a Partition.
struct ExcitationLabel {
  std::vector<BlockExcitation> blocks;

  /// The all-zero label shaped to `partition`.
  static ExcitationLabel ground(const Partition& partition);

  /// Throws InvalidArgument unless the label matches the block sizes of
  /// `partition` and all entries are nonnegative.
  void check_compatible(const Partition& partition) const;

  friend bool operator==(const ExcitationLabel&, const ExcitationLabel&) = default;
};

enum class EnergyKind { standard, partition_separable, fully_separable };

const char* to_string(EnergyKind kind);

/// Energy in units of hbar * Omega together with the kind of spectrum it
/// belongs to.
struct EnergyValue {
  double value = 0.0;
  EnergyKind kind = EnergyKind::standard;
};

/// K = 1 gives the ordinary spectrum, K = N the fully separable one.
EnergyKind energy_kind(const Partition& partition);

/// sqrt(1 + N R): frequency of every relative (perpendicular) mode.
double relative_mode_frequency(const EnsembleSpec& spec);
/// sqrt(1 + (N - N_j) R): frequency of the centre-of-mass mode of a block of
/// size N_j while all other blocks are held in product states.
double block_mode_frequency(const EnsembleSpec& spec, std::int64_t block_size);

EnergyValue partition_energy(const EnsembleSpec& spec, const Partition& partition, const ExcitationLabel& label);

EnergyValue partition_min_energy(const EnsembleSpec& spec, const Partition& partition);

/// Same as partition_min_energy, from block sizes only (no index bookkeeping;
/// used for very large N).
double partition_min_energy(const EnsembleSpec& spec, std::span<const std::int64_t> block_sizes);

/// (1/2)(1 + (N - 1) sqrt(1 + N R)).
double ground_energy(const EnsembleSpec& spec);
/// (N/2) sqrt(1 + (N - 1) R).
double fully_separable_min_energy(const EnsembleSpec& spec);

/// The `count` lowest partition-restricted energies, repeated according to
/// degeneracy, ascending.
std::vector<EnergyValue> enumerate_levels(const EnsembleSpec& spec, const Partition& partition, std::int64_t count);

/// Rows form an orthonormal basis of R^m; row 0 is (1, ..., 1)/sqrt(m), the
/// rest complete it by Gram-Schmidt over e_0, e_1, ... in index order.
Eigen::MatrixXd block_coordinate_basis(std::int64_t block_size);

struct WavefunctionQuery {
  Partition partition;
  ExcitationLabel label;
  /// Each point holds N dimensionless coordinates x_i / u_x.
  std::vector<std::vector<double>> points;
  /// Multiply by the analytic factor that makes the function unit-norm.
  bool normalized = false;
};

std::vector<double> wavefunction_eval(const WavefunctionQuery& query, const EnsembleSpec& spec);

}  // namespace oscent
