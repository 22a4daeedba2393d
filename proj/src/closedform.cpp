#include "oscent/closedform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "oscent/error.hpp"
#include "oscent/hermite.hpp"

namespace oscent {

ExcitationLabel ExcitationLabel::ground(const Partition& partition) {
  ExcitationLabel label;
  label.blocks.reserve(static_cast<std::size_t>(partition.block_count()));
  for (auto size : partition.block_sizes()) {
    label.blocks.push_back(BlockExcitation{0, std::vector<std::int64_t>(static_cast<std::size_t>(size - 1), 0)});
  }
  return label;
}

void ExcitationLabel::check_compatible(const Partition& partition) const {
  if (static_cast<std::int64_t>(blocks.size()) != partition.block_count()) {
    throw InvalidArgument("label has " + std::to_string(blocks.size()) + " blocks, partition has " +
                          std::to_string(partition.block_count()));
  }
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    const auto& block = blocks[j];
    const auto expected = partition.block_size(static_cast<std::int64_t>(j)) - 1;
    if (static_cast<std::int64_t>(block.perpendicular.size()) != expected) {
      throw InvalidArgument("block " + std::to_string(j) + " needs " + std::to_string(expected) +
                            " perpendicular quantum numbers");
    }
    if (block.parallel < 0 ||
        std::any_of(block.perpendicular.begin(), block.perpendicular.end(), [](auto n) { return n < 0; })) {
      throw InvalidArgument("quantum numbers must be nonnegative");
    }
  }
}

const char* to_string(EnergyKind kind) {
  switch (kind) {
    case EnergyKind::standard:
      return "standard";
    case EnergyKind::partition_separable:
      return "partition-separable";
    case EnergyKind::fully_separable:
      return "fully-separable";
  }
  return "unknown";
}

EnergyKind energy_kind(const Partition& partition) {
  if (partition.is_trivial()) return EnergyKind::standard;
  if (partition.is_full()) return EnergyKind::fully_separable;
  return EnergyKind::partition_separable;
}

double relative_mode_frequency(const EnsembleSpec& spec) {
  return std::sqrt(1.0 + static_cast<double>(spec.n_particles()) * spec.coupling_ratio());
}

double block_mode_frequency(const EnsembleSpec& spec, std::int64_t block_size) {
  return std::sqrt(1.0 + static_cast<double>(spec.n_particles() - block_size) * spec.coupling_ratio());
}

namespace {

void check_spec_matches(const EnsembleSpec& spec, const Partition& partition) {
  if (spec.n_particles() != partition.n_particles()) {
    throw InvalidArgument("partition covers " + std::to_string(partition.n_particles()) + " particles, ensemble has " +
                          std::to_string(spec.n_particles()));
  }
}

}  // namespace

EnergyValue partition_energy(const EnsembleSpec& spec, const Partition& partition, const ExcitationLabel& label) {
  check_spec_matches(spec, partition);
  label.check_compatible(partition);
  const double relative = relative_mode_frequency(spec);
  double energy = 0.0;
  for (std::size_t j = 0; j < label.blocks.size(); ++j) {
    const auto size = partition.block_size(static_cast<std::int64_t>(j));
    const auto& block = label.blocks[j];
    std::int64_t perp_quanta = 0;
    for (auto n : block.perpendicular) perp_quanta += n;
    energy += relative * (static_cast<double>(perp_quanta) + 0.5 * static_cast<double>(size - 1));
    energy += block_mode_frequency(spec, size) * (static_cast<double>(block.parallel) + 0.5);
  }
  return EnergyValue{energy, energy_kind(partition)};
}

double partition_min_energy(const EnsembleSpec& spec, std::span<const std::int64_t> block_sizes) {
  std::int64_t total = 0;
  double parallel = 0.0;
  double perpendicular = 0.0;
  for (auto size : block_sizes) {
    if (size < 1) throw InvalidArgument("block sizes must be positive");
    total += size;
    parallel += block_mode_frequency(spec, size);
    perpendicular += static_cast<double>(size - 1);
  }
  if (total != spec.n_particles()) throw InvalidArgument("block sizes do not sum to the particle number");
  return 0.5 * parallel + 0.5 * perpendicular * relative_mode_frequency(spec);
}

EnergyValue partition_min_energy(const EnsembleSpec& spec, const Partition& partition) {
  check_spec_matches(spec, partition);
  const auto sizes = partition.block_sizes();
  return EnergyValue{partition_min_energy(spec, sizes), energy_kind(partition)};
}

double ground_energy(const EnsembleSpec& spec) {
  const double n = static_cast<double>(spec.n_particles());
  return 0.5 * (1.0 + (n - 1.0) * relative_mode_frequency(spec));
}

double fully_separable_min_energy(const EnsembleSpec& spec) {
  const double n = static_cast<double>(spec.n_particles());
  return 0.5 * n * block_mode_frequency(spec, 1);
}

namespace {

// Modes sharing one frequency; `modes` independent oscillators.
struct ModeGroup {
  double frequency;
  std::int64_t modes;
};

// Number of ways to put `quanta` excitations into `modes` oscillators,
// saturating at `cap`.
std::int64_t multiplicity(std::int64_t quanta, std::int64_t modes, std::int64_t cap) {
  // C(quanta + modes - 1, quanta) computed incrementally.
  double value = 1.0;
  for (std::int64_t i = 1; i <= quanta; ++i) {
    value = value * static_cast<double>(modes - 1 + i) / static_cast<double>(i);
    if (value >= static_cast<double>(cap)) return cap;
  }
  return std::min<std::int64_t>(cap, static_cast<std::int64_t>(std::llround(value)));
}

struct Level {
  double energy;
  std::int64_t degeneracy;
};

void collect_levels(const std::vector<ModeGroup>& groups, std::size_t g, double base, double cutoff,
                    std::int64_t degeneracy, std::int64_t cap, std::vector<Level>& out) {
  if (g == groups.size()) {
    out.push_back(Level{base, degeneracy});
    return;
  }
  const auto& group = groups[g];
  for (std::int64_t quanta = 0;; ++quanta) {
    const double energy = base + group.frequency * static_cast<double>(quanta);
    if (energy > cutoff) break;
    const auto ways = multiplicity(quanta, group.modes, cap);
    const double product = static_cast<double>(degeneracy) * static_cast<double>(ways);
    const auto combined = product >= static_cast<double>(cap) ? cap : degeneracy * ways;
    collect_levels(groups, g + 1, energy, cutoff, combined, cap, out);
  }
}

}  // namespace

std::vector<EnergyValue> enumerate_levels(const EnsembleSpec& spec, const Partition& partition, std::int64_t count) {
  check_spec_matches(spec, partition);
  if (count < 1) throw InvalidArgument("level count must be positive");

  std::map<double, std::int64_t> by_frequency;
  const auto n = spec.n_particles();
  const auto k = partition.block_count();
  if (n > k) by_frequency[relative_mode_frequency(spec)] += n - k;
  for (auto size : partition.block_sizes()) by_frequency[block_mode_frequency(spec, size)] += 1;

  std::vector<ModeGroup> groups;
  for (const auto& [frequency, modes] : by_frequency) groups.push_back(ModeGroup{frequency, modes});

  // Exciting the softest mode count-1 times already yields `count` levels, so
  // nothing above this cutoff can be among the lowest `count`.
  const double ground = partition_min_energy(spec, partition).value;
  const double softest = groups.front().frequency;
  const double cutoff = ground + softest * static_cast<double>(count - 1) * (1.0 + 1e-12);

  std::vector<Level> levels;
  collect_levels(groups, 0, ground, cutoff, 1, count, levels);
  std::stable_sort(levels.begin(), levels.end(), [](const Level& a, const Level& b) { return a.energy < b.energy; });

  std::vector<EnergyValue> out;
  out.reserve(static_cast<std::size_t>(count));
  const auto kind = energy_kind(partition);
  for (const auto& level : levels) {
    for (std::int64_t i = 0; i < level.degeneracy && static_cast<std::int64_t>(out.size()) < count; ++i) {
      out.push_back(EnergyValue{level.energy, kind});
    }
    if (static_cast<std::int64_t>(out.size()) == count) break;
  }
  return out;
}

Eigen::MatrixXd block_coordinate_basis(std::int64_t block_size) {
  if (block_size < 1) throw InvalidArgument("block size must be positive");
  const auto m = static_cast<Eigen::Index>(block_size);
  Eigen::MatrixXd basis(m, m);
  basis.row(0).setConstant(1.0 / std::sqrt(static_cast<double>(m)));
  Eigen::Index filled = 1;
  for (Eigen::Index i = 0; i < m && filled < m; ++i) {
    Eigen::VectorXd v = Eigen::VectorXd::Unit(m, i);
    // Two Gram-Schmidt passes keep the rows orthonormal to rounding.
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index r = 0; r < filled; ++r) v -= basis.row(r).dot(v) * basis.row(r).transpose();
    }
    const double norm = v.norm();
    if (norm < 1e-8) continue;
    basis.row(filled++) = v.transpose() / norm;
  }
  return basis;
}

std::vector<double> wavefunction_eval(const WavefunctionQuery& query, const EnsembleSpec& spec) {
  const auto& partition = query.partition;
  check_spec_matches(spec, partition);
  query.label.check_compatible(partition);
  const auto n = spec.n_particles();
  const auto k = partition.block_count();

  const double perp_scale = std::sqrt(relative_mode_frequency(spec));  // fourth root of 1 + N R
  std::vector<Eigen::MatrixXd> bases;
  std::vector<double> parallel_scales;
  double norm_factor = 1.0;
  for (std::int64_t j = 0; j < k; ++j) {
    const auto size = partition.block_size(j);
    bases.push_back(block_coordinate_basis(size));
    parallel_scales.push_back(std::sqrt(block_mode_frequency(spec, size)));
    norm_factor *= std::sqrt(parallel_scales.back()) * std::pow(std::sqrt(perp_scale), static_cast<double>(size - 1));
  }

  std::vector<double> amplitudes;
  amplitudes.reserve(query.points.size());
  for (const auto& point : query.points) {
    if (static_cast<std::int64_t>(point.size()) != n) {
      throw InvalidArgument("wavefunction point has " + std::to_string(point.size()) + " coordinates, expected " +
                            std::to_string(n));
    }
    double psi = query.normalized ? norm_factor : 1.0;
    for (std::int64_t j = 0; j < k && psi != 0.0; ++j) {
      const auto members = partition.block(j);
      Eigen::VectorXd local(static_cast<Eigen::Index>(members.size()));
      for (std::size_t i = 0; i < members.size(); ++i) {
        local[static_cast<Eigen::Index>(i)] = point[static_cast<std::size_t>(members[i])];
      }
      const Eigen::VectorXd coords = bases[static_cast<std::size_t>(j)] * local;
      const auto& excitation = query.label.blocks[static_cast<std::size_t>(j)];
      psi *= hermite_function(static_cast<int>(excitation.parallel), parallel_scales[static_cast<std::size_t>(j)] * coords[0]);
      for (std::size_t p = 0; p < excitation.perpendicular.size(); ++p) {
        psi *= hermite_function(static_cast<int>(excitation.perpendicular[p]),
                                perp_scale * coords[static_cast<Eigen::Index>(p) + 1]);
      }
    }
    amplitudes.push_back(psi);
  }
  return amplitudes;
}

}  // namespace oscent
