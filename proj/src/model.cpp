#include "oscent/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "oscent/error.hpp"

namespace oscent {

void PhysicalParams::validate() const {
  if (!(mass > 0.0) || !std::isfinite(mass)) throw InvalidArgument("mass must be positive");
  if (!(trap_frequency > 0.0) || !std::isfinite(trap_frequency)) {
    throw InvalidArgument("trap frequency must be positive");
  }
  if (!(coupling_constant >= 0.0) || !std::isfinite(coupling_constant)) {
    throw InvalidArgument("coupling constant must be nonnegative");
  }
  if (!(hbar > 0.0) || !(boltzmann > 0.0)) throw InvalidArgument("physical constants must be positive");
}

double coupling_ratio(const PhysicalParams& params) {
  params.validate();
  return params.coupling_constant / (params.mass * params.trap_frequency * params.trap_frequency);
}

UnitSystem natural_units(const PhysicalParams& params) {
  params.validate();
  UnitSystem units;
  units.length = std::sqrt(params.hbar / (params.mass * params.trap_frequency));
  units.energy = params.hbar * params.trap_frequency;
  units.temperature = units.energy / params.boltzmann;
  return units;
}

EnsembleSpec::EnsembleSpec(std::int64_t n_particles, double coupling_ratio)
    : n_(n_particles), r_(coupling_ratio) {
  if (n_ < 1) throw InvalidArgument("particle number must be at least 1");
  if (!(r_ >= 0.0) || !std::isfinite(r_)) throw InvalidArgument("coupling ratio must be finite and nonnegative");
}

EnsembleSpec EnsembleSpec::from_physical(std::int64_t n_particles, const PhysicalParams& params) {
  return EnsembleSpec(n_particles, oscent::coupling_ratio(params));
}

Partition::Partition(std::int64_t n, std::vector<std::int64_t> members, std::vector<std::int64_t> offsets)
    : n_(n), members_(std::move(members)), offsets_(std::move(offsets)) {}

Partition Partition::make(std::int64_t n, const std::vector<std::vector<std::int64_t>>& blocks) {
  if (n < 1) throw InvalidArgument("partition needs at least one particle");
  if (blocks.empty()) throw InvalidArgument("partition needs at least one block");
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<std::int64_t> members;
  std::vector<std::int64_t> offsets{0};
  members.reserve(static_cast<std::size_t>(n));
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    const auto& block = blocks[j];
    if (block.empty()) throw InvalidArgument("block " + std::to_string(j) + " is empty");
    std::vector<std::int64_t> sorted(block);
    std::sort(sorted.begin(), sorted.end());
    for (auto index : sorted) {
      if (index < 0 || index >= n) {
        throw InvalidArgument("particle index " + std::to_string(index) + " out of range");
      }
      if (seen[static_cast<std::size_t>(index)]) {
        throw InvalidArgument("particle index " + std::to_string(index) + " appears in more than one block");
      }
      seen[static_cast<std::size_t>(index)] = 1;
      members.push_back(index);
    }
    offsets.push_back(static_cast<std::int64_t>(members.size()));
  }
  if (static_cast<std::int64_t>(members.size()) != n) {
    auto missing = std::find(seen.begin(), seen.end(), 0) - seen.begin();
    throw InvalidArgument("particle index " + std::to_string(missing) + " is not covered by any block");
  }
  return Partition(n, std::move(members), std::move(offsets));
}

Partition Partition::trivial(std::int64_t n) { return equal_blocks(n, 1); }

Partition Partition::full(std::int64_t n) { return equal_blocks(n, n); }

Partition Partition::equal_blocks(std::int64_t n, std::int64_t k) {
  if (n < 1) throw InvalidArgument("partition needs at least one particle");
  if (k < 1 || k > n || n % k != 0) {
    throw InvalidArgument("block count " + std::to_string(k) + " does not divide " + std::to_string(n));
  }
  std::vector<std::int64_t> members(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) members[static_cast<std::size_t>(i)] = i;
  std::vector<std::int64_t> offsets(static_cast<std::size_t>(k) + 1);
  const std::int64_t size = n / k;
  for (std::int64_t j = 0; j <= k; ++j) offsets[static_cast<std::size_t>(j)] = j * size;
  return Partition(n, std::move(members), std::move(offsets));
}

std::int64_t Partition::block_size(std::int64_t j) const {
  if (j < 0 || j >= block_count()) throw InvalidArgument("block index out of range");
  return offsets_[static_cast<std::size_t>(j) + 1] - offsets_[static_cast<std::size_t>(j)];
}

std::span<const std::int64_t> Partition::block(std::int64_t j) const {
  const auto size = block_size(j);
  return std::span<const std::int64_t>(members_).subspan(
      static_cast<std::size_t>(offsets_[static_cast<std::size_t>(j)]), static_cast<std::size_t>(size));
}

std::vector<std::int64_t> Partition::block_sizes() const {
  std::vector<std::int64_t> sizes;
  sizes.reserve(static_cast<std::size_t>(block_count()));
  for (std::size_t j = 0; j + 1 < offsets_.size(); ++j) sizes.push_back(offsets_[j + 1] - offsets_[j]);
  return sizes;
}

}  // namespace oscent
