#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "catlab/kernel.hpp"
#include "catlab/lattice.hpp"

namespace catlab {

enum class InitialKind { kSegment, kSpread, kFile };

struct InitialCondition {
  InitialKind kind = InitialKind::kSpread;
  /// Target diameter for kSpread.
  Coord diameter = 100;
  /// Configuration file for kFile.
  std::filesystem::path path;
};

/// Everything needed to reproduce one ensemble of trajectories.
struct ExperimentSpec {
  ModelParams params;
  std::size_t n = 5;
  InitialCondition initial;
  std::uint64_t steps = 1000;
  std::size_t ensemble = 1;
  std::uint64_t master_seed = 1;
  unsigned jobs = 1;
  RecordOptions record;
  std::filesystem::path out_dir = "out";

  /// Throws ValidationError on any inconsistent field.
  void validate() const;
};

/// n points as k >= 2 e_1-segments laid along the e_1 axis; the first starts
/// at the origin and the last ends at diameter * e_1, so diam = `diameter`
/// exactly. k = max(2, ceil(n / (2m+1))) groups of balanced sizes, larger
/// groups first, intermediate groups evenly spaced. Deterministic.
Configuration spread_configuration(std::size_t d, int m, std::size_t n, Coord diameter);

/// The initial configuration an experiment starts from. For kFile the file
/// must hold exactly n points of dimension d.
Configuration initial_configuration(const ExperimentSpec& spec);

/// Parses the key = value experiment format ([params], [initial],
/// [ensemble], [outputs] sections). Relative file paths resolve against
/// `base_dir`. Unknown sections or keys are rejected.
ExperimentSpec parse_spec(const std::string& text, const std::filesystem::path& base_dir = {});
ExperimentSpec load_spec(const std::filesystem::path& path);
std::string format_spec(const ExperimentSpec& spec);

/// CATLAB_SEED and CATLAB_OUT override the seed and output directory.
void apply_env_overrides(ExperimentSpec& spec);

std::string to_string(InitialKind kind);
InitialKind parse_initial_kind(const std::string& text);

}  // namespace catlab
