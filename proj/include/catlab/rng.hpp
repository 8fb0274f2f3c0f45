#pragma once

#include <array>
#include <cstdint>

namespace catlab {

/// Philox4x64-10 block function (Salmon et al., "Parallel random numbers:
/// as easy as 1, 2, 3", SC'11). Output is a pure function of (counter, key).
std::array<std::uint64_t, 4> philox4x64(std::array<std::uint64_t, 4> counter,
                                        std::array<std::uint64_t, 2> key);

/// Maps the top 53 bits of a word to a double in [0, 1).
inline double to_unit_double(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Uniform draws for one chain step. Each draw is addressed by
/// (substep, lane); lane 0 carries the CAT substeps, other lanes are free
/// for auxiliary choices made in the same step.
class StepDraws {
 public:
  StepDraws(std::array<std::uint64_t, 2> key, std::uint64_t step) : key_(key), step_(step) {}

  double uniform(std::uint64_t substep, std::uint64_t lane = 0) const {
    return to_unit_double(philox4x64({step_, substep, lane, 0}, key_)[0]);
  }
  std::uint64_t step() const { return step_; }

 private:
  std::array<std::uint64_t, 2> key_;
  std::uint64_t step_;
};

/// A reproducible random stream. The key is (master_seed, stream_id) and the
/// counter is (step, substep, lane, 0), so every draw of a trajectory can be
/// recomputed independently of call order, thread or platform integer width.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id, std::uint64_t first_step = 0)
      : master_seed_(master_seed), stream_id_(stream_id), step_(first_step) {}

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  std::uint64_t position() const { return step_; }

  /// Draws for the current step; advances to the next step.
  StepDraws next_step() { return StepDraws({master_seed_, stream_id_}, step_++); }

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::uint64_t step_;
};

}  // namespace catlab
