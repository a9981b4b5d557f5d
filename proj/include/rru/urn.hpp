#ifndef RRU_URN_HPP_
#define RRU_URN_HPP_

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rru/inference.hpp"
#include "rru/model.hpp"
#include "rru/rng.hpp"

// The randomly reinforced urn state machine: sequential draws, Bernoulli(Z)
// allocation, same-color reinforcement by the transformed response, and full
// trial-path recording.

namespace rru {

struct AllocationRecord {
  std::uint64_t i = 0;     // 1-based patient index
  int delta = 0;           // 1 = black/B, 0 = white/W
  double y = 0.0;          // observed raw response
  double u = 0.0;          // applied reinforcement U(y)
  double z_before = 0.0;   // Z_{i-1}
};

class UrnState {
 public:
  UrnState(const DesignConfig& cfg, std::uint64_t seed)
      : cfg_(&cfg), rng_(seed), black_mass_(cfg.b), white_mass_(cfg.w) {}

  const DesignConfig& config() const { return *cfg_; }
  std::uint64_t step_count() const { return n_; }
  double black_mass() const { return black_mass_; }
  double white_mass() const { return white_mass_; }
  const ArmSums& arm_B() const { return arm_B_; }
  const ArmSums& arm_W() const { return arm_W_; }

  double z_proportion() const { return black_mass_ / (black_mass_ + white_mass_); }

  /// One allocation: draw v ~ U[0,1), allocate black iff v < Z (strict),
  /// sample the drawn arm's response, reinforce that color by U(y).
  /// Stream consumption is one uniform then one response draw, in that order.
  AllocationRecord step() {
    if (n_ >= cfg_->horizon) throw std::logic_error("UrnState::step: past horizon");
    AllocationRecord rec;
    rec.z_before = z_proportion();
    double v = rng_.next_uniform();
    rec.delta = v < rec.z_before ? 1 : 0;
    const ResponseModel& arm = rec.delta ? cfg_->arm_B : cfg_->arm_W;
    rec.y = rng_.sample(arm);
    rec.u = cfg_->utility(rec.y);
    if (rec.delta) {
      black_mass_ += rec.u;
      arm_B_.count += 1;
      arm_B_.sum_y += rec.y;
      arm_B_.sum_y2 += rec.y * rec.y;
    } else {
      white_mass_ += rec.u;
      arm_W_.count += 1;
      arm_W_.sum_y += rec.y;
      arm_W_.sum_y2 += rec.y * rec.y;
    }
    ++n_;
    rec.i = n_;
    return rec;
  }

  CheckpointStats checkpoint(const TruthSet* truth = nullptr) const {
    return compute_checkpoint(n_, arm_B_, arm_W_, black_mass_, white_mass_, truth);
  }

 private:
  const DesignConfig* cfg_;
  RngStream rng_;
  std::uint64_t n_ = 0;
  double black_mass_;
  double white_mass_;
  ArmSums arm_B_;
  ArmSums arm_W_;
};

inline double z_proportion(const UrnState& s) { return s.z_proportion(); }

/// Full record of one trial plus checkpoint snapshots.
struct TrialPath {
  DesignConfig cfg;
  std::uint64_t seed = 0;
  std::vector<AllocationRecord> records;
  std::vector<CheckpointStats> snapshots;
};

/// Run one trial to the horizon. Identical (cfg, seed) yields an identical
/// path. record_path=false drops the per-step records and keeps only the
/// checkpoint snapshots (statistics are streamed either way).
inline TrialPath run_trial(const DesignConfig& cfg, std::uint64_t seed,
                           const TruthSet* truth = nullptr, bool record_path = true) {
  auto violations = validate_config(cfg);
  if (!violations.empty()) throw ConfigError("run_trial: " + violations.front());
  TrialPath path;
  path.cfg = cfg;
  path.seed = seed;
  if (record_path) path.records.reserve(cfg.horizon);
  path.snapshots.reserve(cfg.checkpoints.size());
  UrnState state(path.cfg, seed);
  std::size_t next_cp = 0;
  for (std::uint64_t i = 0; i < cfg.horizon; ++i) {
    AllocationRecord rec = state.step();
    if (record_path) path.records.push_back(rec);
    if (next_cp < cfg.checkpoints.size() && state.step_count() == cfg.checkpoints[next_cp]) {
      path.snapshots.push_back(state.checkpoint(truth));
      ++next_cp;
    }
  }
  return path;
}

/// The observed-response subsequences {Y_B(tau_k)} and {Y_W(nu_k)} in draw order.
inline std::pair<std::vector<double>, std::vector<double>> observed_subsequences(
    const TrialPath& path) {
  std::vector<double> b_arm, w_arm;
  for (const auto& rec : path.records) {
    (rec.delta ? b_arm : w_arm).push_back(rec.y);
  }
  return {std::move(b_arm), std::move(w_arm)};
}

}  // namespace rru

#endif  // RRU_URN_HPP_
