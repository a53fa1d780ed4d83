#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "pcoreset/types.hpp"

namespace pcoreset {

/// Which step the lower barrier takes each iteration. `DeltaLower` moves it
/// by δ_l·AᵀA; `DeltaUpper` moves it by δ_u·AᵀA, the same step as the upper
/// barrier, which lets it overtake the accumulated matrix within a couple of
/// iterations on typical inputs.
enum class LowerBarrierShift { DeltaLower, DeltaUpper };

/// ε must stay below 1/2 so that δ_l = ε - 2ε² is positive.
inline constexpr double kMaxCnwEpsilon = 0.499;

struct CnwConfig {
  Index k = 1;
  double epsilon = 0.25;
  LowerBarrierShift lower_shift = LowerBarrierShift::DeltaLower;
  Index iterations = 0;  // 0 selects ⌈k/ε²⌉

  double delta_u() const { return epsilon + 2.0 * epsilon * epsilon; }
  double delta_l() const { return epsilon - 2.0 * epsilon * epsilon; }
  double lower_delta() const {
    return lower_shift == LowerBarrierShift::DeltaLower ? delta_l() : delta_u();
  }
  Index iteration_count() const;
  void validate() const;
};

/// ⌈k/ε²⌉, ignoring a relative excess of 1e-9 so that ε = √(k/m) yields m.
Index cnw_size(Index k, double epsilon);

/// Rows aᵢ driving the barrier iterations and their Gram matrix G = AᵀA.
struct BarrierSystem {
  DenseRows a;
  Matrix gram;
  Vector gram_diagonal;
  bool diagonal_gram = false;
  bool rank_deficient = false;  // input had rank <= k

  static BarrierSystem from_rows(DenseRows a);
};

enum class BarrierLayout {
  /// A = [A₂ | U_{:,1:2k}] with A₂ = (√k/‖P − P_k‖_F)(P − P Z Zᵀ): d + 2k columns.
  Explicit,
  /// The same rows expressed in the right singular basis of P, which drops
  /// the null directions of A and makes G diagonal: rank(P) columns.
  Compressed,
};

/// Builds the barrier rows from the √w-scaled input. Z is the top-2k right
/// singular block; the Z-coordinates PZ are whitened to U_{:,1:2k}.
BarrierSystem build_barrier_system(const DenseRows& materialized, Index k,
                                   BarrierLayout layout = BarrierLayout::Compressed);

struct BarrierState {
  Matrix upper_shift;  // X_u
  Matrix lower_shift;  // X_l
  Matrix accumulated;  // Σ r_j aⱼᵀaⱼ
  Vector weights;      // r
  Index iteration = 0;
};

BarrierState initial_barrier_state(const BarrierSystem& system, const CnwConfig& config);

/// Per-row scores of one iteration: diag(L), diag(U), the chosen row and the
/// weight increment 1/U_jj.
struct BarrierScores {
  Vector lower;
  Vector upper;
  Index chosen = -1;
  double increment = 0.0;
};

class BarrierError : public std::runtime_error {
 public:
  BarrierError(Index iteration, const std::string& what)
      : std::runtime_error("cnw: " + what + " at iteration " + std::to_string(iteration)),
        iteration_(iteration) {}
  Index iteration() const { return iteration_; }

 private:
  Index iteration_;
};

/// One barrier iteration: shift both barriers, factor Z - X_l and X_u - Z
/// (throws BarrierError when either is not positive definite), score every
/// row and add 1/U_jj to the weight of argmax(diag(L) - diag(U)), ties to
/// the lowest index.
BarrierState barrier_step(BarrierState state, const BarrierSystem& system,
                          const CnwConfig& config, BarrierScores* scores = nullptr);

struct CnwResult {
  Coreset coreset;
  std::vector<Index> selected;  // input rows with nonzero weight, increasing
  Vector raw_weights;           // r after the final iteration
  Index iterations = 0;
  double normalizer = 1.0;      // r is divided by this to give scale weights
  bool rank_deficient = false;
};

/// Deterministic barrier row selection. Returns at most `iteration_count()`
/// rows of the input with weights w(p)·r_p / (T·(δ_u + δ_lower)/2).
CnwResult cnw_detailed(const WeightedPointSet& points, const CnwConfig& config,
                       BarrierLayout layout = BarrierLayout::Compressed);

Coreset cnw(const WeightedPointSet& points, const CnwConfig& config);

}  // namespace pcoreset
