#pragma once

#include <array>
#include <memory>
#include <span>
#include <vector>

#include "rodsed/flow.hpp"
#include "rodsed/solver1d.hpp"
#include "rodsed/solver2d.hpp"

namespace rodsed {

enum class SubstepKind { relax, buoyancy, flow, hyperbolic };

struct Substep {
  SubstepKind kind;
  double fraction;  // of dt
};

/// The nine-step Strang composition shared by the shear and the 2D algorithm.
/// `flow` is the diffusion (1D) or Navier-Stokes (2D) half step, after which
/// the velocity gradient is recomputed.
inline constexpr std::array<Substep, 9> kStrangSubsteps = {{
    {SubstepKind::relax, 0.5},
    {SubstepKind::buoyancy, 0.25},
    {SubstepKind::flow, 0.5},
    {SubstepKind::buoyancy, 0.25},
    {SubstepKind::hyperbolic, 1.0},
    {SubstepKind::buoyancy, 0.25},
    {SubstepKind::flow, 0.5},
    {SubstepKind::buoyancy, 0.25},
    {SubstepKind::relax, 0.5},
}};

/// Which velocity gradient the relaxation substeps see. `latest_computed` uses
/// the gradient from the most recent flow substep (so the last relaxation of a
/// step and the first of the next one share the gradient computed before the
/// final buoyancy quarter step); `current` re-evaluates it from the velocity
/// at the start of each relaxation substep.
enum class GradientTiming { latest_computed, current };

void rk4_source_step(MomentField1D& field, std::span<const double> wx, const ModelParams& params, double dt);
void rk4_source_step(MomentField2D& field, std::span<const VelocityGradient2D> gradients, const ModelParams& params,
                     double dt);

/// Largest dt for which the two half-step RK4 relaxations stay inside the
/// stability region: the source rate is bounded by 4 N^2 D_r + (N+1) |shear|.
double relax_stable_dt(int order, const ModelParams& params, double max_shear);

struct ShearState {
  MomentField1D moments;
  StaggeredVelocity1D velocity;
  std::vector<double> wx;  // most recently computed gradient
  double rho_bar = 0.0;    // fixed by the initial data
  double time = 0.0;

  ShearState(MomentField1D q, StaggeredVelocity1D w);
};

class ShearSplitting {
 public:
  ShearSplitting(const ShearState& layout, ModelParams params, WaveOptions wave = {},
                 GradientTiming timing = GradientTiming::latest_computed);

  void step(ShearState& state, double dt);
  /// dt bound of the hyperbolic substep, capped by relax_stable_dt.
  double cfl_dt(const ShearState& state, double cfl) const;
  const ModelParams& params() const noexcept { return params_; }

 private:
  ModelParams params_;
  GradientTiming timing_;
  WavePropagation1D hyperbolic_;
};

struct TwoDimState {
  MomentField2D moments;
  StaggeredVelocity2D velocity;
  std::vector<VelocityGradient2D> gradients;
  double time = 0.0;

  TwoDimState(MomentField2D q, StaggeredVelocity2D v);
};

class TwoDimSplitting {
 public:
  TwoDimSplitting(const TwoDimState& layout, ModelParams params, WaveOptions wave = {},
                  GradientTiming timing = GradientTiming::latest_computed, NavierStokesOptions ns = {});

  /// Throws a CFL error (leaving `state` untouched) when the velocity reached
  /// before the hyperbolic substep violates its bound; callers retry with a
  /// smaller dt.
  void step(TwoDimState& state, double dt);
  double cfl_dt(const TwoDimState& state, double cfl) const;
  const ModelParams& params() const noexcept { return params_; }

 private:
  ModelParams params_;
  GradientTiming timing_;
  NavierStokesOptions ns_;
  std::unique_ptr<SpectralSolver2D> spectral_;
  WavePropagation2D hyperbolic_;
};

}  // namespace rodsed
