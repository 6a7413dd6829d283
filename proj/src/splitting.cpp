#include "rodsed/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rodsed/error.hpp"

namespace rodsed {

void rk4_source_step(MomentField1D& field, std::span<const double> wx, const ModelParams& params, double dt) {
  if (static_cast<int>(wx.size()) != field.cells()) throw Error(ErrorKind::dimension, "gradient field size differs");
  for (int i = 0; i < field.cells(); ++i) rk4_relax_shear(field.cell(i), wx[i], params, dt);
}

void rk4_source_step(MomentField2D& field, std::span<const VelocityGradient2D> gradients, const ModelParams& params,
                     double dt) {
  if (static_cast<int>(gradients.size()) != field.grid().cells())
    throw Error(ErrorKind::dimension, "gradient field size differs");
  for (int c = 0; c < field.grid().cells(); ++c) rk4_relax_2d(field.cell(c), gradients[c], params, dt);
}

double relax_stable_dt(int order, const ModelParams& params, double max_shear) {
  // RK4 covers |h lambda| <= 2.78 on the real axis and 2.82 on the imaginary
  // one; the relaxation substep is dt/2 and 2.0 leaves headroom.
  const double rate = 4.0 * order * order * params.D_r + (order + 1) * max_shear;
  return rate > 0.0 ? 4.0 / rate : std::numeric_limits<double>::infinity();
}

ShearState::ShearState(MomentField1D q, StaggeredVelocity1D w)
    : moments(std::move(q)), velocity(std::move(w)), wx(gradient_w_1d(velocity)), rho_bar(moments.mean_rho()) {
  if (velocity.grid.cells != moments.cells()) throw Error(ErrorKind::dimension, "velocity and moment grids differ");
}

ShearSplitting::ShearSplitting(const ShearState& layout, ModelParams params, WaveOptions wave, GradientTiming timing)
    : params_(params), timing_(timing), hyperbolic_(layout.moments, wave) {
  params_.validate();
}

double ShearSplitting::cfl_dt(const ShearState& state, double cfl) const {
  double shear = 0.0;
  for (double g : state.wx) shear = std::max(shear, std::abs(g));
  return std::min(rodsed::cfl_dt(state.moments, cfl), relax_stable_dt(*std::max_element(state.moments.orders().begin(), state.moments.orders().end()), params_, shear));
}

void ShearSplitting::step(ShearState& s, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorKind::contract, "time step must be > 0");
  for (const Substep& sub : kStrangSubsteps) {
    const double h = sub.fraction * dt;
    switch (sub.kind) {
      case SubstepKind::relax:
        if (timing_ == GradientTiming::current) s.wx = gradient_w_1d(s.velocity);
        rk4_source_step(s.moments, s.wx, params_, h);
        break;
      case SubstepKind::buoyancy:
        buoyancy_source_step_1d(s.velocity, s.moments.rho_profile(), s.rho_bar, h, params_.delta, params_.Re);
        break;
      case SubstepKind::flow:
        cn_diffusion_step(s.velocity, h, params_.Re);
        s.wx = gradient_w_1d(s.velocity);
        break;
      case SubstepKind::hyperbolic:
        hyperbolic_.step(s.moments, h);
        break;
    }
  }
  s.time += dt;
}

TwoDimState::TwoDimState(MomentField2D q, StaggeredVelocity2D v)
    : moments(std::move(q)), velocity(std::move(v)), gradients(gradients_2d(velocity)) {
  if (velocity.grid.nx != moments.grid().nx || velocity.grid.nz != moments.grid().nz)
    throw Error(ErrorKind::dimension, "velocity and moment grids differ");
}

TwoDimSplitting::TwoDimSplitting(const TwoDimState& layout, ModelParams params, WaveOptions wave,
                                 GradientTiming timing, NavierStokesOptions ns)
    : params_(params),
      timing_(timing),
      ns_(ns),
      spectral_(std::make_unique<SpectralSolver2D>(layout.moments.grid())),
      hyperbolic_(layout.moments.grid(), layout.moments.order(), wave) {
  params_.validate();
}

double TwoDimSplitting::cfl_dt(const TwoDimState& state, double cfl) const {
  double shear = 0.0;
  for (const VelocityGradient2D& g : state.gradients)
    shear = std::max({shear, std::abs(g.ux), std::abs(g.uz), std::abs(g.wx), std::abs(g.wz)});
  // The 2D source couples through both vorticity and strain.
  return std::min(cfl_dt_2d(state.moments, state.velocity, cfl),
                  relax_stable_dt(state.moments.order(), params_, 2.0 * shear));
}

void TwoDimSplitting::step(TwoDimState& state, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorKind::contract, "time step must be > 0");
  TwoDimState s = state;
  for (const Substep& sub : kStrangSubsteps) {
    const double h = sub.fraction * dt;
    switch (sub.kind) {
      case SubstepKind::relax: {
        if (timing_ == GradientTiming::current) {
          StaggeredVelocity2D v = s.velocity;
          spectral_->project(v.U, v.W);
          s.gradients = gradients_2d(v);
        }
        rk4_source_step(s.moments, s.gradients, params_, h);
        break;
      }
      case SubstepKind::buoyancy:
        buoyancy_source_step_2d(s.velocity, s.moments.rho_field(), h, params_.delta, params_.Re);
        break;
      case SubstepKind::flow:
        navier_stokes_step_2d(s.velocity, h, params_.Re, *spectral_, ns_);
        s.gradients = gradients_2d(s.velocity);
        break;
      case SubstepKind::hyperbolic: {
        // Transport needs a discretely solenoidal field for conservation; the
        // buoyancy increment is balanced by pressure first.
        StaggeredVelocity2D v = s.velocity;
        spectral_->project(v.U, v.W);
        hyperbolic_.step(s.moments, v, h);
        break;
      }
    }
  }
  s.time += dt;
  state = std::move(s);
}

}  // namespace rodsed
