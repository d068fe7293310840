#include "otto/limit_cycle.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "otto/errors.hpp"
#include "otto/sudden_approx.hpp"

namespace otto {
namespace {

constexpr double kMarginal = 1e-12;
constexpr double kFirstLawTol = 1e-10;
constexpr double kSecondLawTol = 1e-10;
constexpr double kCopTol = 1e-9;

double inf_norm(const Vec5& v) { return v.cwiseAbs().maxCoeff(); }

SegmentPropagator isochore(const CycleParams& p, Side side, std::vector<std::string>* notes) {
  const auto& order = side == Side::Cold ? p.models.cold : p.models.hot;
  const auto& bath = side == Side::Cold ? p.cold : p.hot;
  if (!order) return isochore_propagator(p.medium, side, bath);
  ApproxPropagator a = approx_isochore_propagator(*order, p.medium, side, bath);
  if (notes) {
    for (auto& n : a.notes) notes->push_back(std::string(side == Side::Cold ? "cold: " : "hot: ") + n);
  }
  return a.propagator;
}

SegmentPropagator adiabat(const CycleParams& p, Direction d, std::vector<std::string>* notes) {
  const auto& seg = d == Direction::ColdToHot ? p.compression : p.expansion;
  if (!p.models.adiabat) return adiabat_propagator(p.medium, d, seg);
  ApproxPropagator a = approx_adiabat_propagator(*p.models.adiabat, p.medium, d, seg.tau);
  if (notes) {
    for (auto& n : a.notes) notes->push_back(std::string(d == Direction::ColdToHot ? "ch: " : "hc: ") + n);
  }
  return a.propagator;
}

}  // namespace

std::array<SegmentPropagator, 4> build_segments(const CycleParams& params,
                                                std::vector<std::string>* notes) {
  params.validate();
  return {isochore(params, Side::Cold, notes), adiabat(params, Direction::ColdToHot, notes),
          isochore(params, Side::Hot, notes), adiabat(params, Direction::HotToCold, notes)};
}

ObservableVector fixed_point(const Mat5& U) {
  const Mat4 M = U.topLeftCorner<4, 4>();
  const Vec4 b = U.col(4).head<4>();
  const double radius = spectral_radius(U);
  const Mat4 A = Mat4::Identity() - M;
  const Eigen::JacobiSVD<Mat4> svd(A);
  const auto& sv = svd.singularValues();
  if (radius >= 1.0 - kMarginal || sv(3) <= kMarginal * std::max(1.0, sv(0))) {
    std::ostringstream os;
    os << "I - M is singular (spectral radius " << radius << "): no unique limit cycle";
    throw MarginalCycle(os.str());
  }
  const Eigen::FullPivLU<Mat4> lu(A);
  Vec4 x = lu.solve(b);
  x += lu.solve(b - A * x);
  return {x(0), x(1), x(2), x(3)};
}

IterationResult iterate_to_limit(const ObservableVector& x0, const Mat5& U,
                                 const IterationOptions& options) {
  if (!(options.tol > 0.0)) throw InvalidParameter("iterate_to_limit: tol must be > 0");
  const double gap = 1.0 - spectral_radius(U);
  if (gap <= kMarginal) {
    std::ostringstream os;
    os << "power iteration cannot converge: spectral gap " << gap;
    throw NoConvergence(os.str());
  }
  const Mat4 M = U.topLeftCorner<4, 4>();
  const double m_norm = M.cwiseAbs().rowwise().sum().maxCoeff();
  const double b_norm = U.col(4).head<4>().cwiseAbs().maxCoeff();
  const double eps = std::numeric_limits<double>::epsilon();

  // Near the rounding floor a slowly rotating mode keeps the step from
  // shrinking further; once the step is below tol and has stopped improving
  // for a few relaxation times the iterate is as converged as it can get.
  const long window = static_cast<long>(std::min(1e6, std::max(1000.0, 20.0 / gap)));
  double best = std::numeric_limits<double>::infinity();
  long since_best = 0;

  Vec5 x = x0.affine();
  for (long k = 1; k <= options.max_iter; ++k) {
    Vec5 next = U * x;
    next(4) = 1.0;
    const double step = inf_norm(next - x);
    const double floor = 4.0 * eps * (m_norm * inf_norm(x) + b_norm);
    x = next;
    if (step < std::max(options.tol * gap, floor)) {
      return {ObservableVector::from_affine(x), k};
    }
    if (step < best) {
      best = step;
      since_best = 0;
    } else if (++since_best > window && best < options.tol) {
      return {ObservableVector::from_affine(x), k};
    }
  }
  std::ostringstream os;
  os << "no convergence after " << options.max_iter << " iterations (spectral gap " << gap << ")";
  throw NoConvergence(os.str());
}

Corners corner_states(const ObservableVector& x_A,
                      const std::array<SegmentPropagator, 4>& segments) {
  Corners c;
  c.x[0] = x_A;
  for (int i = 1; i < 4; ++i) c.x[i] = segments[i - 1].apply(c.x[i - 1]);
  c.A_returned = segments[3].apply(c.x[3]);
  c.closure_residual = inf_norm(c.A_returned.affine() - x_A.affine());
  return c;
}

CycleContext cycle_context(const CycleParams& params) {
  CycleContext c;
  c.T_c = params.cold.T;
  c.T_h = params.hot.T;
  c.Omega_c = params.medium.Omega_c();
  c.Omega_h = params.medium.Omega_h();
  c.cycle_time = params.cycle_time();
  c.exact = params.models.exact();
  return c;
}

CycleReport cycle_report(const std::array<SegmentPropagator, 4>& segments,
                         const CycleContext& ctx, const ReportOptions& options) {
  CycleReport r;
  const Mat5 U = global_propagator(segments);
  const ObservableVector X = fixed_point(U);
  r.spectral_gap = 1.0 - spectral_radius(U);
  r.fixed_point_residual = inf_norm(U * X.affine() - X.affine());

  if (options.run_power_iteration) {
    const IterationResult it =
        iterate_to_limit(equilibrium_vector(ctx.Omega_c, ctx.T_c), U, options.iteration);
    r.n_iterations = it.n_iterations;
    r.iteration_deviation = inf_norm(it.x.affine() - X.affine());
  }

  const Corners c = corner_states(X, segments);
  r.corner_vectors = c.x;
  r.closure_residual = c.closure_residual;
  const double E_A = c.x[0].E, E_B = c.x[1].E, E_C = c.x[2].E, E_D = c.x[3].E;

  r.Q_c = E_B - E_A;
  // Work is the energy change on the two adiabats.
  r.W_on = (E_C - E_B) + (c.A_returned.E - E_D);
  r.Q_h = -(r.Q_c + r.W_on);
  r.first_law_residual = r.Q_c + (E_D - E_C) + r.W_on;
  r.P_c = r.Q_c / ctx.cycle_time;
  r.S_u = -(r.Q_c / ctx.T_c + r.Q_h / ctx.T_h);
  r.cycle_time = ctx.cycle_time;
  r.commutator = commutator_norm(segments[3].matrix * segments[2].matrix * segments[1].matrix,
                                 segments[0].matrix);

  const double inf = std::numeric_limits<double>::infinity();
  r.cop_otto = ctx.Omega_h > ctx.Omega_c ? ctx.Omega_c / (ctx.Omega_h - ctx.Omega_c) : inf;
  r.cop_carnot = ctx.T_h > ctx.T_c ? ctx.T_c / (ctx.T_h - ctx.T_c) : inf;
  if (r.Q_c > 0.0 && r.W_on > 0.0) r.COP = r.Q_c / r.W_on;

  const std::array<double, 4> Omegas{ctx.Omega_c, ctx.Omega_c, ctx.Omega_h, ctx.Omega_h};
  r.corner_Omega = Omegas;
  std::vector<std::string> violations;
  for (int i = 0; i < 4; ++i) {
    r.corner_coherence[i] = coherence(c.x[i], Omegas[i]);
    try {
      r.corner_entropies[i] = entropies(reconstruct_rho(c.x[i], Omegas[i]));
    } catch (const PhysicalityViolation& e) {
      if (ctx.exact) throw;
      violations.push_back(std::string("corner ") + "ABCD"[i] + ": " + e.what());
    }
  }

  auto check = [&](bool ok, const char* what, double value) {
    if (ok) return;
    std::ostringstream os;
    os << what << " (" << value << ")";
    violations.push_back(os.str());
  };
  // Energies grow with Omega_h; the first-law tolerance is relative to that scale.
  const double energy_scale = std::max(1.0, ctx.Omega_h);
  check(std::abs(r.first_law_residual) < kFirstLawTol * energy_scale, "first law residual",
        r.first_law_residual);
  check(r.S_u >= -kSecondLawTol, "negative entropy production", r.S_u);
  if (r.COP) {
    check(*r.COP <= r.cop_otto + kCopTol, "COP above Otto bound", *r.COP);
    check(*r.COP <= r.cop_carnot + kCopTol, "COP above Carnot bound", *r.COP);
  }
  if (ctx.exact && !violations.empty()) throw PhysicalityViolation(violations.front());
  r.violations = std::move(violations);
  return r;
}

CycleReport cycle_report(const CycleParams& params, const ReportOptions& options) {
  std::vector<std::string> notes;
  const auto segments = build_segments(params, &notes);
  CycleReport r = cycle_report(segments, cycle_context(params), options);
  r.notes = std::move(notes);
  return r;
}

}  // namespace otto
