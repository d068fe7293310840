#include "otto/sweep.hpp"

#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "otto/sudden_approx.hpp"

namespace otto {
namespace {

struct ParamName {
  Param param;
  std::string_view name;
};

constexpr ParamName kParamNames[] = {
    {Param::J, "J"},           {Param::omega_c, "omega_c"}, {Param::omega_h, "omega_h"},
    {Param::T_c, "T_c"},       {Param::T_h, "T_h"},         {Param::kappa_c, "kappa_c"},
    {Param::kappa_h, "kappa_h"}, {Param::gamma_c, "gamma_c"}, {Param::gamma_h, "gamma_h"},
    {Param::tau_c, "tau_c"},   {Param::tau_h, "tau_h"},     {Param::tau_ch, "tau_ch"},
    {Param::tau_hc, "tau_hc"}, {Param::tau_adi, "tau_adi"}, {Param::time_scale, "time_scale"},
    {Param::J_over_Tc, "J_over_Tc"},
};

template <class F>
void parallel_for(std::size_t n, int threads, F&& body) {
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = static_cast<int>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

template <class F>
std::optional<double> guarded(F&& f) {
  try {
    const double v = f();
    if (std::isfinite(v)) return v;
  } catch (const Error&) {
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(Param p) {
  for (const auto& n : kParamNames) {
    if (n.param == p) return n.name;
  }
  return "unknown";
}

std::optional<Param> parse_param(std::string_view name) {
  for (const auto& n : kParamNames) {
    if (n.name == name) return n.param;
  }
  return std::nullopt;
}

double get_param(const CycleParams& p, Param which) {
  switch (which) {
    case Param::J: return p.medium.J;
    case Param::omega_c: return p.medium.omega_c;
    case Param::omega_h: return p.medium.omega_h;
    case Param::T_c: return p.cold.T;
    case Param::T_h: return p.hot.T;
    case Param::kappa_c: return p.cold.kappa_down;
    case Param::kappa_h: return p.hot.kappa_down;
    case Param::gamma_c: return p.cold.gamma;
    case Param::gamma_h: return p.hot.gamma;
    case Param::tau_c: return p.cold.tau;
    case Param::tau_h: return p.hot.tau;
    case Param::tau_ch: return p.compression.tau;
    case Param::tau_hc: return p.expansion.tau;
    case Param::tau_adi: return p.compression.tau;
    case Param::time_scale: return 1.0;
    case Param::J_over_Tc: return p.medium.J / p.cold.T;
  }
  return 0.0;
}

void set_param(CycleParams& p, const CycleParams& base, Param which, double v) {
  switch (which) {
    case Param::J: p.medium.J = v; break;
    case Param::omega_c: p.medium.omega_c = v; break;
    case Param::omega_h: p.medium.omega_h = v; break;
    case Param::T_c: p.cold.T = v; break;
    case Param::T_h: p.hot.T = v; break;
    case Param::kappa_c: p.cold.kappa_down = v; break;
    case Param::kappa_h: p.hot.kappa_down = v; break;
    case Param::gamma_c: p.cold.gamma = v; break;
    case Param::gamma_h: p.hot.gamma = v; break;
    case Param::tau_c: p.cold.tau = v; break;
    case Param::tau_h: p.hot.tau = v; break;
    case Param::tau_ch: p.compression.tau = v; break;
    case Param::tau_hc: p.expansion.tau = v; break;
    case Param::tau_adi: p.compression.tau = p.expansion.tau = v; break;
    case Param::time_scale:
      p.cold.tau = base.cold.tau * v;
      p.hot.tau = base.hot.tau * v;
      p.compression.tau = base.compression.tau * v;
      p.expansion.tau = base.expansion.tau * v;
      break;
    case Param::J_over_Tc: p.cold.T = p.medium.J / v; break;
  }
}

std::vector<double> Axis::values() const {
  if (!list.empty()) return list;
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) {
    const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    v[i] = log ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f;
  }
  if (count > 1) v.back() = hi;
  return v;
}

void Axis::validate() const {
  if (!list.empty()) return;
  if (count < 1) throw InvalidParameter("sweep axis: count must be >= 1");
  if (count > 1 && !(hi > lo)) throw InvalidParameter("sweep axis: empty range");
  if (log && !(lo > 0.0)) throw InvalidParameter("sweep axis: log range needs lo > 0");
}

void SweepSpec::validate() const {
  if (axes.empty() || axes.size() > 2) throw InvalidParameter("sweep needs one or two axes");
  for (const auto& a : axes) a.validate();
  for (const auto& c : constraints) {
    if (!(c.value > 0.0)) throw InvalidParameter("sweep constraint value must be > 0");
    if (c.kind == Constraint::Kind::Product && c.source == c.target) {
      throw InvalidParameter("product constraint ties a parameter to itself");
    }
  }
}

std::array<int, 2> SweepSpec::shape() const {
  std::array<int, 2> s{1, 1};
  for (std::size_t k = 0; k < axes.size(); ++k) {
    s[k] = static_cast<int>(axes[k].values().size());
  }
  return s;
}

CycleParams point_params(const SweepSpec& spec, int i, int j) {
  CycleParams p = spec.base;
  const int idx[2] = {i, j};
  for (std::size_t k = 0; k < spec.axes.size(); ++k) {
    set_param(p, spec.base, spec.axes[k].param, spec.axes[k].values()[idx[k]]);
  }
  for (const auto& c : spec.constraints) {
    if (c.kind == Constraint::Kind::TemperatureRatio) {
      p.hot.T = p.cold.T / c.value;
    } else {
      set_param(p, spec.base, c.target, c.value / get_param(p, c.source));
    }
  }
  return p;
}

ApproxValues approx_values(const CycleParams& p) {
  ApproxValues a;
  a.qc_appr1 = guarded([&] { return qc_appr1(p); });
  a.qc_appr1b = guarded([&] { return qc_appr1b(p); });
  a.qc_appr2 = guarded([&] { return qc_appr2(p); });
  a.qc_appr3a = guarded([&] { return qc_appr3a(p); });
  a.qc_appr3b = guarded([&] { return qc_appr3b(p); });
  a.work_appr = guarded([&] { return work_appr(p); });
  a.work_first_order = guarded([&] { return work_first_order(p); });
  a.cop_appr = guarded([&] { return cop_appr(p); });
  a.su_appr = guarded([&] { return su_appr(p); });
  return a;
}

SweepResult run_sweep(const SweepSpec& spec, int threads) {
  spec.validate();
  SweepResult result;
  result.spec = spec;
  result.shape = spec.shape();
  const int rows = result.shape[0], cols = result.shape[1];
  result.points.resize(static_cast<std::size_t>(rows) * cols);
  std::array<std::vector<double>, 2> values;
  for (std::size_t k = 0; k < spec.axes.size(); ++k) values[k] = spec.axes[k].values();

  parallel_for(result.points.size(), threads, [&](std::size_t n) {
    SweepPoint& pt = result.points[n];
    const int i = static_cast<int>(n) / cols, j = static_cast<int>(n) % cols;
    pt.index = {i, j};
    pt.coord = {values[0][i], spec.axes.size() > 1 ? values[1][j] : 0.0};
    try {
      pt.params = point_params(spec, i, j);
      pt.report = cycle_report(pt.params, spec.report);
    } catch (const Error& e) {
      pt.failure = e.kind();
      pt.reason = e.what();
    }
    if (spec.approximations) pt.approx = approx_values(pt.params);
  });
  return result;
}

IslandMap island_map(const std::vector<CellState>& cells, int rows, int cols) {
  IslandMap m;
  m.rows = rows;
  m.cols = cols;
  m.cells = cells;
  m.labels.assign(cells.size(), -1);
  auto fridge = [&](int i, int j) { return cells[i * cols + j] == CellState::Refrigerating; };
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      if (j + 1 < cols && fridge(i, j) != fridge(i, j + 1)) ++m.row_sign_changes;
      if (i + 1 < rows && fridge(i, j) != fridge(i + 1, j)) ++m.col_sign_changes;
    }
  }
  std::vector<int> stack;
  for (int start = 0; start < rows * cols; ++start) {
    if (cells[start] != CellState::Refrigerating || m.labels[start] >= 0) continue;
    const int label = m.islands();
    m.island_sizes.push_back(0);
    stack.push_back(start);
    m.labels[start] = label;
    while (!stack.empty()) {
      const int c = stack.back();
      stack.pop_back();
      ++m.island_sizes[label];
      const int i = c / cols, j = c % cols;
      const int nb[4][2] = {{i - 1, j}, {i + 1, j}, {i, j - 1}, {i, j + 1}};
      for (const auto& q : nb) {
        if (q[0] < 0 || q[0] >= rows || q[1] < 0 || q[1] >= cols) continue;
        const int k = q[0] * cols + q[1];
        if (cells[k] == CellState::Refrigerating && m.labels[k] < 0) {
          m.labels[k] = label;
          stack.push_back(k);
        }
      }
    }
  }
  return m;
}

IslandMap island_map(const SweepResult& r) {
  if (r.spec.axes.size() != 2) throw InvalidParameter("island map needs a 2-axis sweep");
  std::vector<CellState> cells(r.points.size());
  for (std::size_t n = 0; n < r.points.size(); ++n) {
    const auto& p = r.points[n];
    cells[n] = p.failure ? CellState::Failed
               : p.refrigerating() ? CellState::Refrigerating
                                   : CellState::NonRefrigerating;
  }
  return island_map(cells, r.shape[0], r.shape[1]);
}

PcCurve pc_vs_temperature(const SweepResult& r) {
  if (r.spec.axes.size() != 1 || r.spec.axes[0].param != Param::J_over_Tc) {
    throw InvalidParameter("pc_vs_temperature needs one J_over_Tc axis");
  }
  PcCurve c;
  const int n = static_cast<int>(r.points.size());
  std::optional<int> best;
  for (int i = 0; i < n; ++i) {
    const auto& p = r.points[i];
    c.x.push_back(p.coord[0]);
    if (p.refrigerating()) {
      c.ln_pc.push_back(std::log(p.report->P_c));
      if (!best || *c.ln_pc.back() > *c.ln_pc[*best]) best = i;
      if (!c.cutoff || p.coord[0] > *c.cutoff) c.cutoff = p.coord[0];
    } else {
      c.ln_pc.push_back(std::nullopt);
    }
  }
  if (best && *best > 0 && *best + 1 < n && c.ln_pc[*best - 1] && c.ln_pc[*best + 1]) {
    const int i = *best;
    c.max_index = i;
    const double x0 = c.x[i - 1], x1 = c.x[i], x2 = c.x[i + 1];
    const double y0 = *c.ln_pc[i - 1], y1 = *c.ln_pc[i], y2 = *c.ln_pc[i + 1];
    const double num = (x1 - x0) * (x1 - x0) * (y1 - y2) - (x1 - x2) * (x1 - x2) * (y1 - y0);
    const double den = (x1 - x0) * (y1 - y2) - (x1 - x2) * (y1 - y0);
    c.max_location = den != 0.0 ? x1 - 0.5 * num / den : x1;
  }
  return c;
}

CopCurve cop_vs_power(const SweepResult& r) {
  CopCurve c;
  for (const auto& p : r.points) {
    if (!p.report || !p.report->COP) continue;
    c.coord.push_back(p.coord[0]);
    c.inv_pc.push_back(1.0 / p.report->P_c);
    c.inv_cop.push_back(1.0 / *p.report->COP);
  }
  // Runs over which 1/COP moves monotonically with 1/P_c.
  int start = 0, sign = 0;
  const int n = static_cast<int>(c.inv_pc.size());
  for (int i = 1; i < n; ++i) {
    const double slope = (c.inv_cop[i] - c.inv_cop[i - 1]) / (c.inv_pc[i] - c.inv_pc[i - 1]);
    const int s = slope > 0.0 ? 1 : (slope < 0.0 ? -1 : 0);
    if (sign != 0 && s != sign) {
      c.monotone_runs.push_back({start, i - 1});
      start = i - 1;
    }
    sign = s;
  }
  if (n > 0) c.monotone_runs.push_back({start, n - 1});
  return c;
}

namespace {

struct SampledSegment {
  SegmentKind kind;
  std::vector<double> t;      // local times, t[0] = 0, t.back() = tau
  std::vector<double> omega;  // field at each sample
  std::vector<Mat5> from_start;
};

SampledSegment sample_isochore(const CycleParams& p, Side side, int n) {
  const bool cold = side == Side::Cold;
  const auto& bath = cold ? p.cold : p.hot;
  const double omega = cold ? p.medium.omega_c : p.medium.omega_h;
  const double Omega = big_omega(omega, p.medium.J);
  SampledSegment s{cold ? SegmentKind::ColdIsochore : SegmentKind::HotIsochore, {}, {}, {}};
  for (int k = 0; k <= n; ++k) {
    BathSegment sub = bath;
    sub.tau = k == n ? bath.tau : bath.tau * k / n;
    s.t.push_back(sub.tau);
    s.omega.push_back(omega);
    s.from_start.push_back(k == 0 ? Mat5::Identity() : isochore_matrix(Omega, sub));
  }
  return s;
}

SampledSegment sample_adiabat(const CycleParams& p, Direction d, int n) {
  const bool up = d == Direction::ColdToHot;
  const double J = p.medium.J;
  const double from = up ? p.medium.omega_c : p.medium.omega_h;
  const double to = up ? p.medium.omega_h : p.medium.omega_c;
  const AdiabatSegment& seg = up ? p.compression : p.expansion;
  SampledSegment s{up ? SegmentKind::CompressionAdiabat : SegmentKind::ExpansionAdiabat,
                   {}, {}, {}};
  const double u0 = from / big_omega(from, J), u1 = to / big_omega(to, J);
  // Linear ramps are propagated sample to sample with a common slice count
  // so the samples and the segment map come from the same product.
  const int per_sample = seg.schedule == Schedule::Linear
                             ? std::max(1, (linear_ramp_slices(J, from, to, seg.tau) + n - 1) / n)
                             : 0;
  Mat5 acc = Mat5::Identity();
  for (int k = 0; k <= n; ++k) {
    const double t = k == n ? seg.tau : seg.tau * k / n;
    double w;
    if (k == n) {
      w = to;
    } else if (seg.schedule == Schedule::ConstantMu) {
      const double u = u0 + (u1 - u0) * k / n;
      w = J * u / std::sqrt(1.0 - u * u);
    } else {
      w = from + (to - from) * k / n;
    }
    if (k > 0) {
      if (seg.schedule == Schedule::ConstantMu) {
        acc = constant_mu_matrix(J, from, w, t);
      } else {
        acc = linear_ramp_matrix(J, s.omega.back(), w, t - s.t.back(), per_sample) * acc;
      }
    }
    s.t.push_back(t);
    s.omega.push_back(w);
    s.from_start.push_back(acc);
  }
  return s;
}

}  // namespace

std::vector<TrajectorySample> trajectory(const CycleParams& params, int samples) {
  if (samples < 1) throw InvalidParameter("trajectory: samples must be >= 1");
  if (!params.models.exact()) {
    throw InvalidParameter("trajectory sampling needs exact propagators");
  }
  params.validate();
  const std::array<SampledSegment, 4> segs{
      sample_isochore(params, Side::Cold, samples),
      sample_adiabat(params, Direction::ColdToHot, samples),
      sample_isochore(params, Side::Hot, samples),
      sample_adiabat(params, Direction::HotToCold, samples)};
  std::array<SegmentPropagator, 4> props;
  for (int k = 0; k < 4; ++k) {
    props[k] = {segs[k].from_start.back(), segs[k].kind, segs[k].omega.back()};
  }
  const ObservableVector X = fixed_point(global_propagator(props));

  std::vector<TrajectorySample> out;
  ObservableVector start = X;
  double t0 = 0.0;
  for (const auto& seg : segs) {
    for (std::size_t k = 0; k < seg.t.size(); ++k) {
      TrajectorySample s;
      s.t = t0 + seg.t[k];
      s.segment = seg.kind;
      s.omega = seg.omega[k];
      s.Omega = big_omega(s.omega, params.medium.J);
      s.x = ObservableVector::from_affine(seg.from_start[k] * start.affine());
      s.s = entropies(reconstruct_rho(s.x, s.Omega));
      s.coherence = coherence(s.x, s.Omega);
      out.push_back(s);
    }
    start = out.back().x;
    t0 += seg.t.back();
  }
  return out;
}

std::vector<CoherenceTrace> coherence_vs_adiabat_time(const CycleParams& base,
                                                      const std::vector<double>& tau_adi,
                                                      int samples, int threads) {
  std::vector<CoherenceTrace> traces(tau_adi.size());
  parallel_for(tau_adi.size(), threads, [&](std::size_t n) {
    CycleParams p = base;
    p.compression.tau = p.expansion.tau = tau_adi[n];
    CoherenceTrace& tr = traces[n];
    tr.tau_adi = tau_adi[n];
    for (const auto& s : trajectory(p, samples)) {
      tr.Omega.push_back(s.Omega);
      tr.coherence.push_back(s.coherence);
      tr.max_coherence = std::max(tr.max_coherence, s.coherence);
    }
  });
  return traces;
}

}  // namespace otto
