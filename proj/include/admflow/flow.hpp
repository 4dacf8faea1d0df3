#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "admflow/admissible.hpp"
#include "admflow/errors.hpp"
#include "admflow/gqe.hpp"
#include "admflow/polynomial.hpp"

namespace admflow {

struct FlowConfig {
  int n = 200;            // grid intervals, even, >= 16
  double cfl = 0.2;       // explicit-step safety factor, in (0, 0.5]
  double dt_max = 0.01;
  double t_end = 50.0;
  double tol_conv = 1e-8;       // convergence threshold on sup|phi|
  double output_interval = 0.05;
};

inline void validate(const FlowConfig& c) {
  if (c.n < 16 || c.n % 2 != 0)
    throw Error(ErrorKind::InvalidInput, "grid intervals must be even and >= 16");
  if (!(c.cfl > 0.0 && c.cfl <= 0.5))
    throw Error(ErrorKind::InvalidInput, "cfl must lie in (0, 0.5]");
  if (!(c.dt_max > 0.0) || !(c.t_end > 0.0) || !(c.tol_conv > 0.0))
    throw Error(ErrorKind::InvalidInput, "dt_max, t_end, tol_conv must be positive");
  if (!(c.output_interval > 0.0))
    throw Error(ErrorKind::InvalidInput, "output_interval must be positive");
}

struct FlowDiagnostics {
  double sup_phi = 0.0;
  double l2_phi = 0.0;      // weighted L2 with measure p_c dz
  double min_theta = 0.0;   // over interior nodes
  double bnd_err_m1 = 0.0;  // |Theta'(-1) - 2|, one-sided monitor
  double bnd_err_p1 = 0.0;  // |Theta'(+1) + 2|
};

struct FlowState {
  std::vector<double> grid;
  std::vector<double> theta;  // zero at both ends while valid
  std::vector<double> phi;    // theta/theta_inf - 1, zero at both ends
  double time = 0.0;
  FlowDiagnostics diagnostics;
};

struct InitialSpec {
  enum class Type { Canonical, Perturbed };
  Type type = Type::Canonical;
  double amplitude = 0.0;
  int power = 1;
};

struct TrajectoryPoint {
  double t = 0.0;
  double sup_phi = 0.0;
  double l2_phi = 0.0;
  double min_theta = 0.0;
  double bnd_err_m1 = 0.0;
  double bnd_err_p1 = 0.0;
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;
  bool converged = false;
  FlowState final_state;
};

// Explicit solver for the reduced flow in the Theta variable,
//   dTheta/dt = Theta V' - Theta' V,  2 V p_c = -P + F_t' + k0 F_t,
// on a uniform grid with the endpoint values pinned at zero. The velocity is
// assembled from the deviation delta = Theta - Theta_inf, which makes the GQE
// profile an exact fixed point of the discretization. Second differences are
// 2nd-order central (they set the overall order); first differences use
// 4th-order stencils, because their truncation does not vanish at the ends
// and would otherwise drift the boundary slope.
class ReducedFlow {
 public:
  ReducedFlow(const GQEProfile& profile, FlowConfig config)
      : prof_(profile), cfg_(config) {
    validate(cfg_);
    const InvariantBundle& inv = prof_.invariants();
    int n = cfg_.n;
    dz_ = 2.0 / n;
    k0_ = prof_.k0();
    z_.resize(n + 1);
    thinf_.resize(n + 1);
    thinfp_.resize(n + 1);
    thinfpp_.resize(n + 1);
    r_.resize(n + 1);
    rp_.resize(n + 1);
    pcv_.resize(n + 1);
    ratio_.resize(n + 1);
    q_.resize(n + 1);

    DPoly pc = DPoly::from(inv.p_c);
    DPoly pc1 = DPoly::from(inv.p_c.derivative());
    DPoly pc2 = DPoly::from(inv.p_c.derivative().derivative());
    DPoly rn = DPoly::from(inv.P_deflated);
    DPoly rd = DPoly::from(inv.base_denominator);
    DPoly rpn = DPoly::from(inv.P_deflated.derivative() * inv.base_denominator -
                            inv.P_deflated * inv.base_denominator.derivative());
    for (int i = 0; i <= n; ++i) {
      double z = -1.0 + 2.0 * i / n;
      z_[i] = z;
      thinf_[i] = prof_.theta(z);
      thinfp_[i] = prof_.theta_prime(z);
      thinfpp_[i] = prof_.theta_second(z);
      pcv_[i] = pc(z);
      double den = rd(z);
      ratio_[i] = rn(z) / den;
      double ratio_p = rpn(z) / (den * den);
      q_[i] = thinf_[i] * ratio_p - ratio_[i] * thinfp_[i];
      if (0 < i && i < n) {
        double r = pc1(z) / pcv_[i];
        r_[i] = r;
        rp_[i] = pc2(z) / pcv_[i] - r * r;
      }
    }
    thinf_[0] = thinf_[n] = 0.0;
  }

  const GQEProfile& profile() const { return prof_; }
  const FlowConfig& config() const { return cfg_; }
  const std::vector<double>& grid() const { return z_; }
  const std::vector<double>& theta_inf() const { return thinf_; }

  FlowState initial_state(const InitialSpec& spec) const {
    int n = cfg_.n;
    FlowState st;
    st.grid = z_;
    st.theta.assign(n + 1, 0.0);
    for (int i = 1; i < n; ++i) {
      double z = z_[i];
      double bump = 1.0 - z * z;
      if (spec.type == InitialSpec::Type::Canonical) {
        st.theta[i] = bump;
      } else {
        if (spec.power < 1)
          throw Error(ErrorKind::InvalidInput,
                      "perturbation power must be >= 1");
        st.theta[i] =
            thinf_[i] * (1.0 + spec.amplitude * std::pow(bump, spec.power));
      }
      if (!(st.theta[i] > 0.0))
        throw Error(ErrorKind::InvalidInput,
                    "initialization is not admissible: Theta <= 0 at z = " +
                        std::to_string(z));
    }
    st.time = 0.0;
    refresh(st);
    return st;
  }

  // V at the nodes; identically zero at the GQE profile and at both ends.
  std::vector<double> velocity(const FlowState& st) const {
    int n = cfg_.n;
    std::vector<double> delta(n + 1), a1(n + 1), a2(n + 1), v(n + 1, 0.0);
    for (int i = 0; i <= n; ++i) delta[i] = st.theta[i] - thinf_[i];
    stencils(delta, a1, a2);
    for (int i = 1; i < n; ++i)
      v[i] = 0.5 * (a1[i] + delta[i] * (r_[i] + k0_));
    return v;
  }

  // dTheta/dt at the nodes.
  std::vector<double> theta_rate(const FlowState& st) const {
    std::vector<double> out(cfg_.n + 1, 0.0);
    rate(st.theta, out);
    return out;
  }

  // RHS of the phi-form of the flow (times 2 Theta_inf):
  // Theta_inf Theta phi'' - (Theta_inf phi')^2 + (P/p_c) Theta_inf phi'
  // + Q (1+phi) phi. The phi derivatives come from the same discrete delta
  // stencils the Theta-form uses (phi = delta/Theta_inf with the analytic
  // profile derivatives), so the comparison with 2*theta_rate isolates the
  // algebra connecting the two forms.
  std::vector<double> phi_form_rhs(const FlowState& st) const {
    int n = cfg_.n;
    std::vector<double> delta(n + 1), a1(n + 1), a2(n + 1), out(n + 1, 0.0);
    for (int i = 0; i <= n; ++i) delta[i] = st.theta[i] - thinf_[i];
    stencils(delta, a1, a2);
    for (int i = 1; i < n; ++i) {
      double phi = st.phi[i];
      double tphi_p = a1[i] - phi * thinfp_[i];  // Theta_inf phi'
      double phi_p = tphi_p / thinf_[i];
      double tphi_pp = a2[i] - 2.0 * phi_p * thinfp_[i] - phi * thinfpp_[i];
      out[i] = st.theta[i] * tphi_pp - tphi_p * tphi_p + ratio_[i] * tphi_p +
               q_[i] * (1.0 + phi) * phi;
    }
    return out;
  }

  // One RK4 step with dt = min(dt_max, cfl dz^2 / max Theta).
  void step(FlowState& st) const {
    double dt = time_step(st);
    advance(st, dt);
  }

  Trajectory run(FlowState& st) const {
    Trajectory traj;
    refresh(st);
    double next_record = st.time;
    while (true) {
      if (st.time >= next_record - 1e-14) {
        record(traj, st);
        next_record += cfg_.output_interval;
      }
      if (st.diagnostics.sup_phi < cfg_.tol_conv) {
        traj.converged = true;
        break;
      }
      if (st.time >= cfg_.t_end) break;
      double dt = time_step(st);
      if (st.time + dt > cfg_.t_end) dt = cfg_.t_end - st.time;
      advance(st, dt);  // refreshes the diagnostics
    }
    if (traj.points.empty() || traj.points.back().t < st.time)
      record(traj, st);
    traj.final_state = st;
    return traj;
  }

  // Recompute phi and the monitored diagnostics from theta.
  void refresh(FlowState& st) const {
    int n = cfg_.n;
    st.phi.assign(n + 1, 0.0);
    FlowDiagnostics d;
    d.min_theta = std::numeric_limits<double>::infinity();
    double l2 = 0.0;
    for (int i = 1; i < n; ++i) {
      st.phi[i] = st.theta[i] / thinf_[i] - 1.0;
      d.sup_phi = std::max(d.sup_phi, std::abs(st.phi[i]));
      d.min_theta = std::min(d.min_theta, st.theta[i]);
      l2 += st.phi[i] * st.phi[i] * pcv_[i] * dz_;
    }
    d.l2_phi = std::sqrt(l2);
    const std::vector<double>& t = st.theta;
    double sl = (-25 * t[0] + 48 * t[1] - 36 * t[2] + 16 * t[3] - 3 * t[4]) /
                (12 * dz_);
    double sr = -(-25 * t[n] + 48 * t[n - 1] - 36 * t[n - 2] + 16 * t[n - 3] -
                  3 * t[n - 4]) /
                (12 * dz_);
    d.bnd_err_m1 = std::abs(sl - 2.0);
    d.bnd_err_p1 = std::abs(sr + 2.0);
    st.diagnostics = d;
  }

 private:
  // First and second differences of a node field vanishing at both ends.
  void stencils(const std::vector<double>& d, std::vector<double>& a1,
                std::vector<double>& a2) const {
    int n = cfg_.n;
    double h = dz_;
    a1[0] = a1[n] = a2[0] = a2[n] = 0.0;
    for (int i = 2; i <= n - 2; ++i)
      a1[i] = (d[i - 2] - 8 * d[i - 1] + 8 * d[i + 1] - d[i + 2]) / (12 * h);
    a1[1] = (-3 * d[0] - 10 * d[1] + 18 * d[2] - 6 * d[3] + d[4]) / (12 * h);
    a1[n - 1] =
        -(-3 * d[n] - 10 * d[n - 1] + 18 * d[n - 2] - 6 * d[n - 3] + d[n - 4]) /
        (12 * h);
    for (int i = 1; i < n; ++i)
      a2[i] = (d[i + 1] - 2 * d[i] + d[i - 1]) / (h * h);
  }

  // All entries of the scratch and output vectors are overwritten.
  void rate(const std::vector<double>& theta, std::vector<double>& out) const {
    int n = cfg_.n;
    scratch_delta_.resize(n + 1);
    scratch_a1_.resize(n + 1);
    scratch_a2_.resize(n + 1);
    for (int i = 0; i <= n; ++i) scratch_delta_[i] = theta[i] - thinf_[i];
    stencils(scratch_delta_, scratch_a1_, scratch_a2_);
    out[0] = out[n] = 0.0;
    for (int i = 1; i < n; ++i) {
      double rk = r_[i] + k0_;
      double v = 0.5 * (scratch_a1_[i] + scratch_delta_[i] * rk);
      double vp = 0.5 * (scratch_a2_[i] + scratch_a1_[i] * rk +
                         scratch_delta_[i] * rp_[i]);
      out[i] = theta[i] * vp - (thinfp_[i] + scratch_a1_[i]) * v;
    }
  }

  double time_step(const FlowState& st) const {
    double mx = 0.0;
    for (double v : st.theta) mx = std::max(mx, v);
    return std::min(cfg_.dt_max, cfg_.cfl * dz_ * dz_ / std::max(mx, 1e-300));
  }

  void advance(FlowState& st, double dt) const {
    int n = cfg_.n;
    std::vector<double>& k1 = rk_k1_;
    std::vector<double>& k2 = rk_k2_;
    std::vector<double>& k3 = rk_k3_;
    std::vector<double>& k4 = rk_k4_;
    std::vector<double>& tmp = rk_tmp_;
    k1.resize(n + 1);
    k2.resize(n + 1);
    k3.resize(n + 1);
    k4.resize(n + 1);
    tmp.resize(n + 1);
    rate(st.theta, k1);
    for (int i = 0; i <= n; ++i) tmp[i] = st.theta[i] + 0.5 * dt * k1[i];
    rate(tmp, k2);
    for (int i = 0; i <= n; ++i) tmp[i] = st.theta[i] + 0.5 * dt * k2[i];
    rate(tmp, k3);
    for (int i = 0; i <= n; ++i) tmp[i] = st.theta[i] + dt * k3[i];
    rate(tmp, k4);
    for (int i = 1; i < n; ++i)
      st.theta[i] += dt / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    st.time += dt;
    for (int i = 1; i < n; ++i) {
      if (!(st.theta[i] > 0.0))
        throw Error(ErrorKind::PositivityLoss,
                    "Theta lost positivity at node " + std::to_string(i) +
                        " (z = " + std::to_string(z_[i]) +
                        ", t = " + std::to_string(st.time) + ")");
    }
    refresh(st);
  }

  void record(Trajectory& traj, const FlowState& st) const {
    const FlowDiagnostics& d = st.diagnostics;
    traj.points.push_back({st.time, d.sup_phi, d.l2_phi, d.min_theta,
                           d.bnd_err_m1, d.bnd_err_p1});
  }

  GQEProfile prof_;
  FlowConfig cfg_;
  double dz_ = 0.0, k0_ = 0.0;
  std::vector<double> z_, thinf_, thinfp_, thinfpp_, r_, rp_, pcv_, ratio_, q_;
  mutable std::vector<double> scratch_delta_, scratch_a1_, scratch_a2_;
  mutable std::vector<double> rk_k1_, rk_k2_, rk_k3_, rk_k4_, rk_tmp_;
};

struct DecayFit {
  double rate = 0.0;
  double r_squared = 0.0;
  bool defined = false;
};

// Least-squares slope of log sup|phi| against t over the last half of the
// trajectory. An all-zero tail leaves the rate undefined.
inline DecayFit decay_fit(const Trajectory& traj) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& p : traj.points)
    if (p.sup_phi > 0.0) pts.emplace_back(p.t, std::log(p.sup_phi));
  DecayFit fit;
  if (pts.size() < 10) return fit;
  std::size_t start = pts.size() / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = pts.size() - start;
  for (std::size_t i = start; i < pts.size(); ++i) {
    sx += pts[i].first;
    sy += pts[i].second;
    sxx += pts[i].first * pts[i].first;
    sxy += pts[i].first * pts[i].second;
  }
  double denom = m * sxx - sx * sx;
  if (denom == 0.0) return fit;
  fit.rate = (m * sxy - sx * sy) / denom;
  double intercept = (sy - fit.rate * sx) / m;
  double ss_res = 0, ss_tot = 0, mean = sy / m;
  for (std::size_t i = start; i < pts.size(); ++i) {
    double e = pts[i].second - (intercept + fit.rate * pts[i].first);
    ss_res += e * e;
    double d = pts[i].second - mean;
    ss_tot += d * d;
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  fit.defined = true;
  return fit;
}

}  // namespace admflow
