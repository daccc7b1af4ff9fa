#include "hjgraph/runge_kutta.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hjgraph/error.hpp"

namespace hjg {

namespace {

// Dormand & Prince (1980), RK5(4)7M.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0, a75 = -2187.0 / 6784.0,
                 a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                 e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

constexpr double kSafety = 0.9;
constexpr double kFacMin = 0.2;   // largest shrink per step is 1/5
constexpr double kFacMax = 10.0;  // largest growth per step
constexpr double kBeta = 0.04;    // PI stabilization
constexpr double kExpo = 0.2 - kBeta * 0.75;

}  // namespace

DormandPrince::DormandPrince(OdeRhs rhs, std::size_t dimension, Tolerances tolerances, double time_scale)
    : rhs_(std::move(rhs)),
      dim_(dimension),
      tol_(tolerances),
      min_step_(1e-14 * time_scale),
      k_(7, std::vector<double>(dimension)),
      stage_(dimension),
      y_new_(dimension),
      err_(dimension) {
  if (!(tol_.rtol > 0.0) || !(tol_.atol > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "rtol and atol must be positive");
  }
  if (!(time_scale > 0.0)) throw Error(ErrorCode::InvalidArgument, "time scale must be positive");
}

bool DormandPrince::eval(double t, std::span<const double> y, std::vector<double>& out) {
  ++stats_.rhs_evaluations;
  if (!rhs_(t, y, out)) return false;
  return std::all_of(out.begin(), out.end(), [](double v) { return std::isfinite(v); });
}

double DormandPrince::error_norm(const std::vector<double>& y, const std::vector<double>& y_new) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    const double sc = tol_.atol + tol_.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
    const double r = err_[i] / sc;
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(dim_));
}

// Hairer, Norsett & Wanner, "Solving ODEs I", II.4 starting step size.
double DormandPrince::initial_step(double t, const std::vector<double>& y, double span) {
  double d0 = 0.0, d1 = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    const double sc = tol_.atol + tol_.rtol * std::abs(y[i]);
    d0 += (y[i] / sc) * (y[i] / sc);
    d1 += (k_[0][i] / sc) * (k_[0][i] / sc);
  }
  d0 = std::sqrt(d0 / dim_);
  d1 = std::sqrt(d1 / dim_);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, span);
  for (std::size_t i = 0; i < dim_; ++i) stage_[i] = y[i] + h0 * k_[0][i];
  if (!eval(t + h0, stage_, k_[1])) return std::max(min_step_ * 10.0, h0 * 1e-3);
  double d2 = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    const double sc = tol_.atol + tol_.rtol * std::abs(y[i]);
    const double v = (k_[1][i] - k_[0][i]) / sc;
    d2 += v * v;
  }
  d2 = std::sqrt(d2 / dim_) / h0;
  const double dmax = std::max(d1, d2);
  const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
  return std::min({100.0 * h0, h1, span});
}

void DormandPrince::advance(double& t, std::vector<double>& y, double t_end) {
  if (y.size() != dim_) throw Error(ErrorCode::InvalidArgument, "state dimension mismatch");
  if (!(t_end > t)) return;

  if (!have_derivative_ || derivative_time_ != t) {
    if (!eval(t, y, k_[0])) throw Error(ErrorCode::NumericOverflow, "right-hand side not finite at t=" + std::to_string(t));
    have_derivative_ = true;
    derivative_time_ = t;
  }
  if (h_ <= 0.0) h_ = initial_step(t, y, t_end - t);
  if (max_step_ > 0.0) h_ = std::min(h_, max_step_);

  bool last_rejected = false;
  while (t < t_end) {
    if (h_ < min_step_) {
      throw Error(ErrorCode::StepSizeUnderflow, "step " + std::to_string(h_) + " below minimum at t=" + std::to_string(t));
    }
    const double remaining = t_end - t;
    const bool lands = h_ >= remaining * (1.0 - 1e-12);
    const double h = lands ? remaining : h_;

    bool ok = true;
    const auto stage = [&](const std::vector<double>& combo, std::size_t into, double c) {
      if (ok) ok = eval(t + c * h, combo, k_[into]);
    };
    auto& k1 = k_[0];
    auto& k2 = k_[1];
    auto& k3 = k_[2];
    auto& k4 = k_[3];
    auto& k5 = k_[4];
    auto& k6 = k_[5];
    auto& k7 = k_[6];
    for (std::size_t i = 0; i < dim_; ++i) stage_[i] = y[i] + h * a21 * k1[i];
    stage(stage_, 1, c2);
    if (ok) {
      for (std::size_t i = 0; i < dim_; ++i) stage_[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
      stage(stage_, 2, c3);
    }
    if (ok) {
      for (std::size_t i = 0; i < dim_; ++i) stage_[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
      stage(stage_, 3, c4);
    }
    if (ok) {
      for (std::size_t i = 0; i < dim_; ++i)
        stage_[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      stage(stage_, 4, c5);
    }
    if (ok) {
      for (std::size_t i = 0; i < dim_; ++i)
        stage_[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
      stage(stage_, 5, 1.0);
    }
    if (ok) {
      for (std::size_t i = 0; i < dim_; ++i)
        y_new_[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
      stage(y_new_, 6, 1.0);
    }
    if (!ok) {
      // Trial left the region where f is finite; shrink hard and retry.
      ++stats_.rejected_steps;
      h_ = h * 0.25;
      last_rejected = true;
      continue;
    }

    double err_sup = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
      err_[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      err_sup = std::max(err_sup, std::abs(err_[i]));
    }
    const double err = error_norm(y, y_new_);
    const double fac11 = std::pow(std::max(err, 1e-300), kExpo);

    if (err <= 1.0) {
      double fac = fac11 / std::pow(err_old_, kBeta);
      fac = std::clamp(fac / kSafety, 1.0 / kFacMax, 1.0 / kFacMin);
      double h_next = h / fac;
      if (last_rejected) h_next = std::min(h_next, h);
      err_old_ = std::max(err, 1e-4);

      t = lands ? t_end : t + h;
      y.swap(y_new_);
      k1.swap(k7);
      derivative_time_ = t;
      ++stats_.accepted_steps;
      stats_.error_estimate += err_sup;
      // A step shortened to land on t_end says nothing about the step size
      // the error controller would have chosen.
      if (!lands || h_next > h_) h_ = lands ? std::max(h_, h_next) : h_next;
      if (max_step_ > 0.0) h_ = std::min(h_, max_step_);
      last_rejected = false;
    } else {
      ++stats_.rejected_steps;
      h_ = h / std::min(1.0 / kFacMin, fac11 / kSafety);
      last_rejected = true;
    }
  }
}

UniformSolution integrate_uniform(const OdeRhs& rhs, std::span<const double> y0, double length,
                                  std::size_t intervals, Tolerances tolerances) {
  if (!(length > 0.0) || !std::isfinite(length)) throw Error(ErrorCode::InvalidArgument, "integration length must be positive");
  if (intervals == 0) throw Error(ErrorCode::InvalidArgument, "need at least one output interval");

  UniformSolution out;
  out.dimension = y0.size();
  out.times.resize(intervals + 1);
  out.states.resize((intervals + 1) * y0.size());
  for (std::size_t k = 0; k <= intervals; ++k) {
    out.times[k] = length * static_cast<double>(k) / static_cast<double>(intervals);
  }
  out.times[intervals] = length;

  DormandPrince stepper(rhs, y0.size(), tolerances, length);
  std::vector<double> y(y0.begin(), y0.end());
  std::copy(y.begin(), y.end(), out.states.begin());
  double t = 0.0;
  for (std::size_t k = 1; k <= intervals; ++k) {
    stepper.advance(t, y, out.times[k]);
    std::copy(y.begin(), y.end(), out.states.begin() + static_cast<std::ptrdiff_t>(k * y.size()));
  }
  out.stats = stepper.stats();
  return out;
}

}  // namespace hjg
