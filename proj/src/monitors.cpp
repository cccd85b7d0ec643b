#include "mcflab/monitors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace mcflab {

std::string NormKey::label() const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "acc_%s_%g", quantity == Quantity::A ? "A" : "H", alpha);
  return buf;
}

namespace {

double integer_power(double x, int k) {
  double out = 1.0;
  for (; k > 0; --k) out *= x;
  return out;
}

}  // namespace

double spatial_integral(const GeometryFrame& frame, NormKey key) {
  const bool whole = key.alpha == std::floor(key.alpha) && key.alpha >= 0.0 && key.alpha <= 16.0;
  const int k = static_cast<int>(key.alpha);
  double sum = 0.0;
  for (std::size_t j = 0; j < frame.size(); ++j) {
    const double x = key.quantity == Quantity::A ? std::sqrt(frame.A2[j]) : std::abs(frame.H[j]);
    const double v = whole ? integer_power(x, k) : std::pow(x, key.alpha);
    sum += v * frame.weight[j];
  }
  return sum;
}

NormAccumulator::NormAccumulator(std::vector<NormKey> keys)
    : keys_(std::move(keys)), values_(keys_.size(), 0.0), spatial_(keys_.size(), 0.0) {}

void NormAccumulator::observe(const GeometryFrame& frame) {
  for (std::size_t i = 0; i < keys_.size(); ++i) spatial_[i] = spatial_integral(frame, keys_[i]);
}

void NormAccumulator::update(const GeometryFrame& frame, double dt) {
  observe(frame);
  advance(dt);
}

void NormAccumulator::advance(double dt) {
  if (dt == 0.0) return;
  for (std::size_t i = 0; i < keys_.size(); ++i) values_[i] += dt * spatial_[i];
}

double NormAccumulator::snapshot_norm(std::size_t i) const {
  return std::pow(spatial_.at(i), 1.0 / keys_.at(i).alpha);
}

double NormAccumulator::spacetime_norm(std::size_t i) const {
  return std::pow(values_.at(i), 1.0 / keys_.at(i).alpha);
}

std::optional<std::size_t> NormAccumulator::index_of(NormKey key) const {
  const auto it = std::find(keys_.begin(), keys_.end(), key);
  if (it == keys_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - keys_.begin());
}

NormAccumulator update_accumulators(NormAccumulator acc, const GeometryFrame& frame, double dt) {
  acc.update(frame, dt);
  return acc;
}

MonitorRow hypothesis_monitor(const GeometryFrame& frame, std::optional<double> c_bound) {
  MonitorRow row;
  row.t = frame.t;
  row.min_kappa = frame.min_kappa();
  row.min_H = frame.min_H();
  if (row.min_H > 0.0) {
    double ratio = 0.0;
    for (std::size_t j = 0; j < frame.size(); ++j) ratio = std::max(ratio, frame.A2[j] / (frame.H[j] * frame.H[j]));
    row.pinching = ratio;
  }
  row.below_C = c_bound.has_value() && row.min_kappa < -*c_bound;
  return row;
}

std::string_view to_string(MonitorEventKind kind) {
  switch (kind) {
    case MonitorEventKind::KappaBelowBound: return "kappa_below_bound";
    case MonitorEventKind::MeanCurvatureLostSign: return "mean_curvature_lost_sign";
    case MonitorEventKind::PinchingIncreased: return "pinching_increased";
  }
  return "unknown";
}

void MonitorReport::add(const MonitorRow& row) {
  if (!rows_.empty()) {
    const MonitorRow& prev = rows_.back();
    if (row.below_C && !prev.below_C) events_.push_back({MonitorEventKind::KappaBelowBound, row.t, row.min_kappa});
    if (prev.min_H > 0.0 && row.min_H <= 0.0) {
      events_.push_back({MonitorEventKind::MeanCurvatureLostSign, row.t, row.min_H});
    }
    if (prev.pinching && row.pinching && *row.pinching > *prev.pinching + kPinchingSlack) {
      events_.push_back({MonitorEventKind::PinchingIncreased, row.t, *row.pinching - *prev.pinching});
    }
  } else if (row.below_C) {
    events_.push_back({MonitorEventKind::KappaBelowBound, row.t, row.min_kappa});
  }
  rows_.push_back(row);
}

double MonitorReport::tightest_C() const {
  double c = 0.0;
  for (const auto& r : rows_) c = std::max(c, -r.min_kappa);
  return c;
}

double MonitorReport::initial_min_H() const { return rows_.empty() ? 0.0 : rows_.front().min_H; }

bool MonitorReport::mean_convexity_preserved() const {
  if (!mean_convex_initially()) return false;
  return std::all_of(rows_.begin(), rows_.end(), [](const MonitorRow& r) { return r.min_H > 0.0; });
}

bool MonitorReport::pinching_monotone() const {
  return std::none_of(events_.begin(), events_.end(),
                      [](const MonitorEvent& e) { return e.kind == MonitorEventKind::PinchingIncreased; });
}

}  // namespace mcflab
