#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mcflab/geometry.hpp"

namespace mcflab {

enum class Quantity { A, H };

struct NormKey {
  Quantity quantity = Quantity::A;
  double alpha = 2.0;

  /// Column label, e.g. "acc_H_2" or "acc_A_2.5".
  std::string label() const;
  friend bool operator==(const NormKey&, const NormKey&) = default;
};

/// Integral over M of |q|^alpha dmu for the frame.
double spatial_integral(const GeometryFrame& frame, NormKey key);

/// Running space-time integrals (left rectangle rule in time).
class NormAccumulator {
 public:
  NormAccumulator() = default;
  explicit NormAccumulator(std::vector<NormKey> keys);

  /// Adds dt times the spatial integral of each registered pair and
  /// refreshes the spatial snapshots from `frame`.
  void update(const GeometryFrame& frame, double dt);
  /// Adds dt times the current spatial snapshots.
  void advance(double dt);
  /// Refreshes the spatial snapshots only.
  void observe(const GeometryFrame& frame);

  std::span<const NormKey> keys() const { return keys_; }
  std::span<const double> values() const { return values_; }
  /// Latest spatial integrals (not yet raised to 1/alpha).
  std::span<const double> spatial() const { return spatial_; }
  /// (integral of |q|^alpha dmu)^{1/alpha} of the latest frame.
  double snapshot_norm(std::size_t i) const;
  /// (running space-time integral)^{1/alpha}.
  double spacetime_norm(std::size_t i) const;
  std::optional<std::size_t> index_of(NormKey key) const;

 private:
  std::vector<NormKey> keys_;
  std::vector<double> values_;
  std::vector<double> spatial_;
};

NormAccumulator update_accumulators(NormAccumulator acc, const GeometryFrame& frame, double dt);

/// Hypothesis witnesses at one time.
struct MonitorRow {
  double t = 0.0;
  double min_kappa = 0.0;
  double min_H = 0.0;
  /// max |A|^2 / H^2, present only while min H > 0.
  std::optional<double> pinching;
  /// min_kappa < -C for the user-supplied C.
  bool below_C = false;
};

MonitorRow hypothesis_monitor(const GeometryFrame& frame, std::optional<double> c_bound = std::nullopt);

enum class MonitorEventKind { KappaBelowBound, MeanCurvatureLostSign, PinchingIncreased };

struct MonitorEvent {
  MonitorEventKind kind;
  double t;
  double value;
};

std::string_view to_string(MonitorEventKind kind);

class MonitorReport {
 public:
  static constexpr double kPinchingSlack = 1e-6;

  explicit MonitorReport(std::optional<double> c_bound = std::nullopt) : c_bound_(c_bound) {}

  void add(const MonitorRow& row);

  std::span<const MonitorRow> rows() const { return rows_; }
  std::span<const MonitorEvent> events() const { return events_; }
  std::optional<double> c_bound() const { return c_bound_; }

  /// Smallest C with h_ij >= -C on every recorded row (0 if kappa never negative).
  double tightest_C() const;
  double initial_min_H() const;
  bool mean_convex_initially() const { return !rows_.empty() && rows_.front().min_H > 0.0; }
  bool mean_convexity_preserved() const;
  bool pinching_monotone() const;

 private:
  std::optional<double> c_bound_;
  std::vector<MonitorRow> rows_;
  std::vector<MonitorEvent> events_;
};

}  // namespace mcflab
