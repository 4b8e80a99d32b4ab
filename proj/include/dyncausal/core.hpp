#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dyncausal {

enum class ErrorKind {
  Domain,
  Dimension,
  Input,
  Configuration,
  NotEnoughData,
  DegenerateData,
  NotIdentifiable,
  Replay,
  Parse,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline constexpr double kDefaultDeltaMax = 10.0;

using Tick = std::uint64_t;

/// Fixed-length real vector. The tag keeps states and actions from mixing.
template <class Tag>
class RealVec {
 public:
  RealVec() = default;
  explicit RealVec(std::vector<double> values) : values_(std::move(values)) {}
  RealVec(std::initializer_list<double> values) : values_(values) {}

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  std::span<const double> values() const noexcept { return values_; }
  const std::vector<double>& raw() const noexcept { return values_; }
  std::vector<double>& raw() noexcept { return values_; }

  bool all_finite() const noexcept;

  friend bool operator==(const RealVec&, const RealVec&) = default;

 private:
  std::vector<double> values_;
};

struct StateTag;
struct ActionTag;
using StateVec = RealVec<StateTag>;
using ActionVec = RealVec<ActionTag>;

struct Perturbation {
  double delta = 0.0;

  friend bool operator==(const Perturbation&, const Perturbation&) = default;
};

/// Throws ErrorKind::Domain unless delta is finite and |delta| <= delta_max.
void validate(const Perturbation& p, double delta_max = kDefaultDeltaMax);

Perturbation clamp_perturbation(double delta, double delta_max = kDefaultDeltaMax);

struct CausalTuple {
  StateVec state;
  ActionVec action;
  Tick time = 0;
  Perturbation delta;  // the agent's estimate, never the world's true value

  friend bool operator==(const CausalTuple&, const CausalTuple&) = default;
};

struct Transition {
  CausalTuple tuple;
  unsigned horizon = 1;
  StateVec observed;

  friend bool operator==(const Transition&, const Transition&) = default;
};

void validate(const Transition& t, std::size_t d_state, std::size_t d_action);

struct PredictionError {
  double epsilon = 0.0;
  std::vector<double> per_dim;

  friend bool operator==(const PredictionError&, const PredictionError&) = default;
};

/// exp(-delta): dampens for delta > 0, amplifies for delta < 0.
double scale_factor(const Perturbation& p, double delta_max = kDefaultDeltaMax);

/// Mean squared error with per-dimension squared residuals.
PredictionError loss(const StateVec& predicted, const StateVec& observed);

/// Up to 6 significant digits, trailing zeros trimmed, -0 printed as 0.
std::string format_number(double v);

}  // namespace dyncausal
