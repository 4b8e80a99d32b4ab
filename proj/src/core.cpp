#include "dyncausal/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace dyncausal {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::Dimension: return "dimension error";
    case ErrorKind::Input: return "input error";
    case ErrorKind::Configuration: return "configuration error";
    case ErrorKind::NotEnoughData: return "not-enough-data error";
    case ErrorKind::DegenerateData: return "degenerate-data error";
    case ErrorKind::NotIdentifiable: return "not-identifiable error";
    case ErrorKind::Replay: return "replay error";
    case ErrorKind::Parse: return "parse error";
  }
  return "error";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

template <class Tag>
bool RealVec<Tag>::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

template class RealVec<StateTag>;
template class RealVec<ActionTag>;

void validate(const Perturbation& p, double delta_max) {
  if (!std::isfinite(p.delta) || std::abs(p.delta) > delta_max) {
    throw Error(ErrorKind::Domain,
                "perturbation " + std::to_string(p.delta) + " outside [-" +
                    std::to_string(delta_max) + ", " + std::to_string(delta_max) + "]");
  }
}

Perturbation clamp_perturbation(double delta, double delta_max) {
  return Perturbation{std::clamp(delta, -delta_max, delta_max)};
}

void validate(const Transition& t, std::size_t d_state, std::size_t d_action) {
  if (t.horizon < 1) throw Error(ErrorKind::Input, "transition horizon must be >= 1");
  if (t.tuple.state.size() != d_state || t.observed.size() != d_state) {
    throw Error(ErrorKind::Dimension, "transition state length does not match D_S");
  }
  if (t.tuple.action.size() != d_action) {
    throw Error(ErrorKind::Dimension, "transition action length does not match D_A");
  }
  if (!t.tuple.state.all_finite() || !t.tuple.action.all_finite() || !t.observed.all_finite()) {
    throw Error(ErrorKind::Input, "transition contains non-finite values");
  }
}

double scale_factor(const Perturbation& p, double delta_max) {
  validate(p, delta_max);
  return std::exp(-p.delta);
}

PredictionError loss(const StateVec& predicted, const StateVec& observed) {
  if (predicted.size() != observed.size()) {
    throw Error(ErrorKind::Dimension, "loss: predicted has " + std::to_string(predicted.size()) +
                                          " dims, observed has " + std::to_string(observed.size()));
  }
  PredictionError err;
  err.per_dim.resize(predicted.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const double r = predicted[i] - observed[i];
    err.per_dim[i] = r * r;
    sum += err.per_dim[i];
  }
  err.epsilon = predicted.size() == 0 ? 0.0 : sum / static_cast<double>(predicted.size());
  return err;
}

std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace dyncausal
