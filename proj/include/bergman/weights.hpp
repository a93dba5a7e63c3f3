#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "bergman/log_space.hpp"
#include "bergman/radius.hpp"

namespace bergman {

inline constexpr double kDefaultTol = 1e-10;

// Numerical description of a radial weight. Everything is in log space:
// log_density is -inf where the weight vanishes.
class WeightModel {
 public:
  virtual ~WeightModel() = default;

  virtual double log_density(const Radius& r) const = 0;

  virtual std::optional<DeepLog> closed_log_tail(const Radius&) const { return std::nullopt; }
  virtual std::optional<double> closed_log_moment(double) const { return std::nullopt; }
  // log of the integral of r^x w(r) over [a, b].
  virtual std::optional<double> closed_log_segment(double, const Radius&, const Radius&) const { return std::nullopt; }

  // Extra quadrature split points, as t = -log(1 - r).
  virtual std::vector<double> breakpoints_t() const { return {}; }
  virtual std::vector<std::pair<Radius, Radius>> zero_intervals() const { return {}; }

  virtual std::string descriptor() const = 0;
  virtual std::vector<std::string> flags() const { return {}; }
};

// Memoized log-moments, keyed on (x, tol) so a value never depends on which
// caller got there first.
class MomentCache {
 public:
  std::optional<double> find(double x, double tol) const {
    std::shared_lock lock(mutex_);
    auto it = entries_.find({x, tol});
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  void insert(double x, double tol, double log_value) {
    std::unique_lock lock(mutex_);
    entries_.emplace(std::make_pair(x, tol), log_value);
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
  }

 private:
  mutable std::shared_mutex mutex_;
  std::map<std::pair<double, double>, double> entries_;
};

// Data the explicit constructions hand to the class tests: the scales where
// the advertised behaviour is visible.
struct ConstructInfo {
  std::string which;
  std::map<std::string, double> params;
  std::vector<Radius> dhat_scales;
  std::vector<Radius> dcheck_scales;
  std::vector<Radius> cond10_scales;
  std::vector<double> x_gaps;  // gap of r_x for x = 0, 1, 2, ... (thm10, prop12)
  double m_K = 2.0;
  std::string range;
};

class RadialWeight {
 public:
  RadialWeight() = default;
  explicit RadialWeight(std::shared_ptr<const WeightModel> model,
                        std::shared_ptr<const ConstructInfo> info = nullptr)
    : model_(std::move(model)), cache_(std::make_shared<MomentCache>()), info_(std::move(info)) {}

  const WeightModel& model() const { return *model_; }
  std::shared_ptr<const WeightModel> model_ptr() const { return model_; }
  MomentCache& cache() const { return *cache_; }
  const ConstructInfo* construct() const { return info_.get(); }

  std::string descriptor() const { return model_->descriptor(); }
  double log_eval(const Radius& r) const { return model_->log_density(r); }
  double eval(double r) const { return std::exp(model_->log_density(Radius::from_r(r))); }
  std::vector<std::pair<Radius, Radius>> zero_intervals() const { return model_->zero_intervals(); }
  bool has_closed_tail() const { return model_->closed_log_tail(Radius::from_r(0.5)).has_value(); }
  bool has_closed_moment() const { return model_->closed_log_moment(1.0).has_value(); }

 private:
  std::shared_ptr<const WeightModel> model_;
  std::shared_ptr<MomentCache> cache_;
  std::shared_ptr<const ConstructInfo> info_;
};

enum class ModKind { bracket, paren };

RadialWeight parse_weight(const std::string& dsl);

RadialWeight pow_weight(double alpha);
RadialWeight std_weight(double alpha);
RadialWeight exp_weight(double c, double beta);
RadialWeight dblexp_weight();
RadialWeight table_weight(std::vector<double> r, std::vector<double> omega, std::string source = "inline");
// w restricted to the union of [a_i, b_i]; needs a base with a closed tail.
RadialWeight masked_weight(const RadialWeight& base, std::vector<std::pair<Radius, Radius>> intervals,
                           std::string descriptor, std::shared_ptr<const ConstructInfo> info = nullptr);
// The weight r -> (w(r)/v(r)^(1/p))^p' * r used by the two-weight constants.
RadialWeight sigma_weight(const RadialWeight& omega, const RadialWeight& nu, double p);

// log of the tail integral from r to 1.
double tail(const RadialWeight& w, const Radius& r, double tol = kDefaultTol);
double tail(const RadialWeight& w, double r, double tol = kDefaultTol);
DeepLog tail_deep(const RadialWeight& w, const Radius& r, double tol = kDefaultTol);

// log of the x-th moment.
double moment(const RadialWeight& w, double x, double tol = kDefaultTol);
// log of the integral of r^x w(r) over [a, b].
double segment_moment(const RadialWeight& w, double x, const Radius& a, const Radius& b, double tol = kDefaultTol);

RadialWeight modified_weight(const RadialWeight& w, double beta, ModKind kind);

double omega_star(const RadialWeight& w, double r, double tol = kDefaultTol);

// Quadrature fallbacks, exposed so tests can compare them with closed forms.
double tail_by_quadrature(const WeightModel& m, const Radius& r, double tol);
double moment_by_quadrature(const WeightModel& m, double x, double tol);
double segment_by_quadrature(const WeightModel& m, double x, const Radius& a, const Radius& b, double tol);

// Largest t used by radial quadrature (gap about 1e-304).
inline constexpr double kMaxT = 700.0;

struct RadialIntegral {
  double log_value;
  double rel_error;
  bool truncated;  // integrand still visible at kMaxT
};

// log of the integral of exp(log_g(r)) dr between r(t_lo) and r(t_hi), with
// t = -log(1 - r). Pass t_hi = kMaxT to go up to the boundary.
RadialIntegral radial_integral(const std::function<double(const Radius&)>& log_g, double t_lo, double t_hi,
                               const std::vector<double>& breaks_t, double tol);

}  // namespace bergman
