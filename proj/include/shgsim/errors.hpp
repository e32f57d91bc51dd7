#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace shgsim {

/// Numerical integration produced a non-finite field value.
class integrator_error : public std::runtime_error {
 public:
  integrator_error(std::size_t segment_index, const std::string& what)
      : std::runtime_error(what), segment_index_(segment_index) {}
  std::size_t segment_index() const { return segment_index_; }

 private:
  std::size_t segment_index_;
};

/// Resonator geometry outside the stability region.
class geometry_error : public std::runtime_error {
 public:
  geometry_error(double stability_parameter, const std::string& what)
      : std::runtime_error(what), stability_(stability_parameter) {}
  /// Half-trace of the round-trip ray matrix; stable iff |value| < 1.
  double stability_parameter() const { return stability_; }

 private:
  double stability_;
};

/// Fixed-point iteration failed to reach tolerance within the iteration cap.
class convergence_error : public std::runtime_error {
 public:
  convergence_error(std::size_t iterations, std::vector<double> residual_tail,
                    const std::string& what)
      : std::runtime_error(what),
        iterations_(iterations),
        residual_tail_(std::move(residual_tail)) {}
  std::size_t iterations() const { return iterations_; }
  /// Most recent residuals, oldest first.
  const std::vector<double>& residual_tail() const { return residual_tail_; }

 private:
  std::size_t iterations_;
  std::vector<double> residual_tail_;
};

/// Configuration file error carrying key, line and expected unit.
class config_error : public std::runtime_error {
 public:
  config_error(std::string key, int line, std::string expected,
               const std::string& what)
      : std::runtime_error(what),
        key_(std::move(key)),
        line_(line),
        expected_(std::move(expected)) {}
  const std::string& key() const { return key_; }
  int line() const { return line_; }  // -1 when not tied to a line
  const std::string& expected() const { return expected_; }

 private:
  std::string key_;
  int line_;
  std::string expected_;
};

}  // namespace shgsim
