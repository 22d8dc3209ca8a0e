#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace qwork {

using cxd = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

/// Central numerical tolerances. Every contract guard in the library reads
/// from one of these instead of a scattered literal.
struct Tolerances {
    double hermiticity = 1e-10;
    double unitarity = 1e-9;
    double eigen_reconstruction = 1e-10;
    double degeneracy = 1e-12;       // eigenvalue clustering
    double delta_merge = 1e-12;      // grouping of point masses by location
    double quadrature = 1e-9;
    double propagator = 1e-10;
};

inline const Tolerances& default_tolerances() {
    static const Tolerances tols{};
    return tols;
}

// Violated preconditions (non-Hermitian input, invalid density matrix, ...).
class contract_violation : public std::invalid_argument {
  public:
    explicit contract_violation(const std::string& what) : std::invalid_argument(what) {}
};

// Iterative refinement hit its cap before reaching the requested tolerance.
class convergence_error : public std::runtime_error {
  public:
    convergence_error(const std::string& what, double last_estimate)
        : std::runtime_error(what), last_estimate_(last_estimate) {}
    double last_estimate() const { return last_estimate_; }

  private:
    double last_estimate_;
};

// A discretization grid was too coarse to certify the quantity it computes.
class resolution_error : public std::runtime_error {
  public:
    explicit resolution_error(const std::string& what) : std::runtime_error(what) {}
};

// A duality invariant failed. This is the scientific alarm of the library:
// it carries the offending numbers and is never downgraded to a clamp.
class bound_violation : public std::runtime_error {
  public:
    explicit bound_violation(const std::string& what) : std::runtime_error(what) {}
};

class config_error : public std::runtime_error {
  public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qwork
