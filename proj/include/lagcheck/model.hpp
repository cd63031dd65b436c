#pragma once

// Shared domain types: Taylor orders, phase lags, the conductivity tensor,
// sinusoidal cycles and Second-Law verdicts.

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>

#include <Eigen/Dense>

#include "lagcheck/errors.hpp"

namespace lagcheck {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Largest Taylor order accepted by the thermodynamic analyses.
inline constexpr int kMaxThermoOrder = 4;
/// Largest order accepted by the stability analysis.
inline constexpr int kMaxStabilityOrder = 50;

/// Truncation orders of the flux side (n) and the gradient side (m).
struct ModelOrder {
  int n = 0;
  int m = 0;

  friend bool operator==(const ModelOrder&, const ModelOrder&) = default;

  /// The gradient-side view: orders swapped.
  [[nodiscard]] constexpr ModelOrder dual() const { return {m, n}; }
};

inline void require_thermo_order(ModelOrder order) {
  if (order.n < 0 || order.m < 0 || order.n > kMaxThermoOrder || order.m > kMaxThermoOrder) {
    std::ostringstream os;
    os << "orders (n, m) = (" << order.n << ", " << order.m
       << ") outside {0..4}; orders >= 5 give an unstable constitutive equation";
    throw OrderOutOfRange(os.str());
  }
}

/// Phase lags in seconds. A lag paired with a zero order is carried but unused.
struct LagPair {
  double tau_q = 1.0;
  double tau_T = 1.0;

  /// Checks the lags required by `order` are strictly positive and finite.
  void validate(ModelOrder order) const {
    auto bad = [](double t) { return !(t > 0.0) || !std::isfinite(t); };
    if (order.n >= 1 && bad(tau_q)) {
      throw InvalidArgument("tau_q must be > 0 when n >= 1");
    }
    if (order.m >= 1 && bad(tau_T)) {
      throw InvalidArgument("tau_T must be > 0 when m >= 1");
    }
  }

  /// Time unit used to nondimensionalize frequencies: tau_q when the flux side
  /// is active, otherwise tau_T, otherwise 1 s.
  [[nodiscard]] double reference_time(ModelOrder order) const {
    if (order.n >= 1) return tau_q;
    if (order.m >= 1) return tau_T;
    return 1.0;
  }

  /// tau_T expressed in reference units; 1 whenever one side is inactive.
  [[nodiscard]] double effective_ratio(ModelOrder order) const {
    if (order.n >= 1 && order.m >= 1) return tau_T / tau_q;
    return 1.0;
  }

  [[nodiscard]] double ratio() const { return tau_T / tau_q; }

  [[nodiscard]] LagPair swapped() const { return {tau_T, tau_q}; }

  [[nodiscard]] LagPair scaled(double c) const { return {tau_q * c, tau_T * c}; }
};

/// Symmetric positive-definite conductivity k and its inverse K.
class ConductivityTensor {
public:
  [[nodiscard]] const Mat3& k() const { return k_; }
  [[nodiscard]] const Mat3& K() const { return K_; }

  static ConductivityTensor identity() { return ConductivityTensor(Mat3::Identity(), Mat3::Identity()); }

  friend ConductivityTensor validate_tensor(const Mat3& k);

private:
  ConductivityTensor(Mat3 k, Mat3 K) : k_(std::move(k)), K_(std::move(K)) {}

  Mat3 k_;
  Mat3 K_;
};

/// Checks symmetry (relative 1e-12) and positive definiteness, then inverts.
inline ConductivityTensor validate_tensor(const Mat3& k) {
  if (!k.allFinite()) {
    throw InvalidArgument("conductivity tensor has non-finite entries");
  }
  const double scale = k.cwiseAbs().maxCoeff();
  const double asym = (k - k.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) {
    std::ostringstream os;
    os << "conductivity tensor is not symmetric: max|k_ij - k_ji| = " << asym;
    throw NotSymmetric(os.str());
  }
  const Mat3 sym = 0.5 * (k + k.transpose());
  Eigen::SelfAdjointEigenSolver<Mat3> eig(sym, Eigen::EigenvaluesOnly);
  const double lmin = eig.eigenvalues().minCoeff();
  if (!(lmin > 0.0)) {
    std::ostringstream os;
    os << "conductivity tensor is not positive definite: smallest eigenvalue " << lmin;
    throw NotPositiveDefinite(os.str());
  }
  Mat3 K = sym.llt().solve(Mat3::Identity());
  K = 0.5 * (K + K.transpose());
  return ConductivityTensor(sym, K);
}

/// Sinusoidal gradient (or flux) program f cos(wt) + g sin(wt).
struct CyclicHistory {
  Vec3 f = Vec3::UnitX();
  Vec3 g = Vec3::Zero();
  double omega = 1.0;

  void validate() const {
    if (!(omega > 0.0) || !std::isfinite(omega)) {
      throw InvalidArgument("cycle frequency must be > 0");
    }
    if (!(f.squaredNorm() + g.squaredNorm() > 0.0)) {
      throw InvalidArgument("null cycle: f and g both vanish");
    }
  }

  /// Value of the j-th time derivative at time t.
  [[nodiscard]] Vec3 derivative(double t, int j) const {
    // d^j/dt^j [f cos + g sin] cycles through (f,g) -> (g,-f) -> (-f,-g) -> (-g,f).
    const double c = std::cos(omega * t);
    const double s = std::sin(omega * t);
    const double wj = std::pow(omega, j);
    switch (((j % 4) + 4) % 4) {
      case 0: return wj * (f * c + g * s);
      case 1: return wj * (g * c - f * s);
      case 2: return -wj * (f * c + g * s);
      default: return wj * (f * s - g * c);
    }
  }
};

/// f.k.f + g.k.g, the positive factor shared by every cycle integral.
inline double quadratic_form(const ConductivityTensor& t, const CyclicHistory& h) {
  return h.f.dot(t.k() * h.f) + h.g.dot(t.k() * h.g);
}

enum class Mode { Strict, Weak };

enum class VerdictKind { ConsistentStrict, ConsistentWeak, Inconsistent };

struct ConsistencyVerdict {
  VerdictKind kind = VerdictKind::ConsistentStrict;
  std::optional<double> witness_omega;

  [[nodiscard]] bool admissible(Mode mode) const {
    return kind == VerdictKind::ConsistentStrict ||
           (mode == Mode::Weak && kind == VerdictKind::ConsistentWeak);
  }
};

inline std::string_view to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::ConsistentStrict: return "ConsistentStrict";
    case VerdictKind::ConsistentWeak: return "ConsistentWeak";
    case VerdictKind::Inconsistent: return "Inconsistent";
  }
  return "?";
}

inline std::string_view to_string(Mode m) { return m == Mode::Strict ? "strict" : "weak"; }

inline std::optional<Mode> parse_mode(std::string_view s) {
  if (s == "strict") return Mode::Strict;
  if (s == "weak") return Mode::Weak;
  return std::nullopt;
}

}  // namespace lagcheck
