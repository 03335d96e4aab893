#include "qce/ci_transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qce/errors.hpp"

namespace qce {

BoundaryPair boundary_vectors(Complex s, int M) {
  validate_modulation_order(M);
  const Complex half_step = std::polar(1.0, std::numbers::pi / M);
  return {s * std::conj(half_step), s * half_step};
}

AlphaPair decompose_alpha(Complex y_hat, Complex s, int M) {
  const auto [sa, sb] = boundary_vectors(s, M);
  // Cramer's rule on [Re sa, Re sb; Im sa, Im sb] [aA; aB] = [Re y; Im y].
  const double det = sa.real() * sb.imag() - sb.real() * sa.imag();
  return {(y_hat.real() * sb.imag() - y_hat.imag() * sb.real()) / det,
          (sa.real() * y_hat.imag() - sa.imag() * y_hat.real()) / det};
}

CIMatrix build_A(const ProblemInstance& instance) {
  validate_instance(instance);
  const int K = instance.users();
  const int N = instance.antennas();
  const int M = instance.M;
  const auto points = psk_constellation(M);
  const double scale =
      -std::sqrt(instance.total_power / N) / std::sin(2.0 * std::numbers::pi / M);

  CIMatrix ci;
  ci.M = M;
  ci.A.resize(2 * K, 2 * N);
  for (int k = 0; k < K; ++k) {
    const auto [sa, sb] = boundary_vectors(points[instance.symbols[k]], M);
    // Rows of the 2x2 mixing block: alpha_A reads [Im sB, -Re sB],
    // alpha_B reads [-Im sA, Re sA] from [Re y, Im y].
    const double ra0 = sb.imag(), ra1 = -sb.real();
    const double rb0 = -sa.imag(), rb1 = sa.real();
    for (int i = 0; i < N; ++i) {
      const Complex h = instance.channel(k, i);
      // h^R = [Re h, -Im h; Im h, Re h]
      const double h00 = h.real(), h01 = -h.imag(), h10 = h.imag(), h11 = h.real();
      ci.A(2 * k, 2 * i) = scale * (ra0 * h00 + ra1 * h10);
      ci.A(2 * k, 2 * i + 1) = scale * (ra0 * h01 + ra1 * h11);
      ci.A(2 * k + 1, 2 * i) = scale * (rb0 * h00 + rb1 * h10);
      ci.A(2 * k + 1, 2 * i + 1) = scale * (rb0 * h01 + rb1 * h11);
    }
  }
  return ci;
}

CIObjective ci_objective(const CIMatrix& ci, const Eigen::VectorXd& x) {
  if (x.size() != ci.A.cols()) throw ParameterError("x has wrong dimension");
  const Eigen::VectorXd ax = ci.A * x;
  CIObjective out;
  out.value = -std::numeric_limits<double>::infinity();
  for (Eigen::Index m = 0; m < ax.size(); ++m) {
    if (ax(m) > out.value) {
      out.value = ax(m);
      out.argmax = static_cast<int>(m);
    }
  }
  out.margin = -out.value * std::sin(2.0 * std::numbers::pi / ci.M);
  return out;
}

double safety_margin(const Eigen::VectorXcd& received, const Eigen::VectorXcd& symbols,
                     int M) {
  if (received.size() != symbols.size()) throw ParameterError("size mismatch");
  double smallest = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < received.size(); ++k) {
    const auto alpha = decompose_alpha(received(k), symbols(k), M);
    smallest = std::min({smallest, alpha.alpha_a, alpha.alpha_b});
  }
  return smallest * std::sin(2.0 * std::numbers::pi / M);
}

Eigen::VectorXcd real_to_complex(const Eigen::VectorXd& x) {
  if (x.size() % 2 != 0) throw ParameterError("real vector must have even length");
  Eigen::VectorXcd t(x.size() / 2);
  for (Eigen::Index i = 0; i < t.size(); ++i) t(i) = Complex(x(2 * i), x(2 * i + 1));
  return t;
}

Eigen::VectorXd complex_to_real(const Eigen::VectorXcd& t) {
  Eigen::VectorXd x(2 * t.size());
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    x(2 * i) = t(i).real();
    x(2 * i + 1) = t(i).imag();
  }
  return x;
}

}  // namespace qce
