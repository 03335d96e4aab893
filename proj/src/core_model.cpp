#include "qce/core_model.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "qce/errors.hpp"

namespace qce {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

int log2_exact(int n) { return std::countr_zero(static_cast<unsigned>(n)); }

}  // namespace

Eigen::VectorXcd ProblemInstance::symbol_vector() const {
  const auto points = psk_constellation(M);
  Eigen::VectorXcd s(static_cast<Eigen::Index>(symbols.size()));
  for (std::size_t k = 0; k < symbols.size(); ++k) s(k) = points[symbols[k]];
  return s;
}

bool is_power_of_two(long long n) { return n > 0 && (n & (n - 1)) == 0; }

void validate_modulation_order(int M) {
  if (M < 4 || !is_power_of_two(M))
    throw ParameterError("PSK order M must be a power of two >= 4, got " +
                         std::to_string(M));
}

void validate_quantization_level(int L) {
  if (L < 4 || !is_power_of_two(L))
    throw ParameterError("quantization level L must be a power of two >= 4, got " +
                         std::to_string(L));
}

void validate_instance(const ProblemInstance& instance) {
  validate_modulation_order(instance.M);
  validate_quantization_level(instance.L);
  if (instance.users() < 1 || instance.antennas() < 1)
    throw ParameterError("channel must have at least one user and one antenna");
  if (static_cast<int>(instance.symbols.size()) != instance.users())
    throw ParameterError("symbol count does not match channel rows");
  for (int s : instance.symbols)
    if (s < 0 || s >= instance.M) throw ParameterError("symbol index out of range");
  if (!(instance.total_power > 0.0) || !std::isfinite(instance.total_power))
    throw ParameterError("total power must be positive");
  if (!instance.channel.allFinite())
    throw ParameterError("channel contains non-finite entries");
}

std::vector<Complex> psk_constellation(int M) {
  validate_modulation_order(M);
  std::vector<Complex> points(M);
  for (int m = 0; m < M; ++m)
    points[m] = std::polar(1.0, (2.0 * m + 1.0) * std::numbers::pi / M);
  return points;
}

Detection detect_psk(Complex y, int M) {
  validate_modulation_order(M);
  if (y == Complex(0.0, 0.0)) return {0, true};
  double phase = std::arg(y);
  if (phase < 0.0) phase += kTwoPi;
  int index = static_cast<int>(std::floor(phase / (kTwoPi / M)));
  // phase can round up to exactly 2pi
  index = ((index % M) + M) % M;
  return {index, false};
}

std::vector<std::uint8_t> gray_bits(int index, int M) {
  validate_modulation_order(M);
  if (index < 0 || index >= M)
    throw ParameterError("constellation index out of range: " + std::to_string(index));
  const int width = log2_exact(M);
  const unsigned gray = static_cast<unsigned>(index) ^ (static_cast<unsigned>(index) >> 1);
  std::vector<std::uint8_t> bits(width);
  for (int b = 0; b < width; ++b) bits[b] = (gray >> (width - 1 - b)) & 1U;
  return bits;
}

int gray_index(std::span<const std::uint8_t> bits) {
  unsigned gray = 0;
  for (auto b : bits) {
    if (b > 1) throw ParameterError("bit values must be 0 or 1");
    gray = (gray << 1) | b;
  }
  unsigned binary = gray;
  for (unsigned shift = gray >> 1; shift != 0; shift >>= 1) binary ^= shift;
  return static_cast<int>(binary);
}

int gray_bit_errors(int sent, int detected) {
  const unsigned a = static_cast<unsigned>(sent) ^ (static_cast<unsigned>(sent) >> 1);
  const unsigned b = static_cast<unsigned>(detected) ^ (static_cast<unsigned>(detected) >> 1);
  return std::popcount(a ^ b);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

int Rng::uniform_pow2(int n) {
  if (!is_power_of_two(n)) throw ParameterError("uniform_pow2 needs a power of two");
  return static_cast<int>(engine_() & static_cast<std::uint64_t>(n - 1));
}

double Rng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  spare_ = radius * std::sin(kTwoPi * u2);
  has_spare_ = true;
  return radius * std::cos(kTwoPi * u2);
}

Complex Rng::complex_gaussian(double variance) {
  const double scale = std::sqrt(variance / 2.0);
  const double re = gaussian();
  const double im = gaussian();
  return {scale * re, scale * im};
}

ProblemInstance sample_instance(int K, int N, int M, int L, double total_power,
                                std::uint64_t seed) {
  validate_modulation_order(M);
  validate_quantization_level(L);
  if (K < 1 || N < 1) throw ParameterError("K and N must be positive");
  if (!(total_power > 0.0)) throw ParameterError("total power must be positive");

  Rng rng(seed);
  ProblemInstance instance;
  instance.M = M;
  instance.L = L;
  instance.total_power = total_power;
  instance.channel.resize(K, N);
  for (int k = 0; k < K; ++k)
    for (int n = 0; n < N; ++n) instance.channel(k, n) = rng.complex_gaussian(1.0);
  instance.symbols.resize(K);
  for (int k = 0; k < K; ++k) instance.symbols[k] = rng.uniform_pow2(M);
  return instance;
}

Eigen::VectorXcd simulate_transmission(const Eigen::VectorXcd& t,
                                       const Eigen::MatrixXcd& H, double sigma2,
                                       std::uint64_t seed) {
  if (H.cols() != t.size()) throw ParameterError("transmit vector size mismatch");
  if (!(sigma2 >= 0.0)) throw ParameterError("noise variance must be >= 0");
  Eigen::VectorXcd y = H * t;
  if (sigma2 == 0.0) return y;
  Rng rng(seed);
  for (Eigen::Index k = 0; k < y.size(); ++k) y(k) += rng.complex_gaussian(sigma2);
  return y;
}

}  // namespace qce
