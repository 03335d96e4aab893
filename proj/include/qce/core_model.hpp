#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qce {

using Complex = std::complex<double>;

/// One downlink precoding problem: channel, intended symbols and the
/// modulation / quantization setup they are drawn under.
struct ProblemInstance {
  Eigen::MatrixXcd channel;  // K x N
  std::vector<int> symbols;  // K PSK indices in [0, M)
  int M = 4;
  int L = 4;
  double total_power = 1.0;

  int users() const { return static_cast<int>(channel.rows()); }
  int antennas() const { return static_cast<int>(channel.cols()); }
  Eigen::VectorXcd symbol_vector() const;
};

bool is_power_of_two(long long n);
void validate_modulation_order(int M);
void validate_quantization_level(int L);
void validate_instance(const ProblemInstance& instance);

/// M-PSK points at phases (2m+1)pi/M, m = 0..M-1.
std::vector<Complex> psk_constellation(int M);

struct Detection {
  int index = 0;
  bool degenerate = false;  // y == 0, index fell back to 0
};

/// Hard decision: the angular sector [2m pi/M, 2(m+1) pi/M) containing arg(y).
Detection detect_psk(Complex y, int M);

/// Binary-reflected Gray label of a constellation index, MSB first.
std::vector<std::uint8_t> gray_bits(int index, int M);
int gray_index(std::span<const std::uint8_t> bits);
/// Hamming distance between the Gray labels of two indices.
int gray_bit_errors(int sent, int detected);

// Seeding. Every random stream in the project is a std::mt19937_64 seeded
// from a 64-bit value; sub-streams are keyed with derive_seed, which mixes
// (master, index) through two rounds of the SplitMix64 finalizer.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, n) for n a power of two.
  int uniform_pow2(int n);
  /// Standard normal via Box-Muller; pairs are cached so every two calls
  /// consume exactly two uniforms.
  double gaussian();
  /// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
  Complex complex_gaussian(double variance);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// H with i.i.d. CN(0,1) entries, symbols uniform on [0, M). Deterministic in seed.
ProblemInstance sample_instance(int K, int N, int M, int L, double total_power,
                                std::uint64_t seed);

/// y = H t + n with n ~ CN(0, sigma2 I); sigma2 = 0 returns H t exactly.
Eigen::VectorXcd simulate_transmission(const Eigen::VectorXcd& t,
                                       const Eigen::MatrixXcd& H, double sigma2,
                                       std::uint64_t seed);

}  // namespace qce
