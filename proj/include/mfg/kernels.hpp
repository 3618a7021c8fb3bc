#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "mfg/operators.hpp"

namespace mfg {

enum class KernelFamily { Periodic1D, Periodic2D, AnisotropicSE };

std::string_view to_string(KernelFamily f);

// Periodic1D:    exp((cos 2pi(x-y) - 1)/s^2)
// Periodic2D:    exp((cos 2pi(x1-y1) + cos 2pi(x2-y2) - 2)/s^2)
// AnisotropicSE: exp(-(x-x')^2/s1^2 - (t-t')^2/s2^2) on (t, x) points;
//                lengthscales are (s1, s2) = (space, time).
struct KernelSpec {
  KernelFamily family = KernelFamily::Periodic1D;
  std::array<double, 2> lengthscales{1.0, 1.0};

  static KernelSpec periodic_1d(double sigma) { return {KernelFamily::Periodic1D, {sigma, sigma}}; }
  static KernelSpec periodic_2d(double sigma) { return {KernelFamily::Periodic2D, {sigma, sigma}}; }
  static KernelSpec anisotropic_se(double space, double time) {
    return {KernelFamily::AnisotropicSE, {space, time}};
  }

  Domain domain() const;
  int dimension() const { return mfg::dimension(domain()); }
  void validate() const;
};

double eval(const KernelSpec& k, const Point& x, const Point& y);
double eval(const KernelSpec& k, std::span<const double> x, std::span<const double> y);

// (L acting on x) (R acting on y) K(x, y); J5 is rejected.
double eval_with_ops(const KernelSpec& k, Op L, Op R, const Point& x, const Point& y);

// Central differences applied to one side of a lower-order closed form,
// relative to the Cauchy-Schwarz scale sqrt((L,L)K(x,x) (R,R)K(y,y)).
double finite_diff_check(const KernelSpec& k, Op L, Op R, const Point& x, const Point& y,
                         double step);

// Fourier coefficients of a stationary profile on the unit torus, from an FFT of
// samples on an n x n grid. Modes run over [-n/2+1, n/2-1]^2; the Nyquist
// row and column are dropped so derivative symbols stay unambiguous.
class SpectralTable {
 public:
  struct Mode {
    int a1, a2;
    double c;
  };

  static SpectralTable from_profile(const std::function<double(double, double)>& profile,
                                    int n_modes);
  static SpectralTable from_kernel(const KernelSpec& k, int n_modes);

  int n_modes() const { return n_; }
  double coefficient(int a1, int a2) const;
  const std::vector<Mode>& modes() const { return modes_; }

 private:
  int n_ = 0;
  std::vector<double> full_;  // n x n, index ((a1 mod n), (a2 mod n))
  std::vector<Mode> modes_;   // non-negligible modes only
};

// Cached per (kernel, n_modes); safe for concurrent readers.
std::shared_ptr<const SpectralTable> spectral_table(const KernelSpec& k, int n_modes);

inline constexpr int kDefaultNonlocalModes = 64;

// J5 applied on the flagged sides, evaluated through the truncated Fourier series.
double eval_nonlocal(const KernelSpec& k, bool left_J5, bool right_J5, const Point& x,
                     const Point& y, int n_modes = kDefaultNonlocalModes);
double eval_nonlocal(const SpectralTable& t, bool left_J5, bool right_J5, const Point& x,
                     const Point& y);

// Any operator pair through the Fourier series of a periodic kernel.
double eval_spectral(const SpectralTable& t, Domain d, Op L, Op R, const Point& x,
                     const Point& y);

// Matrix of eval_spectral over xs x ys, computed as Re(E_x diag(w) E_y^H).
Eigen::MatrixXd spectral_block(const SpectralTable& t, Domain d, Op L, Op R,
                               std::span<const Point> xs, std::span<const Point> ys);

// spectral_block(t, d, L, R, xs, ys) * c without forming the block.
Eigen::VectorXd spectral_apply(const SpectralTable& t, Domain d, Op L, Op R,
                               std::span<const Point> xs, std::span<const Point> ys,
                               const Eigen::VectorXd& c);

// Entry dispatch: closed form unless either side is J5.
double kernel_entry(const KernelSpec& k, Op L, Op R, const Point& x, const Point& y,
                    int n_modes = kDefaultNonlocalModes);

}  // namespace mfg
