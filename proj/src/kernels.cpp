#include "mfg/kernels.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <tuple>

#include "fft.hpp"
#include "mfg/errors.hpp"

namespace mfg {

using std::numbers::pi;

std::string_view to_string(KernelFamily f) {
  switch (f) {
    case KernelFamily::Periodic1D: return "periodic1d";
    case KernelFamily::Periodic2D: return "periodic2d";
    case KernelFamily::AnisotropicSE: return "anisotropic_se";
  }
  return "?";
}

Domain KernelSpec::domain() const {
  switch (family) {
    case KernelFamily::Periodic1D: return Domain::Torus1D;
    case KernelFamily::Periodic2D: return Domain::Torus2D;
    case KernelFamily::AnisotropicSE: return Domain::SpaceTime;
  }
  return Domain::Torus1D;
}

void KernelSpec::validate() const {
  int n = family == KernelFamily::AnisotropicSE ? 2 : 1;
  for (int i = 0; i < n; ++i)
    if (!(lengthscales[i] > 0.0) || !std::isfinite(lengthscales[i]))
      throw ConfigError("lengthscales", "must be positive and finite");
}

namespace {

// exp(c (cos 2 pi r - 1)) or exp(-c r^2) and derivatives up to order 4.
struct AxisProfile {
  bool periodic = true;
  double c = 1.0;

  std::array<double, 5> jet(double r) const {
    double g1, g2, g3, g4, f;
    if (periodic) {
      const double w = 2 * pi;
      double s = std::sin(w * r), co = std::cos(w * r);
      f = std::exp(c * (co - 1.0));
      g1 = -c * w * s;
      g2 = -c * w * w * co;
      g3 = c * w * w * w * s;
      g4 = c * w * w * w * w * co;
    } else {
      f = std::exp(-c * r * r);
      g1 = -2 * c * r;
      g2 = -2 * c;
      g3 = g4 = 0.0;
    }
    return {f, g1 * f, (g2 + g1 * g1) * f, (g3 + 3 * g1 * g2 + g1 * g1 * g1) * f,
            (g4 + 4 * g1 * g3 + 3 * g2 * g2 + 6 * g1 * g1 * g2 + g1 * g1 * g1 * g1) * f};
  }
};

struct Axes {
  int n = 1;
  std::array<AxisProfile, 2> p;
};

Axes axes_of(const KernelSpec& k) {
  Axes a;
  const auto& s = k.lengthscales;
  switch (k.family) {
    case KernelFamily::Periodic1D:
      a.n = 1;
      a.p[0] = {true, 1.0 / (s[0] * s[0])};
      break;
    case KernelFamily::Periodic2D:
      a.n = 2;
      a.p[0] = a.p[1] = {true, 1.0 / (s[0] * s[0])};
      break;
    case KernelFamily::AnisotropicSE:
      a.n = 2;
      a.p[0] = {false, 1.0 / (s[1] * s[1])};  // t
      a.p[1] = {false, 1.0 / (s[0] * s[0])};  // x
      break;
  }
  return a;
}

}  // namespace

double eval(const KernelSpec& k, const Point& x, const Point& y) {
  Axes a = axes_of(k);
  double v = 1.0;
  for (int i = 0; i < a.n; ++i) v *= a.p[i].jet(x[i] - y[i])[0];
  return v;
}

double eval(const KernelSpec& k, std::span<const double> x, std::span<const double> y) {
  size_t d = static_cast<size_t>(k.dimension());
  if (x.size() != d || y.size() != d)
    throw DimensionMismatch("point dimension does not match kernel family");
  Point px{}, py{};
  for (size_t i = 0; i < d; ++i) px[i] = x[i], py[i] = y[i];
  return eval(k, px, py);
}

double eval_with_ops(const KernelSpec& k, Op L, Op R, const Point& x, const Point& y) {
  if (L == Op::J5 || R == Op::J5)
    throw UnsupportedOperatorPair("J5 pairs are evaluated spectrally");
  Domain d = k.domain();
  Expansion el = expand(L, d), er = expand(R, d);
  Axes a = axes_of(k);
  std::array<std::array<double, 5>, 2> jets{};
  for (int i = 0; i < a.n; ++i) jets[i] = a.p[i].jet(x[i] - y[i]);
  double v = 0.0;
  for (const Monomial& ml : el)
    for (const Monomial& mr : er) {
      double t = ml.coef * mr.coef;
      for (int i = 0; i < a.n; ++i) {
        int o = ml.order[i] + mr.order[i];
        t *= (mr.order[i] % 2 ? -1.0 : 1.0) * jets[i][o];
      }
      v += t;
    }
  return v;
}

namespace {

template <class F>
double apply_fd(Op op, Domain d, F&& f, const Point& x, double h) {
  double v = 0.0;
  for (const Monomial& m : expand(op, d)) {
    for (int a = 0; a < 2; ++a) {
      if (m.order[a] == 0) continue;
      Point xp = x, xm = x;
      xp[a] += h;
      xm[a] -= h;
      if (m.order[a] == 1)
        v += m.coef * (f(xp) - f(xm)) / (2 * h);
      else
        v += m.coef * (f(xp) - 2 * f(x) + f(xm)) / (h * h);
    }
  }
  return v;
}

}  // namespace

double finite_diff_check(const KernelSpec& k, Op L, Op R, const Point& x, const Point& y,
                         double step) {
  if (L == Op::Id && R == Op::Id) return 0.0;
  Domain d = k.domain();
  double exact = eval_with_ops(k, L, R, x, y);
  double fd;
  if (L != Op::Id)
    fd = apply_fd(L, d, [&](const Point& p) { return eval_with_ops(k, Op::Id, R, p, y); }, x,
                  step);
  else
    fd = apply_fd(R, d, [&](const Point& p) { return eval_with_ops(k, L, Op::Id, x, p); }, y,
                  step);
  double scale = std::sqrt(std::abs(eval_with_ops(k, L, L, x, x)) *
                           std::abs(eval_with_ops(k, R, R, y, y)));
  return std::abs(fd - exact) / scale;
}

SpectralTable SpectralTable::from_profile(
    const std::function<double(double, double)>& profile, int n_modes) {
  if (n_modes < 16 || n_modes % 2 != 0)
    throw BadGrid("n_modes must be even and at least 16");
  const int n = n_modes, h = n / 2 + 1;
  std::vector<double> s(static_cast<size_t>(n) * n);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) s[j * n + l] = profile(double(j) / n, double(l) / n);
  auto out = detail::rfft2(s, n);

  SpectralTable t;
  t.n_ = n;
  t.full_.assign(static_cast<size_t>(n) * n, 0.0);
  const double scale = 1.0 / (double(n) * n);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) {
      std::complex<double> c =
          l < h ? out[j * h + l] : std::conj(out[((n - j) % n) * h + (n - l)]);
      t.full_[j * n + l] = c.real() * scale;
    }
  double cmax = 0.0;
  for (double c : t.full_) cmax = std::max(cmax, std::abs(c));
  for (int a1 = -n / 2 + 1; a1 < n / 2; ++a1)
    for (int a2 = -n / 2 + 1; a2 < n / 2; ++a2) {
      double c = t.coefficient(a1, a2);
      if (std::abs(c) > 1e-18 * cmax) t.modes_.push_back({a1, a2, c});
    }
  return t;
}

double SpectralTable::coefficient(int a1, int a2) const {
  if (std::abs(a1) >= n_ / 2 || std::abs(a2) >= n_ / 2) return 0.0;
  int i = (a1 % n_ + n_) % n_, j = (a2 % n_ + n_) % n_;
  return full_[static_cast<size_t>(i) * n_ + j];
}

SpectralTable SpectralTable::from_kernel(const KernelSpec& k, int n_modes) {
  if (k.family == KernelFamily::AnisotropicSE)
    throw UnsupportedOperator("spectral tables need a periodic kernel");
  return from_profile([&](double r1, double r2) { return eval(k, Point{r1, r2}, Point{0, 0}); },
                      n_modes);
}

std::shared_ptr<const SpectralTable> spectral_table(const KernelSpec& k, int n_modes) {
  using Key = std::tuple<int, double, double, int>;
  static std::shared_mutex mutex;
  static std::map<Key, std::shared_ptr<const SpectralTable>> cache;
  Key key{static_cast<int>(k.family), k.lengthscales[0], k.lengthscales[1], n_modes};
  {
    std::shared_lock lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto t = std::make_shared<const SpectralTable>(SpectralTable::from_kernel(k, n_modes));
  std::unique_lock lock(mutex);
  return cache.emplace(key, std::move(t)).first->second;
}

double eval_spectral(const SpectralTable& t, Domain d, Op L, Op R, const Point& x,
                     const Point& y) {
  std::complex<double> s = 0.0;
  for (const auto& m : t.modes()) {
    std::array<double, 2> w{2 * pi * m.a1, 2 * pi * m.a2};
    double ph = w[0] * (x[0] - y[0]) + (dimension(d) > 1 ? w[1] * (x[1] - y[1]) : 0.0);
    s += m.c * symbol(L, d, w) * std::conj(symbol(R, d, w)) *
         std::complex<double>(std::cos(ph), std::sin(ph));
  }
  return s.real();
}

double eval_nonlocal(const SpectralTable& t, bool left_J5, bool right_J5, const Point& x,
                     const Point& y) {
  return eval_spectral(t, Domain::Torus2D, left_J5 ? Op::J5 : Op::Id,
                       right_J5 ? Op::J5 : Op::Id, x, y);
}

double eval_nonlocal(const KernelSpec& k, bool left_J5, bool right_J5, const Point& x,
                     const Point& y, int n_modes) {
  if (n_modes < 16 || n_modes % 2 != 0)
    throw BadGrid("n_modes must be even and at least 16");
  if (k.family != KernelFamily::Periodic2D)
    throw UnsupportedOperator("J5 requires a Periodic2D kernel");
  return eval_nonlocal(*spectral_table(k, n_modes), left_J5, right_J5, x, y);
}

namespace {

void spectral_trig(const std::vector<SpectralTable::Mode>& modes, bool two,
                   std::span<const Point> ps, Eigen::MatrixXd& CS) {
  const Eigen::Index K = static_cast<Eigen::Index>(modes.size());
  CS.resize(static_cast<Eigen::Index>(ps.size()), 2 * K);
  for (Eigen::Index i = 0; i < CS.rows(); ++i)
    for (Eigen::Index k = 0; k < K; ++k) {
      double ph = 2 * pi * (modes[k].a1 * ps[i][0] + (two ? modes[k].a2 * ps[i][1] : 0.0));
      CS(i, k) = std::cos(ph);
      CS(i, K + k) = std::sin(ph);
    }
}

void spectral_weights(const std::vector<SpectralTable::Mode>& modes, Domain d, Op L, Op R,
                      Eigen::VectorXd& wr, Eigen::VectorXd& wi) {
  const Eigen::Index K = static_cast<Eigen::Index>(modes.size());
  wr.resize(K);
  wi.resize(K);
  for (Eigen::Index k = 0; k < K; ++k) {
    std::array<double, 2> w{2 * pi * modes[k].a1, 2 * pi * modes[k].a2};
    std::complex<double> s = modes[k].c * symbol(L, d, w) * std::conj(symbol(R, d, w));
    wr(k) = s.real();
    wi(k) = s.imag();
  }
}

}  // namespace

Eigen::MatrixXd spectral_block(const SpectralTable& t, Domain d, Op L, Op R,
                               std::span<const Point> xs, std::span<const Point> ys) {
  const auto& modes = t.modes();
  const Eigen::Index K = static_cast<Eigen::Index>(modes.size());
  const bool two = dimension(d) > 1;
  // Re(sum_k w_k e^{i(p_x - p_y)}) = [Cx Sx] [[Re w, Im w], [-Im w, Re w]] [Cy Sy]^T
  Eigen::MatrixXd X, Y;
  spectral_trig(modes, two, xs, X);
  spectral_trig(modes, two, ys, Y);
  Eigen::VectorXd wr, wi;
  spectral_weights(modes, d, L, R, wr, wi);
  Eigen::MatrixXd Yw(Y.rows(), 2 * K);
  Yw.leftCols(K) = Y.leftCols(K) * wr.asDiagonal() + Y.rightCols(K) * wi.asDiagonal();
  Yw.rightCols(K) = Y.rightCols(K) * wr.asDiagonal() - Y.leftCols(K) * wi.asDiagonal();
  return X * Yw.transpose();
}

Eigen::VectorXd spectral_apply(const SpectralTable& t, Domain d, Op L, Op R,
                               std::span<const Point> xs, std::span<const Point> ys,
                               const Eigen::VectorXd& c) {
  const auto& modes = t.modes();
  const Eigen::Index K = static_cast<Eigen::Index>(modes.size());
  const bool two = dimension(d) > 1;
  Eigen::MatrixXd X, Y;
  spectral_trig(modes, two, ys, Y);
  Eigen::VectorXd wr, wi;
  spectral_weights(modes, d, L, R, wr, wi);
  Eigen::VectorXd cs = Y.transpose() * c;  // [sum c cos, sum c sin]
  Eigen::VectorXd g(2 * K);
  g.head(K) = wr.cwiseProduct(cs.head(K)) + wi.cwiseProduct(cs.tail(K));
  g.tail(K) = wr.cwiseProduct(cs.tail(K)) - wi.cwiseProduct(cs.head(K));
  Eigen::VectorXd out(static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i0 = 0; i0 < xs.size(); i0 += 1024) {
    std::size_t n = std::min<std::size_t>(1024, xs.size() - i0);
    spectral_trig(modes, two, xs.subspan(i0, n), X);
    out.segment(static_cast<Eigen::Index>(i0), static_cast<Eigen::Index>(n)) = X * g;
  }
  return out;
}

double kernel_entry(const KernelSpec& k, Op L, Op R, const Point& x, const Point& y,
                    int n_modes) {
  if (L != Op::J5 && R != Op::J5) return eval_with_ops(k, L, R, x, y);
  if (k.family != KernelFamily::Periodic2D)
    throw UnsupportedOperator("J5 requires a Periodic2D kernel");
  return eval_spectral(*spectral_table(k, n_modes), k.domain(), L, R, x, y);
}

}  // namespace mfg
