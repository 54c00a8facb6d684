#include "hq/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "hq/codebook.hpp"

namespace hq::oracle {
namespace {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int k = 0; k < 7; ++k) {
    const double dx = h * kXgk[k];
    const double s = f(c - dx) + f(c + dx);
    kronrod += kWgk[k] * s;
    if (k % 2 == 1) gauss += kWg[k / 2] * s;
  }
  return {a, b, kronrod * h, std::abs((kronrod - gauss) * h)};
}

double integrate_smooth(const std::function<double(double)>& f, double a, double b, double tol) {
  std::vector<Segment> segs{gk15(f, a, b)};
  constexpr int kMaxSegments = 20000;
  for (;;) {
    double total = 0.0, err = 0.0;
    for (const auto& s : segs) {
      total += s.value;
      err += s.error;
    }
    if (err <= tol) return total;
    if (static_cast<int>(segs.size()) >= kMaxSegments) {
      std::ostringstream msg;
      msg << "quadrature did not converge on [" << a << ", " << b << "], error estimate " << err;
      throw QuadratureError(msg.str());
    }
    auto worst = std::max_element(segs.begin(), segs.end(),
                                  [](const Segment& x, const Segment& y) { return x.error < y.error; });
    const Segment w = *worst;
    const double mid = 0.5 * (w.a + w.b);
    *worst = gk15(f, w.a, mid);
    segs.push_back(gk15(f, mid, w.b));
  }
}

double enumerate_weighted(const Eigen::VectorXd& a, const std::function<double(double)>& f) {
  return enumerate_rademacher_expectation([&](const Eigen::VectorXd& eps) { return f(a.dot(eps)); },
                                          static_cast<int>(a.size()));
}

}  // namespace

double enumerate_rademacher_expectation(const std::function<double(const Eigen::VectorXd&)>& f,
                                        int d) {
  if (d < 1 || d > kMaxEnumerationDim) {
    throw std::invalid_argument("enumerate_rademacher_expectation: d must be in [1, 12]");
  }
  const long patterns = 1L << d;
  Eigen::VectorXd eps(d);
  double sum = 0.0;
  for (long m = 0; m < patterns; ++m) {
    for (int j = 0; j < d; ++j) eps(j) = (m >> j) & 1 ? 1.0 : -1.0;
    sum += f(eps);
  }
  return sum / static_cast<double>(patterns);
}

double integrate_piecewise(const std::function<double(double)>& f, double a, double b,
                           std::vector<double> breakpoints, double tol) {
  if (!(a < b)) throw std::invalid_argument("integrate_piecewise: need a < b");
  std::vector<double> cuts{a};
  std::sort(breakpoints.begin(), breakpoints.end());
  for (double p : breakpoints) {
    if (p > cuts.back() && p < b) cuts.push_back(p);
  }
  cuts.push_back(b);
  const double piece_tol = tol / static_cast<double>(cuts.size() - 1);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    total += integrate_smooth(f, cuts[k], cuts[k + 1], piece_tol);
  }
  return total;
}

std::vector<double> unbiased_dither_breakpoints(double t, int buckets) {
  const double s = (buckets - 1) * companding_cdf(t);
  return {s - std::floor(s), 0.5};
}

std::vector<double> biased_dither_breakpoints(double t, int buckets) {
  const double s = buckets * companding_cdf(t);
  return {s - std::floor(s)};
}

std::vector<double> reconstruction_map_breakpoints(double a, double b, int buckets) {
  const double delta = 1.0 / (buckets - 1);
  const double lo = (1.0 - delta) / 2;
  std::vector<double> out;
  for (long m = static_cast<long>(std::floor((a - lo) / delta)) - 1; ; ++m) {
    const double p = lo + m * delta;
    if (p >= b) break;
    if (p > a) out.push_back(p);
  }
  return out;
}

Eigen::MatrixXd dense_hadamard(Index d) {
  if (d < 1 || d > 16 || (d & (d - 1)) != 0) {
    throw std::invalid_argument("dense_hadamard: d must be a power of two <= 16");
  }
  Eigen::MatrixXd h(1, 1);
  h(0, 0) = 1.0;
  while (h.rows() < d) {
    const Index n = h.rows();
    Eigen::MatrixXd next(2 * n, 2 * n);
    next << h, h, h, -h;
    h = std::move(next);
  }
  return h / std::sqrt(static_cast<double>(d));
}

EnumerationReport fourth_moment_report(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) throw std::invalid_argument("fourth_moment_report: length mismatch");
  const int d = static_cast<int>(a.size());
  EnumerationReport r;
  r.d = d;
  r.quantity = "E[X^2 Y^2]";
  r.exact = enumerate_rademacher_expectation(
      [&](const Eigen::VectorXd& eps) {
        const double x = a.dot(eps), y = b.dot(eps);
        return x * x * y * y;
      },
      d);
  const double ab = a.dot(b);
  r.reference = 1.0 + 2.0 * ab * ab - 2.0 * a.cwiseAbs2().dot(b.cwiseAbs2());
  r.abs_error = std::abs(r.exact - r.reference);
  return r;
}

EnumerationReport mgf_identity_report(const Eigen::VectorXd& a, double lambda) {
  EnumerationReport r;
  r.d = static_cast<int>(a.size());
  r.quantity = "E exp(lambda X) = prod cosh(lambda a_j), lambda=" + std::to_string(lambda);
  r.exact = enumerate_weighted(a, [lambda](double x) { return std::exp(lambda * x); });
  r.reference = 1.0;
  for (Index j = 0; j < a.size(); ++j) r.reference *= std::cosh(lambda * a(j));
  r.abs_error = std::abs(r.exact - r.reference);
  return r;
}

EnumerationReport mgf_bound_report(const Eigen::VectorXd& a, double lambda) {
  EnumerationReport r;
  r.d = static_cast<int>(a.size());
  r.quantity = "E exp(lambda X) <= exp(lambda^2/2), lambda=" + std::to_string(lambda);
  r.exact = enumerate_weighted(a, [lambda](double x) { return std::exp(lambda * x); });
  r.reference = std::exp(0.5 * lambda * lambda);
  r.abs_error = std::abs(r.exact - r.reference);
  r.is_bound = true;
  return r;
}

EnumerationReport square_mgf_bound_report(const Eigen::VectorXd& a) {
  EnumerationReport r;
  r.d = static_cast<int>(a.size());
  r.quantity = "E exp(X^2/3) <= sqrt(3)";
  r.exact = enumerate_weighted(a, [](double x) { return std::exp(x * x / 3.0); });
  r.reference = std::sqrt(3.0);
  r.abs_error = std::abs(r.exact - r.reference);
  r.is_bound = true;
  return r;
}

}  // namespace hq::oracle
