#include "shiftapprox/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "shiftapprox/errors.hpp"

namespace shiftapprox {

namespace {

using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

constexpr std::size_t kIterationCap = 20000;
constexpr double kResidualTol = 1e-8;
constexpr int kBlockWidth = 4;

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

// Entries (k, √(2π) ψ_a[k]) of the unit-norm class function ψ_a, so that the
// Euclidean inner product of scaled coefficient vectors is the L2 product.
std::vector<std::pair<Frequency, Complex>> scaled_psi(ClassVariant cls, Frequency a) {
  const double h = std::sqrt(0.5);
  switch (cls) {
    case ClassVariant::H0:
    case ClassVariant::H2:
      return {{a, Complex(0.0, -h)}, {-a, Complex(0.0, h)}};
    case ClassVariant::H1:
    case ClassVariant::H2Even:
      if (a == 0) return {{0, 1.0}};
      return {{a, h}, {-a, h}};
    case ClassVariant::Periodic:
      return {{a, 1.0}};
  }
  return {};
}

std::vector<Frequency> class_indices(ClassVariant cls, Frequency K) {
  std::vector<Frequency> out;
  switch (cls) {
    case ClassVariant::H0:
      for (Frequency a = 1; a <= K; ++a) out.push_back(a);
      break;
    case ClassVariant::H1:
      for (Frequency a = 0; a <= K; ++a) out.push_back(a);
      break;
    case ClassVariant::H2:
    case ClassVariant::H2Even:
      for (Frequency a = 1; a <= K; a += 2) out.push_back(a);
      break;
    case ClassVariant::Periodic:
      for (Frequency a = -K; a <= K; ++a) out.push_back(a);
      break;
  }
  return out;
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

struct Block {
  std::vector<Frequency> ks;                 // all stored frequencies of the block
  std::vector<Frequency> coords;             // class indices with nonzero weight
  std::vector<double> weights;               // a^r
  std::vector<std::vector<std::pair<std::size_t, Complex>>> psi;  // into ks
  std::vector<Vec> basis;                    // orthonormal, over ks
};

void orthonormalise(std::vector<Vec>& vs) {
  std::vector<Vec> out;
  for (Vec v : vs) {
    const double original = v.norm();
    if (original == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vec& e : out) v -= e * e.dot(v);
    }
    const double norm = v.norm();
    if (norm > 1e-12 * original) out.push_back(v / norm);
  }
  vs = std::move(out);
}

// x = W^{-1/2} (I - P) W^{-1/2} y on one block.
Vec apply_block(const Block& b, const Vec& y) {
  Vec z = Vec::Zero(static_cast<Eigen::Index>(b.ks.size()));
  for (std::size_t i = 0; i < b.coords.size(); ++i) {
    const Complex s = y[static_cast<Eigen::Index>(i)] / b.weights[i];
    for (const auto& [idx, v] : b.psi[i]) z[static_cast<Eigen::Index>(idx)] += s * v;
  }
  for (const Vec& e : b.basis) z -= e * e.dot(z);
  Vec x(static_cast<Eigen::Index>(b.coords.size()));
  for (std::size_t i = 0; i < b.coords.size(); ++i) {
    Complex s = 0.0;
    for (const auto& [idx, v] : b.psi[i]) s += std::conj(v) * z[static_cast<Eigen::Index>(idx)];
    x[static_cast<Eigen::Index>(i)] = s / b.weights[i];
  }
  return x;
}

Mat orthonormal_columns(const Mat& m) {
  Eigen::HouseholderQR<Mat> qr(m);
  return qr.householderQ() * Mat::Identity(m.rows(), m.cols());
}

// Largest eigenvalue of the block operator by subspace iteration with
// Rayleigh-Ritz extraction.
double top_eigenvalue(const Block& b, std::mt19937_64& rng, std::size_t& iterations) {
  const auto dim = static_cast<Eigen::Index>(b.coords.size());
  if (dim == 0) return 0.0;
  const Eigen::Index width = std::min<Eigen::Index>(kBlockWidth, dim);
  std::normal_distribution<double> normal;
  Mat y(dim, width);
  for (Eigen::Index j = 0; j < width; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) y(i, j) = Complex(normal(rng), normal(rng));
  }
  y = orthonormal_columns(y);
  for (std::size_t it = 1; it <= kIterationCap; ++it) {
    ++iterations;
    Mat x(dim, width);
    for (Eigen::Index j = 0; j < width; ++j) x.col(j) = apply_block(b, y.col(j));
    const Mat h = y.adjoint() * x;
    Eigen::SelfAdjointEigenSolver<Mat> eig(0.5 * (h + h.adjoint()));
    const Eigen::Index top = width - 1;
    const double lambda = eig.eigenvalues()[top];
    const Vec v = eig.eigenvectors().col(top);
    const double residual = (x * v - lambda * (y * v)).norm();
    if (lambda <= 0.0 && x.norm() <= 1e-300) return 0.0;
    if (residual <= kResidualTol * lambda) return lambda;
    // Ritz vectors of X span the next iterate, best pair first.
    y = orthonormal_columns(x * eig.eigenvectors().rowwise().reverse());
  }
  throw NonConvergence("power iteration did not converge within " +
                       std::to_string(kIterationCap) + " iterations");
}

void require_constants(const std::vector<BasisElement>& elements) {
  const TruncatedSpectrum one = TruncatedSpectrum::trigonometric({{0, 1.0}});
  const Projection p = project(one, elements);
  if (p.error > 1e-10 * std::sqrt(kTwoPi)) {
    throw std::invalid_argument(
        "the space does not contain the constants; the ratio is unbounded");
  }
}

}  // namespace

RatioResult worst_case_ratio(const RatioProblem& problem, std::uint64_t seed) {
  const ShiftSpaceSpec& space = problem.space;
  const int r = problem.cls.r;
  const Frequency K = problem.cutoff;
  if (r < 1) throw std::invalid_argument("r must be >= 1");
  if (K < 4 * static_cast<Frequency>(space.n)) {
    throw std::invalid_argument("truncation must satisfy K >= 4n");
  }
  const ClassVariant cls = problem.cls.variant;
  if (problem.zero_mean && cls != ClassVariant::Periodic) {
    throw std::invalid_argument("zero_mean applies to the periodic class only");
  }
  const std::vector<BasisElement> elements = basis(space, K);
  if (cls == ClassVariant::H1 || (cls == ClassVariant::Periodic && !problem.zero_mean)) {
    require_constants(elements);
  }

  // Blocks: residue classes mod 2n, merged when an element or a class
  // function touches several of them.
  const std::int64_t period = 2 * static_cast<std::int64_t>(space.n);
  UnionFind uf(static_cast<std::size_t>(period));
  auto residue = [&](Frequency k) { return static_cast<std::size_t>(floor_mod(k, period)); };
  for (const BasisElement& e : elements) {
    const auto& c = e.spectrum.coefficients();
    if (c.empty()) continue;
    const std::size_t first = residue(c.begin()->first);
    for (const auto& [k, v] : c) uf.unite(residue(k), first);
  }
  const std::vector<Frequency> indices = class_indices(cls, K);
  for (const Frequency a : indices) {
    const auto entries = scaled_psi(cls, a);
    for (const auto& [k, v] : entries) uf.unite(residue(k), residue(entries.front().first));
  }

  std::vector<Block> blocks(static_cast<std::size_t>(period));
  std::vector<std::size_t> position(static_cast<std::size_t>(2 * K + 1));
  for (Frequency k = -K; k <= K; ++k) {
    Block& b = blocks[uf.find(residue(k))];
    position[static_cast<std::size_t>(k + K)] = b.ks.size();
    b.ks.push_back(k);
  }
  for (const Frequency a : indices) {
    if (a == 0) continue;  // zero derivative weight
    Block& b = blocks[uf.find(residue(a))];
    b.coords.push_back(a);
    b.weights.push_back(std::pow(std::abs(static_cast<double>(a)), r));
    std::vector<std::pair<std::size_t, Complex>> entries;
    for (const auto& [k, v] : scaled_psi(cls, a)) {
      entries.emplace_back(position[static_cast<std::size_t>(k + K)], v);
    }
    b.psi.push_back(std::move(entries));
  }
  const double scale = std::sqrt(kTwoPi);
  double basis_tail = 0.0;
  for (const BasisElement& e : elements) {
    const auto& c = e.spectrum.coefficients();
    if (c.empty()) continue;
    Block& b = blocks[uf.find(residue(c.begin()->first))];
    Vec v = Vec::Zero(static_cast<Eigen::Index>(b.ks.size()));
    for (const auto& [k, value] : c) {
      if (std::abs(k) > K) continue;
      v[static_cast<Eigen::Index>(position[static_cast<std::size_t>(k + K)])] = scale * value;
    }
    b.basis.push_back(std::move(v));
    if (e.d_norm > 0.0) basis_tail = std::max(basis_tail, e.d_tail / e.d_norm);
  }

  RatioResult result;
  std::mt19937_64 rng(seed);
  for (Block& b : blocks) {
    if (b.coords.empty()) continue;
    orthonormalise(b.basis);
    result.value = std::max(result.value, top_eigenvalue(b, rng, result.iterations));
  }
  const double beyond = std::pow(static_cast<double>(K + 1), -r);
  const double root = std::sqrt(result.value) + beyond;
  result.truncation_gap = root * root - result.value;
  result.basis_tail = basis_tail;
  return result;
}

double ellipsoid_width(const FunctionClassTag& cls, int dimension, Frequency cutoff) {
  if (cls.r < 1) throw std::invalid_argument("r must be >= 1");
  if (dimension < 0) throw std::invalid_argument("dimension must be >= 0");
  std::vector<double> axes;
  for (const Frequency a : class_indices(cls.variant, cutoff)) {
    axes.push_back(a == 0 ? std::numeric_limits<double>::infinity()
                          : std::pow(std::abs(static_cast<double>(a)), -cls.r));
  }
  // Real harmonics: sine and cosine of one frequency are distinct axes for
  // the periodic class, which `class_indices` already lists as ±a.
  const auto index = static_cast<std::size_t>(dimension);
  if (index >= axes.size()) {
    throw TruncationTooSmall("semiaxis " + std::to_string(dimension + 1) +
                             " lies beyond the truncation K = " + std::to_string(cutoff));
  }
  std::nth_element(axes.begin(), axes.begin() + static_cast<std::ptrdiff_t>(index), axes.end(),
                   std::greater<>());
  return axes[index];
}

LeastSquares brute_force_projection(const TruncatedSpectrum& f,
                                    const std::vector<TruncatedSpectrum>& raw_basis,
                                    double max_condition) {
  if (raw_basis.empty()) throw std::invalid_argument("empty basis");
  std::vector<Frequency> support;
  for (const auto& [k, v] : f.coefficients()) support.push_back(k);
  for (const TruncatedSpectrum& b : raw_basis) {
    for (const auto& [k, v] : b.coefficients()) support.push_back(k);
  }
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());
  const auto rows = static_cast<Eigen::Index>(support.size());
  const auto cols = static_cast<Eigen::Index>(raw_basis.size());
  auto row_of = [&](Frequency k) {
    return static_cast<Eigen::Index>(
        std::lower_bound(support.begin(), support.end(), k) - support.begin());
  };

  Mat a = Mat::Zero(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (const auto& [k, v] : raw_basis[static_cast<std::size_t>(j)].coefficients()) {
      a(row_of(k), j) = v;
    }
  }
  Vec rhs = Vec::Zero(rows);
  for (const auto& [k, v] : f.coefficients()) rhs[row_of(k)] = v;

  Eigen::VectorXd norms = a.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < cols; ++j) {
    if (norms[j] == 0.0) throw IllConditioned("basis vector " + std::to_string(j) + " is zero");
  }
  const Mat scaled = a * norms.cwiseInverse().asDiagonal();
  const Mat gram = scaled.adjoint() * scaled;
  Eigen::JacobiSVD<Mat> svd(gram);
  const auto& sv = svd.singularValues();
  const double condition = sv[sv.size() - 1] > 0.0 ? sv[0] / sv[sv.size() - 1]
                                                   : std::numeric_limits<double>::infinity();
  if (!(condition < max_condition)) {
    throw IllConditioned("Gram matrix condition number " + std::to_string(condition) +
                         " exceeds " + std::to_string(max_condition));
  }
  const Vec x = gram.ldlt().solve(scaled.adjoint() * rhs);

  LeastSquares out;
  out.approximant = TruncatedSpectrum(f.cutoff());
  for (const TruncatedSpectrum& b : raw_basis) {
    out.approximant = TruncatedSpectrum(std::max(out.approximant.cutoff(), b.cutoff()));
  }
  for (Eigen::Index j = 0; j < cols; ++j) {
    out.approximant = out.approximant + (x[j] / norms[j]) * raw_basis[static_cast<std::size_t>(j)];
  }
  out.error = l2_norm(f - out.approximant).value;
  out.condition = condition;
  return out;
}

std::vector<TruncatedSpectrum> raw_shifts(const KernelSpec& kernel, int n, Frequency cutoff) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  const TruncatedSpectrum b = truncate(kernel, cutoff);
  std::vector<TruncatedSpectrum> out;
  for (int j = 0; j < 2 * n; ++j) out.push_back(shift(b, kPi * j / n));
  return out;
}

}  // namespace shiftapprox
