#include "alber/mixed_state.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <string>

#include "alber/errors.hpp"

namespace alber {

// ---------------------------------------------------------------------------
// OperatorMatrix

OperatorMatrix::OperatorMatrix(SpectralGrid grid)
    : grid_(std::move(grid)),
      entries_(ComplexMatrix::Zero(grid_.modes(), grid_.modes())) {}

OperatorMatrix::OperatorMatrix(SpectralGrid grid, ComplexMatrix entries)
    : grid_(std::move(grid)), entries_(std::move(entries)) {
  if (entries_.rows() != grid_.modes() || entries_.cols() != grid_.modes()) {
    throw InputError("OperatorMatrix: entries must be " +
                     std::to_string(grid_.modes()) + " x " +
                     std::to_string(grid_.modes()));
  }
}

bool OperatorMatrix::is_self_adjoint(double rel_tol) const {
  const double scale = entries_.norm();
  const double asym = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  return asym <= rel_tol * scale;
}

Complex OperatorMatrix::diagonal_sum(int k) const {
  const int cutoff = grid_.cutoff();
  Complex sum = 0.0;
  for (int j = std::max(-cutoff, -cutoff - k); j <= std::min(cutoff, cutoff - k);
       ++j) {
    sum += (*this)(j + k, j);
  }
  return sum;
}

OperatorMatrix& OperatorMatrix::operator+=(const OperatorMatrix& other) {
  if (!(grid_ == other.grid_)) throw InputError("OperatorMatrix: grid mismatch");
  entries_ += other.entries_;
  return *this;
}

OperatorMatrix& OperatorMatrix::operator-=(const OperatorMatrix& other) {
  if (!(grid_ == other.grid_)) throw InputError("OperatorMatrix: grid mismatch");
  entries_ -= other.entries_;
  return *this;
}

OperatorMatrix& OperatorMatrix::operator*=(Complex factor) {
  entries_ *= factor;
  return *this;
}

OperatorMatrix operator+(OperatorMatrix a, const OperatorMatrix& b) {
  a += b;
  return a;
}

OperatorMatrix operator-(OperatorMatrix a, const OperatorMatrix& b) {
  a -= b;
  return a;
}

OperatorMatrix operator*(Complex factor, OperatorMatrix a) {
  a *= factor;
  return a;
}

// ---------------------------------------------------------------------------
// BackgroundSymbol

BackgroundSymbol::BackgroundSymbol(std::vector<double> values)
    : values_(std::move(values)) {
  if (values_.empty() || values_.size() % 2 == 0) {
    throw InputError("BackgroundSymbol: need 2J+1 values");
  }
  support_ = static_cast<int>(values_.size() - 1) / 2;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] >= 0.0) || !std::isfinite(values_[i])) {
      throw ContractViolation("BackgroundSymbol: symbol must be finite and >= 0 (mode " +
                              std::to_string(int(i) - support_) + ")");
    }
  }
}

BackgroundSymbol BackgroundSymbol::zero(int support) {
  return BackgroundSymbol(std::vector<double>(2 * support + 1, 0.0));
}

double BackgroundSymbol::l1_norm() const {
  double sum = 0.0;
  for (double v : values_) sum += v;
  return sum;
}

double BackgroundSymbol::h1s1_norm() const {
  double sum = 0.0;
  for (int n = -support_; n <= support_; ++n) {
    sum += (1.0 + double(n) * n) * (*this)(n);
  }
  return sum;
}

bool BackgroundSymbol::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

// ---------------------------------------------------------------------------
// MixedState

MixedState::MixedState(SpectralGrid grid) : grid_(std::move(grid)) {}

MixedState::MixedState(Unchecked, SpectralGrid grid, std::vector<double>&& weights,
                       std::vector<FourierField>&& orbitals, double gram_tol)
    : grid_(std::move(grid)),
      weights_(std::move(weights)),
      orbitals_(std::move(orbitals)),
      gram_tol_(gram_tol) {
  if (weights_.size() != orbitals_.size()) {
    throw InputError("MixedState: weights and orbitals differ in length");
  }
  for (const auto& psi : orbitals_) {
    if (!(psi.grid() == grid_)) {
      throw InputError("MixedState: orbitals must share one grid");
    }
  }
}

MixedState MixedState::unchecked(SpectralGrid grid, std::vector<double> weights,
                                 std::vector<FourierField> orbitals,
                                 double gram_tol) {
  return MixedState(Unchecked{}, std::move(grid), std::move(weights),
                    std::move(orbitals), gram_tol);
}

namespace {
SpectralGrid grid_of(const std::vector<FourierField>& orbitals) {
  if (orbitals.empty()) {
    throw InputError("MixedState: use MixedState(grid) for the empty state");
  }
  return orbitals.front().grid();
}
}  // namespace

MixedState::MixedState(std::vector<double> weights,
                       std::vector<FourierField> orbitals, double gram_tol)
    : MixedState(Unchecked{}, grid_of(orbitals), std::move(weights),
                 std::move(orbitals), gram_tol) {
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    if (!(weights_[k] >= 0.0) || !std::isfinite(weights_[k])) {
      throw ContractViolation("MixedState: weight " + std::to_string(k) +
                              " is negative or non-finite");
    }
  }
  const double dev = gram_deviation();
  if (dev > gram_tol_) {
    throw ContractViolation("MixedState: orbitals not orthonormal, max|G - I| = " +
                            std::to_string(dev));
  }
}

ComplexMatrix MixedState::orbital_matrix() const {
  ComplexMatrix psi(grid_.modes(), rank());
  for (int k = 0; k < rank(); ++k) psi.col(k) = orbitals_[k].coeffs();
  return psi;
}

ComplexMatrix MixedState::gram_matrix() const {
  const ComplexMatrix psi = orbital_matrix();
  return psi.adjoint() * psi;
}

double MixedState::gram_deviation() const {
  if (rank() == 0) return 0.0;
  const ComplexMatrix g = gram_matrix();
  return (g - ComplexMatrix::Identity(rank(), rank())).cwiseAbs().maxCoeff();
}

std::vector<FourierField> orthonormalize(const std::vector<FourierField>& fields) {
  if (fields.empty()) return {};
  const SpectralGrid& grid = fields.front().grid();
  const auto r = static_cast<Eigen::Index>(fields.size());
  if (r > grid.modes()) {
    throw InputError("orthonormalize: more fields than Fourier modes");
  }
  ComplexMatrix a(grid.modes(), r);
  for (Eigen::Index k = 0; k < r; ++k) a.col(k) = fields[k].coeffs();
  Eigen::HouseholderQR<ComplexMatrix> qr(a);
  const ComplexMatrix r_factor = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(grid.modes(), r);
  std::vector<FourierField> out;
  out.reserve(fields.size());
  for (Eigen::Index k = 0; k < r; ++k) {
    // Fix the phase so that each output keeps a positive overlap with its input.
    const Complex diag = r_factor(k, k);
    const Complex phase = std::abs(diag) > 0 ? diag / std::abs(diag) : Complex(1.0);
    out.emplace_back(grid, ComplexVector(q.col(k) * phase));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Densities and matrices

Density density(const MixedState& state) {
  const SpectralGrid& grid = state.grid();
  RealVector rho = RealVector::Zero(grid.points());
  for (int k = 0; k < state.rank(); ++k) {
    const ComplexVector samples = synthesize(state.orbitals()[k]);
    rho += state.weights()[k] * samples.cwiseAbs2();
  }
  const ComplexVector spectrum =
      grid.analyze_band(rho.cast<Complex>(), 2 * grid.cutoff());
  const int cutoff = grid.cutoff();
  FourierField field(grid, spectrum.segment(cutoff, grid.modes()));
  return Density{std::move(rho), spectrum, std::move(field)};
}

ComplexVector density_spectrum(const OperatorMatrix& u) {
  const int cutoff = u.grid().cutoff();
  ComplexVector spectrum(4 * cutoff + 1);
  for (int k = -2 * cutoff; k <= 2 * cutoff; ++k) {
    spectrum[k + 2 * cutoff] = u.diagonal_sum(k) / kSqrtTwoPi;
  }
  return spectrum;
}

OperatorMatrix to_matrix(const MixedState& state) {
  const ComplexMatrix psi = state.orbital_matrix();
  Eigen::VectorXd mu(state.rank());
  for (int k = 0; k < state.rank(); ++k) mu[k] = state.weights()[k];
  return OperatorMatrix(state.grid(), psi * mu.asDiagonal() * psi.adjoint());
}

OperatorMatrix background_to_matrix(const BackgroundSymbol& bg,
                                    const SpectralGrid& grid) {
  if (bg.support() > grid.cutoff()) {
    for (int n = grid.cutoff() + 1; n <= bg.support(); ++n) {
      if (bg(n) != 0.0 || bg(-n) != 0.0) {
        throw InputError("background_to_matrix: symbol support " +
                         std::to_string(bg.support()) + " exceeds grid cutoff " +
                         std::to_string(grid.cutoff()));
      }
    }
  }
  OperatorMatrix u(grid);
  for (int n = -grid.cutoff(); n <= grid.cutoff(); ++n) u(n, n) = bg(n);
  return u;
}

// ---------------------------------------------------------------------------
// Norms

std::vector<double> singular_values(const OperatorMatrix& u) {
  const ComplexMatrix& a = u.entries();
  if (!a.allFinite()) {
    throw NumericalError("singular_values: matrix has non-finite entries");
  }
  // Hermitian inputs: singular values are |eigenvalues|. Otherwise the
  // eigenvalues of [[0, A], [A*, 0]] are +-sigma_i. Both go through the
  // self-adjoint solver; BDCSVD in Eigen 3.4.0 misreports singular values for
  // block-sparse inputs such as Galerkin truncations.
  const Eigen::Index n = a.rows();
  const double scale = a.cwiseAbs().maxCoeff();
  RealVector sv;
  if ((a - a.adjoint()).cwiseAbs().maxCoeff() <= 1e-14 * scale) {
    const ComplexMatrix h = 0.5 * (a + a.adjoint());
    sv = Eigen::SelfAdjointEigenSolver<ComplexMatrix>(h, Eigen::EigenvaluesOnly).eigenvalues().cwiseAbs();
  } else {
    ComplexMatrix h = ComplexMatrix::Zero(2 * n, 2 * n);
    h.topRightCorner(n, n) = a;
    h.bottomLeftCorner(n, n) = a.adjoint();
    const RealVector ev =
        Eigen::SelfAdjointEigenSolver<ComplexMatrix>(h, Eigen::EigenvaluesOnly).eigenvalues();
    sv = ev.tail(n).cwiseAbs();
  }
  if (!sv.allFinite()) {
    throw NumericalError("singular_values: SVD failed (max|U| = " +
                         std::to_string(a.cwiseAbs().maxCoeff()) + ", dim " +
                         std::to_string(a.rows()) + ")");
  }
  std::vector<double> out(sv.data(), sv.data() + sv.size());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

double schatten_norm(const OperatorMatrix& u, Schatten p) {
  const std::vector<double> sv = singular_values(u);
  double s1 = 0.0;
  double s2 = 0.0;
  double sinf = 0.0;
  for (double s : sv) {
    s1 += s;
    s2 += s * s;
    sinf = std::max(sinf, s);
  }
  s2 = std::sqrt(s2);
  const double slack = 1e-12 * s1 + 1e-300;
  if (sinf > s2 + slack || s2 > s1 + slack) {
    throw NumericalError("schatten_norm: inclusion chain S^inf <= S^2 <= S^1 violated");
  }
  switch (p) {
    case Schatten::one:
      return s1;
    case Schatten::two:
      return s2;
    case Schatten::infinity:
      return sinf;
  }
  return s1;
}

ComplexMatrix sobolev_weighted(const OperatorMatrix& u, double s) {
  if (!(s >= 0.0)) throw InputError("sobolev_schatten_norm: s must be >= 0");
  const int cutoff = u.grid().cutoff();
  RealVector d(u.grid().modes());
  for (int n = -cutoff; n <= cutoff; ++n) d[n + cutoff] = std::pow(1.0 + double(n) * n, 0.5 * s);
  return d.asDiagonal() * u.entries() * d.asDiagonal();
}

double sobolev_schatten_norm(const OperatorMatrix& u, double s) {
  if (s == 0.0) return schatten_norm(u, Schatten::one);
  return schatten_norm(OperatorMatrix(u.grid(), sobolev_weighted(u, s)), Schatten::one);
}

double hs1_norm_nonneg(const MixedState& state, double s) {
  double sum = 0.0;
  for (int k = 0; k < state.rank(); ++k) {
    const double mu = state.weights()[k];
    if (mu < 0.0) throw ContractViolation("hs1_norm_nonneg: negative weight");
    const double h = sobolev_norm(state.orbitals()[k], s);
    sum += mu * h * h;
  }
  return sum;
}

double mass(const MixedState& state) {
  // tr gamma from the orbitals themselves, so drift in their norms shows up.
  double sum = 0.0;
  for (int k = 0; k < state.rank(); ++k) {
    sum += state.weights()[k] * state.orbitals()[k].coeffs().squaredNorm();
  }
  return sum;
}

double kinetic_energy(const MixedState& state) {
  const int cutoff = state.grid().cutoff();
  double sum = 0.0;
  for (int k = 0; k < state.rank(); ++k) {
    const FourierField& psi = state.orbitals()[k];
    double grad = 0.0;
    for (int n = -cutoff; n <= cutoff; ++n) grad += double(n) * n * std::norm(psi[n]);
    sum += state.weights()[k] * grad;
  }
  return sum;
}

double energy(const MixedState& state, double p, double q) {
  const double kinetic = kinetic_energy(state);
  const double rho_l2 = lp_norm(density(state).samples, 2.0);
  const double e = -p * kinetic + 0.5 * q * rho_l2 * rho_l2;
  // |E| <= |p| ||g||_{H^1S^1} + (|q|/2) B_1 ||g||_{S^1} ||g||_{H^1S^1}
  const double m = mass(state);
  const double h1 = m + kinetic;
  const double bound = std::abs(p) * h1 + 0.5 * std::abs(q) * bessel_constant(1.0) * m * h1;
  if (!std::isfinite(e) || std::abs(e) > bound * (1.0 + 1e-8) + 1e-300) {
    throw ContractViolation("energy: finiteness bound violated (|E| = " +
                            std::to_string(std::abs(e)) + " > " +
                            std::to_string(bound) + ")");
  }
  return e;
}

OperatorMatrix galerkin_truncate(const OperatorMatrix& u, int cutoff) {
  const int full = u.grid().cutoff();
  if (cutoff > full) {
    throw InputError("galerkin_truncate: N' = " + std::to_string(cutoff) +
                     " exceeds N = " + std::to_string(full));
  }
  OperatorMatrix out(u.grid());
  if (cutoff < 0) return out;
  const int lo = full - cutoff;
  const int len = 2 * cutoff + 1;
  out.entries().block(lo, lo, len, len) = u.entries().block(lo, lo, len, len);
  return out;
}

MixedState eigendecompose(const OperatorMatrix& u, double drop_tol) {
  if (!u.is_self_adjoint(1e-10)) {
    throw ContractViolation("eigendecompose: matrix is not self-adjoint");
  }
  const ComplexMatrix h = 0.5 * (u.entries() + u.entries().adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(h);
  if (eig.info() != Eigen::Success) {
    throw NumericalError("eigendecompose: eigensolver did not converge");
  }
  const RealVector& values = eig.eigenvalues();  // ascending
  const double scale = values.cwiseAbs().maxCoeff();
  if (scale == 0.0) return MixedState(u.grid());
  if (values[0] < -drop_tol * scale) {
    throw NotNonNegativeError("eigendecompose: eigenvalue " +
                                  std::to_string(values[0]) +
                                  " is significantly negative",
                              values[0]);
  }
  std::vector<double> weights;
  std::vector<FourierField> orbitals;
  for (Eigen::Index i = values.size() - 1; i >= 0; --i) {
    if (values[i] < drop_tol * scale) break;
    weights.push_back(values[i]);
    orbitals.emplace_back(u.grid(), ComplexVector(eig.eigenvectors().col(i)));
  }
  return MixedState(std::move(weights), std::move(orbitals));
}

double ybar_bound(double mass, double kinetic0, double rho0_l2, double p, double q) {
  if (p * q == 0.0) throw InputError("ybar_bound: requires pq != 0");
  if (mass < 0.0 || kinetic0 < 0.0 || rho0_l2 < 0.0) {
    throw InputError("ybar_bound: mass, kinetic energy and ||rho0|| must be >= 0");
  }
  const double ap = std::abs(p);
  const double aq = std::abs(q);
  if (p * q > 0.0) {
    const double a = aq * std::pow(mass, 1.5) / ap;
    const double root = std::sqrt(a * a + 4.0 * kinetic0 + 2.0 * aq * mass * mass / (ap * kTwoPi));
    return mass + 0.25 * (a + root) * (a + root);
  }
  return mass + kinetic0 + aq / (2.0 * ap) * rho0_l2 * rho0_l2;
}

double ybar_bound(const MixedState& state, double p, double q) {
  return ybar_bound(mass(state), kinetic_energy(state),
                    lp_norm(density(state).samples, 2.0), p, q);
}

FourierField regrid(const FourierField& field, const SpectralGrid& grid) {
  FourierField out(grid);
  const int common = std::min(field.grid().cutoff(), grid.cutoff());
  for (int n = -common; n <= common; ++n) out[n] = field[n];
  return out;
}

MixedState regrid(const MixedState& state, const SpectralGrid& grid) {
  if (grid.cutoff() < state.grid().cutoff()) {
    throw InputError("regrid: truncating a MixedState breaks orthonormality; "
                     "truncate its matrix with galerkin_truncate instead");
  }
  std::vector<FourierField> orbitals;
  orbitals.reserve(state.orbitals().size());
  for (const auto& psi : state.orbitals()) orbitals.push_back(regrid(psi, grid));
  if (orbitals.empty()) return MixedState(grid);
  return MixedState(state.weights(), std::move(orbitals), state.gram_tol());
}

}  // namespace alber
