#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace vsoliton {

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

using Complexd = Complex<double>;
using CVectord = CVector<double>;
using CMatrixd = CMatrix<double>;

/// Error raised by every fallible operation in the library. The kind lets
/// callers (the CLI in particular) map failures onto exit codes.
class Error : public std::runtime_error {
 public:
  enum class Kind {
    Validation,       // malformed or inconsistent input data
    Pole,             // spectral parameter hit a pole of a factor
    DegenerateChain,  // a dressing direction vanished numerically
    Domain,           // argument outside the operation's domain
    Singular,         // ill-conditioned linear solve
    Window,           // asymptotic peak search failed
  };

  Error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

inline const char* to_string(Error::Kind kind) {
  switch (kind) {
    case Error::Kind::Validation: return "validation";
    case Error::Kind::Pole: return "pole";
    case Error::Kind::DegenerateChain: return "degenerate-chain";
    case Error::Kind::Domain: return "domain";
    case Error::Kind::Singular: return "singular";
    case Error::Kind::Window: return "window";
  }
  return "unknown";
}

/// Entrywise max modulus; the residual norm used throughout.
template <typename Derived>
typename Derived::RealScalar max_abs(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return typename Derived::RealScalar(0);
  return m.cwiseAbs().maxCoeff();
}

template <typename Real>
CMatrix<Real> identity(Eigen::Index n) {
  return CMatrix<Real>::Identity(n, n);
}

}  // namespace vsoliton
