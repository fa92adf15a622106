#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace noma {

using Complex = std::complex<double>;

/// Channel vectors are plain complex vectors; invariants (non-empty,
/// finite entries) are checked where a vector enters the library.
using ComplexVector = std::vector<Complex>;

inline void validate_channel(const ComplexVector& v) {
  if (v.empty()) {
    throw std::invalid_argument("channel vector must have length >= 1");
  }
  for (const Complex& e : v) {
    if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) {
      throw std::invalid_argument("channel vector entries must be finite");
    }
  }
}

/// Hermitian inner product a^H b.
inline Complex hdot(const ComplexVector& a, const ComplexVector& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("hdot: dimension mismatch");
  }
  Complex s{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) {
    s += std::conj(a[i]) * b[i];
  }
  return s;
}

inline double norm_sq(const ComplexVector& a) {
  double s = 0.0;
  for (const Complex& e : a) s += std::norm(e);
  return s;
}

inline double norm(const ComplexVector& a) { return std::sqrt(norm_sq(a)); }

inline ComplexVector scaled(ComplexVector v, Complex c) {
  for (Complex& e : v) e *= c;
  return v;
}

/// Component of v orthogonal to the span of an orthonormal basis.
/// Two projection passes keep the residual orthogonal to the basis at
/// machine precision even for ill-conditioned inputs.
inline ComplexVector project_out(ComplexVector v,
                                 const std::vector<ComplexVector>& basis) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const ComplexVector& u : basis) {
      const Complex c = hdot(u, v);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * u[i];
    }
  }
  return v;
}

/// Projection of v onto the span of an orthonormal basis.
inline ComplexVector project_onto(const ComplexVector& v,
                                  const std::vector<ComplexVector>& basis) {
  ComplexVector p(v.size(), Complex{0.0, 0.0});
  for (const ComplexVector& u : basis) {
    const Complex c = hdot(u, v);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] += c * u[i];
  }
  return p;
}

/// Orthonormal basis of span{vs} by modified Gram-Schmidt with
/// reorthogonalization; vectors whose residual falls below tol times
/// their own norm are treated as linearly dependent and dropped.
inline std::vector<ComplexVector> orthonormal_basis(
    const std::vector<ComplexVector>& vs, double tol = 1e-10) {
  std::vector<ComplexVector> basis;
  for (const ComplexVector& v : vs) {
    const double vn = norm(v);
    if (vn == 0.0) continue;
    ComplexVector r = project_out(v, basis);
    const double rn = norm(r);
    if (rn > tol * vn) {
      basis.push_back(scaled(std::move(r), Complex{1.0 / rn, 0.0}));
    }
  }
  return basis;
}

/// Orthonormal basis of the orthogonal complement of span{vs} in C^dim.
/// Returned vectors are orthogonal to every v in vs at machine precision.
inline std::vector<ComplexVector> orthogonal_complement(
    const std::vector<ComplexVector>& vs, std::size_t dim) {
  std::vector<ComplexVector> span = orthonormal_basis(vs);
  std::vector<ComplexVector> complement;
  std::vector<ComplexVector> all = span;  // span + complement built so far
  for (std::size_t i = 0; i < dim && all.size() < dim; ++i) {
    ComplexVector e(dim, Complex{0.0, 0.0});
    e[i] = Complex{1.0, 0.0};
    ComplexVector r = project_out(std::move(e), all);
    const double rn = norm(r);
    if (rn > 1e-10) {
      ComplexVector u = scaled(std::move(r), Complex{1.0 / rn, 0.0});
      complement.push_back(u);
      all.push_back(std::move(u));
    }
  }
  return complement;
}

}  // namespace noma
