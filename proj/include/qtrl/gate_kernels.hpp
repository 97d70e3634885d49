#pragma once

#include <array>
#include <cstddef>

#include "qtrl/state_vector.hpp"

// Amplitude-loop kernels shared by the gate entry points and the adjoint
// backward pass. Complex products are written out in real/imaginary parts;
// std::complex operator* lowers to a libgcc call with branchy inf/nan
// handling, which is too slow for the innermost loops.

namespace qtrl::qsim {

// Row-major 2x2: {m00, m01, m10, m11}.
using Mat2 = std::array<c64, 4>;

Mat2 u3_matrix(double mu, double phi, double lam);

inline Mat2 dagger(const Mat2& m) {
  return Mat2{std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])};
}

// amplitude stride of `qubit` under the qubit-0-most-significant layout
inline std::size_t qubit_stride(int n, int qubit) {
  return std::size_t{1} << (n - 1 - qubit);
}

namespace detail {

inline void mul2x2(const Mat2& m, double a0r, double a0i, double a1r, double a1i,
                   double& b0r, double& b0i, double& b1r, double& b1i) {
  const double m00r = m[0].real(), m00i = m[0].imag();
  const double m01r = m[1].real(), m01i = m[1].imag();
  const double m10r = m[2].real(), m10i = m[2].imag();
  const double m11r = m[3].real(), m11i = m[3].imag();
  b0r = m00r * a0r - m00i * a0i + m01r * a1r - m01i * a1i;
  b0i = m00r * a0i + m00i * a0r + m01r * a1i + m01i * a1r;
  b1r = m10r * a0r - m10i * a0i + m11r * a1r - m11i * a1i;
  b1i = m10r * a0i + m10i * a0r + m11r * a1i + m11i * a1r;
}

}  // namespace detail

inline void apply_single_qubit(StateVector& state, int qubit, const Mat2& m) {
  const std::size_t stride = qubit_stride(state.n, qubit);
  const std::size_t dim = state.dim();
  c64* amps = state.amplitudes.data();
  for (std::size_t group = 0; group < dim; group += 2 * stride) {
    for (std::size_t i = group; i < group + stride; ++i) {
      const c64 a0 = amps[i];
      const c64 a1 = amps[i + stride];
      double b0r, b0i, b1r, b1i;
      detail::mul2x2(m, a0.real(), a0.imag(), a1.real(), a1.imag(), b0r, b0i, b1r, b1i);
      amps[i] = c64{b0r, b0i};
      amps[i + stride] = c64{b1r, b1i};
    }
  }
}

inline void apply_controlled_single_qubit(StateVector& state, int control,
                                          int target, const Mat2& m) {
  const std::size_t tstride = qubit_stride(state.n, target);
  const std::size_t cstride = qubit_stride(state.n, control);
  const std::size_t dim = state.dim();
  c64* amps = state.amplitudes.data();
  for (std::size_t i = 0; i < dim; ++i) {
    if ((i & tstride) || !(i & cstride)) continue;
    const c64 a0 = amps[i];
    const c64 a1 = amps[i + tstride];
    double b0r, b0i, b1r, b1i;
    detail::mul2x2(m, a0.real(), a0.imag(), a1.real(), a1.imag(), b0r, b0i, b1r, b1i);
    amps[i] = c64{b0r, b0i};
    amps[i + tstride] = c64{b1r, b1i};
  }
}

// sum over amplitude pairs of conj(lhs)^T * (m applied to rhs), optionally
// restricted to the control=1 subspace (control < 0 means unrestricted).
// This is the <lambda| dU |chi> contraction of the backward pass.
inline c64 pair_inner_product(const StateVector& lhs, const StateVector& rhs,
                              int target, int control, const Mat2& m) {
  const std::size_t tstride = qubit_stride(lhs.n, target);
  const std::size_t cstride = control >= 0 ? qubit_stride(lhs.n, control) : 0;
  const std::size_t dim = lhs.dim();
  const c64* l = lhs.amplitudes.data();
  const c64* r = rhs.amplitudes.data();
  double acc_r = 0.0, acc_i = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    if ((i & tstride) || (control >= 0 && !(i & cstride))) continue;
    const c64 r0 = r[i];
    const c64 r1 = r[i + tstride];
    double b0r, b0i, b1r, b1i;
    detail::mul2x2(m, r0.real(), r0.imag(), r1.real(), r1.imag(), b0r, b0i, b1r, b1i);
    const c64 l0 = l[i];
    const c64 l1 = l[i + tstride];
    // conj(l0)*b0 + conj(l1)*b1
    acc_r += l0.real() * b0r + l0.imag() * b0i + l1.real() * b1r + l1.imag() * b1i;
    acc_i += l0.real() * b0i - l0.imag() * b0r + l1.real() * b1i - l1.imag() * b1r;
  }
  return c64{acc_r, acc_i};
}

}  // namespace qtrl::qsim
