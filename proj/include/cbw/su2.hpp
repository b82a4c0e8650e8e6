/**
 * @file su2.hpp
 * @brief Exact 2x2 complex matrix algebra and the elementary optical
 *        operators (beam splitter, phase shifter, Pauli matrices, SU(2)
 *        exponentials) from which interferometer chains are composed.
 *
 * All amplitudes are dimensionless; field components carry units of
 * sqrt(intensity). Everything here is a plain value type, safe to copy
 * and share across threads.
 */

#ifndef CBW_SU2_HPP
#define CBW_SU2_HPP

#include <complex>

namespace cbw {

using Complex = std::complex<double>;

/// Phase-operator convention for an interferometer arm pair.
/// Symmetric: Z(phi) = diag(e^{+i phi/2}, e^{-i phi/2}).
/// UpperArm:  Z(phi) = diag(e^{+i phi}, 1), i.e. the detuning sits entirely
/// on the upper arm. The two differ by the global phase e^{i phi/2}; every
/// intensity observable is identical under both.
enum class PhaseConvention { Symmetric, UpperArm };

/// 2x2 complex matrix in row-major entry order.
struct Mat2 {
    Complex m00{}, m01{}, m10{}, m11{};

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 diag(Complex a, Complex b) { return {a, 0.0, 0.0, b}; }

    friend Mat2 operator*(const Mat2& a, const Mat2& b) {
        return {a.m00 * b.m00 + a.m01 * b.m10, a.m00 * b.m01 + a.m01 * b.m11,
                a.m10 * b.m00 + a.m11 * b.m10, a.m10 * b.m01 + a.m11 * b.m11};
    }
    friend Mat2 operator*(Complex s, const Mat2& m) {
        return {s * m.m00, s * m.m01, s * m.m10, s * m.m11};
    }
    friend Mat2 operator-(const Mat2& a, const Mat2& b) {
        return {a.m00 - b.m00, a.m01 - b.m01, a.m10 - b.m10, a.m11 - b.m11};
    }
};

/// Two-component field amplitude (upper/lower path).
struct FieldState {
    Complex u{}, l{};

    double intensity() const { return std::norm(u) + std::norm(l); }
};

inline FieldState operator*(const Mat2& m, const FieldState& v) {
    return {m.m00 * v.u + m.m01 * v.l, m.m10 * v.u + m.m11 * v.l};
}

Mat2 adjoint(const Mat2& m);
Complex determinant(const Mat2& m);

/// Largest entry magnitude of a - b.
double max_entry_distance(const Mat2& a, const Mat2& b);

/// Frobenius norm of a - b.
double frobenius_distance(const Mat2& a, const Mat2& b);

/// Max-entry norm of A^dagger A - I compared against tol.
bool is_unitary(const Mat2& m, double tol);

inline Mat2 pauli_x() { return {0.0, 1.0, 1.0, 0.0}; }
inline Mat2 pauli_z() { return {1.0, 0.0, 0.0, -1.0}; }

/// Symmetric 50:50 beam splitter, B = (1/sqrt2) [[1, i], [i, 1]].
Mat2 bs_matrix();

/// Arm phase operator Z(phi) in the given convention. Throws
/// std::domain_error for non-finite phi.
Mat2 phase_matrix(double phi, PhaseConvention conv);

/// Literal single Mach-Zehnder transfer matrix B Z(phi) B.
/// Note B Z(0) B = i sigma_x: an ideal MZI at zero phase is a full port
/// swap. Frame reconciliation against diagonal-cosine conventions is the
/// chain builder's job, not this primitive's.
Mat2 mzi_unitary(double phi, PhaseConvention conv);

enum class PauliAxis { X, Z };

/// Closed-form exp(i theta sigma_axis / 2).
Mat2 su2_exp(double theta, PauliAxis axis);

}  // namespace cbw

#endif  // CBW_SU2_HPP
