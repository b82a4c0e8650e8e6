#include "cbw/su2.hpp"

#include <cmath>
#include <stdexcept>

namespace cbw {

Mat2 adjoint(const Mat2& m) {
    return {std::conj(m.m00), std::conj(m.m10), std::conj(m.m01), std::conj(m.m11)};
}

Complex determinant(const Mat2& m) { return m.m00 * m.m11 - m.m01 * m.m10; }

double max_entry_distance(const Mat2& a, const Mat2& b) {
    double d = std::abs(a.m00 - b.m00);
    d = std::max(d, std::abs(a.m01 - b.m01));
    d = std::max(d, std::abs(a.m10 - b.m10));
    d = std::max(d, std::abs(a.m11 - b.m11));
    return d;
}

double frobenius_distance(const Mat2& a, const Mat2& b) {
    const Mat2 d = a - b;
    return std::sqrt(std::norm(d.m00) + std::norm(d.m01) + std::norm(d.m10) +
                     std::norm(d.m11));
}

bool is_unitary(const Mat2& m, double tol) {
    return max_entry_distance(adjoint(m) * m, Mat2::identity()) < tol;
}

Mat2 bs_matrix() {
    const double r = 1.0 / std::sqrt(2.0);
    const Complex ir{0.0, r};
    return {r, ir, ir, r};
}

Mat2 phase_matrix(double phi, PhaseConvention conv) {
    if (!std::isfinite(phi)) throw std::domain_error("phase_matrix: non-finite phase");
    switch (conv) {
        case PhaseConvention::Symmetric:
            return Mat2::diag(std::polar(1.0, phi / 2.0), std::polar(1.0, -phi / 2.0));
        case PhaseConvention::UpperArm:
            return Mat2::diag(std::polar(1.0, phi), 1.0);
    }
    throw std::domain_error("phase_matrix: bad convention");
}

Mat2 mzi_unitary(double phi, PhaseConvention conv) {
    const Mat2 b = bs_matrix();
    return b * phase_matrix(phi, conv) * b;
}

Mat2 su2_exp(double theta, PauliAxis axis) {
    if (!std::isfinite(theta)) throw std::domain_error("su2_exp: non-finite angle");
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    switch (axis) {
        case PauliAxis::X:
            return {Complex{c, 0.0}, Complex{0.0, s}, Complex{0.0, s}, Complex{c, 0.0}};
        case PauliAxis::Z:
            return Mat2::diag(Complex{c, s}, Complex{c, -s});
    }
    throw std::domain_error("su2_exp: bad axis");
}

}  // namespace cbw
