#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cbw/rng.hpp"
#include "cbw/su2.hpp"

using namespace cbw;

namespace {

// Independent multiplication oracle: plain complex arithmetic, no Mat2 code.
Mat2 mul_oracle(const Mat2& a, const Mat2& b) {
    Mat2 r;
    r.m00 = a.m00 * b.m00 + a.m01 * b.m10;
    r.m01 = a.m00 * b.m01 + a.m01 * b.m11;
    r.m10 = a.m10 * b.m00 + a.m11 * b.m10;
    r.m11 = a.m10 * b.m01 + a.m11 * b.m11;
    return r;
}

double entry_dist(const Mat2& a, const Mat2& b) { return max_entry_distance(a, b); }

}  // namespace

TEST_CASE("beam splitter matrix") {
    const Mat2 b = bs_matrix();
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(b.m00 - Complex{r, 0.0}) < 1e-15);
    CHECK(std::abs(b.m01 - Complex{0.0, r}) < 1e-15);
    CHECK(std::abs(b.m10 - Complex{0.0, r}) < 1e-15);
    CHECK(std::abs(b.m11 - Complex{r, 0.0}) < 1e-15);

    CHECK(entry_dist(adjoint(b) * b, Mat2::identity()) < 1e-15);

    const Mat2 bb = mul_oracle(b, b);
    const Mat2 isx = Complex{0.0, 1.0} * pauli_x();
    CHECK(entry_dist(bb, isx) < 1e-15);
}

TEST_CASE("phase matrix conventions") {
    CHECK(entry_dist(phase_matrix(0.0, PhaseConvention::Symmetric), Mat2::identity()) < 1e-15);
    CHECK(entry_dist(phase_matrix(0.0, PhaseConvention::UpperArm), Mat2::identity()) < 1e-15);

    // e^{+i pi/2} = i, e^{-i pi/2} = -i
    const Mat2 zpi = phase_matrix(M_PI, PhaseConvention::Symmetric);
    CHECK(std::abs(zpi.m00 - Complex{0.0, 1.0}) < 1e-15);
    CHECK(std::abs(zpi.m11 - Complex{0.0, -1.0}) < 1e-15);
    CHECK(std::abs(zpi.m01) == 0.0);

    Rng rng(12);
    for (int k = 0; k < 100; ++k) {
        const double phi = (rng.next_double() - 0.5) * 20.0;
        const Mat2 sym = phase_matrix(phi, PhaseConvention::Symmetric);
        const Mat2 upper = phase_matrix(phi, PhaseConvention::UpperArm);
        const Complex global = std::polar(1.0, phi / 2.0);
        CHECK(entry_dist(upper, global * sym) < 1e-14);
    }

    CHECK_THROWS_AS(phase_matrix(std::nan(""), PhaseConvention::Symmetric), std::domain_error);
    CHECK_THROWS_AS(phase_matrix(INFINITY, PhaseConvention::UpperArm), std::domain_error);
}

TEST_CASE("mzi unitary is the literal B Z B product") {
    // at zero phase the product is i sigma_x, not the identity
    const Mat2 rest = mzi_unitary(0.0, PhaseConvention::Symmetric);
    CHECK(entry_dist(rest, Complex{0.0, 1.0} * pauli_x()) < 1e-15);

    Rng rng(34);
    for (int k = 0; k < 1000; ++k) {
        const double phi = (rng.next_double() - 0.5) * 30.0;
        const Mat2 u = mzi_unitary(phi, PhaseConvention::Symmetric);
        CHECK(entry_dist(adjoint(u) * u, Mat2::identity()) < 1e-14);

        // squared output moduli on input (1,0) are {cos^2, sin^2}(phi/2) as a set
        const FieldState out = u * FieldState{1.0, 0.0};
        const double c2 = std::cos(phi / 2.0) * std::cos(phi / 2.0);
        const double s2 = 1.0 - c2;
        const double a = std::norm(out.u), b = std::norm(out.l);
        const bool direct = std::abs(a - c2) < 1e-12 && std::abs(b - s2) < 1e-12;
        const bool swapped = std::abs(a - s2) < 1e-12 && std::abs(b - c2) < 1e-12;
        CHECK((direct || swapped));
    }
}

TEST_CASE("su2 exponentials") {
    CHECK(entry_dist(su2_exp(0.0, PauliAxis::X), Mat2::identity()) < 1e-15);

    const Mat2 zpi = su2_exp(M_PI, PauliAxis::Z);
    CHECK(std::abs(zpi.m00 - Complex{0.0, 1.0}) < 1e-15);
    CHECK(std::abs(zpi.m11 - Complex{0.0, -1.0}) < 1e-15);

    // group law via the independent multiplication oracle
    Rng rng(56);
    for (int k = 0; k < 500; ++k) {
        const double t1 = (rng.next_double() - 0.5) * 25.0;
        const double t2 = (rng.next_double() - 0.5) * 25.0;
        const Mat2 product = mul_oracle(su2_exp(t1, PauliAxis::X), su2_exp(t2, PauliAxis::X));
        CHECK(entry_dist(product, su2_exp(t1 + t2, PauliAxis::X)) < 1e-13);
    }
}

TEST_CASE("matrix helper semantics") {
    const Mat2 b = bs_matrix();
    CHECK(entry_dist(Mat2::identity() * b, b) == 0.0);
    CHECK(is_unitary(b, 1e-12));
    CHECK_FALSE(is_unitary(Mat2::diag(1.0, 0.0), 1e-12));  // blocked-arm projector

    CHECK(std::abs(frobenius_distance(b, b)) == 0.0);
    CHECK(frobenius_distance(Mat2::identity(), Mat2::diag(0.0, 1.0)) == doctest::Approx(1.0));

    // adjoint is an involution, exactly
    const Mat2 m{Complex{1.5, -2.0}, Complex{0.25, 1.0}, Complex{-3.0, 0.5}, Complex{0.0, 2.0}};
    CHECK(entry_dist(adjoint(adjoint(m)), m) == 0.0);
}

TEST_CASE("unitarity closure and determinant over long products") {
    Rng rng(78);
    Mat2 chain = Mat2::identity();
    for (int k = 0; k < 64; ++k) {
        chain = bs_matrix() * chain;
        chain = phase_matrix((rng.next_double() - 0.5) * 15.0, PhaseConvention::Symmetric) * chain;
        CHECK(is_unitary(chain, 1e-12));
        CHECK(std::abs(std::abs(determinant(chain)) - 1.0) < 1e-12);
    }
}
