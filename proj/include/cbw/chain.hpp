/**
 * @file chain.hpp
 * @brief Coupled Mach-Zehnder chains: construction, propagation, fringe
 *        sweeps, and the convention calibration that fixes the physical
 *        wiring frame.
 *
 * A chain is an alternating list of control MZIs (signed phase phi) and
 * dummy MZIs (phase psi) with explicit coupling geometry. The literal
 * product B Z(0) B of an ideal MZI is i sigma_x (a full port swap), so the
 * raw cascade does not reproduce the textbook diagonal-cosine transfer;
 * the missing frame data (coupler convention, rest bias, leading sign) is
 * recovered once by calibrate_convention() against the two N = 2 reference
 * patterns and then reused for every N.
 */

#ifndef CBW_CHAIN_HPP
#define CBW_CHAIN_HPP

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cbw/su2.hpp"

namespace cbw {

enum class LinkStyle { Straight, Crossed };
enum class BlockKind { Control, Dummy };
enum class Arm { Upper, Lower };

/// Physical wiring of the coupled chain. link_style / mirror_alternate
/// describe the inter-MZI couplings; the remaining fields are the frame
/// choices left open by the usual schematic conventions, resolved by
/// calibrate_convention() and then frozen.
struct CouplingGeometry {
    LinkStyle link_style = LinkStyle::Straight;
    bool mirror_alternate = false;     ///< conjugate even-numbered control MZIs by sigma_x
    int leading_sign = +1;             ///< sign of the first control phase
    double control_bias = 0.0;         ///< rest phase of every control MZI (0 or pi)
    bool compensated_coupler = true;   ///< dummy splitters undo the rest-state port exchange

    friend bool operator==(const CouplingGeometry&, const CouplingGeometry&) = default;
};

std::string to_string(const CouplingGeometry& g);

struct MziBlock {
    BlockKind kind = BlockKind::Control;
    double phase = 0.0;                ///< signed phi for Control, psi for Dummy
    double t_upper = 1.0, t_lower = 1.0;
    std::optional<Arm> blocked;

    bool lossless() const { return t_upper == 1.0 && t_lower == 1.0 && !blocked; }
};

struct ChainSpec {
    std::vector<MziBlock> blocks;
    CouplingGeometry geometry;
    PhaseConvention conv = PhaseConvention::Symmetric;
    FieldState input{1.0, 0.0};
    double bs_deviation = 0.0;         ///< splitting-angle error added to every splitter

    bool lossless() const;
    int control_count() const;
};

struct FringeScan {
    std::vector<double> phi;
    std::vector<double> i3, i4;
    int n_nominal = 0;
    CouplingGeometry geometry;
    double psi = 0.0;
};

/// Chain of N control MZIs with alternating signed phases and N-1 dummy
/// MZIs at psi, wired per geometry. Input defaults to (1, 0).
/// Throws std::domain_error for N < 1.
ChainSpec build_cbw_chain(int n, double phi, double psi, const CouplingGeometry& geometry);

/// Ordered product of all element matrices, including links, mirrors and
/// block projectors. Unitary iff the chain is loss-free.
Mat2 transfer_matrix(const ChainSpec& spec);

/// Output field; intensities are I3 = |u|^2, I4 = |l|^2.
FieldState propagate(const ChainSpec& spec);

/// Re-evaluates the template at each grid phi (alternating signs are
/// reapplied; blocks and attenuations are preserved).
/// Throws std::domain_error for an empty or non-increasing grid.
FringeScan sweep_fringe(const ChainSpec& proto, const std::vector<double>& phi_grid);

/// Uniform n-point grid on [0, 2 pi).
std::vector<double> phi_grid(int points);

/// Ideal N-fold fringe pair: ((1 + cos N phi)/2, (1 - cos N phi)/2) in
/// units of the input intensity.
std::pair<double, double> cbw_closed_form(int n, double phi);

/// (cos^2(N phi / 2), sin^2(N phi / 2)); the pair sums to 1 exactly.
std::pair<double, double> projection_probabilities(int n, double phi);

/// Returns spec with the given block arm blocked.
/// Throws std::domain_error for an out-of-range index.
ChainSpec apply_block(const ChainSpec& spec, std::size_t block_index, Arm arm);

/// Effective dummy operator in the coupler's own frame; diagonal (commutes
/// with sigma_z) for every psi when the geometry is calibrated.
Mat2 dummy_logical_operator(double psi, const CouplingGeometry& geometry);

struct CalibrationResult {
    CouplingGeometry geometry;                 ///< chosen (first) satisfier
    std::vector<CouplingGeometry> satisfiers;  ///< all satisfying geometries, enumeration order
    std::vector<std::string> warnings;
};

struct CalibrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Enumerates the finite geometry space (link style x mirror x leading
/// sign x rest bias x coupler convention) and keeps geometries that
/// reproduce both N = 2 reference patterns on a 256-point grid
///   psi = 0 : I3 = (1 + cos 2 phi)/2
///   psi = pi: I3 = 0, I4 = 1
/// and, so the frozen frame generalizes without retuning, the N = 3
/// closed-form fringe. Throws CalibrationError when nothing satisfies.
CalibrationResult calibrate_convention();

/// Chosen geometry from calibrate_convention(), computed once and cached.
const CouplingGeometry& calibrated_geometry();

/// Fringe period estimate from the DFT peak of the mean-removed i3 with
/// parabolic interpolation. The grid must cover [0, 2 pi) uniformly with an
/// integer number of nominal periods.
struct FringePeriod {
    double period = 0.0;
    double harmonic = 0.0;  ///< interpolated cycles per 2 pi
    bool significant = false;
};
FringePeriod extract_fringe_period(const FringeScan& scan);

/// CSV with header "phi,i3,i4", one row per grid point, 17 significant digits.
void write_fringe_csv(const FringeScan& scan, std::ostream& os);

}  // namespace cbw

#endif  // CBW_CHAIN_HPP
