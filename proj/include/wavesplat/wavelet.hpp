#pragma once

#include <array>
#include <string>
#include <vector>

#include "wavesplat/tensor.hpp"

namespace wavesplat {

// Two-channel biorthogonal filter bank. All four filters are odd-length and
// centered: the lowpass branch is evaluated at even sample phase, the highpass
// branch at odd phase, with whole-sample symmetric boundary extension. This is
// the JPEG2000-style convention and gives exact perfect reconstruction on
// even-length signals for the biorXX family (5/3, 9/7, ...).
struct WaveletFilter {
    std::vector<double> analysis_lowpass;
    std::vector<double> analysis_highpass;
    std::vector<double> synthesis_lowpass;
    std::vector<double> synthesis_highpass;

    /// Built-in biorthogonal 2.2 (5/3-tap), sqrt(2)-normalized lowpass.
    static WaveletFilter bior22();

    /// Load four coefficient arrays from a JSON file. Missing synthesis filters
    /// are derived from the analysis pair by the alternating-sign relation.
    static WaveletFilter from_file(const std::string& path);

    /// Checks odd lengths and verifies perfect reconstruction numerically on a
    /// random signal; throws ValidationError if the bank does not reconstruct.
    void validate() const;

    /// Largest tap count among the synthesis filters (unified branch width used
    /// by the analytic cost model).
    int max_synthesis_taps() const {
        return static_cast<int>(std::max(synthesis_lowpass.size(), synthesis_highpass.size()));
    }

    /// Per-axis DC gain of the synthesis lowpass branch (sum of even-offset taps,
    /// equal to half the total tap sum for a PR bank).
    double synthesis_dc_gain() const;
};

struct DetailTriple {
    Texture lh;  // low along x, high along y (horizontal features)
    Texture hl;  // high along x, low along y (vertical features)
    Texture hh;

    std::array<const Texture*, 3> bands() const { return {&lh, &hl, &hh}; }
    std::array<Texture*, 3> bands() { return {&lh, &hl, &hh}; }
};

struct Subbands2d {
    Texture ll, lh, hl, hh;
};

// Multi-level decomposition. details[0] is the finest level (half input
// resolution); details[L-1] the coarsest, matching ll's resolution.
struct WaveletPyramid {
    Texture ll;
    std::vector<DetailTriple> details;

    int levels() const { return static_cast<int>(details.size()); }
};

/// One analysis stage: rows (x) first, then columns (y). Requires even height
/// and width; each subband has half resolution per axis, channels independent.
Subbands2d dwt2(const Texture& tex, const WaveletFilter& filter);

/// Inverse of dwt2. All four subbands must share one shape.
Texture idwt2(const Subbands2d& sb, const WaveletFilter& filter);
Texture idwt2(const Texture& ll, const DetailTriple& d, const WaveletFilter& filter);

/// Lowpass-only synthesis stage: identical to idwt2 with zero detail bands but
/// runs just the single lowpass branch.
Texture idwt2_lowpass_only(const Texture& ll, const WaveletFilter& filter);

/// Recursive analysis; height and width must be divisible by 2^levels.
WaveletPyramid dwt_multilevel(const Texture& tex, int levels, const WaveletFilter& filter);

Texture idwt_multilevel(const WaveletPyramid& pyr, const WaveletFilter& filter);

/// Four-level partial synthesis: two dynamic detail stages (levels 3 and 2),
/// two lowpass-only stages (levels 1 and 0), plus the precomputed static
/// offset of the frozen fine-level means.
Texture idwt_partial(const Texture& ll3, const DetailTriple& d3, const DetailTriple& d2,
                     const Texture& static_offset, const WaveletFilter& filter);

/// IDWT of a pyramid whose only non-zero content is the frozen level-1 and
/// level-0 detail means; frame-independent by construction.
Texture precompute_static_offset(const DetailTriple& d1_mean, const DetailTriple& d0_mean,
                                 int out_height, int out_width, const WaveletFilter& filter);

}  // namespace wavesplat
