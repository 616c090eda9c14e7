#pragma once

#include <array>
#include <cstdint>
#include <filesystem>

#include "wavesplat/tensor.hpp"
#include "wavesplat/wavelet.hpp"

namespace wavesplat {

// 2D blendshape bank for the coarsest low-frequency subband: a mean texture
// plus R full-rank spatial bases, per-channel coefficients.
struct LlBlendshapeBank {
    Texture mean;                 // H3 x W3 x C
    std::vector<Texture> bases;   // R textures, each H3 x W3 x C

    int rank() const { return static_cast<int>(bases.size()); }
    void validate() const;
};

// Rank-R separable bank for one detail subband: pattern r of channel c is the
// outer product h(:,r,c) * w(:,r,c)^T added on top of the subband mean.
struct FactorizedSubband {
    Texture mean;     // H x W x C
    Texture h_bases;  // H x R x C (height axis bases)
    Texture w_bases;  // W x R x C (width axis bases)
};

// Per-level bank; one coefficient vector drives all three orientations.
struct FactorizedBank {
    int level = 0;  // 2 or 3
    std::array<FactorizedSubband, 3> subbands;  // order: LH, HL, HH

    int rank() const { return subbands[0].h_bases.width(); }
    int channels() const { return subbands[0].mean.channels(); }
    void validate() const;
};

// Per-frame blendshape coefficients; alpha(r, c) laid out rank-major.
struct CoefficientSet {
    std::vector<float> ll, l3, l2;
    int rank_ll = 0, rank_l3 = 0, rank_l2 = 0;
    int channels = 0;

    static CoefficientSet zeros(int rank_ll, int rank_l3, int rank_l2, int channels);
    /// Splits a flat [ll | l3 | l2] block vector (the predictor output layout).
    static CoefficientSet from_flat(const std::vector<float>& flat, int rank_ll, int rank_l3,
                                    int rank_l2, int channels);
    std::size_t flat_size() const {
        return static_cast<std::size_t>(rank_ll + rank_l3 + rank_l2) * channels;
    }
};

// The student representation for one attribute group set: dynamic LL
// blendshapes, factorized level-3/2 detail banks, frozen level-1/0 means with
// their precomputed full-resolution static offset.
struct StudentModel {
    LlBlendshapeBank ll;
    FactorizedBank bank3;  // level 3 (coarsest details, same resolution as ll)
    FactorizedBank bank2;  // level 2
    DetailTriple d1_mean;
    DetailTriple d0_mean;
    Texture static_offset;  // full resolution
    WaveletFilter filter;
    ChannelLayout layout;

    int full_height() const { return static_offset.height(); }
    int full_width() const { return static_offset.width(); }
    int channels() const { return ll.mean.channels(); }

    /// Structural checks plus revalidation of the stored static offset against
    /// the stored level-1/0 means (1e-5 relative).
    void validate() const;
};

struct ParamCounts {
    std::int64_t ll_bank = 0;
    std::int64_t factorized_banks = 0;
    std::int64_t detail_means = 0;  // stored level-1/0 means

    std::int64_t total() const { return ll_bank + factorized_banks + detail_means; }
};

Texture eval_ll(const LlBlendshapeBank& bank, const std::vector<float>& alpha);

DetailTriple eval_factorized(const FactorizedBank& bank, const std::vector<float>& alpha);

/// Full-resolution per-frame evaluation: partial IDWT of the evaluated dynamic
/// subbands plus the static offset.
Texture reconstruct(const StudentModel& model, const CoefficientSet& coeffs);

ParamCounts param_count(const StudentModel& model);

void save_model(const StudentModel& model, const std::filesystem::path& dir);
StudentModel load_model(const std::filesystem::path& dir);

}  // namespace wavesplat
