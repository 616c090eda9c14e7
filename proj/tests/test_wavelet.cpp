#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <fstream>

#include "wavesplat/wavelet.hpp"
#include "wavesplat/io.hpp"
#include "test_support.hpp"

using namespace wavesplat;

namespace {

// Brute-force filter-bank oracle: materializes the whole-sample symmetric
// extension of each scanline and convolves directly, independent of the
// strided/index-mapped implementation.
std::vector<double> extend_ws(const std::vector<double>& x, int margin) {
    const int n = static_cast<int>(x.size());
    std::vector<double> out(static_cast<std::size_t>(n + 2 * margin));
    auto reflect = [&](int i) {
        const int p = 2 * n - 2;
        i = ((i % p) + p) % p;
        return i < n ? i : p - i;
    };
    for (int i = -margin; i < n + margin; ++i) out[static_cast<std::size_t>(i + margin)] = x[reflect(i)];
    return out;
}

void oracle_analyze(const std::vector<double>& x, const WaveletFilter& f,
                    std::vector<double>& lo, std::vector<double>& hi) {
    const int n = static_cast<int>(x.size());
    const int margin = 16;
    const auto ext = extend_ws(x, margin);
    const int clo = static_cast<int>(f.analysis_lowpass.size()) / 2;
    const int chi = static_cast<int>(f.analysis_highpass.size()) / 2;
    lo.assign(static_cast<std::size_t>(n / 2), 0.0);
    hi.assign(static_cast<std::size_t>(n / 2), 0.0);
    for (int j = 0; j < n / 2; ++j) {
        for (std::size_t k = 0; k < f.analysis_lowpass.size(); ++k)
            lo[j] += f.analysis_lowpass[k] * ext[static_cast<std::size_t>(2 * j + static_cast<int>(k) - clo + margin)];
        for (std::size_t k = 0; k < f.analysis_highpass.size(); ++k)
            hi[j] += f.analysis_highpass[k] * ext[static_cast<std::size_t>(2 * j + 1 + static_cast<int>(k) - chi + margin)];
    }
}

// Full 2D oracle via the 1D oracle on rows then columns, one channel at a time.
void oracle_dwt2(const Texture& tex, const WaveletFilter& f, int channel,
                 std::vector<std::vector<double>>& out) {
    const int h = tex.height(), w = tex.width();
    std::vector<std::vector<double>> rows_lo(h), rows_hi(h);
    for (int y = 0; y < h; ++y) {
        std::vector<double> line(w);
        for (int x = 0; x < w; ++x) line[x] = tex.at(y, x, channel);
        oracle_analyze(line, f, rows_lo[y], rows_hi[y]);
    }
    // columns of rows_lo -> ll, lh;  columns of rows_hi -> hl, hh
    out.assign(4, std::vector<double>(static_cast<std::size_t>(h / 2) * (w / 2)));
    for (int x = 0; x < w / 2; ++x) {
        std::vector<double> col(h), lo, hi;
        for (int y = 0; y < h; ++y) col[y] = rows_lo[y][x];
        oracle_analyze(col, f, lo, hi);
        for (int y = 0; y < h / 2; ++y) {
            out[0][static_cast<std::size_t>(y) * (w / 2) + x] = lo[y];
            out[1][static_cast<std::size_t>(y) * (w / 2) + x] = hi[y];
        }
        for (int y = 0; y < h; ++y) col[y] = rows_hi[y][x];
        oracle_analyze(col, f, lo, hi);
        for (int y = 0; y < h / 2; ++y) {
            out[2][static_cast<std::size_t>(y) * (w / 2) + x] = lo[y];
            out[3][static_cast<std::size_t>(y) * (w / 2) + x] = hi[y];
        }
    }
}

double rel_round_trip_error(const Texture& x, const WaveletFilter& f) {
    const Subbands2d sb = dwt2(x, f);
    const Texture back = idwt2(sb, f);
    return testsup::max_abs_diff(back, x) / testsup::max_abs(x);
}

}  // namespace

TEST_CASE("analysis high-pass annihilates constants") {
    const WaveletFilter f = WaveletFilter::bior22();
    Texture tex(8, 8, 2);
    for (auto& v : tex.data()) v = 3.25f;
    const Subbands2d sb = dwt2(tex, f);
    CHECK(testsup::max_abs(sb.lh) == 0.0);
    CHECK(testsup::max_abs(sb.hl) == 0.0);
    CHECK(testsup::max_abs(sb.hh) == 0.0);
}

TEST_CASE("full-resolution input yields half-resolution subbands") {
    Rng rng(1);
    const WaveletFilter f = WaveletFilter::bior22();
    const Texture tex = testsup::random_texture(768, 768, 1, rng);
    const Subbands2d sb = dwt2(tex, f);
    for (const Texture* b : {&sb.ll, &sb.lh, &sb.hl, &sb.hh}) {
        CHECK(b->height() == 384);
        CHECK(b->width() == 384);
    }
}

TEST_CASE("dwt2 matches the direct-convolution oracle") {
    Rng rng(2);
    const WaveletFilter f = WaveletFilter::bior22();
    const Texture tex = testsup::random_texture(8, 8, 3, rng);
    const Subbands2d sb = dwt2(tex, f);
    const Texture* bands[4] = {&sb.ll, &sb.lh, &sb.hl, &sb.hh};
    for (int c = 0; c < 3; ++c) {
        std::vector<std::vector<double>> expect;
        oracle_dwt2(tex, f, c, expect);
        double scale = 0.0;
        for (const auto& band : expect)
            for (double v : band) scale = std::max(scale, std::abs(v));
        for (int b = 0; b < 4; ++b) {
            for (int y = 0; y < 4; ++y)
                for (int x = 0; x < 4; ++x) {
                    const double got = bands[b]->at(y, x, c);
                    const double want = expect[static_cast<std::size_t>(b)][static_cast<std::size_t>(y) * 4 + x];
                    CHECK(std::abs(got - want) <= 1e-6 * scale);
                }
        }
    }
}

TEST_CASE("odd dimensions are rejected") {
    const WaveletFilter f = WaveletFilter::bior22();
    CHECK_THROWS_AS(dwt2(Texture(7, 8, 1), f), ValidationError);
    CHECK_THROWS_AS(dwt2(Texture(8, 10 + 1, 1), f), ValidationError);
}

TEST_CASE("idwt2 of zero subbands is zero") {
    const WaveletFilter f = WaveletFilter::bior22();
    const Subbands2d sb{Texture(4, 4, 2), Texture(4, 4, 2), Texture(4, 4, 2), Texture(4, 4, 2)};
    const Texture out = idwt2(sb, f);
    CHECK(testsup::max_abs(out) == 0.0);
}

TEST_CASE("round trip reconstructs within 1e-5 relative") {
    Rng rng(3);
    const WaveletFilter f = WaveletFilter::bior22();
    CHECK(rel_round_trip_error(testsup::random_texture(16, 16, 3, rng), f) <= 1e-5);
}

TEST_CASE("perfect reconstruction holds across random even sizes") {
    Rng rng(4);
    const WaveletFilter f = WaveletFilter::bior22();
    for (int trial = 0; trial < 20; ++trial) {
        const int h = 2 * static_cast<int>(rng.uniform_int(2, 40));
        const int w = 2 * static_cast<int>(rng.uniform_int(2, 40));
        const int c = static_cast<int>(rng.uniform_int(1, 4));
        CHECK(rel_round_trip_error(testsup::random_texture(h, w, c, rng), f) <= 1e-5);
    }
}

TEST_CASE("constant LL synthesizes to the DC gain product") {
    const WaveletFilter f = WaveletFilter::bior22();
    const double c = 1.75;
    Subbands2d sb{Texture(4, 4, 1), Texture(4, 4, 1), Texture(4, 4, 1), Texture(4, 4, 1)};
    for (auto& v : sb.ll.data()) v = static_cast<float>(c);
    const Texture out = idwt2(sb, f);
    const double gain = f.synthesis_dc_gain();
    const double expect = c * gain * gain;
    for (float v : out.data()) CHECK(v == doctest::Approx(expect).epsilon(1e-6));
}

TEST_CASE("dwt is linear") {
    Rng rng(5);
    const WaveletFilter f = WaveletFilter::bior22();
    const Texture x = testsup::random_texture(16, 12, 2, rng);
    const Texture y = testsup::random_texture(16, 12, 2, rng);
    const double a = 0.7, b = -1.3;
    Texture combo(16, 12, 2);
    for (std::size_t i = 0; i < combo.size(); ++i)
        combo.data()[i] = static_cast<float>(a * x.data()[i] + b * y.data()[i]);
    const Subbands2d sx = dwt2(x, f), sy = dwt2(y, f), sc = dwt2(combo, f);
    const Texture* bx[4] = {&sx.ll, &sx.lh, &sx.hl, &sx.hh};
    const Texture* by[4] = {&sy.ll, &sy.lh, &sy.hl, &sy.hh};
    const Texture* bc[4] = {&sc.ll, &sc.lh, &sc.hl, &sc.hh};
    for (int k = 0; k < 4; ++k)
        for (std::size_t i = 0; i < bc[k]->size(); ++i) {
            const double want = a * bx[k]->data()[i] + b * by[k]->data()[i];
            CHECK(std::abs(bc[k]->data()[i] - want) <= 1e-5);
        }
}

TEST_CASE("multilevel shapes follow the halving arithmetic") {
    Rng rng(6);
    const WaveletFilter f = WaveletFilter::bior22();

    SUBCASE("768 with four levels reaches 48") {
        const Texture tex = testsup::random_texture(768, 768, 1, rng);
        const WaveletPyramid pyr = dwt_multilevel(tex, 4, f);
        CHECK(pyr.ll.height() == 48);
        CHECK(pyr.ll.width() == 48);
        CHECK(pyr.levels() == 4);
        CHECK(pyr.details[0].lh.height() == 384);
        CHECK(pyr.details[3].lh.height() == 48);
    }
    SUBCASE("zero levels is the identity") {
        const Texture tex = testsup::random_texture(8, 8, 2, rng);
        const WaveletPyramid pyr = dwt_multilevel(tex, 0, f);
        CHECK(pyr.levels() == 0);
        CHECK(testsup::max_abs_diff(pyr.ll, tex) == 0.0);
    }
    SUBCASE("64 with two levels") {
        const Texture tex = testsup::random_texture(64, 64, 1, rng);
        const WaveletPyramid pyr = dwt_multilevel(tex, 2, f);
        CHECK(pyr.ll.height() == 16);
        CHECK(pyr.details[0].lh.height() == 32);
        CHECK(pyr.details[1].lh.height() == 16);
    }
    SUBCASE("divisibility is enforced") {
        CHECK_THROWS_AS(dwt_multilevel(Texture(36, 36, 1), 3, f), ValidationError);
    }
}

TEST_CASE("multilevel round trip") {
    Rng rng(7);
    const WaveletFilter f = WaveletFilter::bior22();
    const Texture tex = testsup::random_texture(64, 32, 3, rng);
    const WaveletPyramid pyr = dwt_multilevel(tex, 3, f);
    const Texture back = idwt_multilevel(pyr, f);
    CHECK(testsup::max_abs_diff(back, tex) / testsup::max_abs(tex) <= 1e-5);
}

TEST_CASE("constant image concentrates all energy in LL at every level") {
    const WaveletFilter f = WaveletFilter::bior22();
    Texture tex(32, 32, 1);
    for (auto& v : tex.data()) v = -2.5f;
    const WaveletPyramid pyr = dwt_multilevel(tex, 3, f);
    for (const auto& d : pyr.details) {
        CHECK(testsup::max_abs(d.lh) == 0.0);
        CHECK(testsup::max_abs(d.hl) == 0.0);
        CHECK(testsup::max_abs(d.hh) == 0.0);
    }
    CHECK(testsup::max_abs(pyr.ll) > 0.0);
}

namespace {

DetailTriple random_triple(int h, int w, int c, Rng& rng) {
    return DetailTriple{testsup::random_texture(h, w, c, rng),
                        testsup::random_texture(h, w, c, rng),
                        testsup::random_texture(h, w, c, rng)};
}

DetailTriple zero_triple(int h, int w, int c) {
    return DetailTriple{Texture(h, w, c), Texture(h, w, c), Texture(h, w, c)};
}

}  // namespace

TEST_CASE("partial IDWT with zero inputs is pure lowpass upsampling") {
    Rng rng(8);
    const WaveletFilter f = WaveletFilter::bior22();
    const Texture ll3 = testsup::random_texture(4, 4, 2, rng);
    const Texture out = idwt_partial(ll3, zero_triple(4, 4, 2), zero_triple(8, 8, 2),
                                     Texture(64, 64, 2), f);
    Texture expect = idwt2_lowpass_only(ll3, f);
    for (int i = 0; i < 3; ++i) expect = idwt2_lowpass_only(expect, f);
    CHECK(testsup::max_abs_diff(out, expect) / testsup::max_abs(expect) <= 1e-6);
}

TEST_CASE("static offset identity: partial + offset equals full IDWT with mean details") {
    Rng rng(9);
    const WaveletFilter f = WaveletFilter::bior22();
    for (int trial = 0; trial < 5; ++trial) {
        const int base = 4 * static_cast<int>(rng.uniform_int(1, 3));  // ll3 size
        const int c = static_cast<int>(rng.uniform_int(1, 3));
        const int full = base * 16;
        const Texture ll3 = testsup::random_texture(base, base, c, rng);
        const DetailTriple d3 = random_triple(base, base, c, rng);
        const DetailTriple d2 = random_triple(base * 2, base * 2, c, rng);
        const DetailTriple d1 = random_triple(base * 4, base * 4, c, rng);
        const DetailTriple d0 = random_triple(base * 8, base * 8, c, rng);

        const Texture offset = precompute_static_offset(d1, d0, full, full, f);
        const Texture partial = idwt_partial(ll3, d3, d2, offset, f);

        WaveletPyramid pyr;
        pyr.ll = ll3;
        pyr.details = {d0, d1, d2, d3};
        const Texture full_idwt = idwt_multilevel(pyr, f);

        CHECK(testsup::max_abs_diff(partial, full_idwt) / testsup::max_abs(full_idwt) <= 1e-5);
    }
}

TEST_CASE("zero means produce a zero static offset") {
    const WaveletFilter f = WaveletFilter::bior22();
    const Texture offset = precompute_static_offset(zero_triple(8, 8, 1), zero_triple(16, 16, 1), 32, 32, f);
    CHECK(testsup::max_abs(offset) == 0.0);
}

TEST_CASE("static offset is deterministic") {
    Rng rng(10);
    const WaveletFilter f = WaveletFilter::bior22();
    const DetailTriple d1 = random_triple(8, 8, 2, rng);
    const DetailTriple d0 = random_triple(16, 16, 2, rng);
    const Texture a = precompute_static_offset(d1, d0, 32, 32, f);
    const Texture b = precompute_static_offset(d1, d0, 32, 32, f);
    CHECK(std::memcmp(a.data().data(), b.data().data(), a.size() * sizeof(float)) == 0);
}

TEST_CASE("filter coefficients load from JSON, deriving synthesis partners") {
    testsup::TempDir tmp("filter");
    const auto path = tmp.path / "bior22.json";
    {
        std::ofstream out(path);
        out << R"({"analysis_lowpass": [-0.17677669529663687, 0.3535533905932738, 1.0606601717798212,
                    0.3535533905932738, -0.17677669529663687],
                   "analysis_highpass": [-0.3535533905932738, 0.7071067811865476, -0.3535533905932738]})";
    }
    const WaveletFilter f = WaveletFilter::from_file(path.string());
    Rng rng(11);
    CHECK(rel_round_trip_error(testsup::random_texture(16, 16, 1, rng), f) <= 1e-5);
}

TEST_CASE("a broken filter bank is rejected") {
    WaveletFilter f = WaveletFilter::bior22();
    f.synthesis_lowpass[0] += 0.25;
    CHECK_THROWS_AS(f.validate(), ValidationError);
}

TEST_CASE("a longer biorthogonal bank (9/7) reconstructs under the same conventions") {
    WaveletFilter f;
    const double s2 = std::sqrt(2.0);
    f.analysis_lowpass = {0.026748757410810 * s2, -0.016864118442875 * s2, -0.078223266528990 * s2,
                          0.266864118442875 * s2, 0.602949018236360 * s2, 0.266864118442875 * s2,
                          -0.078223266528990 * s2, -0.016864118442875 * s2, 0.026748757410810 * s2};
    f.analysis_highpass = {0.045635881557125 * s2, -0.028771763114250 * s2, -0.295635881557125 * s2,
                           0.557543526228500 * s2, -0.295635881557125 * s2, -0.028771763114250 * s2,
                           0.045635881557125 * s2};
    f.synthesis_lowpass.resize(7);
    for (int k = 0; k < 7; ++k)
        f.synthesis_lowpass[k] = ((k - 3) % 2 == 0 ? 1.0 : -1.0) * f.analysis_highpass[k];
    f.synthesis_highpass.resize(9);
    for (int k = 0; k < 9; ++k)
        f.synthesis_highpass[k] = ((k - 4) % 2 == 0 ? 1.0 : -1.0) * f.analysis_lowpass[k];
    f.validate();
    Rng rng(12);
    CHECK(rel_round_trip_error(testsup::random_texture(24, 40, 2, rng), f) <= 1e-5);
}
