#include "wavesplat/wavelet.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "wavesplat/common.hpp"

namespace wavesplat {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488016887242097;

// Whole-sample symmetric index (period 2n-2): ... x[2] x[1] [x[0] .. x[n-1]] x[n-2] x[n-3] ...
inline int ws_index(int i, int n) {
    if (n == 1) return 0;
    const int p = 2 * n - 2;
    i %= p;
    if (i < 0) i += p;
    return i < n ? i : p - i;
}

// 1D analysis of a strided signal. Lowpass taps centered on even input phase,
// highpass on odd phase.
void analyze_line(const float* x, int n, std::ptrdiff_t stride, const WaveletFilter& f,
                  float* lo_out, float* hi_out, std::ptrdiff_t out_stride) {
    const int m = n / 2;
    const int clo = static_cast<int>(f.analysis_lowpass.size()) / 2;
    const int chi = static_cast<int>(f.analysis_highpass.size()) / 2;
    for (int j = 0; j < m; ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k < f.analysis_lowpass.size(); ++k)
            acc += f.analysis_lowpass[k] * x[ws_index(2 * j + static_cast<int>(k) - clo, n) * stride];
        lo_out[j * out_stride] = static_cast<float>(acc);
        acc = 0.0;
        for (std::size_t k = 0; k < f.analysis_highpass.size(); ++k)
            acc += f.analysis_highpass[k] * x[ws_index(2 * j + 1 + static_cast<int>(k) - chi, n) * stride];
        hi_out[j * out_stride] = static_cast<float>(acc);
    }
}

// Extension rules for the subband domain follow from mapping back through the
// whole-sample symmetric extension of the original signal: approximation
// coefficients sit at even phase, details at odd phase.
inline int s_ext_index(int i, int m) {
    const int xi = ws_index(2 * i, 2 * m);
    return xi / 2;
}
inline int d_ext_index(int i, int m) {
    const int xi = ws_index(2 * i + 1, 2 * m);
    return (xi - 1) / 2;
}

// 1D synthesis; `hi` may be null (lowpass-only branch).
void synthesize_line(const float* lo, const float* hi, int m, std::ptrdiff_t stride,
                     const WaveletFilter& f, float* out, std::ptrdiff_t out_stride) {
    const int n = 2 * m;
    const int clo = static_cast<int>(f.synthesis_lowpass.size()) / 2;
    const int chi = static_cast<int>(f.synthesis_highpass.size()) / 2;
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k < f.synthesis_lowpass.size(); ++k) {
            const int t = i - static_cast<int>(k) + clo;
            if ((t % 2 + 2) % 2 == 0)
                acc += f.synthesis_lowpass[k] * lo[s_ext_index(t / 2, m) * stride];
        }
        if (hi != nullptr) {
            for (std::size_t k = 0; k < f.synthesis_highpass.size(); ++k) {
                const int t = i - static_cast<int>(k) + chi - 1;
                if ((t % 2 + 2) % 2 == 0) {
                    const int u = t / 2;  // may be negative; d_ext handles it
                    acc += f.synthesis_highpass[k] * hi[d_ext_index(u, m) * stride];
                }
            }
        }
        out[i * out_stride] = static_cast<float>(acc);
    }
}

void require_even(const Texture& t, const char* op) {
    if (t.height() % 2 != 0 || t.width() % 2 != 0)
        throw ValidationError(std::string(op) + ": height and width must be even, got " +
                              std::to_string(t.height()) + "x" + std::to_string(t.width()));
}

}  // namespace

WaveletFilter WaveletFilter::bior22() {
    WaveletFilter f;
    f.analysis_lowpass = {-kSqrt2 / 8, kSqrt2 / 4, 3 * kSqrt2 / 4, kSqrt2 / 4, -kSqrt2 / 8};
    f.analysis_highpass = {-0.5 / kSqrt2, 1.0 / kSqrt2, -0.5 / kSqrt2};
    f.synthesis_lowpass = {0.5 / kSqrt2, 1.0 / kSqrt2, 0.5 / kSqrt2};
    f.synthesis_highpass = {-kSqrt2 / 8, -kSqrt2 / 4, 3 * kSqrt2 / 4, -kSqrt2 / 4, -kSqrt2 / 8};
    return f;
}

WaveletFilter WaveletFilter::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("WaveletFilter: cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("WaveletFilter: bad JSON in '" + path + "': " + e.what());
    }
    WaveletFilter f;
    f.analysis_lowpass = j.at("analysis_lowpass").get<std::vector<double>>();
    f.analysis_highpass = j.at("analysis_highpass").get<std::vector<double>>();
    if (j.contains("synthesis_lowpass")) {
        f.synthesis_lowpass = j.at("synthesis_lowpass").get<std::vector<double>>();
        f.synthesis_highpass = j.at("synthesis_highpass").get<std::vector<double>>();
    } else {
        // Alternating-sign biorthogonal partners relative to the filter centers.
        const int chi = static_cast<int>(f.analysis_highpass.size()) / 2;
        const int clo = static_cast<int>(f.analysis_lowpass.size()) / 2;
        f.synthesis_lowpass.resize(f.analysis_highpass.size());
        for (std::size_t k = 0; k < f.analysis_highpass.size(); ++k)
            f.synthesis_lowpass[k] =
                ((static_cast<int>(k) - chi) % 2 == 0 ? 1.0 : -1.0) * f.analysis_highpass[k];
        f.synthesis_highpass.resize(f.analysis_lowpass.size());
        for (std::size_t k = 0; k < f.analysis_lowpass.size(); ++k)
            f.synthesis_highpass[k] =
                ((static_cast<int>(k) - clo) % 2 == 0 ? 1.0 : -1.0) * f.analysis_lowpass[k];
    }
    f.validate();
    return f;
}

void WaveletFilter::validate() const {
    for (const auto* v : {&analysis_lowpass, &analysis_highpass, &synthesis_lowpass, &synthesis_highpass}) {
        if (v->empty() || v->size() % 2 == 0)
            throw ValidationError("WaveletFilter: filters must be odd-length and non-empty");
    }
    // Perfect-reconstruction round trip on a fixed pseudo-random signal.
    Rng rng(0x57415645u);
    const int n = 32;
    Texture x(1, n, 1);
    for (auto& v : x.data()) v = static_cast<float>(rng.uniform(-1.0, 1.0));
    const Subbands2d sb = [&] {
        Texture x2(2, n, 1);
        for (int i = 0; i < n; ++i) {
            x2.at(0, i, 0) = x.at(0, i, 0);
            x2.at(1, i, 0) = x.at(0, i, 0);
        }
        return dwt2(x2, *this);
    }();
    const Texture back = idwt2(sb, *this);
    double max_err = 0.0, max_abs = 0.0;
    for (int i = 0; i < n; ++i) {
        max_err = std::max(max_err, std::abs(static_cast<double>(back.at(0, i, 0)) - x.at(0, i, 0)));
        max_abs = std::max(max_abs, std::abs(static_cast<double>(x.at(0, i, 0))));
    }
    if (max_err > 1e-5 * max_abs)
        throw ValidationError("WaveletFilter: filter bank fails perfect reconstruction (rel err " +
                              std::to_string(max_err / max_abs) + ")");
}

double WaveletFilter::synthesis_dc_gain() const {
    const int c = static_cast<int>(synthesis_lowpass.size()) / 2;
    double even = 0.0;
    for (std::size_t k = 0; k < synthesis_lowpass.size(); ++k)
        if ((static_cast<int>(k) - c) % 2 == 0) even += synthesis_lowpass[k];
    return even;
}

Subbands2d dwt2(const Texture& tex, const WaveletFilter& filter) {
    require_even(tex, "dwt2");
    const int h = tex.height(), w = tex.width(), ch = tex.channels();
    const int hw = w / 2, hh = h / 2;

    // Pass 1: rows (along x). Channel-innermost layout means each (row, channel)
    // line has stride = channels.
    Texture lo_x(h, hw, ch), hi_x(h, hw, ch);
    for (int y = 0; y < h; ++y) {
        for (int c = 0; c < ch; ++c) {
            const float* src = tex.data().data() + (static_cast<std::size_t>(y) * w) * ch + c;
            float* lo = lo_x.data().data() + (static_cast<std::size_t>(y) * hw) * ch + c;
            float* hi = hi_x.data().data() + (static_cast<std::size_t>(y) * hw) * ch + c;
            analyze_line(src, w, ch, filter, lo, hi, ch);
        }
    }

    // Pass 2: columns (along y); stride = width * channels.
    Subbands2d out{Texture(hh, hw, ch), Texture(hh, hw, ch), Texture(hh, hw, ch), Texture(hh, hw, ch)};
    const std::ptrdiff_t col_stride = static_cast<std::ptrdiff_t>(hw) * ch;
    for (int x = 0; x < hw; ++x) {
        for (int c = 0; c < ch; ++c) {
            const std::ptrdiff_t off = static_cast<std::ptrdiff_t>(x) * ch + c;
            analyze_line(lo_x.data().data() + off, h, col_stride, filter,
                         out.ll.data().data() + off, out.lh.data().data() + off, col_stride);
            analyze_line(hi_x.data().data() + off, h, col_stride, filter,
                         out.hl.data().data() + off, out.hh.data().data() + off, col_stride);
        }
    }
    return out;
}

namespace {

Texture idwt2_impl(const Texture& ll, const DetailTriple* d, const WaveletFilter& filter) {
    const int hh = ll.height(), hw = ll.width(), ch = ll.channels();
    if (d != nullptr) {
        for (const Texture* b : d->bands())
            if (!b->same_shape(ll)) throw ValidationError("idwt2: subband shape mismatch");
    }
    const int h = hh * 2, w = hw * 2;
    const std::ptrdiff_t col_stride = static_cast<std::ptrdiff_t>(hw) * ch;

    // Inverse column pass: (ll, lh) -> L, (hl, hh) -> H.
    Texture lo_x(h, hw, ch);
    Texture hi_x = d ? Texture(h, hw, ch) : Texture();
    for (int x = 0; x < hw; ++x) {
        for (int c = 0; c < ch; ++c) {
            const std::ptrdiff_t off = static_cast<std::ptrdiff_t>(x) * ch + c;
            synthesize_line(ll.data().data() + off, d ? d->lh.data().data() + off : nullptr,
                            hh, col_stride, filter, lo_x.data().data() + off, col_stride);
            if (d)
                synthesize_line(d->hl.data().data() + off, d->hh.data().data() + off,
                                hh, col_stride, filter, hi_x.data().data() + off, col_stride);
        }
    }

    // Inverse row pass.
    Texture out(h, w, ch);
    for (int y = 0; y < h; ++y) {
        for (int c = 0; c < ch; ++c) {
            const std::ptrdiff_t lo_off = (static_cast<std::ptrdiff_t>(y) * hw) * ch + c;
            const std::ptrdiff_t out_off = (static_cast<std::ptrdiff_t>(y) * w) * ch + c;
            synthesize_line(lo_x.data().data() + lo_off,
                            d ? hi_x.data().data() + lo_off : nullptr,
                            hw, ch, filter, out.data().data() + out_off, ch);
        }
    }
    return out;
}

}  // namespace

Texture idwt2(const Subbands2d& sb, const WaveletFilter& filter) {
    DetailTriple d{sb.lh, sb.hl, sb.hh};
    return idwt2_impl(sb.ll, &d, filter);
}

Texture idwt2(const Texture& ll, const DetailTriple& d, const WaveletFilter& filter) {
    return idwt2_impl(ll, &d, filter);
}

Texture idwt2_lowpass_only(const Texture& ll, const WaveletFilter& filter) {
    return idwt2_impl(ll, nullptr, filter);
}

WaveletPyramid dwt_multilevel(const Texture& tex, int levels, const WaveletFilter& filter) {
    if (levels < 0) throw ValidationError("dwt_multilevel: negative level count");
    const int div = 1 << levels;
    if (tex.height() % div != 0 || tex.width() % div != 0)
        throw ValidationError("dwt_multilevel: dimensions " + std::to_string(tex.height()) + "x" +
                              std::to_string(tex.width()) + " not divisible by 2^" + std::to_string(levels));
    WaveletPyramid pyr;
    pyr.details.reserve(static_cast<std::size_t>(levels));
    Texture cur = tex;
    for (int l = 0; l < levels; ++l) {
        Subbands2d sb = dwt2(cur, filter);
        pyr.details.push_back(DetailTriple{std::move(sb.lh), std::move(sb.hl), std::move(sb.hh)});
        cur = std::move(sb.ll);
    }
    pyr.ll = std::move(cur);
    return pyr;
}

Texture idwt_multilevel(const WaveletPyramid& pyr, const WaveletFilter& filter) {
    Texture cur = pyr.ll;
    for (int l = pyr.levels() - 1; l >= 0; --l)
        cur = idwt2(cur, pyr.details[static_cast<std::size_t>(l)], filter);
    return cur;
}

Texture idwt_partial(const Texture& ll3, const DetailTriple& d3, const DetailTriple& d2,
                     const Texture& static_offset, const WaveletFilter& filter) {
    Texture cur = idwt2(ll3, d3, filter);
    cur = idwt2(cur, d2, filter);
    cur = idwt2_lowpass_only(cur, filter);
    cur = idwt2_lowpass_only(cur, filter);
    if (!cur.same_shape(static_offset))
        throw ValidationError("idwt_partial: static offset shape mismatch");
    for (std::size_t i = 0; i < cur.size(); ++i) cur.data()[i] += static_offset.data()[i];
    return cur;
}

Texture precompute_static_offset(const DetailTriple& d1_mean, const DetailTriple& d0_mean,
                                 int out_height, int out_width, const WaveletFilter& filter) {
    const Texture& d1 = d1_mean.lh;
    if (d1.height() * 4 != out_height || d1.width() * 4 != out_width)
        throw ValidationError("precompute_static_offset: level-1 means inconsistent with output shape");
    if (d0_mean.lh.height() * 2 != out_height || d0_mean.lh.width() * 2 != out_width)
        throw ValidationError("precompute_static_offset: level-0 means inconsistent with output shape");
    Texture zeros(d1.height(), d1.width(), d1.channels());
    Texture a = idwt2(zeros, d1_mean, filter);
    return idwt2(a, d0_mean, filter);
}

}  // namespace wavesplat
