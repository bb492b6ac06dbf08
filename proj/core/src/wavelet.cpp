#include <fractex/wavelet.hpp>

#include <fractex/errors.hpp>
#include <fractex/pgm.hpp>

#include <cstddef>
#include <utility>

namespace fractex {

namespace {

inline int wrap_periodic(int i, int n) {
    int m = i % n;
    return m < 0 ? m + n : m;
}

// Half-sample reflection: ... x1 x0 | x0 x1 ... xN-1 | xN-1 ... period 2N.
inline int wrap_symmetric(int i, int n) {
    const int period = 2 * n;
    int m = i % period;
    if (m < 0) m += period;
    return m < n ? m : period - 1 - m;
}

inline int wrap(int i, int n, BoundaryMode b) {
    return b == BoundaryMode::kPeriodic ? wrap_periodic(i, n) : wrap_symmetric(i, n);
}

// out[n] = sum_k h[k] x[n + s k] along the chosen axis (analysis direction).
GrayImage filter_rows(const GrayImage& in, const std::array<double, 8>& h, int stride,
                      BoundaryMode b) {
    const int w = in.width();
    const int hgt = in.height();
    GrayImage out(w, hgt);
    for (int y = 0; y < hgt; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int k = 0; k < 8; ++k) {
                acc += h[k] * in.at(wrap(x + stride * k, w, b), y);
            }
            out.at(x, y) = acc;
        }
    }
    return out;
}

GrayImage filter_cols(const GrayImage& in, const std::array<double, 8>& h, int stride,
                      BoundaryMode b) {
    const int w = in.width();
    const int hgt = in.height();
    GrayImage out(w, hgt);
    for (int y = 0; y < hgt; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int k = 0; k < 8; ++k) {
                acc += h[k] * in.at(x, wrap(y + stride * k, hgt, b));
            }
            out.at(x, y) = acc;
        }
    }
    return out;
}

// Adjoint pair merge along columns: out = (h0* a + h1* d) / 2 with the
// synthesis indexing x[n - s k].
GrayImage merge_cols(const GrayImage& a, const GrayImage& d, const FilterPair& f, int stride,
                     BoundaryMode b) {
    const int w = a.width();
    const int hgt = a.height();
    GrayImage out(w, hgt);
    for (int y = 0; y < hgt; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int k = 0; k < 8; ++k) {
                const int yy = wrap(y - stride * k, hgt, b);
                acc += f.h0[k] * a.at(x, yy) + f.h1[k] * d.at(x, yy);
            }
            out.at(x, y) = 0.5 * acc;
        }
    }
    return out;
}

GrayImage merge_rows(const GrayImage& a, const GrayImage& d, const FilterPair& f, int stride,
                     BoundaryMode b) {
    const int w = a.width();
    const int hgt = a.height();
    GrayImage out(w, hgt);
    for (int y = 0; y < hgt; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int k = 0; k < 8; ++k) {
                const int xx = wrap(x - stride * k, w, b);
                acc += f.h0[k] * a.at(xx, y) + f.h1[k] * d.at(xx, y);
            }
            out.at(x, y) = 0.5 * acc;
        }
    }
    return out;
}

} // namespace

const char* to_string(Quadrant q) {
    switch (q) {
        case Quadrant::LL: return "LL";
        case Quadrant::LH: return "LH";
        case Quadrant::HL: return "HL";
        case Quadrant::HH: return "HH";
    }
    throw Error("to_string(Quadrant): invalid value");
}

Quadrant quadrant_from_string(const std::string& name) {
    if (name == "LL") return Quadrant::LL;
    if (name == "LH") return Quadrant::LH;
    if (name == "HL") return Quadrant::HL;
    if (name == "HH") return Quadrant::HH;
    throw PreconditionError("unknown quadrant label: " + name);
}

FilterPair db8_filters() {
    FilterPair f;
    f.h0 = {0.2303778133088965,    0.7148465705529157,   0.6308807679298589,
            -0.027983769416859854, -0.18703481171909309, 0.030841381835560764,
            0.0328830116668852,    -0.010597401785069032};
    for (int k = 0; k < 8; ++k) {
        f.h1[k] = (k % 2 == 0 ? 1.0 : -1.0) * f.h0[7 - k];
    }
    return f;
}

const GrayImage& SubbandSet::band(Quadrant q) const {
    switch (q) {
        case Quadrant::LL: return ll;
        case Quadrant::LH: return lh;
        case Quadrant::HL: return hl;
        case Quadrant::HH: return hh;
    }
    throw Error("SubbandSet::band: invalid quadrant");
}

GrayImage& SubbandSet::band(Quadrant q) {
    return const_cast<GrayImage&>(static_cast<const SubbandSet&>(*this).band(q));
}

SubbandSet analyze_level(const GrayImage& img, const FilterPair& filters, int level,
                         BoundaryMode boundary, std::vector<Quadrant> parent_path) {
    if (level < 1) throw PreconditionError("analyze_level: level must be >= 1");
    validate_image(img, "analyze_level");
    const int stride = 1 << (level - 1);
    const int support = 7 * stride + 1;
    if (support > img.width() || support > img.height()) {
        throw PreconditionError("analyze_level: upsampled filter support " +
                                std::to_string(support) + " exceeds image " +
                                std::to_string(img.width()) + "x" + std::to_string(img.height()) +
                                " at level " + std::to_string(level));
    }

    GrayImage lo = filter_rows(img, filters.h0, stride, boundary);
    GrayImage hi = filter_rows(img, filters.h1, stride, boundary);

    SubbandSet sub{.ll = filter_cols(lo, filters.h0, stride, boundary),
                   .lh = filter_cols(lo, filters.h1, stride, boundary),
                   .hl = filter_cols(hi, filters.h0, stride, boundary),
                   .hh = filter_cols(hi, filters.h1, stride, boundary),
                   .level = level,
                   .path = std::move(parent_path)};
    return sub;
}

GrayImage reconstruct_level(const SubbandSet& sub, const FilterPair& filters,
                            BoundaryMode boundary) {
    if (!sub.ll.same_shape(sub.lh) || !sub.ll.same_shape(sub.hl) || !sub.ll.same_shape(sub.hh)) {
        throw PreconditionError("reconstruct_level: subband dimensions differ");
    }
    if (sub.level < 1) throw PreconditionError("reconstruct_level: level must be >= 1");
    const int stride = 1 << (sub.level - 1);
    GrayImage lo = merge_cols(sub.ll, sub.lh, filters, stride, boundary);
    GrayImage hi = merge_cols(sub.hl, sub.hh, filters, stride, boundary);
    return merge_rows(lo, hi, filters, stride, boundary);
}

void dump_subbands(const SubbandSet& sub, const std::filesystem::path& dir,
                   const std::string& stem) {
    for (Quadrant q : kQuadrants) {
        const std::string name =
            stem + "_L" + std::to_string(sub.level) + "_" + to_string(q) + ".pgm";
        write_pgm_file(rescale_unit(sub.band(q)), dir / name);
    }
}

} // namespace fractex
