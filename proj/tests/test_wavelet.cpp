#include <fractex/wavelet.hpp>

#include <doctest.h>

#include "test_support.hpp"

#include <cmath>
#include <filesystem>

using namespace fractex;

namespace {

double max_abs_diff(const GrayImage& a, const GrayImage& b) {
    double worst = 0.0;
    for (int y = 0; y < a.height(); ++y) {
        for (int x = 0; x < a.width(); ++x) {
            worst = std::max(worst, std::abs(a.at(x, y) - b.at(x, y)));
        }
    }
    return worst;
}

double sum_squares(const GrayImage& img) {
    double s = 0.0;
    for (double v : img.pixels()) s += v * v;
    return s;
}

GrayImage cyclic_shift(const GrayImage& img, int sx, int sy) {
    GrayImage out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            out.at((x + sx) % img.width(), (y + sy) % img.height()) = img.at(x, y);
        }
    }
    return out;
}

} // namespace

TEST_CASE("db8 filter pair satisfies the defining identities") {
    const FilterPair f = db8_filters();
    double sum = 0.0;
    for (double c : f.h0) sum += c;
    CHECK(std::abs(sum - std::sqrt(2.0)) <= 1e-12);

    for (int m = 0; m <= 3; ++m) {
        double dot = 0.0;
        for (int k = 0; k + 2 * m < 8; ++k) dot += f.h0[k] * f.h0[k + 2 * m];
        CHECK(std::abs(dot - (m == 0 ? 1.0 : 0.0)) <= 1e-12);
    }

    for (int k = 0; k < 8; ++k) {
        CHECK(f.h1[k] == (k % 2 == 0 ? 1.0 : -1.0) * f.h0[7 - k]);
    }
    CHECK(f.h1[0] == f.h0[7]);
    CHECK(f.h1[1] == -f.h0[6]);

    double hsum = 0.0;
    for (double c : f.h1) hsum += c;
    CHECK(std::abs(hsum) <= 1e-12);
}

TEST_CASE("quadrant labels round-trip through strings") {
    for (Quadrant q : kQuadrants) {
        CHECK(quadrant_from_string(to_string(q)) == q);
    }
    CHECK_THROWS_AS(quadrant_from_string("XX"), PreconditionError);
}

TEST_CASE("constant image concentrates in ll with gain 2") {
    const FilterPair f = db8_filters();
    const SubbandSet sub = analyze_level(GrayImage(16, 16, 0.5), f, 1);
    for (double v : sub.ll.pixels()) CHECK(std::abs(v - 1.0) <= 1e-12);
    for (double v : sub.lh.pixels()) CHECK(std::abs(v) <= 1e-12);
    for (double v : sub.hl.pixels()) CHECK(std::abs(v) <= 1e-12);
    for (double v : sub.hh.pixels()) CHECK(std::abs(v) <= 1e-12);
}

TEST_CASE("subbands keep the input dimensions at every level") {
    const FilterPair f = db8_filters();
    const GrayImage img = testsupport::random_image(64, 32, 5);
    for (int level = 1; level <= 2; ++level) {
        const SubbandSet sub = analyze_level(img, f, level);
        CHECK(sub.ll.same_shape(img));
        CHECK(sub.lh.same_shape(img));
        CHECK(sub.hl.same_shape(img));
        CHECK(sub.hh.same_shape(img));
        CHECK(sub.level == level);
        CHECK(sub.path.empty());
    }
}

TEST_CASE("energy splits with factor 4 under periodic extension") {
    const GrayImage img = testsupport::random_image(64, 64, 9);
    const FilterPair f = db8_filters();
    const SubbandSet sub = analyze_level(img, f, 1);
    const double total =
        sum_squares(sub.ll) + sum_squares(sub.lh) + sum_squares(sub.hl) + sum_squares(sub.hh);
    const double expect = 4.0 * sum_squares(img);
    CHECK(std::abs(total - expect) / expect <= 1e-6);
}

TEST_CASE("analyze then reconstruct is the identity at levels 1 to 3") {
    const FilterPair f = db8_filters();
    for (uint64_t seed = 0; seed < 10; ++seed) {
        const GrayImage img = testsupport::random_image(64, 64, 100 + seed);
        for (int level = 1; level <= 3; ++level) {
            const SubbandSet sub = analyze_level(img, f, level);
            const GrayImage back = reconstruct_level(sub, f);
            CHECK(max_abs_diff(img, back) <= 1e-8);
        }
    }
}

TEST_CASE("constant image round-trips exactly") {
    const FilterPair f = db8_filters();
    const GrayImage img(32, 32, 0.25);
    const GrayImage back = reconstruct_level(analyze_level(img, f, 1), f);
    CHECK(max_abs_diff(img, back) <= 1e-10);
}

TEST_CASE("all-zero subbands reconstruct to zero") {
    const FilterPair f = db8_filters();
    SubbandSet sub{GrayImage(16, 16), GrayImage(16, 16), GrayImage(16, 16), GrayImage(16, 16), 1,
                   {}};
    const GrayImage out = reconstruct_level(sub, f);
    for (double v : out.pixels()) CHECK(v == 0.0);
}

TEST_CASE("analysis commutes with periodic shifts") {
    const FilterPair f = db8_filters();
    const GrayImage img = testsupport::random_image(32, 32, 17);
    const SubbandSet direct = analyze_level(cyclic_shift(img, 5, 3), f, 1);
    const SubbandSet base = analyze_level(img, f, 1);
    for (Quadrant q : kQuadrants) {
        const GrayImage shifted = cyclic_shift(base.band(q), 5, 3);
        CHECK(max_abs_diff(direct.band(q), shifted) <= 1e-10);
    }
}

TEST_CASE("analysis is linear") {
    const FilterPair f = db8_filters();
    const GrayImage x = testsupport::random_image(32, 32, 21);
    const GrayImage y = testsupport::random_image(32, 32, 22);
    const double a = 2.5, b = -0.75;
    GrayImage combo(32, 32);
    for (int yy = 0; yy < 32; ++yy) {
        for (int xx = 0; xx < 32; ++xx) combo.at(xx, yy) = a * x.at(xx, yy) + b * y.at(xx, yy);
    }
    const SubbandSet sc = analyze_level(combo, f, 1);
    const SubbandSet sx = analyze_level(x, f, 1);
    const SubbandSet sy = analyze_level(y, f, 1);
    for (Quadrant q : kQuadrants) {
        double worst = 0.0;
        for (int yy = 0; yy < 32; ++yy) {
            for (int xx = 0; xx < 32; ++xx) {
                const double expect = a * sx.band(q).at(xx, yy) + b * sy.band(q).at(xx, yy);
                worst = std::max(worst, std::abs(sc.band(q).at(xx, yy) - expect));
            }
        }
        CHECK(worst <= 1e-10);
    }
}

TEST_CASE("quadrant letters map to row and column filters") {
    // A pure horizontal oscillation has all of its detail content along
    // x, so the H-along-rows subbands (HL, HH in row-column order) carry
    // the energy after highpass filtering along rows only.
    const FilterPair f = db8_filters();
    GrayImage img(32, 32);
    for (int y = 0; y < 32; ++y) {
        for (int x = 0; x < 32; ++x) img.at(x, y) = (x % 2 == 0) ? 1.0 : -1.0;
    }
    const SubbandSet sub = analyze_level(img, f, 1);
    CHECK(sum_squares(sub.hl) > 100.0 * sum_squares(sub.lh));
    CHECK(sum_squares(sub.ll) <= 1e-12);
    CHECK(sum_squares(sub.hh) <= 1e-12);
}

TEST_CASE("upsampled support larger than the image is rejected") {
    const FilterPair f = db8_filters();
    const GrayImage img = testsupport::random_image(16, 16, 30);
    CHECK_NOTHROW(analyze_level(img, f, 2));  // support 15 <= 16
    CHECK_THROWS_AS(analyze_level(img, f, 3), PreconditionError); // support 29 > 16
    CHECK_THROWS_AS(analyze_level(img, f, 0), PreconditionError);
}

TEST_CASE("symmetric boundary mode stays finite and keeps shape") {
    const FilterPair f = db8_filters();
    const GrayImage img = testsupport::random_image(32, 32, 33);
    const SubbandSet sub = analyze_level(img, f, 1, BoundaryMode::kSymmetric);
    CHECK(sub.ll.same_shape(img));
    CHECK(sub.ll.all_finite());
    // Away from the border the two extension rules agree.
    const SubbandSet periodic = analyze_level(img, f, 1, BoundaryMode::kPeriodic);
    double interior_diff = 0.0;
    for (int y = 8; y < 24; ++y) {
        for (int x = 8; x < 24; ++x) {
            interior_diff =
                std::max(interior_diff, std::abs(sub.ll.at(x, y) - periodic.ll.at(x, y)));
        }
    }
    CHECK(interior_diff <= 1e-12);
}

TEST_CASE("reconstruct_level rejects mismatched subbands") {
    const FilterPair f = db8_filters();
    SubbandSet sub{GrayImage(16, 16), GrayImage(16, 16), GrayImage(16, 16), GrayImage(8, 16), 1,
                   {}};
    CHECK_THROWS_AS(reconstruct_level(sub, f), PreconditionError);
}

TEST_CASE("dump_subbands writes four rescaled pgm files") {
    testsupport::TempDir tmp;
    const FilterPair f = db8_filters();
    const SubbandSet sub = analyze_level(testsupport::random_image(16, 16, 40), f, 1);
    dump_subbands(sub, tmp.path(), "img");
    for (const char* name : {"img_L1_LL.pgm", "img_L1_LH.pgm", "img_L1_HL.pgm", "img_L1_HH.pgm"}) {
        CHECK(std::filesystem::exists(tmp.path() / name));
    }
}
